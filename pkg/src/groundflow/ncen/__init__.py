from .api import FundBlock, NcenApis, Report
from .parsing import (
    FUND_NAME_LABEL,
    EntityRecord,
    Segment,
    ValueItem,
    parse_entities,
    parse_value_items,
    segment_text,
)

__all__ = [
    "FUND_NAME_LABEL",
    "EntityRecord",
    "FundBlock",
    "NcenApis",
    "Report",
    "Segment",
    "ValueItem",
    "parse_entities",
    "parse_value_items",
    "segment_text",
]
