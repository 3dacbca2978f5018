from __future__ import annotations

import pytest

from groundflow.corpus import CorpusStore, DirectorySource, ingest
from groundflow.dataset import build_all
from groundflow.fixtures import corpus_source_dir, load_manifest, registry_path
from groundflow.lecture import load_registry
from groundflow.ncen import NcenApis

PER_TIER = 40
DATASET_SEED = 7


@pytest.fixture(scope="session")
def fixture_store(tmp_path_factory) -> CorpusStore:
    root = tmp_path_factory.mktemp("corpus-store")
    store = CorpusStore(root)
    ingest(DirectorySource(corpus_source_dir()), store, workers=1)
    return store


@pytest.fixture(scope="session")
def apis(fixture_store) -> NcenApis:
    return NcenApis(fixture_store)


@pytest.fixture(scope="session")
def manifest() -> dict:
    return load_manifest()


@pytest.fixture(scope="session")
def registry():
    return load_registry(registry_path())


@pytest.fixture(scope="session")
def registry_arities(registry) -> dict[str, int]:
    return {d.name: len(d.params) for d in registry}


@pytest.fixture(scope="session")
def qa_items(apis):
    return build_all(apis, PER_TIER, DATASET_SEED)


@pytest.fixture(scope="session")
def pmf_custodian_item(apis):
    """Pinned item for the custodian-of-PRECIOUS-METALS-FUND flow."""
    from groundflow.dataset import Answer, AnswerKind, QaItem, Tier

    fund = "PRECIOUS METALS FUND"
    block = apis.fetch_block(apis.get_report(fund), fund)
    names = apis.extract_entity(block, "custodian")
    return QaItem(
        id="easy-pmf-custodian",
        tier=Tier.EASY,
        question=f"Who is the custodian for the {fund}?",
        answer=Answer(kind=AnswerKind.ENTITIES, entities=tuple(names)),
        relations=("custodian",),
        source_funds=(fund,),
        items_cited=("C.12",),
    )
