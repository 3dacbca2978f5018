#!/usr/bin/env python3
"""Regenerate the bundled fixture corpus under src/groundflow/fixtures/corpus/.

The corpus is small but deliberately awkward: duplicate funds across
filings of different vintage, funds with zero/one/two/three entities per
role, a zero-net-assets fund, shared service companies across trusts, and
near-miss fund-name families. Several figures are pinned:

* PRECIOUS METALS FUND custodian         U.S. BANK NATIONAL ASSOCIATION
* COLUMBIA ACORN USA custodian           JPMORGAN CHASE BANK, N.A.
* WCM SMALL CAP GROWTH FUND              gross commission 20338.0
* PROFUND VP INTERNET                    commission/net-assets rounds to 0.0001
* SIIT CORE FIXED INCOME FUND            purchase-sale/net-assets 7.6142 -> 7.61
* FEDERATED HERMES (UK) LLP              advises exactly two funds
* 2035/INTL GROWTH/NEBRASKA commissions  sum to 3280.33
"""

from __future__ import annotations

import json
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "src" / "groundflow" / "fixtures" / "corpus"

# Service companies, keyed by short handle: (display name, lei, state, country)
COMPANIES = {
    "usbank": ("U.S. BANK NATIONAL ASSOCIATION", "6BYL5QZYBDK8S7L73M02", "MN", "US"),
    "jpmorgan": ("JPMORGAN CHASE BANK, N.A.", "7H6GLXDRUGQFU57RNE97", "NY", "US"),
    "statestreet": ("STATE STREET BANK AND TRUST COMPANY", "571474TGEMMWANRLN572", "MA", "US"),
    "bnym": ("THE BANK OF NEW YORK MELLON", "HPFHU0OQ28E4N0NFVK49", "NY", "US"),
    "fifththird": ("FIFTH THIRD BANK, NATIONAL ASSOCIATION", "QFROUN1UWUYU0DVIWD51", "OH", "US"),
    "sierra": ("SIERRA GLOBAL ADVISORS LLC", "549300SIERRA00000A17", "CO", "US"),
    "wanger": ("COLUMBIA WANGER ASSET MANAGEMENT LLC", "549300WANGER00000B28", "IL", "US"),
    "wcm": ("WCM INVESTMENT MANAGEMENT LLC", "549300WCMIM000000C39", "CA", "US"),
    "profund_adv": ("PROFUND ADVISORS LLC", "549300PROFND00000D41", "MD", "US"),
    "sei_mgmt": ("SEI INVESTMENTS MANAGEMENT CORPORATION", "549300SEIMGT00000E52", "PA", "US"),
    "fed_uk": ("FEDERATED HERMES (UK) LLP", "549300FEDUK000000F63", "", "GB"),
    "mml": ("MML INVESTMENT ADVISERS LLC", "549300MMLADV00000G74", "MA", "US"),
    "lordabbett": ("LORD, ABBETT & CO. LLC", "549300LORDAB00000H85", "NJ", "US"),
    "cavanal": ("CAVANAL HILL INVESTMENT MANAGEMENT INC", "549300CAVANL00000I96", "OK", "US"),
    "vest": ("VEST FINANCIAL LLC", "549300VESTFN00000J07", "VA", "US"),
    "legacy_adv": ("LEGACY ASSET MANAGEMENT COMPANY", "549300LEGACY00000K18", "TX", "US"),
    "granite": ("GRANITE COLLATERAL SERVICES LLC", "549300GRANIT00000L29", "NY", "US"),
    "brookfield": ("BROOKFIELD COLLATERAL SOLUTIONS LLC", "549300BROOKF00000M31", "NY", "US"),
    "usb_fs": ("USB FUND SERVICES LLC", "549300USBFSV00000N42", "WI", "US"),
    "columbia_mis": ("COLUMBIA MANAGEMENT INVESTMENT SERVICES CORP", "549300COLMIS00000P53", "MA", "US"),
    "huntington": ("HUNTINGTON ASSET SERVICES INC", "549300HUNTAS00000Q64", "IN", "US"),
    "umb": ("UMB FUND SERVICES INC", "549300UMBFSV00000R75", "WI", "US"),
    "citi_oh": ("CITI FUND SERVICES OHIO INC", "549300CITIOH00000S86", "OH", "US"),
    "sei_gfs": ("SEI GLOBAL FUNDS SERVICES", "549300SEIGFS00000T97", "PA", "US"),
    "fed_admin": ("FEDERATED ADMINISTRATIVE SERVICES", "549300FEDADM00000U08", "PA", "US"),
    "mm_fs": ("MASSMUTUAL FUND SERVICES LLC", "549300MMFSVC00000V19", "MA", "US"),
    "legacy_fs": ("LEGACY FUND SERVICES INC", "549300LEGFSV00000W21", "TX", "US"),
    "ultimus": ("ULTIMUS FUND SOLUTIONS LLC", "549300ULTIMS00000X32", "OH", "US"),
    "ice": ("ICE DATA PRICING AND REFERENCE DATA LLC", "549300ICEDPR00000Y43", "MA", "US"),
    "bloomberg": ("BLOOMBERG FINANCE LP", "549300BLOOMB00000Z54", "NY", "US"),
    "refinitiv": ("REFINITIV US LLC", "549300REFINI00000A65", "NY", "US"),
}

ROLE_ITEMS = {
    "custodian": "C.12",
    "investment adviser": "C.11",
    "collateral manager": "C.6",
    "administrator": "C.14",
    "pricing service": "D.12",
}

# fund: (series_id, custodian, adviser, collateral[], admins[], pricing[], gc, tps, na)
FUNDS = {
    "PRECIOUS METALS FUND": (
        "S000004519", "usbank", "sierra", ["granite"], ["usb_fs"], ["ice"],
        "2450.00", "18250000.00", "24500000.00",
    ),
    "GREEN HORIZON BOND FUND": (
        "S000004527", "usbank", "sierra", [], ["usb_fs"], ["ice"],
        "880.25", "6400000.00", "1800000.00",
    ),
    "COLUMBIA ACORN USA": (
        "S000009184", "jpmorgan", "wanger", [], ["columbia_mis"], ["bloomberg"],
        "31518.00", "273400000.00", "45000000.00",
    ),
    "COLUMBIA ACORN INTERNATIONAL SELECT": (
        "S000009188", "jpmorgan", "wanger", [], ["columbia_mis", "huntington"], ["bloomberg"],
        "10442.00", "88700000.00", "14800000.00",
    ),
    "WCM SMALL CAP GROWTH FUND": (
        "S000061174", "usbank", "wcm", [], ["umb"], ["ice"],
        "20338.0", "121000000.00", "165000000.00",
    ),
    "WCM FOCUSED GLOBAL GROWTH FUND": (
        "S000041852", "usbank", "wcm", [], ["umb"], ["ice"],
        "5120.40", "46800000.00", "5190000.00",
    ),
    "PROFUND VP INTERNET": (
        "S000011536", "bnym", "profund_adv", [], ["citi_oh"], ["refinitiv"],
        "1047.00", "23400000.00", "10200000.00",
    ),
    "PROFUND VP UTILITIES": (
        "S000011548", "bnym", "profund_adv", [], ["citi_oh"], ["refinitiv"],
        "734.50", "9100000.00", "2450000.00",
    ),
    "SIIT CORE FIXED INCOME FUND": (
        "S000006418", "statestreet", "sei_mgmt", ["brookfield"], ["sei_gfs"], ["ice"],
        "15276.00", "913704000.00", "120000000.00",
    ),
    "SIIT DYNAMIC ASSET ALLOCATION FUND": (
        "S000006422", "statestreet", "sei_mgmt", [], ["sei_gfs"],
        ["ice", "bloomberg", "refinitiv"],
        "8912.75", "405600000.00", "6410000.00",
    ),
    "FEDERATED HERMES MANAGED VOLATILITY FUND II": (
        "S000009673", "fifththird", "fed_uk", [], ["fed_admin"], ["refinitiv"],
        "3205.16", "56300000.00", "3090000.00",
    ),
    "FEDERATED HERMES GLOBAL TOTAL RETURN BOND FUND": (
        "S000009677", "fifththird", "fed_uk", [], ["fed_admin"], ["refinitiv"],
        "2118.00", "34150000.00", "17800000.00",
    ),
    "MASSMUTUAL RETIRESMART BY JPMORGAN 2035 FUND": (
        "S000033712", "jpmorgan", "mml", [], ["mm_fs"], ["ice"],
        "1200.50", "40600000.00", "11800000.00",
    ),
    "MASSMUTUAL RETIRESMART BY JPMORGAN 2045 FUND": (
        "S000033716", "jpmorgan", "mml", [], ["mm_fs"], ["ice"],
        "1338.75", "46300000.00", "2700000.00",
    ),
    "LORD ABBETT INTERNATIONAL GROWTH FUND": (
        "S000006900", "statestreet", "lordabbett", [], ["statestreet"], ["bloomberg"],
        "1579.83", "51400000.00", "15600000.00",
    ),
    "LORD ABBETT SHORT DURATION INCOME FUND": (
        "S000006912", "statestreet", "lordabbett", ["granite"], ["statestreet"], ["bloomberg"],
        "2046.88", "73800000.00", "1910000.00",
    ),
    "NEBRASKA TAX-FREE INCOME FUND": (
        "S000023711", "fifththird", "cavanal", [], ["umb"], ["refinitiv"],
        "500.00", "16900000.00", "4830000.00",
    ),
    "PLATTE RIVER LIQUIDITY FUND": (
        "S000023715", "fifththird", "cavanal", [], ["umb"], ["refinitiv"],
        "125.00", "2100000.00", "0.00",
    ),
    "US EQUITY BUFFER FUND JANUARY": (
        "S000068231", "bnym", "vest", [], ["ultimus"], ["bloomberg"],
        "910.40", "4100000.00", "8900000.00",
    ),
    "US EQUITY BUFFER FUND FEBRUARY": (
        "S000068232", "bnym", "vest", [], ["ultimus"], ["bloomberg"],
        "1176.20", "5325000.00", "2350000.00",
    ),
    "US EQUITY BUFFER FUND APRIL": (
        "S000068234", "bnym", "vest", [], ["ultimus"], ["bloomberg"],
        "868.10", "3900000.00", "8300000.00",
    ),
    "LEGACY MONEY MARKET FUND": (
        "S000001222", "fifththird", "legacy_adv", [], ["legacy_fs"], ["refinitiv"],
        "310.00", "5200000.00", "6100000.00",
    ),
    # stale 2021 snapshot of PRECIOUS METALS FUND; same providers, older numbers
    "PRECIOUS METALS FUND@2021": (
        "S000004519", "usbank", "sierra", ["granite"], ["usb_fs"], ["ice"],
        "2388.00", "17100000.00", "23800000.00",
    ),
}

REPORTS = [
    ("0000897101-23-000215", "2023-04-12", "USB FUNDS TRUST",
     ["PRECIOUS METALS FUND", "GREEN HORIZON BOND FUND"]),
    ("0001133228-23-001970", "2023-03-28", "COLUMBIA ACORN TRUST",
     ["COLUMBIA ACORN USA", "COLUMBIA ACORN INTERNATIONAL SELECT"]),
    ("0000894189-23-002501", "2023-05-02", "WCM TRUST",
     ["WCM SMALL CAP GROWTH FUND", "WCM FOCUSED GLOBAL GROWTH FUND"]),
    ("0001003297-23-000190", "2023-02-17", "PROFUNDS VP TRUST",
     ["PROFUND VP INTERNET", "PROFUND VP UTILITIES"]),
    ("0001064642-23-000033", "2023-06-30", "SEI INSTITUTIONAL INVESTMENTS TRUST",
     ["SIIT CORE FIXED INCOME FUND", "SIIT DYNAMIC ASSET ALLOCATION FUND"]),
    ("0001318148-23-001156", "2023-01-25", "FEDERATED HERMES INSURANCE SERIES",
     ["FEDERATED HERMES MANAGED VOLATILITY FUND II",
      "FEDERATED HERMES GLOBAL TOTAL RETURN BOND FUND"]),
    ("0000916053-23-000488", "2023-04-03", "MASSMUTUAL SELECT FUNDS",
     ["MASSMUTUAL RETIRESMART BY JPMORGAN 2035 FUND",
      "MASSMUTUAL RETIRESMART BY JPMORGAN 2045 FUND"]),
    ("0000930413-23-001220", "2023-03-10", "LORD ABBETT SECURITIES TRUST",
     ["LORD ABBETT INTERNATIONAL GROWTH FUND", "LORD ABBETT SHORT DURATION INCOME FUND"]),
    ("0001437749-23-002965", "2023-02-08", "NEBRASKA FUNDS TRUST",
     ["NEBRASKA TAX-FREE INCOME FUND", "PLATTE RIVER LIQUIDITY FUND"]),
    ("0001213900-23-004187", "2023-05-19", "BUFFER SERIES TRUST",
     ["US EQUITY BUFFER FUND JANUARY", "US EQUITY BUFFER FUND FEBRUARY",
      "US EQUITY BUFFER FUND APRIL"]),
    ("0000897101-21-000180", "2021-04-15", "USB FUNDS TRUST",
     ["PRECIOUS METALS FUND@2021", "LEGACY MONEY MARKET FUND"]),
]


def entity_block(role: str, handle: str) -> str:
    name, lei, state, country = COMPANIES[handle]
    lines = [f'<entity role="{role}" item="{ROLE_ITEMS[role]}">']
    lines.append(f"  <name>{name}</name>")
    lines.append(f"  <lei>{lei}</lei>")
    if state:
        lines.append(f"  <state>{state}</state>")
    lines.append(f"  <country>{country}</country>")
    lines.append("</entity>")
    return "\n".join(lines)


def fund_section(fund_key: str) -> str:
    display = fund_key.split("@")[0]
    series, cust, adv, collateral, admins, pricing, gc, tps, na = FUNDS[fund_key]
    parts = [
        f"Item C.1. Fund name: {display}",
        f"Item C.2. Series identifier: {series}",
        entity_block("investment adviser", adv),
    ]
    parts.extend(entity_block("collateral manager", h) for h in collateral)
    parts.append(entity_block("custodian", cust))
    parts.extend(entity_block("administrator", h) for h in admins)
    parts.extend(entity_block("pricing service", h) for h in pricing)
    parts.append(f"Item C.15. Gross commission: {gc}")
    parts.append(f"Item C.16. Total purchase sale: {tps}")
    parts.append(f"Item C.17. Fund net assets: {na}")
    return "\n".join(parts)


def report_text(accession: str, filed: str, trust: str, fund_keys: list[str]) -> str:
    head = "\n".join(
        [
            "N-CEN ANNUAL REPORT",
            f"ACCESSION NUMBER: {accession}",
            f"FILED: {filed}",
            f"REGISTRANT: {trust}",
            "",
        ]
    )
    return head + "\n\n".join(fund_section(k) for k in fund_keys) + "\n"


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    for old in OUT.glob("*.txt"):
        old.unlink()
    manifest_reports = []
    for accession, filed, trust, fund_keys in REPORTS:
        text = report_text(accession, filed, trust, fund_keys)
        (OUT / f"{accession}.txt").write_text(text, encoding="utf-8")
        manifest_reports.append(
            {
                "accession": accession,
                "filed": filed,
                "registrant": trust,
                "funds": [k.split("@")[0] for k in fund_keys],
            }
        )
    distinct_funds = sorted({k.split("@")[0] for k in FUNDS})
    manifest = {
        "reports": manifest_reports,
        "report_count": len(manifest_reports),
        "fund_count": len(distinct_funds),
        "block_count": sum(len(r["funds"]) for r in manifest_reports),
        "funds": distinct_funds,
    }
    (OUT.parent / "manifest.json").write_text(
        json.dumps(manifest, indent=2) + "\n", encoding="utf-8"
    )
    print(f"wrote {len(manifest_reports)} reports, {len(distinct_funds)} funds -> {OUT}")


if __name__ == "__main__":
    main()
