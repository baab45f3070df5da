"""Regenerate the offline fixtures in this directory.

All series here are synthetic stand-ins shaped like the real provider
payloads (World Bank v2 indicator JSON, Yahoo Finance daily CSV). They are
not market or statistical-agency data. The India file pins one documented
observation, 28.6% for 1974, and leaves 2024 null as a recent
not-yet-published year.

    python fixtures/make_fixtures.py
"""

import json
from datetime import date, timedelta
from pathlib import Path

import numpy as np

HERE = Path(__file__).parent
INDICATOR = {"id": "FP.CPI.TOTL.ZG", "value": "Inflation, consumer prices (annual %)"}


def worldbank_payload(country_id, iso3, name, years, values):
    entries = []
    # the live API lists the newest year first
    for y, v in sorted(zip(years, values), reverse=True):
        entries.append({
            "indicator": INDICATOR,
            "country": {"id": country_id, "value": name},
            "countryiso3code": iso3,
            "date": str(y),
            "value": None if v is None else round(float(v), 3),
            "unit": "",
            "obs_status": "",
            "decimal": 1,
        })
    meta = {"page": 1, "pages": 1, "per_page": 20000, "total": len(entries),
            "sourceid": "2", "lastupdated": "2025-01-28"}
    return [meta, entries]


def inflation_path(rng, years, mean, phi, sigma, shocks):
    x, out = mean, []
    for y in years:
        x = mean + phi * (x - mean) + rng.normal(0, sigma) + shocks.get(y, 0.0)
        out.append(max(x, -1.5))
    return out


def ohlcv_csv(rng, start, n, price0, drift, vol, path):
    lines = ["Date,Open,High,Low,Close,Adj Close,Volume"]
    d = start
    close = price0
    k = 0
    while k < n:
        if d.weekday() < 5:
            ret = drift + vol * rng.standard_normal()
            open_ = close * (1 + 0.3 * vol * rng.standard_normal())
            close = close * float(np.exp(ret))
            hi = max(open_, close) * (1 + abs(0.5 * vol * rng.standard_normal()))
            lo = min(open_, close) * (1 - abs(0.5 * vol * rng.standard_normal()))
            vol_shares = int(rng.integers(40_000_000, 160_000_000))
            lines.append(f"{d.isoformat()},{open_:.6f},{hi:.6f},{lo:.6f},{close:.6f},"
                         f"{close * 0.985:.6f},{vol_shares}")
            k += 1
        d += timedelta(days=1)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def main():
    rng = np.random.default_rng(20250215)

    years = list(range(1960, 2025))
    india = inflation_path(rng, years, 7.2, 0.45, 2.6,
                           {1967: 6.0, 1973: 8.0, 1980: 6.0, 1991: 5.0, 2009: 3.5})
    india = [None if y == 2024 else v for y, v in zip(years, india)]
    india[years.index(1974)] = 28.6
    india[years.index(1975)] = 5.7
    (HERE / "in.json").write_text(
        json.dumps(worldbank_payload("IN", "IND", "India", years, india), indent=1) + "\n")

    us = inflation_path(rng, years, 3.6, 0.75, 1.1, {1974: 4.0, 1979: 4.0, 1980: 2.0, 2021: 3.0})
    us = [None if y == 2024 else v for y, v in zip(years, us)]
    (HERE / "us.json").write_text(
        json.dumps(worldbank_payload("US", "USA", "United States", years, us), indent=1) + "\n")

    flat_years = list(range(1990, 2021))
    (HERE / "constant.json").write_text(
        json.dumps(worldbank_payload("XC", "XCX", "Constant", flat_years, [3.0] * len(flat_years)),
                   indent=1) + "\n")

    # shape returned for an unknown country code
    (HERE / "zzz.json").write_text(json.dumps([{"message": [{
        "id": "120", "key": "Invalid value",
        "value": "The provided parameter value is not valid"}]}], indent=1) + "\n")

    ohlcv_csv(rng, date(2020, 1, 2), 1000, 75.09, 0.0009, 0.018, HERE / "AAPL.csv")
    ohlcv_csv(rng, date(2020, 1, 2), 1000, 68.43, 0.0007, 0.017, HERE / "GOOGL.csv")

    (HERE / "scripted_chat.json").write_text(json.dumps({"replies": [
        "DRAFT: To add memory to a crew, set memory=True when you build the Crew. "
        "The crew then keeps short-term, long-term and entity memory for its agents.",
        "FINAL: Hi Andrew, to add memory to your crew pass memory=True when creating the "
        "Crew object. This enables short-term, long-term and entity memory, so agents can "
        "recall earlier steps and facts about the people they help. Let us know if you "
        "need an example!",
    ]}, indent=1) + "\n")


if __name__ == "__main__":
    main()
