"""Fetching and parsing of World Bank indicator JSON and Yahoo-style OHLCV CSV."""

from __future__ import annotations

import csv
import io
import json
import math
from collections import defaultdict
from dataclasses import dataclass
from datetime import date
from typing import Iterable, Optional, Sequence

import numpy as np
import requests

from .errors import HttpStatusError, NetworkError, NoData, ParseError

WORLDBANK_BASE_URL = "https://api.worldbank.org/v2"
DEFAULT_INDICATOR = "FP.CPI.TOTL.ZG"  # Inflation, consumer prices (annual %)
DEFAULT_TIMEOUT = 30.0


@dataclass(frozen=True)
class DatedSeries:
    """Ordered ``(date, value)`` observations with strictly increasing dates."""

    points: tuple[tuple[date, float], ...]

    def __post_init__(self):
        pts = tuple((d, float(v)) for d, v in self.points)
        if not pts:
            raise NoData("a DatedSeries needs at least one point")
        for i, (d, v) in enumerate(pts):
            if not math.isfinite(v):
                raise ParseError(f"non-finite value {v!r} at {d}")
            if i and d <= pts[i - 1][0]:
                raise ParseError(f"dates not strictly increasing at {d}")
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_pairs(cls, dates: Iterable[date], values: Iterable[float]) -> "DatedSeries":
        return cls(tuple(zip(dates, values)))

    def __len__(self):
        return len(self.points)

    @property
    def dates(self) -> list[date]:
        return [d for d, _ in self.points]

    @property
    def values(self) -> np.ndarray:
        return np.array([v for _, v in self.points], dtype=np.float64)


@dataclass(frozen=True)
class OhlcvRow:
    date: date
    open: float
    high: float
    low: float
    close: float
    volume: int
    adj_close: Optional[float] = None


@dataclass(frozen=True)
class OhlcvSeries:
    rows: tuple[OhlcvRow, ...]

    def __post_init__(self):
        rows = tuple(self.rows)
        for i, r in enumerate(rows):
            prices = (r.open, r.high, r.low, r.close)
            if not all(math.isfinite(p) and p > 0 for p in prices):
                raise ParseError(f"non-positive or non-finite price on {r.date}")
            if r.high < r.low:
                raise ParseError(f"high < low on {r.date}")
            if r.volume < 0:
                raise ParseError(f"negative volume on {r.date}")
            if i and r.date <= rows[i - 1].date:
                raise ParseError(f"dates not strictly increasing at {r.date}")
        object.__setattr__(self, "rows", rows)

    def __len__(self):
        return len(self.rows)


# -- World Bank ---------------------------------------------------------------

def worldbank_url(country_code: str, indicator: str = DEFAULT_INDICATOR,
                  base_url: str = WORLDBANK_BASE_URL) -> str:
    return (f"{base_url.rstrip('/')}/country/{country_code}/indicator/{indicator}"
            "?format=json&per_page=20000")


def fetch_worldbank_series(country_code: str, indicator: str = DEFAULT_INDICATOR, *,
                           base_url: str = WORLDBANK_BASE_URL,
                           timeout: float = DEFAULT_TIMEOUT) -> bytes:
    """Download the raw indicator response for one country.

    Returns the response body untouched; use :func:`parse_worldbank_json`
    to turn it into a series.
    """
    if not country_code or not country_code.strip():
        raise ValueError("country_code must be non-empty")
    url = worldbank_url(country_code.strip(), indicator, base_url)
    try:
        resp = requests.get(url, timeout=timeout)
    except requests.RequestException as exc:
        raise NetworkError(url, exc) from exc
    if resp.status_code != 200:
        raise HttpStatusError(resp.status_code, url)
    return resp.content


def parse_worldbank_json(body: bytes | str) -> DatedSeries:
    """Parse a World Bank v2 indicator response into an annual series.

    Entries with a null value are dropped. Each ``"YYYY"`` date becomes
    January 1 of that year.
    """
    try:
        doc = json.loads(body)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ParseError(f"malformed JSON: {exc}") from exc

    if not isinstance(doc, list) or not doc:
        raise ParseError("expected a top-level [metadata, data] array")
    meta = doc[0]
    if not isinstance(meta, dict):
        raise ParseError("first element is not a metadata object")
    if "message" in meta:
        # error envelope, e.g. an unknown country code
        raise NoData(f"World Bank API returned no data: {meta['message']}")
    if len(doc) != 2:
        raise ParseError(f"expected 2 top-level elements, got {len(doc)}")
    pages = meta.get("pages", 1)
    if isinstance(pages, (int, str)) and int(pages) > 1:
        raise ParseError(f"response spans {pages} pages; only single-page responses are supported")

    data = doc[1]
    if data is None:
        raise NoData("response carries no data entries")
    if not isinstance(data, list):
        raise ParseError("data element is not an array")

    by_year: dict[int, float] = {}
    for entry in data:
        if not isinstance(entry, dict) or "date" not in entry or "value" not in entry:
            raise ParseError(f"unexpected entry shape: {entry!r}")
        value = entry["value"]
        if value is None:
            continue
        try:
            year = int(str(entry["date"])[:4])
            value = float(value)
        except ValueError as exc:
            raise ParseError(f"bad entry {entry!r}") from exc
        if not math.isfinite(value):
            continue
        if year in by_year:
            raise ParseError(f"duplicate year {year}")
        by_year[year] = value

    if not by_year:
        raise NoData("no non-null observations")
    return DatedSeries(tuple((date(y, 1, 1), by_year[y]) for y in sorted(by_year)))


# -- Yahoo CSV ----------------------------------------------------------------

_NUMERIC = ("Open", "High", "Low", "Close", "Adj Close", "Volume")


def parse_yahoo_csv(text: str) -> OhlcvSeries:
    """Parse a Yahoo Finance daily export.

    Columns are located by header name. Rows with an empty or ``null``
    numeric field are dropped; duplicated dates are rejected.
    """
    reader = csv.reader(io.StringIO(text.lstrip("﻿")))
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise ParseError("missing header row") from None
    col = {name: i for i, name in enumerate(header)}
    if "Date" not in col or "Close" not in col:
        raise ParseError(f"header must contain Date and Close, got {header}")

    rows = []
    for lineno, rec in enumerate(reader, start=2):
        if not rec or all(not f.strip() for f in rec):
            continue
        if len(rec) < len(header):
            raise ParseError(f"line {lineno}: expected {len(header)} fields, got {len(rec)}")
        fields = {name: rec[i].strip() for name, i in col.items()}
        if any(fields.get(n, "x") in ("", "null") for n in _NUMERIC):
            continue
        try:
            day = date.fromisoformat(fields["Date"])
            close = float(fields["Close"])
            row = OhlcvRow(
                date=day,
                open=float(fields.get("Open", close)),
                high=float(fields.get("High", close)),
                low=float(fields.get("Low", close)),
                close=close,
                volume=int(float(fields.get("Volume", 0))),
                adj_close=float(fields["Adj Close"]) if "Adj Close" in fields else None,
            )
        except ValueError as exc:
            raise ParseError(f"line {lineno}: {exc}") from exc
        rows.append(row)

    if not rows:
        raise NoData("no valid data rows")
    rows.sort(key=lambda r: r.date)
    for a, b in zip(rows, rows[1:]):
        if a.date == b.date:
            raise ParseError(f"duplicate date {a.date}")
    return OhlcvSeries(tuple(rows))


def close_series(data: OhlcvSeries) -> DatedSeries:
    if not data.rows:
        raise NoData("empty OHLCV series")
    return DatedSeries(tuple((r.date, r.close) for r in data.rows))


def resample_annual(series: DatedSeries) -> DatedSeries:
    """Collapse to one year-start point per calendar year (mean of that year's values)."""
    buckets: dict[int, list[float]] = defaultdict(list)
    for d, v in series.points:
        buckets[d.year].append(v)
    return DatedSeries(tuple((date(y, 1, 1), _mean(buckets[y])) for y in sorted(buckets)))


def _mean(xs: Sequence[float]) -> float:
    return math.fsum(xs) / len(xs)
