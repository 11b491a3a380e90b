"""Price series data model: close-only bars in integer basis points.

All prices live on the tick grid and are stored as signed integers
(basis points = price / tick_size). Operations are pure; Series objects
are immutable after construction.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from datetime import datetime, timezone
from decimal import Decimal, InvalidOperation, ROUND_HALF_UP
from typing import IO, Iterator

import numpy as np

__all__ = [
    "Bar",
    "Series",
    "SampleSplit",
    "SeriesError",
    "MalformedRecord",
    "DuplicateTimestamp",
    "EmptyInput",
    "NonPositivePrice",
    "BadBoundaries",
    "EmptyPart",
    "parse_csv",
    "serialize",
    "price_change_bp",
    "split_samples",
    "randomize",
]

CSV_HEADER = ("timestamp", "close")


class SeriesError(ValueError):
    """Base class for series construction and ingestion errors."""


class MalformedRecord(SeriesError):
    def __init__(self, line_no: int, detail: str):
        super().__init__(f"line {line_no}: {detail}")
        self.line_no = line_no


class DuplicateTimestamp(SeriesError):
    pass


class EmptyInput(SeriesError):
    pass


class NonPositivePrice(SeriesError):
    def __init__(self, line_no: int, detail: str):
        super().__init__(f"line {line_no}: {detail}")
        self.line_no = line_no


class BadBoundaries(SeriesError):
    pass


class EmptyPart(SeriesError):
    pass


def parse_timestamp(text: str) -> int:
    """Parse an ISO-8601 UTC timestamp to epoch seconds.

    Accepts a trailing 'Z' or an explicit offset; naive timestamps are
    rejected. Sub-second precision is rejected (bars sit on a whole-second
    grid).
    """
    raw = text.strip()
    if raw.endswith("Z"):
        raw = raw[:-1] + "+00:00"
    dt = datetime.fromisoformat(raw)
    if dt.tzinfo is None:
        raise ValueError(f"timestamp {text!r} has no UTC offset")
    if dt.microsecond != 0:
        raise ValueError(f"timestamp {text!r} has sub-second precision")
    return int(dt.timestamp())


def format_timestamp(epoch_s: int) -> str:
    """Format epoch seconds as the canonical ISO-8601 UTC form with 'Z'."""
    return datetime.fromtimestamp(int(epoch_s), tz=timezone.utc).strftime(
        "%Y-%m-%dT%H:%M:%SZ"
    )


@dataclass(frozen=True)
class Bar:
    """One close-only bar: UTC timestamp plus close in basis points."""

    timestamp: datetime
    close_bp: int


@dataclass(frozen=True)
class Series:
    """Ordered close-price series on an integer basis-point grid.

    Attributes:
        timestamps: int64 epoch seconds, strictly increasing.
        close_bp: int64 close prices in basis points, all > 0.
        tick_size: price units per basis point.
        slippage_bp: assumed per-side execution cost in bp.
    """

    timestamps: np.ndarray
    close_bp: np.ndarray
    tick_size: Decimal = Decimal("0.0001")
    slippage_bp: int = 1

    def __post_init__(self):
        ts = np.array(self.timestamps, dtype=np.int64, copy=True)
        cl = np.array(self.close_bp, dtype=np.int64, copy=True)
        if ts.ndim != 1 or cl.ndim != 1 or ts.size != cl.size:
            raise SeriesError("timestamps and close_bp must be 1-d arrays of equal length")
        if ts.size > 1 and not (np.diff(ts) > 0).all():
            raise DuplicateTimestamp("timestamps must be strictly increasing")
        if cl.size and cl.min() <= 0:
            raise SeriesError("close prices must be positive")
        if self.tick_size <= 0:
            raise SeriesError("tick_size must be positive")
        if self.slippage_bp < 1:
            raise SeriesError("slippage_bp must be >= 1")
        ts.flags.writeable = False
        cl.flags.writeable = False
        object.__setattr__(self, "timestamps", ts)
        object.__setattr__(self, "close_bp", cl)

    def __len__(self) -> int:
        return int(self.close_bp.size)

    def bar(self, i: int) -> Bar:
        return Bar(
            timestamp=datetime.fromtimestamp(int(self.timestamps[i]), tz=timezone.utc),
            close_bp=int(self.close_bp[i]),
        )

    def iter_bars(self) -> Iterator[Bar]:
        for i in range(len(self)):
            yield self.bar(i)

    def segment(self, start: int, stop: int) -> "Series":
        """Sub-series over bar indices [start, stop)."""
        return Series(
            self.timestamps[start:stop].copy(),
            self.close_bp[start:stop].copy(),
            self.tick_size,
            self.slippage_bp,
        )


@dataclass(frozen=True)
class SampleSplit:
    """Chronological three-way decomposition of a series.

    The parts are disjoint, contiguous and ordered; their concatenation
    equals the source series bar-for-bar.
    """

    in_sample: Series
    out_sample: Series
    live_sample: Series
    boundaries: tuple[datetime, datetime]


def parse_csv(stream: IO[str], tick_size: Decimal, slippage_bp: int = 1) -> Series:
    """Read the bar CSV format into a Series.

    Expects a `timestamp,close` header followed by one record per line.
    Records need not be pre-sorted; close prices are converted to integer
    basis points with round-half-away-from-zero of price / tick_size.

    Raises:
        EmptyInput: no data records.
        MalformedRecord: wrong field count, bad timestamp or price text.
        NonPositivePrice: price that is not strictly positive in bp.
        DuplicateTimestamp: two records with the same timestamp.
    """
    tick = Decimal(tick_size)
    if tick <= 0:
        raise SeriesError("tick_size must be positive")
    reader = csv.reader(stream)
    rows: list[tuple[int, int]] = []
    header_seen = False
    line_no = 0
    for record in reader:
        line_no = reader.line_num
        if not record:
            continue
        if not header_seen:
            if tuple(f.strip() for f in record) != CSV_HEADER:
                raise MalformedRecord(line_no, f"expected header {','.join(CSV_HEADER)!r}")
            header_seen = True
            continue
        if len(record) != 2:
            raise MalformedRecord(line_no, f"expected 2 fields, got {len(record)}")
        ts_text, price_text = record
        try:
            ts = parse_timestamp(ts_text)
        except ValueError as exc:
            raise MalformedRecord(line_no, str(exc)) from exc
        try:
            price = Decimal(price_text.strip())
        except InvalidOperation as exc:
            raise MalformedRecord(line_no, f"bad price {price_text!r}") from exc
        if price <= 0:
            raise NonPositivePrice(line_no, f"price {price_text!r} is not positive")
        bp = int((price / tick).quantize(Decimal(1), rounding=ROUND_HALF_UP))
        if bp <= 0:
            raise NonPositivePrice(line_no, f"price {price_text!r} rounds to {bp} bp")
        rows.append((ts, bp))
    if not rows:
        raise EmptyInput("no data records")
    rows.sort(key=lambda r: r[0])
    for (t_prev, _), (t_next, _) in zip(rows, rows[1:]):
        if t_prev == t_next:
            raise DuplicateTimestamp(f"duplicate timestamp {format_timestamp(t_prev)}")
    ts_arr = np.fromiter((r[0] for r in rows), dtype=np.int64, count=len(rows))
    cl_arr = np.fromiter((r[1] for r in rows), dtype=np.int64, count=len(rows))
    return Series(ts_arr, cl_arr, tick, slippage_bp)


def serialize(series: Series, stream: IO[str]) -> None:
    """Write a Series in the bar CSV format (inverse of parse_csv)."""
    stream.write(",".join(CSV_HEADER) + "\n")
    tick = series.tick_size
    for ts, bp in zip(series.timestamps.tolist(), series.close_bp.tolist()):
        price = tick * bp
        stream.write(f"{format_timestamp(ts)},{format(price, 'f')}\n")


def price_change_bp(q1: Bar, q2: Bar) -> int:
    """Signed price change from q1 to q2 in basis points."""
    return q2.close_bp - q1.close_bp


def _to_epoch(instant: datetime) -> int:
    if instant.tzinfo is None:
        instant = instant.replace(tzinfo=timezone.utc)
    return int(instant.timestamp())


def split_samples(series: Series, b1: datetime, b2: datetime) -> SampleSplit:
    """Split a series into in/out/live parts at two boundary instants.

    Half-open convention: a bar at exactly a boundary instant belongs to
    the later part. in = t < b1, out = b1 <= t < b2, live = t >= b2.

    Raises:
        BadBoundaries: b1 >= b2.
        EmptyPart: any of the three parts would be empty.
    """
    e1, e2 = _to_epoch(b1), _to_epoch(b2)
    if e1 >= e2:
        raise BadBoundaries("first boundary must precede the second")
    i1 = int(np.searchsorted(series.timestamps, e1, side="left"))
    i2 = int(np.searchsorted(series.timestamps, e2, side="left"))
    n = len(series)
    if i1 == 0 or i2 == i1 or i2 == n:
        raise EmptyPart(
            f"split at ({format_timestamp(e1)}, {format_timestamp(e2)}) "
            f"gives part sizes {i1}/{i2 - i1}/{n - i2}"
        )
    return SampleSplit(
        in_sample=series.segment(0, i1),
        out_sample=series.segment(i1, i2),
        live_sample=series.segment(i2, n),
        boundaries=(b1, b2),
    )


def randomize(series: Series, amplitude_bp: int, seed) -> Series:
    """Perturb every close by an independent uniform integer draw.

    Each close_bp moves by u ~ Uniform{-amplitude_bp, ..., +amplitude_bp},
    clamped so prices stay >= 1 bp. Timestamps are unchanged and the
    input is not mutated. Deterministic per seed.
    """
    if amplitude_bp < 0:
        raise SeriesError("amplitude_bp must be >= 0")
    if amplitude_bp == 0:
        return series
    rng = np.random.default_rng(seed)
    u = rng.integers(-amplitude_bp, amplitude_bp + 1, size=len(series), dtype=np.int64)
    perturbed = np.maximum(series.close_bp + u, 1)
    return Series(series.timestamps.copy(), perturbed, series.tick_size, series.slippage_bp)
