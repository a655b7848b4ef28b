"""Benchmark curve ingestion and throughput extraction.

Load-test results arrive as CSV curves of offered versus achieved rate
with a latency column (and optionally CPU utilisation).  From a curve we
extract the saturation throughput: the highest achieved rate whose
latency still meets the operator's threshold.  Node throughputs for
fault-tolerant node variants are compared against native builds to get
per-variant degradation ratios, averaged across applications.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, NamedTuple, Sequence

__all__ = [
    "PerfCurve",
    "PerfProfile",
    "PerfRow",
    "degradation_ratios",
    "parse_benchmark_csv",
    "saturation_throughput",
    "write_benchmark_csv",
]

REQUIRED_COLUMNS = ("offered_rate", "achieved_rate", "latency_ms")
OPTIONAL_COLUMNS = ("cpu_pct",)


class PerfRow(NamedTuple):
    offered_rate: float
    achieved_rate: float
    latency_ms: float
    cpu_pct: float | None = None


@dataclass(frozen=True)
class PerfCurve:
    """One load-test sweep, rows sorted by offered rate."""

    rows: tuple[PerfRow, ...]
    application: str | None = None
    variant: str | None = None


def parse_benchmark_csv(source, application: str | None = None,
                        variant: str | None = None) -> PerfCurve:
    """Parse a benchmark CSV with a mandatory header row.

    ``source`` may be a path or an open text stream.  Numeric columns
    must parse as floats; errors name the offending row and column.
    """
    if isinstance(source, (str, Path)):
        with open(source, newline="") as handle:
            return parse_benchmark_csv(handle, application, variant)

    reader = csv.reader(source)
    try:
        header = next(reader)
    except StopIteration:
        raise ValueError("benchmark CSV is empty; expected a header row") from None
    header = [name.strip() for name in header]
    for name in REQUIRED_COLUMNS:
        if name not in header:
            raise ValueError(f"benchmark CSV is missing required column {name!r}")
    columns = {name: header.index(name) for name in header}
    has_cpu = "cpu_pct" in columns

    rows: list[PerfRow] = []
    for line_no, record in enumerate(reader, start=2):
        if not record or all(not cell.strip() for cell in record):
            continue
        values = {}
        wanted = REQUIRED_COLUMNS + (OPTIONAL_COLUMNS if has_cpu else ())
        for name in wanted:
            cell = record[columns[name]].strip() if columns[name] < len(record) else ""
            try:
                values[name] = float(cell)
            except ValueError:
                raise ValueError(
                    f"benchmark CSV row {line_no}, column {name!r}: "
                    f"cannot parse {cell!r} as a number") from None
        rows.append(PerfRow(values["offered_rate"], values["achieved_rate"],
                            values["latency_ms"],
                            values.get("cpu_pct")))
    if not rows:
        raise ValueError("benchmark CSV has no data rows")
    rows.sort(key=lambda r: r.offered_rate)
    return PerfCurve(rows=tuple(rows), application=application, variant=variant)


def write_benchmark_csv(curve: PerfCurve, dest=None) -> str:
    """Serialize a curve back to CSV text (written to ``dest`` when given).

    Floats are rendered with ``repr`` so a parse/write cycle is lossless.
    """
    has_cpu = any(row.cpu_pct is not None for row in curve.rows)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(REQUIRED_COLUMNS + (OPTIONAL_COLUMNS if has_cpu else ()))
    for row in curve.rows:
        record = [repr(row.offered_rate), repr(row.achieved_rate), repr(row.latency_ms)]
        if has_cpu:
            record.append("" if row.cpu_pct is None else repr(row.cpu_pct))
        writer.writerow(record)
    text = buffer.getvalue()
    if dest is not None:
        if isinstance(dest, (str, Path)):
            Path(dest).write_text(text)
        else:
            dest.write(text)
    return text


def saturation_throughput(curve: PerfCurve, latency_threshold_ms: float) -> float:
    """Highest achieved rate whose latency meets the threshold.

    The latency threshold is an operator input with no default: what
    counts as saturated depends on the service's latency budget.
    """
    if not math.isfinite(latency_threshold_ms) or latency_threshold_ms <= 0:
        raise ValueError(
            f"latency threshold must be positive and finite, got {latency_threshold_ms!r}")
    qualifying = [row.achieved_rate for row in curve.rows
                  if row.latency_ms <= latency_threshold_ms]
    if not qualifying:
        raise ValueError(
            f"no benchmark rows meet the {latency_threshold_ms} ms latency threshold")
    return max(qualifying)


@dataclass(frozen=True)
class PerfProfile:
    """Per-variant node throughput and its ratio to the native build."""

    nodt: dict[str, float]
    ratios: dict[str, float]


def degradation_ratios(
        nodt_by_app: Mapping[str, Mapping[str, float]] | Mapping[str, float],
) -> PerfProfile:
    """Average per-variant throughput ratios versus native across apps.

    Accepts either ``{app: {variant: nodt}}`` or a single flat
    ``{variant: nodt}`` map.  Every app must report a native throughput
    to normalize against.
    """
    first = next(iter(nodt_by_app.values()), None)
    if first is None:
        raise ValueError("no applications given")
    apps: Mapping[str, Mapping[str, float]]
    if isinstance(first, Mapping):
        apps = nodt_by_app  # type: ignore[assignment]
    else:
        apps = {"default": nodt_by_app}  # type: ignore[dict-item]

    ratio_samples: dict[str, list[float]] = {}
    nodt_samples: dict[str, list[float]] = {}
    for app, table in apps.items():
        if "native" not in table:
            raise ValueError(f"application {app!r} has no native throughput to compare against")
        native = table["native"]
        if not math.isfinite(native) or native <= 0:
            raise ValueError(f"application {app!r}: native throughput must be positive")
        for variant, value in table.items():
            if not math.isfinite(value) or value <= 0:
                raise ValueError(
                    f"application {app!r}, variant {variant!r}: "
                    f"throughput must be positive, got {value!r}")
            ratio_samples.setdefault(variant, []).append(value / native)
            nodt_samples.setdefault(variant, []).append(value)
    nodt = {v: sum(xs) / len(xs) for v, xs in nodt_samples.items()}
    ratios = {v: sum(xs) / len(xs) for v, xs in ratio_samples.items()}
    return PerfProfile(nodt=nodt, ratios=ratios)
