"""Machine-readable result records: one line of JSON or CSV per analysis.

Field names and order are a stability contract; text rendering is not.
runtime_ms never enters the serialized rows, so identical inputs give
byte-identical output.
"""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass, field

from .model import GameConfig
from .equilibrium import partition_summary, social_optimum

FIELDS = (
    "n",
    "eta",
    "adamant",
    "ne_partitions",
    "so_partitions",
    "so_value",
    "worst_ne_sum",
    "poa",
    "multiple_partition_ne",
)

CSV_HEADER = ",".join(FIELDS)

_LIST_SEP = "|"


@dataclass(frozen=True)
class ReportRecord:
    n: int
    eta: float
    adamant: bool
    ne_partitions: tuple[str, ...]
    so_partitions: tuple[str, ...]
    so_value: float
    worst_ne_sum: float
    poa: float
    multiple_partition_ne: bool
    runtime_ms: float = field(default=0.0, compare=False)


def analyze(config: GameConfig) -> ReportRecord:
    t0 = time.perf_counter()
    labeled, worst, multi = partition_summary(config)
    so_value, so_labels = social_optimum(config)
    runtime_ms = (time.perf_counter() - t0) * 1e3
    return ReportRecord(
        n=config.n,
        eta=config.eta,
        adamant=config.adamant_present,
        ne_partitions=tuple(lab.display for lab, _ in labeled),
        so_partitions=tuple(lab.display for lab in so_labels),
        so_value=so_value,
        worst_ne_sum=worst,
        poa=so_value / worst,
        multiple_partition_ne=multi,
        runtime_ms=runtime_ms,
    )


def to_json(record: ReportRecord) -> str:
    payload = {name: getattr(record, name) for name in FIELDS}
    payload["ne_partitions"] = list(record.ne_partitions)
    payload["so_partitions"] = list(record.so_partitions)
    return json.dumps(payload, ensure_ascii=False)


def from_json(line: str) -> ReportRecord:
    raw = json.loads(line)
    return ReportRecord(
        n=int(raw["n"]),
        eta=float(raw["eta"]),
        adamant=bool(raw["adamant"]),
        ne_partitions=tuple(raw["ne_partitions"]),
        so_partitions=tuple(raw["so_partitions"]),
        so_value=float(raw["so_value"]),
        worst_ne_sum=float(raw["worst_ne_sum"]),
        poa=float(raw["poa"]),
        multiple_partition_ne=bool(raw["multiple_partition_ne"]),
    )


def to_csv_row(record: ReportRecord) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="")
    writer.writerow(
        [
            record.n,
            repr(record.eta),
            record.adamant,
            _LIST_SEP.join(record.ne_partitions),
            _LIST_SEP.join(record.so_partitions),
            repr(record.so_value),
            repr(record.worst_ne_sum),
            repr(record.poa),
            record.multiple_partition_ne,
        ]
    )
    return buf.getvalue()


def from_csv_row(line: str) -> ReportRecord:
    row = next(csv.reader(io.StringIO(line)))
    return ReportRecord(
        n=int(row[0]),
        eta=float(row[1]),
        adamant=row[2] == "True",
        ne_partitions=tuple(x for x in row[3].split(_LIST_SEP) if x),
        so_partitions=tuple(x for x in row[4].split(_LIST_SEP) if x),
        so_value=float(row[5]),
        worst_ne_sum=float(row[6]),
        poa=float(row[7]),
        multiple_partition_ne=row[8] == "True",
    )


def to_text(record: ReportRecord) -> str:
    lines = [
        f"n={record.n}  eta={record.eta:g}  adamant={'yes' if record.adamant else 'no'}",
        f"  equilibrium partitions : {', '.join(record.ne_partitions)}",
        f"  social optimum         : {', '.join(record.so_partitions)}"
        f"  (total {record.so_value:.6g})",
        f"  worst equilibrium sum  : {record.worst_ne_sum:.6g}",
        f"  price of anarchy       : {record.poa:.6g}",
        f"  multiple partitions at an equilibrium: "
        f"{'yes' if record.multiple_partition_ne else 'no'}",
        f"  runtime: {record.runtime_ms:.1f} ms",
    ]
    return "\n".join(lines)
