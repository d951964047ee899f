"""Closed-form solution structure by player count: equilibrium partition
classes, social-optimum classes, and the price of anarchy per eta range.

Range edges are carried as exact closed forms recomputed from the
best-response crossings, together with the conventionally printed rounded
constants.  Two printed constants round the same crossing (3-sqrt(2))/(2*sqrt(2))
~ 0.5607 up to 0.57, and the n=3 layout folds the all-alone significance edge
at 2/3 into a wider row; those rows carry flags so reports can show both the
printed and the exact values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

SQRT2 = math.sqrt(2.0)
SQRT3 = math.sqrt(3.0)

GC_VS_ALONE_N2 = 1.0 / SQRT2  # ~0.7071: grand coalition worth keeping at n=2
GC_LOW = SQRT2 - 1.0  # ~0.4142: grand coalition (and SO) re-entry at low eta
PAIR_SIG = 0.5  # two coalitions: outsider significant above 1/2
GC_VS_ALONE_N3 = 1.0 + SQRT3  # ~2.7321: grand coalition edge at n=3
PAIR_VS_ALONE = 1.0 + SQRT2  # ~2.4142: a pair member stays vs significant all-alone
PAIR_DROP = (3.0 - SQRT2) / (2.0 * SQRT2)  # ~0.5607: pair folds vs insignificant all-alone
GC_LOW_N3 = 2.0 / SQRT3 - 1.0  # ~0.1547: grand coalition low edge at n=3


def alc_sig(n: int) -> float:
    return (n - 1) / n


@dataclass(frozen=True)
class RegimeRow:
    """One eta range with constant solution structure.

    lo/hi are the recomputed exact edges (hi may be inf); printed_lo/printed_hi
    the conventional rounded constants when they differ in print.  Sampling is
    meant strictly inside (lo, hi).
    """

    table: str
    row: str
    n: int
    lo: float
    hi: float
    ne: frozenset
    so: frozenset
    poa: Callable[[float], float]
    printed_lo: float | None = None
    printed_hi: float | None = None
    flags: tuple[str, ...] = field(default_factory=tuple)

    def samples(self, delta: float = 1e-4) -> tuple[float, ...]:
        lo, hi = self.lo, self.hi
        if math.isinf(hi):
            return (lo + delta, lo + 1.0, lo + 10.0)
        mid = 0.5 * (lo + hi)
        return (lo + delta, mid, hi - delta)

    def covers(self, eta: float) -> bool:
        return self.lo < eta < self.hi


def _row(table, row, n, lo, hi, ne, so, poa, printed_lo=None, printed_hi=None, flags=()):
    return RegimeRow(
        table=table,
        row=row,
        n=n,
        lo=lo,
        hi=hi,
        ne=frozenset(ne),
        so=frozenset(so),
        poa=poa,
        printed_lo=printed_lo,
        printed_hi=printed_hi,
        flags=tuple(flags),
    )


def rows_n2() -> tuple[RegimeRow, ...]:
    n = 2
    return (
        _row("n2", "1", n, GC_VS_ALONE_N2, math.inf, {"GC", "ALC"}, {"GC"},
             lambda e: 0.5 * ((1 + 2 * e) / (1 + e)) ** 2, printed_lo=0.707),
        _row("n2", "2", n, PAIR_SIG, GC_VS_ALONE_N2, {"ALC"}, {"P2"},
             lambda e: 1.0, printed_lo=0.5, printed_hi=0.707),
        _row("n2", "3", n, GC_LOW, PAIR_SIG, {"ALC°"}, {"P2°"},
             lambda e: 1.0, printed_lo=0.414, printed_hi=0.5),
        _row("n2", "4", n, 0.0, GC_LOW, {"GC", "ALC°"}, {"GC"},
             lambda e: 2.0 / (1 + e) ** 2, printed_hi=0.414),
    )


def rows_n3() -> tuple[RegimeRow, ...]:
    n = 3
    f_top = lambda e: (1.0 / 3.0) * ((1 + 3 * e) / (1 + e)) ** 2
    return (
        _row("n3", "1", n, GC_VS_ALONE_N3, math.inf, {"GC", "P2", "ALC"}, {"GC"},
             f_top, printed_lo=2.732),
        _row("n3", "2", n, PAIR_VS_ALONE, GC_VS_ALONE_N3, {"P2", "ALC"}, {"GC"},
             f_top, printed_lo=2.414, printed_hi=2.732),
        _row("n3", "3", n, GC_VS_ALONE_N2, PAIR_VS_ALONE, {"ALC"}, {"GC"},
             f_top, printed_lo=0.707, printed_hi=2.414),
        _row("n3", "4", n, 2.0 / 3.0, GC_VS_ALONE_N2, {"ALC"}, {"P2"},
             lambda e: (2.0 / 3.0) * ((1 + 3 * e) / (1 + 2 * e)) ** 2,
             printed_lo=0.57, printed_hi=0.707,
             flags=("printed lower edge 0.57 is the pair-fold crossing "
                    f"(3-sqrt2)/(2*sqrt2)={PAIR_DROP:.6f}; the all-alone partition "
                    "only turns significant above 2/3, the exact lower edge here",)),
        _row("n3", "4*", n, PAIR_DROP, 2.0 / 3.0, {"ALC°"}, {"P2"},
             lambda e: 6.0 / (1 + 2 * e) ** 2,
             flags=("inside the printed row 4 range, but the outsider is still "
                    "insignificant at the all-alone partition below 2/3",)),
        _row("n3", "5", n, PAIR_SIG, PAIR_DROP, {"P2", "ALC°"}, {"P2"},
             lambda e: 6.0 / (1 + 2 * e) ** 2, printed_lo=0.5, printed_hi=0.57,
             flags=(f"printed upper edge 0.57, exact {PAIR_DROP:.6f}",)),
        _row("n3", "6", n, GC_LOW, PAIR_SIG, {"P2°", "ALC°"}, {"P2°"},
             lambda e: 1.5, printed_lo=0.414, printed_hi=0.5),
        _row("n3", "7", n, GC_LOW_N3, GC_LOW, {"P2°", "ALC°"}, {"GC"},
             lambda e: 3.0 / (1 + e) ** 2, printed_lo=0.15, printed_hi=0.414),
        _row("n3", "8", n, 0.0, GC_LOW_N3, {"GC", "P2°", "ALC°"}, {"GC"},
             lambda e: 3.0 / (1 + e) ** 2, printed_hi=0.15),
    )


def rows_n4() -> tuple[RegimeRow, ...]:
    n = 4
    f_top = lambda e: 0.25 * ((1 + 4 * e) / (1 + e)) ** 2
    return (
        _row("n4", "1", n, PAIR_VS_ALONE, math.inf, {"TTC", "ALC"}, {"GC"},
             f_top, printed_lo=2.414),
        _row("n4", "2", n, 0.75, PAIR_VS_ALONE, {"ALC"}, {"GC"},
             f_top, printed_lo=0.75, printed_hi=2.414),
        _row("n4", "3", n, GC_VS_ALONE_N2, 0.75, {"ALC°"}, {"GC"},
             lambda e: 4.0 / (1 + e) ** 2, printed_lo=0.707, printed_hi=0.75),
        _row("n4", "4", n, PAIR_DROP, GC_VS_ALONE_N2, {"ALC°"}, {"P2"},
             lambda e: 8.0 / (1 + 2 * e) ** 2, printed_lo=0.57, printed_hi=0.707,
             flags=(f"printed lower edge 0.57, exact {PAIR_DROP:.6f}",)),
        _row("n4", "5", n, PAIR_SIG, PAIR_DROP, {"TTC", "ALC°"}, {"P2"},
             lambda e: 8.0 / (1 + 2 * e) ** 2, printed_lo=0.5, printed_hi=0.57,
             flags=(f"printed upper edge 0.57, exact {PAIR_DROP:.6f}",)),
        _row("n4", "6", n, GC_LOW, PAIR_SIG, {"TTC°", "ALC°"}, {"P2°"},
             lambda e: 2.0, printed_lo=0.414, printed_hi=0.5),
        _row("n4", "7", n, 0.0, GC_LOW, {"TTC°", "ALC°"}, {"GC"},
             lambda e: 4.0 / (1 + e) ** 2, printed_hi=0.414),
    )


def rows_large(n: int) -> tuple[RegimeRow, ...]:
    if n <= 4:
        raise ValueError("large-n rows apply to n > 4")
    edge = alc_sig(n)
    return (
        _row("large", "1", n, edge, math.inf, {"ALC"}, {"GC"},
             lambda e: (1.0 / n) * ((1 + n * e) / (1 + e)) ** 2),
        _row("large", "2", n, GC_VS_ALONE_N2, edge, {"ALC°"}, {"GC"},
             lambda e: n / (1 + e) ** 2, printed_lo=0.707),
        _row("large", "3", n, PAIR_SIG, GC_VS_ALONE_N2, {"ALC°"}, {"P2"},
             lambda e: 2.0 * n / (1 + 2 * e) ** 2, printed_lo=0.5, printed_hi=0.707),
        _row("large", "4", n, GC_LOW, PAIR_SIG, {"ALC°"}, {"P2°"},
             lambda e: n / 2.0, printed_lo=0.414, printed_hi=0.5),
        _row("large", "5", n, 0.0, GC_LOW, {"ALC°"}, {"GC"},
             lambda e: n / (1 + e) ** 2, printed_hi=0.414),
    )


def rows_no_adamant() -> tuple[RegimeRow, ...]:
    deg = "°"
    out = [
        _row("noadamant", "n=2", 2, 0.0, 0.0, {"GC" + deg, "ALC" + deg}, {"GC" + deg},
             lambda e: 2.0),
        _row("noadamant", "n=3", 3, 0.0, 0.0, {"GC" + deg, "P2" + deg, "ALC" + deg},
             {"GC" + deg}, lambda e: 3.0),
        _row("noadamant", "n=4", 4, 0.0, 0.0, {"GC" + deg, "TTC" + deg, "ALC" + deg},
             {"GC" + deg}, lambda e: 4.0),
        _row("noadamant", "n=5", 5, 0.0, 0.0, {"ALC" + deg}, {"GC" + deg},
             lambda e: 5.0),
    ]
    return tuple(out)


def rows(table: str, n: int | None = None) -> tuple[RegimeRow, ...]:
    if table == "n2":
        return rows_n2()
    if table == "n3":
        return rows_n3()
    if table == "n4":
        return rows_n4()
    if table == "large":
        return rows_large(n or 5)
    if table == "noadamant":
        return rows_no_adamant()
    raise ValueError(f"unknown table {table!r}")


def row_for_eta(table: str, eta: float, n: int | None = None) -> RegimeRow:
    for r in rows(table, n):
        if r.covers(eta):
            return r
    raise ValueError(f"eta={eta} is on a regime boundary of table {table}")


def switch_points(n: int) -> tuple[float, ...]:
    """Exact eta values where the solution structure changes, ascending."""
    if n == 2:
        pts = {GC_LOW, PAIR_SIG, GC_VS_ALONE_N2}
    elif n == 3:
        pts = {GC_LOW_N3, GC_LOW, PAIR_SIG, PAIR_DROP, 2.0 / 3.0,
               GC_VS_ALONE_N2, PAIR_VS_ALONE, GC_VS_ALONE_N3}
    elif n == 4:
        pts = {GC_LOW, PAIR_SIG, PAIR_DROP, GC_VS_ALONE_N2, 0.75, PAIR_VS_ALONE}
    elif n > 4:
        pts = {GC_LOW, PAIR_SIG, GC_VS_ALONE_N2, alc_sig(n)}
    else:
        raise ValueError("n must be at least 2")
    return tuple(sorted(pts))
