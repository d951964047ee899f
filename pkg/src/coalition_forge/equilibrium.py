"""Nash equilibria of the coalition-formation game, social optima, and the
price of anarchy.

A wish profile reaches the payoffs only through its mutual-consent graph, and
a deviation by player i can realize exactly the graphs whose i-edges are a
subset of i's incoming wishes.  That option set grows with the incoming
wishes, so a graph admits some equilibrium profile iff its canonical profile
(everyone wishes exactly its mutual neighbours) is one.  Equilibrium
partitions, the worst equilibrium sum, and the multiple-partition flag are
therefore computed by scanning graphs, which stays cheap up to n=6; the
profile-level search uses the same lookup tables.  The two routes are checked
against each other exhaustively for n <= 4 in the test suite.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .model import (
    TOL,
    CPartition,
    GameConfig,
    PartitionLabel,
    StrategyProfile,
    canonicalize_profile,
    classify,
    is_significant,
    label_sort_key,
)
from .partitions import pair_bits, pair_count, partition_masks
from .solver import coalition_sum, coalition_sum_k, profile_utility


class BudgetExceeded(Exception):
    """Raised when a search is requested beyond the supported player count."""


MAX_PLAYERS = 6


def _check_budget(n: int):
    if n > MAX_PLAYERS:
        raise BudgetExceeded(f"exhaustive search supports n <= {MAX_PLAYERS}, got n={n}")


@dataclass(frozen=True)
class _Tables:
    """Per-n lookup tables keyed by mutual-graph bitmask."""

    n: int
    ngraphs: int
    part_k: tuple[int, ...]
    part_size: tuple[tuple[int, ...], ...]
    formed: tuple[tuple[int, ...], ...]  # graph -> partition indices
    nbr: tuple[tuple[int, ...], ...]  # graph -> per-player neighbour mask
    rowmask: tuple[int, ...]  # player -> incident pair bits
    embed: tuple[tuple[int, ...], ...]  # player -> (player mask -> pair bits)


@lru_cache(maxsize=None)
def _tables(n: int) -> _Tables:
    _check_budget(n)
    masks = partition_masks(n)
    bits = pair_bits(n)
    npairs = pair_count(n)
    ngraphs = 1 << npairs

    rowmask = [0] * n
    for (i, j), b in bits.items():
        rowmask[i] |= 1 << b
        rowmask[j] |= 1 << b

    embed = []
    for i in range(n):
        row = [0] * (1 << n)
        for pm in range(1 << n):
            m, e = 0, pm & ~(1 << i)
            while e:
                j = (e & -e).bit_length() - 1
                e &= e - 1
                m |= 1 << bits[(min(i, j), max(i, j))]
            row[pm] = m
        embed.append(tuple(row))

    required = [info.required for info in masks]
    merges = [info.merges for info in masks]
    part_k = tuple(info.partition.k for info in masks)
    part_size = tuple(info.size_of for info in masks)

    formed = []
    nbr = []
    pair_items = list(bits.items())
    for g in range(ngraphs):
        notg = ~g
        idxs = []
        for idx in range(len(masks)):
            if required[idx] & notg:
                continue
            mergeable = False
            for m in merges[idx]:
                if m & notg == 0:
                    mergeable = True
                    break
            if not mergeable:
                idxs.append(idx)
        formed.append(tuple(idxs))
        nb = [0] * n
        for (i, j), b in pair_items:
            if g >> b & 1:
                nb[i] |= 1 << j
                nb[j] |= 1 << i
        nbr.append(tuple(nb))

    return _Tables(
        n=n,
        ngraphs=ngraphs,
        part_k=part_k,
        part_size=part_size,
        formed=tuple(formed),
        nbr=tuple(nbr),
        rowmask=tuple(rowmask),
        embed=tuple(embed),
    )


@lru_cache(maxsize=8)
def _utilities(n: int, eta: float, adamant: bool) -> tuple[tuple[float, ...], ...]:
    """Per graph and player, the guaranteed (min over formed partitions) share."""
    t = _tables(n)
    value_by_k = [0.0] * (n + 1)
    for k in range(1, n + 1):
        if adamant and eta > (k - 1) / k:
            value_by_k[k] = 1.0 / (1.0 + k * eta) ** 2
        else:
            value_by_k[k] = 1.0 / (k * k)
    rows = []
    for fidxs in t.formed:
        row = [float("inf")] * n
        for p in fidxs:
            val = value_by_k[t.part_k[p]]
            sizes = t.part_size[p]
            for i in range(n):
                s = val / sizes[i]
                if s < row[i]:
                    row[i] = s
        rows.append(tuple(row))
    return tuple(rows)


def _cfg_key(config: GameConfig) -> tuple[int, float, bool]:
    return config.n, config.eta, config.adamant_present


@lru_cache(maxsize=8)
def _ne_graphs(n: int, eta: float, adamant: bool) -> tuple[int, ...]:
    """Graphs whose canonical profile is a Nash equilibrium."""
    t = _tables(n)
    u = _utilities(n, eta, adamant)
    out = []
    for g in range(t.ngraphs):
        ug = u[g]
        nbrs_all = t.nbr[g]
        ok = True
        for i in range(n):
            cur = ug[i] + TOL
            nbrs = nbrs_all[i]
            base = g & ~t.rowmask[i]
            emb = t.embed[i]
            e = nbrs
            while True:
                if u[base | emb[e]][i] > cur:
                    ok = False
                    break
                if e == 0:
                    break
                e = (e - 1) & nbrs
            if not ok:
                break
        if ok:
            out.append(g)
    return tuple(out)


def _wish_masks(prof: StrategyProfile) -> tuple[int, ...]:
    return tuple(sum(1 << (p - 1) for p in w) for w in prof.wishes)


def _masks_to_profile(wm: tuple[int, ...]) -> StrategyProfile:
    wishes = []
    for m in wm:
        wishes.append(tuple(i + 1 for i in range(m.bit_length()) if m >> i & 1))
    return StrategyProfile(tuple(wishes))


def _graph_of(wm: tuple[int, ...], n: int) -> int:
    g = 0
    for (i, j), b in pair_bits(n).items():
        if wm[i] >> j & 1 and wm[j] >> i & 1:
            g |= 1 << b
    return g


def _incoming(wm: tuple[int, ...], n: int) -> list[int]:
    inc = [0] * n
    for j, w in enumerate(wm):
        e = w & ~(1 << j)
        while e:
            i = (e & -e).bit_length() - 1
            e &= e - 1
            inc[i] |= 1 << j
    return inc


def _is_nash_masks(wm, n, t, u) -> bool:
    g = _graph_of(wm, n)
    ug = u[g]
    inc = _incoming(wm, n)
    for i in range(n):
        cur = ug[i] + TOL
        options = inc[i]
        base = g & ~t.rowmask[i]
        emb = t.embed[i]
        e = options
        while True:
            if u[base | emb[e]][i] > cur:
                return False
            if e == 0:
                break
            e = (e - 1) & options
    return True


def is_nash(prof: StrategyProfile, config: GameConfig) -> bool:
    """Whether every player's wish set is a best response to the others'."""
    if prof.n != config.n:
        raise ValueError("profile and config disagree on n")
    _check_budget(config.n)
    t = _tables(config.n)
    u = _utilities(*_cfg_key(config))
    return _is_nash_masks(_wish_masks(prof), config.n, t, u)


def best_response_set(prof: StrategyProfile, player: int, config: GameConfig):
    """All wish sets maximizing the player's guaranteed utility, others fixed."""
    n = config.n
    _check_budget(n)
    t = _tables(n)
    u = _utilities(*_cfg_key(config))
    wm = _wish_masks(prof)
    i = player - 1
    inc = _incoming(wm, n)[i]
    base = _graph_of(wm, n) & ~t.rowmask[i]
    emb = t.embed[i]
    by_edges = {}
    e = inc
    while True:
        by_edges[e] = u[base | emb[e]][i]
        if e == 0:
            break
        e = (e - 1) & inc
    best = max(by_edges.values())
    out = []
    own = 1 << i
    for m in range(1 << n):
        if not m & own:
            continue
        if by_edges[m & inc] >= best - TOL:
            out.append(tuple(b + 1 for b in range(n) if m >> b & 1))
    return tuple(sorted(out))


# --- relabeling symmetry -------------------------------------------------


@lru_cache(maxsize=None)
def _perm_tables(n: int):
    """(inverse position map, content mask map) per permutation; identity first."""
    perms = []
    for p in itertools.permutations(range(n)):
        mmap = [0] * (1 << n)
        for m in range(1 << n):
            x, e = 0, m
            while e:
                b = (e & -e).bit_length() - 1
                e &= e - 1
                x |= 1 << p[b]
            mmap[m] = x
        inv = [0] * n
        for a, b in enumerate(p):
            inv[b] = a
        perms.append((tuple(inv), tuple(mmap)))
    return tuple(perms)


def _is_canonical_masks(wm, perms, n) -> bool:
    for inv, mmap in perms:
        for j in range(n):
            v = mmap[wm[inv[j]]]
            if v < wm[j]:
                return False
            if v > wm[j]:
                break
    return True


def _canonical_masks(wm, perms, n):
    best = wm
    for inv, mmap in perms:
        cand = tuple(mmap[wm[inv[j]]] for j in range(n))
        if cand < best:
            best = cand
    return best


@lru_cache(maxsize=None)
def _canonical_reps(n: int) -> tuple[tuple[int, ...], ...]:
    """All wish profiles that are lexicographic minima of their relabeling orbit.

    A canonical profile's first wish set must be a prefix {1..s}: a
    relabeling that fixes player 1 maps it to one without touching position
    0, strictly lowering the profile otherwise.
    """
    perms = _perm_tables(n)[1:]
    first = [(1 << s) - 1 for s in range(1, n + 1)]
    rest = [[m for m in range(1 << n) if m >> i & 1] for i in range(1, n)]
    reps = []
    for wm in itertools.product(first, *rest):
        if _is_canonical_masks(wm, perms, n):
            reps.append(wm)
    return tuple(reps)


def _all_wish_masks(n: int) -> list[list[int]]:
    return [[m for m in range(1 << n) if m >> i & 1] for i in range(n)]


# --- equilibrium reports ---------------------------------------------------


@dataclass(frozen=True)
class _PartitionCore:
    partitions: tuple[CPartition, ...]
    labeled: tuple[tuple[PartitionLabel, CPartition], ...]
    worst_sum: float
    multi: bool


def _partition_core(config: GameConfig) -> _PartitionCore:
    n = config.n
    _check_budget(n)
    t = _tables(n)
    keys = _ne_graphs(*_cfg_key(config))
    masks = partition_masks(n)
    idxs = sorted({p for g in keys for p in t.formed[g]})
    parts = tuple(masks[i].partition for i in idxs)
    reps: dict[tuple[str, bool], CPartition] = {}
    for part in parts:
        lab = classify(part, config)
        reps.setdefault((lab.name, lab.significant), part)
    labeled = tuple(
        (PartitionLabel(name, sig), part)
        for (name, sig), part in sorted(reps.items(), key=lambda kv: label_sort_key(kv[0][0]))
    )
    worst = min(coalition_sum(p, config) for p in parts)
    multi = any(len(t.formed[g]) > 1 for g in keys)
    return _PartitionCore(parts, labeled, worst, multi)


def social_optimum(config: GameConfig) -> tuple[float, tuple[PartitionLabel, ...]]:
    """Best achievable total utility of the cooperating side, with the
    coalition-count classes that attain it.

    The total only depends on the number of coalitions k, so scanning
    k in 1..n is exhaustive; the class P<k> covers every partition with k
    coalitions (GC for k=1).
    """
    sums = {k: coalition_sum_k(k, config) for k in range(1, config.n + 1)}
    best = max(sums.values())
    labels = tuple(
        PartitionLabel("GC" if k == 1 else f"P{k}", is_significant(k, config))
        for k in sorted(sums)
        if sums[k] >= best - TOL
    )
    return best, labels


@dataclass(frozen=True)
class EquilibriumReport:
    """Everything the solver reports for one configuration."""

    ne_profiles: tuple[StrategyProfile, ...]
    ne_partitions: tuple[tuple[PartitionLabel, CPartition], ...]
    multiple_partition_ne: bool
    worst_ne_sum: float
    so_value: float
    so_partition_classes: tuple[PartitionLabel, ...]
    poa: float

    def __post_init__(self):
        if not self.ne_partitions:
            raise ValueError("the all-alone partition is always an equilibrium")
        if not self.worst_ne_sum > 0:
            raise ValueError("worst equilibrium sum must be positive")
        if abs(self.poa - self.so_value / self.worst_ne_sum) > 1e-9 * max(1.0, self.poa):
            raise ValueError("poa must equal so_value / worst_ne_sum")

    @property
    def ne_display(self) -> tuple[str, ...]:
        return tuple(lab.display for lab, _ in self.ne_partitions)

    @property
    def so_display(self) -> tuple[str, ...]:
        return tuple(lab.display for lab in self.so_partition_classes)


def _ne_profiles_small(config: GameConfig, use_symmetry: bool) -> tuple[StrategyProfile, ...]:
    n = config.n
    t = _tables(n)
    u = _utilities(*_cfg_key(config))
    perms = _perm_tables(n)
    found = set()
    if use_symmetry:
        for wm in _canonical_reps(n):
            if _is_nash_masks(wm, n, t, u):
                found.add(wm)
    else:
        for wm in itertools.product(*_all_wish_masks(n)):
            if _is_nash_masks(wm, n, t, u):
                found.add(_canonical_masks(wm, perms, n))
    return tuple(_masks_to_profile(wm) for wm in sorted(found))


def enumerate_nash(config: GameConfig, use_symmetry: bool = True) -> EquilibriumReport:
    """Exhaustive equilibrium search.

    ne_profiles holds canonical representatives: the complete list up to
    relabeling for n <= 5; for n = 6 the canonical generating profile of each
    equilibrium graph (the full orbit list grows beyond any practical use,
    while the partition-level fields stay exact).
    """
    n = config.n
    _check_budget(n)
    if n >= 5 and not use_symmetry:
        raise ValueError("symmetry reduction is mandatory for n >= 5")
    core = _partition_core(config)
    if n <= 5:
        profs = _ne_profiles_small(config, use_symmetry)
    else:
        t = _tables(n)
        u = _utilities(*_cfg_key(config))
        perms = _perm_tables(n)
        found = set()
        for g in _ne_graphs(*_cfg_key(config)):
            wm = tuple((1 << i) | t.nbr[g][i] for i in range(n))
            found.add(_canonical_masks(wm, perms, n))
        profs = tuple(_masks_to_profile(wm) for wm in sorted(found))
    so_value, so_labels = social_optimum(config)
    return EquilibriumReport(
        ne_profiles=profs,
        ne_partitions=core.labeled,
        multiple_partition_ne=core.multi,
        worst_ne_sum=core.worst_sum,
        so_value=so_value,
        so_partition_classes=so_labels,
        poa=so_value / core.worst_sum,
    )


def partition_summary(config: GameConfig):
    """(labeled equilibrium partitions, worst equilibrium sum, multi flag)
    without the profile-level search; cheap for every supported n."""
    core = _partition_core(config)
    return core.labeled, core.worst_sum, core.multi


def price_of_anarchy(config: GameConfig) -> float:
    so_value, _ = social_optimum(config)
    core = _partition_core(config)
    return so_value / core.worst_sum


def no_multi_partition_nash(config: GameConfig) -> bool:
    """True when no equilibrium profile forms more than one partition."""
    return not _partition_core(config).multi


def no_weak_ne_partition(config: GameConfig) -> bool:
    """True when, absent multi-partition equilibria, no equilibrium partition
    is weak in the definitional sense."""
    from .partitions import is_weak_exact

    core = _partition_core(config)
    if core.multi:
        return True
    return not any(is_weak_exact(p, config) for p in core.partitions)


def multi_partition_profile_count(n: int) -> int:
    """How many wish profiles form more than one partition (full space)."""
    if n > 4:
        raise BudgetExceeded("profile counting is supported for n <= 4")
    t = _tables(n)
    count = 0
    for wm in itertools.product(*_all_wish_masks(n)):
        if len(t.formed[_graph_of(wm, n)]) > 1:
            count += 1
    return count


def nash_via_definition(prof: StrategyProfile, config: GameConfig) -> bool:
    """Best-response definition spelled out directly over wish sets; slower
    route kept as a cross-check against the table-based is_nash."""
    n = config.n
    current = profile_utility(prof, config)
    for i in range(1, n + 1):
        others = [p for p in range(1, n + 1) if p != i]
        best = current[i]
        for r in range(len(others) + 1):
            for extra in itertools.combinations(others, r):
                cand = prof.replace(i, (i, *extra))
                val = profile_utility(cand, config)[i]
                if val > best + TOL:
                    return False
    return True
