"""Partition calculus: which coalition structures a wish profile can form.

A coalition may appear only if its members all wish each other (mutual
consent), and a partition of mutual coalitions counts as formed only when no
strictly coarser partition of mutual coalitions exists.  Coarsening is viable
exactly when some two coalitions merge into a mutual clique, which is what
``formed_partitions`` tests pair by pair.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .model import (
    TOL,
    CPartition,
    Coalition,
    GameConfig,
    StrategyProfile,
)


@lru_cache(maxsize=None)
def all_partitions(n: int) -> tuple[CPartition, ...]:
    """Every set partition of {1..n}, enumerated via restricted growth strings."""
    if n < 1:
        raise ValueError("n must be positive")
    out = []
    labels = [0] * n

    def grow(pos: int, top: int):
        if pos == n:
            groups: list[list[int]] = [[] for _ in range(top + 1)]
            for player, lab in enumerate(labels, start=1):
                groups[lab].append(player)
            out.append(CPartition.from_groups(groups))
            return
        for lab in range(top + 2):
            labels[pos] = lab
            grow(pos + 1, max(top, lab))

    grow(1, 0)  # labels[0] stays 0: block labels are first-occurrence ordered
    return tuple(out)


@lru_cache(maxsize=None)
def pair_bits(n: int) -> dict[tuple[int, int], int]:
    """Bit position for each unordered player pair (0-based, i < j)."""
    bits = {}
    pos = 0
    for i in range(n):
        for j in range(i + 1, n):
            bits[(i, j)] = pos
            pos += 1
    return bits


def pair_count(n: int) -> int:
    return n * (n - 1) // 2


@dataclass(frozen=True)
class PartitionMasks:
    """Edge-mask view of one set partition, for O(1) formation tests."""

    partition: CPartition
    required: int  # all within-coalition pairs
    merges: tuple[int, ...]  # required mask after merging each coalition pair
    size_of: tuple[int, ...]  # size_of[i] = size of 0-based player i's coalition


def _edges_mask(players: tuple[int, ...], bits: dict[tuple[int, int], int]) -> int:
    m = 0
    for i, j in itertools.combinations(sorted(players), 2):
        m |= 1 << bits[(i, j)]
    return m


@lru_cache(maxsize=None)
def partition_masks(n: int) -> tuple[PartitionMasks, ...]:
    bits = pair_bits(n)
    infos = []
    for part in all_partitions(n):
        blocks = [tuple(p - 1 for p in c) for c in part.coalitions]
        required = 0
        for blk in blocks:
            required |= _edges_mask(blk, bits)
        merges = tuple(
            _edges_mask(b1 + b2, bits) for b1, b2 in itertools.combinations(blocks, 2)
        )
        size_of = [0] * n
        for blk in blocks:
            for i in blk:
                size_of[i] = len(blk)
        infos.append(PartitionMasks(part, required, merges, tuple(size_of)))
    return tuple(infos)


def mutual_mask(prof: StrategyProfile) -> int:
    """Mutual-consent edges of a profile, packed as a pair bitmask."""
    n = prof.n
    bits = pair_bits(n)
    wish = [frozenset(w) for w in prof.wishes]
    g = 0
    for (i, j), b in bits.items():
        if (j + 1) in wish[i] and (i + 1) in wish[j]:
            g |= 1 << b
    return g


def formed_indices(n: int, graph_mask: int) -> tuple[int, ...]:
    """Indices into all_partitions(n) of the partitions the graph forms."""
    out = []
    for idx, info in enumerate(partition_masks(n)):
        if info.required & ~graph_mask:
            continue  # some coalition is not a mutual clique
        if any(m & ~graph_mask == 0 for m in info.merges):
            continue  # two coalitions could merge: a coarser partition forms
        out.append(idx)
    return tuple(out)


@dataclass(frozen=True)
class MutualGraph:
    """Symmetric mutual-wish graph over the cooperating players."""

    n: int
    edges: frozenset  # frozenset[tuple[int, int]] with i < j, 1-based

    @classmethod
    def from_profile(cls, prof: StrategyProfile) -> "MutualGraph":
        wish = [frozenset(w) for w in prof.wishes]
        edges = frozenset(
            (i, j)
            for i, j in itertools.combinations(range(1, prof.n + 1), 2)
            if j in wish[i - 1] and i in wish[j - 1]
        )
        return cls(prof.n, edges)

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edges

    def is_clique(self, members: Coalition) -> bool:
        return all(self.has_edge(i, j) for i, j in itertools.combinations(members, 2))


@dataclass(frozen=True)
class FormedPartitions:
    """The set of partitions a wish profile forms; usually a single one."""

    partitions: tuple[CPartition, ...]

    def __post_init__(self):
        if not self.partitions:
            raise ValueError("a profile always forms at least one partition")

    @property
    def unique(self) -> bool:
        return len(self.partitions) == 1


def formed_partitions(prof: StrategyProfile) -> FormedPartitions:
    n = prof.n
    masks = partition_masks(n)
    idxs = formed_indices(n, mutual_mask(prof))
    return FormedPartitions(tuple(masks[i].partition for i in idxs))


def is_better(pa: CPartition, pb: CPartition) -> bool:
    """Strict coarsening: every coalition of pb sits inside one of pa."""
    if pa.n != pb.n:
        raise ValueError("partitions cover different player sets")
    if pa == pb:
        return False
    sets_a = [set(c) for c in pa.coalitions]
    return all(any(set(c) <= s for s in sets_a) for c in pb.coalitions)


def deviation_partition(partition: CPartition, i: int) -> CPartition:
    """Partition after player i unilaterally goes alone: its coalition splits
    into {i} and the rest.  A no-op when i is already alone."""
    block = partition.block_of(i)
    if len(block) == 1:
        return partition
    rest = tuple(x for x in block if x != i)
    groups = [c for c in partition.coalitions if c != block] + [(i,), rest]
    return CPartition.from_groups(groups)


def is_weak_criterion(partition: CPartition) -> bool:
    """Size-based sufficient test for weakness: m* > (k+1)^2 / k^2.

    Exact in integers, independent of the outsider's strength.
    """
    k = partition.k
    return partition.m_star * k * k > (k + 1) * (k + 1)


def is_weak_exact(partition: CPartition, config: GameConfig) -> bool:
    """Definitional weakness: some member of a non-singleton coalition earns
    strictly more after splitting off alone.

    Shares before and after depend only on the partition, not on which
    uniquely-generating profile produced it, so checking one member per
    coalition covers every generating profile.
    """
    from .solver import share_value

    for c in partition.coalitions:
        if len(c) < 2:
            continue
        before = share_value(partition.k, len(c), config)
        after_part = deviation_partition(partition, c[0])
        after = share_value(after_part.k, 1, config)
        if after > before + TOL:
            return True
    return False
