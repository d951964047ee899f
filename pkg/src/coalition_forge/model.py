"""Core domain model: configurations, coalitions, partitions, wish profiles.

Players 1..n are the cooperating side; index 0 is reserved for the adamant
outsider, which never joins a coalition.  All cooperating players carry the
same influence factor ``lam``; the outsider's factor is ``lam0 = eta * lam``,
so ``eta`` measures its relative strength.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping

ADAMANT = 0

TOL = 1e-12

Coalition = tuple  # tuple[int, ...], sorted, players 1..n

INSIGNIFICANT_MARK = "°"


@dataclass(frozen=True)
class GameConfig:
    """Scenario parameters for n cooperating players and one adamant outsider."""

    n: int
    eta: float
    lam: float
    lam0: float
    gamma: float
    action_cap: float
    adamant_present: bool

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"need at least one cooperating player, got n={self.n}")
        if self.lam <= 0:
            raise ValueError("influence factor lam must be positive")
        if self.gamma <= 0:
            raise ValueError("cost factor gamma must be positive")
        if self.eta < 0 or self.lam0 < 0:
            raise ValueError("adamant strength cannot be negative")
        if abs(self.lam0 - self.eta * self.lam) > TOL * max(1.0, abs(self.lam0)):
            raise ValueError("lam0 must equal eta * lam")
        if (self.eta == 0) == self.adamant_present:
            raise ValueError("adamant_present must hold exactly when eta > 0")
        if self.action_cap * self.gamma <= self.n:
            raise ValueError("action cap too small: need action_cap > n / gamma")


def make_config(
    n: int,
    eta: float,
    *,
    lam: float = 1.0,
    gamma: float = 1.0,
    action_cap: float | None = None,
) -> GameConfig:
    """Build a validated config; eta == 0 means the outsider is absent."""
    eta = float(eta)
    if action_cap is None:
        action_cap = 2.0 * n / gamma
    return GameConfig(
        n=n,
        eta=eta,
        lam=lam,
        lam0=eta * lam,
        gamma=gamma,
        action_cap=action_cap,
        adamant_present=eta > 0,
    )


def is_significant(k: int, config: GameConfig) -> bool:
    """Whether the adamant outsider earns nonzero utility against k coalitions.

    Holds iff eta > (k-1)/k; always true for the grand coalition (k=1) when
    the outsider is present, never without one.
    """
    return config.adamant_present and config.eta > (k - 1) / k


def coalition(members: Iterable[int]) -> Coalition:
    """Canonical coalition: sorted tuple, no duplicates, players >= 1."""
    ms = tuple(sorted(members))
    if not ms:
        raise ValueError("a coalition cannot be empty")
    if any(b <= a for a, b in zip(ms, ms[1:])):
        raise ValueError(f"duplicate members in coalition {ms}")
    if ms[0] < 1:
        raise ValueError("player indices start at 1; index 0 never joins coalitions")
    return ms


@dataclass(frozen=True)
class CPartition:
    """A partition of the cooperating players {1..n} into coalitions.

    Stored canonically: members sorted within each coalition, coalitions
    sorted by smallest member.  The outsider's singleton is implicit.
    """

    coalitions: tuple[Coalition, ...]

    def __post_init__(self):
        if not self.coalitions:
            raise ValueError("a partition needs at least one coalition")
        seen: set[int] = set()
        for c in self.coalitions:
            if c != coalition(c):
                raise ValueError(f"coalition {c} is not in canonical form")
            if seen & set(c):
                raise ValueError("coalitions must be pairwise disjoint")
            seen |= set(c)
        if seen != set(range(1, len(seen) + 1)):
            raise ValueError(f"coalitions must cover exactly 1..n, got {sorted(seen)}")
        if list(self.coalitions) != sorted(self.coalitions, key=lambda c: c[0]):
            raise ValueError("coalitions must be sorted by smallest member")

    @classmethod
    def from_groups(cls, groups: Iterable[Iterable[int]]) -> "CPartition":
        cs = sorted((coalition(g) for g in groups if g), key=lambda c: c[0])
        return cls(tuple(cs))

    @property
    def n(self) -> int:
        return sum(len(c) for c in self.coalitions)

    @property
    def k(self) -> int:
        """Number of coalitions of cooperating players."""
        return len(self.coalitions)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(sorted((len(c) for c in self.coalitions), reverse=True))

    @property
    def m_star(self) -> int:
        """Largest coalition size (the outsider's singleton never exceeds it)."""
        return max(len(c) for c in self.coalitions)

    def block_of(self, player: int) -> Coalition:
        for c in self.coalitions:
            if player in c:
                return c
        raise ValueError(f"player {player} not in partition")


@dataclass(frozen=True)
class StrategyProfile:
    """Per-player wish sets: wishes[i-1] is the set player i wants to join."""

    wishes: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.wishes)
        for i, w in enumerate(self.wishes, start=1):
            if w != tuple(sorted(set(w))):
                raise ValueError(f"wish set {w} of player {i} is not canonical")
            if i not in w:
                raise ValueError(f"player {i} must include itself in its wish set")
            if w[0] < 1 or w[-1] > n:
                raise ValueError(f"wish set {w} of player {i} outside 1..{n}")

    @property
    def n(self) -> int:
        return len(self.wishes)

    def wish_of(self, player: int) -> tuple[int, ...]:
        return self.wishes[player - 1]

    def replace(self, player: int, wish: Iterable[int]) -> "StrategyProfile":
        new = list(self.wishes)
        new[player - 1] = tuple(sorted(set(wish)))
        return StrategyProfile(tuple(new))


def profile(*wish_groups: Iterable[int]) -> StrategyProfile:
    return StrategyProfile(tuple(tuple(sorted(set(w))) for w in wish_groups))


def alone_profile(n: int) -> StrategyProfile:
    return StrategyProfile(tuple((i,) for i in range(1, n + 1)))


def canonical_generating_profile(partition: CPartition) -> StrategyProfile:
    """The profile where every player wishes exactly its own coalition.

    It always forms the given partition, uniquely.
    """
    wishes = [()] * partition.n
    for c in partition.coalitions:
        for i in c:
            wishes[i - 1] = c
    return StrategyProfile(tuple(wishes))


@dataclass(frozen=True)
class PartitionLabel:
    """Class of a partition plus whether the outsider is significant there."""

    name: str
    significant: bool

    @property
    def display(self) -> str:
        return self.name if self.significant else self.name + INSIGNIFICANT_MARK

    def __str__(self) -> str:
        return self.display


def class_name(partition: CPartition) -> str:
    """GC for the grand coalition, ALC for all-alone, TTC for the 2+2 split
    at n=4, otherwise P<k> by the number of coalitions."""
    n, k = partition.n, partition.k
    if k == 1:
        return "GC"
    if k == n:
        return "ALC"
    if n == 4 and partition.sizes == (2, 2):
        return "TTC"
    return f"P{k}"


def classify(partition: CPartition, config: GameConfig) -> PartitionLabel:
    if partition.n != config.n:
        raise ValueError(f"partition covers {partition.n} players, config has {config.n}")
    return PartitionLabel(class_name(partition), is_significant(partition.k, config))


def label_sort_key(name: str) -> tuple[int, str]:
    base = name.rstrip(INSIGNIFICANT_MARK)
    if base == "GC":
        return (1, base)
    if base == "ALC":
        return (10_000, base)
    if base == "TTC":
        return (2, base)  # same k as P2, listed after it
    return (int(base[1:]), base)


def canonicalize_profile(prof: StrategyProfile) -> StrategyProfile:
    """Lexicographically least profile over all relabelings of the players.

    Relabeling sigma moves player i to sigma(i) and renames wish contents the
    same way.  Explicit enumeration of all n! permutations; n stays small.
    """
    n = prof.n
    best = None
    for perm in itertools.permutations(range(1, n + 1)):
        sigma = {i: perm[i - 1] for i in range(1, n + 1)}
        relabeled = [()] * n
        for i in range(1, n + 1):
            relabeled[sigma[i] - 1] = tuple(sorted(sigma[j] for j in prof.wishes[i - 1]))
        cand = tuple(relabeled)
        if best is None or cand < best:
            best = cand
    return StrategyProfile(best)


@dataclass(frozen=True)
class PartitionOutcome:
    """Equilibrium utilities and aggregate actions of the reduced sharing game."""

    per_coalition_utility: Mapping[Coalition, float]
    adamant_utility: float
    significant: bool
    aggregate_actions: Mapping[Coalition, float]
    adamant_action: float


def format_partition(partition: CPartition) -> str:
    return "|".join("{" + ",".join(map(str, c)) + "}" for c in partition.coalitions)


def parse_partition(text: str) -> CPartition:
    groups = []
    for chunk in text.split("|"):
        chunk = chunk.strip()
        if not (chunk.startswith("{") and chunk.endswith("}")):
            raise ValueError(f"bad coalition {chunk!r}, expected {{1,2}}")
        groups.append(int(x) for x in chunk[1:-1].split(","))
    return CPartition.from_groups(groups)


def format_profile(prof: StrategyProfile) -> str:
    return ";".join(",".join(map(str, w)) for w in prof.wishes)


def parse_profile(text: str) -> StrategyProfile:
    return profile(*[[int(x) for x in part.split(",")] for part in text.split(";")])
