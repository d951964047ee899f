"""Equilibrium of the reduced sharing game among coalitions.

With k coalitions of cooperating players facing the adamant outsider, the
per-coalition equilibrium utility is 1/(1+k*eta)^2 while the outsider is
significant (eta > (k-1)/k) and 1/k^2 once it is not; the outsider earns
((1-k)+k*eta)^2/(1+k*eta)^2, zero when insignificant.  Within a coalition the
members are interchangeable, so each one's share is the coalition utility
split equally.  A damped best-response iteration on the aggregate game serves
as an independent numeric check of those closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from .model import (
    CPartition,
    Coalition,
    GameConfig,
    PartitionOutcome,
    StrategyProfile,
    is_significant,
)
from .partitions import formed_partitions


def coalition_value(k: int, config: GameConfig) -> float:
    """Equilibrium utility of any one of k coalitions of cooperating players."""
    if k < 1:
        raise ValueError("k must be positive")
    if is_significant(k, config):
        return 1.0 / (1.0 + k * config.eta) ** 2
    return 1.0 / (k * k)


def adamant_value(k: int, config: GameConfig) -> float:
    if is_significant(k, config):
        return ((1.0 - k) + k * config.eta) ** 2 / (1.0 + k * config.eta) ** 2
    return 0.0


def share_value(k: int, size: int, config: GameConfig) -> float:
    """Per-player share inside a size-``size`` coalition, one of k overall."""
    return coalition_value(k, config) / size


def aggregate_action(k: int, config: GameConfig) -> float:
    """Equilibrium aggregate action of each coalition.

    The closed form k*lam*lam0/(gamma*(lam+k*lam0)^2) only applies while the
    outsider is significant; with it silenced the coalitions play the
    symmetric k-player sharing equilibrium (k-1)/(gamma*k^2).
    """
    if is_significant(k, config):
        lam, lam0 = config.lam, config.lam0
        return k * lam * lam0 / (config.gamma * (lam + k * lam0) ** 2)
    return (k - 1) / (config.gamma * k * k)


def adamant_action(k: int, config: GameConfig) -> float:
    if is_significant(k, config):
        lam, lam0 = config.lam, config.lam0
        return k * lam * ((1.0 - k) * lam + k * lam0) / (config.gamma * (lam + k * lam0) ** 2)
    return 0.0


def coalition_utilities(partition: CPartition, config: GameConfig) -> PartitionOutcome:
    if partition.n != config.n:
        raise ValueError(f"partition covers {partition.n} players, config has {config.n}")
    k = partition.k
    value = coalition_value(k, config)
    action = aggregate_action(k, config)
    return PartitionOutcome(
        per_coalition_utility={c: value for c in partition.coalitions},
        adamant_utility=adamant_value(k, config),
        significant=is_significant(k, config),
        aggregate_actions={c: action for c in partition.coalitions},
        adamant_action=adamant_action(k, config),
    )


def coalition_sum(partition: CPartition, config: GameConfig) -> float:
    """Total utility of the cooperating side: k equal coalition utilities."""
    return partition.k * coalition_value(partition.k, config)


def coalition_sum_k(k: int, config: GameConfig) -> float:
    """Same total by coalition count alone; sizes never enter the sum."""
    return k * coalition_value(k, config)


@dataclass(frozen=True)
class ShareVector:
    """Per-player utilities, equal within each coalition."""

    shares: Mapping[int, float]

    def __getitem__(self, player: int) -> float:
        return self.shares[player]


def player_share(partition: CPartition, config: GameConfig) -> ShareVector:
    shares = {}
    for c in partition.coalitions:
        s = share_value(partition.k, len(c), config)
        for i in c:
            shares[i] = s
    return ShareVector(shares)


def profile_utility(prof: StrategyProfile, config: GameConfig) -> ShareVector:
    """Guaranteed utility per player: the minimum share over every partition
    the profile can form."""
    if prof.n != config.n:
        raise ValueError(f"profile has {prof.n} players, config has {config.n}")
    formed = formed_partitions(prof)
    shares = {i: math.inf for i in range(1, prof.n + 1)}
    for part in formed.partitions:
        vec = player_share(part, config)
        for i, s in vec.shares.items():
            if s < shares[i]:
                shares[i] = s
    return ShareVector(shares)


class NonConvergence(RuntimeError):
    def __init__(self, residual: float, iterations: int):
        super().__init__(f"best-response iteration stalled at residual {residual:.3e} "
                         f"after {iterations} iterations")
        self.residual = residual
        self.iterations = iterations


def _split_sizes(n: int, k: int) -> list[int]:
    base, extra = divmod(n, k)
    return [base + 1] * extra + [base] * (k - extra)


def numeric_equilibrium(
    k: int,
    config: GameConfig,
    tol: float = 1e-10,
    damping: float = 0.5,
    max_iters: int = 10_000,
) -> PartitionOutcome:
    """Solve the (k+1)-player aggregate sharing game by damped best response.

    Each aggregate player with weight w against opponents' weighted total D
    maximizes w*a/(w*a+D) - gamma*a at a* = sqrt(D/(gamma*w)) - D/w, clamped
    to its action box.  Returns the utilities and aggregate actions at the
    fixed point; independent of the closed forms above.

    The best-response slope grows like 1/w for light players, so a fixed
    damping factor oscillates at extreme weight ratios; the factor shrinks
    whenever the residual stops improving.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if not 1 <= k <= config.n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={config.n}")
    gamma = config.gamma
    sizes = _split_sizes(config.n, k)
    blocks: list[Coalition] = []
    start = 1
    for size in sizes:
        blocks.append(tuple(range(start, start + size)))
        start += size

    weights = [config.lam] * k
    caps = [size * config.action_cap for size in sizes]
    if config.adamant_present:
        weights.append(config.lam0)
        caps.append(config.action_cap)

    actions = [1.0 / (2.0 * gamma)] * len(weights)
    residual = math.inf
    last_residual = math.inf
    step = damping
    for iteration in range(max_iters):
        total = sum(w * a for w, a in zip(weights, actions))
        best = []
        for idx, (w, a) in enumerate(zip(weights, actions)):
            d = total - w * a
            if w <= 0.0:
                best.append(0.0)
            elif d <= 0.0:
                best.append(0.0)  # alone in the game: payoff sup is at a -> 0
            else:
                br = math.sqrt(d / (gamma * w)) - d / w
                best.append(min(max(br, 0.0), caps[idx]))
        residual = max(abs(b - a) for b, a in zip(best, actions))
        scale = max(1.0, max(actions))
        if residual < tol * scale:
            break
        if residual > last_residual:
            step = max(step * 0.5, 1e-4)
        last_residual = residual
        actions = [a + step * (b - a) for a, b in zip(actions, best)]
    else:
        raise NonConvergence(residual, max_iters)

    total = sum(w * a for w, a in zip(weights, actions))
    utilities = []
    for w, a in zip(weights, actions):
        if total <= 0.0:
            utilities.append(1.0 if w > 0.0 else 0.0)  # sole bidder limit
        else:
            utilities.append(w * a / total - gamma * a)
    if config.adamant_present:
        adamant_u, adamant_a = utilities[-1], actions[-1]
    else:
        adamant_u, adamant_a = 0.0, 0.0
    return PartitionOutcome(
        per_coalition_utility={b: u for b, u in zip(blocks, utilities[:k])},
        adamant_utility=adamant_u,
        significant=is_significant(k, config),
        aggregate_actions={b: a for b, a in zip(blocks, actions[:k])},
        adamant_action=adamant_a,
    )


@dataclass(frozen=True)
class ActionProfile:
    """Aggregate actions of the reduced game, validated against the caps."""

    adamant_action: float
    coalition_actions: Mapping[Coalition, float]

    @classmethod
    def from_outcome(cls, outcome: PartitionOutcome, config: GameConfig) -> "ActionProfile":
        if not 0.0 <= outcome.adamant_action <= config.action_cap:
            raise ValueError("adamant action outside [0, action_cap]")
        for c, a in outcome.aggregate_actions.items():
            if not 0.0 <= a <= len(c) * config.action_cap:
                raise ValueError(f"aggregate action of {c} outside its box")
        return cls(outcome.adamant_action, dict(outcome.aggregate_actions))


def oracle_deviation(k: int, config: GameConfig, tol: float = 1e-10) -> float:
    """Largest absolute gap between the closed forms and the numeric solver."""
    numeric = numeric_equilibrium(k, config, tol=tol)
    gaps = [abs(numeric.adamant_utility - adamant_value(k, config)),
            abs(numeric.adamant_action - adamant_action(k, config))]
    for c, u in numeric.per_coalition_utility.items():
        gaps.append(abs(u - coalition_value(k, config)))
    for c, a in numeric.aggregate_actions.items():
        gaps.append(abs(a - aggregate_action(k, config)))
    return max(gaps)
