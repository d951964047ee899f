"""Independent brute-force implementations used as oracles by the tests.

Everything here is written straight from the definitions, sharing no code
with the package: set partitions by recursive insertion, formation by
filtering against the mutual-consent and no-coarsening conditions, utilities
inlined, equilibrium checks by trying every alternative wish set.
"""

import itertools


def set_partitions_bf(items):
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for p in set_partitions_bf(rest):
        for idx in range(len(p)):
            yield p[:idx] + [sorted([first] + p[idx])] + p[idx + 1 :]
        yield [[first]] + p


def mutual_block(block, wishes):
    return all(
        j in wishes[i - 1] and i in wishes[j - 1]
        for i, j in itertools.combinations(block, 2)
    )


def strictly_coarser(pa, pb):
    """pa is strictly better than pb: every block of pb inside a block of pa."""
    if pa == pb:
        return False
    return all(any(set(c) <= set(d) for d in pa) for c in pb)


def formed_bf(wishes, n):
    """Partitions formed by a wish profile, straight from the definition."""
    cands = [
        sorted((tuple(b) for b in p), key=lambda c: c[0])
        for p in set_partitions_bf(range(1, n + 1))
        if all(mutual_block(b, wishes) for b in p)
    ]
    return [tuple(p) for p in cands if not any(strictly_coarser(q, p) for q in cands)]


def share_bf(k, size, eta, adamant):
    if adamant and eta > (k - 1) / k:
        return 1.0 / (size * (1.0 + k * eta) ** 2)
    return 1.0 / (k * k * size)


def utility_bf(wishes, n, eta, adamant, player):
    best = None
    for p in formed_bf(wishes, n):
        k = len(p)
        size = next(len(b) for b in p if player in b)
        v = share_bf(k, size, eta, adamant)
        best = v if best is None else min(best, v)
    return best


def wish_sets(n, i):
    others = [j for j in range(1, n + 1) if j != i]
    for r in range(n):
        for extra in itertools.combinations(others, r):
            yield tuple(sorted((i,) + extra))


def all_profiles(n):
    return itertools.product(*[list(wish_sets(n, i)) for i in range(1, n + 1)])


def is_nash_bf(wishes, n, eta, adamant, tol=1e-12):
    for i in range(1, n + 1):
        current = utility_bf(wishes, n, eta, adamant, i)
        for alt in wish_sets(n, i):
            trial = wishes[: i - 1] + (alt,) + wishes[i:]
            if utility_bf(trial, n, eta, adamant, i) > current + tol:
                return False
    return True


def canonicalize_bf(wishes, n):
    best = None
    for perm in itertools.permutations(range(1, n + 1)):
        sigma = dict(zip(range(1, n + 1), perm))
        relabeled = [None] * n
        for i in range(1, n + 1):
            relabeled[sigma[i] - 1] = tuple(sorted(sigma[j] for j in wishes[i - 1]))
        cand = tuple(relabeled)
        if best is None or cand < best:
            best = cand
    return best
