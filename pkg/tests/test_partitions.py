import itertools
import math

import pytest

from coalition_forge import (
    CPartition,
    MutualGraph,
    all_partitions,
    alone_profile,
    canonical_generating_profile,
    deviation_partition,
    formed_partitions,
    is_better,
    is_weak_criterion,
    is_weak_exact,
    make_config,
    profile,
)
from coalition_forge.model import StrategyProfile

from helpers import all_profiles, formed_bf


def P(*groups):
    return CPartition.from_groups(groups)


def as_tuples(partition):
    return tuple(partition.coalitions)


def test_all_partitions_counts_are_bell_numbers():
    bell = {1: 1, 2: 2, 3: 5, 4: 15, 5: 52, 6: 203}
    for n, count in bell.items():
        parts = all_partitions(n)
        assert len(parts) == count
        assert len(set(parts)) == count


def test_is_better_examples():
    assert is_better(P([1, 2, 3]), P([1, 2], [3]))
    assert not is_better(P([1, 2], [3]), P([1], [2, 3]))  # incomparable
    p = P([1, 2], [3])
    assert not is_better(p, p)
    with pytest.raises(ValueError):
        is_better(P([1, 2]), P([1, 2], [3]))


def test_formed_partitions_table_examples():
    fp = formed_partitions(profile([1, 2], [1, 2, 3], [1, 2, 3]))
    assert set(fp.partitions) == {P([1, 2], [3]), P([1], [2, 3])}
    assert not fp.unique

    fp = formed_partitions(profile([1], [1, 2, 3], [1, 2, 3]))
    assert fp.partitions == (P([1], [2, 3]),)
    assert fp.unique

    fp = formed_partitions(profile([1, 2], [1, 2]))
    assert fp.partitions == (P([1, 2]),)
    assert fp.unique

    fp = formed_partitions(profile([1, 2], [1, 2, 3, 4], [1, 2, 3, 4], [1, 2, 3, 4]))
    assert set(fp.partitions) == {P([1, 2], [3, 4]), P([1], [2, 3, 4])}


def test_formed_partitions_diamond_graph():
    # Mutual graph = complete minus the 1-4 edge.  The no-coarsening rule
    # admits the two pair-pair splits alongside the published pair: none of
    # them has a viable merge, and the extra ones never lower any player's
    # guaranteed share because a pair share beats a triple share.
    fp = formed_partitions(profile([1, 2, 3], [1, 2, 3, 4], [1, 2, 3, 4], [1, 2, 3, 4]))
    assert set(fp.partitions) == {
        P([1, 2, 3], [4]),
        P([1], [2, 3, 4]),
        P([1, 2], [3, 4]),
        P([1, 3], [2, 4]),
    }


def test_formed_matches_bruteforce_exhaustively_small():
    for n in (2, 3):
        for wishes in all_profiles(n):
            got = {as_tuples(p) for p in formed_partitions(StrategyProfile(wishes)).partitions}
            want = set(formed_bf(wishes, n))
            assert got == want, wishes


def test_formed_partitions_are_mutual_cliques_and_minimal():
    for wishes in all_profiles(3):
        prof = StrategyProfile(wishes)
        graph = MutualGraph.from_profile(prof)
        formed = formed_partitions(prof).partitions
        for part in formed:
            assert all(graph.is_clique(c) for c in part.coalitions)
        for pa, pb in itertools.permutations(formed, 2):
            assert not is_better(pa, pb)


def test_canonical_generating_profile_forms_its_partition_uniquely():
    for n in (2, 3, 4, 5):
        for part in all_partitions(n):
            fp = formed_partitions(canonical_generating_profile(part))
            assert fp.unique and fp.partitions[0] == part


def test_deviation_partition_examples():
    assert deviation_partition(P([1, 2], [3]), 1) == P([1], [2], [3])
    p = P([1], [2, 3])
    assert deviation_partition(p, 1) == p  # singleton split is a no-op
    assert deviation_partition(P([1, 2, 3, 4]), 2) == P([2], [1, 3, 4])
    with pytest.raises(ValueError):
        deviation_partition(P([1, 2]), 3)


def test_unique_formation_splits_under_lone_deviation():
    # For every uniquely-forming profile, rewishing any player to be alone
    # forms, uniquely, the split partition.
    for n in (2, 3, 4):
        for wishes in all_profiles(n):
            prof = StrategyProfile(wishes)
            fp = formed_partitions(prof)
            if not fp.unique:
                continue
            part = fp.partitions[0]
            for i in range(1, n + 1):
                fp2 = formed_partitions(prof.replace(i, (i,)))
                assert fp2.unique
                assert fp2.partitions[0] == deviation_partition(part, i)


def test_formed_partitions_permutation_equivariant():
    for wishes in all_profiles(3):
        prof = StrategyProfile(wishes)
        base = {as_tuples(p) for p in formed_partitions(prof).partitions}
        for perm in itertools.permutations(range(1, 4)):
            sigma = dict(zip(range(1, 4), perm))
            relabeled = [None] * 3
            for i in range(1, 4):
                relabeled[sigma[i] - 1] = tuple(sorted(sigma[j] for j in wishes[i - 1]))
            got = {
                as_tuples(p)
                for p in formed_partitions(StrategyProfile(tuple(relabeled))).partitions
            }
            want = {
                tuple(sorted((tuple(sorted(sigma[i] for i in c)) for c in part),
                             key=lambda c: c[0]))
                for part in base
            }
            assert got == want


def test_alone_profile_always_allowed():
    # The all-alone partition satisfies mutual consent under every profile;
    # it is formed exactly when no mutual edge exists.
    for wishes in all_profiles(3):
        prof = StrategyProfile(wishes)
        graph = MutualGraph.from_profile(prof)
        formed = formed_partitions(prof).partitions
        alc = P([1], [2], [3])
        assert (alc in formed) == (not graph.edges)


def test_weak_criterion_examples():
    assert is_weak_criterion(P([1, 2], [3], [4], [5]))  # m*=2 > 25/16
    assert not is_weak_criterion(P([1, 2]))  # m*=2 <= 4
    assert not is_weak_criterion(P([1, 2], [3, 4]))  # 2 <= 9/4, TTC stays viable


def test_weak_exact_examples():
    config = make_config(5, 1.0)
    p = P([1, 2], [3], [4], [5])
    # pair share (1/2)/25 = 0.02 < alone share 1/36 after the split
    assert is_weak_exact(p, config)

    assert not is_weak_exact(P([1, 2]), make_config(2, 1.0))
    assert not is_weak_exact(P([1], [2], [3]), make_config(3, 0.3))
    assert not is_weak_exact(P([1], [2], [3]), make_config(3, 4.0))


ETA_GRID = (0.01, 0.1, 0.3, 0.5, 2 / 3, 0.75, 0.8, 1.0, 2.0, 5.0, 10.0)


def test_weak_criterion_implies_weak_exact():
    for n in range(2, 7):
        parts = all_partitions(n)
        for eta in ETA_GRID:
            config = make_config(n, eta)
            for p in parts:
                if is_weak_criterion(p):
                    assert is_weak_exact(p, config), (p, eta)


def test_all_non_alone_partitions_weak_for_large_n():
    for n in (5, 6):
        for p in all_partitions(n):
            if p.k != n:
                assert is_weak_criterion(p), p


def test_weakness_is_x_independent():
    # The shares behind definitional weakness depend only on the partition,
    # so every uniquely generating profile yields the same verdict; spot
    # check by comparing against a per-profile evaluation at n=3.
    config = make_config(3, 0.9)
    for wishes in all_profiles(3):
        prof = StrategyProfile(wishes)
        fp = formed_partitions(prof)
        if not fp.unique:
            continue
        part = fp.partitions[0]
        verdicts = []
        for i in range(1, 4):
            if len(part.block_of(i)) < 2:
                continue
            before = 1.0 / (len(part.block_of(i)) * (1 + part.k * 0.9) ** 2) \
                if 0.9 > (part.k - 1) / part.k else 1.0 / (part.k**2 * len(part.block_of(i)))
            after_k = part.k + 1
            after = 1.0 / (1 + after_k * 0.9) ** 2 if 0.9 > (after_k - 1) / after_k \
                else 1.0 / after_k**2
            verdicts.append(after > before + 1e-12)
        assert is_weak_exact(part, config) == any(verdicts)
