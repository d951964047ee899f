import math

import pytest

from coalition_forge import (
    CPartition,
    NonConvergence,
    adamant_action,
    adamant_value,
    aggregate_action,
    coalition_sum,
    coalition_sum_k,
    coalition_utilities,
    coalition_value,
    make_config,
    numeric_equilibrium,
    oracle_deviation,
    player_share,
    profile_utility,
    profile,
    share_value,
)
from coalition_forge.solver import ActionProfile, _split_sizes


def P(*groups):
    return CPartition.from_groups(groups)


def test_coalition_utilities_substitutions():
    # k=2, eta=1: each coalition 1/9, outsider ((1-2)+2)^2/9 = 1/9
    c = make_config(4, 1.0)
    out = coalition_utilities(P([1, 2], [3, 4]), c)
    assert all(v == pytest.approx(1 / 9) for v in out.per_coalition_utility.values())
    assert out.adamant_utility == pytest.approx(1 / 9)
    assert out.significant

    # k=2, eta=0.4 <= 1/2: each 1/4, outsider nothing
    out = coalition_utilities(P([1, 2], [3, 4]), make_config(4, 0.4))
    assert all(v == pytest.approx(1 / 4) for v in out.per_coalition_utility.values())
    assert out.adamant_utility == 0.0
    assert not out.significant

    # k=1, eta=1, lam=gamma=1: grand coalition 1/4, actions 1/4 and 1/4
    out = coalition_utilities(P([1]), make_config(1, 1.0))
    assert out.per_coalition_utility[(1,)] == pytest.approx(1 / 4)
    assert out.aggregate_actions[(1,)] == pytest.approx(1 / 4)
    assert out.adamant_action == pytest.approx(1 / 4)

    # without the outsider the grand coalition keeps everything
    out = coalition_utilities(P([1, 2, 3]), make_config(3, 0.0))
    assert out.per_coalition_utility[(1, 2, 3)] == pytest.approx(1.0)
    assert out.adamant_utility == 0.0


def test_player_share_examples():
    assert player_share(P([1, 2, 3]), make_config(3, 1.0))[1] == pytest.approx(1 / 12)
    vec = player_share(P([1], [2], [3]), make_config(3, 1.0))
    assert all(vec[i] == pytest.approx(1 / 16) for i in (1, 2, 3))
    vec = player_share(P([1, 2], [3, 4]), make_config(4, 0.0))
    assert all(vec[i] == pytest.approx(1 / 8) for i in range(1, 5))


def test_share_sum_conservation():
    for n in range(2, 7):
        for eta in (0.0, 0.3, 0.7, 1.5):
            config = make_config(n, eta)
            from coalition_forge import all_partitions

            for part in all_partitions(n):
                out = coalition_utilities(part, config)
                vec = player_share(part, config)
                for c, total in out.per_coalition_utility.items():
                    assert sum(vec[i] for i in c) == pytest.approx(total, abs=1e-12)


def test_profile_utility_examples():
    c = make_config(3, 1.0)
    u = profile_utility(profile([1, 2], [1, 2, 3], [1, 2, 3]), c)
    assert u[1] == pytest.approx(1 / 18)

    u = profile_utility(profile([1], [1, 2, 3], [1, 2, 3]), c)
    assert u[1] == pytest.approx(1 / 9)

    for eta in (0.2, 0.8, 3.0):
        c2 = make_config(2, eta)
        u = profile_utility(profile([1], [2]), c2)
        assert u[1] == pytest.approx(share_value(2, 1, c2))


def test_profile_utility_dominated_by_each_formed_partition():
    from coalition_forge import formed_partitions

    c = make_config(4, 0.9)
    prof = profile([1, 2, 3], [1, 2, 3, 4], [1, 2, 3, 4], [1, 2, 3, 4])
    u = profile_utility(prof, c)
    formed = formed_partitions(prof)
    assert not formed.unique
    for part in formed.partitions:
        vec = player_share(part, c)
        for i in range(1, 5):
            assert u[i] <= vec[i] + 1e-15

    unique_prof = profile([1], [1, 2, 3], [1, 2, 3])
    c3 = make_config(3, 0.9)
    formed = formed_partitions(unique_prof)
    assert formed.unique
    vec = player_share(formed.partitions[0], c3)
    u = profile_utility(unique_prof, c3)
    assert all(u[i] == pytest.approx(vec[i]) for i in (1, 2, 3))


def test_coalition_sum_examples():
    assert coalition_sum(P([1]), make_config(1, 1.0)) == pytest.approx(1 / 4)
    assert coalition_sum(P([1, 2], [3]), make_config(3, 0.45)) == pytest.approx(1 / 2)
    assert coalition_sum(P([1, 2, 3]), make_config(3, 0.0)) == pytest.approx(1.0)
    for n, k, eta in ((4, 2, 0.8), (5, 3, 1.2), (6, 4, 0.1)):
        config = make_config(n, eta)
        parts = [p for p in __import__("coalition_forge").all_partitions(n) if p.k == k]
        for p in parts:
            assert coalition_sum(p, config) == pytest.approx(coalition_sum_k(k, config))


def test_monotone_in_k_and_eta_when_significant():
    etas = [0.9, 1.3, 2.0, 5.0]
    for size in (1, 2, 3):
        for eta in etas:
            config = make_config(6, eta)
            values = []
            for k in range(1, 7):
                if eta > (k - 1) / k:
                    values.append(share_value(k, size, config))
            assert all(a > b for a, b in zip(values, values[1:]))
        for k in (1, 2, 3):
            shares = [share_value(k, size, make_config(6, eta)) for eta in etas]
            assert all(a > b for a, b in zip(shares, shares[1:]))


def test_boundary_continuity_in_eta():
    for k in range(2, 7):
        edge = (k - 1) / k
        below = coalition_value(k, make_config(6, edge - 1e-9))
        at = coalition_value(k, make_config(6, edge))
        above = coalition_value(k, make_config(6, edge + 1e-9))
        assert below == pytest.approx(1 / k**2)
        assert at == pytest.approx(1 / k**2)
        assert above == pytest.approx(1 / k**2, rel=1e-6)
        assert adamant_value(k, make_config(6, edge + 1e-9)) == pytest.approx(0.0, abs=1e-12)


def test_low_eta_matches_no_adamant_for_k_ge_2():
    tiny = make_config(6, 1e-6)
    absent = make_config(6, 0.0)
    for k in range(2, 7):
        assert coalition_value(k, tiny) == pytest.approx(
            coalition_value(k, absent), abs=1e-6
        )


ORACLE_GRID = [
    (k, eta)
    for k in range(1, 7)
    for eta in {0.1, 0.3, 1.0, 2.0, 5.0,
                round((k - 1) / k - 0.01, 12), round((k - 1) / k + 0.01, 12)}
    if eta > 0
]


@pytest.mark.parametrize("k,eta", sorted(ORACLE_GRID))
def test_oracle_matches_closed_forms(k, eta):
    config = make_config(6, eta)
    assert oracle_deviation(k, config, tol=1e-11) < 1e-6


def test_oracle_examples():
    out = numeric_equilibrium(1, make_config(1, 1.0), tol=1e-12)
    assert out.per_coalition_utility[(1,)] == pytest.approx(0.25, abs=1e-8)
    assert out.adamant_utility == pytest.approx(0.25, abs=1e-8)

    # k=2, lam=1, lam0=0.4: outsider silenced, coalitions at 1/4; the
    # symmetric two-coalition aggregate is (k-1)/(gamma k^2) = 1/4
    out = numeric_equilibrium(2, make_config(2, 0.4), tol=1e-12)
    assert out.adamant_action == pytest.approx(0.0, abs=1e-9)
    for v in out.per_coalition_utility.values():
        assert v == pytest.approx(0.25, abs=1e-8)
    for a in out.aggregate_actions.values():
        assert a == pytest.approx(1 / 4, abs=1e-8)

    # k=3, eta=2: coalitions 1/49, outsider (4/7)^2
    out = numeric_equilibrium(3, make_config(3, 2.0), tol=1e-12)
    for v in out.per_coalition_utility.values():
        assert v == pytest.approx(1 / 49, abs=1e-8)
    assert out.adamant_utility == pytest.approx(16 / 49, abs=1e-8)


def test_oracle_without_adamant():
    out = numeric_equilibrium(1, make_config(2, 0.0), tol=1e-12)
    assert out.per_coalition_utility[(1, 2)] == pytest.approx(1.0)
    out = numeric_equilibrium(2, make_config(2, 0.0), tol=1e-12)
    for v in out.per_coalition_utility.values():
        assert v == pytest.approx(0.25, abs=1e-8)


def test_oracle_rejects_bad_arguments():
    config = make_config(3, 1.0)
    with pytest.raises(ValueError):
        numeric_equilibrium(4, config)
    with pytest.raises(ValueError):
        numeric_equilibrium(2, config, tol=0.0)
    with pytest.raises(NonConvergence):
        numeric_equilibrium(3, config, tol=1e-9, max_iters=2)


def test_action_profile_validation():
    config = make_config(2, 1.0)
    out = numeric_equilibrium(2, config)
    ap = ActionProfile.from_outcome(out, config)
    assert ap.adamant_action == out.adamant_action
    assert _split_sizes(5, 2) == [3, 2]
    assert _split_sizes(6, 3) == [2, 2, 2]


def test_insignificant_actions_validated_by_oracle():
    # The closed aggregate (k-1)/(gamma k^2) is a derived convention for the
    # silenced-outsider regime; the fixed point must land on it.
    for k, eta in ((2, 0.3), (3, 0.5), (4, 0.7), (5, 0.75)):
        config = make_config(6, eta)
        out = numeric_equilibrium(k, config, tol=1e-12)
        assert out.adamant_action == pytest.approx(0.0, abs=1e-9)
        for a in out.aggregate_actions.values():
            assert a == pytest.approx(aggregate_action(k, config), abs=1e-8)


def test_aggregate_action_significant_form():
    config = make_config(4, 1.5, lam=2.0, gamma=0.5)
    k = 2
    lam, lam0 = config.lam, config.lam0
    expect = k * lam * lam0 / (config.gamma * (lam + k * lam0) ** 2)
    assert aggregate_action(k, config) == pytest.approx(expect)
    expect0 = k * lam * ((1 - k) * lam + k * lam0) / (config.gamma * (lam + k * lam0) ** 2)
    assert adamant_action(k, config) == pytest.approx(expect0)
    assert oracle_deviation(k, config, tol=1e-12) < 1e-7
