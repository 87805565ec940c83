import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from c2m_alloc.coalition_values import CharacteristicFunction, compute_characteristic
from c2m_alloc.game_toolkit import GameSizeError, compare, compare_game, core_membership, shapley
from c2m_alloc.core_allocator import allocate_game

from conftest import make_instance


def permutation_shapley(values, n):
    """Average marginal contribution over all join orders, v(empty) = 0."""
    v = list(values)
    v[0] = 0
    phi = [0.0] * n
    for order in itertools.permutations(range(n)):
        mask = 0
        for player in order:
            phi[player] += v[mask | 1 << player] - v[mask]
            mask |= 1 << player
    return [x / math.factorial(n) for x in phi]


def test_two_player_example(two_player_game):
    assert shapley(two_player_game).values.tolist() == pytest.approx([7.0, 5.0])


def test_symmetric_game(symmetric_game):
    assert shapley(symmetric_game).values == pytest.approx([10 / 3] * 3, abs=1e-12)


def test_dummy_gets_nothing():
    base = {1: 3, 2: 5, 3: 11}
    # player 3 adds nothing anywhere
    table = {m | extra: v for m, v in base.items() for extra in (0, 4)}
    table[4] = 0
    cf = CharacteristicFunction.from_dict(3, table)
    assert shapley(cf).values[2] == 0.0


def test_matches_permutation_average():
    rng = np.random.default_rng(3)
    for n in range(1, 6):
        values = rng.integers(-20, 50, 1 << n)
        cf = CharacteristicFunction(values)
        assert shapley(cf).values == pytest.approx(permutation_shapley(values, n), abs=1e-9)


def test_empty_coalition_value_is_ignored(fixture_a):
    cf = compute_characteristic(fixture_a)
    assert cf[0] != 0
    phi = shapley(cf).values
    assert phi.sum() == pytest.approx(cf.grand_value)
    assert phi.tolist() == pytest.approx([(200 + 250) / 2, (100 + 150) / 2])


def test_size_guard():
    with pytest.raises(GameSizeError):
        shapley(CharacteristicFunction(np.zeros(1 << 17)))


def test_core_membership(symmetric_game):
    check = core_membership(symmetric_game, [10 / 3] * 3)
    assert not check.in_core
    assert check.worst_deficit == pytest.approx(4 / 3, abs=1e-6)
    assert check.worst_coalition in (3, 5, 6)
    assert check.budget_gap == pytest.approx(0, abs=1e-12)


def test_core_membership_single_player():
    check = core_membership(CharacteristicFunction(np.array([0, 9])), [9])
    assert check.in_core


def test_budget_gap_breaks_core(two_player_game):
    assert core_membership(two_player_game, [6, 6]).in_core
    assert not core_membership(two_player_game, [7, 6]).in_core
    with pytest.raises(ValueError):
        core_membership(two_player_game, [6])


def test_compare_symmetric(symmetric_game):
    comp = compare_game(symmetric_game, allocate_game(symmetric_game, [1, 1, 1]))
    assert not comp.shapley_core.in_core
    assert comp.allocation.gamma == pytest.approx(5 / 6)
    doc = comp.to_dict()
    assert doc["empty_coalition"] == "v(empty) = 0"
    assert doc["gamma_core"]["gamma"] == pytest.approx(5 / 6)


def test_compare_in_core_instance():
    # each serves half the demand alone (200), together everything (600)
    inst = make_instance(10, 2, 100, 5, [[4, 4]], [[10, 10]])
    comp = compare(inst)
    assert comp.allocation.in_core
    assert comp.allocation_core.in_core
    assert comp.allocation.profits == pytest.approx([300, 300])


def test_compare_single_manufacturer():
    inst = make_instance(10, 2, 100, 5, [[4]], [[10]])
    comp = compare(inst)
    assert comp.allocation.profits.tolist() == pytest.approx([200.0])
    assert comp.shapley.values.tolist() == pytest.approx([200.0])


def test_compare_reports_infeasible_instance():
    inst = make_instance(10, 5, 100, 1, [[9]], [[1]])
    comp = compare(inst)
    assert comp.allocation is None
    assert "negative" in comp.note


def _swap(mask, a, b):
    bit_a, bit_b = mask >> a & 1, mask >> b & 1
    return mask & ~(1 << a | 1 << b) | bit_a << b | bit_b << a


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 6))
def test_shapley_axioms(seed, n):
    rng = np.random.default_rng(seed)
    # dummy: the last player's presence never changes a coalition's value
    inner = rng.normal(0, 100, 1 << (n - 1))
    inner[0] = 0
    cf = CharacteristicFunction(np.concatenate([inner, inner]))
    phi = shapley(cf).values
    assert phi.sum() == pytest.approx(cf.grand_value, abs=1e-6)
    assert abs(phi[n - 1]) <= 1e-9

    # symmetry: average a random game with its image under swapping players a and b
    a, b = sorted(rng.choice(n, 2, replace=False))
    raw = rng.normal(0, 100, 1 << n)
    sym = np.array([(raw[m] + raw[_swap(m, a, b)]) / 2 for m in range(1 << n)])
    phi = shapley(CharacteristicFunction(sym)).values
    assert phi[a] == pytest.approx(phi[b], abs=1e-9)
