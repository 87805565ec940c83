import dataclasses
import warnings

import numpy as np
import pytest

from c2m_alloc.coalition_values import CharacteristicFunction, compute_characteristic
from c2m_alloc.core_allocator import (
    AllocationInfeasible,
    DegenerateAllocationWarning,
    allocate,
    allocate_game,
    gamma_is_maximal,
    order_values,
    ranking,
    verify_allocation,
)
from c2m_alloc.model import GeneratorConfig, generate_instance

from conftest import make_instance


def test_symmetric_game(symmetric_game):
    result = allocate_game(symmetric_game, [1, 1, 1])
    assert abs(result.gamma - 5 / 6) <= 1e-9
    assert result.profits == pytest.approx([10 / 3] * 3, abs=1e-6)
    assert not result.in_core and not result.degenerate
    assert result.binding_coalitions == [3, 5, 6]
    assert verify_allocation(None, symmetric_game, result).ok


def test_two_player_game_splits_evenly(two_player_game):
    result = allocate_game(two_player_game, [5, 5])
    assert result.gamma == pytest.approx(1.0, abs=1e-9)
    assert result.in_core
    assert result.profits == pytest.approx([6, 6], abs=1e-6)


def test_ranking_is_enforced(two_player_game):
    # player 2 fulfils more valuable orders, so it may not earn less than player 1
    result = allocate_game(two_player_game, [1, 9])
    assert result.profits[1] >= result.profits[0] - 1e-9
    assert result.profits.sum() == pytest.approx(12)
    assert verify_allocation(None, two_player_game, result).ok


def test_single_manufacturer():
    cf = CharacteristicFunction(np.array([-5, 42]))
    result = allocate_game(cf, [3])
    assert result.gamma == pytest.approx(1.0)
    assert result.profits.tolist() == pytest.approx([42.0])
    assert result.in_core


def test_negative_grand_value_is_infeasible():
    cf = CharacteristicFunction.from_dict(2, {(0,): -3, (1,): -2, (0, 1): -1})
    with pytest.raises(AllocationInfeasible) as err:
        allocate_game(cf, [1, 1])
    assert err.value.grand_value == -1


def test_nonpositive_gamma_is_reported_as_degenerate():
    cf = CharacteristicFunction.from_dict(2, {(0,): 5, (1,): 0, (0, 1): 0})
    with pytest.warns(DegenerateAllocationWarning):
        result = allocate_game(cf, [1, 1])
    assert result.degenerate and not result.in_core
    assert result.gamma <= 0
    assert verify_allocation(None, cf, result).ok


def test_verify_flags_budget_perturbation(symmetric_game):
    result = allocate_game(symmetric_game, [1, 1, 1])
    profits = result.profits.copy()
    profits[0] += 1
    report = verify_allocation(None, symmetric_game, dataclasses.replace(result, profits=profits))
    assert not report.checks["budget_balance"]


def test_verify_flags_raised_gamma(symmetric_game):
    result = allocate_game(symmetric_game, [1, 1, 1])
    report = verify_allocation(None, symmetric_game, dataclasses.replace(result, gamma=1.0, in_core=True))
    assert not report.checks["coalition_rationality"]


def test_verify_flags_order_and_maximality(two_player_game):
    result = allocate_game(two_player_game, [5, 5])
    uneven = dataclasses.replace(result, profits=np.array([7.0, 5.0]))
    assert not verify_allocation(None, two_player_game, uneven).checks["order_ties"]
    ranked = dataclasses.replace(result, profits=np.array([7.0, 5.0]), order_values=np.array([1, 9]))
    assert not verify_allocation(None, two_player_game, ranked).checks["order_monotone"]


def test_gamma_maximality_certificate(symmetric_game):
    assert gamma_is_maximal(symmetric_game, [1, 1, 1], 5 / 6)
    assert not gamma_is_maximal(symmetric_game, [1, 1, 1], 0.8)
    assert not gamma_is_maximal(symmetric_game, [1, 1, 1], -0.5)


def test_generated_instances_pass_every_check():
    for seed in range(6):
        inst = generate_instance(GeneratorConfig(seed, 3, 6, ranges={"production_capacity": (5, 40)}))
        cf = compute_characteristic(inst)
        if cf.grand_value < 0:
            continue
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", DegenerateAllocationWarning)
            result = allocate(inst, cf)
        report = verify_allocation(inst, cf, result)
        assert report.ok, report.failures


def test_order_values_come_from_the_grand_plan(fixture_a):
    cf = compute_characteristic(fixture_a)
    assert order_values(fixture_a, cf).tolist() == [500, 500]
    result = allocate(fixture_a, cf)
    # both fulfil equal value, so they split 350 evenly; {M1} = 200 then caps gamma
    assert result.profits == pytest.approx([175, 175], abs=1e-6)
    assert result.gamma == pytest.approx(175 / 200, abs=1e-9)


def test_ranking_breaks_ties_by_index():
    assert ranking([3, 7, 7, 1]) == [1, 2, 0, 3]


def test_dump_lp_trace(symmetric_game):
    lines = []
    allocate_game(symmetric_game, [1, 1, 1], trace=lines.append)
    text = "\n".join(lines)
    assert "phase 1" in text and "phase 2" in text and "gamma" in text
