import numpy as np
import pytest

from c2m_alloc.coalition_values import CharacteristicFunction
from c2m_alloc.model import Instance


def make_instance(sp, sc, oq, ot, mc, pc):
    """Instance from per-product lists; ``mc``/``pc`` are ``[product][manufacturer]``."""
    mc = np.atleast_2d(mc)
    return Instance(
        product_count=mc.shape[0],
        manufacturer_count=mc.shape[1],
        manufacturing_cost=mc,
        production_capacity=np.atleast_2d(pc),
        shortage_cost=np.atleast_1d(sc),
        ask_price=np.atleast_1d(sp),
        order_quantity=np.atleast_1d(oq),
        order_delivery_time=np.atleast_1d(ot),
    )


@pytest.fixture
def fixture_a():
    """One product, two manufacturers: SP=10, SC=2, OQ=100, OT=5, MC=(4, 9), PC=(10, 20)."""
    return make_instance(10, 2, 100, 5, [[4, 9]], [[10, 20]])


@pytest.fixture
def symmetric_game():
    """Three players: singletons 0, every pair 8, grand coalition 10."""
    return CharacteristicFunction.from_dict(
        3, {(0,): 0, (1,): 0, (2,): 0, (0, 1): 8, (0, 2): 8, (1, 2): 8, (0, 1, 2): 10}
    )


@pytest.fixture
def two_player_game():
    return CharacteristicFunction.from_dict(2, {(0,): 6, (1,): 4, (0, 1): 12})
