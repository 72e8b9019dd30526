import pickle
import random
from fractions import Fraction

import pytest

from conftest import F, mask
from tugame.errors import GameError
from tugame.game import (
    TuGame,
    all_coalitions,
    coalition_from_members,
    coalition_key,
    coalition_members,
    cov_transform,
    delta_one,
    equal_split,
    excess,
    excess_vector,
    indirect_function,
    is_convex,
    is_efficient,
    is_imputation,
    is_monotone,
    is_superadditive,
    is_zero_monotone,
    permute_game,
    popcount,
    reduced_game,
    shapley_value,
    transfer,
    veto_players,
    zero_normalize,
)
from tugame.generators import random_allocation, random_convex_game, random_game
from tugame.leastcore import least_core, prenucleolus_lp_oracle


def test_coalition_helpers():
    assert popcount(0b1011) == 3
    assert coalition_members(0b1011) == (1, 2, 4)
    assert coalition_from_members([4, 1, 2], 4) == 0b1011
    assert coalition_key(0b101) == (2, (1, 3))


def test_coalition_from_members_rejects_bad_ids():
    with pytest.raises(GameError):
        coalition_from_members([1, 1], 3)
    with pytest.raises(GameError):
        coalition_from_members([5], 4)


def test_coalition_order():
    assert all_coalitions(3) == (1, 2, 4, 3, 5, 6, 7)


def test_game_invariants():
    with pytest.raises(GameError, match=r"v\(N\) > 0"):
        TuGame(2, [0, 1, 1, 0])
    with pytest.raises(GameError):
        TuGame(2, [1, 0, 0, 5])
    with pytest.raises(GameError):
        TuGame(2, [0, 0, 5])
    assert TuGame(2, [0, 1, 1, -3], strict=False).value(3) == -3


def test_from_mapping(game):
    assert game.n == 4
    assert game.value(game.grand) == 10
    assert game.value(mask(2, 3, 4)) == 3
    assert game.value(mask(1, 3)) == 0
    assert all(isinstance(val, Fraction) for val in game.values)


def test_game_pickles_for_worker_processes(game):
    copy = pickle.loads(pickle.dumps(game))
    assert copy == game
    assert copy.value(copy.grand) == 10


def test_with_values(game):
    changed = game.with_values({mask(1): -1}, strict=False)
    assert changed.value(mask(1)) == -1
    assert game.value(mask(1)) == 0
    with pytest.raises(GameError):
        game.with_values({0: 1})


def test_excess_and_indirect_function(game, nu):
    assert excess(game, mask(1, 2), nu) == -3
    exc = excess_vector(game, nu)
    assert exc[mask(2, 3)] == F(-5, 2)
    assert exc[game.grand] == 0
    assert indirect_function(game, (10, 0, 0, 0)) == 3


def test_delta_one(game, nu):
    assert delta_one(game, nu) == F(13, 2)
    assert delta_one(game, (10, 0, 0, 0)) == 10


def test_transfer():
    assert transfer((F(1), F(2), F(3)), 1, 3, F(1)) == (0, 2, 4)


def test_efficiency_and_imputations(game, nu):
    assert is_efficient(game, nu)
    assert is_imputation(game, nu)
    assert is_imputation(game, (10, 0, 0, 0))
    assert not is_imputation(game, (11, -1, 0, 0))
    assert not is_efficient(game, (1, 1, 1, 1))


def test_example_properties(game):
    assert is_monotone(game)
    assert is_superadditive(game)
    assert is_convex(game)
    assert is_zero_monotone(game)
    assert veto_players(game) == (2,)
    assert zero_normalize(game).values == game.values


def test_replication_game_is_not_convex(v1):
    assert not is_convex(v1)


def test_shapley_value(game):
    assert shapley_value(game) == (F(11, 4), F(17, 4), F(7, 4), F(5, 4))


def test_reduced_game(game, nu):
    red, members = reduced_game(game, mask(1, 2), nu)
    assert members == (1, 2)
    assert red.values == (0, 0, 1, 6)


def test_reduced_game_rejects_empty(game, nu):
    with pytest.raises(GameError):
        reduced_game(game, 0, nu)


def test_cov_transform(game):
    w = cov_transform(game, F(2), (1, 0, 0, 0))
    assert w.value(mask(1)) == 1
    assert w.value(mask(1, 2)) == 7
    assert w.value(w.grand) == 21
    with pytest.raises(GameError):
        cov_transform(game, F(0), (0, 0, 0, 0))


def test_permute_game(game):
    swapped = permute_game(game, [2, 1, 3, 4])
    assert swapped.value(mask(1, 3)) == 3
    assert swapped.value(mask(2, 3)) == 0
    assert shapley_value(swapped)[:2] == (F(17, 4), F(11, 4))


def test_equal_split(game):
    assert equal_split(game) == (F(5, 2),) * 4


@pytest.mark.parametrize('n', [3, 4, 5])
@pytest.mark.parametrize('seed', range(5))
def test_generated_games_are_convex(n, seed):
    v = random_convex_game(n, random.Random(seed))
    assert is_convex(v)
    assert is_superadditive(v)
    assert v.value(v.grand) > 0


@pytest.mark.parametrize('seed', range(5))
def test_shapley_is_efficient(seed):
    v = random_game(4, random.Random(seed))
    assert sum(shapley_value(v)) == v.value(v.grand)


@pytest.mark.parametrize('n', [3, 4, 5])
@pytest.mark.parametrize('seed', range(4))
def test_reduced_games_at_core_points_stay_convex(n, seed):
    v = random_convex_game(n, random.Random(seed))
    for x in (least_core(v).witness, prenucleolus_lp_oracle(v)):
        for s in all_coalitions(n):
            if popcount(s) < 2:
                continue
            red, members = reduced_game(v, s, x)
            assert is_convex(red), f"S={coalition_members(s)} at {x}"
            assert red.value(red.grand) == sum(x[p - 1] for p in members)


@pytest.mark.parametrize('n', [2, 3, 4, 5])
@pytest.mark.parametrize('seed', range(5))
def test_indirect_function_recovers_game(n, seed):
    rng = random.Random(seed)
    v = random_game(n, rng)
    big = 1 + 2 * max(abs(val) for val in v.values)
    y = random_allocation(n, rng)
    for s in all_coalitions(n):
        assert indirect_function(v, y) + sum(y[k] for k in range(n) if s >> k & 1) >= v.value(s)
        # the minimum over x is attained at -big on S and +big off S
        x = tuple(-big if s >> k & 1 else big for k in range(n))
        x_s = sum((x[k] for k in range(n) if s >> k & 1), Fraction(0))
        assert indirect_function(v, x) + x_s == v.value(s)
