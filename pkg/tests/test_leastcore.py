import random

import pytest

from conftest import F, mask
from tugame.errors import GameError, LinAlgError
from tugame.game import TuGame, cov_transform, excess_vector, permute_game
from tugame.generators import random_additive, random_convex_game, random_game, random_scale
from tugame.leastcore import (
    balanced_weights,
    core_contains,
    core_nonempty,
    is_balanced_collection,
    kohlberg_levels,
    least_core,
    least_core_vertices,
    prenucleolus_levels,
    prenucleolus_lp_oracle,
    reconstruct_from_tight,
    satisfies_kohlberg,
)

TIGHT_FAMILY = (mask(1), mask(3), mask(4), mask(2, 3), mask(1, 2, 3), mask(1, 2, 4))


def test_least_core_value(game):
    lc = least_core(game)
    assert lc.epsilon == -2
    assert sum(lc.witness) == 10
    assert max(excess_vector(game, lc.witness)[1:-1]) == -2
    assert set(lc.universally_tight) == {mask(3), mask(4), mask(1, 2, 3), mask(1, 2, 4)}
    assert set(lc.universally_tight) <= set(lc.tight)


def test_probe_strategies_agree(game):
    aggregate = least_core(game, probe="aggregate")
    per_coalition = least_core(game, probe="per-coalition", workers=3)
    assert set(aggregate.universally_tight) == set(per_coalition.universally_tight)
    serial = least_core(game, probe="per-coalition", workers=1)
    assert serial.universally_tight == per_coalition.universally_tight
    with pytest.raises(ValueError):
        least_core(game, probe="nonsense")


def test_least_core_vertices(game):
    assert least_core_vertices(game) == [(2, 4, 2, 2), (3, 3, 2, 2)]


def test_vertex_cap(game):
    with pytest.raises(GameError):
        least_core_vertices(game, cap_n=3)


def test_core(game, nu):
    assert core_nonempty(game)
    assert core_contains(game, nu)
    assert core_contains(game, (3, 3, 2, 2))
    assert not core_contains(game, (10, 0, 0, 0))
    assert not core_contains(game, (1, 1, 1, 1))


def test_empty_core():
    # three-player majority game
    v = TuGame.from_mapping(3, {(1, 2): 1, (1, 3): 1, (2, 3): 1, (1, 2, 3): 1})
    assert not core_nonempty(v)
    assert least_core(v).epsilon == F(1, 3)


def test_oracle(game, nu):
    res = prenucleolus_levels(game)
    assert res.x == nu
    assert res.levels[0].epsilon == -2
    assert res.levels[1].epsilon == F(-5, 2)
    assert set(res.levels[1].fixed) == {mask(1), mask(2, 3)}
    assert prenucleolus_lp_oracle(game) == nu


def test_oracle_probe_strategies_agree(game):
    assert prenucleolus_levels(game, probe="per-coalition", workers=2).x == prenucleolus_levels(game).x


def test_reconstruct_from_tight(game, nu):
    b = [F(5, 2), 2, 2, F(11, 2), 8, 8]
    assert [sum(nu[p - 1] for p in range(1, 5) if m >> (p - 1) & 1) for m in TIGHT_FAMILY] == b
    assert reconstruct_from_tight(game, TIGHT_FAMILY, nu) == nu


def test_reconstruct_needs_full_rank(game, nu):
    with pytest.raises(LinAlgError):
        reconstruct_from_tight(game, [mask(1), mask(2)], nu)


def test_balanced_family():
    weights = balanced_weights(4, TIGHT_FAMILY)
    assert weights is not None
    assert all(w > 0 for w in weights.values())
    for player in range(1, 5):
        bit = 1 << (player - 1)
        assert sum(w for m, w in weights.items() if m & bit) == 1
    assert is_balanced_collection(4, TIGHT_FAMILY)


def test_unbalanced_family():
    assert not is_balanced_collection(3, [mask(1, n=3), mask(1, 2, n=3)])
    assert is_balanced_collection(3, [mask(1, 2, n=3), mask(1, 3, n=3), mask(2, 3, n=3)])
    with pytest.raises(GameError):
        balanced_weights(3, [])
    with pytest.raises(GameError):
        balanced_weights(2, [8])


def test_kohlberg(game, nu):
    assert satisfies_kohlberg(game, nu)
    levels = kohlberg_levels(game, nu)
    assert levels[0].excess == -2
    assert all(level.balanced for level in levels)
    assert not satisfies_kohlberg(game, (3, 3, 2, 2))


@pytest.mark.parametrize('seed', range(50))
def test_oracle_is_covariant(seed):
    rng = random.Random(seed)
    n = (3, 4)[seed % 2]
    v = random_convex_game(n, rng)
    t = random_scale(rng)
    m = random_additive(n, rng)
    x = prenucleolus_lp_oracle(v)
    assert prenucleolus_lp_oracle(cov_transform(v, t, m)) == tuple(t * a + b for a, b in zip(x, m))


@pytest.mark.parametrize('n', [3, 4])
@pytest.mark.parametrize('seed', range(4))
def test_oracle_lies_in_core_of_convex_games(n, seed):
    v = random_convex_game(n, random.Random(seed))
    assert core_contains(v, prenucleolus_lp_oracle(v))


@pytest.mark.parametrize('seed', range(12))
def test_oracle_follows_relabeling(seed):
    rng = random.Random(seed)
    n = (3, 4, 5)[seed % 3]
    v = random_game(n, rng)
    perm = list(range(1, n + 1))
    rng.shuffle(perm)
    x = prenucleolus_lp_oracle(v)
    y = prenucleolus_lp_oracle(permute_game(v, perm))
    assert all(y[perm[k] - 1] == x[k] for k in range(n))


@pytest.mark.parametrize('n', [3, 4])
@pytest.mark.parametrize('seed', range(6))
def test_oracle_satisfies_kohlberg_on_general_games(n, seed):
    v = random_game(n, random.Random(500 + seed))
    assert satisfies_kohlberg(v, prenucleolus_lp_oracle(v))
