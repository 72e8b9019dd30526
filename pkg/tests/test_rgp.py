import random

import pytest

from conftest import mask
from tugame.errors import GameError
from tugame.game import TuGame, is_convex, reduced_game
from tugame.generators import random_convex_game, random_game
from tugame.rgp import Verdict, ambiguity_witness, essential_coalition, least_core_dimension, rgp_reduce, run_rgp_procedure
from tugame.leastcore import least_core, prenucleolus_lp_oracle


def test_essential_coalition(game):
    s, eps = essential_coalition(game)
    assert s == mask(3)
    assert eps == -2


def test_least_core_dimension(game, symmetric2):
    assert least_core_dimension(game, least_core(game)) == 1
    assert least_core_dimension(symmetric2, least_core(symmetric2)) == 0


def test_rgp_reduce(game):
    red = rgp_reduce(game, mask(1, 2), mask(3, 4), (2, 2))
    assert red.n == 2
    assert red.value(red.grand) == 6
    assert red.value(1) == 0
    assert red.value(2) == 0


def test_rgp_reduce_rejects_bad_partition(game):
    with pytest.raises(GameError):
        rgp_reduce(game, mask(1, 2), mask(2, 3, 4), (2, 2, 2))
    with pytest.raises(GameError):
        rgp_reduce(game, mask(1, 2), mask(3, 4), (2,))
    with pytest.raises(GameError):
        rgp_reduce(game, 0, game.grand, (1, 1, 1, 1))


def test_unsupplied_run_is_ambiguous(game, nu):
    run = run_rgp_procedure(game)
    assert run.verdict is Verdict.AMBIGUOUS
    assert run.convex
    assert run.nucleolus == nu
    assert any(level.ambiguous for level in run.levels)
    assert run.witness is not None
    assert run.witness.differs
    assert run.witness.first_vertex == (2, 4, 2, 2)
    assert run.witness.last_vertex == (3, 3, 2, 2)


def test_supplied_nucleolus_matches(game, nu):
    run = run_rgp_procedure(game, nu)
    assert run.verdict is Verdict.MATCHES
    assert run.per_player == nu
    assert run.witness is None
    assert not any(level.ambiguous for level in run.levels)


def test_supplied_other_point_mismatches(game):
    run = run_rgp_procedure(game, (3, 3, 2, 2))
    assert run.verdict is Verdict.MISMATCH


def test_levels_record_players(game, nu):
    run = run_rgp_procedure(game, nu, with_witness=False)
    first = [level for level in run.levels if level.level == 1]
    assert len(first) == 4
    assert all(level.players == (1, 2, 3, 4) for level in first)
    assert all(level.epsilon == -2 for level in first)


def test_two_player_game_is_unambiguous(symmetric2):
    run = run_rgp_procedure(symmetric2)
    assert run.verdict is Verdict.MATCHES
    assert run.per_player == (5, 5)


def test_witness_on_example(game):
    witness = ambiguity_witness(game)
    assert witness.per_player_first == (2, 4, 2, 2)
    assert witness.per_player_first != witness.per_player_last
    assert witness.per_player_last[0] == 3


def test_non_convex_game_still_runs():
    v = TuGame.from_mapping(3, {(1, 2): 1, (1, 3): 1, (2, 3): 1, (1, 2, 3): 1})
    run = run_rgp_procedure(v, with_witness=False)
    assert not run.convex


@pytest.mark.parametrize('n', [3, 4])
@pytest.mark.parametrize('seed', range(8))
@pytest.mark.parametrize('generator', [random_convex_game, random_game])
def test_supplied_oracle_point_matches(generator, n, seed):
    v = generator(n, random.Random(seed))
    nucleolus = prenucleolus_lp_oracle(v)
    run = run_rgp_procedure(v, nucleolus, with_witness=False)
    assert run.verdict is Verdict.MATCHES
    assert run.per_player == nucleolus


@pytest.mark.parametrize('n', [3, 4, 5])
@pytest.mark.parametrize('seed', range(4))
def test_single_removal_equals_reduced_game_and_stays_convex(n, seed):
    v = random_convex_game(n, random.Random(seed))
    x = least_core(v).witness
    for player in v.players:
        removed = 1 << (player - 1)
        keep = v.grand ^ removed
        red = rgp_reduce(v, keep, removed, (x[player - 1],))
        assert red == reduced_game(v, keep, x)[0]
        assert is_convex(red)
