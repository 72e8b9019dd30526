"""Seeded random games for fuzzing and the verify batch.

Every generator takes an explicit ``random.Random`` so a run is reproduced
from its seed alone.
"""
import random
from fractions import Fraction
from typing import List

from tugame.errors import GameError
from tugame.game import Allocation, TuGame, popcount


def _rational(rng: random.Random, lo: int, hi: int) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, 4))


def _zeta(n: int, dividends: List[Fraction]) -> List[Fraction]:
    """v(S) = Σ_{T ⊆ S} d(T), one bit at a time."""
    values = list(dividends)
    for k in range(n):
        bit = 1 << k
        for mask in range(1 << n):
            if mask & bit:
                values[mask] += values[mask ^ bit]
    return values


def random_convex_game(n: int, rng: random.Random) -> TuGame:
    """Convex game from nonnegative dividends on every coalition of size >= 2.

    Singleton dividends are arbitrary; the grand dividend is raised when
    needed so that v(N) > 0.
    """
    if n < 2:
        raise GameError("a game needs at least 2 players")
    dividends = [Fraction(0)] * (1 << n)
    for mask in range(1, 1 << n):
        if popcount(mask) == 1:
            dividends[mask] = _rational(rng, -6, 6)
        elif rng.random() < 0.6:
            dividends[mask] = _rational(rng, 0, 8)
    values = _zeta(n, dividends)
    grand = (1 << n) - 1
    if values[grand] <= 0:
        lift = 1 - values[grand] + rng.randint(0, 3)
        dividends[grand] += lift
        values[grand] += lift
    return TuGame(n, values)


def random_game(n: int, rng: random.Random) -> TuGame:
    """Arbitrary rational game with v(N) > 0; no structure assumed."""
    values = [Fraction(0)] + [_rational(rng, -10, 10) for _ in range((1 << n) - 2)]
    values.append(Fraction(rng.randint(1, 20), rng.randint(1, 4)))
    return TuGame(n, values)


def random_allocation(n: int, rng: random.Random) -> Allocation:
    return tuple(_rational(rng, -10, 10) for _ in range(n))


def random_imputation(v: TuGame, rng: random.Random) -> Allocation:
    """Individual worths plus a random positive share of the remaining surplus."""
    base = [v.value(1 << k) for k in range(v.n)]
    surplus = v.value(v.grand) - sum(base, Fraction(0))
    if surplus < 0:
        raise GameError("the imputation set is empty")
    weights = [rng.randint(1, 9) for _ in range(v.n)]
    total = sum(weights)
    return tuple(b + surplus * Fraction(w, total) for b, w in zip(base, weights))


def random_additive(n: int, rng: random.Random) -> Allocation:
    return tuple(_rational(rng, -5, 5) for _ in range(n))


def random_scale(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(1, 9), rng.randint(1, 5))
