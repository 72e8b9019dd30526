"""Maximum surpluses and the lexicographically smallest coalition selection."""
from fractions import Fraction
from functools import lru_cache
from typing import List, NamedTuple, Optional, Sequence, Tuple

from tugame.game import (
    Coalition,
    TuGame,
    all_coalitions,
    coalition_key,
    delta_one,
    excess_vector,
    indirect_function,
    transfer,
)

Pair = Tuple[int, int]


@lru_cache(maxsize=None)
def pair_order(n: int) -> Tuple[Pair, ...]:
    """(1,2),(1,3),…,(n−1,n) then (2,1),(3,1),(3,2),(4,1),…"""
    upper = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    lower = [(i, j) for i in range(2, n + 1) for j in range(1, i)]
    return tuple(upper + lower)


@lru_cache(maxsize=None)
def _key_table(n: int) -> Tuple[Tuple[int, Tuple[int, ...]], ...]:
    return tuple(coalition_key(mask) for mask in range(1 << n))


class SurplusMatrix(NamedTuple):
    """s[i-1][j-1] = s_ij(x, v); the diagonal is held at 0."""
    n: int
    s: Tuple[Tuple[Fraction, ...], ...]

    def at(self, i: int, j: int) -> Fraction:
        return self.s[i - 1][j - 1]


class PairSelection(NamedTuple):
    n: int
    pairs: Tuple[Pair, ...]
    coalitions: Tuple[Coalition, ...]

    def for_pair(self, i: int, j: int) -> Coalition:
        return self.coalitions[self.pairs.index((i, j))]

    def entries(self) -> List[Tuple[int, int, Coalition]]:
        return [(i, j, s) for (i, j), s in zip(self.pairs, self.coalitions)]


def _sweep(v: TuGame, x: Sequence[Fraction]):
    """One pass over all proper coalitions, updating every admissible (i, j).

    Ties keep the coalition that is smaller in the coalition total order, so
    the arg table is the lexicographic selection directly.
    """
    n = v.n
    exc = excess_vector(v, x)
    keys = _key_table(n)
    best: List[List[Optional[Fraction]]] = [[None] * n for _ in range(n)]
    arg: List[List[Coalition]] = [[0] * n for _ in range(n)]
    for mask in range(1, (1 << n) - 1):
        e = exc[mask]
        ins = [k for k in range(n) if mask >> k & 1]
        outs = [k for k in range(n) if not mask >> k & 1]
        for i in ins:
            row_best = best[i]
            row_arg = arg[i]
            for j in outs:
                cur = row_best[j]
                if cur is None or e > cur or (e == cur and keys[mask] < keys[row_arg[j]]):
                    row_best[j] = e
                    row_arg[j] = mask
    return best, arg


def surplus_matrix(v: TuGame, x: Sequence[Fraction]) -> SurplusMatrix:
    best, _ = _sweep(v, x)
    rows = tuple(
        tuple(Fraction(0) if i == j else best[i][j] for j in range(v.n))
        for i in range(v.n)
    )
    return SurplusMatrix(v.n, rows)


def most_effective(v: TuGame, x: Sequence[Fraction], i: int, j: int) -> List[Coalition]:
    """All coalitions containing i but not j whose excess equals s_ij, in coalition order."""
    if i == j:
        raise ValueError("most effective coalitions need two distinct players")
    exc = excess_vector(v, x)
    ib, jb = 1 << (i - 1), 1 << (j - 1)
    family = [mask for mask in all_coalitions(v.n) if mask & ib and not mask & jb]
    top = max(exc[mask] for mask in family)
    return [mask for mask in family if exc[mask] == top]


def lex_selection(v: TuGame, x: Sequence[Fraction]) -> PairSelection:
    _, arg = _sweep(v, x)
    pairs = pair_order(v.n)
    return PairSelection(v.n, pairs, tuple(arg[i - 1][j - 1] for i, j in pairs))


def same_class(sel_a: PairSelection, sel_b: PairSelection) -> bool:
    return (sel_a.n == sel_b.n and sel_a.pairs == sel_b.pairs
            and sel_a.coalitions == sel_b.coalitions)


def selection_coalitions(sel: PairSelection) -> Tuple[Coalition, ...]:
    """Distinct selected coalitions, in coalition order."""
    return tuple(sorted(set(sel.coalitions), key=coalition_key))


def surplus_via_indirect(v: TuGame, x: Sequence[Fraction], i: int, j: int,
                         delta: Optional[Fraction] = None) -> Fraction:
    """s_ij recovered from the indirect function at x^{i,j,δ}.

    Any δ ≥ δ₁(x, v) works; the default is δ₁ + 1.
    """
    if delta is None:
        delta = delta_one(v, x) + 1
    return indirect_function(v, transfer(x, i, j, delta)) - delta
