"""Least-core, core and balancedness LPs, and the sequential-LP pre-nucleolus."""
import logging
from concurrent.futures import ProcessPoolExecutor, as_completed
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

from tugame.config import get_vertex_cap
from tugame.errors import GameError, LinAlgError, LpError
from tugame.game import (
    Allocation,
    Coalition,
    TuGame,
    all_coalitions,
    check_allocation,
    coalition_key,
    coalition_sum,
    excess_vector,
    is_efficient,
)
from tugame.linalg import rank, solve_consistent, solve_square
from tugame.lp import LpProblem, LpRow, Relation, lp_solve, row

log = logging.getLogger(__name__)

ZERO = Fraction(0)


class LeastCoreResult(NamedTuple):
    epsilon: Fraction
    witness: Allocation
    tight: Tuple[Coalition, ...]
    universally_tight: Tuple[Coalition, ...]


class OracleLevel(NamedTuple):
    epsilon: Fraction
    fixed: Tuple[Coalition, ...]


class OracleResult(NamedTuple):
    x: Allocation
    levels: Tuple[OracleLevel, ...]


class KohlbergLevel(NamedTuple):
    excess: Fraction
    coalitions: Tuple[Coalition, ...]
    balanced: bool


def indicator(mask: Coalition, n: int) -> List[Fraction]:
    return [Fraction(mask >> k & 1) for k in range(n)]


def proper_coalitions(n: int) -> List[Coalition]:
    grand = (1 << n) - 1
    return [mask for mask in all_coalitions(n) if mask != grand]


# =====================================
# Level LPs (least-core and its refinements)
# =====================================

def _level_rows(v: TuGame, free: Sequence[Coalition],
                fixed: Sequence[Tuple[Coalition, Fraction]], width: int) -> List[LpRow]:
    """x(S) + ε ≥ v(S) on free coalitions, x(S) = value on fixed ones, x(N) = v(N)."""
    n = v.n
    pad = [ZERO] * (width - n)
    rows = []
    for mask in free:
        coeffs = indicator(mask, n) + pad
        coeffs[n] = Fraction(1)
        rows.append(row(coeffs, Relation.GE, v.value(mask)))
    for mask, value in fixed:
        rows.append(row(indicator(mask, n) + pad, Relation.EQ, value))
    rows.append(row([Fraction(1)] * n + pad, Relation.EQ, v.value(v.grand)))
    return rows


def _solve_level(v: TuGame, free: Sequence[Coalition],
                 fixed: Sequence[Tuple[Coalition, Fraction]]) -> Tuple[Fraction, Allocation]:
    n = v.n
    objective = [ZERO] * n + [Fraction(1)]
    sol = lp_solve(LpProblem.build(objective, _level_rows(v, free, fixed, n + 1)))
    if not sol.optimal:
        raise LpError(f"least-core level LP ended {sol.status.value}")
    return sol.x[n], tuple(sol.x[:n])


def _face_rows(v: TuGame, free: Sequence[Coalition], fixed: Sequence[Tuple[Coalition, Fraction]],
               level: Fraction, width: int, skip: Iterable[Coalition] = ()) -> List[LpRow]:
    """Constraints of the optimal face: x(S) ≥ v(S) − level on free coalitions."""
    n = v.n
    pad = [ZERO] * (width - n)
    skipped = set(skip)
    rows = [row(indicator(mask, n) + pad, Relation.GE, v.value(mask) - level)
            for mask in free if mask not in skipped]
    rows += [row(indicator(mask, n) + pad, Relation.EQ, value) for mask, value in fixed]
    rows.append(row([Fraction(1)] * n + pad, Relation.EQ, v.value(v.grand)))
    return rows


def _probe_aggregate(v: TuGame, free: Sequence[Coalition], fixed, level: Fraction,
                     candidates: List[Coalition]) -> List[Coalition]:
    """Drop candidates that can be slack on the face until the rest are tight everywhere.

    Each candidate S gets t_S ∈ [0, 1] with x(S) − t_S ≥ v(S) − level; the
    maximum of Σ t_S is zero exactly when every remaining candidate is tight
    on the whole face.
    """
    n = v.n
    cands = list(candidates)
    while cands:
        width = n + len(cands)
        rows = _face_rows(v, free, fixed, level, width, skip=cands)
        for pos, mask in enumerate(cands):
            coeffs = indicator(mask, n) + [ZERO] * len(cands)
            coeffs[n + pos] = Fraction(-1)
            rows.append(row(coeffs, Relation.GE, v.value(mask) - level))
        objective = [ZERO] * n + [Fraction(-1)] * len(cands)
        lower = [None] * n + [ZERO] * len(cands)
        upper = [None] * n + [Fraction(1)] * len(cands)
        sol = lp_solve(LpProblem.build(objective, rows, lower, upper))
        if not sol.optimal:
            raise LpError(f"tightness probe ended {sol.status.value}")
        if sol.value == 0:
            break
        slack = {mask for pos, mask in enumerate(cands) if sol.x[n + pos] > 0}
        log.debug("probe: %d of %d candidates can be slack", len(slack), len(cands))
        cands = [mask for mask in cands if mask not in slack]
    return cands


def _probe_one(v: TuGame, free, fixed, level: Fraction, mask: Coalition) -> bool:
    """True when S stays tight on the whole face (max x(S) equals its bound)."""
    n = v.n
    objective = [-c for c in indicator(mask, n)]
    sol = lp_solve(LpProblem.build(objective, _face_rows(v, free, fixed, level, n)))
    if not sol.optimal:
        raise LpError(f"tightness probe ended {sol.status.value}")
    return -sol.value == v.value(mask) - level


def _probe_each(v: TuGame, free, fixed, level: Fraction, candidates: List[Coalition],
                workers: int) -> List[Coalition]:
    """One LP per candidate; with workers > 1 the LPs run in worker processes."""
    if workers <= 1 or len(candidates) < 2:
        return [mask for mask in candidates if _probe_one(v, free, fixed, level, mask)]
    keep: Dict[Coalition, bool] = {}
    free, fixed = tuple(free), tuple(fixed)
    with ProcessPoolExecutor(max_workers=workers) as ex:
        futures = {ex.submit(_probe_one, v, free, fixed, level, mask): mask for mask in candidates}
        for fut in as_completed(futures):
            keep[futures[fut]] = fut.result()
    return [mask for mask in candidates if keep[mask]]


def _universally_tight(v: TuGame, free, fixed, level: Fraction, witness: Allocation,
                       probe: str, workers: int) -> List[Coalition]:
    exc = excess_vector(v, witness)
    candidates = [mask for mask in free if exc[mask] == level]
    if probe == "aggregate":
        return _probe_aggregate(v, free, fixed, level, candidates)
    if probe == "per-coalition":
        return _probe_each(v, free, fixed, level, candidates, workers)
    raise ValueError(f"unknown probe strategy {probe!r}")


# =====================================
# Least-core
# =====================================

def least_core(v: TuGame, *, probe: str = "aggregate", workers: int = 1) -> LeastCoreResult:
    free = proper_coalitions(v.n)
    epsilon, witness = _solve_level(v, free, [])
    exc = excess_vector(v, witness)
    tight = tuple(mask for mask in free if exc[mask] == epsilon)
    universal = _universally_tight(v, free, [], epsilon, witness, probe, workers)
    log.debug("least-core ε=%s, %d tight, %d universally tight", epsilon, len(tight), len(universal))
    return LeastCoreResult(epsilon, witness, tight, tuple(universal))


def _tight_somewhere(v: TuGame, epsilon: Fraction) -> List[Coalition]:
    """Coalitions whose least-core constraint is active at some least-core point."""
    n = v.n
    free = proper_coalitions(n)
    out = []
    for mask in free:
        sol = lp_solve(LpProblem.build(indicator(mask, n), _face_rows(v, free, [], epsilon, n)))
        if sol.optimal and sol.value == v.value(mask) - epsilon:
            out.append(mask)
    return out


def least_core_vertices(v: TuGame, cap_n: Optional[int] = None,
                        result: Optional[LeastCoreResult] = None) -> List[Allocation]:
    """Vertices of the least-core, ascending lexicographically."""
    cap = get_vertex_cap() if cap_n is None else cap_n
    if v.n > cap:
        raise GameError(f"vertex enumeration is limited to n <= {cap} (game has {v.n} players)")
    n = v.n
    epsilon = (result or least_core(v)).epsilon
    active = _tight_somewhere(v, epsilon)
    free = proper_coalitions(n)
    ones = [Fraction(1)] * n
    found = set()
    for combo in combinations(active, n - 1):
        a = [indicator(mask, n) for mask in combo] + [ones]
        b = [v.value(mask) - epsilon for mask in combo] + [v.value(v.grand)]
        try:
            x = tuple(solve_square(a, b))
        except LinAlgError:
            continue
        exc = excess_vector(v, x)
        if all(exc[mask] <= epsilon for mask in free):
            found.add(x)
    return sorted(found)


def core_contains(v: TuGame, x: Sequence[Fraction]) -> bool:
    if not is_efficient(v, x):
        return False
    return max(excess_vector(v, x)[1:-1], default=ZERO) <= 0


def core_nonempty(v: TuGame) -> bool:
    return least_core(v).epsilon <= 0


# =====================================
# Balanced collections
# =====================================

def balanced_weights(n: int, coalitions: Iterable[Coalition]) -> Optional[Dict[Coalition, Fraction]]:
    """Positive weights λ with Σ λ_S·1_S = 1_N, or None when none exist.

    Maximises the smallest weight t; the collection is balanced iff t* > 0.
    """
    coll = sorted(set(coalitions), key=coalition_key)
    if not coll:
        raise GameError("a balanced collection needs at least one coalition")
    grand = (1 << n) - 1
    for mask in coll:
        if mask == 0 or mask & ~grand:
            raise GameError(f"coalition mask {mask} is not a nonempty coalition of {n} players")
    m = len(coll)
    rows = []
    for k in range(n):
        coeffs = [Fraction(mask >> k & 1) for mask in coll] + [ZERO]
        rows.append(row(coeffs, Relation.EQ, 1))
    for pos in range(m):
        coeffs = [ZERO] * (m + 1)
        coeffs[pos] = Fraction(1)
        coeffs[m] = Fraction(-1)
        rows.append(row(coeffs, Relation.GE, 0))
    objective = [ZERO] * m + [Fraction(-1)]
    lower = [ZERO] * m + [None]
    upper = [None] * m + [Fraction(1)]
    sol = lp_solve(LpProblem.build(objective, rows, lower, upper))
    if not sol.optimal or sol.x[m] <= 0:
        return None
    return {mask: sol.x[pos] for pos, mask in enumerate(coll)}


def is_balanced_collection(n: int, coalitions: Iterable[Coalition]) -> bool:
    return balanced_weights(n, coalitions) is not None


# =====================================
# Sequential-LP pre-nucleolus
# =====================================

def prenucleolus_levels(v: TuGame, *, probe: str = "aggregate", workers: int = 1) -> OracleResult:
    """Minimise the largest excess, freeze the coalitions tight on the whole
    optimal face, and repeat on the rest until the allocation is pinned."""
    n = v.n
    ones = [Fraction(1)] * n
    fixed: List[Tuple[Coalition, Fraction]] = []
    free = proper_coalitions(n)
    levels: List[OracleLevel] = []
    while True:
        span = [indicator(mask, n) for mask, _ in fixed] + [ones]
        r = rank(span)
        if r == n:
            break
        free = [mask for mask in free if rank(span + [indicator(mask, n)]) > r]
        if not free:
            raise LpError("free coalitions exhausted before the allocation was pinned")
        epsilon, witness = _solve_level(v, free, fixed)
        pinned = _universally_tight(v, free, fixed, epsilon, witness, probe, workers)
        if not pinned:
            raise LpError(f"no coalition is tight on the whole optimal face at level {len(levels) + 1}")
        log.debug("oracle level %d: ε=%s, fixing %d coalitions", len(levels) + 1, epsilon, len(pinned))
        levels.append(OracleLevel(epsilon, tuple(pinned)))
        pinned_set = set(pinned)
        fixed += [(mask, v.value(mask) - epsilon) for mask in pinned]
        free = [mask for mask in free if mask not in pinned_set]
    a = [indicator(mask, n) for mask, _ in fixed] + [ones]
    b = [value for _, value in fixed] + [v.value(v.grand)]
    return OracleResult(tuple(solve_square(a, b)), tuple(levels))


def prenucleolus_lp_oracle(v: TuGame) -> Allocation:
    return prenucleolus_levels(v).x


def reconstruct_from_tight(v: TuGame, coalitions: Sequence[Coalition],
                           x: Sequence[Fraction]) -> Allocation:
    """Solve [1_S]ᵀ y = x(S) over the given coalitions; they must have rank n."""
    check_allocation(v, x)
    n = v.n
    a = [indicator(mask, n) for mask in coalitions]
    if not a or rank(a) < n:
        raise LinAlgError(f"coalition vectors have rank {rank(a) if a else 0}, need {n}")
    y, _ = solve_consistent(a, boundary_vector(coalitions, x))
    return tuple(y)


def boundary_vector(coalitions: Sequence[Coalition], x: Sequence[Fraction]) -> List[Fraction]:
    return [coalition_sum(x, mask) for mask in coalitions]


# =====================================
# Kohlberg diagnostic
# =====================================

def kohlberg_levels(v: TuGame, x: Sequence[Fraction]) -> List[KohlbergLevel]:
    """Excess levels in decreasing order, each with the balancedness of the
    union of all coalitions at that level or above."""
    check_allocation(v, x)
    exc = excess_vector(v, x)
    by_level: Dict[Fraction, List[Coalition]] = {}
    for mask in proper_coalitions(v.n):
        by_level.setdefault(exc[mask], []).append(mask)
    out: List[KohlbergLevel] = []
    cumulative: List[Coalition] = []
    for level in sorted(by_level, reverse=True):
        cumulative += by_level[level]
        out.append(KohlbergLevel(level, tuple(by_level[level]),
                                 is_balanced_collection(v.n, cumulative)))
    return out


def satisfies_kohlberg(v: TuGame, x: Sequence[Fraction]) -> bool:
    return is_efficient(v, x) and all(level.balanced for level in kohlberg_levels(v, x))
