"""Pre-kernel search by iterated minimum-norm solves over payoff equivalence classes.

Each allocation x fixes a selection of most effective coalitions; on that
class the objective h is the convex quadratic ‖Eᵀx − α‖². The driver jumps
to the minimiser of the current class quadratic until h vanishes.
"""
import logging
from enum import Enum
from fractions import Fraction
from typing import List, NamedTuple, Optional, Sequence

from tugame.errors import DegenerateSystemError
from tugame.game import (
    Allocation,
    TuGame,
    as_allocation,
    check_allocation,
    delta_one,
    equal_split,
    indirect_function,
    is_efficient,
    max_pair_count,
    transfer,
)
from tugame.linalg import Matrix, Vector, dot, matmul, matvec, min_norm_solution, transpose
from tugame.surplus import PairSelection, lex_selection, same_class, surplus_matrix

log = logging.getLogger(__name__)


class ClassSystem(NamedTuple):
    """E is n×q with q = C(n,2) + 1 columns; Q = E·Eᵀ and a = E·α."""
    E: Matrix
    alpha: Vector
    Q: Matrix
    a: Vector


class SolveStatus(Enum):
    CONVERGED = "Converged"
    ITERATION_CAP_HIT = "IterationCapHit"
    DEGENERATE_SYSTEM = "DegenerateSystem"


class Iteration(NamedTuple):
    x: Allocation
    selection: PairSelection
    system: ClassSystem
    h: Fraction


class SolveTrace(NamedTuple):
    iterations: List[Iteration]
    terminal: Allocation
    status: SolveStatus
    steps: int
    bound: int
    cap: int

    @property
    def bound_exceeded(self) -> bool:
        return self.steps > self.bound


def build_system(v: TuGame, sel: PairSelection) -> ClassSystem:
    n = v.n
    columns: List[List[Fraction]] = []
    alpha: Vector = []
    for i, j in sel.pairs:
        if i > j:
            continue
        s_ij = sel.for_pair(i, j)
        s_ji = sel.for_pair(j, i)
        columns.append([Fraction((s_ji >> k & 1) - (s_ij >> k & 1)) for k in range(n)])
        alpha.append(v.value(s_ji) - v.value(s_ij))
    columns.append([Fraction(1)] * n)
    alpha.append(v.value(v.grand))
    E = transpose(columns)
    Q = matmul(E, columns)
    a = matvec(E, alpha)
    return ClassSystem(E, alpha, Q, a)


def h_value(v: TuGame, x: Sequence[Fraction]) -> Fraction:
    """Σ_{i<j} (s_ij − s_ji)² + (x(N) − v(N))²."""
    sm = surplus_matrix(v, x)
    total = Fraction(0)
    for i in range(1, v.n + 1):
        for j in range(i + 1, v.n + 1):
            f = sm.at(i, j) - sm.at(j, i)
            total += f * f
    f0 = sum(x, Fraction(0)) - v.value(v.grand)
    return total + f0 * f0


def h_via_indirect(v: TuGame, x: Sequence[Fraction]) -> Fraction:
    """h rebuilt from indirect-function differences at shifted allocations."""
    delta = delta_one(v, x) + 1
    total = Fraction(0)
    for i in range(1, v.n + 1):
        for j in range(i + 1, v.n + 1):
            f = (indirect_function(v, transfer(x, i, j, delta))
                 - indirect_function(v, transfer(x, j, i, delta)))
            total += f * f
    f0 = sum(x, Fraction(0)) - v.value(v.grand)
    return total + f0 * f0


def h_gamma_value(sys: ClassSystem, x: Sequence[Fraction]) -> Fraction:
    """⟨x, Qx⟩ − 2⟨x, a⟩ + ⟨α, α⟩, which is ‖Eᵀx − α‖²."""
    return dot(x, matvec(sys.Q, x)) - 2 * dot(x, sys.a) + dot(sys.alpha, sys.alpha)


def gamma_step(sys: ClassSystem) -> Allocation:
    if all(entry == 0 for row in sys.E for entry in row):
        raise DegenerateSystemError("class system has only zero columns")
    return tuple(min_norm_solution(sys.Q, sys.a))


def is_prekernel(v: TuGame, x: Sequence[Fraction]) -> bool:
    if not is_efficient(v, x):
        return False
    sm = surplus_matrix(v, x)
    return all(sm.at(i, j) == sm.at(j, i)
               for i in range(1, v.n + 1) for j in range(i + 1, v.n + 1))


def solve_prekernel(v: TuGame, start: Optional[Sequence[Fraction]] = None,
                    max_iter: Optional[int] = None) -> SolveTrace:
    """Iterate x ← Γ(system of the class of x) until h(x) = 0.

    ``max_iter`` is the expected number of gamma steps (default C(n,2) − 1);
    runs past it are logged, and the loop is cut at C(n,2) + n steps.
    A selection that repeats while h > 0 ends the run with IterationCapHit.
    """
    pairs = max_pair_count(v.n)
    bound = max(1, pairs - 1) if max_iter is None else max_iter
    if bound < 1:
        raise ValueError("max_iter must be at least 1")
    cap = max(bound, pairs + v.n)

    x = as_allocation(start) if start is not None else equal_split(v)
    check_allocation(v, x)
    iterations: List[Iteration] = []
    steps = 0
    status = SolveStatus.ITERATION_CAP_HIT
    prev_sel: Optional[PairSelection] = None

    while True:
        sel = lex_selection(v, x)
        system = build_system(v, sel)
        h = h_value(v, x)
        if iterations and h > iterations[-1].h:
            log.debug("h increased from %s to %s at step %d", iterations[-1].h, h, steps)
        iterations.append(Iteration(x, sel, system, h))
        log.debug("step %d: x=%s h=%s", steps, [str(c) for c in x], h)
        if h == 0:
            status = SolveStatus.CONVERGED
            break
        if prev_sel is not None and same_class(prev_sel, sel):
            # the next gamma step would return x again
            log.warning("selection repeated with h=%s after %d steps; stopping", h, steps)
            break
        if steps >= cap:
            log.warning("iteration cap %d reached without a pre-kernel point (h=%s)", cap, h)
            break
        try:
            x = gamma_step(system)
        except DegenerateSystemError as exc:
            log.warning("gamma step failed: %s", exc)
            status = SolveStatus.DEGENERATE_SYSTEM
            break
        steps += 1
        prev_sel = sel

    if status is SolveStatus.CONVERGED and steps > bound:
        log.warning("converged after %d gamma steps, above the expected bound of %d", steps, bound)
    return SolveTrace(iterations, x, status, steps, bound, cap)
