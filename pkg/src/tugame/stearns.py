"""Bilateral maximal-transfer scheme toward a kernel element."""
import logging
from enum import Enum
from fractions import Fraction
from typing import List, NamedTuple, Optional, Sequence, Tuple

from tugame.config import DEFAULT_STEARNS_TOL, get_stearns_max_steps
from tugame.errors import NotAnImputation
from tugame.game import Allocation, TuGame, as_allocation, check_allocation, is_imputation, transfer
from tugame.surplus import pair_order, surplus_matrix

log = logging.getLogger(__name__)


class StearnsStatus(Enum):
    CONVERGED = "Converged"
    STEP_CAP_HIT = "StepCapHit"


class TransferStep(NamedTuple):
    pair: Tuple[int, int]
    delta: Fraction
    x_after: Allocation
    delta_star: Fraction


class TransferTrace(NamedTuple):
    steps: List[TransferStep]
    terminal: Allocation
    relative_gap: Fraction
    status: StearnsStatus


def largest_imbalance(v: TuGame, x: Sequence[Fraction]) -> Tuple[Fraction, Optional[Tuple[int, int]]]:
    """δ* and the first ordered pair attaining it.

    A pair (i, j) counts only while j is above its individual worth; once
    x_j = v({j}) the kernel condition holds for that pair.
    """
    sm = surplus_matrix(v, x)
    best = Fraction(0)
    arg: Optional[Tuple[int, int]] = None
    for i, j in pair_order(v.n):
        if x[j - 1] <= v.value(1 << (j - 1)):
            continue
        gap = sm.at(i, j) - sm.at(j, i)
        if gap > best:
            best, arg = gap, (i, j)
    return best, arg


def stearns_solve(v: TuGame, start: Sequence[Fraction], tol: Fraction = DEFAULT_STEARNS_TOL,
                  max_steps: Optional[int] = None) -> TransferTrace:
    x = as_allocation(start)
    check_allocation(v, x)
    if not is_imputation(v, x):
        raise NotAnImputation("start must be efficient and individually rational")
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    cap = get_stearns_max_steps() if max_steps is None else max_steps
    grand = v.value(v.grand)

    steps: List[TransferStep] = []
    previous: Optional[Fraction] = None
    while True:
        delta_star, pair = largest_imbalance(v, x)
        if previous is not None and delta_star > previous:
            log.debug("δ* rose from %s to %s at step %d", previous, delta_star, len(steps))
        previous = delta_star
        if pair is None or delta_star / grand <= tol:
            status = StearnsStatus.CONVERGED
            break
        if len(steps) >= cap:
            log.warning("Stearns scheme stopped after %d steps (gap %s)", cap, delta_star / grand)
            status = StearnsStatus.STEP_CAP_HIT
            break
        i, j = pair
        room = x[j - 1] - v.value(1 << (j - 1))
        delta = min(delta_star / 2, room)
        x = transfer(x, j, i, delta)
        steps.append(TransferStep(pair, delta, x, delta_star))
    return TransferTrace(steps, x, delta_star / grand, status)
