"""Exact two-phase tableau simplex over Fractions with Bland's rule.

Variables are free unless bounded. Every optimum is re-checked against the
untouched standard-form data (primal feasibility, dual feasibility, equal
objectives) before it is returned.
"""
import logging
from enum import Enum
from fractions import Fraction
from typing import List, NamedTuple, Optional, Sequence, Tuple

from tugame.errors import LpError

log = logging.getLogger(__name__)

ZERO = Fraction(0)
ONE = Fraction(1)


class Relation(Enum):
    LE = "<="
    EQ = "="
    GE = ">="


class LpRow(NamedTuple):
    coeffs: Tuple[Fraction, ...]
    relation: Relation
    rhs: Fraction


def row(coeffs: Sequence[object], relation: Relation, rhs: object) -> LpRow:
    return LpRow(tuple(Fraction(c) for c in coeffs), relation, Fraction(rhs))


class LpProblem(NamedTuple):
    """minimize objective·x subject to rows and optional per-variable bounds."""
    objective: Tuple[Fraction, ...]
    rows: Tuple[LpRow, ...]
    lower: Optional[Tuple[Optional[Fraction], ...]] = None
    upper: Optional[Tuple[Optional[Fraction], ...]] = None

    @classmethod
    def build(cls, objective: Sequence[object], rows: Sequence[LpRow],
              lower: Optional[Sequence[Optional[object]]] = None,
              upper: Optional[Sequence[Optional[object]]] = None) -> "LpProblem":
        def _bounds(seq):
            if seq is None:
                return None
            return tuple(None if b is None else Fraction(b) for b in seq)
        return cls(tuple(Fraction(c) for c in objective), tuple(rows), _bounds(lower), _bounds(upper))

    @property
    def width(self) -> int:
        return len(self.objective)


class LpStatus(Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"


class LpSolution(NamedTuple):
    status: LpStatus
    x: Optional[Tuple[Fraction, ...]] = None
    value: Optional[Fraction] = None
    duals: Optional[Tuple[Fraction, ...]] = None
    basis: Optional[Tuple[int, ...]] = None

    @property
    def optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL


# =====================================
# Standard form
# =====================================

class _Standard(NamedTuple):
    # x_orig[k] = offsets[k] + Σ coef · std[col] over maps[k]
    maps: List[List[Tuple[int, Fraction]]]
    offsets: List[Fraction]
    n_std: int
    rows: List[Tuple[List[Fraction], Relation, Fraction]]
    n_orig_rows: int
    cost: List[Fraction]


def _validate(p: LpProblem) -> None:
    w = p.width
    for idx, r in enumerate(p.rows):
        if len(r.coeffs) != w:
            raise LpError(f"row {idx} has {len(r.coeffs)} coefficients, objective has {w}")
    for name, bounds in (("lower", p.lower), ("upper", p.upper)):
        if bounds is not None and len(bounds) != w:
            raise LpError(f"{name} bounds have {len(bounds)} entries, objective has {w}")


def _standardize(p: LpProblem) -> _Standard:
    w = p.width
    lower = p.lower or (None,) * w
    upper = p.upper or (None,) * w
    maps: List[List[Tuple[int, Fraction]]] = []
    offsets: List[Fraction] = []
    bound_rows: List[Tuple[int, Fraction]] = []
    n_std = 0
    for k in range(w):
        lo, hi = lower[k], upper[k]
        if lo is not None:
            maps.append([(n_std, ONE)])
            offsets.append(lo)
            if hi is not None:
                bound_rows.append((n_std, hi - lo))
            n_std += 1
        elif hi is not None:
            maps.append([(n_std, -ONE)])
            offsets.append(hi)
            n_std += 1
        else:
            maps.append([(n_std, ONE), (n_std + 1, -ONE)])
            offsets.append(ZERO)
            n_std += 2

    rows: List[Tuple[List[Fraction], Relation, Fraction]] = []
    for r in p.rows:
        coeffs = [ZERO] * n_std
        rhs = r.rhs
        for k, a in enumerate(r.coeffs):
            if a == 0:
                continue
            rhs -= a * offsets[k]
            for col, coef in maps[k]:
                coeffs[col] += a * coef
        rows.append((coeffs, r.relation, rhs))
    n_orig_rows = len(rows)
    for col, cap in bound_rows:
        coeffs = [ZERO] * n_std
        coeffs[col] = ONE
        rows.append((coeffs, Relation.LE, cap))

    cost = [ZERO] * n_std
    for k, c in enumerate(p.objective):
        for col, coef in maps[k]:
            cost[col] += c * coef
    return _Standard(maps, offsets, n_std, rows, n_orig_rows, cost)


# =====================================
# Tableau
# =====================================

def _pivot(T: List[List[Fraction]], d: List[Fraction], basis: List[int], r: int, c: int) -> None:
    prow = T[r]
    piv = prow[c]
    if piv != 1:
        prow = [val / piv for val in prow]
        T[r] = prow
    nz = [k for k, val in enumerate(prow) if val != 0]
    for i, trow in enumerate(T):
        if i == r:
            continue
        f = trow[c]
        if f != 0:
            for k in nz:
                trow[k] -= f * prow[k]
    f = d[c]
    if f != 0:
        for k in nz:
            d[k] -= f * prow[k]
    basis[r] = c


def _reduced_costs(T: List[List[Fraction]], basis: List[int], cost: List[Fraction]) -> List[Fraction]:
    width = len(cost) + 1
    d = list(cost) + [ZERO]
    for i, b in enumerate(basis):
        cb = cost[b]
        if cb != 0:
            trow = T[i]
            for k in range(width):
                if trow[k] != 0:
                    d[k] -= cb * trow[k]
    return d


def _run(T: List[List[Fraction]], d: List[Fraction], basis: List[int], allowed: int) -> LpStatus:
    """Bland's rule on columns [0, allowed). Returns OPTIMAL or UNBOUNDED."""
    rhs = len(d) - 1
    pivots = 0
    while True:
        entering = next((j for j in range(allowed) if d[j] < 0), None)
        if entering is None:
            log.debug("simplex optimal after %d pivots", pivots)
            return LpStatus.OPTIMAL
        best: Optional[Tuple[Fraction, int, int]] = None
        for i, trow in enumerate(T):
            a = trow[entering]
            if a > 0:
                cand = (trow[rhs] / a, basis[i], i)
                if best is None or cand < best:
                    best = cand
        if best is None:
            return LpStatus.UNBOUNDED
        _pivot(T, d, basis, best[2], entering)
        pivots += 1


def lp_solve(p: LpProblem) -> LpSolution:
    _validate(p)
    std = _standardize(p)
    m = len(std.rows)
    n_std = std.n_std

    # Column layout: structural | slack/surplus | artificial | rhs
    # Rows are flipped so every right-hand side is nonnegative.
    flipped: List[Tuple[List[Fraction], Relation, Fraction]] = []
    signs: List[int] = []
    for coeffs, rel, rhs in std.rows:
        if rhs < 0:
            rel = {Relation.LE: Relation.GE, Relation.GE: Relation.LE}.get(rel, rel)
            flipped.append(([-a for a in coeffs], rel, -rhs))
            signs.append(-1)
        else:
            flipped.append((coeffs, rel, rhs))
            signs.append(1)

    n_slack = sum(1 for _, rel, _ in flipped if rel is not Relation.EQ)
    n_art = sum(1 for _, rel, _ in flipped if rel is not Relation.LE)
    art_start = n_std + n_slack
    total = art_start + n_art

    T: List[List[Fraction]] = []
    basis: List[int] = []
    unit_cols: List[int] = []
    next_slack = n_std
    next_art = art_start
    for coeffs, rel, rhs in flipped:
        trow = list(coeffs) + [ZERO] * (total - n_std) + [rhs]
        if rel is Relation.LE:
            trow[next_slack] = ONE
            basis.append(next_slack)
            unit_cols.append(next_slack)
            next_slack += 1
        else:
            if rel is Relation.GE:
                trow[next_slack] = -ONE
                next_slack += 1
            trow[next_art] = ONE
            basis.append(next_art)
            unit_cols.append(next_art)
            next_art += 1
        T.append(trow)

    # Standard-form copy for the audit.
    A0 = [list(trow[:art_start]) for trow in T]
    b0 = [trow[total] for trow in T]

    if n_art:
        phase1 = [ZERO] * art_start + [ONE] * n_art
        d = _reduced_costs(T, basis, phase1)
        _run(T, d, basis, total)
        if -d[total] != 0:
            log.debug("phase one ended with infeasibility %s", -d[total])
            return LpSolution(LpStatus.INFEASIBLE)
        for i in range(m):
            if basis[i] < art_start:
                continue
            c = next((j for j in range(art_start) if T[i][j] != 0), None)
            if c is not None:
                _pivot(T, d, basis, i, c)
            else:
                log.debug("row %d is redundant; artificial stays basic at zero", i)

    cost = std.cost + [ZERO] * (total - n_std)
    d = _reduced_costs(T, basis, cost)
    status = _run(T, d, basis, art_start)
    if status is LpStatus.UNBOUNDED:
        return LpSolution(LpStatus.UNBOUNDED)

    x_std = [ZERO] * total
    for i, b in enumerate(basis):
        x_std[b] = T[i][total]
    y_std = [-d[unit_cols[i]] for i in range(m)]

    _audit(A0, b0, x_std[:art_start], y_std, cost[:art_start])

    x = tuple(
        std.offsets[k] + sum((coef * x_std[col] for col, coef in std.maps[k]), ZERO)
        for k in range(p.width)
    )
    value = sum((c * xi for c, xi in zip(p.objective, x)), ZERO)
    duals = tuple(y_std[i] * signs[i] for i in range(std.n_orig_rows))
    return LpSolution(LpStatus.OPTIMAL, x, value, duals, tuple(basis))


def _audit(A0: List[List[Fraction]], b0: List[Fraction],
           x_std: List[Fraction], y: List[Fraction], cost: List[Fraction]) -> None:
    """Exact optimality certificate; raises LpError if any check fails."""
    for i, (arow, bi) in enumerate(zip(A0, b0)):
        if sum((a * xv for a, xv in zip(arow, x_std) if a != 0), ZERO) != bi:
            raise LpError(f"primal row {i} violated")
    if any(xv < 0 for xv in x_std):
        raise LpError("negative standard-form variable")
    for j in range(len(cost)):
        reduced = cost[j] - sum((y[i] * A0[i][j] for i in range(len(A0)) if A0[i][j] != 0), ZERO)
        if reduced < 0:
            raise LpError(f"dual constraint {j} violated")
        if reduced != 0 and x_std[j] != 0:
            raise LpError(f"complementary slackness fails at column {j}")
    primal = sum((c * xv for c, xv in zip(cost, x_std)), ZERO)
    dual = sum((yi * bi for yi, bi in zip(y, b0)), ZERO)
    if primal != dual:
        raise LpError(f"duality gap {primal - dual}")
