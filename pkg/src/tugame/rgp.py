"""Audit of the reduced-game procedure for the nucleolus of convex games.

The procedure shrinks the player set one essential coalition at a time and
reads each player's payoff off the final one-player game. Which allocation
prices the removed players is the weak spot: unless it is supplied, any
least-core point is an equally valid pick. The audit flags every level where
that pick is not forced and produces two concrete runs that disagree.
"""
import logging
from enum import Enum
from fractions import Fraction
from typing import Callable, List, NamedTuple, Optional, Sequence, Tuple

from tugame.config import get_vertex_cap
from tugame.errors import GameError
from tugame.game import (
    Allocation,
    Coalition,
    TuGame,
    all_coalitions,
    as_allocation,
    check_allocation,
    coalition_key,
    coalition_members,
    embed,
    excess_vector,
    is_convex,
    popcount,
)
from tugame.leastcore import (
    LeastCoreResult,
    indicator,
    least_core,
    least_core_vertices,
    prenucleolus_lp_oracle,
)
from tugame.linalg import rank

log = logging.getLogger(__name__)


class Verdict(Enum):
    MATCHES = "MatchesNucleolus"
    AMBIGUOUS = "SelectionAmbiguous"
    MISMATCH = "Mismatch"


class RgpLevel(NamedTuple):
    player: int
    level: int
    players: Tuple[int, ...]
    essential: Coalition
    epsilon: Fraction
    ambiguous: bool
    alternatives: Tuple[Coalition, ...]
    removed_payoff: Fraction


class AmbiguityWitness(NamedTuple):
    first_vertex: Allocation
    last_vertex: Allocation
    per_player_first: Allocation
    per_player_last: Allocation

    @property
    def differs(self) -> bool:
        return self.per_player_first != self.per_player_last


class RgpRun(NamedTuple):
    per_player: Allocation
    levels: Tuple[RgpLevel, ...]
    verdict: Verdict
    nucleolus: Allocation
    convex: bool
    witness: Optional[AmbiguityWitness]


# (game, its least-core, original ids of its players) -> (essential coalition, allocation)
Chooser = Callable[[TuGame, LeastCoreResult, Tuple[int, ...]], Tuple[Coalition, Allocation]]


def least_core_dimension(v: TuGame, lc: LeastCoreResult) -> int:
    """n − rank of the implicit equalities (universally tight sets plus efficiency)."""
    rows = [indicator(mask, v.n) for mask in lc.universally_tight]
    rows.append([Fraction(1)] * v.n)
    return v.n - rank(rows)


def essential_coalition(v: TuGame, lc: Optional[LeastCoreResult] = None) -> Tuple[Coalition, Fraction]:
    """First universally tight least-core coalition in the coalition order,
    or the first coalition tight at the witness when none is."""
    if v.n < 2:
        raise GameError("an essential coalition needs at least two players")
    lc = lc or least_core(v)
    if lc.universally_tight:
        return min(lc.universally_tight, key=coalition_key), lc.epsilon
    log.warning("no universally tight coalition; falling back to one tight at the witness")
    return min(lc.tight, key=coalition_key), lc.epsilon


def rgp_reduce(v: TuGame, keep: Coalition, removed: Coalition,
               x_removed: Sequence[Fraction]) -> TuGame:
    """Simplified reduced game on ``keep``: a coalition T may recruit all of
    ``removed`` at their payoffs, v'(T) = max(v(T), v(T ∪ removed) − x(removed)).

    The result is re-indexed over ``keep`` in ascending player order.
    """
    if keep == 0 or keep & removed or (keep | removed) != v.grand:
        raise GameError("keep and removed must partition the player set, keep nonempty")
    if len(x_removed) != popcount(removed):
        raise GameError(f"need {popcount(removed)} payoffs for the removed players, got {len(x_removed)}")
    members = coalition_members(keep)
    paid = sum((Fraction(p) for p in x_removed), Fraction(0))
    m = len(members)
    values: List[Fraction] = [Fraction(0)] * (1 << m)
    for sub in range(1, (1 << m) - 1):
        t = embed(sub, members)
        values[sub] = max(v.value(t), v.value(t | removed) - paid)
    values[-1] = v.value(v.grand) - paid
    return TuGame(m, values, strict=False)


def _positions(mask: Coalition) -> List[int]:
    return [p - 1 for p in coalition_members(mask)]


def _run_player(v: TuGame, player: int, choose: Chooser,
                flag_ambiguity: bool) -> Tuple[Fraction, List[RgpLevel]]:
    game = v
    members: Tuple[int, ...] = tuple(v.players)
    levels: List[RgpLevel] = []
    k = 1
    while game.n > 1:
        lc = least_core(game)
        s_mask, x_level = choose(game, lc, members)
        pos = members.index(player)
        keep = s_mask if s_mask >> pos & 1 else game.grand ^ s_mask
        removed = game.grand ^ keep
        x_removed = [x_level[p] for p in _positions(removed)]
        ambiguous = flag_ambiguity and least_core_dimension(game, lc) > 0
        levels.append(RgpLevel(
            player=player,
            level=k,
            players=members,
            essential=embed(s_mask, members),
            epsilon=lc.epsilon,
            ambiguous=ambiguous,
            alternatives=tuple(embed(mask, members) for mask in lc.universally_tight if mask != s_mask),
            removed_payoff=sum(x_removed, Fraction(0)),
        ))
        game = rgp_reduce(game, keep, removed, x_removed)
        members = tuple(members[p] for p in _positions(keep))
        k += 1
    return game.value(game.grand), levels


def _supplied_chooser(supplied: Allocation) -> Chooser:
    def choose(game: TuGame, lc: LeastCoreResult, members: Tuple[int, ...]):
        s_mask, _ = essential_coalition(game, lc)
        return s_mask, tuple(supplied[p - 1] for p in members)
    return choose


def _witness_chooser(game: TuGame, lc: LeastCoreResult, members: Tuple[int, ...]):
    s_mask, _ = essential_coalition(game, lc)
    return s_mask, lc.witness


def _vertex_chooser(pick_last: bool) -> Chooser:
    """Literal reading: price removed players at a least-core vertex and take
    the first coalition tight there."""
    def choose(game: TuGame, lc: LeastCoreResult, members: Tuple[int, ...]):
        vertices = least_core_vertices(game, result=lc)
        x = vertices[-1] if pick_last else vertices[0]
        exc = excess_vector(game, x)
        s_mask = next(mask for mask in all_coalitions(game.n)
                      if mask != game.grand and exc[mask] == lc.epsilon)
        return s_mask, x
    return choose


def _run_all(v: TuGame, choose: Chooser, flag_ambiguity: bool) -> Tuple[Allocation, List[RgpLevel]]:
    values: List[Fraction] = []
    levels: List[RgpLevel] = []
    for player in v.players:
        value, player_levels = _run_player(v, player, choose, flag_ambiguity)
        values.append(value)
        levels += player_levels
    return tuple(values), levels


def ambiguity_witness(v: TuGame) -> Optional[AmbiguityWitness]:
    """Run the procedure from the first and from the last least-core vertex."""
    if v.n > get_vertex_cap():
        log.warning("skipping the two-vertex witness: %d players exceeds the vertex cap", v.n)
        return None
    vertices = least_core_vertices(v)
    per_first, _ = _run_all(v, _vertex_chooser(False), False)
    per_last, _ = _run_all(v, _vertex_chooser(True), False)
    return AmbiguityWitness(vertices[0], vertices[-1], per_first, per_last)


def run_rgp_procedure(v: TuGame, supplied: Optional[Sequence[Fraction]] = None, *,
                      with_witness: bool = True) -> RgpRun:
    convex = is_convex(v)
    if not convex:
        log.warning("game is not convex; running the procedure for demonstration only")
    if supplied is not None:
        alloc = as_allocation(supplied)
        check_allocation(v, alloc)
        per_player, levels = _run_all(v, _supplied_chooser(alloc), False)
    else:
        per_player, levels = _run_all(v, _witness_chooser, True)

    nucleolus = prenucleolus_lp_oracle(v)
    if supplied is None and any(level.ambiguous for level in levels):
        verdict = Verdict.AMBIGUOUS
    elif per_player == nucleolus:
        verdict = Verdict.MATCHES
    else:
        verdict = Verdict.MISMATCH

    witness = None
    if with_witness and verdict is Verdict.AMBIGUOUS:
        witness = ambiguity_witness(v)
    log.debug("rgp procedure: %s -> %s", [str(c) for c in per_player], verdict.value)
    return RgpRun(per_player, tuple(levels), verdict, nucleolus, convex, witness)

