"""Game files and command-line vectors.

A game file is UTF-8 text::

    # comment
    players 4
    1,2      3
    2,3,4    3
    m:15     10

The header comes first. Each further line names a coalition, either as
comma-separated 1-based member ids or as ``m:<decimal mask>``, followed by
its worth as an integer or ``p/q``. Omitted coalitions are worth 0.
"""
import hashlib
import logging
import re
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from tugame.config import get_max_n
from tugame.errors import GameError, GameFileError, VectorFormatError
from tugame.game import Allocation, Coalition, TuGame, all_coalitions, coalition_from_members, coalition_members
from tugame.utils import fmt_q

log = logging.getLogger(__name__)

HEADER_RE = re.compile(r"^players\s+(\d+)$")
RATIONAL_RE = re.compile(r"^[+-]?\d+(/\d+)?$")
MASK_RE = re.compile(r"^m:(\d+)$")
MEMBERS_RE = re.compile(r"^\d+(,\d+)*$")


def parse_rational(token: str) -> Fraction:
    token = token.strip()
    if not RATIONAL_RE.match(token):
        raise ValueError(f"not a rational: {token!r}")
    try:
        return Fraction(token)
    except ZeroDivisionError:
        raise ValueError(f"zero denominator: {token!r}") from None


def _parse_coalition(token: str, n: int) -> Coalition:
    m = MASK_RE.match(token)
    if m:
        mask = int(m.group(1))
        if mask == 0:
            raise GameError("the empty coalition cannot be assigned a value")
        if mask >= 1 << n:
            raise GameError(f"mask {mask} is out of range for {n} players")
        return mask
    if MEMBERS_RE.match(token):
        return coalition_from_members((int(p) for p in token.split(",")), n)
    raise GameError(f"bad coalition {token!r} (use member ids like 1,3 or m:<mask>)")


def parse_game_text(text: str, path: Optional[str] = None) -> TuGame:
    n: Optional[int] = None
    values: Dict[Coalition, Fraction] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if n is None:
            m = HEADER_RE.match(line)
            if not m:
                raise GameFileError("expected header 'players <n>'", path=path, line=lineno)
            n = int(m.group(1))
            cap = get_max_n()
            if n > cap:
                raise GameFileError(
                    f"{n} players exceeds the limit of {cap} (raise it with TUGAME_MAX_N)",
                    path=path, line=lineno)
            if n < 2:
                raise GameFileError("a game needs at least 2 players", path=path, line=lineno)
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GameFileError("expected '<coalition> <value>'", path=path, line=lineno)
        try:
            mask = _parse_coalition(parts[0], n)
            value = parse_rational(parts[1])
        except ValueError as exc:
            raise GameFileError(str(exc), path=path, line=lineno) from exc
        if mask in values:
            raise GameFileError(f"duplicate coalition {parts[0]}", path=path, line=lineno)
        values[mask] = value

    if n is None:
        raise GameFileError("empty game file", path=path)
    grand = (1 << n) - 1
    if values.get(grand, Fraction(0)) <= 0:
        raise GameFileError("grand coalition value required and positive", path=path)
    table: List[Fraction] = [Fraction(0)] * (1 << n)
    for mask, value in values.items():
        table[mask] = value
    log.debug("parsed %d-player game with %d listed coalitions", n, len(values))
    return TuGame(n, table)


def parse_game(path: str) -> TuGame:
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as exc:
        raise GameFileError(f"cannot read game file: {exc.strerror}", path=path) from exc
    except UnicodeDecodeError as exc:
        raise GameFileError("game file is not valid UTF-8", path=path) from exc
    return parse_game_text(text, path=path)


def serialize_game(v: TuGame) -> str:
    """Canonical text: header, then every nonzero coalition in coalition order."""
    lines = [f"players {v.n}"]
    for mask in all_coalitions(v.n):
        value = v.value(mask)
        if value != 0:
            members = ",".join(str(p) for p in coalition_members(mask))
            lines.append(f"{members} {fmt_q(value)}")
    return "\n".join(lines) + "\n"


def write_game(v: TuGame, path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(serialize_game(v))


def game_digest(v: TuGame) -> str:
    return hashlib.sha256(serialize_game(v).encode("utf-8")).hexdigest()


# =====================================
# Command-line values
# =====================================

def parse_vector(text: str, n: Optional[int] = None) -> Allocation:
    tokens = [t.strip() for t in text.split(",")]
    out = []
    for tok in tokens:
        try:
            out.append(parse_rational(tok))
        except ValueError:
            raise VectorFormatError(f"not a rational: {tok!r}") from None
    if n is not None and len(out) != n:
        raise VectorFormatError(f"expected {n} components, got {len(out)}")
    return tuple(out)


def parse_collection(text: str, n: int) -> Tuple[Coalition, ...]:
    """``1;3;2,3;m:7`` -> masks, in the order given."""
    out = []
    for tok in (t.strip() for t in text.split(";")):
        if not tok:
            raise VectorFormatError("empty coalition in collection")
        try:
            out.append(_parse_coalition(tok, n))
        except GameError as exc:
            raise VectorFormatError(str(exc)) from None
    return tuple(out)
