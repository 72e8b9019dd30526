"""Bundled four-player games.

``example_game`` is the convex game used throughout the documentation and
tests. The replication games share its pre-kernel point (5/2, 7/2, 2, 2) and
are listed in mask order 1..15, i.e. {1}, {2}, {1,2}, {3}, {1,3}, {2,3},
{1,2,3}, {4}, {1,4}, {2,4}, {1,2,4}, {3,4}, {1,3,4}, {2,3,4}, N.
"""
from fractions import Fraction
from typing import Dict, List

from tugame.errors import GameError
from tugame.game import TuGame

EXAMPLE_NUCLEOLUS = (Fraction(5, 2), Fraction(7, 2), Fraction(2), Fraction(2))

_V4_HEAD = ["-13/43", "14/139", "169/64", "-9/52", "15/74", "116/43", "303/52", "-9/52"]
_V7_HEAD = ["-6/61", "2/61", "273/97", "4/23", "1/48", "177/61", "142/23", "4/23"]

_REPLICATION: Dict[str, List[str]] = {
    "v1": ["-16/27", "-39/46", "272/107", "1/45", "-38/83", "65/27", "271/45", "1/45",
           "-33/79", "-35/52", "271/45", "-3/37", "-47/88", "317/136", "10"],
    "v2": ["-21/79", "15/29", "125/31", "3/47", "-28/95", "216/79", "285/47", "3/47",
           "-83/152", "9/38", "285/47", "23/65", "-7/57", "93/32", "10"],
    "v3": ["-21/52", "7/52", "381/143", "-23/32", "-50/31", "135/52", "169/32", "-23/32",
           "-96/95", "-17/36", "169/32", "-79/68", "-237/142", "94/37", "10"],
    "v4": _V4_HEAD + ["-61/45", "29/53", "303/52", "-7/20", "-6/7", "91/29", "10"],
    "v5": _V4_HEAD + ["13/90", "-20/21", "303/52", "-7/20", "9/14", "95/58", "10"],
    "v6": _V4_HEAD + ["13/90", "29/53", "303/52", "-7/20", "9/14", "91/29", "10"],
    "v7": _V7_HEAD + ["4/29", "25/93", "142/23", "-81/89", "-19/25", "123/58", "10"],
    # 105/292 for {2,3,4} is kept as published
    "v8": _V7_HEAD + ["4/29", "25/93", "142/23", "23/39", "-19/25", "105/292", "10"],
    "v9": _V7_HEAD + ["4/29", "25/93", "142/23", "23/39", "37/50", "123/58", "10"],
    "v10": _V7_HEAD + ["4/29", "25/93", "142/23", "23/39", "37/50", "105/29", "10"],
}


def example_game() -> TuGame:
    return TuGame.from_mapping(4, {
        (1, 2): 3,
        (2, 3): 3,
        (2, 3, 4): 3,
        (1, 2, 3): 6,
        (1, 2, 4): 6,
        (1, 2, 3, 4): 10,
    })


def replication_game(name: str) -> TuGame:
    try:
        raw = _REPLICATION[name]
    except KeyError:
        raise GameError(f"unknown replication game {name!r}; expected one of {', '.join(_REPLICATION)}")
    return TuGame(4, [0] + raw)


def replication_games() -> Dict[str, TuGame]:
    return {name: replication_game(name) for name in _REPLICATION}


def bundled_games() -> Dict[str, TuGame]:
    """The example game followed by v1..v10, keyed by name."""
    games = {"example": example_game()}
    games.update(replication_games())
    return games


def bundled_file_name(name: str) -> str:
    return "example.game" if name == "example" else f"replication_{name}.game"
