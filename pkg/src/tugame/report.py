"""Report envelope shared by every subcommand.

A report is rendered either as the plain text layout used across the
toolkit (title, key/value header, ``=`` rule, underlined sections) or as a
JSON document in which every rational is a canonical ``p/q`` string.
"""
import json
import time
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from tugame.config import VERSION
from tugame.game import TuGame
from tugame.gamefile import game_digest
from tugame.utils import fmt_q


def jsonable(obj: Any) -> Any:
    """Exact JSON form: Fractions become p/q strings, enums their values."""
    if isinstance(obj, (bool, int, str)) or obj is None:
        return obj
    if isinstance(obj, Fraction):
        return fmt_q(obj)
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    raise TypeError(f"cannot serialise {type(obj).__name__}")


class Report:
    def __init__(self, command: str, title: str, *,
                 game_path: Optional[str] = None, game: Optional[TuGame] = None,
                 args: Optional[Dict[str, Any]] = None):
        self.command = command
        self.title = title
        self.game_path = game_path
        self.digest = game_digest(game) if game is not None else None
        self.args = dict(args or {})
        self.header: List[Tuple[str, str]] = []
        self.sections: List[Tuple[str, List[str]]] = []
        self.results: Dict[str, Any] = {}
        self.diagnostics: List[str] = []
        self._started = time.time()
        if game is not None:
            self.add_header("Game", f"{game_path or '<memory>'}  ({game.n} players, v(N) = {fmt_q(game.value(game.grand))})")

    def add_header(self, key: str, value: str) -> None:
        self.header.append((key, value))

    def add_section(self, heading: str, lines: List[str]) -> None:
        self.sections.append((heading, list(lines)))

    def set_result(self, key: str, value: Any) -> None:
        self.results[key] = value

    def diagnose(self, message: str) -> None:
        self.diagnostics.append(message)

    @property
    def elapsed(self) -> float:
        return time.time() - self._started

    def render_text(self) -> str:
        out = [self.title]
        for key, value in self.header:
            out.append(f"{key}: {value}")
        out.append(f"Elapsed: {self.elapsed:.2f}s")
        out.append("=" * 60)
        out.append("")
        for heading, lines in self.sections:
            out.append(heading)
            out.append("-" * 40)
            out.extend(lines)
            out.append("")
        if self.diagnostics:
            out.append(f"DIAGNOSTICS ({len(self.diagnostics)})")
            out.append("-" * 40)
            out.extend(f"  {d}" for d in self.diagnostics)
            out.append("")
        return "\n".join(out)

    def to_json(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            "version": VERSION,
            "inputs": {
                "game": self.game_path,
                "sha256": self.digest,
                "args": jsonable(self.args),
            },
            "results": jsonable(self.results),
            "diagnostics": list(self.diagnostics),
            "timing": {"elapsed_s": f"{self.elapsed:.3f}"},
        }

    def emit(self, output: Optional[str] = None, *, as_json: bool = False, quiet: bool = False) -> None:
        text = json.dumps(self.to_json(), indent=2) + "\n" if as_json else self.render_text()
        if output:
            out_path = Path(output).expanduser().resolve()
            out_path.parent.mkdir(parents=True, exist_ok=True)
            with open(out_path, "w", encoding="utf-8") as f:
                f.write(text)
            if not quiet:
                print(f"Report written to: {out_path}")
        else:
            print(text, end="" if text.endswith("\n") else "\n")
