import logging
import os
from typing import Any, Dict, List, Optional, Sequence

from tugame.catalog import EXAMPLE_NUCLEOLUS, bundled_file_name, bundled_games
from tugame.errors import GameError
from tugame.game import is_convex
from tugame.gamefile import write_game
from tugame.leastcore import core_nonempty, prenucleolus_lp_oracle
from tugame.modes.solve import EXIT_NOT_CONVERGED
from tugame.prekernel import SolveStatus, solve_prekernel
from tugame.report import Report
from tugame.utils import fmt_vector

log = logging.getLogger(__name__)


# =====================================
# Mode: Bundled games
# =====================================

def run_catalog(names: Optional[Sequence[str]] = None, write_dir: Optional[str] = None, *,
                output: Optional[str] = None, as_json: bool = False, quiet: bool = False) -> int:
    """Solve every bundled game and check it against the shared pre-kernel point."""
    games = bundled_games()
    chosen: List[str] = list(names) if names else list(games)
    unknown = [name for name in chosen if name not in games]
    if unknown:
        raise GameError(f"unknown bundled game(s) {', '.join(unknown)}; expected one of {', '.join(games)}")

    rows: List[Dict[str, Any]] = []
    for name in chosen:
        v = games[name]
        trace = solve_prekernel(v)
        oracle = prenucleolus_lp_oracle(v)
        agree = (trace.status is SolveStatus.CONVERGED
                 and trace.terminal == oracle == EXAMPLE_NUCLEOLUS)
        if not agree:
            log.warning("bundled game %s: solver %s, oracle %s", name, trace.terminal, oracle)
        rows.append({
            "name": name,
            "convex": is_convex(v),
            "core_nonempty": core_nonempty(v),
            "status": trace.status,
            "steps": trace.steps,
            "solver": trace.terminal,
            "oracle": oracle,
            "agree": agree,
        })

    written: List[str] = []
    if write_dir:
        os.makedirs(write_dir, exist_ok=True)
        for name in chosen:
            path = os.path.join(write_dir, bundled_file_name(name))
            write_game(games[name], path)
            written.append(path)

    mismatched = [r["name"] for r in rows if not r["agree"]]
    report = Report("catalog", "BUNDLED GAMES", args={"names": chosen, "write": write_dir})
    report.add_header("Games", str(len(rows)))
    report.add_header("Expected point", fmt_vector(EXAMPLE_NUCLEOLUS))
    report.add_header("Mismatched", ", ".join(mismatched) if mismatched else "none")
    lines = []
    for r in rows:
        lines.append(f"  {r['name']:<8} convex {'yes' if r['convex'] else 'no':<4} "
                     f"core {'nonempty' if r['core_nonempty'] else 'empty':<9} "
                     f"{r['status'].value:<16} steps {r['steps']:<3} "
                     f"{'OK' if r['agree'] else 'MISMATCH'}")
        if not r["agree"]:
            lines.append(f"           solver {fmt_vector(r['solver'])}")
            lines.append(f"           oracle {fmt_vector(r['oracle'])}")
    report.add_section("GAMES", lines)
    if written:
        report.add_section(f"FILES WRITTEN ({len(written)})", [f"  {p}" for p in written])
    report.set_result("games", rows)
    report.set_result("mismatched", mismatched)
    report.set_result("written", written)
    report.emit(output, as_json=as_json, quiet=quiet)
    return EXIT_NOT_CONVERGED if mismatched else 0
