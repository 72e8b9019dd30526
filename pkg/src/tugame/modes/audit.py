import sys
from typing import Optional

from tugame.gamefile import parse_game, parse_vector
from tugame.report import Report
from tugame.rgp import Verdict, run_rgp_procedure
from tugame.utils import fmt_coalition, fmt_members, fmt_q, fmt_vector


# =====================================
# Mode: Reduced-game procedure audit
# =====================================

def run_rgp_audit(game_path: str, supply: Optional[str] = None, *, output: Optional[str] = None,
                  as_json: bool = False, quiet: bool = False) -> int:
    v = parse_game(game_path)
    supplied = parse_vector(supply, v.n) if supply else None
    run = run_rgp_procedure(v, supplied)

    report = Report("rgp-audit", "REDUCED-GAME PROCEDURE AUDIT", game_path=game_path, game=v,
                    args={"supply": supplied})
    report.add_header("Convex", "yes" if run.convex else "no")
    report.add_header("Allocation", fmt_vector(supplied) if supplied else "not supplied (least-core witness)")
    report.add_header("Verdict", run.verdict.value)
    if not run.convex:
        report.diagnose("game is not convex; the procedure is shown for demonstration only")
        if not quiet:
            print("[warn] game is not convex; the procedure is shown for demonstration only", file=sys.stderr)

    report.add_section("RESULT", [
        f"  procedure   {fmt_vector(run.per_player)}",
        f"  nucleolus   {fmt_vector(run.nucleolus)}",
    ])
    lines = []
    for lvl in run.levels:
        flag = "  AMBIGUOUS" if lvl.ambiguous else ""
        alts = " ".join(fmt_coalition(m) for m in lvl.alternatives)
        lines.append(f"  player {lvl.player} level {lvl.level}: players {fmt_members(lvl.players)}"
                     f"  S = {fmt_coalition(lvl.essential)}  eps = {fmt_q(lvl.epsilon)}"
                     f"  paid out {fmt_q(lvl.removed_payoff)}{flag}")
        if alts:
            lines.append(f"      alternatives: {alts}")
    report.add_section("LEVELS", lines)

    levels_payload = [
        {
            "player": lvl.player,
            "level": lvl.level,
            "players": list(lvl.players),
            "essential": fmt_coalition(lvl.essential),
            "epsilon": lvl.epsilon,
            "ambiguous": lvl.ambiguous,
            "alternatives": [fmt_coalition(m) for m in lvl.alternatives],
            "removed_payoff": lvl.removed_payoff,
        }
        for lvl in run.levels
    ]
    report.set_result("per_player", run.per_player)
    report.set_result("nucleolus", run.nucleolus)
    report.set_result("verdict", run.verdict)
    report.set_result("convex", run.convex)
    report.set_result("levels", levels_payload)

    if run.witness is not None:
        w = run.witness
        report.add_section("TWO-VERTEX WITNESS", [
            f"  from first vertex {fmt_vector(w.first_vertex)}: {fmt_vector(w.per_player_first)}",
            f"  from last vertex  {fmt_vector(w.last_vertex)}: {fmt_vector(w.per_player_last)}",
            f"  {'results differ' if w.differs else 'results agree'}",
        ])
        report.set_result("witness", {
            "first_vertex": w.first_vertex,
            "last_vertex": w.last_vertex,
            "per_player_first": w.per_player_first,
            "per_player_last": w.per_player_last,
            "differs": w.differs,
        })
    elif run.verdict is Verdict.AMBIGUOUS:
        report.diagnose("two-vertex witness skipped (player count above the vertex cap)")
    report.emit(output, as_json=as_json, quiet=quiet)
    return 0
