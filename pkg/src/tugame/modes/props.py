from typing import Optional

from tugame.game import property_summary, shapley_value
from tugame.gamefile import parse_game
from tugame.report import Report
from tugame.utils import fmt_members, fmt_q, fmt_vector


# =====================================
# Mode: Game properties
# =====================================

def run_props(game_path: str, *, output: Optional[str] = None, as_json: bool = False,
              quiet: bool = False) -> int:
    v = parse_game(game_path)
    summary = property_summary(v)
    report = Report("props", "GAME PROPERTIES", game_path=game_path, game=v)
    lines = []
    for key in ("monotone", "superadditive", "convex", "zero_monotone"):
        lines.append(f"  {key.replace('_', '-'):<15} {'yes' if summary[key] else 'no'}")
    veto = summary["veto_players"]
    lines.append(f"  {'veto players':<15} {fmt_members(veto) if veto else 'none'}")
    report.add_section("PROPERTIES", lines)
    for key, value in summary.items():
        report.set_result(key, value)
    report.emit(output, as_json=as_json, quiet=quiet)
    return 0


# =====================================
# Mode: Shapley value
# =====================================

def run_shapley(game_path: str, *, output: Optional[str] = None, as_json: bool = False,
                quiet: bool = False) -> int:
    v = parse_game(game_path)
    phi = shapley_value(v)
    report = Report("shapley", "SHAPLEY VALUE", game_path=game_path, game=v)
    report.add_section("RESULT", [f"  phi = {fmt_vector(phi)}"] +
                       [f"  player {k}: {fmt_q(val)}" for k, val in enumerate(phi, start=1)])
    report.set_result("shapley", phi)
    report.emit(output, as_json=as_json, quiet=quiet)
    return 0
