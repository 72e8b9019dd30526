import sys
from typing import Optional

from tugame.errors import GameError
from tugame.game import excess_vector, is_efficient
from tugame.gamefile import parse_collection, parse_game, parse_vector
from tugame.leastcore import (
    balanced_weights,
    core_contains,
    kohlberg_levels,
    least_core,
    least_core_vertices,
    prenucleolus_lp_oracle,
    proper_coalitions,
    satisfies_kohlberg,
)
from tugame.report import Report
from tugame.utils import fmt_coalition, fmt_q, fmt_vector


# =====================================
# Mode: Least-core
# =====================================

def run_leastcore(game_path: str, vertices: bool = False, probe: str = "aggregate", *,
                  workers: int = 1, output: Optional[str] = None, as_json: bool = False,
                  quiet: bool = False) -> int:
    v = parse_game(game_path)
    lc = least_core(v, probe=probe, workers=workers)
    report = Report("leastcore", "LEAST-CORE", game_path=game_path, game=v,
                    args={"vertices": vertices, "probe": probe})
    report.add_header("Epsilon", fmt_q(lc.epsilon))
    report.add_header("Core", "nonempty" if lc.epsilon <= 0 else "empty")
    report.add_section("WITNESS", [f"  x = {fmt_vector(lc.witness)}"])
    report.add_section(f"TIGHT AT WITNESS ({len(lc.tight)})",
                       ["  " + " ".join(fmt_coalition(m) for m in lc.tight)])
    report.add_section(f"TIGHT ON THE WHOLE LEAST-CORE ({len(lc.universally_tight)})",
                       ["  " + " ".join(fmt_coalition(m) for m in lc.universally_tight)])
    report.set_result("epsilon", lc.epsilon)
    report.set_result("witness", lc.witness)
    report.set_result("tight", [fmt_coalition(m) for m in lc.tight])
    report.set_result("universally_tight", [fmt_coalition(m) for m in lc.universally_tight])

    if vertices:
        try:
            verts = least_core_vertices(v, result=lc)
        except GameError as exc:
            if not quiet:
                print(f"[warn] {exc}", file=sys.stderr)
            report.diagnose(str(exc))
        else:
            report.add_section(f"VERTICES ({len(verts)})", [f"  {fmt_vector(x)}" for x in verts])
            report.set_result("vertices", verts)
    report.emit(output, as_json=as_json, quiet=quiet)
    return 0


# =====================================
# Mode: Core membership
# =====================================

def run_core(game_path: str, check: Optional[str] = None, *, output: Optional[str] = None,
             as_json: bool = False, quiet: bool = False) -> int:
    v = parse_game(game_path)
    lc = least_core(v)
    nonempty = lc.epsilon <= 0
    report = Report("core", "CORE", game_path=game_path, game=v, args={"check": check})
    report.add_header("Core", "nonempty" if nonempty else "empty")
    report.add_header("Least-core epsilon", fmt_q(lc.epsilon))
    report.set_result("nonempty", nonempty)
    if nonempty:
        report.add_section("CORE POINT", [f"  x = {fmt_vector(lc.witness)}"])
        report.set_result("point", lc.witness)

    if check is not None:
        x = parse_vector(check, v.n)
        inside = core_contains(v, x)
        lines = [f"  x = {fmt_vector(x)}: {'in the core' if inside else 'NOT in the core'}"]
        if not is_efficient(v, x):
            lines.append(f"  x(N) = {fmt_q(sum(x))} but v(N) = {fmt_q(v.value(v.grand))}")
        exc = excess_vector(v, x)
        blocking = [m for m in proper_coalitions(v.n) if exc[m] > 0]
        if blocking:
            lines.append("  blocking: " + " ".join(f"{fmt_coalition(m)} (+{fmt_q(exc[m])})" for m in blocking))
        report.add_section("MEMBERSHIP", lines)
        report.set_result("check", {"x": x, "in_core": inside,
                                    "blocking": [fmt_coalition(m) for m in blocking]})
    report.emit(output, as_json=as_json, quiet=quiet)
    return 0


# =====================================
# Mode: Balanced collections
# =====================================

def run_balanced(n: int, collection: str, *, output: Optional[str] = None, as_json: bool = False,
                 quiet: bool = False) -> int:
    masks = parse_collection(collection, n)
    weights = balanced_weights(n, masks)
    report = Report("balanced", "BALANCED COLLECTION", args={"n": n, "collection": collection})
    report.add_header("Players", str(n))
    report.add_header("Collection", " ".join(fmt_coalition(m) for m in masks))
    report.add_header("Verdict", "balanced" if weights is not None else "not balanced")
    report.set_result("balanced", weights is not None)
    if weights is not None:
        report.add_section("WEIGHTS", [f"  {fmt_coalition(m):<12} {fmt_q(w)}" for m, w in weights.items()])
        report.set_result("weights", {fmt_coalition(m): w for m, w in weights.items()})
    report.emit(output, as_json=as_json, quiet=quiet)
    return 0


# =====================================
# Mode: Kohlberg diagnostic
# =====================================

def run_kohlberg(game_path: str, at: Optional[str] = None, *, output: Optional[str] = None,
                 as_json: bool = False, quiet: bool = False) -> int:
    v = parse_game(game_path)
    x = parse_vector(at, v.n) if at else prenucleolus_lp_oracle(v)
    levels = kohlberg_levels(v, x)
    ok = satisfies_kohlberg(v, x)
    report = Report("kohlberg", "KOHLBERG CRITERION", game_path=game_path, game=v, args={"at": at})
    report.add_header("Allocation", fmt_vector(x) + ("" if at else "  (pre-nucleolus)"))
    report.add_header("Verdict", "every level balanced" if ok else "criterion fails")
    lines = []
    for lvl in levels:
        names = " ".join(fmt_coalition(m) for m in lvl.coalitions)
        lines.append(f"  {fmt_q(lvl.excess):>8}  {'balanced' if lvl.balanced else 'NOT balanced':<13} {names}")
    report.add_section("LEVELS (descending excess, cumulative)", lines)
    report.set_result("x", x)
    report.set_result("satisfied", ok)
    report.set_result("levels", [
        {"excess": lvl.excess, "coalitions": [fmt_coalition(m) for m in lvl.coalitions], "balanced": lvl.balanced}
        for lvl in levels
    ])
    report.emit(output, as_json=as_json, quiet=quiet)
    return 0
