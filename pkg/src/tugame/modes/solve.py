from typing import Any, Dict, List, Optional

from tugame.gamefile import parse_game, parse_rational, parse_vector
from tugame.errors import VectorFormatError
from tugame.game import TuGame, excess_vector
from tugame.leastcore import kohlberg_levels, prenucleolus_levels
from tugame.prekernel import SolveStatus, SolveTrace, solve_prekernel
from tugame.report import Report
from tugame.stearns import StearnsStatus, stearns_solve
from tugame.surplus import lex_selection, most_effective, selection_coalitions, surplus_matrix
from tugame.utils import fmt_coalition, fmt_matrix, fmt_q, fmt_vector

EXIT_NOT_CONVERGED = 3
STEARNS_SHOWN_STEPS = 25


def _surplus_lines(v: TuGame, x) -> List[str]:
    sm = surplus_matrix(v, x)
    return fmt_matrix(sm.s)


def _selection_lines(v: TuGame, x) -> List[str]:
    sel = lex_selection(v, x)
    return [f"  ({i},{j})  {fmt_coalition(s)}" for i, j, s in sel.entries()]


def _excess_lines(v: TuGame, x) -> List[str]:
    exc = excess_vector(v, x)
    return [f"  e({fmt_coalition(mask)}) = {fmt_q(exc[mask])}" for mask in range(1, 1 << v.n)]


def _kohlberg_section(report: Report, v: TuGame, x) -> None:
    levels = kohlberg_levels(v, x)
    lines = []
    for lvl in levels:
        names = " ".join(fmt_coalition(m) for m in lvl.coalitions)
        lines.append(f"  {fmt_q(lvl.excess):>8}  {'balanced' if lvl.balanced else 'NOT balanced'}  {names}")
    report.add_section("KOHLBERG LEVELS (cumulative balancedness)", lines)
    report.set_result("kohlberg", [
        {"excess": lvl.excess, "coalitions": [fmt_coalition(m) for m in lvl.coalitions], "balanced": lvl.balanced}
        for lvl in levels
    ])


def _trace_payload(trace: SolveTrace) -> List[Dict[str, Any]]:
    return [
        {
            "x": it.x,
            "h": it.h,
            "selection": [[i, j, fmt_coalition(s)] for i, j, s in it.selection.entries()],
            "E": it.system.E,
            "alpha": it.system.alpha,
            "Q": it.system.Q,
            "a": it.system.a,
        }
        for it in trace.iterations
    ]


# =====================================
# Mode: Pre-kernel
# =====================================

def run_prekernel(game_path: str, start: Optional[str] = None, trace: bool = False, *,
                  output: Optional[str] = None, as_json: bool = False, quiet: bool = False) -> int:
    v = parse_game(game_path)
    x0 = parse_vector(start, v.n) if start else None
    result = solve_prekernel(v, x0)

    report = Report("prekernel", "PRE-KERNEL (conjugation solver)", game_path=game_path, game=v,
                    args={"start": x0, "trace": trace})
    report.add_header("Start", fmt_vector(result.iterations[0].x))
    report.add_header("Status", result.status.value)
    report.add_header("Gamma steps", f"{result.steps}  (expected at most {result.bound})")

    report.add_section("RESULT", [f"  x = {fmt_vector(result.terminal)}",
                                  f"  h(x) = {fmt_q(result.iterations[-1].h)}"])
    if trace:
        for k, it in enumerate(result.iterations):
            lines = [f"  y{k} = {fmt_vector(it.x)}", f"  h = {fmt_q(it.h)}", "  selection:"]
            lines += ["  " + line for line in _selection_lines(v, it.x)]
            lines.append("  E:")
            lines += fmt_matrix(it.system.E, "    ")
            lines.append(f"  alpha = {fmt_vector(it.system.alpha)}")
            lines.append("  Q:")
            lines += fmt_matrix(it.system.Q, "    ")
            lines.append(f"  a = {fmt_vector(it.system.a)}")
            lines.append("  excesses:")
            lines += ["  " + line for line in _excess_lines(v, it.x)]
            report.add_section(f"ITERATION {k}", lines)
        report.set_result("iterations", _trace_payload(result))
    report.add_section("SURPLUS MATRIX AT TERMINAL POINT", _surplus_lines(v, result.terminal))

    report.set_result("terminal", result.terminal)
    report.set_result("status", result.status)
    report.set_result("steps", result.steps)
    report.set_result("bound", result.bound)
    if result.bound_exceeded:
        report.diagnose(f"step count {result.steps} exceeds the expected bound {result.bound}")
    if result.status is not SolveStatus.CONVERGED:
        report.diagnose(f"solver stopped with {result.status.value}")
    report.emit(output, as_json=as_json, quiet=quiet)
    return 0 if result.status is SolveStatus.CONVERGED else EXIT_NOT_CONVERGED


# =====================================
# Mode: Pre-nucleolus
# =====================================

def run_prenucleolus(game_path: str, method: str = "both", *, output: Optional[str] = None,
                     as_json: bool = False, quiet: bool = False, workers: int = 1) -> int:
    v = parse_game(game_path)
    report = Report("prenucleolus", "PRE-NUCLEOLUS", game_path=game_path, game=v, args={"method": method})
    report.add_header("Method", method)
    code = 0
    conj = oracle = None

    if method in ("conjugation", "both"):
        trace = solve_prekernel(v)
        report.add_section("CONJUGATION SOLVER", [
            f"  x = {fmt_vector(trace.terminal)}",
            f"  status: {trace.status.value}, {trace.steps} gamma steps",
        ])
        report.set_result("conjugation", {"x": trace.terminal, "status": trace.status, "steps": trace.steps})
        if trace.status is SolveStatus.CONVERGED:
            conj = trace.terminal
        else:
            code = EXIT_NOT_CONVERGED

    if method in ("lp-oracle", "both"):
        res = prenucleolus_levels(v, probe="per-coalition" if workers > 1 else "aggregate", workers=workers)
        lines = [f"  x = {fmt_vector(res.x)}"]
        for k, lvl in enumerate(res.levels, start=1):
            fixed = " ".join(fmt_coalition(m) for m in lvl.fixed)
            lines.append(f"  level {k}: eps = {fmt_q(lvl.epsilon)}  fixed {fixed}")
        report.add_section("LP ORACLE", lines)
        report.set_result("lp_oracle", {"x": res.x, "levels": [
            {"epsilon": lvl.epsilon, "fixed": [fmt_coalition(m) for m in lvl.fixed]} for lvl in res.levels
        ]})
        oracle = res.x

    if method == "both" and conj is not None:
        agree = conj == oracle
        report.add_section("CROSS-CHECK", [f"  {'PASS' if agree else 'DISCREPANCY'}: exact comparison"])
        report.set_result("cross_check", "PASS" if agree else "DISCREPANCY")
        if not agree:
            diff = tuple(a - b for a, b in zip(conj, oracle))
            report.set_result("discrepancy", {"conjugation": conj, "lp_oracle": oracle, "difference": diff})
            report.diagnose(f"methods disagree by {fmt_vector(diff)}; the pre-kernel of this game "
                            f"may not be single-valued")
    point = oracle if oracle is not None else conj
    if point is not None:
        _kohlberg_section(report, v, point)
    report.emit(output, as_json=as_json, quiet=quiet)
    return code


# =====================================
# Mode: LP oracle
# =====================================

def run_oracle(game_path: str, *, output: Optional[str] = None, as_json: bool = False,
               quiet: bool = False, workers: int = 1) -> int:
    v = parse_game(game_path)
    res = prenucleolus_levels(v, probe="per-coalition" if workers > 1 else "aggregate", workers=workers)
    report = Report("oracle", "PRE-NUCLEOLUS (sequential LP)", game_path=game_path, game=v)
    report.add_header("Levels", str(len(res.levels)))
    report.add_section("RESULT", [f"  x = {fmt_vector(res.x)}"])
    report.add_section("LEVELS", [
        f"  {k}: eps = {fmt_q(lvl.epsilon)}  fixed {' '.join(fmt_coalition(m) for m in lvl.fixed)}"
        for k, lvl in enumerate(res.levels, start=1)
    ])
    report.set_result("x", res.x)
    report.set_result("levels", [
        {"epsilon": lvl.epsilon, "fixed": [fmt_coalition(m) for m in lvl.fixed]} for lvl in res.levels
    ])
    _kohlberg_section(report, v, res.x)
    report.emit(output, as_json=as_json, quiet=quiet)
    return 0


# =====================================
# Mode: Stearns transfers
# =====================================

def run_stearns(game_path: str, start: str, tol: Optional[str] = None, max_steps: Optional[int] = None, *,
                output: Optional[str] = None, as_json: bool = False, quiet: bool = False) -> int:
    v = parse_game(game_path)
    x0 = parse_vector(start, v.n)
    kwargs: Dict[str, Any] = {"max_steps": max_steps}
    if tol is not None:
        try:
            kwargs["tol"] = parse_rational(tol)
        except ValueError as exc:
            raise VectorFormatError(str(exc)) from None
    result = stearns_solve(v, x0, **kwargs)

    report = Report("stearns", "KERNEL APPROXIMATION (maximal transfers)", game_path=game_path, game=v,
                    args={"start": x0, "tol": kwargs.get("tol"), "max_steps": max_steps})
    report.add_header("Start", fmt_vector(x0))
    report.add_header("Status", result.status.value)
    report.add_header("Transfers", str(len(result.steps)))
    report.add_section("RESULT", [
        f"  x = {fmt_vector(result.terminal)}",
        f"  relative gap = {fmt_q(result.relative_gap)}  (~{float(result.relative_gap):.3e})",
    ])
    shown = result.steps[:STEARNS_SHOWN_STEPS]
    lines = [f"  {k:>4}  ({st.pair[0]},{st.pair[1]})  delta* = {fmt_q(st.delta_star)}  delta = {fmt_q(st.delta)}"
             for k, st in enumerate(shown, start=1)]
    if len(result.steps) > len(shown):
        lines.append(f"  ... {len(result.steps) - len(shown)} more")
    report.add_section("TRANSFERS", lines or ["  (none)"])

    report.set_result("terminal", result.terminal)
    report.set_result("relative_gap", result.relative_gap)
    report.set_result("status", result.status)
    report.set_result("steps", len(result.steps))
    report.emit(output, as_json=as_json, quiet=quiet)
    return 0 if result.status is StearnsStatus.CONVERGED else EXIT_NOT_CONVERGED


# =====================================
# Mode: Surplus analysis
# =====================================

def run_surplus(game_path: str, at: str, *, output: Optional[str] = None, as_json: bool = False,
                quiet: bool = False) -> int:
    v = parse_game(game_path)
    x = parse_vector(at, v.n)
    sm = surplus_matrix(v, x)
    sel = lex_selection(v, x)

    report = Report("surplus", "MAXIMUM SURPLUSES", game_path=game_path, game=v, args={"at": x})
    report.add_header("Allocation", fmt_vector(x))
    report.add_section("SURPLUS MATRIX (row i, column j: s_ij)", fmt_matrix(sm.s))
    effective: Dict[str, List[str]] = {}
    lines = []
    for i, j, s in sel.entries():
        family = [fmt_coalition(m) for m in most_effective(v, x, i, j)]
        effective[f"{i},{j}"] = family
        lines.append(f"  ({i},{j})  s = {fmt_q(sm.at(i, j)):>8}  selected {fmt_coalition(s)}  all: {' '.join(family)}")
    report.add_section("MOST EFFECTIVE COALITIONS", lines)
    distinct = selection_coalitions(sel)
    report.add_section("SELECTED FAMILY", ["  " + " ".join(fmt_coalition(m) for m in distinct)])

    report.set_result("surplus", sm.s)
    report.set_result("selection", [[i, j, fmt_coalition(s)] for i, j, s in sel.entries()])
    report.set_result("most_effective", effective)
    report.set_result("family", [fmt_coalition(m) for m in distinct])
    report.emit(output, as_json=as_json, quiet=quiet)
    return 0
