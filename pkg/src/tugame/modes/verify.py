import logging
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

from tugame.config import DEFAULT_VERIFY_OUTPUT
from tugame.generators import random_convex_game, random_imputation
from tugame.leastcore import prenucleolus_lp_oracle
from tugame.modes.solve import EXIT_NOT_CONVERGED
from tugame.prekernel import SolveStatus, solve_prekernel
from tugame.report import Report
from tugame.stearns import StearnsStatus, stearns_solve
from tugame.utils import _make_pbar, fmt_q, fmt_vector

log = logging.getLogger(__name__)

STEARNS_EVERY = 20
STEARNS_TOL = Fraction(1, 10**12)
STEARNS_ACCEPT = Fraction(1, 10**9)
STEARNS_MAX_STEPS = 5000


def game_seed(seed: int, index: int) -> int:
    return seed * 1_000_003 + index


def check_one(index: int, n: int, seed: int) -> Dict[str, Any]:
    """Solver against oracle on one random convex game; Stearns on a subsample."""
    rng = random.Random(game_seed(seed, index))
    v = random_convex_game(n, rng)
    trace = solve_prekernel(v)
    oracle = prenucleolus_lp_oracle(v)
    row: Dict[str, Any] = {
        "index": index,
        "n": n,
        "status": trace.status,
        "steps": trace.steps,
        "bound": trace.bound,
        "solver": trace.terminal,
        "oracle": oracle,
        "agree": trace.status is SolveStatus.CONVERGED and trace.terminal == oracle,
        "stearns": None,
    }
    if index % STEARNS_EVERY == 0:
        st = stearns_solve(v, random_imputation(v, rng), tol=STEARNS_TOL, max_steps=STEARNS_MAX_STEPS)
        dist = max(abs(a - b) for a, b in zip(st.terminal, oracle))
        row["stearns"] = {
            "status": st.status,
            "distance": dist,
            "ok": st.status is StearnsStatus.CONVERGED and dist <= STEARNS_ACCEPT * v.value(v.grand),
        }
    return row


# =====================================
# Mode: Verify batch
# =====================================

def run_verify(games: int, players: Sequence[int], seed: int, output: Optional[str] = None, *,
               workers: int = 1, as_json: bool = False, quiet: bool = False) -> int:
    players = list(players)
    if not quiet:
        print(f"Checking {games} random convex games (n in {players}, seed {seed})")
    started = time.time()
    rows: List[Dict[str, Any]] = []
    pbar = _make_pbar(games, "Verifying", quiet)
    ex: Optional[ProcessPoolExecutor] = None
    futures: Dict = {}

    try:
        if workers <= 1:
            for k in range(games):
                rows.append(check_one(k, players[k % len(players)], seed))
                pbar.update(1)
        else:
            ex = ProcessPoolExecutor(max_workers=workers)
            futures = {
                ex.submit(check_one, k, players[k % len(players)], seed): k
                for k in range(games)
            }
            for fut in as_completed(futures):
                rows.append(fut.result())
                pbar.update(1)
    except KeyboardInterrupt:
        if not quiet:
            print("\nInterrupted by user. Cancelling verify batch...", file=sys.stderr)
        if ex is not None:
            for f in futures:
                f.cancel()
            ex.shutdown(cancel_futures=True)
        return 130
    finally:
        if ex is not None:
            ex.shutdown(wait=True)
        pbar.close()

    rows.sort(key=lambda r: r["index"])
    disagree = [r for r in rows if not r["agree"]]
    over_bound = [r for r in rows if r["steps"] > r["bound"]]
    stearns_rows = [r for r in rows if r["stearns"] is not None]
    stearns_bad = [r for r in stearns_rows if not r["stearns"]["ok"]]
    within = len(rows) - len(over_bound)
    share = Fraction(within, len(rows)) if rows else Fraction(1)

    report = Report("verify", "SOLVER / ORACLE VERIFICATION",
                    args={"games": games, "players": players, "seed": seed})
    report.add_header("Games", f"{games}  players {','.join(str(n) for n in players)}  seed {seed}")
    report.add_header("Agree", f"{len(rows) - len(disagree)}  Disagree: {len(disagree)}")
    report.add_header("Within step bound", f"{within}/{len(rows)} ({float(share) * 100:.1f}%)")
    report.add_header("Stearns subsample", f"{len(stearns_rows) - len(stearns_bad)}/{len(stearns_rows)} ok")

    if disagree:
        lines = []
        for r in disagree:
            lines.append(f"  game {r['index']} (n={r['n']}, seed {game_seed(seed, r['index'])}): {r['status'].value}")
            lines.append(f"    solver {fmt_vector(r['solver'])}")
            lines.append(f"    oracle {fmt_vector(r['oracle'])}")
        report.add_section(f"DISAGREEMENTS ({len(disagree)})", lines)
    if over_bound:
        report.add_section(f"ABOVE STEP BOUND ({len(over_bound)})", [
            f"  game {r['index']} (n={r['n']}): {r['steps']} steps, bound {r['bound']}" for r in over_bound
        ])
        for r in over_bound:
            log.info("game %d needed %d steps (bound %d)", r["index"], r["steps"], r["bound"])
    if stearns_bad:
        report.add_section(f"STEARNS OUTSIDE TOLERANCE ({len(stearns_bad)})", [
            f"  game {r['index']}: {r['stearns']['status'].value}, distance {fmt_q(r['stearns']['distance'])}"
            for r in stearns_bad
        ])
    by_n: Dict[int, List[int]] = {}
    for r in rows:
        by_n.setdefault(r["n"], []).append(r["steps"])
    report.add_section("STEP COUNTS", [
        f"  n={n}: games {len(steps)}  mean {sum(steps) / len(steps):.2f}  max {max(steps)}"
        for n, steps in sorted(by_n.items())
    ])

    report.set_result("games", games)
    report.set_result("disagreements", [r["index"] for r in disagree])
    report.set_result("above_bound", [r["index"] for r in over_bound])
    report.set_result("within_bound_share", share)
    report.set_result("stearns_failures", [r["index"] for r in stearns_bad])

    out_path = output or DEFAULT_VERIFY_OUTPUT
    report.emit(out_path, as_json=as_json, quiet=quiet)
    if not quiet:
        print(f"Checked: {len(rows)} games in {time.time() - started:.1f}s")
        print(f"agree: {len(rows) - len(disagree)}  disagree: {len(disagree)}")
    return EXIT_NOT_CONVERGED if disagree else 0
