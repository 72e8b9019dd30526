import sys
from fractions import Fraction
from typing import Iterable, Sequence, List

from tugame.game import Coalition, coalition_members

try:
    from tqdm import tqdm
    HAVE_TQDM = True
except ImportError:
    HAVE_TQDM = False


def fmt_q(value: Fraction) -> str:
    """Canonical text for a rational: `p` or `p/q`, reduced, positive denominator."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def fmt_vector(values: Iterable[Fraction]) -> str:
    return "(" + ", ".join(fmt_q(v) for v in values) + ")"


def fmt_members(members: Sequence[int]) -> str:
    return "{" + ",".join(str(p) for p in members) + "}"


def fmt_coalition(mask: Coalition) -> str:
    return fmt_members(coalition_members(mask))


def fmt_matrix(rows: Sequence[Sequence[Fraction]], indent: str = "  ") -> List[str]:
    """Right-aligned columns, one string per row."""
    cells = [[fmt_q(v) for v in row] for row in rows]
    if not cells:
        return []
    widths = [max(len(r[j]) for r in cells) for j in range(len(cells[0]))]
    return [indent + "  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in cells]


def update_progress(current: int, total: int, prefix: str = "Progress") -> None:
    if total == 0:
        return
    percent = (current / total) * 100
    bar_length = 40
    filled_length = int(bar_length * current // total)
    bar = '█' * filled_length + '░' * (bar_length - filled_length)
    sys.stderr.write(f'\r{prefix}: |{bar}| {current}/{total} ({percent:.1f}%)')
    sys.stderr.flush()
    if current == total:
        sys.stderr.write("\n")


class _FallbackProgress:
    """Plain stderr bar used when tqdm is missing."""
    __slots__ = ('_current', '_total', '_desc', '_quiet')

    def __init__(self, total: int, desc: str, quiet: bool):
        self._current = 0
        self._total = total
        self._desc = desc
        self._quiet = quiet

    def update(self, n: int = 1) -> None:
        self._current += n
        if not self._quiet:
            update_progress(self._current, self._total, self._desc)

    def close(self) -> None:
        pass


def _make_pbar(total: int, desc: str, quiet: bool, unit: str = "game"):
    """tqdm bar when available and not quiet, otherwise the plain fallback."""
    if HAVE_TQDM and not quiet:
        return tqdm(total=total, unit=unit, desc=desc, dynamic_ncols=True, file=sys.stderr)
    return _FallbackProgress(total, desc, quiet)
