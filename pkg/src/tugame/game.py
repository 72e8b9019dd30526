"""TU games over bitmask coalitions.

Player i (1-based) is a member of coalition ``mask`` iff bit ``i - 1`` is set,
so ``values[mask]`` is v(S). Every value is a ``fractions.Fraction``; nothing
in here touches floating point.
"""
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple, Union

from tugame.errors import GameError

Coalition = int
Allocation = Tuple[Fraction, ...]
Number = Union[int, Fraction, str]


# =====================================
# Coalitions
# =====================================

def popcount(mask: Coalition) -> int:
    return bin(mask).count("1")


def coalition_members(mask: Coalition) -> Tuple[int, ...]:
    """Ascending 1-based member list."""
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def coalition_from_members(members: Iterable[int], n: int) -> Coalition:
    mask = 0
    for p in members:
        if not 1 <= p <= n:
            raise GameError(f"player {p} out of range 1..{n}")
        bit = 1 << (p - 1)
        if mask & bit:
            raise GameError(f"player {p} listed twice")
        mask |= bit
    return mask


def coalition_key(mask: Coalition) -> Tuple[int, Tuple[int, ...]]:
    """Sort key of the coalition total order: cardinality, then member lists."""
    members = coalition_members(mask)
    return len(members), members


@lru_cache(maxsize=None)
def all_coalitions(n: int) -> Tuple[Coalition, ...]:
    """Every nonempty coalition of n players, in the coalition total order."""
    return tuple(sorted(range(1, 1 << n), key=coalition_key))


def embed(sub_mask: Coalition, members: Sequence[int]) -> Coalition:
    """Map a coalition of a re-indexed subgame back onto original player ids."""
    mask = 0
    for pos, player in enumerate(members):
        if sub_mask >> pos & 1:
            mask |= 1 << (player - 1)
    return mask


# =====================================
# Games and allocations
# =====================================

def as_allocation(values: Iterable[Number]) -> Allocation:
    return tuple(Fraction(v) for v in values)


class TuGame:
    """Characteristic function of an n-player TU game.

    ``strict`` games carry the standing assumption v(N) > 0. Reduced and
    transformed games are built with ``strict=False``; v(∅) = 0 always holds.
    """
    __slots__ = ("_n", "_values")

    def __init__(self, n: int, values: Sequence[Number], *, strict: bool = True):
        if n < (2 if strict else 1):
            raise GameError(f"a game needs at least {2 if strict else 1} players, got {n}")
        if len(values) != 1 << n:
            raise GameError(f"expected {1 << n} coalition values for n={n}, got {len(values)}")
        vals = tuple(Fraction(v) for v in values)
        if vals[0] != 0:
            raise GameError("v(∅) must be 0")
        if strict and vals[-1] <= 0:
            raise GameError(
                f"v(N) > 0 is assumed throughout; grand coalition value is {vals[-1]}"
            )
        self._n = n
        self._values = vals

    @classmethod
    def from_mapping(cls, n: int, mapping: Mapping[Tuple[int, ...], Number], *,
                     strict: bool = True) -> "TuGame":
        """Build from {member-tuple: value}; omitted coalitions are worth 0."""
        values: List[Number] = [0] * (1 << n)
        for members, val in mapping.items():
            values[coalition_from_members(members, n)] = val
        return cls(n, values, strict=strict)

    @property
    def n(self) -> int:
        return self._n

    @property
    def values(self) -> Tuple[Fraction, ...]:
        return self._values

    @property
    def grand(self) -> Coalition:
        return (1 << self._n) - 1

    @property
    def players(self) -> range:
        return range(1, self._n + 1)

    def value(self, mask: Coalition) -> Fraction:
        return self._values[mask]

    def with_values(self, updates: Mapping[Coalition, Number], *, strict: bool = True) -> "TuGame":
        """Copy with some coalition values replaced, keyed by mask."""
        values = list(self._values)
        for mask, val in updates.items():
            if not 0 < mask <= self.grand:
                raise GameError(f"coalition mask {mask} is not valid for n={self._n}")
            values[mask] = val
        return TuGame(self._n, values, strict=strict)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TuGame):
            return NotImplemented
        return self._n == other._n and self._values == other._values

    def __hash__(self) -> int:
        return hash((self._n, self._values))

    def __reduce__(self):
        return (_restore_game, (self._n, self._values))

    def __repr__(self) -> str:
        nz = sum(1 for v in self._values if v)
        return f"TuGame(n={self._n}, nonzero={nz}, v(N)={self._values[-1]})"


def _restore_game(n: int, values: Tuple[Fraction, ...]) -> TuGame:
    return TuGame(n, values, strict=False)


def check_allocation(v: TuGame, x: Sequence[Fraction]) -> None:
    if len(x) != v.n:
        raise GameError(f"allocation has {len(x)} entries, game has {v.n} players")


def coalition_sum(x: Sequence[Fraction], mask: Coalition) -> Fraction:
    total = Fraction(0)
    i = 0
    while mask:
        if mask & 1:
            total += x[i]
        mask >>= 1
        i += 1
    return total


def excess(v: TuGame, mask: Coalition, x: Sequence[Fraction]) -> Fraction:
    return v.value(mask) - coalition_sum(x, mask)


def excess_vector(v: TuGame, x: Sequence[Fraction]) -> List[Fraction]:
    """Excess of every coalition, in mask order (index 0 is ∅)."""
    check_allocation(v, x)
    sums = [Fraction(0)] * (1 << v.n)
    for mask in range(1, 1 << v.n):
        low = mask & -mask
        sums[mask] = sums[mask ^ low] + x[low.bit_length() - 1]
    return [val - s for val, s in zip(v.values, sums)]


def indirect_function(v: TuGame, x: Sequence[Fraction]) -> Fraction:
    """max over all S ⊆ N of v(S) − x(S); the empty coalition keeps it ≥ 0."""
    return max(excess_vector(v, x))


def delta_one(v: TuGame, x: Sequence[Fraction]) -> Fraction:
    """Largest |v(S ∪ {k}) − v(S) − x_k| over players k and S ⊆ N∖{k}."""
    check_allocation(v, x)
    best = Fraction(0)
    for k in range(v.n):
        bit = 1 << k
        for mask in range(1 << v.n):
            if mask & bit:
                continue
            gap = abs(v.value(mask | bit) - v.value(mask) - x[k])
            if gap > best:
                best = gap
    return best


def transfer(x: Sequence[Fraction], i: int, j: int, delta: Fraction) -> Allocation:
    """x^{i,j,δ}: player i pays δ to player j (1-based ids)."""
    out = list(x)
    out[i - 1] -= delta
    out[j - 1] += delta
    return tuple(out)


def is_efficient(v: TuGame, x: Sequence[Fraction]) -> bool:
    check_allocation(v, x)
    return sum(x, Fraction(0)) == v.value(v.grand)


def is_imputation(v: TuGame, x: Sequence[Fraction]) -> bool:
    if not is_efficient(v, x):
        return False
    return all(x[k] >= v.value(1 << k) for k in range(v.n))


# =====================================
# Game properties
# =====================================

def _submasks(mask: Coalition):
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def is_monotone(v: TuGame) -> bool:
    for t in range(1, 1 << v.n):
        vt = v.value(t)
        for s in _submasks(t):
            if s and v.value(s) > vt:
                return False
    return True


def is_superadditive(v: TuGame) -> bool:
    full = v.grand
    for s in range(1, 1 << v.n):
        rest = full ^ s
        for t in _submasks(rest):
            if t and v.value(s) + v.value(t) > v.value(s | t):
                return False
    return True


def is_convex(v: TuGame) -> bool:
    size = 1 << v.n
    vals = v.values
    for s in range(size):
        for t in range(s + 1, size):
            if vals[s] + vals[t] > vals[s | t] + vals[s & t]:
                return False
    return True


def zero_normalize(v: TuGame) -> TuGame:
    """v(S) − Σ_{k∈S} v({k})."""
    singles = [v.value(1 << k) for k in range(v.n)]
    return TuGame(v.n, [val - coalition_sum(singles, mask) for mask, val in enumerate(v.values)],
                  strict=False)


def is_zero_monotone(v: TuGame) -> bool:
    return is_monotone(zero_normalize(v))


def veto_players(v: TuGame) -> Tuple[int, ...]:
    """Players k with v(S) = 0 for every coalition S that excludes k."""
    out = []
    for k in range(v.n):
        bit = 1 << k
        if all(v.value(mask) == 0 for mask in range(1 << v.n) if not mask & bit):
            out.append(k + 1)
    return tuple(out)


def property_summary(v: TuGame) -> Dict[str, object]:
    return {
        "monotone": is_monotone(v),
        "superadditive": is_superadditive(v),
        "convex": is_convex(v),
        "zero_monotone": is_zero_monotone(v),
        "veto_players": veto_players(v),
    }


# =====================================
# Values and derived games
# =====================================

def shapley_value(v: TuGame) -> Allocation:
    n = v.n
    weights = [Fraction(factorial(s) * factorial(n - s - 1), factorial(n)) for s in range(n)]
    phi = [Fraction(0)] * n
    for k in range(n):
        bit = 1 << k
        for mask in range(1 << n):
            if mask & bit:
                continue
            phi[k] += weights[popcount(mask)] * (v.value(mask | bit) - v.value(mask))
    return tuple(phi)


def reduced_game(v: TuGame, s_mask: Coalition,
                 x: Sequence[Fraction]) -> Tuple[TuGame, Tuple[int, ...]]:
    """Davis/Maschler reduced game on S at x.

    Returns the game on |S| re-indexed players (ascending order preserved) and
    the original ids of those players.
    """
    check_allocation(v, x)
    if s_mask == 0:
        raise GameError("reduced game needs a nonempty coalition")
    if s_mask & ~v.grand:
        raise GameError(f"coalition mask {s_mask} is not valid for n={v.n}")
    members = coalition_members(s_mask)
    outside = v.grand ^ s_mask
    outside_subsets = [(q, coalition_sum(x, q)) for q in _submasks(outside)]
    m = len(members)
    values: List[Fraction] = [Fraction(0)] * (1 << m)
    for sub in range(1, (1 << m) - 1):
        t = embed(sub, members)
        values[sub] = max(v.value(t | q) - xq for q, xq in outside_subsets)
    values[-1] = v.value(v.grand) - coalition_sum(x, outside)
    return TuGame(m, values, strict=False), members


def cov_transform(v: TuGame, t: Fraction, m: Sequence[Fraction]) -> TuGame:
    """Strategic equivalent t·v + m for t > 0 and an additive measure m."""
    t = Fraction(t)
    if t <= 0:
        raise GameError("scale factor must be positive")
    check_allocation(v, m)
    return TuGame(v.n, [t * val + coalition_sum(m, mask) for mask, val in enumerate(v.values)],
                  strict=False)


def equal_split(v: TuGame) -> Allocation:
    share = v.value(v.grand) / v.n
    return tuple(share for _ in range(v.n))


def permute_game(v: TuGame, perm: Sequence[int]) -> TuGame:
    """Relabel players: new player perm[k] plays the role of old player k+1."""
    if sorted(perm) != list(range(1, v.n + 1)):
        raise GameError("not a permutation of the players")
    values: List[Fraction] = [Fraction(0)] * (1 << v.n)
    for mask, val in enumerate(v.values):
        new = 0
        for k in range(v.n):
            if mask >> k & 1:
                new |= 1 << (perm[k] - 1)
        values[new] = val
    return TuGame(v.n, values, strict=False)


def max_pair_count(n: int) -> int:
    return n * (n - 1) // 2
