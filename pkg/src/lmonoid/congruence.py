"""Congruences of finite idempotent chains.

Congruence classes of a chain are convex, so a congruence is an interval
partition of the ranks.  It is stored as its blocks and manipulated through
its set of *cuts*: ``i`` is a cut when ``i`` and ``i + 1`` lie in different
blocks.  Refinement is reverse inclusion of cut sets, the join of two
congruences intersects their cuts and the meet unites them.

For convex partitions product compatibility is the only condition: meets and
joins of representatives of comparable convex blocks stay in the expected
blocks automatically.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Optional

from .core import CapExceeded, ElementMap, FinOrdMonoid, FormatError, generated_subalgebra

__all__ = [
    "Congruence",
    "is_congruence",
    "principal_congruence",
    "all_congruences",
    "congruence_join",
    "congruence_meet",
    "is_sdi",
    "monolith",
    "con_is_chain",
    "quotient",
    "quotient_section",
    "has_cep",
    "parse_congruence",
    "ENUMERATION_LIMIT",
    "CEP_SIZE_CAP",
]

# interval partitions are enumerated directly up to this size, generated from
# principal congruences beyond it
ENUMERATION_LIMIT = 12
CEP_SIZE_CAP = 12


@dataclass(frozen=True)
class Congruence:
    size: int
    blocks: tuple[tuple[int, int], ...]

    @classmethod
    def from_cuts(cls, size: int, cuts: Iterable[int]) -> "Congruence":
        blocks, lo = [], 0
        for c in sorted(set(cuts)):
            blocks.append((lo, c))
            lo = c + 1
        blocks.append((lo, size - 1))
        return cls(size, tuple(blocks))

    @classmethod
    def identity(cls, size: int) -> "Congruence":
        return cls.from_cuts(size, range(size - 1))

    @classmethod
    def total(cls, size: int) -> "Congruence":
        return cls.from_cuts(size, ())

    @cached_property
    def cuts(self) -> frozenset:
        return frozenset(hi for _, hi in self.blocks[:-1])

    @cached_property
    def block_of(self) -> tuple[int, ...]:
        out = []
        for i, (lo, hi) in enumerate(self.blocks):
            out += [i] * (hi - lo + 1)
        return tuple(out)

    def related(self, a: int, b: int) -> bool:
        return self.block_of[a] == self.block_of[b]

    def leq(self, other: "Congruence") -> bool:
        """``self`` refines ``other``."""
        return other.cuts <= self.cuts

    @property
    def is_identity(self) -> bool:
        return len(self.blocks) == self.size

    def __str__(self):
        return ";".join(f"{lo}-{hi}" for lo, hi in self.blocks)


def parse_congruence(text: str, size: int) -> Congruence:
    blocks = []
    try:
        for part in text.strip().split(";"):
            lo, hi = part.split("-")
            blocks.append((int(lo), int(hi)))
    except ValueError:
        raise FormatError(f"bad congruence text {text!r}; expected e.g. 0-0;1-2") from None
    expect = 0
    for lo, hi in blocks:
        if lo != expect or hi < lo:
            raise FormatError(f"blocks must tile 0..{size - 1} in order")
        expect = hi + 1
    if expect != size:
        raise FormatError(f"blocks must tile 0..{size - 1} in order")
    return Congruence(size, tuple(blocks))


def _violating_pair(M: FinOrdMonoid, cuts: set) -> Optional[tuple[int, int]]:
    # adjacent identified pairs generate the partition, so checking them suffices
    t = M.table
    n = M.size
    block = [0] * n
    for a in range(1, n):
        block[a] = block[a - 1] + (a - 1 in cuts)
    for a in range(n - 1):
        if a in cuts:
            continue
        ra, rb = t[a], t[a + 1]
        for c in range(n):
            x, y = ra[c], rb[c]
            if block[x] != block[y]:
                return x, y
            x, y = t[c][a], t[c][a + 1]
            if block[x] != block[y]:
                return x, y
    return None


def is_congruence(M: FinOrdMonoid, theta: Congruence) -> bool:
    return theta.size == M.size and _violating_pair(M, set(theta.cuts)) is None


def principal_congruence(M: FinOrdMonoid, a: int, b: int) -> Congruence:
    """Smallest congruence identifying ``a`` and ``b``."""
    lo, hi = min(a, b), max(a, b)
    cuts = set(range(M.size - 1)) - set(range(lo, hi))
    while True:
        bad = _violating_pair(M, cuts)
        if bad is None:
            return Congruence.from_cuts(M.size, cuts)
        x, y = min(bad), max(bad)
        cuts -= set(range(x, y))


def congruence_join(t1: Congruence, t2: Congruence) -> Congruence:
    return Congruence.from_cuts(t1.size, t1.cuts & t2.cuts)


def congruence_meet(t1: Congruence, t2: Congruence) -> Congruence:
    return Congruence.from_cuts(t1.size, t1.cuts | t2.cuts)


def _sort_key(theta: Congruence):
    return (-len(theta.blocks), theta.blocks)


def _all_by_enumeration(M: FinOrdMonoid) -> list[Congruence]:
    n = M.size
    out = []
    for mask in range(1 << (n - 1)):
        cuts = {i for i in range(n - 1) if mask >> i & 1}
        if _violating_pair(M, cuts) is None:
            out.append(Congruence.from_cuts(n, cuts))
    return out


def _all_by_joins(M: FinOrdMonoid) -> list[Congruence]:
    n = M.size
    atoms = {principal_congruence(M, a, a + 1).cuts for a in range(n - 1)}
    found = {frozenset(range(n - 1))} | atoms
    frontier = list(found)
    while frontier:
        new = []
        for c in frontier:
            for a in atoms:
                j = c & a
                if j not in found:
                    found.add(j)
                    new.append(j)
        frontier = new
    return [Congruence.from_cuts(n, c) for c in found]


def all_congruences(M: FinOrdMonoid) -> list[Congruence]:
    """Every congruence, finest first (more blocks first, then by blocks)."""
    cons = _all_by_enumeration(M) if M.size <= ENUMERATION_LIMIT else _all_by_joins(M)
    return sorted(cons, key=_sort_key)


def monolith(M: FinOrdMonoid) -> Optional[Congruence]:
    """The least non-identity congruence if there is one."""
    if M.size == 1:
        return None
    # the meet of all principal congruences of adjacent pairs
    cuts = set()
    for a in range(M.size - 1):
        cuts |= principal_congruence(M, a, a + 1).cuts
    m = Congruence.from_cuts(M.size, cuts)
    return None if m.is_identity else m


def is_sdi(M: FinOrdMonoid) -> bool:
    return monolith(M) is not None


def con_is_chain(M: FinOrdMonoid) -> bool:
    cons = all_congruences(M)
    return all(x.leq(y) or y.leq(x) for x, y in combinations(cons, 2))


def quotient(M: FinOrdMonoid, theta: Congruence) -> tuple[FinOrdMonoid, ElementMap]:
    reps = [lo for lo, _ in theta.blocks]
    blk = theta.block_of
    table = [[blk[M.table[a][b]] for b in reps] for a in reps]
    Q = FinOrdMonoid._trusted(len(reps), blk[M.unit], table)
    return Q, ElementMap(M.size, Q.size, blk)


def quotient_section(M: FinOrdMonoid, theta: Congruence) -> ElementMap:
    """Endomorphism sending each element to a fixed representative of its class
    (the unit for the unit's class, the least element otherwise)."""
    blk = theta.block_of
    reps = [lo for lo, _ in theta.blocks]
    reps[blk[M.unit]] = M.unit
    return ElementMap(M.size, M.size, tuple(reps[blk[a]] for a in range(M.size)))


def has_cep(M: FinOrdMonoid, cap: int = CEP_SIZE_CAP) -> bool:
    """Congruence extension property, checked over every subalgebra."""
    n = M.size
    if n > cap:
        raise CapExceeded("has_cep algebra size", n, cap)
    cons = all_congruences(M)
    others = [a for a in range(n) if a != M.unit]
    for r in range(len(others) + 1):
        for subset in combinations(others, r):
            B, inc = generated_subalgebra(M, subset)
            carrier = inc.image
            restricted = {
                frozenset(i for i in range(B.size - 1) if not theta.related(carrier[i], carrier[i + 1]))
                for theta in cons
            }
            for psi in all_congruences(B):
                if psi.cuts not in restricted:
                    return False
    return True
