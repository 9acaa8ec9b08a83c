"""Counting and enumerating chains, SDI quotients, membership in finitely
generated varieties, the lattice of commutative subvarieties and the
amalgamation status of finitely generated varieties."""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterable, Optional, Sequence

from .congruence import all_congruences, congruence_meet, quotient
from .core import CapExceeded, FinOrdMonoid, _first_violation
from .nested import (
    WEIGHT,
    Letter,
    compose,
    component_leq,
    decompose,
    format_word,
    word_embeds,
    word_is_sdi,
)
from .terms import Equation, Unit, Var, gamma, sigma, sigma_dual

__all__ = [
    "FILTERS",
    "enumerate_words",
    "count_I",
    "count_I_closed_form",
    "count_S",
    "count_comm",
    "brute_force_enumerate",
    "sdi_quotient_words",
    "member",
    "CIdVarietyId",
    "NotCommutative",
    "NoFiniteAxiom",
    "alternating_word",
    "cid_identify",
    "cid_generators",
    "cid_leq",
    "cid_axiom",
    "AmalgamationStatus",
    "variety_antichain",
    "amalgamation_status",
    "named_amalgamation_status",
    "AMALGAMABLE",
    "BRUTE_FORCE_CAP",
    "CONGRUENCE_CAP",
    "CONGRUENCE_HARD_MAX",
    "COUNT_CAP",
]

BRUTE_FORCE_CAP = 6
CONGRUENCE_CAP = 7
CONGRUENCE_HARD_MAX = 20
COUNT_CAP = 14

FILTERS = ("all", "sdi", "commutative", "commutative_sdi")
_ORDER = sorted(Letter)
_COMMUTATIVE = (Letter.C2, Letter.C2D)


@lru_cache(maxsize=None)
def _words(n: int, commutative: bool) -> tuple:
    if n == 1:
        return ((),)
    letters = _COMMUTATIVE if commutative else _ORDER
    out = []
    for l in letters:
        m = n - WEIGHT[l]
        if m >= 1:
            out += [(l,) + w for w in _words(m, commutative)]
    return tuple(out)


def enumerate_words(n: int, filter: str = "all") -> list[tuple]:
    """All words of size ``n`` passing ``filter``, in lexicographic order."""
    if n < 1:
        raise ValueError("n must be positive")
    if filter not in FILTERS:
        raise ValueError(f"unknown filter {filter!r}; choose from {', '.join(FILTERS)}")
    words = _words(n, filter.startswith("commutative"))
    if filter.endswith("sdi"):
        return [w for w in words if word_is_sdi(w)]
    return list(words)


@lru_cache(maxsize=None)
def count_I(n: int) -> int:
    if n < 1:
        raise ValueError("n must be positive")
    if n <= 2:
        return n
    return 2 * count_I(n - 1) + 2 * count_I(n - 2)


def count_I_closed_form(n: int) -> int:
    """((1+r)^n - (1-r)^n) / (2r) with r = sqrt(3), in exact arithmetic.

    Writing (1+r)^n = a + b*r gives (1-r)^n = a - b*r, so the quotient is b.
    """
    a, b = 1, 0
    for _ in range(n):
        a, b = a + 3 * b, a + b
    return b


@lru_cache(maxsize=None)
def count_S(n: int) -> int:
    if n < 1:
        raise ValueError("n must be positive")
    if n <= 3:
        return (1, 2, 4)[n - 1]
    return count_S(n - 1) + 2 * count_S(n - 2) + 2 * count_S(n - 3)


def count_comm(n: int) -> int:
    if n < 1:
        raise ValueError("n must be positive")
    return 2 ** (n - 1)


def brute_force_enumerate(n: int, cap: int = BRUTE_FORCE_CAP) -> list[FinOrdMonoid]:
    """Every valid table of size ``n``, found by a search over ab in {a, b}."""
    if n > cap:
        raise CapExceeded("brute force size", n, cap)
    if n < 1:
        raise ValueError("n must be positive")
    out = []
    for u in range(n):
        t = [[-1] * n for _ in range(n)]
        for a in range(n):
            t[u][a] = t[a][u] = a
            t[a][a] = a
        cells = [(a, b) for a in range(n) for b in range(n) if t[a][b] < 0]

        def fits(a, b):
            x = t[a][b]
            if b > 0 and t[a][b - 1] >= 0 and t[a][b - 1] > x:
                return False
            if b + 1 < n and t[a][b + 1] >= 0 and t[a][b + 1] < x:
                return False
            if a > 0 and t[a - 1][b] >= 0 and t[a - 1][b] > x:
                return False
            if a + 1 < n and t[a + 1][b] >= 0 and t[a + 1][b] < x:
                return False
            return True

        def fill(i):
            if i == len(cells):
                if _first_violation(n, u, t) is None:
                    out.append(FinOrdMonoid._trusted(n, u, t))
                return
            a, b = cells[i]
            for x in (min(a, b), max(a, b)):
                t[a][b] = x
                if fits(a, b):
                    fill(i + 1)
            t[a][b] = -1

        fill(0)
    return out


def _check_cap(size: int, cap: int):
    if cap > CONGRUENCE_HARD_MAX:
        raise CapExceeded("requested cap", cap, CONGRUENCE_HARD_MAX)
    if size > cap:
        raise CapExceeded("algebra size for congruence computations", size, cap)


def sdi_quotient_words(word: Sequence[Letter], cap: int = CONGRUENCE_CAP) -> set:
    """Words of the subdirectly irreducible quotients of compose(word)."""
    M = compose(word)
    _check_cap(M.size, cap)
    cons = all_congruences(M)
    out = set()
    for theta in cons:
        if len(theta.blocks) == 1:
            continue
        above = [c for c in cons if theta.leq(c) and c != theta]
        meet = above[0]
        for c in above[1:]:
            meet = congruence_meet(meet, c)
        if meet == theta:
            continue
        q = decompose(quotient(M, theta)[0])
        if word_is_sdi(q):
            out.add(q)
    return out


def member(word: Sequence[Letter], gens: Iterable[Sequence[Letter]], cap: int = CONGRUENCE_CAP) -> bool:
    """Is compose(word) in the variety generated by the chains ``gens``?"""
    gens = [tuple(g) for g in gens]
    return all(any(word_embeds(q, g) is not None for g in gens) for q in sdi_quotient_words(word, cap))


# ---------------------------------------------------------------- commutative subvarieties


class NotCommutative(ValueError):
    pass


class NoFiniteAxiom(ValueError):
    pass


@dataclass(frozen=True)
class CIdVarietyId:
    kind: str  # Trivial | VC | VCd | VJoin | Full
    n: Optional[int] = None

    def __post_init__(self):
        if self.kind in ("Trivial", "Full"):
            if self.n is not None:
                raise ValueError(f"{self.kind} takes no parameter")
        elif self.kind in ("VC", "VCd", "VJoin"):
            if self.n is None or self.n < 2:
                raise ValueError(f"{self.kind}(n) needs n >= 2")
        else:
            raise ValueError(f"unknown variety kind {self.kind!r}")

    def __str__(self):
        return self.kind if self.n is None else f"{self.kind}({self.n})"

    @classmethod
    def parse(cls, text: str) -> "CIdVarietyId":
        m = re.fullmatch(r"\s*(Trivial|Full)\s*|\s*(VC|VCd|VJoin)\((\d+)\)\s*", text)
        if not m:
            raise ValueError(f"bad variety id {text!r}; expected Trivial, VC(n), VCd(n), VJoin(n) or Full")
        if m.group(1):
            return cls(m.group(1))
        return cls(m.group(2), int(m.group(3)))


def alternating_word(length: int, first: Letter) -> tuple:
    other = Letter.C2D if first is Letter.C2 else Letter.C2
    return tuple(first if i % 2 == 0 else other for i in range(length))


def _runs(word) -> int:
    return sum(1 for i, l in enumerate(word) if i == 0 or word[i - 1] is not l)


def cid_identify(gens: Iterable[Sequence[Letter]]) -> CIdVarietyId:
    """Name the variety generated by commutative chains."""
    best = {Letter.C2: 0, Letter.C2D: 0}
    for g in gens:
        g = tuple(g)
        if any(l not in _COMMUTATIVE for l in g):
            raise NotCommutative(f"{format_word(g)} is not commutative")
        if not g:
            continue
        # the longest alternating subwords: one per run, or skip the first run
        r = _runs(g)
        first = g[0]
        other = Letter.C2D if first is Letter.C2 else Letter.C2
        best[first] = max(best[first], r)
        best[other] = max(best[other], r - 1)
    a, b = best[Letter.C2], best[Letter.C2D]
    if a == b == 0:
        return CIdVarietyId("Trivial")
    if a == b:
        return CIdVarietyId("VJoin", a + 1)
    if a > b:
        return CIdVarietyId("VC", a + 1)
    return CIdVarietyId("VCd", b + 1)


def cid_generators(v: CIdVarietyId) -> Optional[list[tuple]]:
    """Generating words; ``None`` for Full, which is not finitely generated."""
    if v.kind == "Full":
        return None
    if v.kind == "Trivial":
        return []
    gens = []
    if v.kind in ("VC", "VJoin"):
        gens.append(alternating_word(v.n - 1, Letter.C2))
    if v.kind in ("VCd", "VJoin"):
        gens.append(alternating_word(v.n - 1, Letter.C2D))
    return gens


def cid_leq(v1: CIdVarietyId, v2: CIdVarietyId) -> bool:
    g2 = cid_generators(v2)
    if g2 is None:
        return True
    g1 = cid_generators(v1)
    if g1 is None:
        return False
    return all(any(word_embeds(a, b) is not None for b in g2) for a in g1)


def cid_axiom(v: CIdVarietyId) -> Equation:
    if v.kind == "Full":
        raise NoFiniteAxiom("the full commutative variety is the ambient class; there is nothing to add")
    if v.kind == "Trivial":
        return Equation(Var(1), Unit())
    n = v.n
    if v.kind == "VJoin":
        return gamma(n + 1)
    plain = (v.kind == "VC") == (n % 2 == 0)
    return sigma(n) if plain else sigma_dual(n)


# ---------------------------------------------------------------- amalgamation


class AmalgamationStatus(enum.Enum):
    YES = "Yes"
    NO = "No"
    OPEN_IN_PAPER = "OpenInPaper"


_C2, _C2D, _G3, _D3 = Letter.C2, Letter.C2D, Letter.G3, Letter.D3

# maximal SDI words of the finitely generated varieties with amalgamation
AMALGAMABLE = {
    "V(C2)": frozenset({(_C2,)}),
    "V(C2d)": frozenset({(_C2D,)}),
    "V(C2,C2d)": frozenset({(_C2,), (_C2D,)}),
    "V(C3)": frozenset({(_C2, _C2D)}),
    "V(C3d)": frozenset({(_C2D, _C2)}),
    "V(G3)": frozenset({(_G3,)}),
    "V(D3)": frozenset({(_D3,)}),
}

_OPEN = {"CId", "G-limit", "D-limit"}


def _sub_words(g: tuple):
    """Every word that embeds into ``g``."""
    below = {l: [m for m in _ORDER if component_leq(m, l)] for l in _ORDER}
    out = set()
    for mask in range(1 << len(g)):
        picked = [g[i] for i in range(len(g)) if mask >> i & 1]
        for choice in product(*(below[l] for l in picked)):
            out.add(choice)
    return out


def variety_antichain(gens: Iterable[Sequence[Letter]], cap: int = CONGRUENCE_CAP) -> frozenset:
    """The maximal SDI words of the variety generated by ``gens``."""
    gens = [tuple(g) for g in gens]
    for g in gens:
        _check_cap(compose(g).size, cap)
    # SDIs of the variety are exactly the SDI words embedding into a generator
    sdis = set()
    for g in gens:
        sdis |= {w for w in _sub_words(g) if word_is_sdi(w)}
    maxima = {
        w for w in sdis
        if not any(v != w and word_embeds(w, v) is not None for v in sdis)
    }
    return frozenset(maxima)


def amalgamation_status(gens: Iterable[Sequence[Letter]], cap: int = CONGRUENCE_CAP) -> AmalgamationStatus:
    anti = variety_antichain(gens, cap)
    if not anti or anti in AMALGAMABLE.values():
        return AmalgamationStatus.YES
    return AmalgamationStatus.NO


def named_amalgamation_status(name: str) -> AmalgamationStatus:
    """Status of the three varieties that are not finitely generated."""
    if name not in _OPEN:
        raise ValueError(f"unknown named variety {name!r}; expected one of {', '.join(sorted(_OPEN))}")
    return AmalgamationStatus.OPEN_IN_PAPER
