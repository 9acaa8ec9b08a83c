"""Nested sums over the four building blocks C2, C2d, G3 and D3.

A word ``(L1, ..., Lk)`` denotes ``L1 [+] (L2 [+] (... [+] Lk))``: earlier
letters are the outer summands, their elements sit farther from the unit and
absorb everything coming later.  In ``compose`` the rank layout is

    negatives of L1, negatives of L2, ..., unit, ..., positives of L2, positives of L1

where C2 contributes one negative, C2d one positive, and G3/D3 one of each.
"""

from __future__ import annotations

import enum
from functools import lru_cache
from typing import Optional, Sequence

from .core import ElementMap, FinOrdMonoid, classify, generated_subalgebra

__all__ = [
    "Letter",
    "Word",
    "WEIGHT",
    "InvalidWitness",
    "parse_word",
    "format_word",
    "word_size",
    "letter_ranks",
    "compose",
    "green_d",
    "decompose",
    "decompose_peel",
    "component_leq",
    "word_embeds",
    "lift_embedding",
    "position_map",
    "word_is_sdi",
    "dual_word",
    "opposite_word",
]


class Letter(enum.Enum):
    C2 = "C2"
    C2D = "C2d"
    G3 = "G3"
    D3 = "D3"

    def __lt__(self, other):
        # word order used by enumeration: C2 < C2d < G3 < D3
        return _RANK[self] < _RANK[other]

    def __str__(self):
        return self.value


_RANK = {Letter.C2: 0, Letter.C2D: 1, Letter.G3: 2, Letter.D3: 3}
WEIGHT = {Letter.C2: 1, Letter.C2D: 1, Letter.G3: 2, Letter.D3: 2}
_HAS_NEG = {Letter.C2: True, Letter.C2D: False, Letter.G3: True, Letter.D3: True}
_HAS_POS = {Letter.C2: False, Letter.C2D: True, Letter.G3: True, Letter.D3: True}

Word = tuple  # tuple[Letter, ...]


class InvalidWitness(ValueError):
    pass


def parse_word(text: str) -> tuple[Letter, ...]:
    """Parse ``G3+C2`` style words; ``0`` is the empty word."""
    text = text.strip()
    if text == "0":
        return ()
    out = []
    for tok in text.split("+"):
        try:
            out.append(Letter(tok))
        except ValueError:
            raise ValueError(f"unknown letter {tok!r} (expected C2, C2d, G3 or D3)") from None
    return tuple(out)


def format_word(word: Sequence[Letter]) -> str:
    return "+".join(l.value for l in word) if word else "0"


def word_size(word: Sequence[Letter]) -> int:
    return 1 + sum(WEIGHT[l] for l in word)


def letter_ranks(word: Sequence[Letter]) -> list[tuple[Optional[int], Optional[int]]]:
    """For each letter, the ranks of its (negative, positive) elements in compose(word)."""
    n = word_size(word)
    out = []
    neg = 0
    pos = n - 1
    for l in word:
        lo = hi = None
        if _HAS_NEG[l]:
            lo = neg
            neg += 1
        if _HAS_POS[l]:
            hi = pos
            pos -= 1
        out.append((lo, hi))
    return out


@lru_cache(maxsize=4096)
def _compose(word: tuple) -> FinOrdMonoid:
    n = word_size(word)
    k = len(word)
    ranks = letter_ranks(word)
    owner = [k] * n  # the unit belongs to no letter; k is "innermost"
    for i, (lo, hi) in enumerate(ranks):
        if lo is not None:
            owner[lo] = i
        if hi is not None:
            owner[hi] = i
    unit = sum(1 for lo, _ in ranks if lo is not None)
    table = [[0] * n for _ in range(n)]
    for a in range(n):
        oa = owner[a]
        for b in range(n):
            ob = owner[b]
            if a == b:
                p = a
            elif oa < ob:
                p = a
            elif ob < oa:
                p = b
            else:
                # distinct elements of one letter: only G3 or D3 have two
                p = a if word[oa] is Letter.G3 else b
            table[a][b] = p
    return FinOrdMonoid._trusted(n, unit, table)


def compose(word: Sequence[Letter]) -> FinOrdMonoid:
    return _compose(tuple(word))


def green_d(M: FinOrdMonoid, a: int, b: int) -> bool:
    t = M.table
    return t[t[a][b]][a] == a and t[t[b][a]][b] == b


def decompose(M: FinOrdMonoid) -> tuple[Letter, ...]:
    """Word of M from its Green D-classes, ordered by absorption."""
    n, t, e = M.size, M.table, M.unit
    classes = []
    seen = set()
    for a in range(n):
        if a == e or a in seen:
            continue
        cls = [a]
        for b in range(a + 1, n):
            if b != e and t[a][b] != t[b][a]:
                cls.append(b)
        seen.update(cls)
        classes.append(cls)

    def letter(cls):
        if len(cls) == 1:
            return Letter.C2 if cls[0] < e else Letter.C2D
        lo, hi = cls
        return Letter.G3 if t[lo][hi] == lo else Letter.D3

    # the outermost class absorbs all others; position = #classes it does not absorb
    k = len(classes)
    slots = [None] * k
    for cls in classes:
        a = cls[0]
        absorbed = sum(1 for other in classes if other is not cls and t[a][other[0]] == a)
        slots[k - 1 - absorbed] = letter(cls)
    return tuple(slots)


def decompose_peel(M: FinOrdMonoid) -> tuple[Letter, ...]:
    """Same output as :func:`decompose`, by peeling the outer letter off repeatedly."""
    out = []
    while M.size > 1:
        case = classify(M).top_bottom_case
        n = M.size
        if case == 1:
            out.append(Letter.C2)
            keep = range(1, n)
        elif case == 2:
            out.append(Letter.C2D)
            keep = range(0, n - 1)
        else:
            out.append(Letter.G3 if case == 3 else Letter.D3)
            keep = range(1, n - 1)
        M, _ = generated_subalgebra(M, keep)
    return tuple(out)


def component_leq(c1: Letter, c2: Letter) -> bool:
    if c1 is c2:
        return True
    return c1 in (Letter.C2, Letter.C2D) and c2 in (Letter.G3, Letter.D3)


def word_embeds(w1: Sequence[Letter], w2: Sequence[Letter]) -> Optional[tuple[int, ...]]:
    """Greedy leftmost scattered-subword match of ``w1`` in ``w2`` under component_leq."""
    f = []
    j = 0
    for l in w1:
        while j < len(w2) and not component_leq(l, w2[j]):
            j += 1
        if j == len(w2):
            return None
        f.append(j)
        j += 1
    return tuple(f)


def _check_witness(w1, w2, f):
    if len(f) != len(w1):
        raise InvalidWitness(f"witness has {len(f)} positions for a word of length {len(w1)}")
    prev = -1
    for i, j in enumerate(f):
        if not prev < j < len(w2):
            raise InvalidWitness(f"positions must be strictly increasing and below {len(w2)}: {tuple(f)}")
        if not component_leq(w1[i], w2[j]):
            raise InvalidWitness(f"{w1[i]} is not a subalgebra of {w2[j]} (position {i} -> {j})")
        prev = j


def lift_embedding(w1: Sequence[Letter], w2: Sequence[Letter], f: Sequence[int]) -> ElementMap:
    """The element-level embedding compose(w1) -> compose(w2) induced by a position witness."""
    _check_witness(w1, w2, f)
    src, dst = letter_ranks(w1), letter_ranks(w2)
    n1, n2 = word_size(w1), word_size(w2)
    image = [0] * n1
    image[compose(w1).unit] = compose(w2).unit
    for i, j in enumerate(f):
        lo, hi = src[i]
        tlo, thi = dst[j]
        if lo is not None:
            image[lo] = tlo
        if hi is not None:
            image[hi] = thi
    return ElementMap(n1, n2, tuple(image))


def position_map(w1: Sequence[Letter], w2: Sequence[Letter], phi: ElementMap) -> tuple[int, ...]:
    """Inverse of :func:`lift_embedding`: the letter positions hit by an embedding."""
    owner = {}
    for j, (lo, hi) in enumerate(letter_ranks(w2)):
        for r in (lo, hi):
            if r is not None:
                owner[r] = j
    f = []
    for lo, hi in letter_ranks(w1):
        a = lo if lo is not None else hi
        if phi(a) not in owner:
            raise InvalidWitness("map sends a non-unit element to the unit")
        f.append(owner[phi(a)])
    _check_witness(w1, w2, f)
    return tuple(f)


def word_is_sdi(word: Sequence[Letter]) -> bool:
    if not word:
        return False
    for a, b in zip(word, word[1:]):
        if a is b and a in (Letter.C2, Letter.C2D):
            return False
    return True


_DUAL = {Letter.C2: Letter.C2D, Letter.C2D: Letter.C2, Letter.G3: Letter.G3, Letter.D3: Letter.D3}
_OPP = {Letter.C2: Letter.C2, Letter.C2D: Letter.C2D, Letter.G3: Letter.D3, Letter.D3: Letter.G3}


def dual_word(word: Sequence[Letter]) -> tuple[Letter, ...]:
    return tuple(_DUAL[l] for l in word)


def opposite_word(word: Sequence[Letter]) -> tuple[Letter, ...]:
    return tuple(_OPP[l] for l in word)
