"""Spans of finite idempotent chains at word level: compatibility, the
merge construction of amalgams, verification and bounded search oracles.

Embeddings between nested sums correspond one-to-one with position maps
between their words, so spans and amalgams are stored as position maps and
only lifted to element maps for verification.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement
from typing import Iterable, NamedTuple, Optional, Sequence

from .core import CapExceeded, ElementMap, check_map
from .nested import (
    InvalidWitness,
    Letter,
    _check_witness,
    compose,
    component_leq,
    format_word,
    lift_embedding,
    word_embeds,
    word_size,
)
from .variety import enumerate_words

__all__ = [
    "WordEmbedding",
    "Span",
    "Amalgam",
    "IncompatibleSpan",
    "Verification",
    "all_word_embeddings",
    "incompatibility_certificate",
    "is_compatible",
    "amalgamate",
    "verify_amalgam",
    "search_amalgam",
    "one_sided_amalgam_search",
    "S1",
    "S2",
    "SEARCH_MAX_SIZE",
    "EMBEDDING_WORD_CAP",
]

SEARCH_MAX_SIZE = 8
EMBEDDING_WORD_CAP = 40
ONE_SIDED_MAP_CAP = 10**6

_C2, _C2D, _G3, _D3 = Letter.C2, Letter.C2D, Letter.G3, Letter.D3


@dataclass(frozen=True)
class WordEmbedding:
    source: tuple
    target: tuple
    f: tuple

    def __post_init__(self):
        for name in ("source", "target", "f"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        _check_witness(self.source, self.target, self.f)

    def lift(self) -> ElementMap:
        return lift_embedding(self.source, self.target, self.f)

    def then(self, other: "WordEmbedding") -> "WordEmbedding":
        """``other`` after ``self``."""
        return WordEmbedding(self.source, other.target, tuple(other.f[i] for i in self.f))


@dataclass(frozen=True)
class Span:
    base: tuple
    left: tuple
    f: tuple
    right: tuple
    g: tuple

    def __post_init__(self):
        for name in ("base", "left", "f", "right", "g"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        _check_witness(self.base, self.left, self.f)
        _check_witness(self.base, self.right, self.g)

    @property
    def i1(self) -> WordEmbedding:
        return WordEmbedding(self.base, self.left, self.f)

    @property
    def i2(self) -> WordEmbedding:
        return WordEmbedding(self.base, self.right, self.g)

    def __str__(self):
        pos = lambda p: ",".join(map(str, p)) or "-"
        return (f"{format_word(self.base)} -> {format_word(self.left)} [{pos(self.f)}], "
                f"{format_word(self.base)} -> {format_word(self.right)} [{pos(self.g)}]")


@dataclass(frozen=True)
class Amalgam:
    word: tuple
    j1: tuple
    j2: tuple


class IncompatibleSpan(ValueError):
    def __init__(self, position: int):
        super().__init__(f"span restricts to a forbidden span at base position {position}")
        self.position = position


# the two forbidden spans: C2 (resp. C2d) included into both G3 and D3
S1 = Span((_C2,), (_G3,), (0,), (_D3,), (0,))
S2 = Span((_C2D,), (_G3,), (0,), (_D3,), (0,))


def all_word_embeddings(w1: Sequence[Letter], w2: Sequence[Letter], cap: int = EMBEDDING_WORD_CAP) -> list[WordEmbedding]:
    """Every embedding of compose(w1) into compose(w2), as position maps in lexicographic order."""
    w1, w2 = tuple(w1), tuple(w2)
    if len(w2) > cap:
        raise CapExceeded("word length for embedding enumeration", len(w2), cap)
    out = []
    for f in combinations(range(len(w2)), len(w1)):
        if all(component_leq(a, w2[j]) for a, j in zip(w1, f)):
            out.append(WordEmbedding(w1, w2, f))
    return out


def incompatibility_certificate(span: Span) -> Optional[int]:
    for p, l in enumerate(span.base):
        if l in (_C2, _C2D) and {span.left[span.f[p]], span.right[span.g[p]]} == {_G3, _D3}:
            return p
    return None


def is_compatible(span: Span) -> bool:
    return incompatibility_certificate(span) is None


def _larger(a: Letter, b: Letter) -> Letter:
    return b if component_leq(a, b) else a


def amalgamate(span: Span) -> Amalgam:
    """Merge the two target words over the shared base positions.

    Between consecutive shared positions the unshared letters of the left
    word come first, then those of the right word; a shared position takes
    the larger of its two letters.
    """
    cert = incompatibility_certificate(span)
    if cert is not None:
        raise IncompatibleSpan(cert)
    M, N = span.left, span.right
    word, j1, j2 = [], [], []
    i = j = 0
    for p in list(range(len(span.base))) + [None]:
        stop_m = span.f[p] if p is not None else len(M)
        stop_n = span.g[p] if p is not None else len(N)
        while i < stop_m:
            j1.append(len(word))
            word.append(M[i])
            i += 1
        while j < stop_n:
            j2.append(len(word))
            word.append(N[j])
            j += 1
        if p is not None:
            j1.append(len(word))
            j2.append(len(word))
            word.append(_larger(M[i], N[j]))
            i += 1
            j += 1
    return Amalgam(tuple(word), tuple(j1), tuple(j2))


class Verification(NamedTuple):
    commutes: bool
    embeddings_valid: bool
    strong: bool


def verify_amalgam(span: Span, amalgam: Amalgam) -> Verification:
    """Check an amalgam at element level on compose(P)."""
    try:
        i1 = lift_embedding(span.base, span.left, span.f)
        i2 = lift_embedding(span.base, span.right, span.g)
        j1 = lift_embedding(span.left, amalgam.word, amalgam.j1)
        j2 = lift_embedding(span.right, amalgam.word, amalgam.j2)
    except InvalidWitness:
        return Verification(False, False, False)
    L, M, N, P = (compose(w) for w in (span.base, span.left, span.right, amalgam.word))
    valid = all(
        check_map(a, b, m).is_embedding
        for a, b, m in ((L, M, i1), (L, N, i2), (M, P, j1), (N, P, j2))
    )
    via_left = j1.compose(i1)
    commutes = via_left == j2.compose(i2)
    strong = commutes and set(j1.image) & set(j2.image) == set(via_left.image)
    return Verification(commutes, valid, strong)


def search_amalgam(span: Span, max_size: int = SEARCH_MAX_SIZE) -> Optional[Amalgam]:
    """First amalgam over all words of size <= max_size (size, then word order,
    then embedding pairs lexicographically)."""
    if max_size > SEARCH_MAX_SIZE:
        raise CapExceeded("amalgam search size", max_size, SEARCH_MAX_SIZE)
    M, N = span.left, span.right
    need = Counter(M) | Counter(N)
    for size in range(max(word_size(M), word_size(N)), max_size + 1):
        for P in enumerate_words(size):
            have = Counter(P)
            # G3/D3 letters are only hit by themselves; every letter needs a distinct slot
            if have[_G3] < need[_G3] or have[_D3] < need[_D3] or len(P) < max(len(M), len(N)):
                continue
            if word_embeds(M, P) is None or word_embeds(N, P) is None:
                continue
            right = all_word_embeddings(N, P)
            for e1 in all_word_embeddings(M, P):
                left_base = tuple(e1.f[k] for k in span.f)
                for e2 in right:
                    if tuple(e2.f[k] for k in span.g) == left_base:
                        return Amalgam(P, e1.f, e2.f)
    return None


def _homomorphisms(M_word, D_word):
    M, D = compose(M_word), compose(D_word)
    count = 1
    for k in range(M.size):
        count = count * (D.size + k) // (k + 1)
    if count > ONE_SIDED_MAP_CAP:
        raise CapExceeded("monotone maps for homomorphism search", count, ONE_SIDED_MAP_CAP)
    for image in combinations_with_replacement(range(D.size), M.size):
        if image[M.unit] == D.unit and check_map(M, D, image).is_homomorphism:
            yield ElementMap(M.size, D.size, image)


def one_sided_amalgam_search(span: Span, candidate_targets: Iterable[Sequence[Letter]]):
    """Find a target D, a homomorphism j1 from the left algebra and an
    embedding j2 from the right algebra with j1 after i1 equal to j2 after i2.

    Returns ``(D, j1, j2)`` with element maps, or ``None``.
    """
    i1 = lift_embedding(span.base, span.left, span.f)
    i2 = lift_embedding(span.base, span.right, span.g)
    for D in candidate_targets:
        D = tuple(D)
        embeddings = [e.lift() for e in all_word_embeddings(span.right, D)]
        if not embeddings:
            continue
        for j1 in _homomorphisms(span.left, D):
            target = j1.compose(i1)
            for j2 in embeddings:
                if j2.compose(i2) == target:
                    return D, j1, j2
    return None
