"""Finite totally ordered idempotent monoids stored as multiplication tables.

Elements are identified with their order rank, so element ``i`` lies below
element ``j`` exactly when ``i < j``.  Two algebras are isomorphic iff their
tables are equal: the only order automorphism of a finite chain is the
identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterable, NamedTuple, Optional, Sequence

import numpy as np

__all__ = [
    "FinOrdMonoid",
    "ElementMap",
    "MapCheck",
    "Classification",
    "ValidationError",
    "NoIdentity",
    "NotIdempotent",
    "ChoiceViolation",
    "NotAssociative",
    "NotMonotone",
    "FormatError",
    "CapExceeded",
    "validate",
    "mul",
    "classify",
    "order_dual",
    "opposite",
    "generated_subalgebra",
    "check_map",
    "trivial",
    "parse_algebra",
    "format_algebra",
]


class CapExceeded(Exception):
    """A search or enumeration would exceed its configured size cap."""

    def __init__(self, what: str, value: int, cap: int):
        super().__init__(f"{what}: {value} exceeds cap {cap}")
        self.what = what
        self.value = value
        self.cap = cap


class FormatError(ValueError):
    pass


class ValidationError(ValueError):
    """Base class for table validation failures; ``witness`` holds the elements."""

    axiom = "invalid"

    def __init__(self, *witness: int):
        self.witness = witness
        super().__init__(f"{type(self).__name__}{witness}")


class NoIdentity(ValidationError):
    axiom = "identity"


class NotIdempotent(ValidationError):
    axiom = "idempotency"


class ChoiceViolation(ValidationError):
    axiom = "ab in {a,b}"


class NotAssociative(ValidationError):
    axiom = "associativity"


class NotMonotone(ValidationError):
    axiom = "order-preservation"


def _first_violation(size: int, unit: int, table: Sequence[Sequence[int]]) -> Optional[ValidationError]:
    r = range(size)
    for a in r:
        if table[unit][a] != a or table[a][unit] != a:
            return NoIdentity(a)
    for a in r:
        if table[a][a] != a:
            return NotIdempotent(a)
    for a, b in product(r, r):
        if table[a][b] not in (a, b):
            return ChoiceViolation(a, b)
    for a, b in product(r, r):
        ab = table[a][b]
        row = table[ab]
        for c in r:
            if row[c] != table[a][table[b][c]]:
                return NotAssociative(a, b, c)
    # rows and columns non-decreasing along adjacent ranks is enough on a chain
    for a in range(size - 1):
        b = a + 1
        for c in r:
            if table[c][a] > table[c][b] or table[a][c] > table[b][c]:
                return NotMonotone(a, b, c)
    return None


@dataclass(frozen=True)
class FinOrdMonoid:
    """An idempotent monoid on ranks ``0..size-1`` ordered by rank.

    ``table[a][b]`` is the product ``a*b``.  Construction validates every
    axiom and raises a :class:`ValidationError` subclass naming the first
    violated one together with a witness.
    """

    size: int
    unit: int
    table: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        table = tuple(tuple(int(x) for x in row) for row in self.table)
        object.__setattr__(self, "table", table)
        _check_shape(self.size, self.unit, table)
        err = _first_violation(self.size, self.unit, table)
        if err is not None:
            raise err

    @classmethod
    def _trusted(cls, size: int, unit: int, table) -> "FinOrdMonoid":
        # for constructions whose validity is guaranteed by the theory
        obj = object.__new__(cls)
        object.__setattr__(obj, "size", size)
        object.__setattr__(obj, "unit", unit)
        object.__setattr__(obj, "table", tuple(tuple(row) for row in table))
        return obj

    @cached_property
    def array(self) -> np.ndarray:
        return np.array(self.table, dtype=np.int64).reshape(self.size, self.size)

    def __repr__(self):
        return f"FinOrdMonoid(size={self.size}, unit={self.unit}, table={self.table})"


def _check_shape(size, unit, table):
    if size < 1:
        raise ValueError("size must be positive")
    if not 0 <= unit < size:
        raise ValueError(f"unit {unit} out of range")
    if len(table) != size or any(len(row) != size for row in table):
        raise ValueError(f"table must be {size}x{size}")
    for row in table:
        for x in row:
            if not 0 <= x < size:
                raise ValueError(f"table entry {x} out of range")


def validate(size: int, unit: int, table: Sequence[Sequence[int]]) -> FinOrdMonoid:
    return FinOrdMonoid(size, unit, table)


def trivial() -> FinOrdMonoid:
    return FinOrdMonoid._trusted(1, 0, ((0,),))


def mul(M: FinOrdMonoid, a: int, b: int) -> int:
    return M.table[a][b]


class Classification(NamedTuple):
    commutative: bool
    top_bottom_case: Optional[int]


def classify(M: FinOrdMonoid) -> Classification:
    """Commutativity plus the case (1-4) of the bottom/top dichotomy.

    1: bottom absorbing, 2: top absorbing, 3: bottom*top = bottom and
    top*bottom = top, 4: the reverse.  ``None`` for the trivial algebra.
    """
    n = M.size
    t = M.table
    commutative = all(t[a][b] == t[b][a] for a in range(n) for b in range(a))
    if n == 1:
        return Classification(commutative, None)
    bot, top = 0, n - 1
    bt, tb = t[bot][top], t[top][bot]
    if bt == bot and tb == bot:
        case = 1
    elif bt == top and tb == top:
        case = 2
    elif bt == bot:
        case = 3
    else:
        case = 4
    return Classification(commutative, case)


def order_dual(M: FinOrdMonoid) -> FinOrdMonoid:
    n = M.size
    r = n - 1
    table = [[r - M.table[r - a][r - b] for b in range(n)] for a in range(n)]
    return FinOrdMonoid._trusted(n, r - M.unit, table)


def opposite(M: FinOrdMonoid) -> FinOrdMonoid:
    n = M.size
    table = [[M.table[b][a] for b in range(n)] for a in range(n)]
    return FinOrdMonoid._trusted(n, M.unit, table)


@dataclass(frozen=True)
class ElementMap:
    source_size: int
    target_size: int
    image: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "image", tuple(int(x) for x in self.image))
        if len(self.image) != self.source_size:
            raise ValueError("image length must equal source size")
        if any(not 0 <= x < self.target_size for x in self.image):
            raise ValueError("image outside target")

    def __call__(self, a: int) -> int:
        return self.image[a]

    def compose(self, other: "ElementMap") -> "ElementMap":
        """``self`` after ``other``."""
        return ElementMap(other.source_size, self.target_size, tuple(self.image[x] for x in other.image))

    @classmethod
    def identity(cls, n: int) -> "ElementMap":
        return cls(n, n, tuple(range(n)))


def generated_subalgebra(M: FinOrdMonoid, S: Iterable[int]) -> tuple[FinOrdMonoid, ElementMap]:
    """The subalgebra on ``S`` plus the unit (already closed, since ab is a or b)."""
    carrier = sorted(set(S) | {M.unit})
    index = {c: i for i, c in enumerate(carrier)}
    table = [[index[M.table[a][b]] for b in carrier] for a in carrier]
    sub = FinOrdMonoid._trusted(len(carrier), index[M.unit], table)
    return sub, ElementMap(sub.size, M.size, tuple(carrier))


class MapCheck(NamedTuple):
    is_homomorphism: bool
    is_embedding: bool
    witness: Optional[tuple]


def check_map(M: FinOrdMonoid, N: FinOrdMonoid, f) -> MapCheck:
    """Decide whether ``f`` (an ElementMap or a sequence of images) is a
    homomorphism/embedding M -> N.

    The witness names the first failure: ``("unit",)``, ``("product", a, b)``,
    ``("order", a, b)`` or ``("injective", a, b)``.
    """
    img = f.image if isinstance(f, ElementMap) else tuple(f)
    if len(img) != M.size or any(not 0 <= x < N.size for x in img):
        raise ValueError("map does not go from M to N")
    if img[M.unit] != N.unit:
        return MapCheck(False, False, ("unit",))
    for a, b in product(range(M.size), repeat=2):
        if img[M.table[a][b]] != N.table[img[a]][img[b]]:
            return MapCheck(False, False, ("product", a, b))
    for a in range(M.size - 1):
        if img[a] > img[a + 1]:
            return MapCheck(False, False, ("order", a, a + 1))
    for a in range(M.size - 1):
        if img[a] == img[a + 1]:
            return MapCheck(True, False, ("injective", a, a + 1))
    return MapCheck(True, True, None)


def parse_algebra(text: str) -> FinOrdMonoid:
    """Read the ``n unit`` + table text format; the result is validated."""
    if not text.endswith("\n"):
        raise FormatError("algebra text must end with a newline")
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise FormatError("empty algebra text")
    try:
        head = [int(x) for x in lines[0].split()]
        rows = [[int(x) for x in ln.split()] for ln in lines[1:]]
    except ValueError as exc:
        raise FormatError(f"non-integer token: {exc}") from None
    if len(head) != 2:
        raise FormatError("first line must be 'n unit'")
    n, unit = head
    if len(rows) != n or any(len(r) != n for r in rows):
        raise FormatError(f"expected {n} rows of {n} integers")
    return validate(n, unit, rows)


def format_algebra(M: FinOrdMonoid) -> str:
    lines = [f"{M.size} {M.unit}"]
    lines += [" ".join(str(x) for x in row) for row in M.table]
    return "\n".join(lines) + "\n"
