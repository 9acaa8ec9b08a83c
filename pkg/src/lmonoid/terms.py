"""Terms over {*, ^, v, e}, equations, exhaustive satisfaction checks and
the C_n / sigma_n / gamma_n families.

Satisfaction is decided over all valuations, but not naively: variables are
split into blocks, each block's maximal pure subterms are tabulated once,
and only the reachable value tuples are combined.  The reported witness is
still the lexicographically first failing valuation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache, reduce
from math import prod
from typing import Optional, Union

import numpy as np

from .core import CapExceeded, FinOrdMonoid, generated_subalgebra, trivial

__all__ = [
    "Var",
    "Unit",
    "Prod",
    "Meet",
    "Join",
    "Term",
    "Equation",
    "leq",
    "UnboundVariable",
    "TermSyntaxError",
    "parse_term",
    "parse_equation",
    "format_term",
    "format_equation",
    "term_vars",
    "equation_vars",
    "eval_term",
    "satisfies",
    "failure_witness",
    "dual_term",
    "dual_equation",
    "substitute",
    "simplify",
    "make_cn",
    "make_cnd",
    "cn_labels",
    "sigma",
    "sigma_dual",
    "gamma",
    "axiom_witness_subalgebra",
    "DEFAULT_VALUATION_CAP",
]

DEFAULT_VALUATION_CAP = 10**8


@dataclass(frozen=True)
class Var:
    index: int

    def __post_init__(self):
        if self.index < 1:
            raise ValueError("variable indices start at 1")


@dataclass(frozen=True)
class Unit:
    pass


@dataclass(frozen=True)
class Prod:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Meet:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Join:
    left: "Term"
    right: "Term"


Term = Union[Var, Unit, Prod, Meet, Join]
E = Unit()


@dataclass(frozen=True)
class Equation:
    lhs: Term
    rhs: Term

    def __str__(self):
        return format_equation(self)


def leq(s: Term, t: Term) -> Equation:
    """``s <= t``, stored as ``s ^ t = s``."""
    return Equation(Meet(s, t), s)


class UnboundVariable(KeyError):
    def __init__(self, index: int):
        super().__init__(index)
        self.index = index

    def __str__(self):
        return f"variable x{self.index} is not bound"


class TermSyntaxError(ValueError):
    pass


# ---------------------------------------------------------------- text

_TOKEN = re.compile(r"\s*(?:(x\d+)|(<=|[=*^()ev]))")


def _tokenize(text: str) -> list[str]:
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise TermSyntaxError(f"unexpected input at column {pos}: {text[pos:pos + 10]!r}")
        out.append(m.group(1) or m.group(2))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens):
        self.toks = tokens
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise TermSyntaxError(f"expected {expected or 'a token'}, got {tok or 'end of input'}")
        self.i += 1
        return tok

    def lattice(self):
        left = self.product()
        op = None
        while self.peek() in ("^", "v"):
            tok = self.take()
            if op is not None and tok != op:
                raise TermSyntaxError("mixing ^ and v needs parentheses")
            op = tok
            right = self.product()
            left = Meet(left, right) if tok == "^" else Join(left, right)
        return left

    def product(self):
        left = self.atom()
        while self.peek() == "*":
            self.take()
            left = Prod(left, self.atom())
        return left

    def atom(self):
        tok = self.take()
        if tok == "e":
            return E
        if tok == "(":
            t = self.lattice()
            self.take(")")
            return t
        if tok.startswith("x"):
            idx = int(tok[1:])
            if idx < 1:
                raise TermSyntaxError("variable indices start at 1")
            return Var(idx)
        raise TermSyntaxError(f"unexpected token {tok!r}")


def parse_term(text: str) -> Term:
    p = _Parser(_tokenize(text))
    t = p.lattice()
    if p.peek() is not None:
        raise TermSyntaxError(f"trailing input at token {p.peek()!r}")
    return t


def parse_equation(text: str) -> Equation:
    p = _Parser(_tokenize(text))
    s = p.lattice()
    rel = p.take()
    if rel not in ("=", "<="):
        raise TermSyntaxError("expected = or <=")
    t = p.lattice()
    if p.peek() is not None:
        raise TermSyntaxError(f"trailing input at token {p.peek()!r}")
    return leq(s, t) if rel == "<=" else Equation(s, t)


def format_term(t: Term) -> str:
    if isinstance(t, Var):
        return f"x{t.index}"
    if isinstance(t, Unit):
        return "e"
    if isinstance(t, Prod):
        left = format_term(t.left)
        right = format_term(t.right)
        if not isinstance(t.left, (Var, Unit, Prod)):
            left = f"({left})"
        if not isinstance(t.right, (Var, Unit)):
            right = f"({right})"
        return f"{left}*{right}"
    op = " ^ " if isinstance(t, Meet) else " v "
    left = format_term(t.left)
    right = format_term(t.right)
    if isinstance(t.left, (Meet, Join)) and type(t.left) is not type(t):
        left = f"({left})"
    if isinstance(t.right, (Meet, Join)):
        right = f"({right})"
    return left + op + right


def format_equation(eq: Equation) -> str:
    if isinstance(eq.lhs, Meet) and eq.lhs.left == eq.rhs:
        return f"{format_term(eq.lhs.left)} <= {format_term(eq.lhs.right)}"
    return f"{format_term(eq.lhs)} = {format_term(eq.rhs)}"


# ---------------------------------------------------------------- structure

@lru_cache(maxsize=None)
def term_vars(t: Term) -> frozenset:
    if isinstance(t, Var):
        return frozenset((t.index,))
    if isinstance(t, Unit):
        return frozenset()
    return term_vars(t.left) | term_vars(t.right)


def equation_vars(eq: Equation) -> list[int]:
    return sorted(term_vars(eq.lhs) | term_vars(eq.rhs))


def dual_term(t: Term) -> Term:
    if isinstance(t, (Var, Unit)):
        return t
    if isinstance(t, Prod):
        return Prod(dual_term(t.left), dual_term(t.right))
    if isinstance(t, Meet):
        return Join(dual_term(t.left), dual_term(t.right))
    return Meet(dual_term(t.left), dual_term(t.right))


def dual_equation(eq: Equation) -> Equation:
    return Equation(dual_term(eq.lhs), dual_term(eq.rhs))


def substitute(t: Term, mapping: dict) -> Term:
    """Replace variables by terms; unmapped variables stay."""
    if isinstance(t, Var):
        return mapping.get(t.index, t)
    if isinstance(t, Unit):
        return t
    return type(t)(substitute(t.left, mapping), substitute(t.right, mapping))


def simplify(t: Term) -> Term:
    """Drop unit factors and collapse ``s ^ s``, ``s v s`` to ``s``."""
    if isinstance(t, (Var, Unit)):
        return t
    left, right = simplify(t.left), simplify(t.right)
    if isinstance(t, Prod):
        if isinstance(left, Unit):
            return right
        if isinstance(right, Unit):
            return left
        return Prod(left, right)
    if left == right:
        return left
    return type(t)(left, right)


# ---------------------------------------------------------------- evaluation

def eval_term(t: Term, M: FinOrdMonoid, valuation: dict) -> int:
    tbl = M.table
    def go(u):
        if isinstance(u, Var):
            if u.index not in valuation:
                raise UnboundVariable(u.index)
            return valuation[u.index]
        if isinstance(u, Unit):
            return M.unit
        a, b = go(u.left), go(u.right)
        if isinstance(u, Prod):
            return tbl[a][b]
        return min(a, b) if isinstance(u, Meet) else max(a, b)
    return go(t)


def _veval(t: Term, tbl: np.ndarray, unit: int, leaf, memo: dict):
    """Vectorized evaluation; ``leaf(u)`` may short-circuit a subterm with an array."""
    if t in memo:
        return memo[t]
    val = leaf(t)
    if val is None:
        if isinstance(t, Unit):
            val = np.int64(unit)
        elif isinstance(t, Var):
            raise UnboundVariable(t.index)
        else:
            a = _veval(t.left, tbl, unit, leaf, memo)
            b = _veval(t.right, tbl, unit, leaf, memo)
            if isinstance(t, Prod):
                val = tbl[a, b]
            elif isinstance(t, Meet):
                val = np.minimum(a, b)
            else:
                val = np.maximum(a, b)
    memo[t] = val
    return val


def _subterms(t: Term):
    yield t
    if isinstance(t, (Prod, Meet, Join)):
        yield from _subterms(t.left)
        yield from _subterms(t.right)


def _partition(variables, roots, k):
    parent = {v: v for v in variables}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for r in roots:
        for u in _subterms(r):
            vs = sorted(term_vars(u))
            if 1 < len(vs) <= k:
                for w in vs[1:]:
                    parent[find(w)] = find(vs[0])
    groups = {}
    for v in variables:
        groups.setdefault(find(v), []).append(v)
    return [tuple(g) for g in groups.values()]


def _pure_subterms(roots, block):
    """Maximal subterms whose (non-empty) variables all lie in ``block``, in first-seen order."""
    bs = set(block)
    out = []

    def walk(u):
        vs = term_vars(u)
        if vs and vs <= bs:
            if u not in out:
                out.append(u)
            return
        if isinstance(u, (Prod, Meet, Join)):
            walk(u.left)
            walk(u.right)

    for r in roots:
        walk(r)
    return out


def _plan(eq: Equation, n: int):
    variables = equation_vars(eq)
    roots = (eq.lhs, eq.rhs)
    best = None
    seen = set()
    for k in range(len(variables) + 1):
        blocks = _partition(variables, roots, k)
        key = tuple(sorted(blocks))
        if key in seen:
            continue
        seen.add(key)
        pures = [_pure_subterms(roots, b) for b in blocks]
        enum_cost = sum(n ** len(b) for b in blocks)
        combo_cost = prod(min(n ** len(b), n ** len(p)) for b, p in zip(blocks, pures))
        cost = enum_cost + combo_cost
        if best is None or cost < best[0]:
            best = (cost, blocks, pures)
    if not variables:
        best = (1, [], [])
    return best


_CHUNK = 1 << 18


def _tabulate_block(block, pures, n, tbl, unit):
    """Reachable value tuples of ``pures`` over all valuations of ``block``,
    with the lexicographically first valuation (as a flat index) reaching each."""
    total = n ** len(block)
    shape = (n,) * len(block)
    rows, firsts = [], []
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        coords = np.unravel_index(idx, shape)
        env = {Var(v): c.astype(np.int64) for v, c in zip(block, coords)}
        memo = {}
        vals = np.stack(
            [np.broadcast_to(_veval(p, tbl, unit, env.get, memo), idx.shape) for p in pures], axis=1
        )
        uniq, first = np.unique(vals, axis=0, return_index=True)
        rows.append(uniq)
        firsts.append(idx[first])
    allrows = np.concatenate(rows)
    allfirst = np.concatenate(firsts)
    # stable: chunks are in order, so the first occurrence has the smallest index
    order = np.argsort(allfirst, kind="stable")
    allrows, allfirst = allrows[order], allfirst[order]
    uniq, pos = np.unique(allrows, axis=0, return_index=True)
    return uniq, allfirst[pos]


def failure_witness(M: FinOrdMonoid, eq: Equation, cap: int = DEFAULT_VALUATION_CAP) -> Optional[dict]:
    """Lexicographically first valuation (ordered by variable index) on which
    the two sides differ, or ``None`` if ``M`` satisfies ``eq``."""
    n = M.size
    cost, blocks, pures = _plan(eq, n)
    if cost > cap:
        raise CapExceeded("valuation search", cost, cap)
    tbl = M.array
    variables = equation_vars(eq)
    if not variables:
        memo = {}
        a = _veval(eq.lhs, tbl, M.unit, lambda u: None, memo)
        b = _veval(eq.rhs, tbl, M.unit, lambda u: None, memo)
        return None if int(a) == int(b) else {}

    tables = [_tabulate_block(b, p, n, tbl, M.unit) for b, p in zip(blocks, pures)]
    k = len(blocks)
    sizes = [len(t[0]) for t in tables]
    # first valuation of each reachable tuple, as per-variable value arrays
    first_vals = []
    for (uniq, first), b in zip(tables, blocks):
        coords = np.unravel_index(first, (n,) * len(b))
        first_vals.append({v: c for v, c in zip(b, coords)})

    # chunk over the leading block axis so each skeleton batch stays small
    rest = prod(sizes[1:])
    step = max(1, _CHUNK // max(1, rest))
    best = None
    for start in range(0, sizes[0], step):
        stop = min(sizes[0], start + step)
        env = {}
        for i, ((uniq, _), p) in enumerate(zip(tables, pures)):
            col = uniq[start:stop] if i == 0 else uniq
            for j, u in enumerate(p):
                shape = [1] * k
                shape[i] = -1
                env[u] = col[:, j].reshape(shape)
        memo = {}
        lhs = _veval(eq.lhs, tbl, M.unit, env.get, memo)
        rhs = _veval(eq.rhs, tbl, M.unit, env.get, memo)
        full = (stop - start,) + tuple(sizes[1:])
        bad = np.nonzero(np.broadcast_to(lhs != rhs, full))
        if len(bad[0]) == 0:
            continue
        combo = [bad[0] + start] + list(bad[1:])
        owner = {v: i for i, b in enumerate(blocks) for v in b}
        cand = np.arange(len(combo[0]))
        for v in variables:
            i = owner[v]
            values = first_vals[i][v][combo[i][cand]]
            cand = cand[values == values.min()]
        winner = tuple(int(first_vals[owner[v]][v][combo[owner[v]][cand[0]]]) for v in variables)
        if best is None or winner < best:
            best = winner
    if best is None:
        return None
    return dict(zip(variables, best))


def satisfies(M: FinOrdMonoid, eq: Equation, cap: int = DEFAULT_VALUATION_CAP) -> bool:
    return failure_witness(M, eq, cap) is None


# ---------------------------------------------------------------- C_n and the axiom families

def cn_labels(n: int, dual: bool = False) -> list[int]:
    """Numeric label (0 for e) of each rank of C_n, or of its order dual."""
    if n < 1:
        raise ValueError("n must be at least 1")
    labels = range(1, n)
    below = sorted((m for m in labels if m % 2 == (n - 1) % 2), reverse=True)
    above = sorted(m for m in labels if m % 2 != (n - 1) % 2)
    order = below + [0] + above
    return order[::-1] if dual else order


def _label_algebra(order: list[int]) -> FinOrdMonoid:
    rank = {lab: r for r, lab in enumerate(order)}
    table = [[rank[max(a, b)] for b in order] for a in order]
    return FinOrdMonoid._trusted(len(order), rank[0], table)


def make_cn(n: int) -> FinOrdMonoid:
    return _label_algebra(cn_labels(n)) if n > 1 else trivial()


def make_cnd(n: int) -> FinOrdMonoid:
    return _label_algebra(cn_labels(n, dual=True)) if n > 1 else trivial()


@lru_cache(maxsize=None)
def _sigma_sides(n: int, offset: int = 0) -> tuple[Term, Term]:
    if n < 2:
        raise ValueError("sigma_n needs n >= 2")
    x = lambda i: Var(i + offset)
    s, t = x(1), E
    for m in range(2, n):
        # build sigma_{m+1} from sigma_m
        step = Prod(x(m - 1), x(m))
        if (m + 1) % 2 == 0:
            s = Meet(s, step)
        else:
            t = Join(t, step)
    return s, t


def sigma(n: int) -> Equation:
    s, t = _sigma_sides(n)
    return leq(s, t)


def sigma_dual(n: int) -> Equation:
    s, t = _sigma_sides(n)
    return leq(dual_term(t), dual_term(s))


def gamma(n: int) -> Equation:
    if n < 3:
        raise ValueError("gamma_n needs n >= 3")
    s, t = _sigma_sides(n)
    sy, ty = _sigma_sides(n, offset=n - 1)
    return leq(Prod(s, dual_term(ty)), Prod(t, dual_term(sy)))


def axiom_witness_subalgebra(M: FinOrdMonoid, n: int):
    """If ``M`` fails sigma_n, the first failing valuation and the subalgebra it generates."""
    v = failure_witness(M, sigma(n))
    if v is None:
        return None
    sub, _ = generated_subalgebra(M, v.values())
    return v, sub
