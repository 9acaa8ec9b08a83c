import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lmonoid import (
    CapExceeded,
    CIdVarietyId,
    Equation,
    Join,
    Letter,
    Meet,
    Prod,
    TermSyntaxError,
    UnboundVariable,
    Unit,
    Var,
    axiom_witness_subalgebra,
    brute_force_enumerate,
    cid_identify,
    cid_leq,
    cn_labels,
    compose,
    decompose,
    dual_equation,
    dual_term,
    equation_vars,
    eval_term,
    failure_witness,
    format_equation,
    format_term,
    gamma,
    leq,
    make_cn,
    make_cnd,
    order_dual,
    parse_equation,
    parse_term,
    satisfies,
    sigma,
    sigma_dual,
    simplify,
    substitute,
    trivial,
)

from conftest import words
from oracles import naive_failure

x1, x2, x3, x4 = (Var(i) for i in range(1, 5))
e = Unit()

terms = st.recursive(
    st.one_of(st.integers(1, 4).map(Var), st.just(e)),
    lambda kids: st.one_of(
        st.builds(Prod, kids, kids), st.builds(Meet, kids, kids), st.builds(Join, kids, kids)
    ),
    max_leaves=8,
)


def semilinearity():
    z1, x, z2, w1, y, w2 = (Var(i) for i in range(1, 7))
    lhs = Meet(Prod(Prod(z1, x), z2), Prod(Prod(w1, y), w2))
    rhs = Join(Prod(Prod(z1, y), z2), Prod(Prod(w1, x), w2))
    return leq(lhs, rhs)


def test_parse_examples():
    eq = parse_equation("x1 ^ x2*x3 <= e v x1*x2")
    assert eq == sigma(4)
    assert format_equation(eq) == "x1 ^ x2*x3 <= e v x1*x2"
    assert parse_term("x1*x2*x3") == Prod(Prod(x1, x2), x3)
    assert parse_term("(x1 v x2) ^ x3") == Meet(Join(x1, x2), x3)
    assert parse_equation("x1*x1 = x1") == Equation(Prod(x1, x1), x1)


def test_parse_errors():
    for bad in ("x1 ^ x2 v x3", "x0", "x1 +", "(x1", "x1 x2", "x1 <= ", "y1"):
        with pytest.raises(TermSyntaxError):
            parse_equation(bad) if "<=" in bad else parse_term(bad)


@settings(max_examples=300)
@given(terms)
def test_print_parse_round_trip(t):
    assert parse_term(format_term(t)) == t


@settings(max_examples=100)
@given(terms, terms)
def test_equation_round_trip(s, t):
    for eq in (Equation(s, t), leq(s, t)):
        assert parse_equation(format_equation(eq)) == eq


def test_eval_examples():
    C3 = make_cn(3)
    rank = {lab: r for r, lab in enumerate(cn_labels(3))}
    assert eval_term(e, C3, {}) == C3.unit
    assert eval_term(Prod(x1, x2), C3, {1: rank[1], 2: rank[2]}) == rank[2]
    assert eval_term(Meet(x1, x2), C3, {1: rank[1], 2: rank[2]}) == rank[2]
    with pytest.raises(UnboundVariable):
        eval_term(x3, C3, {1: 0})


def test_satisfies_examples():
    idem = Equation(Prod(x1, x1), x1)
    for n in range(1, 5):
        for M in brute_force_enumerate(n):
            assert satisfies(M, idem)
    C2d = compose((Letter.C2D,))
    assert failure_witness(C2d, sigma(2)) == {1: 1}
    assert satisfies(compose((Letter.C2,)), sigma(2))


def test_semilinearity_everywhere():
    eq = semilinearity()
    for n in range(1, 7):
        for M in brute_force_enumerate(n):
            assert satisfies(M, eq)


small_algebras = [M for n in range(1, 5) for M in brute_force_enumerate(n)]


@settings(max_examples=150, deadline=None)
@given(terms, terms, st.sampled_from(small_algebras))
def test_witness_matches_naive_search(s, t, M):
    for eq in (Equation(s, t), leq(s, t)):
        assert failure_witness(M, eq) == naive_failure(M, eq)


def test_witness_matches_naive_on_families():
    for eq in (sigma(4), sigma_dual(5), gamma(3), gamma(4)):
        for M in small_algebras:
            assert failure_witness(M, eq) == naive_failure(M, eq)


def test_cap():
    eq = leq(Prod(Prod(x1, x2), Prod(x3, x4)), Join(x1, Meet(x2, Join(x3, x4))))
    with pytest.raises(CapExceeded):
        failure_witness(make_cn(5), eq, cap=10)


def test_gamma_six_on_c7_is_within_cap():
    assert not satisfies(make_cn(7), gamma(6))
    assert satisfies(make_cn(5), gamma(6))


def test_dual_examples():
    assert dual_term(e) == e
    assert dual_term(Meet(x1, Prod(x2, x3))) == Join(x1, Prod(x2, x3))


test_equations = [sigma(2), sigma(3), sigma_dual(3), sigma(4), gamma(3), semilinearity(),
                  Equation(Prod(x1, x2), Prod(x2, x1))]


def test_duality_transfer():
    for M in small_algebras + brute_force_enumerate(5):
        D = order_dual(M)
        for eq in test_equations:
            assert satisfies(M, eq) == satisfies(D, dual_equation(eq))
    assert satisfies(make_cn(3), sigma(3)) == satisfies(make_cnd(3), dual_equation(sigma(3)))


def test_cn_examples():
    assert make_cn(1) == trivial() == make_cnd(1)
    assert cn_labels(3) == [2, 0, 1]
    assert cn_labels(4) == [3, 1, 0, 2]
    assert cn_labels(4, dual=True) == [2, 0, 1, 3]
    for n in range(2, 9):
        C, Cd = decompose(make_cn(n)), decompose(make_cnd(n))
        assert len(C) == n - 1 and C[0] is Letter.C2
        assert Cd[0] is Letter.C2D
        assert all(a is not b for a, b in zip(C, C[1:]))
        assert make_cnd(n) == order_dual(make_cn(n))


def test_cn_product_is_label_max():
    for n in range(2, 8):
        lab = cn_labels(n)
        M = make_cn(n)
        for a in range(n):
            for b in range(n):
                assert lab[M.table[a][b]] == max(lab[a], lab[b])


def test_sigma_shapes():
    assert sigma(2) == leq(x1, e)
    assert sigma(3) == leq(x1, Join(e, Prod(x1, x2)))
    assert sigma(4) == leq(Meet(x1, Prod(x2, x3)), Join(e, Prod(x1, x2)))
    assert format_equation(sigma(5)) == "x1 ^ x2*x3 <= e v x1*x2 v x3*x4"
    for n in range(2, 9):
        assert equation_vars(sigma(n)) == list(range(1, n))
        assert len(equation_vars(sigma_dual(n))) == n - 1
    for n in range(3, 9):
        assert len(equation_vars(gamma(n))) == 2 * (n - 1)


def test_gamma_three():
    g = gamma(3)
    s3, t3 = x1, Join(e, Prod(x1, x2))
    y1, y2 = Var(3), Var(4)
    t3d = Meet(e, Prod(y1, y2))
    assert g.lhs.left == Prod(s3, t3d)
    assert format_equation(g) == "x1*(e ^ x3*x4) <= (e v x1*x2)*x3"


def test_gamma_specializes_to_sigma():
    for n in range(3, 9):
        k = n - 1
        ys = {k + i: e for i in range(1, n)}
        xs = {i: e for i in range(1, n)}
        g = gamma(n)
        got = Equation(simplify(substitute(g.lhs, ys)), simplify(substitute(g.rhs, ys)))
        assert got == sigma(n)
        rename = {k + i: Var(i) for i in range(1, n)}
        got = Equation(simplify(substitute(substitute(g.lhs, xs), rename)),
                       simplify(substitute(substitute(g.rhs, xs), rename)))
        assert got == sigma_dual(n)


def _variety_of(M):
    return cid_identify([decompose(M)])


def test_sigma_table_matches_lattice():
    for n in range(2, 7):
        plain = CIdVarietyId("VC" if n % 2 == 0 else "VCd", n)
        dual = CIdVarietyId("VCd" if n % 2 == 0 else "VC", n)
        for m in range(2, 7):
            for M in (make_cn(m), make_cnd(m)):
                assert satisfies(M, sigma(n)) == cid_leq(_variety_of(M), plain)
                assert satisfies(M, sigma_dual(n)) == cid_leq(_variety_of(M), dual)
        # read off directly: for n even V(C_n) has C_m iff m <= n and C_m dual iff m < n
        if n % 2 == 0:
            for m in range(2, 8):
                assert satisfies(make_cn(m), sigma(n)) == (m <= n)
                assert satisfies(make_cnd(m), sigma(n)) == (m < n)


def test_gamma_table():
    for n in range(2, 6):
        for m in range(2, 8):
            assert satisfies(make_cn(m), gamma(n + 1)) == (m <= n)
            assert satisfies(make_cnd(m), gamma(n + 1)) == (m <= n)


def test_axiom_witness_subalgebra():
    v, sub = axiom_witness_subalgebra(compose((Letter.C2D,)), 2)
    assert sub == make_cnd(2)
    v, sub = axiom_witness_subalgebra(make_cn(5), 5)
    assert sub == make_cn(5)
    v, sub = axiom_witness_subalgebra(make_cn(3), 2)
    assert sub == make_cnd(2)
    assert axiom_witness_subalgebra(compose((Letter.C2,)), 2) is None


@settings(max_examples=60, deadline=None)
@given(st.lists(st.sampled_from([Letter.C2, Letter.C2D]), max_size=6).map(tuple), st.integers(2, 6))
def test_axiom_witness_generates_predicted_chain(w, n):
    res = axiom_witness_subalgebra(compose(w), n)
    if res is None:
        return
    v, sub = res
    assert sub == (make_cnd(n) if n % 2 == 0 else make_cn(n))
    lab = cn_labels(n, dual=n % 2 == 0)
    # the witness a_k maps to the label k
    ranks = sorted(set(v.values()) | {compose(w).unit})
    for k, a in v.items():
        assert lab[ranks.index(a)] == k
