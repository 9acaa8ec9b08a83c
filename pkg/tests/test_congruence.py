from itertools import combinations

import pytest
from hypothesis import given, settings

from lmonoid import (
    CapExceeded,
    Congruence,
    FormatError,
    Letter,
    all_congruences,
    brute_force_enumerate,
    check_map,
    compose,
    con_is_chain,
    congruence_join,
    congruence_meet,
    enumerate_words,
    generated_subalgebra,
    has_cep,
    is_congruence,
    is_sdi,
    make_cn,
    make_cnd,
    monolith,
    parse_congruence,
    parse_word,
    principal_congruence,
    quotient,
    quotient_section,
    trivial,
    word_is_sdi,
)
from lmonoid.congruence import _all_by_enumeration, _all_by_joins

from conftest import words
from oracles import all_partitions, naive_is_congruence

C2, C2D, G3, D3 = Letter.C2, Letter.C2D, Letter.G3, Letter.D3
C3 = make_cn(3)  # ranks: 2 < e < 1


def test_text_form():
    th = parse_congruence("0-0;1-2", 3)
    assert str(th) == "0-0;1-2"
    assert th.block_of == (0, 1, 1)
    with pytest.raises(FormatError):
        parse_congruence("0-1;1-2", 3)
    with pytest.raises(FormatError):
        parse_congruence("0-1", 3)
    with pytest.raises(FormatError):
        parse_congruence("zero", 3)


def test_principal_examples():
    assert principal_congruence(C3, 1, 1) == Congruence.identity(3)
    assert str(principal_congruence(C3, 2, 1)) == "0-0;1-2"
    assert principal_congruence(C3, 0, 1) == Congruence.total(3)


def test_all_congruence_examples():
    assert all_congruences(trivial()) == [Congruence.identity(1)]
    cons = all_congruences(C3)
    assert [str(c) for c in cons] == ["0-0;1-1;2-2", "0-0;1-2", "0-2"]
    cc = compose((C2, C2))
    assert len(all_congruences(cc)) == 4
    assert not con_is_chain(cc)
    assert len(all_congruences(compose((C2,)))) == 2


def test_congruences_match_naive_partitions():
    # the naive checker sees arbitrary partitions and all three operations
    for n in range(1, 6):
        for M in brute_force_enumerate(n):
            naive = {tuple(p) for p in all_partitions(n) if naive_is_congruence(M, p)}
            ours = {c.block_of for c in all_congruences(M)}
            assert ours == naive


def test_enumeration_and_join_closure_agree():
    for w in enumerate_words(7) + enumerate_words(9)[::7]:
        M = compose(w)
        a = sorted(c.blocks for c in _all_by_enumeration(M))
        b = sorted(c.blocks for c in _all_by_joins(M))
        assert a == b


def test_large_algebra_uses_join_closure():
    M = compose((G3, C2, C2D, G3, C2, C2, D3))
    cons = all_congruences(M)
    assert all(is_congruence(M, c) for c in cons)
    assert cons[0].is_identity and len(cons[-1].blocks) == 1


def test_lattice_closure():
    for w in enumerate_words(5):
        M = compose(w)
        cons = set(all_congruences(M))
        for a, b in combinations(cons, 2):
            assert congruence_join(a, b) in cons
            assert congruence_meet(a, b) in cons


def test_principal_is_smallest():
    for n in range(2, 6):
        for M in brute_force_enumerate(n):
            cons = all_congruences(M)
            for a in range(n):
                for b in range(n):
                    p = principal_congruence(M, a, b)
                    assert p.related(a, b)
                    assert all(p.leq(c) for c in cons if c.related(a, b))


def test_sdi_examples():
    assert is_sdi(compose((C2,)))
    assert monolith(compose((C2,))) == Congruence.total(2)
    assert not is_sdi(compose((C2, C2)))
    assert not is_sdi(trivial())
    assert con_is_chain(compose((G3,)))
    assert con_is_chain(compose((G3, G3)))


def test_sdi_matches_word_test():
    for n in range(1, 8):
        for w in enumerate_words(n):
            M = compose(w)
            assert is_sdi(M) == word_is_sdi(w)
            if word_is_sdi(w):
                assert con_is_chain(M)


def test_monolith_is_least_nontrivial():
    for n in range(2, 6):
        for M in brute_force_enumerate(n):
            nontrivial = [c for c in all_congruences(M) if not c.is_identity]
            least = [c for c in nontrivial if all(c.leq(d) for d in nontrivial)]
            assert monolith(M) == (least[0] if least else None)
            if is_sdi(M):
                assert con_is_chain(M)


def test_principal_congruence_reduces_to_unit_on_sdi_words():
    for n in range(2, 8):
        for w in enumerate_words(n, "sdi"):
            M = compose(w)
            t = M.table
            for a in range(n):
                for b in range(n):
                    if a != b and (t[a][b] == a or t[b][a] == a):
                        assert principal_congruence(M, a, b) == principal_congruence(M, a, M.unit)


def test_quotient_examples():
    M = compose((G3, C2))
    Q, proj = quotient(M, Congruence.identity(M.size))
    assert Q == M
    Q, proj = quotient(M, Congruence.total(M.size))
    assert Q == trivial()
    Q, proj = quotient(C3, parse_congruence("0-0;1-2", 3))
    assert Q == compose((C2,))
    assert check_map(C3, Q, proj).is_homomorphism


def test_quotient_section_examples():
    assert quotient_section(C3, Congruence.identity(3)).image == (0, 1, 2)
    s = quotient_section(C3, parse_congruence("0-0;1-2", 3))
    assert s.image == (0, 1, 1)
    sub, _ = generated_subalgebra(C3, set(s.image))
    assert sub == compose((C2,))


@settings(max_examples=80, deadline=None)
@given(words)
def test_quotient_section_properties(w):
    M = compose(w)
    for th in all_congruences(M):
        s = quotient_section(M, th)
        assert check_map(M, M, s).is_homomorphism
        assert s.compose(s) == s
        assert all((s(a) == s(b)) == th.related(a, b) for a in range(M.size) for b in range(M.size))
        Q, proj = quotient(M, th)
        assert check_map(M, Q, proj).is_homomorphism
        assert proj.compose(s) == proj


def test_cep_examples():
    assert not has_cep(make_cn(4))
    assert not has_cep(make_cnd(4))
    assert has_cep(make_cn(3))
    assert not has_cep(compose((C2, G3)))
    with pytest.raises(CapExceeded):
        has_cep(compose((G3,) * 7))
