from collections import Counter
from itertools import product

import pytest
from hypothesis import given, settings

from gridone.dga import (
    AugCandidate,
    assemble_fragment,
    augmentation_search,
    counting_fragment,
    fuchs_special_count,
    theorem1_check,
    theorem2_predicate,
    theorem2_verify,
)
from gridone.exceptions import ScopeError
from gridone.lagrangian import build_diagram
from gridone.lens_arith import GridOneSpec
from gridone.loops import count_N, count_S, max_switch_chords
from strategies import k1_specs


def spec(p, q, s):
    return GridOneSpec.from_pqs(p, q, s)


def all_eps(b_gens):
    for bits in product((0, 1), repeat=len(b_gens)):
        yield dict(zip(b_gens, bits))


def test_single_crossing_fragment_cancels():
    frag = assemble_fragment(spec(7, 6, 1))
    assert frag.terms == {"a1": Counter({(): 2})}
    assert frag.reduced() == {"a1": frozenset()}


def test_k762_fragment():
    frag = assemble_fragment(spec(7, 6, 2))
    assert frag.pair == ("b3", "b1")
    d_an = frag.terms["a3"]
    assert sum(d_an.values()) == 5
    assert d_an == Counter({("b2",): 2, ("b2", "b2", "b2"): 1, (): 1, ("b2", "b2"): 1})
    assert all(v == 0 for v in frag.filtered.values())


def test_special_count_examples():
    frag = assemble_fragment(spec(7, 6, 2))
    zero = {b: 0 for b in frag.b_generators}
    for a in frag.a_generators:
        assert fuchs_special_count(frag, zero, a) == frag.terms[a][()]
    assert fuchs_special_count(frag, {"b1": 0, "b2": 1, "b3": 0}, "a3") == 5
    big = counting_fragment(spec(15, 14, 2))
    assert big.special_count("a3", {"b1": 0, "b2": 1, "b3": 0}) == 21 + 13


def test_search_examples():
    cands = augmentation_search(assemble_fragment(spec(7, 6, 1)))
    assert [c.as_dict() for c in cands] == [{"b1": 0}, {"b1": 1}]
    cands = augmentation_search(counting_fragment(spec(15, 14, 2)))
    assert cands and all(c("b2") == 1 for c in cands)
    assert augmentation_search(counting_fragment(spec(11, 10, 2))) == []


def test_candidate_values():
    c = AugCandidate((("b1", 1), ("b2", 0)))
    assert c("a1") == 0 and c("b1") == 1 and c("b2") == 0


def test_search_order_and_restriction():
    frag = counting_fragment(spec(15, 14, 2))
    cands = augmentation_search(frag)
    values = [int("".join(str(e) for e in c.as_dict().values()), 2) for c in cands]
    assert values == sorted(values)
    assert all(c("b1") == c("b3") for c in cands)


def test_graded_flag():
    s = spec(15, 14, 2)
    d = build_diagram(s)
    grades = {c.b_gen.symbol: c.b_gen.grading for c in d.crossings}
    cands = augmentation_search(counting_fragment(s), grades, d.grading_modulus)
    flags = {tuple(c.as_dict().values()): c.graded for c in cands}
    assert flags[(0, 1, 0)] is True  # |b2| = 0
    assert flags[(1, 1, 1)] is False


def test_scope():
    with pytest.raises(ScopeError):
        assemble_fragment(spec(5, 2, 3))
    assert assemble_fragment(spec(5, 2, 3), force=True).a_generators == ("a1", "a2", "a3")
    with pytest.raises(ScopeError):
        counting_fragment(spec(8, 3, 5), force=True)


def test_vanishing_check_examples():
    assert theorem1_check(5).passed
    assert theorem1_check(7).passed
    with pytest.raises(ScopeError):
        theorem1_check(4)


def test_existence_predicate_examples():
    assert theorem2_predicate(15) and theorem2_predicate(21)
    assert not theorem2_predicate(5)
    with pytest.raises(ScopeError):
        theorem2_predicate(10)


@pytest.mark.parametrize("p,exists", [(15, True), (13, False), (9, True), (3, True), (7, False)])
def test_existence_verify_examples(p, exists):
    r = theorem2_verify(p)
    assert r.exists is exists
    assert r.agree


def test_existence_report_parities():
    r = theorem2_verify(7)
    # eps(b2)=1 at a_N: S(1) + N(1) = 5 is odd
    assert r.parities["b2=1"]["a3"] == 1
    assert r.parities["b2=0"]["a3"] == 1
    assert r.to_dict()["p_mod_12"] == 7


@pytest.mark.parametrize("p", range(5, 32, 2))
def test_counting_fragment_matches_words(p):
    s = spec(p, p - 1, 2)
    words = assemble_fragment(s)
    counted = counting_fragment(s)
    for eps in all_eps(words.b_generators):
        for a in words.a_generators:
            assert words.special_count(a, eps) == counted.special_count(a, eps)


@pytest.mark.parametrize("p", range(5, 32, 2))
def test_a2_special_count_even_when_pair_tied(p):
    frag = counting_fragment(spec(p, p - 1, 2))
    for eps in all_eps(frag.b_generators):
        if eps["b1"] == eps["b3"]:
            assert frag.special_count("a2", eps) % 2 == 0


@pytest.mark.parametrize("p", range(5, 32, 2))
def test_existence_matches_recursion_parity(p):
    k_s, k_n = max_switch_chords(p, "S").k, max_switch_chords(p, "N").k
    r = theorem2_verify(p)
    assert r.exists == ((count_S(k_s).count + count_N(k_n).count) % 2 == 0)


@settings(max_examples=25, deadline=None)
@given(k1_specs(max_p=19))
def test_general_fragment_reduction_is_parity(s):
    frag = assemble_fragment(s, force=True)
    for a, words in frag.terms.items():
        assert frag.reduced()[a] == frozenset(w for w, m in words.items() if m % 2 == 1)
        assert all(set(y[0] for y in w) <= {"b"} for w in words)
