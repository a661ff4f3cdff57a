from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cmsotw import logic as L
from cmsotw.errors import FormulaError

from formula_gen import random_sentence, seeded

CORPUS = Path(__file__).parent / "data" / "formulas.txt"


def test_parse_examples():
    phi = L.parse("(exists x (exists y (edge x y)))")
    assert phi == L.Exists("x", L.Exists("y", L.Edge("x", "y")))
    phi = L.parse("(existsSet 2 X (exists x (in x X)))")
    assert phi == L.ExistsSet(2, "X", L.VSET, L.Exists("x", L.Mem("x", "X")))
    with pytest.raises(FormulaError, match="unbound variable X"):
        L.parse("(card 2 X)")


@pytest.mark.parametrize(
    "text, message",
    [
        ("(exists x", "unclosed"),
        ("(card 1 X)", "p >= 2"),
        ("(existsSet 2 X (card 17 X))", "exceeds cap"),
        ("(frob x)", "unknown operator"),
        ("(exists x (in x x))", "sort fo"),
        ("(existsSet 1 X (edge X X))", "set variable"),
        ("(existsSet 1 X (inE @a @b X))", "sort V"),
        ("(exists x (= x x)) )", "offset"),
    ],
)
def test_parse_errors(text, message):
    with pytest.raises(FormulaError, match=message):
        L.parse(text)


def test_error_offset_points_at_problem():
    with pytest.raises(FormulaError) as info:
        L.parse("(exists x (= x y))")
    assert info.value.offset == 15


def test_render_examples():
    assert L.render(L.Exists("x", L.Eq("x", "x"))) == "(exists x (= x x))"
    nn = L.Not(L.Not(L.TRUE))
    assert L.render(nn) == "(not (not true))"
    assert L.parse(L.render(nn)) == nn
    assert L.render(L.Dp((("x1", "y1"), ("x2", "y2")))) == "(dp (x1 y1) (x2 y2))"


def test_golden_corpus_round_trip():
    lines = CORPUS.read_text().splitlines()
    assert len(lines) == 200
    for line in lines:
        phi = L.parse(line, colors=("C1",))
        assert L.render(phi) == line
        assert L.parse(L.render(phi), colors=("C1",)) == phi


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6))
def test_round_trip_random(seed):
    phi = random_sentence(seeded(seed), 3, kinds=(L.VSET, L.ESET), tmax=12)
    assert L.parse(L.render(phi)) == phi


def test_alpha_renaming_of_shadowed_binders():
    phi = L.parse("(exists x (exists x (= x x)))")
    assert phi.var == "x" and phi.body.var != "x"
    assert phi.body.body == L.Eq(phi.body.var, phi.body.var)
    # a binder named like a color gets renamed too
    psi = L.parse("(existsSetU C1 (exists x (in x C1)))", colors=("C1",))
    assert psi.var != "C1"


def test_free_variables_and_sorts():
    phi = L.parse("(and (in x X) (inE x y F))", free={"x": "fo", "y": "fo", "X": "V", "F": "E"})
    assert L.free_variables(phi) == {"x": "fo", "y": "fo", "X": "V", "F": "E"}
    assert L.free_variables(L.parse("(exists x (= x x))")) == {}


def test_formula_length_examples():
    short = L.parse("(existsSet 2 X true)")
    long = L.parse("(existsSet 10 X true)")
    assert L.formula_length(long) > L.formula_length(short)
    eq = L.Eq("x", "x")
    assert L.formula_length(eq) == 7
    for a, b in [(eq, eq), (L.TRUE, L.Edge("x", "y")), (L.Card(2, "X"), L.Card(16, "X"))]:
        assert L.formula_length(L.And((a, b))) == L.formula_length(a) + L.formula_length(b) + 7


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 98))
def test_formula_length_grows_with_digits(seed, k):
    base = L.ExistsSet(k, "X", L.VSET, L.TRUE)
    bigger = L.ExistsSet(k * 10 + 10, "X", L.VSET, L.TRUE)
    assert L.formula_length(bigger) > L.formula_length(base)


def test_eliminate_universal_param_examples():
    assert L.eliminate_universal_param(L.ForallSet(1, "X", L.VSET, L.TRUE)) == L.Not(
        L.ExistsSet(1, "X", L.VSET, L.Not(L.TRUE))
    )
    plain = L.parse("(existsSet 1 X (exists x (in x X)))")
    assert L.eliminate_universal_param(plain) == plain
    psi = L.parse("(forallSet 1 X (forallSet 2 Y (card 2 Y)))")
    out = L.eliminate_universal_param(psi)
    assert out == L.Not(L.ExistsSet(1, "X", L.VSET, L.Not(
        L.Not(L.ExistsSet(2, "Y", L.VSET, L.Not(L.Card(2, "Y"))))
    )))
    assert not any(isinstance(n, L.ForallSet) for n in L.walk(out))


def test_prenex_examples():
    pf = L.to_prenex(L.parse("(exists x (exists y (edge x y)))"))
    assert [q.mode for q in pf.prefix] == ["exists", "exists"] and pf.matrix == L.Edge("x", "y")
    pf = L.to_prenex(L.parse("(not (exists x (= x x)))"))
    assert pf.prefix == (L.Quantifier("forall", "x", L.FO),)
    assert pf.matrix == L.Not(L.Eq("x", "x"))
    pf = L.to_prenex(L.parse("(existsSet 2 X (not (forallSet 2 Y (card 2 Y))))"))
    assert pf.prefix == (L.Quantifier("exists", "X", L.VSET, 2), L.Quantifier("exists", "Y", L.VSET, 2))
    assert pf.matrix == L.Not(L.Card(2, "Y"))


def test_prenex_already_prenex_is_identity():
    phi = L.parse("(existsSet 1 X (forall x (exists y (or (in x X) (edge x y)))))")
    assert L.to_prenex(phi).to_formula() == phi


def test_prenex_requires_sentence():
    with pytest.raises(FormulaError):
        L.to_prenex(L.parse("(in x X)", free={"x": "fo", "X": "V"}))


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6))
def test_prenex_shape(seed):
    phi = random_sentence(seeded(seed), 3, kinds=(L.VSET, L.ESET))
    pf = L.to_prenex(phi)
    assert pf.is_sets_first()
    assert L.is_quantifier_free(pf.matrix)
    assert L.free_variables(pf.to_formula()) == {}
