import itertools

import pytest

from qma.errors import BadParams, BadPresentation, ParseError, StepCapExceeded, UnknownGenerator
from qma.ncalg import (
    NCPoly,
    builtin_presentation,
    check_confluence,
    load_presentation,
    parse_presentation,
    quotient_by_detq,
    quotient_kill_generator,
)
from qma.scalar import make_field


def dd2(m=3):
    return builtin_presentation("dd2", make_field("cyclotomic", m))


def rea2(m=3):
    return builtin_presentation("rea2", make_field("cyclotomic", m))


def word(P, *names):
    return tuple(P.gen(n) for n in names)


def test_dd2_rule_z21_z12():
    P = dd2(3)
    rhs = P.rules[word(P, "Z21", "Z12")].rhs
    assert rhs == NCPoly.monomial(P.field, word(P, "Z12", "Z21"), P.field.q)


def test_rea2_rule_u21_u12():
    P = rea2(5)
    F = P.field
    c = F.q_pow(-2) - 1
    expected = P.parse_raw("u12 u21") + P.parse_raw("u22 u22").__rmul__(c) - P.parse_raw("u11 u22").__rmul__(c)
    assert P.rules[word(P, "u21", "u12")].rhs == expected


def test_rea2_rule_u21_u11():
    P = rea2(5)
    F = P.field
    c = F.q_pow(-2) * (F.q_pow(-2) - 1)
    assert P.rules[word(P, "u21", "u11")].rhs == P.parse_raw("u11 u21") + c * P.parse_raw("u21 u22")


def test_parse_det_q():
    P = dd2(3)
    x = P.parse("Z11*Z22 - Z12*Z21")
    assert sorted(x.terms) == sorted([word(P, "Z11", "Z22"), word(P, "Z12", "Z21")])
    assert all(P.is_normal(w) for w in x.terms)


def test_parse_tr_q():
    P = rea2(4)
    F = P.field
    x = P.parse("u11 + q^-2 * u22")
    assert x.coefficient(word(P, "u11")) == F.one
    assert x.coefficient(word(P, "u22")) == F.q_pow(-2)


def test_parse_empty_word():
    P = dd2(3)
    assert P.parse("Z11^0").terms == {(): P.field.one}


@pytest.mark.parametrize(
    "text,pos", [("Z11 + * Z12", 6), ("Z11^", 4), ("(Z11", 4), ("Z11 Z12 )", 8)]
)
def test_parse_error_position(text, pos):
    with pytest.raises(ParseError) as exc:
        dd2().parse(text)
    assert exc.value.pos == pos


def test_unknown_generator():
    with pytest.raises(UnknownGenerator):
        dd2().parse("Z33")
    with pytest.raises(UnknownGenerator):
        dd2().x("u11")


def test_normalize_defining_relation():
    P = dd2(3)
    assert P.normalize(P.parse_raw("Z22 Z11")) == P.parse_raw("Z11 Z22") + (P.field.q - 1) * P.parse_raw("Z12 Z21")
    assert P.format(P.parse("Z22*Z11")) == "Z11*Z22 + (q - 1) Z12*Z21"


def test_normalize_z22_z11_squared():
    for m in (3, 4, 5):
        P = dd2(m)
        q = P.field.q
        expect = P.parse_raw("Z11^2 Z22") + (q * q - 1) * P.parse_raw("Z11 Z12 Z21")
        assert P.normalize(P.parse_raw("Z22 Z11^2")) == expect


def test_normalize_zero():
    for P in (dd2(), rea2()):
        assert not P.normalize(NCPoly(P.field))


def test_mul_examples():
    P = dd2(4)
    assert P.mul(P.x("Z21"), P.x("Z12")) == P.field.q * P.parse_raw("Z12 Z21")
    R = rea2(5)
    assert R.mul(R.x("u22"), R.x("u12")) == R.field.q_pow(2) * R.parse_raw("u12 u22")
    x = P.parse_raw("Z22 Z21 Z11")
    assert P.mul(x, P.one()) == P.normalize(x)


def test_confluence_builtins():
    for m in range(2, 7):
        F = make_field("cyclotomic", m)
        for name in ("dd2", "rea2", "dd3"):
            assert check_confluence(builtin_presentation(name, F)) == []


TOY = """\
field cyclotomic m=3
generators x < y < z
rule y*x -> x
rule z*y -> y
"""


def test_confluence_toy_rule_set():
    T = parse_presentation(TOY)
    amb = check_confluence(T)
    assert len(amb) == 1
    a = amb[0]
    assert T.word_str(a.word) == "z*y*x"
    assert {T.format(a.left), T.format(a.right)} == {"x", "z*x"}


def test_detq_quotient():
    P = dd2(3)
    D = quotient_by_detq(P)
    assert D.normalize(D.parse_raw("Z11 Z22")) == D.parse_raw("Z12 Z21")
    assert not D.parse("Z11*Z22 - Z12*Z21")
    assert D.normalize(D.parse_raw("Z22 Z11")) == D.field.q * D.parse_raw("Z12 Z21")


def test_kill_z12():
    P = quotient_kill_generator(dd2(3), "Z12")
    assert P.names == ("Z11", "Z21", "Z22")
    nontrivial = {
        P.word_str(lhs): P.format(r.rhs)
        for lhs, r in P.rules.items()
        if r.rhs != NCPoly.monomial(P.field, lhs[::-1])
    }
    assert nontrivial == {"Z21*Z11": "q Z11*Z21"}


def test_kill_z21():
    P = quotient_kill_generator(dd2(3), "Z21")
    nontrivial = {
        P.word_str(lhs): P.format(r.rhs)
        for lhs, r in P.rules.items()
        if r.rhs != NCPoly.monomial(P.field, lhs[::-1])
    }
    assert P.names == ("Z11", "Z12", "Z22")
    assert nontrivial == {"Z22*Z12": "q Z12*Z22"}


def test_kill_u22_is_commutative():
    P = quotient_kill_generator(rea2(5), "u22")
    assert len(P.names) == 3
    for lhs, r in P.rules.items():
        assert r.rhs == NCPoly.monomial(P.field, lhs[::-1])


def test_rule_rhs_normal_at_load():
    for P in (dd2(), rea2(), builtin_presentation("dd3", make_field("cyclotomic", 3))):
        for r in P.rules.values():
            assert all(P.is_normal(w) for w in r.rhs.terms)


def test_dd2_normal_words_distinct_m2():
    P = dd2(2)
    seen = set()
    for exps in itertools.product(range(2), repeat=4):
        w = sum(([g] * e for g, e in zip(range(4), exps)), [])
        nf = P.normalize(NCPoly.monomial(P.field, tuple(w)))
        assert list(nf.terms) == [tuple(w)]
        seen.add(tuple(w))
    assert len(seen) == 16


def test_step_cap(monkeypatch):
    monkeypatch.setenv("QMA_STEP_CAP", "5")
    F = make_field("cyclotomic", 3)
    fresh = parse_presentation(builtin_presentation("dd2", F).describe())
    assert fresh.step_cap == 5
    with pytest.raises(StepCapExceeded):
        fresh.normalize(fresh.parse_raw("Z22^3 Z21^3 Z12^3 Z11^3"))


def test_step_cap_nonterminating_user_rules(monkeypatch):
    monkeypatch.setenv("QMA_STEP_CAP", "50")
    # b*a -> a*b*a regenerates its own left-hand side forever
    with pytest.raises(StepCapExceeded):
        parse_presentation("field cyclotomic m=3\ngenerators a < b\nrule b*a -> a*b*a\n")


def test_step_cap_env_invalid(monkeypatch):
    monkeypatch.setenv("QMA_STEP_CAP", "abc")
    with pytest.raises(BadParams):
        parse_presentation(TOY)


def test_presentation_file_roundtrip(tmp_path):
    P = rea2(5)
    path = tmp_path / "rea.txt"
    path.write_text(P.describe())
    Q = load_presentation(str(path))
    assert Q.names == P.names
    assert Q.field == P.field
    for lhs, r in P.rules.items():
        assert Q.rules[lhs].rhs == r.rhs


def test_bad_presentation():
    with pytest.raises(BadPresentation):
        parse_presentation("generators a < b\n")
    with pytest.raises(BadPresentation):
        parse_presentation("field cyclotomic m=3\ngenerators a < b\nrule b*a a*b\n")


def test_load_unknown_builtin():
    with pytest.raises(BadParams):
        load_presentation("nosuch", make_field("cyclotomic", 3))


def test_dd3_has_all_generators():
    P = builtin_presentation("dd3", make_field("cyclotomic", 4))
    assert P.names == tuple(f"Z{i}{j}" for i in (1, 2, 3) for j in (1, 2, 3))
    assert len(P.rules) == 36
