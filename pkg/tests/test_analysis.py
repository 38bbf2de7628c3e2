import itertools
import random

import pytest

from qma.analysis import (
    commutant,
    find_proper_submodule,
    generated_algebra_dim,
    has_invariant_complement,
    indecomposability_certificate,
    invariant_closure,
    is_absolutely_simple,
    is_invariant,
    is_semisimple,
    null_space_dim,
    radical_of_commutant,
    restricted_action,
    trace_radical,
)
from qma.errors import BadCharacteristic, DimensionMismatch, NotInvariant
from qma.linalg import Matrix, Subspace
from qma.repmod import (
    FAMILIES,
    DDN1Params,
    DDN2Params,
    DDVermaParams,
    REAN3Params,
    REAVermaParams,
    Representation,
    build,
    change_basis,
    dd_simple_n1,
    dd_simple_n2,
    dd_verma_quotient,
    direct_sum,
    random_params,
    rea_n3,
    rea_verma_quotient,
)
from qma.scalar import make_field

from oracles import dense_algebra_dim


def cyc(m):
    return make_field("cyclotomic", m)


def n1(F, a=1, b=1, l1=1, l2=1):
    c = F.coerce
    return dd_simple_n1(F, DDN1Params(c(a), c(b), c(l1), c(l2)))


def dd_q(F, p, l1=1, l2=1):
    return dd_verma_quotient(F, DDVermaParams(F.coerce(l1), F.coerce(l2), p))


def rea_q(F, p):
    return rea_verma_quotient(F, REAVermaParams(F.from_int(3), F.one, p))


def dd_layer(F, p, r):
    """Span of f(a, b) with b >= r*m: the image of M_{r,m} in Q_{p,m}."""
    m = F.m
    top = p * m
    return Subspace(F, m * top, [{a * top + b: F.one} for a in range(m) for b in range(r * m, top)])


def rea_layer(F, p, r):
    from qma.structure import rea_order

    n = rea_order(F.m)
    return Subspace(F, p * n, [{k: F.one} for k in range(r * n, p * n)])


def test_generated_algebra_dim_n1_m2():
    R = n1(cyc(2))
    assert generated_algebra_dim(R) == 16 == dense_algebra_dim(R)


def test_generated_algebra_dim_matches_dense_oracle():
    F = cyc(3)
    for R in (dd_q(F, 1), dd_q(cyc(2), 2), rea_q(F, 2), n1(F, 2, 3, 1, 5)):
        assert generated_algebra_dim(R) == dense_algebra_dim(R)


def test_generated_algebra_dim_one_dimensional():
    F = cyc(5)
    assert generated_algebra_dim(rea_n3(F, REAN3Params(F.one, F.one))) == 1


def test_verma_q2_not_full():
    assert generated_algebra_dim(dd_q(cyc(2), 2)) < 64


def test_simplicity_examples():
    F = cyc(2)
    assert is_absolutely_simple(dd_q(F, 1))
    assert not is_absolutely_simple(dd_q(F, 2))
    assert is_absolutely_simple(dd_simple_n2(F, DDN2Params(F.one, F.zero, F.one)))


def test_invariant_closure_and_restriction():
    F = cyc(2)
    R = dd_q(F, 2)
    W = invariant_closure(R, [{3: F.one}])  # f(0,3)
    assert W == dd_layer(F, 2, 1)
    assert is_invariant(R, W)
    sub = restricted_action(R, W)
    S = Representation(R.presentation, sub, [str(i) for i in range(W.dim)])
    from qma.repmod import verify_relations

    assert verify_relations(S) == []
    with pytest.raises(DimensionMismatch):
        invariant_closure(R, [{99: F.one}])


def test_complement_examples():
    F = cyc(2)
    R = dd_q(F, 2)
    assert not has_invariant_complement(R, dd_layer(F, 2, 1))
    assert has_invariant_complement(R, Subspace(F, R.dim))
    A, B = n1(F), n1(F, 2, 3, 1, 1)
    S = direct_sum(A, B)
    first = Subspace(F, S.dim, [{i: F.one} for i in range(A.dim)])
    assert has_invariant_complement(S, first)


def test_complement_errors():
    F = cyc(2)
    R = dd_q(F, 2)
    with pytest.raises(NotInvariant):
        has_invariant_complement(R, Subspace(F, R.dim, [{0: F.one}]))
    with pytest.raises(DimensionMismatch):
        has_invariant_complement(R, Subspace(F, 3))


def test_commutant_dims():
    F = cyc(2)
    R = n1(F)
    C = commutant(R)
    assert C.dim == 1 and C.is_closed()
    assert commutant(direct_sum(R, R)).dim == 4
    for m in (2, 3):
        Q = dd_q(cyc(m), 2)
        CQ = commutant(Q)
        assert CQ.dim == 2 and CQ.is_closed()
        assert CQ.contains(Matrix.identity(Q.field, Q.dim))


def test_commutant_of_q2_contains_shift():
    F = cyc(3)
    Q = dd_q(F, 2)
    m, top = 3, 6
    shift = Matrix.zeros(F, Q.dim)
    for a in range(m):
        for b in range(m):
            shift.set(a * top + b, a * top + b + m, 1)
    for A in Q.matrices():
        assert A @ shift == shift @ A
    assert commutant(Q).contains(shift)
    assert (shift @ shift).is_zero()


def test_radical_examples():
    F = cyc(2)
    R = n1(F)
    assert radical_of_commutant(commutant(R)) == []
    assert radical_of_commutant(commutant(direct_sum(R, R))) == []
    for m in (2, 3):
        rad = commutant(dd_q(cyc(m), 2)).radical
        assert len(rad) == 1
        assert (rad[0] @ rad[0]).is_zero()


def test_certificate_examples():
    for m in (2, 3):
        F = cyc(m)
        c = indecomposability_certificate(dd_q(F, 2))
        assert c.kind == "Indecomposable"
        assert c.data == {"dim_commutant": 2, "dim_radical": 1}
        assert indecomposability_certificate(dd_q(F, 1)).kind == "Indecomposable"
    F = cyc(2)
    S = direct_sum(n1(F), n1(F, 2, 3, 1, 1))
    c = indecomposability_certificate(S)
    assert c.kind == "Decomposable"
    e = c.witness
    assert e @ e == e and not e.is_zero() and e != Matrix.identity(F, S.dim)
    assert all(A @ e == e @ A for A in S.matrices())


def test_certificate_fitting_idempotent():
    # conjugating R + R hides the block idempotents among the commutant basis
    F = cyc(2)
    S = direct_sum(n1(F), n1(F))
    T = Matrix.identity(F, S.dim)
    for i in range(S.dim - 1):
        T.set(i, i + 1, i + 2)
    S2 = change_basis(S, T)
    c = indecomposability_certificate(S2)
    assert c.kind == "Decomposable"
    e = c.witness
    assert e @ e == e
    assert all(A @ e == e @ A for A in S2.matrices())
    assert 0 < e.rank() < S2.dim


def test_bad_characteristic():
    F = make_field("prime", 3, 7)
    Q = dd_q(F, 2)
    with pytest.raises(BadCharacteristic):
        indecomposability_certificate(Q)
    with pytest.raises(BadCharacteristic):
        trace_radical(F, 7, [])


@pytest.mark.parametrize("m", [2, 3])
@pytest.mark.parametrize("family", FAMILIES)
def test_simple_implies_local(m, family):
    F = cyc(m)
    rng = random.Random(m)
    R = build(family, F, random_params(family, F, rng, p=1))
    if is_absolutely_simple(R):
        C = commutant(R)
        assert C.dim == 1
        assert indecomposability_certificate(R, C).kind == "Indecomposable"
        assert is_semisimple(R)


@pytest.mark.parametrize("m", [2, 3])
@pytest.mark.parametrize("p", [2, 3])
def test_dd_submodule_chain(m, p):
    F = cyc(m)
    Q = dd_q(F, p)
    found = []
    for i in range(Q.dim):
        W = invariant_closure(Q, [{i: F.one}])
        if all(W != x for x in found):
            found.append(W)
    expected = [dd_layer(F, p, r) for r in range(p)]
    assert len(found) == len(expected) and all(any(W == E for E in expected) for W in found)
    for r in range(1, p):
        assert not has_invariant_complement(Q, dd_layer(F, p, r))


@pytest.mark.parametrize("m", [2, 3])
@pytest.mark.parametrize("p", [2, 3])
def test_rea_submodule_chain(m, p):
    F = cyc(m)
    Q = rea_q(F, p)
    found = []
    for i in range(Q.dim):
        W = invariant_closure(Q, [{i: F.one}])
        if all(W != x for x in found):
            found.append(W)
    expected = [rea_layer(F, p, r) for r in range(p)]
    assert len(found) == len(expected) and all(any(W == E for E in expected) for W in found)
    for r in range(1, p):
        assert not has_invariant_complement(Q, rea_layer(F, p, r))
    assert not is_semisimple(Q)


def test_q22_invariant_subspaces_exhaustive_on_01_lines():
    F = cyc(2)
    Q = dd_q(F, 2)
    allowed = [Subspace(F, Q.dim), dd_layer(F, 2, 1), dd_layer(F, 2, 0)]
    for bits in itertools.product((0, 1), repeat=Q.dim):
        v = {i: F.one for i, b in enumerate(bits) if b}
        W = invariant_closure(Q, [v])
        assert any(W == A for A in allowed)


def test_semisimple():
    F = cyc(2)
    assert is_semisimple(direct_sum(n1(F), n1(F, 2, 3, 1, 1)))
    assert not is_semisimple(dd_q(F, 2))
    assert is_semisimple(dd_q(F, 1))


def test_find_proper_submodule():
    F = cyc(2)
    assert find_proper_submodule(n1(F)) is None
    assert find_proper_submodule(dd_q(F, 2)).dim == 4


def test_null_space_dim():
    F = cyc(3)
    R = dd_simple_n2(F, DDN2Params(F.one, F.one, F.one))
    assert null_space_dim(R.action["Z11"]) == 3
    assert null_space_dim(n1(F).action["Z11"]) == 0
