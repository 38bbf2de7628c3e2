"""Simplicity, submodules, complements and endomorphism rings of modules.

Absolute simplicity is decided by Burnside's criterion: the generator images
span all t x t matrices.  Radicals use the trace form, which is exact in
characteristic 0 or p > dim.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import BadCharacteristic, DimensionMismatch, NotInvariant
from .linalg import EchelonBasis, Matrix, Subspace, Vector, nullspace, solve_affine
from .repmod import Representation, intertwiners


def generated_algebra_dim(R: Representation, cap: int | None = None) -> int:
    """Dimension of the unital algebra generated by the action matrices.

    Stops early once ``cap`` (default t^2) is reached.
    """
    t = R.dim
    cap = t * t if cap is None else cap
    F = R.field
    gens = R.matrices()
    eb = EchelonBasis(F, t * t)
    queue = [eb.insert(Matrix.identity(F, t).flatten())]
    while queue and eb.dim < cap:
        nxt = []
        for v in queue:
            M = Matrix.unflatten(F, v, t, t)
            for A in gens:
                r = eb.insert((M @ A).flatten())
                if r is not None:
                    nxt.append(r)
                    if eb.dim >= cap:
                        return eb.dim
        queue = nxt
    return eb.dim


def is_absolutely_simple(R: Representation) -> bool:
    return generated_algebra_dim(R) == R.dim * R.dim


def generated_algebra_basis(R: Representation) -> list[Matrix]:
    t = R.dim
    F = R.field
    gens = R.matrices()
    eb = EchelonBasis(F, t * t)
    queue = [eb.insert(Matrix.identity(F, t).flatten())]
    while queue:
        nxt = []
        for v in queue:
            M = Matrix.unflatten(F, v, t, t)
            for A in gens:
                r = eb.insert((M @ A).flatten())
                if r is not None:
                    nxt.append(r)
        queue = nxt
    return [Matrix.unflatten(F, v, t, t) for v in eb.basis()]


def invariant_closure(R: Representation, vectors) -> Subspace:
    """Smallest subspace containing ``vectors`` and stable under every generator."""
    t = R.dim
    gens = R.matrices()
    S = Subspace(R.field, t)
    queue = []
    for v in vectors:
        if any(not 0 <= k < t for k in v):
            raise DimensionMismatch(f"vector index outside 0..{t - 1}")
        r = S._eb.insert(v)
        if r is not None:
            queue.append(r)
    while queue:
        nxt = []
        for v in queue:
            for A in gens:
                r = S._eb.insert(A.vecmul(v))
                if r is not None:
                    nxt.append(r)
        queue = nxt
    return S


def is_invariant(R: Representation, W: Subspace) -> bool:
    return all(W.contains(A.vecmul(w)) for w in W.basis for A in R.matrices())


def restricted_action(R: Representation, W: Subspace) -> dict[str, Matrix]:
    """Action on W in the coordinates of its reduced echelon basis."""
    basis = W.basis
    pivots = W._eb.pivots()
    k = len(basis)
    out = {}
    for name, A in R.action.items():
        rows = []
        for w in basis:
            img = A.vecmul(w)
            # coordinates in an RREF basis are the entries at the pivots
            rows.append({j: img[p] for j, p in enumerate(pivots) if p in img})
        out[name] = Matrix(R.field, k, k, rows)
    return out


def has_invariant_complement(R: Representation, W: Subspace) -> bool:
    """True iff the inclusion W -> R splits as a module map.

    Unknown: a t x k matrix P with A(g) P = P A_W(g) for all g and B P = I,
    where B holds the basis of W.  This is a linear system.
    """
    if W.ambient != R.dim:
        raise DimensionMismatch("subspace lives in a different ambient space")
    if not is_invariant(R, W):
        raise NotInvariant("W is not stable under the action")
    k = W.dim
    if k == 0 or k == R.dim:
        return True
    F = R.field
    t = R.dim
    AW = restricted_action(R, W)
    eqs, rhs = [], []
    for name, A in R.action.items():
        AWt = AW[name].transpose()
        for i in range(t):
            for j in range(k):
                eq: Vector = {}
                for l, a in A.rows[i].items():
                    eq[l * k + j] = a
                for l, b in AWt.rows[j].items():
                    idx = i * k + l
                    s = eq.get(idx)
                    s = -b if s is None else s - b
                    if s:
                        eq[idx] = s
                    else:
                        eq.pop(idx, None)
                if eq:
                    eqs.append(eq)
                    rhs.append(F.zero)
    for r, w in enumerate(W.basis):
        for j in range(k):
            eqs.append({l * k + j: c for l, c in w.items()})
            rhs.append(F.one if r == j else F.zero)
    return solve_affine(eqs, rhs, t * k, F) is not None


@dataclass
class CommutantAlgebra:
    rep: Representation
    basis: list[Matrix]
    _radical: list[Matrix] | None = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, M: Matrix) -> bool:
        S = Subspace(self.rep.field, self.rep.dim**2, [B.flatten() for B in self.basis])
        return S.contains(M.flatten())

    def is_closed(self) -> bool:
        S = Subspace(self.rep.field, self.rep.dim**2, [B.flatten() for B in self.basis])
        return all(S.contains((X @ Y).flatten()) for X in self.basis for Y in self.basis)

    @property
    def radical(self) -> list[Matrix]:
        if self._radical is None:
            self._radical = radical_of_commutant(self)
        return self._radical


def commutant(R: Representation) -> CommutantAlgebra:
    return CommutantAlgebra(R, intertwiners(R, R))


def _check_characteristic(F, t):
    p = F.characteristic
    if p and p <= t:
        raise BadCharacteristic(f"trace-form radical needs characteristic 0 or > {t}; got {p}")


def trace_radical(F, t: int, basis: list[Matrix]) -> list[Matrix]:
    """{x in span(basis) : tr(x y) = 0 for all y in span(basis)}."""
    _check_characteristic(F, t)
    n = len(basis)
    gram = []
    for i in range(n):
        row = {}
        for j in range(n):
            v = (basis[i] @ basis[j]).trace()
            if v:
                row[j] = v
        gram.append(row)
    out = []
    for coeffs in nullspace(gram, n, F):
        M = Matrix.zeros(F, t)
        for j, c in coeffs.items():
            M = M + basis[j].scale(c)
        out.append(M)
    return out


def radical_of_commutant(C: CommutantAlgebra) -> list[Matrix]:
    return trace_radical(C.rep.field, C.rep.dim, C.basis)


@dataclass
class Certificate:
    kind: str  # "Indecomposable" | "Decomposable" | "Inconclusive"
    witness: Matrix | None = None
    data: dict = field(default_factory=dict)

    def __str__(self):
        return self.kind


def _fitting_idempotent(c: Matrix) -> Matrix | None:
    """Idempotent projecting onto im(c^t) along ker(c^t), if both are nonzero."""
    F = c.field
    t = c.nrows
    power = c
    rank = power.rank()
    while True:
        nxt = power @ c
        r = nxt.rank()
        if r == rank:
            break
        power, rank = nxt, r
    if rank in (0, t):
        return None
    image = EchelonBasis(F, t)
    for row in power.rows:
        image.insert(row)
    kernel = nullspace([dict(col) for col in power.transpose().rows], t, F)
    # row vectors v with v * power = 0
    rows = image.basis() + kernel
    T = Matrix(F, t, t, [dict(r) for r in rows])
    D = Matrix(F, t, t, [{i: F.one} if i < rank else {} for i in range(t)])
    return T.inverse() @ D @ T


def indecomposability_certificate(R: Representation, C: CommutantAlgebra | None = None) -> Certificate:
    C = C or commutant(R)
    if C.dim == 1:
        # scalars only: the commutant is a field
        return Certificate("Indecomposable", None, {"dim_commutant": 1, "dim_radical": 0})
    rad = C.radical
    data = {"dim_commutant": C.dim, "dim_radical": len(rad)}
    if C.dim - len(rad) == 1:
        return Certificate("Indecomposable", None, data)
    F = R.field
    I = Matrix.identity(F, R.dim)
    for c in C.basis:
        for cand in (c, I - c):
            if not cand.is_zero() and cand != I and cand @ cand == cand:
                return Certificate("Decomposable", cand, data)
    for c in C.basis:
        e = _fitting_idempotent(c)
        if e is not None:
            return Certificate("Decomposable", e, data)
    return Certificate("Inconclusive", None, data)


def find_proper_submodule(R: Representation) -> Subspace | None:
    """A nonzero proper submodule generated by one basis vector, if any."""
    one = R.field.one
    for i in range(R.dim):
        S = invariant_closure(R, [{i: one}])
        if S.dim < R.dim:
            return S
    return None


def is_semisimple(R: Representation) -> bool:
    if is_absolutely_simple(R):
        return True
    cert = indecomposability_certificate(R)
    if cert.kind == "Indecomposable" and find_proper_submodule(R) is not None:
        return False
    # the image algebra is semisimple iff its trace-form radical vanishes
    A = generated_algebra_basis(R)
    return not trace_radical(R.field, R.dim, A)


def null_space_dim(A: Matrix) -> int:
    """Dimension of {v : v A = 0}."""
    return A.nrows - A.rank()
