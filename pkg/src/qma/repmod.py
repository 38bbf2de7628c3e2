"""Explicit finite-dimensional right modules over Mat_2(q) and A_q(M_2).

Vectors are rows and a word g1 g2 ... gk acts by A(g1) A(g2) ... A(gk).
Each constructor returns a :class:`Representation` whose matrices follow the
module's action table entry by entry.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field, fields
from pathlib import Path

from .errors import BadParams, DimensionMismatch, ZeroParameter
from .linalg import EchelonBasis, Matrix, Vector, nullspace
from .ncalg import NCPoly, Presentation, builtin_presentation
from .scalar import Backend, FieldContext, Scalar, make_field, parse_scalar, random_scalar
from .structure import rea_order

FAMILIES = ("dd-n1", "dd-n2", "dd-verma", "rea-n1", "rea-n2", "rea-n3", "rea-verma")


@dataclass(eq=False)
class Representation:
    presentation: Presentation
    action: dict[str, Matrix]
    basis_labels: list[str]
    family: str = "custom"
    params: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)
    _words: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        t = len(self.basis_labels)
        for name in self.presentation.names:
            A = self.action.get(name)
            if A is None:
                raise BadParams(f"no matrix for generator {name}")
            if A.shape != (t, t):
                raise DimensionMismatch(f"{name} matrix is {A.shape}, expected {(t, t)}")

    @property
    def field(self) -> FieldContext:
        return self.presentation.field

    @property
    def dim(self) -> int:
        return len(self.basis_labels)

    def matrices(self) -> list[Matrix]:
        return [self.action[nm] for nm in self.presentation.names]

    def word_matrix(self, word) -> Matrix:
        word = tuple(word)
        M = self._words.get(word)
        if M is None:
            if not word:
                M = Matrix.identity(self.field, self.dim)
            else:
                M = self.word_matrix(word[:-1]) @ self.action[self.presentation.names[word[-1]]]
            self._words[word] = M
        return M

    def matrix_of(self, x: NCPoly) -> Matrix:
        out = Matrix.zeros(self.field, self.dim)
        for w, c in x.terms.items():
            out = out + self.word_matrix(w).scale(c)
        return out


# -- parameter records -----------------------------------------------------


def _require_nonzero(rec, names):
    for nm in names:
        if not getattr(rec, nm):
            raise ZeroParameter(f"{nm} must be nonzero")


@dataclass(frozen=True)
class DDN1Params:
    alpha: Scalar
    beta: Scalar
    lambda1: Scalar
    lambda2: Scalar

    def __post_init__(self):
        _require_nonzero(self, ("alpha", "beta", "lambda1", "lambda2"))


@dataclass(frozen=True)
class DDN2Params:
    beta: Scalar
    gamma: Scalar
    lambda2: Scalar

    def __post_init__(self):
        _require_nonzero(self, ("beta", "lambda2"))


@dataclass(frozen=True)
class DDVermaParams:
    lambda1: Scalar
    lambda2: Scalar
    p: int = 1

    def __post_init__(self):
        _require_nonzero(self, ("lambda1", "lambda2"))
        if self.p < 1:
            raise BadParams("p must be >= 1")


@dataclass(frozen=True)
class REAN1Params:
    beta: Scalar
    lambda1: Scalar
    lambda2: Scalar
    lambda3: Scalar

    def __post_init__(self):
        _require_nonzero(self, ("beta", "lambda2"))


@dataclass(frozen=True)
class REAN2Params:
    alpha: Scalar
    lambda1: Scalar
    lambda2: Scalar
    lambda3: Scalar

    def __post_init__(self):
        _require_nonzero(self, ("alpha", "lambda2"))


@dataclass(frozen=True)
class REAN3Params:
    lambda1: Scalar
    lambda2: Scalar

    def __post_init__(self):
        _require_nonzero(self, ("lambda2",))


@dataclass(frozen=True)
class REAVermaParams:
    lambda1: Scalar
    lambda2: Scalar
    p: int = 1

    def __post_init__(self):
        _require_nonzero(self, ("lambda1", "lambda2"))
        if self.p < 1:
            raise BadParams("p must be >= 1")


PARAM_TYPES = {
    "dd-n1": DDN1Params,
    "dd-n2": DDN2Params,
    "dd-verma": DDVermaParams,
    "rea-n1": REAN1Params,
    "rea-n2": REAN2Params,
    "rea-n3": REAN3Params,
    "rea-verma": REAVermaParams,
}

# parameters that may be zero
_MAY_VANISH = {"gamma", "lambda3"}
_MAY_VANISH_BY_FAMILY = {"rea-n1": {"lambda1"}, "rea-n2": {"lambda1"}, "rea-n3": {"lambda1"}}


def _param_dict(params) -> dict:
    return {f.name: getattr(params, f.name) for f in fields(params)}


class _Builder:
    def __init__(self, F: FieldContext, names, dim: int):
        self.F = F
        self.dim = dim
        self.rows = {nm: [{} for _ in range(dim)] for nm in names}

    def put(self, gen, i, j, c):
        c = self.F.coerce(c)
        if c:
            self.rows[gen][i][j] = c

    def matrices(self):
        return {g: Matrix(self.F, self.dim, self.dim, r) for g, r in self.rows.items()}


# -- Mat_2(q) families -----------------------------------------------------


def dd_simple_n1(F: FieldContext, P: DDN1Params) -> Representation:
    m = F.m
    q = F.q_pow
    alpha, beta, l1, l2 = P.alpha, P.beta, P.lambda1, P.lambda2
    Pr = builtin_presentation("dd2", F)
    B = _Builder(F, Pr.names, m * m)

    def e(a, b):
        return a * m + b

    for a in range(m):
        for b in range(m):
            i = e(a, b)
            if a < m - 1:
                B.put("Z11", i, e(a + 1, b), q(b))
            else:
                B.put("Z11", i, e(0, b), q(b) * alpha)
            if b > 0:
                B.put("Z12", i, e(a, b - 1), q(b - a) * l2)
            else:
                B.put("Z12", i, e(a, m - 1), beta.inv() * l2 * q(-a))
            if b < m - 1:
                B.put("Z21", i, e(a, b + 1), 1)
            else:
                B.put("Z21", i, e(a, 0), beta)
            if a > 0:
                B.put("Z22", i, e(a - 1, b), l1 + q(1) * l2 - q(1) * (1 - q(-a)) * l2)
            else:
                B.put("Z22", i, e(m - 1, b), alpha.inv() * (l1 + q(1) * l2))
    labels = [f"e({a},{b})" for a in range(m) for b in range(m)]
    return Representation(Pr, B.matrices(), labels, "dd-n1", _param_dict(P))


def dd_simple_n2(F: FieldContext, P: DDN2Params) -> Representation:
    """Case alpha = 0 with the offset r fixed to 0."""
    m = F.m
    q = F.q_pow
    beta, gamma, l2 = P.beta, P.gamma, P.lambda2
    Pr = builtin_presentation("dd2", F)
    B = _Builder(F, Pr.names, m * m)

    def e(a, b):
        return a * m + b

    for a in range(m):
        for b in range(m):
            i = e(a, b)
            if a > 0:
                B.put("Z11", i, e(a - 1, b), q(b) * (q(a) - 1) * l2)
            if b > 0:
                B.put("Z12", i, e(a, b - 1), q(a + b) * l2)
            else:
                B.put("Z12", i, e(a, m - 1), beta.inv() * q(a) * l2)
            if b < m - 1:
                B.put("Z21", i, e(a, b + 1), 1)
            else:
                B.put("Z21", i, e(a, 0), beta)
            if a < m - 1:
                B.put("Z22", i, e(a + 1, b), 1)
            else:
                B.put("Z22", i, e(0, b), gamma)
    labels = [f"e({a},{b})" for a in range(m) for b in range(m)]
    return Representation(Pr, B.matrices(), labels, "dd-n2", _param_dict(P))


def dd_verma_quotient(F: FieldContext, P: DDVermaParams) -> Representation:
    """Q_{p,m}: basis f(a,b), 0 <= a < m, 0 <= b < p*m, ordered by (a,b)."""
    m = F.m
    q = F.q_pow
    l1, l2, p = P.lambda1, P.lambda2, P.p
    top = p * m
    Pr = builtin_presentation("dd2", F)
    B = _Builder(F, Pr.names, m * top)

    def f(a, b):
        return a * top + b

    for a in range(m):
        for b in range(top):
            i = f(a, b)
            if b > 0:
                c = l1 * q(a) * (q(b) - 1)
                if a < m - 1:
                    B.put("Z11", i, f(a + 1, b - 1), c)
                else:
                    B.put("Z11", i, f(0, b - 1), c * l2)
            B.put("Z12", i, i, q(a + b) * l1)
            if a < m - 1:
                B.put("Z21", i, f(a + 1, b), 1)
            else:
                B.put("Z21", i, f(0, b), l2)
            if b < top - 1:
                B.put("Z22", i, f(a, b + 1), 1)
    labels = [f"f({a},{b})" for a in range(m) for b in range(top)]
    return Representation(Pr, B.matrices(), labels, "dd-verma", _param_dict(P))


# -- A_q(M_2) families -----------------------------------------------------


def rea_u11_eigen(F, l1, l2, r):
    """Eigenvalue of u11 on v u21^r: l1 + q^-2 (1 - q^2r) l2."""
    q = F.q_pow
    return l1 + q(-2) * (1 - q(2 * r)) * l2


def rea_c(F, l1, l2, r, l3=None):
    """c_r = [l3 +] q^-2 (q^2r - 1) l1 l2 + (q^2r - q^4r) q^-4 l2^2."""
    q = F.q_pow
    c = q(-2) * (q(2 * r) - 1) * l1 * l2 + (q(2 * r) - q(4 * r)) * q(-4) * l2 * l2
    return c if l3 is None else l3 + c


def _rea_u21_chain(F, Pr, dim, l1, l2, u12_coeff, label):
    """Shared shape of the u21-string modules: basis x u21^r, 0 <= r < dim."""
    q = F.q_pow
    B = _Builder(F, Pr.names, dim)
    for r in range(dim):
        B.put("u11", r, r, rea_u11_eigen(F, l1, l2, r))
        B.put("u22", r, r, q(2 * r) * l2)
        if r > 0:
            B.put("u12", r, r - 1, u12_coeff(r))
        if r < dim - 1:
            B.put("u21", r, r + 1, 1)
    return B, [f"{label}({r})" for r in range(dim)]


def rea_n1(F: FieldContext, P: REAN1Params) -> Representation:
    n = rea_order(F.m)
    beta, l1, l2, l3 = P.beta, P.lambda1, P.lambda2, P.lambda3
    Pr = builtin_presentation("rea2", F)
    B, labels = _rea_u21_chain(F, Pr, n, l1, l2, lambda r: rea_c(F, l1, l2, r, l3), "v")
    B.put("u21", n - 1, 0, beta)
    B.put("u12", 0, n - 1, beta.inv() * l3)
    R = Representation(Pr, B.matrices(), labels, "rea-n1", _param_dict(P))
    # u12^n is central; record the scalar it induces on v
    u12n = R.matrix_of(Pr.x("u12") ** n)
    R.meta["u12^n"] = str(u12n[0, 0])
    return R


def rea_n2_coefficients(F: FieldContext, P: REAN2Params) -> tuple[list, list]:
    """(mu, d): u11 eigenvalues of w_r and the u21 coefficients w_r -> d_r w_{r-1}.

    d[0] is the wrap coefficient before the 1/alpha factor, d[1] = lambda3.
    """
    n = rea_order(F.m)
    q = F.q_pow
    l1, l2, l3 = P.lambda1, P.lambda2, P.lambda3
    mu = [l1 + q(-2) * (q(2 * r) - 1) * q(-2 * r) * l2 for r in range(n)]
    d = [None, l3]
    for k in range(1, n):
        d.append(d[k] - (q(-2) - 1) * (q(-4 * k) * l2 * l2 - mu[k] * q(-2 * k) * l2))
    d[0] = d[n]
    return mu, d[:n]


def rea_n2(F: FieldContext, P: REAN2Params) -> Representation:
    """Basis w_r = v u12^r, 0 <= r < n."""
    n = rea_order(F.m)
    q = F.q_pow
    alpha, l2 = P.alpha, P.lambda2
    Pr = builtin_presentation("rea2", F)
    mu, d = rea_n2_coefficients(F, P)
    B = _Builder(F, Pr.names, n)
    for r in range(n):
        B.put("u11", r, r, mu[r])
        B.put("u22", r, r, q(-2 * r) * l2)
        if r < n - 1:
            B.put("u12", r, r + 1, 1)
        else:
            B.put("u12", r, 0, alpha)
        if r > 0:
            B.put("u21", r, r - 1, d[r])
        else:
            B.put("u21", 0, n - 1, alpha.inv() * d[0])
    labels = [f"w({r})" for r in range(n)]
    return Representation(Pr, B.matrices(), labels, "rea-n2", _param_dict(P))


def rea_n3_length(F: FieldContext, l1, l2) -> int:
    n = rea_order(F.m)
    for s in range(1, n):
        if l1 == F.q_pow(2 * s - 2) * l2:
            return s
    return n


def rea_n3(F: FieldContext, P: REAN3Params) -> Representation:
    l1, l2 = P.lambda1, P.lambda2
    s = rea_n3_length(F, l1, l2)
    Pr = builtin_presentation("rea2", F)
    B, labels = _rea_u21_chain(F, Pr, s, l1, l2, lambda r: rea_c(F, l1, l2, r), "w")
    R = Representation(Pr, B.matrices(), labels, "rea-n3", _param_dict(P))
    R.meta["s"] = s
    return R


def rea_verma_quotient(F: FieldContext, P: REAVermaParams) -> Representation:
    """Q_{p,n}: basis f(r), 0 <= r < p*n."""
    n = rea_order(F.m)
    l1, l2 = P.lambda1, P.lambda2
    Pr = builtin_presentation("rea2", F)
    B, labels = _rea_u21_chain(F, Pr, P.p * n, l1, l2, lambda r: rea_c(F, l1, l2, r), "f")
    return Representation(Pr, B.matrices(), labels, "rea-verma", _param_dict(P))


CONSTRUCTORS = {
    "dd-n1": dd_simple_n1,
    "dd-n2": dd_simple_n2,
    "dd-verma": dd_verma_quotient,
    "rea-n1": rea_n1,
    "rea-n2": rea_n2,
    "rea-n3": rea_n3,
    "rea-verma": rea_verma_quotient,
}


def build(family: str, F: FieldContext, params) -> Representation:
    if family not in CONSTRUCTORS:
        raise BadParams(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
    if isinstance(params, dict):
        params = PARAM_TYPES[family](**params)
    return CONSTRUCTORS[family](F, params)


def random_params(family: str, F: FieldContext, rng: random.Random, p: int = 1):
    """Pseudo-random parameter record; optional parameters may come out zero."""
    cls = PARAM_TYPES[family]
    vanish = _MAY_VANISH | _MAY_VANISH_BY_FAMILY.get(family, set())
    kw = {}
    for f in fields(cls):
        if f.name == "p":
            kw["p"] = p
        else:
            kw[f.name] = random_scalar(F, rng, nonzero=f.name not in vanish)
    return cls(**kw)


# -- checks and linear algebra on modules ----------------------------------


def verify_relations(R: Representation) -> list[str]:
    """Violated rules as 'lhs -> rhs' strings; empty means the action is valid."""
    Pr = R.presentation
    bad = []
    for lhs, rule in Pr.rules.items():
        L = R.word_matrix(lhs)
        Rm = R.matrix_of(rule.rhs)
        if L != Rm:
            bad.append(f"{Pr.word_str(lhs)} -> {Pr.format(rule.rhs)}")
    return bad


def act(R: Representation, x: NCPoly, v: Vector) -> Vector:
    if any(not 0 <= k < R.dim for k in v):
        raise DimensionMismatch(f"vector index outside 0..{R.dim - 1}")
    out: Vector = {}
    for w, c in x.terms.items():
        cur = dict(v)
        for g in w:
            cur = R.action[R.presentation.names[g]].vecmul(cur)
            if not cur:
                break
        for k, val in cur.items():
            s = out.get(k)
            s = c * val if s is None else s + c * val
            if s:
                out[k] = s
            else:
                out.pop(k, None)
    return out


def intertwiners(R1: Representation, R2: Representation) -> list[Matrix]:
    """Basis of {M : A1(g) M = M A2(g) for all g}, ordered by free unknown."""
    if R1.presentation.names != R2.presentation.names or R1.field != R2.field:
        return []
    F = R1.field
    t1, t2 = R1.dim, R2.dim
    eqs = []
    for name in R1.presentation.names:
        A1 = R1.action[name]
        A2t = R2.action[name].transpose()
        for i in range(t1):
            a_row = A1.rows[i]
            for j in range(t2):
                eq: Vector = {}
                for k, a in a_row.items():
                    eq[k * t2 + j] = a
                for k, b in A2t.rows[j].items():
                    idx = i * t2 + k
                    s = eq.get(idx)
                    s = -b if s is None else s - b
                    if s:
                        eq[idx] = s
                    else:
                        eq.pop(idx, None)
                if eq:
                    eqs.append(eq)
    return [Matrix.unflatten(F, v, t1, t2) for v in nullspace(eqs, t1 * t2, F)]


def is_isomorphic(R1: Representation, R2: Representation, seed: int = 0, tries: int = 16) -> bool:
    """True iff an invertible intertwiner was found.

    Basis elements are tried first, then random combinations; a False answer
    from the random stage is correct with high probability only.
    """
    if R1.dim != R2.dim or R1.presentation.names != R2.presentation.names:
        return False
    if R1.field != R2.field:
        return False
    basis = intertwiners(R1, R2)
    if not basis:
        return False
    if any(M.is_invertible() for M in basis):
        return True
    if len(basis) == 1:
        return False
    F = R1.field
    rng = random.Random(seed)
    bound = 10**6 if F.characteristic == 0 else F.characteristic - 1
    for _ in range(tries):
        M = Matrix.zeros(F, R1.dim)
        for B in basis:
            M = M + B.scale(rng.randint(1, bound))
        if M.is_invertible():
            return True
    return False


def _is_q_power(ratio, F) -> bool:
    return any(ratio == F.q_pow(e) for e in range(F.m))


def dd_iso_param_check(family: str, params, params2, m: int | None = None) -> bool:
    """Parameter-space isomorphism criterion for the Mat_2(q) families."""
    a = _param_dict(params) if not isinstance(params, dict) else params
    b = _param_dict(params2) if not isinstance(params2, dict) else params2
    F = next(iter(v for v in a.values() if isinstance(v, Scalar))).field
    if m is not None and m != F.m:
        raise BadParams("m does not match the parameter field")

    def qpow_ratio(x, y):
        return _is_q_power(x * y.inv(), F)

    if family == "dd-n1":
        return (
            a["alpha"] == b["alpha"]
            and a["beta"] == b["beta"]
            and qpow_ratio(a["lambda1"], b["lambda1"])
            and qpow_ratio(a["lambda2"], b["lambda2"])
        )
    if family == "dd-n2":
        return a["beta"] == b["beta"] and a["gamma"] == b["gamma"] and qpow_ratio(a["lambda2"], b["lambda2"])
    if family == "dd-verma":
        return a["p"] == b["p"] and a["lambda2"] == b["lambda2"] and qpow_ratio(a["lambda1"], b["lambda1"])
    raise BadParams(f"no parameter criterion for family {family!r}")


def direct_sum(R1: Representation, R2: Representation) -> Representation:
    if R1.presentation.names != R2.presentation.names:
        raise BadParams("direct sum needs a common presentation")
    t1, t2 = R1.dim, R2.dim
    action = {}
    for name in R1.presentation.names:
        rows = [dict(r) for r in R1.action[name].rows]
        rows += [{k + t1: v for k, v in r.items()} for r in R2.action[name].rows]
        action[name] = Matrix(R1.field, t1 + t2, t1 + t2, rows)
    labels = [f"1:{x}" for x in R1.basis_labels] + [f"2:{x}" for x in R2.basis_labels]
    return Representation(R1.presentation, action, labels, "direct-sum", meta={"blocks": [t1, t2]})


def change_basis(R: Representation, T: Matrix) -> Representation:
    """Module on the new basis given by the rows of T: A -> T A T^-1."""
    Ti = T.inverse()
    action = {nm: T @ A @ Ti for nm, A in R.action.items()}
    labels = [f"b{i}" for i in range(R.dim)]
    return Representation(R.presentation, action, labels, R.family, dict(R.params), {"conjugated": True})


# -- JSON I/O --------------------------------------------------------------


def field_from_spec(spec: dict) -> FieldContext:
    backend = spec.get("field", "cyclotomic")
    m = spec.get("m")
    if not isinstance(m, int):
        raise BadParams("parameter file needs an integer 'm'")
    if backend == Backend.PRIME.value:
        if "prime" not in spec:
            raise BadParams("prime backend needs a 'prime' entry")
        return make_field(backend, m, spec["prime"])
    return make_field(backend, m)


def build_from_spec(spec: dict, F: FieldContext | None = None) -> Representation:
    family = spec.get("family")
    if family not in PARAM_TYPES:
        raise BadParams(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
    F = F or field_from_spec(spec)
    raw = spec.get("params", {})
    kw = {}
    for f in fields(PARAM_TYPES[family]):
        if f.name == "p":
            kw["p"] = int(spec.get("p", raw.get("p", 1)))
        elif f.name in raw:
            val = raw[f.name]
            kw[f.name] = parse_scalar(str(val), F)
        else:
            raise BadParams(f"missing parameter {f.name!r} for {family}")
    extra = set(raw) - {f.name for f in fields(PARAM_TYPES[family])}
    if extra:
        raise BadParams(f"unexpected parameters: {', '.join(sorted(extra))}")
    return build(family, F, kw)


def params_to_spec(R: Representation) -> dict:
    F = R.field
    spec = {"family": R.family, "m": F.m}
    if F.backend is Backend.PRIME:
        spec["field"] = "prime"
        spec["prime"] = F.p
    params = {}
    for k, v in R.params.items():
        if k == "p":
            spec["p"] = v
        else:
            params[k] = str(v)
    spec["params"] = params
    return spec


def export_representation(R: Representation) -> dict:
    F = R.field
    out = {
        "algebra": R.presentation.name,
        "field": F.describe(),
        "family": R.family,
        "params": {k: (v if isinstance(v, int) else str(v)) for k, v in R.params.items()},
        "dim": R.dim,
        "basis": list(R.basis_labels),
        "matrices": {nm: [[str(x) for x in row] for row in R.action[nm].to_dense()] for nm in R.presentation.names},
    }
    if R.meta:
        out["meta"] = {k: v for k, v in R.meta.items()}
    return out


def import_representation(data: dict) -> Representation:
    fd = data.get("field", {})
    backend = fd.get("backend", "cyclotomic")
    F = make_field(backend, fd["m"], fd.get("p"))
    Pr = builtin_presentation(data["algebra"], F)
    dim = data["dim"]
    labels = data.get("basis") or [str(i) for i in range(dim)]
    action = {}
    for nm in Pr.names:
        rows = data["matrices"][nm]
        if len(rows) != dim or any(len(r) != dim for r in rows):
            raise DimensionMismatch(f"{nm} matrix is not {dim}x{dim}")
        action[nm] = Matrix.from_dense(F, [[parse_scalar(x, F) for x in r] for r in rows])
    params = {}
    for k, v in data.get("params", {}).items():
        params[k] = v if isinstance(v, int) else parse_scalar(v, F)
    return Representation(Pr, action, labels, data.get("family", "custom"), params, dict(data.get("meta", {})))


def load_json(path) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def load_module(path) -> Representation:
    """Representation from a parameter file or an exported representation."""
    data = load_json(path)
    if "matrices" in data:
        return import_representation(data)
    return build_from_spec(data)


def submodule_basis(R: Representation, labels) -> list[Vector]:
    """Standard basis vectors for the given labels."""
    index = {lab: i for i, lab in enumerate(R.basis_labels)}
    return [{index[lab]: R.field.one} for lab in labels]


def span_dim(F: FieldContext, ambient: int, vectors) -> int:
    eb = EchelonBasis(F, ambient)
    for v in vectors:
        eb.insert(v)
    return eb.dim
