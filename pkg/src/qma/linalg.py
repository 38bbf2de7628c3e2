"""Sparse exact linear algebra over a :class:`~qma.scalar.FieldContext`.

Vectors are ``dict[int, Scalar]`` with no stored zeros.  Matrices keep one such
dict per row, which suits the module actions here: almost every generator acts
by a weighted permutation or shift, so products stay cheap even at dimension
in the hundreds.
"""

from __future__ import annotations

from .errors import DimensionMismatch
from .scalar import FieldContext, Scalar

Vector = dict  # dict[int, Scalar]


def vec_axpy(target: Vector, src: Vector, c: Scalar) -> None:
    """target += c * src, in place."""
    for k, v in src.items():
        s = target.get(k)
        s = c * v if s is None else s + c * v
        if s:
            target[k] = s
        else:
            target.pop(k, None)


def vec_scale(v: Vector, c: Scalar) -> Vector:
    if not c:
        return {}
    return {k: c * x for k, x in v.items()}


class Matrix:
    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field: FieldContext, nrows: int, ncols: int, rows=None):
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        self.rows = rows if rows is not None else [{} for _ in range(nrows)]

    @classmethod
    def zeros(cls, F, nrows, ncols=None) -> Matrix:
        return cls(F, nrows, nrows if ncols is None else ncols)

    @classmethod
    def identity(cls, F, n) -> Matrix:
        return cls(F, n, n, [{i: F.one} for i in range(n)])

    @classmethod
    def from_dense(cls, F, data) -> Matrix:
        nrows = len(data)
        ncols = len(data[0]) if nrows else 0
        rows = []
        for r in data:
            if len(r) != ncols:
                raise DimensionMismatch("ragged matrix")
            rows.append({j: F.coerce(x) for j, x in enumerate(r) if x})
        return cls(F, nrows, ncols, rows)

    @classmethod
    def from_rows(cls, F, rows, ncols) -> Matrix:
        return cls(F, len(rows), ncols, [dict(r) for r in rows])

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def copy(self) -> Matrix:
        return Matrix(self.field, self.nrows, self.ncols, [dict(r) for r in self.rows])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i].get(j, self.field.zero)

    def set(self, i, j, value) -> None:
        value = self.field.coerce(value)
        if value:
            self.rows[i][j] = value
        else:
            self.rows[i].pop(j, None)

    def to_dense(self) -> list[list[Scalar]]:
        z = self.field.zero
        return [[r.get(j, z) for j in range(self.ncols)] for r in self.rows]

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    __hash__ = None

    def is_zero(self) -> bool:
        return not any(self.rows)

    def nnz(self) -> int:
        return sum(len(r) for r in self.rows)

    def __matmul__(self, other: Matrix) -> Matrix:
        if self.ncols != other.nrows:
            raise DimensionMismatch(f"{self.shape} @ {other.shape}")
        orows = other.rows
        out = []
        for r in self.rows:
            acc: Vector = {}
            for k, a in r.items():
                if orows[k]:
                    vec_axpy(acc, orows[k], a)
            out.append(acc)
        return Matrix(self.field, self.nrows, other.ncols, out)

    def _check_same(self, other):
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} vs {other.shape}")

    def __add__(self, other: Matrix) -> Matrix:
        self._check_same(other)
        out = [dict(r) for r in self.rows]
        for acc, r in zip(out, other.rows):
            vec_axpy(acc, r, self.field.one)
        return Matrix(self.field, self.nrows, self.ncols, out)

    def __sub__(self, other: Matrix) -> Matrix:
        self._check_same(other)
        out = [dict(r) for r in self.rows]
        m1 = -self.field.one
        for acc, r in zip(out, other.rows):
            vec_axpy(acc, r, m1)
        return Matrix(self.field, self.nrows, self.ncols, out)

    def __neg__(self) -> Matrix:
        return self.scale(-self.field.one)

    def scale(self, c) -> Matrix:
        c = self.field.coerce(c)
        return Matrix(self.field, self.nrows, self.ncols, [vec_scale(r, c) for r in self.rows])

    def transpose(self) -> Matrix:
        out = [{} for _ in range(self.ncols)]
        for i, r in enumerate(self.rows):
            for j, v in r.items():
                out[j][i] = v
        return Matrix(self.field, self.ncols, self.nrows, out)

    def vecmul(self, v: Vector) -> Vector:
        """Row vector times matrix."""
        acc: Vector = {}
        for k, a in v.items():
            if self.rows[k]:
                vec_axpy(acc, self.rows[k], a)
        return acc

    def trace(self) -> Scalar:
        t = self.field.zero
        for i, r in enumerate(self.rows):
            x = r.get(i)
            if x is not None:
                t = t + x
        return t

    def flatten(self) -> Vector:
        n = self.ncols
        return {i * n + j: v for i, r in enumerate(self.rows) for j, v in r.items()}

    @classmethod
    def unflatten(cls, F, vec: Vector, nrows, ncols) -> Matrix:
        rows = [{} for _ in range(nrows)]
        for k, v in vec.items():
            rows[k // ncols][k % ncols] = v
        return cls(F, nrows, ncols, rows)

    def rank(self) -> int:
        eb = EchelonBasis(self.field, self.ncols)
        for r in self.rows:
            eb.insert(r)
        return eb.dim

    def is_invertible(self) -> bool:
        return self.nrows == self.ncols and self.rank() == self.nrows

    def inverse(self) -> Matrix:
        """Gauss-Jordan on [A | I]; raises ZeroDivisionError if singular."""
        n = self.nrows
        if n != self.ncols:
            raise DimensionMismatch("inverse of a non-square matrix")
        eb = EchelonBasis(self.field, 2 * n)
        for i, r in enumerate(self.rows):
            row = dict(r)
            row[n + i] = self.field.one
            eb.insert(row)
        if eb.pivots()[:n] != list(range(n)):
            raise ZeroDivisionError("matrix is singular")
        out = [{k - n: v for k, v in eb.rows[i].items() if k >= n} for i in range(n)]
        return Matrix(self.field, n, n, out)

    def __repr__(self):
        return f"Matrix({self.nrows}x{self.ncols}, nnz={self.nnz()})"


class EchelonBasis:
    """Incrementally maintained reduced row echelon basis of a subspace.

    Every stored row has a 1 at its pivot (its leading column) and zeros at all
    other pivots, so the row set is the unique RREF of the span.
    """

    def __init__(self, field: FieldContext, ambient: int):
        self.field = field
        self.ambient = ambient
        self.rows: dict[int, Vector] = {}

    @property
    def dim(self) -> int:
        return len(self.rows)

    def reduce(self, v: Vector) -> Vector:
        r = dict(v)
        for p in [k for k in v if k in self.rows]:
            c = r.get(p)
            if c:
                vec_axpy(r, self.rows[p], -c)
        return r

    def contains(self, v: Vector) -> bool:
        return not self.reduce(v)

    def insert(self, v: Vector) -> Vector | None:
        """Add ``v`` to the span; return its reduced form, or ``None`` if dependent."""
        r = self.reduce(v)
        if not r:
            return None
        p = min(r)
        inv = r[p].inv()
        r = {k: x * inv for k, x in r.items()}
        for row in self.rows.values():
            c = row.get(p)
            if c:
                vec_axpy(row, r, -c)
        self.rows[p] = r
        return r

    def pivots(self) -> list[int]:
        return sorted(self.rows)

    def basis(self) -> list[Vector]:
        return [self.rows[p] for p in self.pivots()]


def nullspace(equations, ncols: int, F: FieldContext) -> list[Vector]:
    """Basis of {x : e . x = 0 for every equation row e}, ordered by free column."""
    eb = EchelonBasis(F, ncols)
    for e in equations:
        if e:
            eb.insert(e)
    pivots = eb.rows
    free = [c for c in range(ncols) if c not in pivots]
    # column -> pivot rows touching it
    touching: dict[int, list[int]] = {}
    for p, row in pivots.items():
        for c in row:
            if c != p:
                touching.setdefault(c, []).append(p)
    out = []
    for f in free:
        vec = {f: F.one}
        for p in touching.get(f, ()):
            vec[p] = -pivots[p][f]
        out.append(vec)
    return out


def solve_affine(equations, rhs, ncols: int, F: FieldContext) -> Vector | None:
    """One solution of e_i . x = rhs_i for all i, or ``None`` if infeasible."""
    aug = ncols
    eb = EchelonBasis(F, ncols + 1)
    for e, b in zip(equations, rhs):
        row = dict(e)
        b = F.coerce(b)
        if b:
            row[aug] = b
        if row:
            eb.insert(row)
    if aug in eb.rows:
        return None
    sol = {}
    for p, row in eb.rows.items():
        b = row.get(aug)
        if b:
            sol[p] = b
    return sol


class Subspace:
    """Subspace of K^ambient held in canonical reduced echelon form."""

    def __init__(self, field: FieldContext, ambient: int, vectors=()):
        self.field = field
        self.ambient = ambient
        self._eb = EchelonBasis(field, ambient)
        for v in vectors:
            self.add(v)

    def add(self, v: Vector) -> bool:
        if any(not 0 <= k < self.ambient for k in v):
            raise DimensionMismatch("vector outside the ambient space")
        return self._eb.insert(v) is not None

    @property
    def dim(self) -> int:
        return self._eb.dim

    @property
    def basis(self) -> list[Vector]:
        return self._eb.basis()

    def contains(self, v: Vector) -> bool:
        return self._eb.contains(v)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient == other.ambient and self._eb.rows == other._eb.rows

    __hash__ = None

    def issubset(self, other: Subspace) -> bool:
        return all(other.contains(v) for v in self.basis)

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient})"


def basis_vector(i: int, F: FieldContext) -> Vector:
    return {i: F.one}


def dense_to_vec(values, F: FieldContext) -> Vector:
    return {i: F.coerce(x) for i, x in enumerate(values) if x}


def vec_to_dense(v: Vector, n: int, F: FieldContext) -> list[Scalar]:
    z = F.zero
    return [v.get(i, z) for i in range(n)]
