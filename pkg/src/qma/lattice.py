"""Integer matrix normal forms and PI degrees of quantum affine spaces.

The PI degree of O_q(K^n) with q_ij = q^{h_ij} is sqrt(h), where h is the size
of the image of Z^n -> Z^n -> (Z/m)^n under H.  The image size is read off the
Smith normal form: h = prod_i m / gcd(d_i, m).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import BadParams, NotAPerfectSquare

IntMatrix = list  # list[list[int]]


@dataclass
class SmithForm:
    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    @property
    def invariant_factors(self) -> list[int]:
        return [self.D[i][i] for i in range(min(len(self.D), len(self.D[0]) if self.D else 0))]


def identity_matrix(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A: IntMatrix, B: IntMatrix) -> IntMatrix:
    cols = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in A]


def int_det(A: IntMatrix) -> int:
    """Determinant by fraction-free (Bareiss) elimination."""
    n = len(A)
    M = [list(r) for r in A]
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k]), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1] if n else 1


def smith_normal_form(A: IntMatrix) -> SmithForm:
    """U, D, V with U*A*V = D diagonal, d_1 | d_2 | ..., d_i >= 0.

    Pivot rule: smallest nonzero absolute value in the remaining block, first
    in row-major order.  Deterministic for a fixed input.
    """
    rows = len(A)
    cols = len(A[0]) if rows else 0
    D = [list(map(int, r)) for r in A]
    U = identity_matrix(rows)
    V = identity_matrix(cols)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (D, V):
            for r in M:
                r[i], r[j] = r[j], r[i]

    def add_row(dst, src, f):  # row_dst += f * row_src
        for M in (D, U):
            M[dst] = [a + f * b for a, b in zip(M[dst], M[src])]

    def add_col(dst, src, f):  # col_dst += f * col_src
        for M in (D, V):
            for r in M:
                r[dst] += f * r[src]

    for t in range(min(rows, cols)):
        while True:
            best = None
            for i in range(t, rows):
                for j in range(t, cols):
                    if D[i][j] and (best is None or abs(D[i][j]) < abs(D[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            p = D[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // p))
                    dirty = dirty or D[i][t] != 0
            for j in range(t + 1, cols):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // p))
                    dirty = dirty or D[t][j] != 0
            if dirty:
                continue
            bad = next(
                ((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if D[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
    return SmithForm(U, D, V)


def image_cardinality_mod(H: IntMatrix, m: int) -> int:
    """|image of Z^n --H--> Z^n --> (Z/m)^n|."""
    n = len(H)
    if m < 2:
        raise BadParams("m must be >= 2")
    if any(len(r) != n for r in H):
        raise BadParams("H must be square")
    snf = smith_normal_form(H)
    h = 1
    for i in range(n):
        h *= m // math.gcd(snf.D[i][i], m)
    return h


def pi_degree(H: IntMatrix, m: int) -> int:
    h = image_cardinality_mod(H, m)
    r = math.isqrt(h)
    if r * r != h:
        raise NotAPerfectSquare(f"image cardinality {h} is not a square; is H antisymmetric?")
    return r


def pi_degree_dd_closed_form(n: int, m: int) -> int:
    return m ** (n * n // 2) if n % 2 == 0 else m ** ((n * n - 1) // 2)


def pi_degree_dd(n: int, m: int) -> int:
    """PI degree of Mat_n(q) via the exponent matrix of its Ore tower."""
    from .ncalg import builtin_presentation
    from .scalar import make_field
    from .structure import quasipolynomial_matrix

    if n < 1 or m < 2:
        raise BadParams("need n >= 1 and m >= 2")
    P = builtin_presentation("dd", make_field("cyclotomic", m), n=n)
    return pi_degree(quasipolynomial_matrix(P), m)


def parse_matrix(text: str) -> IntMatrix:
    """``rows cols`` header followed by whitespace-separated integer rows."""
    tokens = text.split()
    if len(tokens) < 2:
        raise BadParams("matrix file needs a 'rows cols' header")
    try:
        rows, cols = int(tokens[0]), int(tokens[1])
        vals = [int(t) for t in tokens[2:]]
    except ValueError as exc:
        raise BadParams(f"non-integer entry in matrix file: {exc}") from None
    if rows <= 0 or cols <= 0 or len(vals) != rows * cols:
        raise BadParams(f"expected {rows}x{cols} entries, found {len(vals)}")
    return [vals[i * cols : (i + 1) * cols] for i in range(rows)]


def format_matrix(A: IntMatrix) -> str:
    lines = [f"{len(A)} {len(A[0]) if A else 0}"]
    lines += [" ".join(str(x) for x in row) for row in A]
    return "\n".join(lines) + "\n"
