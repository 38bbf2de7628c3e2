"""Structural identities of Mat_2(q) and A_q(M_2): centrality, q-normality,
power identities, distinguished elements, and the commutation-exponent matrix
obtained by dropping the derivation parts of an Ore tower."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BadParams, NotOreTower, NotQNormal
from .ncalg import NCPoly, Presentation

__all__ = [
    "DistinguishedElement",
    "rea_order",
    "dd_detq",
    "rea_detq",
    "rea_trq",
    "central_power",
    "distinguished",
    "is_central",
    "q_normal_profile",
    "power_identity",
    "verify_power_identity",
    "quasipolynomial_matrix",
    "q_exponent",
]


def rea_order(m: int) -> int:
    """Order of q^2: m for odd m, m/2 for even m."""
    return m if m % 2 else m // 2


@dataclass(frozen=True)
class DistinguishedElement:
    name: str
    value: NCPoly


def _gens(P: Presentation, *names):
    return [P.x(nm) for nm in names]


def dd_detq(P: Presentation) -> NCPoly:
    z11, z12, z21, z22 = _gens(P, "Z11", "Z12", "Z21", "Z22")
    return P.normalize(z11 * z22 - z12 * z21)


def rea_detq(P: Presentation) -> NCPoly:
    u11, u12, u21, u22 = _gens(P, "u11", "u12", "u21", "u22")
    return P.normalize(u11 * u22 - P.field.q_pow(2) * (u12 * u21))


def rea_trq(P: Presentation) -> NCPoly:
    u11, u22 = _gens(P, "u11", "u22")
    return P.normalize(u11 + P.field.q_pow(-2) * u22)


def central_power(P: Presentation, gen: str, exponent: int) -> NCPoly:
    return P.normalize(P.x(gen) ** exponent)


def distinguished(P: Presentation, name: str, gen: str | None = None, exponent: int | None = None):
    makers = {"dd_detq": dd_detq, "rea_detq": rea_detq, "rea_trq": rea_trq}
    if name == "central_power":
        if gen is None:
            raise BadParams("central_power needs a generator")
        if exponent is None:
            m = P.field.m
            exponent = m if P.names[0].startswith("Z") else rea_order(m)
        return DistinguishedElement(f"{gen}^{exponent}", central_power(P, gen, exponent))
    if name not in makers:
        raise BadParams(f"unknown distinguished element {name!r}")
    return DistinguishedElement(name, makers[name](P))


def is_central(z: NCPoly, P: Presentation) -> bool:
    """True iff z commutes with every generator modulo the relations."""
    for i in range(P.ngens):
        g = NCPoly.monomial(P.field, (i,))
        if P.normalize(z * g - g * z):
            return False
    return True


def q_normal_profile(z: NCPoly, P: Presentation) -> dict[str, int]:
    """Exponents e_g in Z/m with z*g = q^{e_g} g*z for each generator g."""
    F = P.field
    zn = P.normalize(z)
    profile = {}
    for i, name in enumerate(P.names):
        g = NCPoly.monomial(F, (i,))
        zg = P.normalize(zn * g)
        gz = P.normalize(g * zn)
        for e in range(F.m):
            if not P.normalize(zg - F.q_pow(e) * gz):
                profile[name] = e
                break
        else:
            raise NotQNormal(f"no power of q relates z*{name} and {name}*z")
    return profile


def power_identity(
    family: str, index: str, r: int, P: Presentation, corrected: bool = False
) -> tuple[NCPoly, NCPoly]:
    """(lhs, rhs) of a power identity at exponent r.

    ``dd``: i)  Z22 Z11^r = Z11^r Z22 + (1 - q^-r) Z21 Z12 Z11^(r-1)
            ii) Z11 Z22^r = Z22^r Z11 + (1 - q^r) Z12 Z21 Z22^(r-1)
    ``rea``: the four u12/u21 power commutation formulas.

    The commonly quoted form of rea (iii) carries q^-2 (1 - q^2r) on the
    u22^2 u21^(r-1) term; it only holds when q^(2r-2) = 1.  With
    ``corrected=True`` the coefficient q^(2r-4) (1 - q^2r) obtained by
    induction on r is used instead.
    """
    if r < 1:
        raise BadParams("exponent r must be >= 1")
    F = P.field
    q = F.q_pow
    if family == "dd":
        z11, z12, z21, z22 = _gens(P, "Z11", "Z12", "Z21", "Z22")
        if index == "i":
            lhs = z22 * z11**r
            rhs = z11**r * z22 + (1 - q(-r)) * (z21 * z12 * z11 ** (r - 1))
        elif index == "ii":
            lhs = z11 * z22**r
            rhs = z22**r * z11 + (1 - q(r)) * (z12 * z21 * z22 ** (r - 1))
        else:
            raise BadParams(f"dd identities are i, ii; got {index!r}")
        return lhs, rhs
    if family == "rea":
        u11, u12, u21, u22 = _gens(P, "u11", "u12", "u21", "u22")
        qm2 = q(-2)
        if index == "i":
            lhs = u12**r * u11
            rhs = u11 * u12**r + qm2 * (q(2 * r) - 1) * (u12**r * u22)
        elif index == "ii":
            lhs = u21**r * u11
            rhs = u11 * u21**r + qm2 * (1 - q(2 * r)) * (u22 * u21**r)
        elif index == "iii":
            lhs = u21**r * u12
            rhs = (
                u12 * u21**r
                + qm2 * (q(2 * r) - 1) * (u11 * u22 * u21 ** (r - 1))
                + (1 - q(2 * r)) * (q(2 * r - 4) if corrected else qm2) * (u22 * u22 * u21 ** (r - 1))
            )
        elif index == "iv":
            lhs = u21 * u12**r
            coeff = q(-4) * (1 - q(4 * r) + q(4 * r - 2) - q(2 * r - 2))
            rhs = (
                u12**r * u21
                + (1 - q(-2 * r)) * (u11 * u22 * u12 ** (r - 1))
                + coeff * (u12 ** (r - 1) * u22 * u22)
            )
        else:
            raise BadParams(f"rea identities are i, ii, iii, iv; got {index!r}")
        return lhs, rhs
    raise BadParams(f"unknown identity family {family!r}")


def verify_power_identity(
    family: str, index: str, r: int, P: Presentation, corrected: bool = False
) -> bool:
    lhs, rhs = power_identity(family, index, r, P, corrected)
    return not P.normalize(lhs - rhs)


def q_exponent(c, F) -> int | None:
    """Representative e in (-m/2, m/2] with q^e == c, or None."""
    m = F.m
    for e in range(m):
        if F.q_pow(e) == c:
            return e - m if e > m // 2 else e
    return None


def quasipolynomial_matrix(P: Presentation) -> list[list[int]]:
    """Antisymmetric exponent matrix H with h_ji = e for X_j X_i -> q^e X_i X_j + (erased)."""
    g = P.ngens
    for lhs in P.rules:
        if lhs[0] <= lhs[1]:
            raise NotOreTower(f"rule on {P.word_str(lhs)} is not a descending swap")
    H = [[0] * g for _ in range(g)]
    for j in range(g):
        for i in range(j):
            rule = P.rules.get((j, i))
            if rule is None:
                raise NotOreTower(f"no rule for {P.word_str((j, i))}")
            if rule.swap_exponent is not None:
                e = rule.swap_exponent
            else:
                e = q_exponent(rule.rhs.coefficient((i, j)), P.field)
                if e is None:
                    raise NotOreTower(
                        f"swap coefficient of {P.word_str((j, i))} is not a power of q"
                    )
            H[j][i] = e
            H[i][j] = -e
    return H
