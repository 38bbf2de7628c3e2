"""Noncommutative polynomials, rewriting presentations and PBW normalization.

A :class:`Presentation` is an ordered list of generators plus oriented rewrite
rules ``X_j X_i -> c X_i X_j + correction`` on adjacent pairs.  For the built-in
algebras (Dipper-Donkin ``Mat_n(q)``, the reflection equation algebra
``A_q(M_2)`` and quantum affine spaces) the rules form an iterated Ore tower and
the normal words are exactly the PBW monomials.
"""

from __future__ import annotations

import os
import sys
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import BadParams, BadPresentation, StepCapExceeded, UnknownGenerator
from .expr import add_into, parse_expression
from .scalar import FieldContext, Scalar, make_field, scalar_term_count

Word = tuple  # tuple[int, ...]

DEFAULT_STEP_CAP = 10**6


def default_step_cap() -> int:
    env = os.environ.get("QMA_STEP_CAP")
    if env:
        try:
            cap = int(env)
        except ValueError:
            raise BadParams(f"QMA_STEP_CAP must be an integer, got {env!r}") from None
        if cap <= 0:
            raise BadParams("QMA_STEP_CAP must be positive")
        return cap
    return DEFAULT_STEP_CAP


class NCPoly:
    """Finitely supported map word -> scalar.  Treated as immutable."""

    __slots__ = ("field", "terms")

    def __init__(self, field: FieldContext, terms: dict | None = None):
        self.field = field
        self.terms = {w: c for w, c in (terms or {}).items() if c}

    @classmethod
    def constant(cls, F, c=1) -> NCPoly:
        return cls(F, {(): F.coerce(c)})

    @classmethod
    def monomial(cls, F, word, c=1) -> NCPoly:
        return cls(F, {tuple(word): F.coerce(c)})

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, NCPoly):
            return self.terms == other.terms
        if isinstance(other, int) and other == 0:
            return not self.terms
        return NotImplemented

    __hash__ = None

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            add_into(out, w, c)
        return NCPoly(self.field, out)

    __radd__ = __add__

    def __neg__(self):
        return NCPoly(self.field, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        """Free (unnormalized) product; scalars act coefficientwise."""
        if isinstance(other, NCPoly):
            out: dict = {}
            for u, c in self.terms.items():
                for v, d in other.terms.items():
                    add_into(out, u + v, c * d)
            return NCPoly(self.field, out)
        c = self.field.coerce(other)
        return NCPoly(self.field, {w: x * c for w, x in self.terms.items()})

    def __rmul__(self, other):
        c = self.field.coerce(other)
        return NCPoly(self.field, {w: c * x for w, x in self.terms.items()})

    def __pow__(self, e: int):
        result = NCPoly.constant(self.field, 1)
        for _ in range(e):
            result = result * self
        return result

    def _lift(self, other) -> NCPoly:
        if isinstance(other, NCPoly):
            return other
        return NCPoly.constant(self.field, other)

    def sorted_terms(self) -> list:
        """Terms ordered by (length, lexicographic) word order, ascending."""
        return sorted(self.terms.items(), key=lambda t: (len(t[0]), t[0]))

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=-1)

    def coefficient(self, word) -> Scalar:
        return self.terms.get(tuple(word), self.field.zero)

    def __repr__(self):
        return f"NCPoly({self.sorted_terms()!r})"


@dataclass(frozen=True)
class RewriteRule:
    """``lhs -> rhs`` on a length-2 word.

    ``swap_exponent`` records ``e`` when the rule reads ``X_j X_i -> q^e X_i X_j + ...``
    and the exponent is known exactly from construction.
    """

    lhs: tuple
    rhs: NCPoly
    swap_exponent: int | None = None


@dataclass
class Ambiguity:
    word: tuple
    left: NCPoly
    right: NCPoly


class Presentation:
    """Ordered generators with oriented rewrite rules.  Immutable after construction."""

    def __init__(
        self,
        field: FieldContext,
        names,
        rules,
        name: str = "",
        step_cap: int | None = None,
        normalize_rhs: bool = True,
    ):
        self.field = field
        self.names = tuple(names)
        self.name = name
        self.step_cap = step_cap if step_cap is not None else default_step_cap()
        if len(set(self.names)) != len(self.names):
            raise BadPresentation("generator names must be unique")
        if "q" in self.names:
            raise BadPresentation("'q' is reserved for the root of unity")
        self.index = {nm: i for i, nm in enumerate(self.names)}
        g = len(self.names)
        table: dict[tuple, RewriteRule] = {}
        for rule in rules:
            lhs = tuple(rule.lhs)
            if len(lhs) != 2 or not all(0 <= x < g for x in lhs):
                raise BadPresentation(f"rule lhs must be a pair of generators, got {lhs}")
            if lhs in table:
                raise BadPresentation(f"duplicate rule for {self.word_str(lhs)}")
            table[lhs] = RewriteRule(lhs, rule.rhs, rule.swap_exponent)
        self.rules = table
        self._word_cache: dict = {}
        self._append_cache: dict = {}
        self._confluent: bool | None = None
        if normalize_rhs:
            self._normalize_rule_sides()
        for lhs, rule in self.rules.items():
            if not all(self.is_normal(w) for w in rule.rhs.terms):
                raise BadPresentation(f"rhs of {self.word_str(lhs)} is not in normal form")

    def _normalize_rule_sides(self):
        fixed = {}
        for lhs, rule in self.rules.items():
            fixed[lhs] = RewriteRule(lhs, self._normalize_literal(rule.rhs), rule.swap_exponent)
        self.rules = fixed

    # -- generators and display -------------------------------------------------

    @property
    def ngens(self) -> int:
        return len(self.names)

    def gen(self, name: str) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise UnknownGenerator(name) from None

    def x(self, name: str) -> NCPoly:
        return NCPoly.monomial(self.field, (self.gen(name),))

    def one(self) -> NCPoly:
        return NCPoly.constant(self.field, 1)

    def zero(self) -> NCPoly:
        return NCPoly(self.field)

    def word_str(self, word) -> str:
        if not word:
            return "1"
        parts = []
        i = 0
        while i < len(word):
            j = i
            while j < len(word) and word[j] == word[i]:
                j += 1
            nm = self.names[word[i]]
            parts.append(nm if j - i == 1 else f"{nm}^{j - i}")
            i = j
        return "*".join(parts)

    def format(self, poly: NCPoly) -> str:
        if not poly:
            return "0"
        pieces = []
        for w, c in poly.sorted_terms():
            ws = self.word_str(w)
            cs = str(c)
            multi = scalar_term_count(c) > 1
            neg = cs.startswith("-") and not multi
            if neg:
                cs = cs[1:]
            if not w:
                body = f"({cs})" if multi else cs
            elif cs == "1":
                body = ws
            else:
                body = f"({cs}) {ws}" if multi else f"{cs} {ws}"
            pieces.append((neg, body))
        neg, body = pieces[0]
        out = ("-" if neg else "") + body
        for neg, body in pieces[1:]:
            out += (" - " if neg else " + ") + body
        return out

    def parse(self, text: str) -> NCPoly:
        return self.normalize(self.parse_raw(text))

    def parse_raw(self, text: str) -> NCPoly:
        return NCPoly(self.field, parse_expression(text, self.field, self.index))

    # -- normal forms -------------------------------------------------------------

    def is_normal(self, word) -> bool:
        rules = self.rules
        return not any((word[i], word[i + 1]) in rules for i in range(len(word) - 1))

    def leftmost_redex(self, word) -> int | None:
        rules = self.rules
        for i in range(len(word) - 1):
            if (word[i], word[i + 1]) in rules:
                return i
        return None

    @property
    def confluent(self) -> bool:
        if self._confluent is None:
            self._confluent = not check_confluence(self)
        return self._confluent

    def normalize(self, poly: NCPoly) -> NCPoly:
        """Normal form of ``poly``; idempotent.

        For confluent rule sets the unique normal form is assembled from cached
        per-word reductions; otherwise the literal strategy (leftmost redex of
        the largest reducible word) is applied to the whole polynomial.
        """
        if poly.field != self.field:
            raise BadParams("polynomial lives over a different field")
        if not self.confluent:
            return self._normalize_literal(poly)
        out: dict = {}
        budget = [self.step_cap]
        try:
            for w, c in poly.terms.items():
                for v, d in self._nf_word(w, budget).items():
                    add_into(out, v, c * d)
        except RecursionError:
            raise StepCapExceeded("rewriting recursion too deep") from None
        return NCPoly(self.field, out)

    def _nf_word(self, w, budget) -> dict:
        hit = self._word_cache.get(w)
        if hit is not None:
            return hit
        if len(w) <= 1 or self.is_normal(w):
            result = {w: self.field.one}
        else:
            result: dict = {}
            for u, c in self._nf_word(w[:-1], budget).items():
                for v, d in self._append(u, w[-1], budget).items():
                    add_into(result, v, c * d)
        self._word_cache[w] = result
        return result

    def _append(self, u, g, budget) -> dict:
        # normal form of u*g for a normal word u
        key = (u, g)
        hit = self._append_cache.get(key)
        if hit is not None:
            return hit
        rule = self.rules.get((u[-1], g)) if u else None
        if rule is None:
            result = {u + (g,): self.field.one}
        else:
            budget[0] -= 1
            if budget[0] < 0:
                raise StepCapExceeded(f"more than {self.step_cap} rewrite steps")
            base = u[:-1]
            result = {}
            for v, c in rule.rhs.terms.items():
                cur = {base: self.field.one}
                for letter in v:
                    nxt: dict = {}
                    for x, cx in cur.items():
                        for y, cy in self._append(x, letter, budget).items():
                            add_into(nxt, y, cx * cy)
                    cur = nxt
                for y, cy in cur.items():
                    add_into(result, y, c * cy)
        self._append_cache[key] = result
        return result

    def _normalize_literal(self, poly: NCPoly) -> NCPoly:
        terms = dict(poly.terms)
        pending = {w for w in terms if not self.is_normal(w)}
        steps = 0
        while pending:
            w = max(pending, key=lambda x: (len(x), x))
            pending.discard(w)
            c = terms.pop(w)
            i = self.leftmost_redex(w)
            for v, d in self.rules[(w[i], w[i + 1])].rhs.terms.items():
                nw = w[:i] + v + w[i + 2 :]
                add_into(terms, nw, c * d)
                if nw in terms and not self.is_normal(nw):
                    pending.add(nw)
                else:
                    pending.discard(nw)
            steps += 1
            if steps > self.step_cap:
                raise StepCapExceeded(f"more than {self.step_cap} rewrite steps")
        return NCPoly(self.field, terms)

    def mul(self, *factors) -> NCPoly:
        result = self.one()
        for f in factors:
            result = self.normalize(result * f)
        return result

    def describe(self) -> str:
        lines = [f"algebra {self.name or 'unnamed'}"]
        F = self.field
        if F.p:
            lines.append(f"field prime m={F.m} p={F.p}")
        else:
            lines.append(f"field cyclotomic m={F.m}")
        lines.append("generators " + " < ".join(self.names))
        for lhs in sorted(self.rules):
            lines.append(f"rule {self.word_str(lhs)} -> {self.format(self.rules[lhs].rhs)}")
        return "\n".join(lines)


def normalize(x: NCPoly, P: Presentation) -> NCPoly:
    return P.normalize(x)


def mul(x: NCPoly, y: NCPoly, P: Presentation) -> NCPoly:
    return P.normalize(x * y)


def parse_poly(text: str, P: Presentation) -> NCPoly:
    return P.parse(text)


def check_confluence(P: Presentation) -> list[Ambiguity]:
    """Overlap ambiguities ``abc`` (rules on ``ab`` and ``bc``) whose two reductions differ."""
    F = P.field
    out = []
    for (a, b), r1 in sorted(P.rules.items()):
        for (b2, c), r2 in sorted(P.rules.items()):
            if b2 != b:
                continue
            left = P._normalize_literal(r1.rhs * NCPoly.monomial(F, (c,)))
            right = P._normalize_literal(NCPoly.monomial(F, (a,)) * r2.rhs)
            if left != right:
                out.append(Ambiguity((a, b, c), left, right))
    return out


# -- built-in algebras ------------------------------------------------------------


def _rule(F, lhs, terms: dict, swap=None) -> RewriteRule:
    return RewriteRule(tuple(lhs), NCPoly(F, terms), swap)


def dd_names(n: int) -> list[str]:
    sep = "" if n < 10 else "_"
    return [f"Z{i}{sep}{j}" for i in range(1, n + 1) for j in range(1, n + 1)]


def dd_presentation(F: FieldContext, n: int) -> Presentation:
    """Dipper-Donkin Mat_n(q), generators Z_ij in lexicographic order."""
    if n < 1:
        raise BadParams("dd(n) needs n >= 1")
    idx = {(i, j): (i - 1) * n + (j - 1) for i in range(1, n + 1) for j in range(1, n + 1)}
    one, q = F.one, F.q
    rules = []
    for (i, j), big in idx.items():
        for (s, t), small in idx.items():
            if big <= small:
                continue
            # descending pair Z_ij Z_st with (i,j) > (s,t)
            if i > s and j <= t:
                rules.append(_rule(F, (big, small), {(small, big): q}, 1))
            elif i > s and j > t:
                terms = {(small, big): one}
                add_into(terms, (idx[(s, j)], idx[(i, t)]), q - 1)
                rules.append(_rule(F, (big, small), terms, 0))
            else:
                rules.append(_rule(F, (big, small), {(small, big): one}, 0))
    name = "dd2" if n == 2 else f"dd{n}"
    return Presentation(F, dd_names(n), rules, name=name)


def rea2_presentation(F: FieldContext) -> Presentation:
    """Reflection equation algebra A_q(M_2), order u11 < u12 < u21 < u22."""
    u11, u12, u21, u22 = 0, 1, 2, 3
    one, q2 = F.one, F.q_pow(2)
    qm2 = F.q_pow(-2)
    k = qm2 - 1
    rules = [
        _rule(F, (u22, u11), {(u11, u22): one}, 0),
        _rule(F, (u22, u12), {(u12, u22): q2}, 2),
        _rule(F, (u22, u21), {(u21, u22): qm2}, -2),
        # u11 u12 = u12 u11 + (q^-2 - 1) u12 u22
        _rule(F, (u12, u11), {(u11, u12): one, (u12, u22): -k}, 0),
        # u21 u11 = u11 u21 + (q^-2 - 1) u22 u21
        _rule(F, (u21, u11), {(u11, u21): one, (u22, u21): k}, 0),
        # u21 u12 = u12 u21 + (q^-2 - 1) u22 (u22 - u11)
        _rule(F, (u21, u12), {(u12, u21): one, (u22, u22): k, (u22, u11): -k}, 0),
    ]
    return Presentation(F, ["u11", "u12", "u21", "u22"], rules, name="rea2")


def qaffine_presentation(F: FieldContext, H, names=None) -> Presentation:
    """Quantum affine space x_i x_j = q^{h_ij} x_j x_i."""
    n = len(H)
    if any(len(row) != n for row in H):
        raise BadParams("exponent matrix must be square")
    for i in range(n):
        if H[i][i] != 0:
            raise BadParams("exponent matrix must have zero diagonal")
        for j in range(n):
            if H[i][j] != -H[j][i]:
                raise BadParams("exponent matrix must be antisymmetric")
    names = list(names) if names else [f"x{i + 1}" for i in range(n)]
    rules = [
        _rule(F, (j, i), {(i, j): F.q_pow(H[j][i])}, H[j][i])
        for j in range(n)
        for i in range(j)
    ]
    return Presentation(F, names, rules, name="qaffine")


@lru_cache(maxsize=None)
def _cached_builtin(name, F, n, H):
    if name == "dd":
        return dd_presentation(F, n)
    if name == "dd2":
        return dd_presentation(F, 2)
    if name == "rea2":
        return rea2_presentation(F)
    if name == "qaffine":
        return qaffine_presentation(F, [list(r) for r in H])
    raise BadParams(f"unknown built-in presentation {name!r}")


def builtin_presentation(name: str, F: FieldContext, n: int | None = None, H=None) -> Presentation:
    """One of ``dd`` (with ``n``), ``dd2``, ``rea2``, ``qaffine`` (with ``H``).

    Results are cached per (name, field, params) so normalization caches are shared.
    """
    if name == "dd" and n is None:
        raise BadParams("dd needs n")
    if name == "qaffine":
        if H is None:
            raise BadParams("qaffine needs an exponent matrix")
        H = tuple(tuple(int(x) for x in row) for row in H)
    if name.startswith("dd") and name[2:].isdigit():
        name, n = ("dd", int(name[2:])) if name != "dd2" else ("dd2", None)
    return _cached_builtin(name, F, n, H)


def dd2(F: FieldContext) -> Presentation:
    return builtin_presentation("dd2", F)


def rea2(F: FieldContext) -> Presentation:
    return builtin_presentation("rea2", F)


# -- quotients -------------------------------------------------------------------------


def quotient_kill_generator(P: Presentation, g) -> Presentation:
    """Presentation of P / <g> on the remaining generators."""
    gi = P.gen(g) if isinstance(g, str) else g
    if not 0 <= gi < P.ngens:
        raise UnknownGenerator(g)
    remap = {old: new for new, old in enumerate(i for i in range(P.ngens) if i != gi)}

    def kill(poly: NCPoly) -> NCPoly:
        return NCPoly(
            P.field,
            {tuple(remap[x] for x in w): c for w, c in poly.terms.items() if gi not in w},
        )

    rules = []
    for lhs, rule in P.rules.items():
        rhs = kill(rule.rhs)
        if gi in lhs:
            if rhs:
                raise BadPresentation(
                    f"killing {P.names[gi]} leaves the relation {P.format(rhs)} = 0, "
                    "which is not a rewrite rule"
                )
            continue
        rules.append(RewriteRule((remap[lhs[0]], remap[lhs[1]]), rhs, rule.swap_exponent))
    names = [nm for i, nm in enumerate(P.names) if i != gi]
    return Presentation(P.field, names, rules, name=f"{P.name}/{P.names[gi]}", step_cap=P.step_cap)


def quotient_by_detq(P: Presentation) -> Presentation:
    """Mat_2(q) / <det_q>: adds Z11*Z22 -> Z12*Z21."""
    if P.names != ("Z11", "Z12", "Z21", "Z22"):
        raise BadParams("quotient_by_detq expects the dd2 presentation")
    F = P.field
    rules = [RewriteRule(r.lhs, r.rhs, r.swap_exponent) for r in P.rules.values()]
    rules.append(RewriteRule((0, 3), NCPoly.monomial(F, (1, 2)), None))
    return Presentation(F, P.names, rules, name=f"{P.name}/det_q", step_cap=P.step_cap)


# -- presentation files --------------------------------------------------------------


def parse_presentation(text: str, step_cap: int | None = None) -> Presentation:
    """Parse the line-oriented presentation format::

        algebra NAME
        field cyclotomic m=INT | field prime m=INT p=INT
        generators A < B < C
        rule B*A -> POLY
    """
    name = ""
    F = None
    names = None
    raw_rules = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "algebra":
            name = rest
        elif head == "field":
            parts = rest.split()
            if not parts:
                raise BadPresentation(f"line {lineno}: missing field backend")
            opts = {}
            for item in parts[1:]:
                k, eq, v = item.partition("=")
                if not eq or not v.isdigit():
                    raise BadPresentation(f"line {lineno}: bad field option {item!r}")
                opts[k] = int(v)
            if "m" not in opts:
                raise BadPresentation(f"line {lineno}: field needs m=")
            F = make_field(parts[0], opts["m"], opts.get("p"))
        elif head == "generators":
            names = [s.strip() for s in rest.split("<")]
            if not all(names):
                raise BadPresentation(f"line {lineno}: empty generator name")
        elif head == "rule":
            lhs, arrow, rhs = rest.partition("->")
            if not arrow:
                raise BadPresentation(f"line {lineno}: rule needs '->'")
            raw_rules.append((lineno, lhs.strip(), rhs.strip()))
        else:
            raise BadPresentation(f"line {lineno}: unknown directive {head!r}")
    if F is None or names is None:
        raise BadPresentation("presentation needs 'field' and 'generators' lines")
    index = {nm: i for i, nm in enumerate(names)}
    rules = []
    for lineno, lhs, rhs in raw_rules:
        pieces = [s.strip() for s in lhs.split("*")]
        if len(pieces) != 2:
            raise BadPresentation(f"line {lineno}: rule lhs must be two generators")
        try:
            lw = tuple(index[s] for s in pieces)
        except KeyError as exc:
            raise UnknownGenerator(exc.args[0]) from None
        rules.append(RewriteRule(lw, NCPoly(F, parse_expression(rhs, F, index)), None))
    return Presentation(F, names, rules, name=name, step_cap=step_cap)


def load_presentation(spec: str, F: FieldContext | None = None) -> Presentation:
    """Resolve a built-in name (``dd2``, ``ddN``, ``rea2``) or a presentation file path."""
    if os.path.exists(spec):
        with open(spec, encoding="utf-8") as fh:
            return parse_presentation(fh.read())
    if F is None:
        raise BadParams("a field is required for built-in presentations")
    if spec == "rea2" or spec == "dd2" or (spec.startswith("dd") and spec[2:].isdigit()):
        return builtin_presentation(spec, F)
    raise BadParams(f"unknown algebra {spec!r}")


sys.setrecursionlimit(max(sys.getrecursionlimit(), 10000))
