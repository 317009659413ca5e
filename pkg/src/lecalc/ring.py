"""Sparse exact multivariate polynomials and monomial orders.

A polynomial is a map ``exponent tuple -> nonzero coefficient`` together
with its ring (ordered variable frame + coefficient field).  The
representation is canonical: two polynomials are equal exactly when their
term maps are equal.  Monomials are plain tuples of non-negative ints,
one entry per frame variable.

Monomial orders are small objects exposing ``key(exponent) -> tuple`` so
that larger monomials get larger keys; the basis engine sorts terms with
these keys.  Three kinds exist: global degrevlex, local negative
degrevlex (leading terms have minimal total degree, which is what makes
computations "at the origin" work), and block orders used for variable
elimination.
"""

from __future__ import annotations

import random
from fractions import Fraction
from math import gcd

from .errors import (
    ExactDivisionError,
    FrameMismatchError,
    SingularMatrixError,
    UnknownVariableError,
)
from .fields import QQ, FunctionField, PrimeField, Rationals


# ---------------------------------------------------------------------------
# monomial orders


class GrevLex:
    """Global degree-reverse-lexicographic order."""

    is_global = True
    kind = "grevlex"

    def key(self, exp):
        return (sum(exp),) + tuple(-e for e in reversed(exp))

    def tag(self):
        return "grevlex"

    def __eq__(self, other):
        return isinstance(other, GrevLex)

    def __hash__(self):
        return hash("grevlex")


class NegDegRevLex:
    """Local order: 1 beats every variable, ties broken degrevlex-style."""

    is_global = False
    kind = "negdegrevlex"

    def key(self, exp):
        return (-sum(exp),) + tuple(-e for e in reversed(exp))

    def tag(self):
        return "negdegrevlex"

    def __eq__(self, other):
        return isinstance(other, NegDegRevLex)

    def __hash__(self):
        return hash("negdegrevlex")


class BlockOrder:
    """Compare the first ``split`` variables before the rest.

    With a global inner order on the first block this is an elimination
    order for those variables: any monomial involving them beats any
    monomial that does not.
    """

    kind = "block"

    def __init__(self, split: int, first=None, second=None):
        self.split = split
        self.first = first if first is not None else GrevLex()
        self.second = second if second is not None else GrevLex()
        self.is_global = self.first.is_global and self.second.is_global

    def key(self, exp):
        return self.first.key(exp[: self.split]) + self.second.key(exp[self.split :])

    def tag(self):
        return f"block:{self.split}:{self.first.tag()}:{self.second.tag()}"

    def __eq__(self, other):
        return (
            isinstance(other, BlockOrder)
            and other.split == self.split
            and other.first == self.first
            and other.second == self.second
        )

    def __hash__(self):
        return hash(("block", self.split, self.first, self.second))


GREVLEX = GrevLex()
LOCAL = NegDegRevLex()


# ---------------------------------------------------------------------------
# rings and polynomials


class PolyRing:
    """An ordered variable frame over a coefficient field."""

    __slots__ = ("frame", "field", "_vars")

    def __init__(self, frame, field=None):
        frame = tuple(frame)
        if len(set(frame)) != len(frame):
            raise FrameMismatchError(f"duplicate variable in frame {frame}")
        self.frame = frame
        self.field = field if field is not None else QQ
        self._vars = {name: i for i, name in enumerate(frame)}

    @property
    def nvars(self) -> int:
        return len(self.frame)

    def var_index(self, name: str) -> int:
        try:
            return self._vars[name]
        except KeyError:
            raise UnknownVariableError(f"unknown variable {name!r}; frame is {self.frame}") from None

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c) -> "Polynomial":
        c = self.field.coerce(c)
        if not c:
            return Polynomial(self, {})
        return Polynomial(self, {(0,) * self.nvars: c})

    def var(self, name_or_index) -> "Polynomial":
        i = name_or_index if isinstance(name_or_index, int) else self.var_index(name_or_index)
        exp = [0] * self.nvars
        exp[i] = 1
        return Polynomial(self, {tuple(exp): self.field.one})

    def from_terms(self, terms: dict) -> "Polynomial":
        clean = {}
        for exp, c in terms.items():
            c = self.field.coerce(c)
            if c:
                clean[tuple(exp)] = c
        return Polynomial(self, clean)

    def map_to(self, other: "PolyRing", p: "Polynomial", coeff_map=None) -> "Polynomial":
        """Reinterpret ``p`` in ``other``; frames must share variable names."""
        positions = [other.var_index(v) for v in self.frame]
        terms = {}
        for exp, c in p.terms.items():
            new = [0] * other.nvars
            for i, e in enumerate(exp):
                new[positions[i]] = e
            cc = coeff_map(c) if coeff_map else other.field.coerce(c)
            if cc:
                terms[tuple(new)] = cc
        return Polynomial(other, terms)

    def __eq__(self, other):
        return isinstance(other, PolyRing) and other.frame == self.frame and other.field == self.field

    def __hash__(self):
        return hash((self.frame, self.field))

    def __repr__(self):
        return f"{self.field!r}[{', '.join(self.frame)}]"


class Polynomial:
    """Immutable sparse polynomial in canonical form (no zero terms)."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # -- basic queries ------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_term(self):
        return self.terms.get((0,) * self.ring.nvars, self.ring.field.zero)

    def total_degree(self) -> int:
        """Maximal term degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def order_at_origin(self) -> int:
        """Minimal term degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return min(sum(e) for e in self.terms)

    def degree_in(self, i: int) -> int:
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def variables(self):
        """Indices of variables that actually occur."""
        out = set()
        for e in self.terms:
            for i, d in enumerate(e):
                if d:
                    out.add(i)
        return sorted(out)

    # -- arithmetic ---------------------------------------------------

    def _coerce_other(self, other):
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise FrameMismatchError(f"rings differ: {self.ring!r} vs {other.ring!r}")
            return other
        try:
            return self.ring.const(other)
        except Exception:
            return NotImplemented

    def __add__(self, other):
        other = self._coerce_other(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            s = c if s is None else s + c
            if s:
                out[e] = s
            elif e in out:
                del out[e]
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce_other(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._coerce_other(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.terms or not other.terms:
            return Polynomial(self.ring, {})
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out = {}
        for eb, cb in b.items():
            for ea, ca in a.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                c = ca * cb
                s = out.get(e)
                s = c if s is None else s + c
                if s:
                    out[e] = s
                elif e in out:
                    del out[e]
        return Polynomial(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c):
        c = self.ring.field.coerce(c)
        if not c:
            return self.ring.zero()
        return Polynomial(self.ring, {e: v * c for e, v in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # -- calculus and substitution -------------------------------------

    def partial(self, var) -> "Polynomial":
        """Formal partial derivative with respect to a frame variable."""
        i = var if isinstance(var, int) else self.ring.var_index(var)
        out = {}
        field = self.ring.field
        for e, c in self.terms.items():
            d = e[i]
            if d == 0:
                continue
            cc = c * field.coerce(d)
            if not cc:
                continue
            ne = e[:i] + (d - 1,) + e[i + 1 :]
            s = out.get(ne)
            s = cc if s is None else s + cc
            if s:
                out[ne] = s
            elif ne in out:
                del out[ne]
        return Polynomial(self.ring, out)

    def subst_var(self, i: int, value: "Polynomial") -> "Polynomial":
        """Substitute ``value`` (a polynomial of the same ring) for variable i."""
        powers = {0: self.ring.one()}

        def power(d):
            if d not in powers:
                powers[d] = power(d - 1) * value
            return powers[d]

        out = self.ring.zero()
        for e, c in self.terms.items():
            rest = e[:i] + (0,) + e[i + 1 :]
            mono = Polynomial(self.ring, {rest: c})
            out = out + mono * power(e[i])
        return out

    def exact_div(self, divisor: "Polynomial") -> "Polynomial":
        """Exact polynomial division; raises if ``divisor`` does not divide."""
        divisor = self._coerce_other(divisor)
        if divisor is NotImplemented or divisor.is_zero():
            raise ExactDivisionError("division by zero polynomial")
        if self.is_zero():
            return self
        key = GREVLEX.key
        dlt = max(divisor.terms, key=key)
        dlc = divisor.terms[dlt]
        rem = dict(self.terms)
        qout = {}
        while rem:
            lt = max(rem, key=key)
            if any(a < b for a, b in zip(lt, dlt)):
                raise ExactDivisionError("not divisible")
            q = tuple(a - b for a, b in zip(lt, dlt))
            c = rem[lt] / dlc
            qout[q] = c
            for e, v in divisor.terms.items():
                t = tuple(a + b for a, b in zip(q, e))
                s = rem.get(t, self.ring.field.zero) - c * v
                if s:
                    rem[t] = s
                elif t in rem:
                    del rem[t]
        return Polynomial(self.ring, qout)

    def divides(self, other: "Polynomial") -> bool:
        try:
            other.exact_div(self)
            return True
        except ExactDivisionError:
            return False

    def homogeneous_part(self, d: int) -> "Polynomial":
        return Polynomial(self.ring, {e: c for e, c in self.terms.items() if sum(e) == d})

    def map_field(self, new_field, coeff_map):
        ring = PolyRing(self.ring.frame, new_field)
        terms = {}
        for e, c in self.terms.items():
            cc = coeff_map(c)
            if cc:
                terms[e] = cc
        return Polynomial(ring, terms)

    # -- printing -------------------------------------------------------

    def __repr__(self):
        return self.to_text()

    def to_text(self) -> str:
        """Canonical text form, parseable by the expression parser."""
        if not self.terms:
            return "0"
        frame = self.ring.frame
        items = sorted(self.terms.items(), key=lambda t: GREVLEX.key(t[0]), reverse=True)
        parts = []
        for e, c in items:
            factors = []
            for i, d in enumerate(e):
                if d == 1:
                    factors.append(frame[i])
                elif d > 1:
                    factors.append(f"{frame[i]}^{d}")
            cs = _coeff_text(c)
            negative = cs.startswith("-")
            if negative:
                cs = cs[1:]
            if factors and cs == "1":
                body = "*".join(factors)
            elif factors:
                body = cs + "*" + "*".join(factors)
            else:
                body = cs
            if not parts:
                parts.append(("-" if negative else "") + body)
            else:
                parts.append(("- " if negative else "+ ") + body)
        return " ".join(parts)


def _coeff_text(c) -> str:
    if isinstance(c, Fraction):
        return str(c)
    return repr(c)


# ---------------------------------------------------------------------------
# linear algebra over the field (small dense matrices)


def mat_invert(m, field):
    """Exact inverse of a square matrix; raises SingularMatrixError."""
    n = len(m)
    a = [[field.coerce(x) for x in row] + [field.one if i == j else field.zero for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col]), None)
        if pivot is None:
            raise SingularMatrixError("matrix is singular")
        a[col], a[pivot] = a[pivot], a[col]
        inv = field.one / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def mat_rank(rows, field) -> int:
    """Rank of a list of coefficient vectors, exact Gaussian elimination."""
    work = [list(r) for r in rows if any(r)]
    rank = 0
    ncols = len(work[0]) if work else 0
    col = 0
    while work and col < ncols:
        pivot = next((i for i in range(len(work)) if work[i][col]), None)
        if pivot is None:
            col += 1
            continue
        row = work.pop(pivot)
        inv = field.one / row[col]
        row = [x * inv for x in row]
        work = [
            [x - r[col] * y for x, y in zip(r, row)] if r[col] else r
            for r in work
        ]
        work = [r for r in work if any(r)]
        rank += 1
        col += 1
    return rank


def linear_change(p: Polynomial, matrix) -> Polynomial:
    """Compose ``p`` with the invertible substitution z_i -> sum_j M[i][j] w_j.

    The result lives in the same ring (same frame, new meaning of the
    coordinates).  Degree is preserved because the change is linear and
    invertible.
    """
    ring = p.ring
    field = ring.field
    n = ring.nvars
    if len(matrix) != n or any(len(row) != n for row in matrix):
        raise SingularMatrixError(f"matrix must be {n}x{n}")
    mat_invert(matrix, field)  # raises if singular
    images = []
    for i in range(n):
        terms = {}
        for j in range(n):
            c = field.coerce(matrix[i][j])
            if c:
                e = [0] * n
                e[j] = 1
                terms[tuple(e)] = c
        images.append(Polynomial(ring, terms))

    cache: dict[tuple[int, int], Polynomial] = {}

    def image_power(i, d):
        if d == 0:
            return ring.one()
        got = cache.get((i, d))
        if got is None:
            got = image_power(i, d - 1) * images[i]
            cache[(i, d)] = got
        return got

    out = ring.zero()
    for e, c in p.terms.items():
        term = ring.const(c)
        for i, d in enumerate(e):
            if d:
                term = term * image_power(i, d)
        out = out + term
    return out


def random_linear_form(seed: int, ring: PolyRing, max_coeff: int = 4096) -> Polynomial:
    """Seeded degree-1 form with all coefficients nonzero; reproducible."""
    rng = random.Random(seed)
    terms = {}
    for i in range(ring.nvars):
        c = rng.randint(1, max_coeff) * rng.choice((1, -1))
        e = [0] * ring.nvars
        e[i] = 1
        terms[tuple(e)] = ring.field.coerce(c)
    return Polynomial(ring, terms)


def normalization_matrix(form: Polynomial):
    """An invertible matrix sending the degree-1 ``form`` to the first variable.

    Returns ``M`` such that ``form(M w) = w_0``, so after
    ``linear_change(f, M)`` the distinguished linear form is frame
    position 0.  For ``form == z_0`` this is the identity.
    """
    ring = form.ring
    field = ring.field
    n = ring.nvars
    if form.total_degree() != 1 or form.constant_term():
        raise SingularMatrixError("normalization requires a homogeneous degree-1 form")
    coeffs = [field.zero] * n
    for e, c in form.terms.items():
        coeffs[e.index(1)] = c
    j = next(i for i in range(n) if coeffs[i])
    matrix = [[field.zero] * n for _ in range(n)]
    # column 0: e_j / c_j
    matrix[j][0] = field.one / coeffs[j]
    col = 1
    for i in range(n):
        if i == j:
            continue
        matrix[i][col] = field.one
        matrix[j][col] = -coeffs[i] / coeffs[j]
        col += 1
    return matrix


def content_normalized(p: Polynomial) -> Polynomial:
    """Scale to a canonical associate.

    Over the rationals this clears denominators, divides by the integer
    content and makes the degrevlex-leading coefficient positive; over
    other fields it makes the polynomial monic.  The ideal generated is
    unchanged.
    """
    if p.is_zero():
        return p
    field = p.ring.field
    if isinstance(field, Rationals):
        nums = 0
        dens = 1
        for c in p.terms.values():
            nums = gcd(nums, c.numerator)
            dens = dens * c.denominator // gcd(dens, c.denominator)
        scale = Fraction(dens, nums)
        lead = max(p.terms, key=GREVLEX.key)
        if p.terms[lead] < 0:
            scale = -scale
        return p.scale(scale)
    lead = max(p.terms, key=GREVLEX.key)
    return p.scale(field.one / p.terms[lead])
