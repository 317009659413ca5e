"""Exact coefficient fields.

Three kinds are available:

* :class:`Rationals` -- arbitrary-precision rationals; elements are
  :class:`fractions.Fraction`.
* :class:`PrimeField` -- integers modulo a prime ``p > 2**20``; elements
  are :class:`ModInt`.  A fast modular pre-pass, never the final
  authority for reported results.
* :class:`FunctionField` -- rational functions in one parameter ``t``
  over one of the above; elements are :class:`RatFunc`.  This is what
  makes generic hyperplane slices exact instead of "random and hope".

Elements are plain objects with operator overloading, so polynomial code
never needs to dispatch on the field: ``+ - * /``, ``==`` and truthiness
(nonzero test) are enough.  All arithmetic is exact; there is no floating
point anywhere in the engine.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import FieldError

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin with fixed bases; deterministic far beyond 64 bits."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class ModInt:
    """An element of Z/pZ with ordinary operator arithmetic."""

    __slots__ = ("val", "p")

    def __init__(self, val: int, p: int):
        self.val = val % p
        self.p = p

    def _lift(self, other):
        if isinstance(other, ModInt):
            if other.p != self.p:
                raise FieldError("mixed moduli")
            return other
        if isinstance(other, int):
            return ModInt(other, self.p)
        if isinstance(other, Fraction):
            return ModInt(other.numerator, self.p) / ModInt(other.denominator, self.p)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return ModInt(self.val + other.val, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return ModInt(self.val - other.val, self.p)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return ModInt(self.val * other.val, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        if other.val == 0:
            raise ZeroDivisionError("division by zero in prime field")
        return ModInt(self.val * pow(other.val, self.p - 2, self.p), self.p)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __neg__(self):
        return ModInt(-self.val, self.p)

    def __eq__(self, other):
        if isinstance(other, ModInt):
            return self.val == other.val and self.p == other.p
        if isinstance(other, int):
            return self.val == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.val, self.p))

    def __bool__(self):
        return self.val != 0

    def __repr__(self):
        return str(self.val)


# ---------------------------------------------------------------------------
# univariate polynomial helpers over an arbitrary field (dense tuples,
# lowest degree first, no trailing zeros) -- support for RatFunc only


def _ustrip(a):
    k = len(a)
    while k > 0 and not a[k - 1]:
        k -= 1
    return tuple(a[:k])


def _uadd(a, b):
    short, long_ = (a, b) if len(a) <= len(b) else (b, a)
    out = list(long_)
    for i, c in enumerate(short):
        out[i] = out[i] + c
    return _ustrip(out)


def _uneg(a):
    return tuple(-c for c in a)


def _umul(a, b, zero):
    if not a or not b:
        return ()
    out = [zero] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if not ca:
            continue
        for j, cb in enumerate(b):
            out[i + j] = out[i + j] + ca * cb
    return _ustrip(out)


def _udivmod(a, b, zero):
    if not b:
        raise ZeroDivisionError("univariate division by zero")
    a = list(a)
    q = [zero] * max(0, len(a) - len(b) + 1)
    inv_lead = b[-1]
    while len(a) >= len(b) and _ustrip(a):
        a = list(_ustrip(a))
        if len(a) < len(b):
            break
        c = a[-1] / inv_lead
        d = len(a) - len(b)
        q[d] = c
        for i, cb in enumerate(b):
            a[d + i] = a[d + i] - c * cb
        a = list(_ustrip(a))
    return _ustrip(q), _ustrip(a)


def _ugcd(a, b, zero, one):
    a, b = _ustrip(a), _ustrip(b)
    while b:
        _, r = _udivmod(a, b, zero)
        a, b = b, r
    if not a:
        return ()
    lead = a[-1]
    return tuple(c / lead for c in a)


class RatFunc:
    """A reduced fraction of univariate polynomials over a base field.

    Stored with a monic denominator and ``gcd(num, den) = 1``; two equal
    rational functions therefore have equal representations.
    """

    __slots__ = ("num", "den", "base")

    def __init__(self, num, den, base, _normalized=False):
        if _normalized:
            self.num, self.den, self.base = num, den, base
            return
        num, den = _ustrip(num), _ustrip(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        zero, one = base.zero, base.one
        if not num:
            self.num, self.den, self.base = (), (one,), base
            return
        g = _ugcd(num, den, zero, one)
        if len(g) > 1:
            num, _ = _udivmod(num, g, zero)
            den, _ = _udivmod(den, g, zero)
        lead = den[-1]
        if lead != one:
            num = tuple(c / lead for c in num)
            den = tuple(c / lead for c in den)
        self.num, self.den, self.base = num, den, base

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        z = self.base.zero
        num = _uadd(_umul(self.num, other.den, z), _umul(other.num, self.den, z))
        return RatFunc(num, _umul(self.den, other.den, z), self.base)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        z = self.base.zero
        return RatFunc(_umul(self.num, other.num, z), _umul(self.den, other.den, z), self.base)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        if not other.num:
            raise ZeroDivisionError("division by zero rational function")
        z = self.base.zero
        return RatFunc(_umul(self.num, other.den, z), _umul(self.den, other.num, z), self.base)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __neg__(self):
        return RatFunc(_uneg(self.num), self.den, self.base, _normalized=True)

    def _lift(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, (int, Fraction, ModInt)):
            c = self.base.coerce(other)
            return RatFunc((c,) if c else (), (self.base.one,), self.base, _normalized=True)
        return NotImplemented

    def __eq__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return bool(self.num)

    def __repr__(self):
        def side(c):
            terms = []
            for i, v in enumerate(c):
                if not v:
                    continue
                if i == 0:
                    terms.append(str(v))
                elif i == 1:
                    terms.append(f"{v}*t")
                else:
                    terms.append(f"{v}*t^{i}")
            return " + ".join(terms) if terms else "0"

        if self.den == (self.base.one,):
            return side(self.num)
        return f"({side(self.num)})/({side(self.den)})"


# ---------------------------------------------------------------------------
# field objects


class Rationals:
    kind = "rationals"
    characteristic = 0
    zero = Fraction(0)
    one = Fraction(1)

    def coerce(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        raise FieldError(f"cannot coerce {x!r} into the rationals")

    def label(self) -> str:
        return "qq"

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("qq")

    def __repr__(self):
        return "QQ"


class PrimeField:
    kind = "prime"

    # The lower bound keeps accidental coefficient collisions in randomized
    # genericity arguments rare.
    MIN_MODULUS = 1 << 20

    def __init__(self, p: int):
        if p <= self.MIN_MODULUS:
            raise FieldError(f"prime modulus must exceed 2^20, got {p}")
        if not is_probable_prime(p):
            raise FieldError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.zero = ModInt(0, p)
        self.one = ModInt(1, p)

    def coerce(self, x):
        if isinstance(x, ModInt):
            if x.p != self.p:
                raise FieldError("mixed moduli")
            return x
        if isinstance(x, int):
            return ModInt(x, self.p)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise FieldError("denominator vanishes modulo p")
            return ModInt(x.numerator, self.p) / ModInt(x.denominator, self.p)
        raise FieldError(f"cannot coerce {x!r} into GF({self.p})")

    def label(self) -> str:
        return f"fp:{self.p}"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("fp", self.p))

    def __repr__(self):
        return f"GF({self.p})"


class FunctionField:
    """Rational functions in one transcendental ``t`` over a base field."""

    kind = "function"

    def __init__(self, base=None):
        self.base = base if base is not None else QQ
        if isinstance(self.base, FunctionField):
            raise FieldError("towers of function fields are not supported")
        self.characteristic = self.base.characteristic
        self.zero = RatFunc((), (self.base.one,), self.base, _normalized=True)
        self.one = RatFunc((self.base.one,), (self.base.one,), self.base, _normalized=True)

    def gen(self) -> RatFunc:
        return RatFunc((self.base.zero, self.base.one), (self.base.one,), self.base, _normalized=True)

    def coerce(self, x):
        if isinstance(x, RatFunc):
            return x
        c = self.base.coerce(x)
        if not c:
            return self.zero
        return RatFunc((c,), (self.base.one,), self.base, _normalized=True)

    def label(self) -> str:
        return f"{self.base.label()}(t)"

    def __eq__(self, other):
        return isinstance(other, FunctionField) and other.base == self.base

    def __hash__(self):
        return hash(("funct", self.base))

    def __repr__(self):
        return f"{self.base!r}(t)"


QQ = Rationals()


def field_from_label(label: str):
    """Inverse of ``label()``: ``qq``, ``fp:<prime>`` or ``qq(t)``."""
    if label == "qq":
        return QQ
    if label == "qq(t)":
        return FunctionField(QQ)
    if label.startswith("fp:"):
        try:
            p = int(label[3:])
        except ValueError:
            raise FieldError(f"bad field label {label!r}") from None
        if label.endswith("(t)"):
            raise FieldError(f"bad field label {label!r}")
        return PrimeField(p)
    raise FieldError(f"bad field label {label!r}")
