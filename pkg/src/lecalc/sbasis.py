"""Standard bases (global Buchberger, local Mora) and ideal algebra.

All ideal-theoretic plumbing lives here: normal forms, standard bases
for both global and local monomial orders, membership, ideal quotient,
saturation, elimination, Krull dimension at the origin and local /
affine vector-space dimensions.

Division of labour that keeps the local theory honest:

* quotient, saturation, intersection and elimination are computed in the
  *polynomial* ring with global elimination orders.  These operations
  commute with localization at the origin, so the results are correct
  local statements as well; components away from the origin are dropped
  later by the callers that care.
* ``vdim_local``, ``dim_at_origin`` and local membership use Mora's
  normal form with the negative degrevlex order, i.e. genuine local
  standard bases.  Mora's weak normal form multiplies the input by a
  unit of the local ring, which is exactly what "at the origin" needs.

Internally a polynomial is flattened to a tuple of ``(key, exponent,
coefficient)`` sorted descending by order key; only the boundary
converts back to :class:`~lecalc.ring.Polynomial`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetExceededError, ExactDivisionError, FrameMismatchError
from .fields import Rationals
from .ring import (
    GREVLEX,
    LOCAL,
    BlockOrder,
    GrevLex,
    NegDegRevLex,
    Polynomial,
    PolyRing,
    content_normalized,
)

INFINITE = math.inf

DEFAULT_BUDGET_LIMIT = 20_000_000


class Budget:
    """Step counter shared across one top-level computation."""

    __slots__ = ("limit", "count")

    def __init__(self, limit: int = DEFAULT_BUDGET_LIMIT):
        self.limit = limit
        self.count = 0

    def tick(self, n: int = 1):
        self.count += n
        if self.count > self.limit:
            raise BudgetExceededError(f"budget exceeded ({self.limit} steps)")


def _budget(b) -> Budget:
    return b if b is not None else Budget()


# ---------------------------------------------------------------------------
# engine representation


def _to_engine(p: Polynomial, order):
    """Flatten to sorted engine form.

    Rational coefficients are converted to integers by clearing the
    common denominator: the engine then runs fraction-free (cross
    multiplication plus content stripping), which is what keeps
    coefficient growth under control.  Other fields keep their own
    element type and use division.
    """
    key = order.key
    coeffs = list(p.terms.values())
    if coeffs and isinstance(coeffs[0], Fraction):
        den = 1
        for c in coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        items = [(key(e), e, int(c * den)) for e, c in p.terms.items()]
    else:
        items = [(key(e), e, c) for e, c in p.terms.items()]
    items.sort(key=lambda t: t[0], reverse=True)
    return tuple(items)


def _to_poly(ep, ring: PolyRing) -> Polynomial:
    coerce = ring.field.coerce
    return Polynomial(ring, {e: coerce(c) if isinstance(c, int) else c for _, e, c in ep})


def _shift(ep, mono, coeff, order):
    """coeff * x^mono * ep, still sorted (shifting preserves order)."""
    key = order.key
    return tuple(
        (key(tuple(a + b for a, b in zip(e, mono))), tuple(a + b for a, b in zip(e, mono)), c * coeff)
        for _, e, c in ep
    )


def _merge_scaled(h, sh, g):
    """sh*h - g on descending-key engine term sequences."""
    out = []
    i = j = 0
    nh, ng = len(h), len(g)
    while i < nh and j < ng:
        kh = h[i][0]
        kg = g[j][0]
        if kh > kg:
            out.append((kh, h[i][1], h[i][2] * sh) if sh != 1 else h[i])
            i += 1
        elif kg > kh:
            out.append((kg, g[j][1], -g[j][2]))
            j += 1
        else:
            c = h[i][2] * sh - g[j][2]
            if c:
                out.append((kh, h[i][1], c))
            i += 1
            j += 1
    while i < nh:
        out.append((h[i][0], h[i][1], h[i][2] * sh) if sh != 1 else h[i])
        i += 1
    while j < ng:
        out.append((g[j][0], g[j][1], -g[j][2]))
        j += 1
    return out


def _strip_content(terms):
    """Divide integer coefficients by their gcd (no-op for field modes)."""
    if not terms or not isinstance(terms[0][2], int):
        return tuple(terms)
    g = 0
    for _, _, c in terms:
        g = math.gcd(g, c)
        if g == 1:
            return tuple(terms)
    return tuple((k, e, c // g) for k, e, c in terms)


def _reduce_step(h, g, order):
    """One head reduction of h by g (LM(g) divides LM(h)), up to a unit."""
    eh, ch = h[0][1], h[0][2]
    eg, cg = g[0][1], g[0][2]
    mono = tuple(a - b for a, b in zip(eh, eg))
    if isinstance(ch, int):
        d = math.gcd(ch, cg)
        shifted = _shift(g, mono, ch // d, order)
        return _strip_content(_merge_scaled(h, cg // d, shifted))
    shifted = _shift(g, mono, ch / cg, order)
    return tuple(_merge_scaled(h, 1, shifted))


def _normalize(ep, field):
    """Scale to the canonical associate (primitive over QQ, monic otherwise)."""
    if not ep:
        return ep
    if isinstance(ep[0][2], int):
        g = 0
        for _, _, c in ep:
            g = math.gcd(g, c)
        if ep[0][2] < 0:
            g = -g
        if g == 1:
            return ep
        return tuple((k, e, c // g) for k, e, c in ep)
    lc = ep[0][2]
    if lc == field.one:
        return ep
    inv = field.one / lc
    return tuple((k, e, c * inv) for k, e, c in ep)


def _divides(a, b) -> bool:
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _ecart(ep) -> int:
    lead = sum(ep[0][1])
    return max(sum(e) for _, e, _ in ep) - lead


def _nf_global(f, G, order, budget: Budget):
    """Normal form with tail reduction (global orders only).

    The result is canonical up to a unit scale; callers that need a
    specific associate renormalize.
    """
    out = []
    work = list(f)
    while work:
        budget.tick()
        e, c = work[0][1], work[0][2]
        red = None
        for g in G:
            if _divides(g[0][1], e):
                red = g
                break
        if red is None:
            out.append(work[0])
            del work[0]
            continue
        cg = red[0][2]
        mono = tuple(a - b for a, b in zip(e, red[0][1]))
        if isinstance(c, int):
            d = math.gcd(c, cg)
            sh = cg // d
            merged = _merge_scaled(work, sh, _shift(red, mono, c // d, order))
            if sh != 1 and out:
                out = [(k, e2, c2 * sh) for k, e2, c2 in out]
            combined = _strip_content(tuple(out) + tuple(merged))
            out = list(combined[: len(out)])
            work = list(combined[len(out) :])
        else:
            work = _merge_scaled(work, 1, _shift(red, mono, c / cg, order))
    return tuple(out)


def _nf_mora(f, G, order, budget: Budget):
    """Mora weak normal form; valid for any order, required for local ones.

    There is a unit u of the ring implied by the order with
    u*f = (combination of G) + result.
    """
    T = list(G)
    ecarts = [_ecart(g) for g in T]
    h = f
    while h:
        budget.tick()
        e = h[0][1]
        best = -1
        best_ec = None
        for idx, g in enumerate(T):
            if _divides(g[0][1], e):
                ec = ecarts[idx]
                if best_ec is None or ec < best_ec:
                    best, best_ec = idx, ec
        if best < 0:
            return h
        if best_ec > _ecart(h):
            T.append(h)
            ecarts.append(_ecart(h))
        h = _reduce_step(h, T[best], order)
    return h


def _spoly(f, g, order):
    ef, eg = f[0][1], g[0][1]
    lcm = tuple(max(a, b) for a, b in zip(ef, eg))
    cf, cg = f[0][2], g[0][2]
    mf = tuple(a - b for a, b in zip(lcm, ef))
    mg = tuple(a - b for a, b in zip(lcm, eg))
    if isinstance(cf, int):
        d = math.gcd(cf, cg)
        sf = _shift(f, mf, cg // d, order)
        sg = _shift(g, mg, cf // d, order)
        return _strip_content(_merge_scaled(sf, 1, sg))
    sf = _shift(f, mf, 1, order)
    sg = _shift(g, mg, cf / cg, order)
    return tuple(_merge_scaled(sf, 1, sg))


def _std_engine(gens, order, field, budget: Budget):
    """Buchberger / Mora standard basis loop with product & chain criteria."""
    nf = _nf_global if order.is_global else _nf_mora
    G = []
    for g in gens:
        if g:
            G.append(_normalize(g, field))
    pairs = {}
    done = set()

    def lcm_of(i, j):
        return tuple(max(a, b) for a, b in zip(G[i][0][1], G[j][0][1]))

    def push_pairs(j):
        for i in range(j):
            key = frozenset((i, j))
            pairs[key] = order.key(lcm_of(i, j))

    for j in range(len(G)):
        push_pairs(j)

    while pairs:
        budget.tick()
        pair = min(pairs, key=lambda k: (pairs[k], sorted(k)))
        del pairs[pair]
        i, j = sorted(pair)
        done.add(pair)
        lcm = lcm_of(i, j)
        li, lj = G[i][0][1], G[j][0][1]
        if all(a + b == c for a, b, c in zip(li, lj, lcm)):
            continue  # coprime leading monomials
        skip = False
        for k in range(len(G)):
            if k == i or k == j:
                continue
            if (
                _divides(G[k][0][1], lcm)
                and frozenset((i, k)) in done
                and frozenset((j, k)) in done
            ):
                skip = True
                break
        if skip:
            continue
        h = nf(_spoly(G[i], G[j], order), G, order, budget)
        if h:
            G.append(_normalize(h, field))
            push_pairs(len(G) - 1)
    return _postprocess(G, order, field, budget)


def _postprocess(G, order, field, budget: Budget):
    """Minimalize; fully interreduce when the order is global."""
    if not G:
        return ()
    by_lm = sorted(range(len(G)), key=lambda i: order.key(G[i][0][1]))
    kept = []
    for i in by_lm:
        lm = G[i][0][1]
        if any(_divides(G[k][0][1], lm) for k in kept if k != i):
            continue
        kept.append(i)
    basis = [G[i] for i in kept]
    if order.is_global:
        reduced = []
        for i in range(len(basis)):
            others = basis[:i] + basis[i + 1 :]
            h = _nf_global(basis[i], others, order, budget)
            if h:
                reduced.append(_normalize(h, field))
        basis = reduced
    basis.sort(key=lambda g: g[0][0], reverse=True)
    return tuple(basis)


# ---------------------------------------------------------------------------
# public ideal layer


@dataclass(frozen=True)
class IdealPresentation:
    """A finite generating set; zero generators are dropped on construction."""

    ring: PolyRing
    gens: tuple

    def __init__(self, ring: PolyRing, gens):
        cleaned = []
        for g in gens:
            if not isinstance(g, Polynomial):
                g = ring.const(g)
            if g.ring != ring:
                raise FrameMismatchError("generator from a different ring")
            if not g.is_zero():
                cleaned.append(g)
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "gens", tuple(cleaned))

    def key(self):
        return (self.ring, frozenset(self.gens))

    def is_zero(self) -> bool:
        return not self.gens

    def __repr__(self):
        inner = ", ".join(g.to_text() for g in self.gens) or "0"
        return f"<{inner}>"


@dataclass(frozen=True)
class StandardBasis:
    basis: tuple
    order: object
    reduced: bool

    def leading_monomials(self):
        return tuple(max(g.terms, key=self.order.key) for g in self.basis)


_STD_CACHE: dict = {}

# When set to a list, every vdim_local call appends (ideal, result); used
# by the acceptance suite to replay the engine against a brute-force oracle.
VDIM_RECORDER: list | None = None


class _LazardOrder:
    """Degree-first order on (t, x) used for local bases by homogenization.

    Monomials are compared by total degree, ties broken by the local
    order on the x-part.  Global (every variable beats 1), so Buchberger
    terminates; on homogeneous input the leading x-parts are exactly the
    local leading monomials of the dehomogenization.
    """

    is_global = True
    kind = "lazard"

    def key(self, exp):
        return (sum(exp),) + LOCAL.key(exp[1:])

    def tag(self):
        return "lazard"

    def __eq__(self, other):
        return isinstance(other, _LazardOrder)

    def __hash__(self):
        return hash("lazard")


_LAZARD = _LazardOrder()


def _homogenize_engine(p: Polynomial):
    """Engine form of the degree-compensated lift of p, sorted for _LAZARD."""
    coeffs = list(p.terms.values())
    if coeffs and isinstance(coeffs[0], Fraction):
        den = 1
        for c in coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        items = [(e, int(c * den)) for e, c in p.terms.items()]
    else:
        items = list(p.terms.items())
    D = max(sum(e) for e, _ in items)
    out = [(_LAZARD.key((D - sum(e),) + e), (D - sum(e),) + e, c) for e, c in items]
    out.sort(key=lambda t: t[0], reverse=True)
    return tuple(out)


def _local_std_engine(gens, field, budget: Budget):
    """Local standard basis via Lazard homogenization.

    Mora's normal form is correct here but its reduction chains blow up
    on dense inputs; the homogenized computation is graded and tame.
    The dehomogenized generators form a standard basis for the local
    order, which is all the leading-ideal consumers need.
    """
    engine = _std_engine([_homogenize_engine(g) for g in gens if not g.is_zero()], _LAZARD, field, budget)
    seen = {}
    for h in engine:
        terms = {}
        for _, e, c in h:
            xe = e[1:]
            prev = terms.get(xe)
            terms[xe] = c if prev is None else prev + c
        items = [(LOCAL.key(e), e, c) for e, c in terms.items() if c]
        if not items:
            continue
        items.sort(key=lambda t: t[0], reverse=True)
        lm = items[0][1]
        ep = _normalize(tuple(items), field)
        old = seen.get(lm)
        if old is None or len(ep) < len(old):
            seen[lm] = ep
    # minimal generators only: drop anything whose lead is divisible
    basis = []
    for lm in sorted(seen, key=lambda m: (sum(m), m)):
        if any(_divides(b[0][1], lm) for b in basis):
            continue
        basis.append(seen[lm])
    basis.sort(key=lambda g: g[0][0], reverse=True)
    return tuple(basis)


def std_basis(I: IdealPresentation, order=None, budget: Budget | None = None) -> StandardBasis:
    """Standard basis of I with respect to the order (default: local)."""
    order = order if order is not None else LOCAL
    cache_key = (I.key(), order)
    got = _STD_CACHE.get(cache_key)
    if got is not None:
        return got
    budget = _budget(budget)
    if order is LOCAL or order == LOCAL:
        engine = _local_std_engine(I.gens, I.ring.field, budget)
    else:
        engine = _std_engine([_to_engine(g, order) for g in I.gens], order, I.ring.field, budget)
    basis = StandardBasis(
        basis=tuple(_to_poly(g, I.ring) for g in engine),
        order=order,
        reduced=order.is_global,
    )
    _STD_CACHE[cache_key] = basis
    return basis


def reduced_gens(I: IdealPresentation, budget: Budget | None = None) -> tuple:
    """Canonical reduced global Groebner generators of I."""
    return std_basis(I, GREVLEX, budget).basis


def normal_form(p: Polynomial, I: IdealPresentation, order=None, budget: Budget | None = None) -> Polynomial:
    order = order if order is not None else GREVLEX
    sb = std_basis(I, order, budget)
    engine = [_to_engine(g, order) for g in sb.basis]
    nf = _nf_global if order.is_global else _nf_mora
    h = nf(_to_engine(p, order), engine, order, _budget(budget))
    return _to_poly(h, I.ring)


def membership(p: Polynomial, I: IdealPresentation, order=None, budget: Budget | None = None) -> bool:
    """Is p in I (in the localization implied by a local order)?"""
    if p.is_zero():
        return True
    if I.is_zero():
        return False
    return normal_form(p, I, order, budget).is_zero()


def verify_basis(sb: StandardBasis, budget: Budget | None = None) -> bool:
    """Buchberger criterion: every S-polynomial reduces to zero."""
    order = sb.order
    engine = [_to_engine(g, order) for g in sb.basis]
    nf = _nf_global if order.is_global else _nf_mora
    budget = _budget(budget)
    for i in range(len(engine)):
        for j in range(i + 1, len(engine)):
            if nf(_spoly(engine[i], engine[j], order), engine, order, budget):
                return False
    return True


# ---------------------------------------------------------------------------
# monomial-ideal combinatorics


def _minimal_monomials(lms):
    mins = []
    for m in sorted(lms, key=sum):
        if not any(_divides(k, m) for k in mins):
            mins.append(m)
    return mins


def _staircase_count(lms, nvars: int):
    mins = _minimal_monomials(lms)
    if not mins:
        return INFINITE
    if any(not any(m) for m in mins):
        return 0  # unit leading ideal: the (local) quotient ring is zero
    caps = []
    for i in range(nvars):
        pure = [m[i] for m in mins if all(m[j] == 0 for j in range(nvars) if j != i)]
        if not pure:
            return INFINITE
        caps.append(min(pure))
    count = 0
    from itertools import product

    for exp in product(*(range(c) for c in caps)):
        if not any(_divides(m, exp) for m in mins):
            count += 1
    return count


def _monomial_dim(lms, nvars: int) -> int:
    mins = _minimal_monomials(lms)
    if any(not any(m) for m in mins):
        return -1
    supports = [frozenset(i for i, e in enumerate(m) if e) for m in mins]
    from itertools import combinations

    for size in range(nvars, -1, -1):
        for subset in combinations(range(nvars), size):
            s = set(subset)
            if not any(sup <= s for sup in supports):
                return size
    return -1


def vdim_local(I: IdealPresentation, budget: Budget | None = None):
    """dim_K of the local quotient ring at the origin; INFINITE if not 0-dim."""
    sb = std_basis(I, LOCAL, budget)
    result = _staircase_count(sb.leading_monomials(), I.ring.nvars)
    if VDIM_RECORDER is not None:
        VDIM_RECORDER.append((I, result))
    return result


def vdim_affine(I: IdealPresentation, budget: Budget | None = None):
    """dim_K of the affine quotient ring (all points); INFINITE if positive-dim."""
    sb = std_basis(I, GREVLEX, budget)
    return _staircase_count(sb.leading_monomials(), I.ring.nvars)


def dim_at_origin(I: IdealPresentation, budget: Budget | None = None) -> int:
    """Krull dimension of the germ of V(I) at the origin; -1 if empty."""
    if I.is_zero():
        return I.ring.nvars
    sb = std_basis(I, LOCAL, budget)
    return _monomial_dim(sb.leading_monomials(), I.ring.nvars)


# ---------------------------------------------------------------------------
# auxiliary-variable constructions


_AUX = "@aux"


def _aux_ring(ring: PolyRing) -> PolyRing:
    return PolyRing((_AUX,) + ring.frame, ring.field)


def _lift(p: Polynomial, big: PolyRing, aux_power: int = 0) -> Polynomial:
    return Polynomial(big, {(aux_power,) + e: c for e, c in p.terms.items()})


def _drop_aux(p: Polynomial, base: PolyRing) -> Polynomial:
    return Polynomial(base, {e[1:]: c for e, c in p.terms.items()})


def intersect(I: IdealPresentation, J: IdealPresentation, budget: Budget | None = None) -> IdealPresentation:
    """I ∩ J via the auxiliary-variable trick with an elimination order."""
    ring = I.ring
    if I.is_zero() or J.is_zero():
        return IdealPresentation(ring, ())
    big = _aux_ring(ring)
    u = big.var(0)
    gens = [u * _lift(g, big) for g in I.gens]
    gens += [(big.one() - u) * _lift(g, big) for g in J.gens]
    order = BlockOrder(1)
    sb = std_basis(IdealPresentation(big, gens), order, budget)
    kept = [_drop_aux(g, ring) for g in sb.basis if g.degree_in(0) == 0]
    return IdealPresentation(ring, kept)


def quotient(I: IdealPresentation, h: Polynomial, budget: Budget | None = None) -> IdealPresentation:
    """The ideal quotient (I : h)."""
    if h.is_zero():
        raise ExactDivisionError("quotient by the zero polynomial")
    if h.is_constant():
        return IdealPresentation(I.ring, reduced_gens(I, budget))
    if I.is_zero():
        return I
    inter = intersect(I, IdealPresentation(I.ring, (h,)), budget)
    gens = [g.exact_div(h) for g in inter.gens]
    result = IdealPresentation(I.ring, gens)
    return IdealPresentation(I.ring, reduced_gens(result, budget))


def ideal_equal(I: IdealPresentation, J: IdealPresentation, budget: Budget | None = None) -> bool:
    """Equality via canonical reduced global bases."""
    return set(reduced_gens(I, budget)) == set(reduced_gens(J, budget))


def saturate(I: IdealPresentation, h: Polynomial, budget: Budget | None = None):
    """(I : h^infinity) by iterated quotient; returns (ideal, exponent)."""
    if h.is_zero():
        raise ExactDivisionError("saturation by the zero polynomial")
    current = IdealPresentation(I.ring, reduced_gens(I, budget))
    exponent = 0
    while True:
        nxt = quotient(current, h, budget)
        if ideal_equal(nxt, current, budget):
            return current, exponent
        current = nxt
        exponent += 1


def quotient_by_ideal(I: IdealPresentation, J: IdealPresentation, budget: Budget | None = None) -> IdealPresentation:
    """(I : J) as the intersection of the quotients by the generators."""
    if J.is_zero():
        raise ExactDivisionError("quotient by the zero ideal")
    result = None
    for g in J.gens:
        q = quotient(I, g, budget)
        result = q if result is None else intersect(result, q, budget)
    return IdealPresentation(I.ring, reduced_gens(result, budget))


def saturate_by_ideal(I: IdealPresentation, J: IdealPresentation, budget: Budget | None = None) -> IdealPresentation:
    """(I : J^infinity): removes the components whose radical contains J."""
    current = IdealPresentation(I.ring, reduced_gens(I, budget))
    while True:
        nxt = quotient_by_ideal(current, J, budget)
        if ideal_equal(nxt, current, budget):
            return current
        current = nxt


def eliminate(I: IdealPresentation, var_indices, budget: Budget | None = None) -> IdealPresentation:
    """Generators of I ∩ K[frame without the given variables]."""
    ring = I.ring
    drop = sorted(set(var_indices))
    if not drop:
        return I
    if len(drop) >= ring.nvars:
        raise FrameMismatchError("cannot eliminate every variable")
    keep = [i for i in range(ring.nvars) if i not in drop]
    perm = drop + keep
    permuted = PolyRing(tuple(ring.frame[i] for i in perm), ring.field)

    def forward(p):
        return Polynomial(permuted, {tuple(e[i] for i in perm): c for e, c in p.terms.items()})

    inverse_positions = [perm.index(i) for i in range(ring.nvars)]

    def backward(p):
        return Polynomial(ring, {tuple(e[i] for i in inverse_positions): c for e, c in p.terms.items()})

    order = BlockOrder(len(drop))
    sb = std_basis(IdealPresentation(permuted, [forward(g) for g in I.gens]), order, budget)
    kept = [backward(g) for g in sb.basis if all(g.degree_in(i) == 0 for i in range(len(drop)))]
    return IdealPresentation(ring, kept)


def radical_contains(I: IdealPresentation, g: Polynomial, budget: Budget | None = None) -> bool:
    """g ∈ √I, by the auxiliary-variable unit trick."""
    if g.is_zero():
        return True
    if I.is_zero():
        return False
    big = _aux_ring(I.ring)
    u = big.var(0)
    gens = [_lift(p, big) for p in I.gens]
    gens.append(big.one() - u * _lift(g, big))
    sb = std_basis(IdealPresentation(big, gens), GREVLEX, budget)
    return len(sb.basis) == 1 and sb.basis[0].is_constant()


def clear_caches():
    _STD_CACHE.clear()
