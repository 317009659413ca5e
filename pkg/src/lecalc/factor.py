"""Light polynomial factorization support.

The component-splitting layer only needs three things:

* multivariate gcd (primitive pseudo-remainder sequences),
* squarefree decomposition in characteristic zero / large p,
* opportunistic splitting into coprime factors: monomial content,
  rational roots of univariate polynomials, and linear factors of
  homogeneous bivariate polynomials.

This is deliberately not a full factorizer.  Anything it cannot split is
left whole and the caller flags the component as uncertified.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as int_gcd

from .ring import Polynomial, content_normalized

# Rational-root searches stay cheap: candidate divisors beyond this are
# ignored (missed splits are caught downstream by cycle cross-checks).
_DIVISOR_CAP = 4000
_MAX_CANDIDATES = 400


def _to_univar(p: Polynomial, i: int) -> dict[int, Polynomial]:
    """View ``p`` as univariate in variable ``i`` with polynomial coefficients."""
    out: dict[int, Polynomial] = {}
    ring = p.ring
    for e, c in p.terms.items():
        d = e[i]
        rest = e[:i] + (0,) + e[i + 1 :]
        coeff = out.get(d, ring.zero())
        out[d] = coeff + Polynomial(ring, {rest: c})
    return {d: q for d, q in out.items() if not q.is_zero()}


def _from_univar(coeffs: dict[int, Polynomial], i: int, ring) -> Polynomial:
    out = ring.zero()
    v = ring.var(i)
    for d, q in coeffs.items():
        out = out + q * v**d
    return out


def _udeg(coeffs: dict[int, Polynomial]) -> int:
    return max(coeffs) if coeffs else -1


def _pseudo_rem(f: dict, g: dict, ring) -> dict:
    """Pseudo-remainder of f by g as univariate views in the same variable."""
    df, dg = _udeg(f), _udeg(g)
    lg = g[dg]
    f = dict(f)
    while f and _udeg(f) >= dg:
        d = _udeg(f)
        lf = f[d]
        # lg*f - lf*x^(d-dg)*g
        new: dict[int, Polynomial] = {}
        for k, c in f.items():
            new[k] = c * lg
        for k, c in g.items():
            t = new.get(k + d - dg, ring.zero()) - lf * c
            new[k + d - dg] = t
        f = {k: c for k, c in new.items() if not c.is_zero()}
    return f


def poly_gcd(p: Polynomial, q: Polynomial) -> Polynomial:
    """Greatest common divisor, normalized via :func:`content_normalized`."""
    ring = p.ring
    if p.is_zero():
        return content_normalized(q)
    if q.is_zero():
        return content_normalized(p)
    if p.is_constant() or q.is_constant():
        return ring.one()
    common = set(p.variables()) | set(q.variables())
    main = max(common)
    fu, gu = _to_univar(p, main), _to_univar(q, main)
    cont_f = _content(fu)
    cont_g = _content(gu)
    cont = poly_gcd(cont_f, cont_g)
    fp = {d: c.exact_div(cont_f) for d, c in fu.items()}
    gp = {d: c.exact_div(cont_g) for d, c in gu.items()}
    if _udeg(fp) < _udeg(gp):
        fp, gp = gp, fp
    while gp:
        r = _pseudo_rem(fp, gp, ring)
        fp = gp
        if r:
            rc = _content(r)
            gp = {d: c.exact_div(rc) for d, c in r.items()}
        else:
            gp = {}
    g_main = _from_univar(fp, main, ring)
    g_main = g_main.exact_div(_content(_to_univar(g_main, main)))
    return content_normalized(cont * g_main)


def _content(univ: dict[int, Polynomial]) -> Polynomial:
    it = iter(sorted(univ))
    first = univ[next(it)]
    g = content_normalized(first)
    for d in it:
        if g.is_constant():
            break
        g = poly_gcd(g, univ[d])
    if g.is_zero():
        return first.ring.one()
    if g.is_constant():
        return first.ring.one()
    return g


def squarefree_part(p: Polynomial) -> Polynomial:
    """Product of the distinct irreducible factors of ``p`` (char 0 / large p)."""
    if p.is_zero() or p.is_constant():
        return content_normalized(p) if not p.is_zero() else p
    g = p
    for i in p.variables():
        d = p.partial(i)
        if d.is_zero():
            continue
        g = poly_gcd(g, d)
        if g.is_constant():
            return content_normalized(p)
    return content_normalized(p.exact_div(g))


def squarefree_decomposition(p: Polynomial) -> list[tuple[Polynomial, int]]:
    """Pairs ``(factor, multiplicity)`` with the factors squarefree and coprime.

    The factors are products of the irreducibles of equal multiplicity;
    combine with :func:`split_coprime` to refine further.
    """
    out: dict[int, Polynomial] = {}
    w = content_normalized(p)
    mult = 0
    while not w.is_constant():
        s = squarefree_part(w)
        w = content_normalized(w.exact_div(s))
        mult += 1
        # factors of multiplicity exactly `mult` divide s but not the next w
        out[mult] = s
    result = []
    levels = sorted(out)
    for i, m in enumerate(levels):
        f = out[m]
        for higher in levels[i + 1 :]:
            g = poly_gcd(f, out[higher])
            if not g.is_constant():
                f = f.exact_div(g)
        if not f.is_constant():
            result.append((content_normalized(f), m))
    return result


def _rational_roots(coeffs: list) -> list:
    """Rational roots of a univariate integer-coefficient polynomial."""
    lead = coeffs[-1]
    low = next(c for c in coeffs if c)
    roots = []

    def divisors(n):
        n = abs(n)
        out = set()
        d = 1
        while d * d <= n and d <= _DIVISOR_CAP:
            if n % d == 0:
                out.add(d)
                if n // d <= _DIVISOR_CAP:
                    out.add(n // d)
            d += 1
        return sorted(out)

    seen = set()
    candidates = 0
    for num in divisors(low):
        for den in divisors(lead):
            if candidates > _MAX_CANDIDATES:
                return roots
            for cand in (Fraction(num, den), Fraction(-num, den)):
                if cand in seen:
                    continue
                seen.add(cand)
                candidates += 1
                acc = Fraction(0)
                for c in reversed(coeffs):
                    acc = acc * cand + c
                if acc == 0:
                    roots.append(cand)
    return roots


def split_coprime(p: Polynomial) -> list[Polynomial]:
    """Split a squarefree polynomial into pairwise coprime factors.

    Returns at least ``[p]`` (normalized).  Splits found: variable
    factors from the monomial content, rational-root linear factors of
    effectively univariate polynomials, and linear forms of homogeneous
    bivariate polynomials.  No certificate of irreducibility is implied
    for the returned pieces.
    """
    ring = p.ring
    p = content_normalized(p)
    if p.is_zero() or p.is_constant():
        return []
    factors: list[Polynomial] = []
    # monomial content: common variable powers
    common = [min(e[i] for e in p.terms) for i in range(ring.nvars)]
    if any(common):
        for i, d in enumerate(common):
            if d:
                factors.append(ring.var(i))
        p = Polynomial(
            ring,
            {tuple(a - b for a, b in zip(e, common)): c for e, c in p.terms.items()},
        )
        if p.is_constant():
            return factors
    occurring = p.variables()
    if len(occurring) == 1:
        i = occurring[0]
        coeffs = _univar_int_coeffs(p, i)
        if coeffs is not None:
            rest = p
            for root in _rational_roots(coeffs):
                lin = ring.var(i) - ring.const(root)
                if lin.divides(rest):
                    factors.append(content_normalized(lin))
                    rest = rest.exact_div(lin)
            if rest.is_constant():
                return factors
            factors.append(content_normalized(rest))
            return factors
    elif len(occurring) == 2 and _is_homogeneous(p):
        i, j = occurring
        # p(x_i, x_j) = c * prod of linear forms * (rootless part)
        d = p.total_degree()
        coeffs = _bivar_dehom_coeffs(p, i, j, d)
        if coeffs is not None:
            rest = p
            for root in _rational_roots(coeffs):
                lin = ring.var(i) - ring.const(root) * ring.var(j)
                if lin.divides(rest):
                    factors.append(content_normalized(lin))
                    rest = rest.exact_div(lin)
            vj = ring.var(j)
            while vj.divides(rest) and not rest.is_constant():
                factors.append(vj)
                rest = rest.exact_div(vj)
            if rest.is_constant():
                return factors
            factors.append(content_normalized(rest))
            return factors
    factors.append(p)
    return factors


def _clear_denominators(out: list):
    den = 1
    for c in out:
        den = den * c.denominator // int_gcd(den, c.denominator)
    return [int(c * den) for c in out]


def _univar_int_coeffs(p: Polynomial, i: int):
    out = [Fraction(0)] * (p.degree_in(i) + 1)
    for e, c in p.terms.items():
        if not isinstance(c, Fraction):
            return None
        out[e[i]] = c
    return _clear_denominators(out)


def _bivar_dehom_coeffs(p: Polynomial, i: int, j: int, d: int):
    out = [Fraction(0)] * (d + 1)
    for e, c in p.terms.items():
        if not isinstance(c, Fraction):
            return None
        out[e[i]] = c
    return _clear_denominators(out)


def _is_homogeneous(p: Polynomial) -> bool:
    degs = {sum(e) for e in p.terms}
    return len(degs) == 1


def factor_multiplicities(p: Polynomial) -> list[tuple[Polynomial, int]]:
    """Squarefree decomposition refined by :func:`split_coprime`.

    Used to read off cycle multiplicities of principal ideals: the
    divisor of ``p`` is ``sum of m * [V(q)]`` over the returned pairs.
    """
    out = []
    for f, m in squarefree_decomposition(p):
        for piece in split_coprime(f):
            out.append((piece, m))
    return out
