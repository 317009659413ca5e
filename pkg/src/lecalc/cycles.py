"""Germ contexts, polar and Le cycles, components and multiplicities.

The pipeline here turns a polynomial germ f with 1-dimensional critical
locus into cycles:

* ``make_context`` certifies a generic linear form z0 (the germ is
  rewritten so z0 is frame position 0) and caches the partials;
* ``polar_and_le`` splits the cycle of V(df/dz1, ..., df/dzn) into the
  relative polar curve (components where df/dz0 does not vanish, found
  by saturation) and the 1-dimensional Le cycle (the components inside
  the critical locus), both decomposed into components with
  multiplicities;
* ``component_multiplicity`` reads a cycle multiplicity off an exact
  generic hyperplane slice z0 = t over the rational function field: the
  slice is 0-dimensional, the points sitting on the component are
  isolated by saturation, and the count divides out by the local
  intersection number of the component with V(z0).

Everything is deterministic for a fixed seed.  Components whose
irreducibility cannot be certified by the simple criteria here (smooth
germ, or a plane-curve germ with a single coprime Newton edge) are
flagged, never guessed; downstream consistency checks catch any
under-splitting that would corrupt the reported numbers.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from .errors import (
    DecompositionIncompleteError,
    EngineError,
    GenericityError,
    ImproperIntersectionError,
    InputError,
    InternalInconsistencyError,
    NonlocalContributionError,
    NotASurfaceError,
    NotOneDimensionalError,
    NotSmoothError,
)
from .factor import factor_multiplicities, split_coprime, squarefree_part
from .fields import FunctionField, QQ
from .ring import (
    Polynomial,
    PolyRing,
    linear_change,
    mat_rank,
    normalization_matrix,
    random_linear_form,
)
from .sbasis import (
    INFINITE,
    Budget,
    IdealPresentation,
    dim_at_origin,
    radical_contains,
    reduced_gens,
    saturate,
    saturate_by_ideal,
    std_basis,
    vdim_affine,
    vdim_local,
)
from .ring import LOCAL


@dataclass
class EngineOptions:
    budget_limit: int = 20_000_000
    mu_method: str = "local"  # "local", "slice" (rational function field) or "random"
    z0_attempts: int = 12
    z0_coeff_bound: int = 7
    mult_tries: int = 10


def _stable_seed(*parts) -> int:
    text = "|".join(str(p) for p in parts)
    return int.from_bytes(hashlib.blake2b(text.encode(), digest_size=8).digest(), "big")


@dataclass
class GermContext:
    """A germ with a certified generic linear form at frame position 0."""

    original_ring: PolyRing
    original_f: Polynomial
    ring: PolyRing
    f: Polynomial
    z0_source: Polynomial  # the chosen form, in the original coordinates
    transform: list | None  # None when z0 was already the first variable
    seed: int
    attempts: int
    options: EngineOptions
    budget: Budget
    warnings: list = field(default_factory=list)
    certificate: dict = field(default_factory=dict)

    def __post_init__(self):
        self.partials = tuple(self.f.partial(i) for i in range(self.ring.nvars))
        self.minor_ideal = IdealPresentation(self.ring, self.partials[1:])
        self.jacobian = IdealPresentation(self.ring, self.partials)

    @property
    def n(self) -> int:
        """f lives on C^(n+1); this is n."""
        return self.ring.nvars - 1

    def warn(self, message: str):
        if message not in self.warnings:
            self.warnings.append(message)

    def maximal_ideal(self) -> IdealPresentation:
        return IdealPresentation(self.ring, tuple(self.ring.var(i) for i in range(self.ring.nvars)))


def jacobian_ideal(f: Polynomial) -> IdealPresentation:
    return IdealPresentation(f.ring, tuple(f.partial(i) for i in range(f.ring.nvars)))


def milnor_number(f: Polynomial, budget: Budget | None = None):
    """Local Milnor number for isolated singularities (INFINITE otherwise)."""
    return vdim_local(jacobian_ideal(f), budget)


def make_context(
    f: Polynomial,
    z0_hint: Polynomial | None = None,
    seed: int = 0,
    options: EngineOptions | None = None,
) -> GermContext:
    """Choose/validate a generic linear form and normalize it to position 0.

    The form must satisfy dim_0 of the critical locus of the restriction
    f|V(z0) equal to 0; candidates are the hint followed by seeded random
    forms.  Requires dim_0 of the critical locus of f itself to be 1.
    """
    options = options or EngineOptions()
    budget = Budget(options.budget_limit)
    ring = f.ring
    if f.is_zero():
        raise InputError("f must be a nonzero polynomial")
    if f.constant_term():
        raise InputError("f must vanish at the origin")
    if ring.nvars < 2:
        raise InputError("need at least two variables")
    sigma_dim = dim_at_origin(jacobian_ideal(f), budget)
    if sigma_dim != 1:
        raise NotOneDimensionalError(sigma_dim)

    candidates = []
    if z0_hint is not None:
        if z0_hint.total_degree() != 1 or z0_hint.constant_term():
            raise InputError("z0 hint must be a homogeneous linear form")
        candidates.append(z0_hint)
    seen = {c.to_text() for c in candidates}
    k = 0
    while len(candidates) < options.z0_attempts + (1 if z0_hint is not None else 0):
        form = random_linear_form(_stable_seed(seed, "z0", k), ring, options.z0_coeff_bound)
        k += 1
        if form.to_text() in seen:
            continue
        seen.add(form.to_text())
        candidates.append(form)

    attempts = 0
    for form in candidates:
        attempts += 1
        matrix = normalization_matrix(form)
        identity = all(
            matrix[i][j] == (1 if i == j else 0) for i in range(ring.nvars) for j in range(ring.nvars)
        )
        fw = f if identity else linear_change(f, matrix)
        slice_gens = (ring.var(0),) + tuple(fw.partial(i) for i in range(1, ring.nvars))
        sliced_dim = dim_at_origin(IdealPresentation(ring, slice_gens), budget)
        if sliced_dim == 0:
            return GermContext(
                original_ring=ring,
                original_f=f,
                ring=ring,
                f=fw,
                z0_source=form,
                transform=None if identity else matrix,
                seed=seed,
                attempts=attempts,
                options=options,
                budget=budget,
                certificate={"critical_dim": sigma_dim, "sliced_critical_dim": sliced_dim},
            )
    raise GenericityError(f"no generic linear form found after {attempts} attempts")


# ---------------------------------------------------------------------------
# cycles


@dataclass(frozen=True)
class CycleComponent:
    ideal: IdealPresentation
    multiplicity: int
    certified_prime: bool

    def gens_text(self):
        return tuple(g.to_text() for g in self.ideal.gens)


@dataclass(frozen=True)
class CurveCycle:
    components: tuple

    def is_empty(self) -> bool:
        return not self.components

    def total_multiplicity(self) -> int:
        return sum(c.multiplicity for c in self.components)

    def __iter__(self):
        return iter(self.components)


def _squarefree_gens(I: IdealPresentation, budget) -> IdealPresentation:
    """Replace generators by squarefree parts (same vanishing set)."""
    changed = False
    gens = []
    for g in reduced_gens(I, budget):
        s = squarefree_part(g)
        if s != g:
            changed = True
        gens.append(s)
    if not changed:
        return I
    out = IdealPresentation(I.ring, gens)
    return IdealPresentation(I.ring, reduced_gens(out, budget))


def _m_saturate(I: IdealPresentation, ctx: GermContext) -> IdealPresentation:
    return saturate_by_ideal(I, ctx.maximal_ideal(), ctx.budget)


def _radical_tighten(I: IdealPresentation, ctx: GermContext) -> IdealPresentation:
    """Move a curve ideal toward its radical without changing its zero set.

    Every coordinate-plane elimination ideal vanishes on V(I), and so do
    the squarefree parts of its generators; adding them can only strip
    multiplicity.  This is what reduces the primary ideal of a multiple
    line (whose generators are irreducible quadrics after a generic
    coordinate change) to the line itself.
    """
    from .sbasis import eliminate

    ring = I.ring
    n = ring.nvars
    extra = []
    for i in range(n):
        for j in range(i + 1, n):
            drop = [k for k in range(n) if k not in (i, j)]
            if not drop:
                continue
            for g in eliminate(I, drop, ctx.budget).gens:
                s = squarefree_part(g)
                extra.append(s)
    if not extra:
        return I
    bigger = IdealPresentation(ring, I.gens + tuple(extra))
    out = IdealPresentation(ring, reduced_gens(bigger, ctx.budget))
    return _squarefree_gens(out, ctx.budget)


def _through_origin(I: IdealPresentation, budget) -> bool:
    return all(not g.constant_term() for g in reduced_gens(I, budget))


def decompose(
    I: IdealPresentation,
    ctx: GermContext,
    hints=None,
    against: IdealPresentation | None = None,
) -> CurveCycle:
    """Split a 1-dimensional (at the origin) ideal into cycle components.

    Factor-assisted: any generator that splits into coprime factors forks
    the ideal; leaves are m-saturated, components not through the origin
    or of the wrong local dimension are dropped, duplicates are merged by
    mutual radical containment.  Multiplicities are cycle multiplicities
    of ``against`` (default: I itself) along each component.
    """
    budget = ctx.budget
    against = against if against is not None else I
    d = dim_at_origin(I, budget)
    if d == -1:
        return CurveCycle(())
    if d != 1:
        raise ImproperIntersectionError(f"decompose expects a curve germ, got dimension {d}")

    leaves: list[IdealPresentation] = []
    work = [IdealPresentation(I.ring, reduced_gens(I, budget))]
    rounds = 0
    while work:
        rounds += 1
        if rounds > 200:
            raise DecompositionIncompleteError("splitting did not terminate", partial=leaves)
        J = _squarefree_gens(work.pop(), budget)
        split_done = False
        for g in reduced_gens(J, budget):
            factors = split_coprime(g)
            if len(factors) > 1:
                for fct in factors:
                    work.append(IdealPresentation(J.ring, J.gens + (fct,)))
                split_done = True
                break
        if not split_done:
            leaves.append(J)

    if hints:
        for hint in hints:
            leaves.append(IdealPresentation(I.ring, I.gens + tuple(hint.gens)))

    # Merge equal leaves; refine strict containments so the result is a set
    # of pairwise non-redundant varieties.  V(other) subset V(leaf) means the
    # leaf is an unsplit union: keep the smaller piece and saturate out the
    # overlap to recover the rest.
    kept: list[IdealPresentation] = []
    pending = list(leaves)
    rounds = 0
    while pending:
        rounds += 1
        if rounds > 200:
            raise DecompositionIncompleteError("component merge did not terminate", partial=kept)
        leaf = _m_saturate(pending.pop(), ctx)
        if dim_at_origin(leaf, budget) != 1:
            continue
        if not _through_origin(leaf, budget):
            continue
        leaf = _radical_tighten(_squarefree_gens(leaf, budget), ctx)
        merged = False
        for idx, other in enumerate(kept):
            inside_leaf = all(radical_contains(other, g, budget) for g in leaf.gens)
            inside_other = all(radical_contains(leaf, g, budget) for g in other.gens)
            if inside_leaf and inside_other:
                merged = True
                break
            if inside_leaf:
                # V(other) strictly inside V(leaf): split the leaf
                pending.append(saturate_by_ideal(leaf, other, budget))
                merged = True
                break
            if inside_other:
                kept[idx] = leaf
                pending.append(saturate_by_ideal(other, leaf, budget))
                merged = True
                break
        if not merged:
            kept.append(leaf)

    kept.sort(key=lambda J: tuple(g.to_text() for g in J.gens))
    components = []
    for comp in kept:
        mult = component_multiplicity(against, comp, ctx)
        certified = certify_irreducible_at_origin(comp, ctx)
        if not certified:
            ctx.warn(f"unsplit component {comp!r}: irreducibility not certified")
        components.append(CycleComponent(comp, mult, certified))

    # Section cross-check: the multiplicity-weighted sections must add up
    # to the section of the full (m-saturated) cycle.  A mismatch means a
    # component was missed or under-split; never report such a cycle.
    z0 = ctx.ring.var(0)
    total = vdim_local(
        IdealPresentation(I.ring, _m_saturate(against, ctx).gens + (z0,)), budget
    )
    if total is not INFINITE:
        weighted = sum(
            c.multiplicity * vdim_local(IdealPresentation(I.ring, c.ideal.gens + (z0,)), budget)
            for c in components
        )
        if weighted != total:
            raise NonlocalContributionError(
                f"cycle sections do not add up ({weighted} != {total}); decomposition incomplete"
            )
    return CurveCycle(tuple(components))


# ---------------------------------------------------------------------------
# slice-based multiplicities


def _slice_ring(ctx: GermContext, fieldF) -> PolyRing:
    return PolyRing(ctx.ring.frame[1:], fieldF)


def _slice_poly(p: Polynomial, target: PolyRing, t):
    """Substitute z0 = t (a scalar of the target field) and drop z0."""
    F = target.field
    powers = [F.one]
    deg0 = p.degree_in(0)
    for _ in range(deg0):
        powers.append(powers[-1] * t)
    acc: dict = {}
    for e, c in p.terms.items():
        cc = F.coerce(c) * powers[e[0]]
        key = e[1:]
        prev = acc.get(key)
        cc = cc if prev is None else prev + cc
        if cc:
            acc[key] = cc
        elif key in acc:
            del acc[key]
    return Polynomial(target, acc)


def _slice_count(J: IdealPresentation, C: IdealPresentation, ctx: GermContext, fieldF, t):
    target = _slice_ring(ctx, fieldF)
    s_gens = [_slice_poly(g, target, t) for g in J.gens]
    S = IdealPresentation(target, s_gens)
    total = vdim_affine(S, ctx.budget)
    if total is INFINITE:
        raise NonlocalContributionError("generic slice of the cycle ideal is not finite")
    c_gens = [_slice_poly(g, target, t) for g in C.gens]
    off = saturate_by_ideal(S, IdealPresentation(target, c_gens), ctx.budget)
    rest = vdim_affine(off, ctx.budget)
    if rest is INFINITE:
        raise NonlocalContributionError("saturated slice is not finite")
    return total - rest


def component_multiplicity(
    J: IdealPresentation, C: IdealPresentation, ctx: GermContext, method: str | None = None
) -> int:
    """Cycle multiplicity of [V(J)] along the reduced component C.

    Default ("local") method: isolate the C-primary part of J by double
    saturation, Q = (J : (J : C^inf)^inf) after clearing the embedded
    part at the origin, then divide the two local section numbers
    vdim(Q + z0) / vdim(C + z0).  Both quotients are 1-dimensional
    Cohen-Macaulay (unmixed, so any proper parameter is a nonzerodivisor),
    which is what makes the section dimensions intersection numbers.
    Everything is local, so stray geometry of the global polynomial
    representative away from the origin cannot contaminate the count.

    The "slice" method cross-checks with an exact generic hyperplane
    slice z0 = t over the rational function field (vdim of the slice
    minus vdim of the slice saturated away from C); it counts the slice
    points of the *global* representative, so when some of them do not
    degenerate to the origin the division fails and the computation is
    rejected rather than misreported ("random" does the same with two
    agreeing random rational values of t).
    """
    if isinstance(C, CycleComponent):
        C = C.ideal
    method = method or ctx.options.mu_method
    den = vdim_local(IdealPresentation(ctx.ring, C.gens + (ctx.ring.var(0),)), ctx.budget)
    if den is INFINITE or den == 0:
        raise ImproperIntersectionError("component is not properly sliced by V(z0)")
    if method == "local":
        msat = _m_saturate(J, ctx)
        complement = saturate_by_ideal(msat, C, ctx.budget)
        primary = saturate_by_ideal(msat, complement, ctx.budget)
        num = vdim_local(
            IdealPresentation(ctx.ring, primary.gens + (ctx.ring.var(0),)), ctx.budget
        )
        if num is INFINITE:
            raise ImproperIntersectionError("primary part is not properly sliced by V(z0)")
    elif method == "slice":
        F = FunctionField(ctx.ring.field)
        num = _slice_count(J, C, ctx, F, F.gen())
    elif method == "random":
        from fractions import Fraction
        import random as _random

        rng_seed = _stable_seed(ctx.seed, "slice", tuple(g.to_text() for g in C.gens))
        rng = _random.Random(rng_seed)
        values = []
        for _ in range(2):
            t = ctx.ring.field.coerce(Fraction(rng.randint(10**3, 10**6), rng.randint(1, 97)))
            values.append(_slice_count(J, C, ctx, ctx.ring.field, t))
        if values[0] != values[1]:
            raise NonlocalContributionError("random slice counts disagree")
        num = values[0]
    else:
        raise InputError(f"unknown multiplicity method {method!r}")
    q, r = divmod(num, den)
    if r or q <= 0:
        raise NonlocalContributionError(
            f"slice count {num} is not a positive multiple of the section number {den}"
        )
    return q


# ---------------------------------------------------------------------------
# intersection numbers and local multiplicities


def intersect_number(Z, forms, ctx_or_budget=None) -> int:
    """Local intersection number (Z . V(forms))_0.

    ``Z`` is a CurveCycle or a 1-dimensional unmixed ideal; ``forms`` is
    one polynomial or a sequence (the intersection must be proper, i.e.
    0-dimensional at the origin).  For an unmixed 1-dimensional local
    quotient the vector-space dimension *is* the intersection number
    (such rings are Cohen-Macaulay); the cycle route and the direct
    route are asserted to agree by the invariant test suite.
    """
    budget = ctx_or_budget.budget if isinstance(ctx_or_budget, GermContext) else ctx_or_budget
    if isinstance(forms, Polynomial):
        forms = (forms,)
    forms = tuple(forms)

    def one(I: IdealPresentation) -> int:
        bigger = IdealPresentation(I.ring, I.gens + forms)
        d = dim_at_origin(bigger, budget)
        if d > 0:
            raise ImproperIntersectionError(f"improper intersection (dimension {d} at origin)")
        v = vdim_local(bigger, budget)
        if v is INFINITE:
            raise ImproperIntersectionError("improper intersection (infinite local dimension)")
        return v

    if isinstance(Z, CurveCycle):
        return sum(c.multiplicity * one(c.ideal) for c in Z.components)
    return one(Z)


def mult_at_origin(C: IdealPresentation, ctx: GermContext, nforms: int = 1) -> int:
    """Multiplicity at the origin via generic linear sections.

    Minimum of the local slice dimensions over seeded random forms; two
    consecutive samples agreeing with the running minimum are required,
    otherwise the context records a low-confidence warning.
    """
    if isinstance(C, CycleComponent):
        C = C.ideal
    best = None
    streak = 0
    key = tuple(g.to_text() for g in C.gens)
    for k in range(ctx.options.mult_tries):
        forms = tuple(
            random_linear_form(_stable_seed(ctx.seed, "mult", key, k, j), ctx.ring, 64)
            for j in range(nforms)
        )
        v = vdim_local(IdealPresentation(ctx.ring, C.gens + forms), ctx.budget)
        if v is INFINITE:
            continue
        if best is None or v < best:
            best = v
            streak = 1
        elif v == best:
            streak += 1
        if streak >= 2:
            return v
    if best is None:
        raise ImproperIntersectionError("no generic section gave a finite multiplicity")
    ctx.warn(f"low confidence multiplicity for {C!r}")
    return best


def is_smooth_at_origin(I: IdealPresentation, ctx: GermContext) -> bool:
    """Multiplicity-one criterion on a reduced equidimensional representative."""
    d = dim_at_origin(I, ctx.budget)
    if d <= 0:
        raise ImproperIntersectionError("smoothness test expects a positive-dimensional germ")
    return mult_at_origin(I, ctx, nforms=d) == 1


def is_transverse_line_section(I: IdealPresentation, forms, ctx: GermContext) -> bool:
    """Does the codimension-2 plane V(forms) meet the tangent space only at 0?

    The tangent space of a smooth germ is the common kernel of the
    degree-1 parts of a local standard basis; transversality is a rank
    computation on those linear parts stacked with the two forms.
    """
    if not is_smooth_at_origin(I, ctx):
        raise NotSmoothError("transversality test requires a smooth germ")
    ring = I.ring
    field = ring.field
    rows = []
    for g in std_basis(I, LOCAL, ctx.budget).basis:
        lin = g.homogeneous_part(1)
        if not lin.is_zero() and g.order_at_origin() == 1:
            rows.append(_linear_coeffs(lin))
    for a in forms:
        if a.total_degree() != 1 or a.constant_term():
            raise InputError("section forms must be homogeneous linear")
        rows.append(_linear_coeffs(a))
    return mat_rank(rows, field) == ring.nvars


def _linear_coeffs(p: Polynomial):
    ring = p.ring
    out = [ring.field.zero] * ring.nvars
    for e, c in p.terms.items():
        if sum(e) == 1:
            out[e.index(1)] = c
    return out


# ---------------------------------------------------------------------------
# the polar / Le split


def polar_surface(ctx: GermContext) -> IdealPresentation:
    """The ideal of partials from z2 on; must be a surface at the origin."""
    if ctx.n < 2:
        raise NotASurfaceError("polar surface needs at least three variables")
    ideal = IdealPresentation(ctx.ring, ctx.partials[2:])
    d = dim_at_origin(ideal, ctx.budget)
    if d != 2:
        raise NotASurfaceError(f"polar surface ideal has dimension {d} at the origin, not 2")
    return ideal


def polar_and_le(ctx: GermContext) -> tuple[CurveCycle, CurveCycle]:
    """Split [V(df/dz1, ..., df/dzn)] into polar curve and Le cycle."""
    J = ctx.minor_ideal
    f0 = ctx.partials[0]
    budget = ctx.budget
    if f0.is_zero():
        gamma_ideal = None
    else:
        gamma_ideal, _ = saturate(J, f0, budget)
        if dim_at_origin(gamma_ideal, budget) == -1:
            gamma_ideal = None
    if gamma_ideal is None:
        gamma = CurveCycle(())
        lam_pre = J
    else:
        gamma = decompose(gamma_ideal, ctx, against=gamma_ideal)
        lam_pre = saturate_by_ideal(J, gamma_ideal, budget)
    lam_ideal = _m_saturate(lam_pre, ctx)
    lam = decompose(lam_ideal, ctx, against=lam_ideal)
    if lam.is_empty():
        raise InternalInconsistencyError("Le cycle cannot be empty for a 1-dimensional critical locus")
    return gamma, lam


# ---------------------------------------------------------------------------
# irreducibility certification (conservative)


def certify_irreducible_at_origin(C: IdealPresentation, ctx: GermContext) -> bool:
    """True only when irreducibility of the germ is actually certified.

    Two criteria: the germ is smooth (multiplicity one), or the ideal is
    a complete intersection of linear forms and one curve equation whose
    Newton polygon in the two residual variables is a single edge with
    coprime endpoints (single Puiseux cycle).
    """
    budget = ctx.budget
    try:
        if mult_at_origin(C, ctx) == 1:
            return True
    except ImproperIntersectionError:
        return False
    gens = reduced_gens(C, budget)
    linear = [g for g in gens if g.total_degree() == 1]
    rest = [g for g in gens if g.total_degree() > 1]
    if len(rest) != 1 or len(linear) != C.ring.nvars - 2:
        return False
    g = rest[0]
    used = set()
    for form in linear:
        coeffs = _linear_coeffs(form)
        pivot = next((i for i in range(C.ring.nvars) if coeffs[i] and i not in used), None)
        if pivot is None:
            return False
        used.add(pivot)
        image_terms = {}
        for i, c in enumerate(coeffs):
            if i != pivot and c:
                e = [0] * C.ring.nvars
                e[i] = 1
                image_terms[tuple(e)] = -c / coeffs[pivot]
        g = g.subst_var(pivot, Polynomial(C.ring, image_terms))
    variables = [i for i in g.variables() if i not in used]
    if len(variables) != 2:
        return False
    u, v = variables
    support = [(e[u], e[v]) for e in g.terms]
    pure_u = [a for a, b in support if b == 0]
    pure_v = [b for a, b in support if a == 0]
    if not pure_u or not pure_v:
        return False
    A, B = min(pure_u), min(pure_v)
    from math import gcd

    if gcd(A, B) != 1:
        return False
    return all(B * a + A * b >= A * B for a, b in support)
