"""Numerical invariants and instance-level verification of the identities.

Computes the two Le numbers, the restricted Milnor number, the sum of
transversal Milnor numbers and the beta invariant -- the latter by three
independent formulas that must agree exactly:

    beta = lambda0 - lambda1 + sum of transversal Milnor numbers
         = (polar . V(df/dz0))_0 - sum_C mu_C * ((C . V(z0))_0 - 1)
         = (polar . V(f))_0 - mu(f|V(z0)) + sum_C mu_C

together with Teissier's identity
(polar . V(f))_0 = (polar . V(z0))_0 + (polar . V(df/dz0))_0 and the
slice identity mu(f|V(z0)) = (polar . V(z0))_0 + lambda1.

Every named check returns a :class:`Verdict` (hold / fail / undecided
with details); the engine never asserts a conjecture, only instance
consistency.  Genuine identity violations raise loudly -- they mean a
decomposition failed, and a wrong number must never be reported quietly.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .cycles import (
    CurveCycle,
    EngineOptions,
    GermContext,
    certify_irreducible_at_origin,
    component_multiplicity,
    decompose,
    intersect_number,
    is_smooth_at_origin,
    is_transverse_line_section,
    jacobian_ideal,
    make_context,
    milnor_number,
    mult_at_origin,
    polar_and_le,
    polar_surface,
    _m_saturate,
    _squarefree_gens,
    _stable_seed,
)
from .errors import (
    EngineError,
    FrameMismatchError,
    GenericityError,
    ImproperIntersectionError,
    InconsistentLambdaError,
    InputError,
    InternalInconsistencyError,
    NotASurfaceError,
    NotSmoothError,
)
from .factor import factor_multiplicities, poly_gcd, squarefree_part
from .ring import Polynomial, PolyRing, random_linear_form
from .sbasis import (
    INFINITE,
    IdealPresentation,
    dim_at_origin,
    membership,
    radical_contains,
    reduced_gens,
    vdim_local,
)

HOLD = "hold"
FAIL = "fail"
UNDECIDED = "undecided"


@dataclass
class Verdict:
    name: str
    status: str
    details: dict = dc_field(default_factory=dict)

    def holds(self) -> bool:
        return self.status == HOLD

    def to_dict(self) -> dict:
        return {"status": self.status, "details": _stringify(self.details)}


def _stringify(value):
    if isinstance(value, dict):
        return {str(k): _stringify(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_stringify(v) for v in value]
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, int):
        return str(value)
    return str(value)


@dataclass
class ComponentReport:
    gens: tuple
    multiplicity: int
    certified_prime: bool
    section_number: int  # (C . V(z0))_0
    mult_origin: int


@dataclass
class InvariantReport:
    lambda0: int
    lambda1: int
    mu_restricted: int
    sum_mu_circ: int
    betti_diff: int
    beta: int
    polar_components: list
    le_components: list
    checks: dict
    warnings: list

    def __post_init__(self):
        if self.beta != self.lambda0 - self.lambda1 + self.sum_mu_circ:
            raise InternalInconsistencyError("beta failed its defining identity")
        if self.beta < 0:
            raise InternalInconsistencyError("beta is negative; the invariant theory forbids this")
        weighted = sum(c.multiplicity * c.section_number for c in self.le_components)
        if self.lambda1 != weighted:
            raise InternalInconsistencyError("lambda1 disagrees with the weighted component sum")

    def to_dict(self) -> dict:
        return {
            "lambda0": str(self.lambda0),
            "lambda1": str(self.lambda1),
            "mu_restricted": str(self.mu_restricted),
            "sum_mu_circ": str(self.sum_mu_circ),
            "betti_diff": str(self.betti_diff),
            "beta": str(self.beta),
            "polar_components": [_component_dict(c) for c in self.polar_components],
            "le_components": [_component_dict(c) for c in self.le_components],
            "checks": {k: v.to_dict() for k, v in self.checks.items()},
            "warnings": list(self.warnings),
        }


def _component_dict(c: ComponentReport) -> dict:
    return {
        "ideal": list(c.gens),
        "multiplicity": str(c.multiplicity),
        "certified_prime": c.certified_prime,
        "section_number": str(c.section_number),
        "mult_origin": str(c.mult_origin),
    }


# ---------------------------------------------------------------------------
# core numbers


def mu_restriction(ctx: GermContext) -> int:
    """Milnor number of the restriction f|V(z0) at the origin."""
    gens = (ctx.ring.var(0),) + ctx.partials[1:]
    v = vdim_local(IdealPresentation(ctx.ring, gens), ctx.budget)
    if v is INFINITE:
        raise ImproperIntersectionError("restriction does not have an isolated critical point")
    return v


def le_numbers(ctx: GermContext, cycles=None) -> tuple[int, int]:
    """The pair (lambda0, lambda1); lambda1 is computed by two routes.

    Route one is the Le-cycle intersection with V(z0); route two is the
    slice identity mu(f|V(z0)) - (polar . V(z0))_0.  Disagreement means
    the decomposition under-split and is reported as an error.
    """
    gamma, lam = cycles if cycles is not None else polar_and_le(ctx)
    z0 = ctx.ring.var(0)
    lambda0 = intersect_number(gamma, ctx.partials[0], ctx) if not gamma.is_empty() else 0
    lambda1 = intersect_number(lam, z0, ctx)
    gamma_z0 = intersect_number(gamma, z0, ctx) if not gamma.is_empty() else 0
    other = mu_restriction(ctx) - gamma_z0
    if other != lambda1:
        raise InconsistentLambdaError(
            f"lambda1 routes disagree: cycle route {lambda1}, slice route {other}"
        )
    return lambda0, lambda1


def analyze(ctx: GermContext, with_checks: bool = True, h_hint: Polynomial | None = None) -> InvariantReport:
    """Full invariant computation with cross-checked beta formulas."""
    gamma, lam = polar_and_le(ctx)
    z0 = ctx.ring.var(0)
    f0 = ctx.partials[0]

    lambda0, lambda1 = le_numbers(ctx, (gamma, lam))
    mu_rest = mu_restriction(ctx)
    sum_mu = sum(c.multiplicity for c in lam)

    gamma_z0 = intersect_number(gamma, z0, ctx) if not gamma.is_empty() else 0
    gamma_f = intersect_number(gamma, ctx.f, ctx) if not gamma.is_empty() else 0

    le_reports = [
        ComponentReport(
            gens=c.gens_text(),
            multiplicity=c.multiplicity,
            certified_prime=c.certified_prime,
            section_number=intersect_number(c.ideal, z0, ctx),
            mult_origin=mult_at_origin(c.ideal, ctx),
        )
        for c in lam
    ]
    polar_reports = [
        ComponentReport(
            gens=c.gens_text(),
            multiplicity=c.multiplicity,
            certified_prime=c.certified_prime,
            section_number=intersect_number(c.ideal, z0, ctx),
            mult_origin=mult_at_origin(c.ideal, ctx),
        )
        for c in gamma
    ]

    beta1 = lambda0 - lambda1 + sum_mu
    beta2 = lambda0 - sum(
        c.multiplicity * (r.section_number - 1) for c, r in zip(lam, le_reports)
    )
    beta3 = gamma_f - mu_rest + sum_mu

    teissier_ok = gamma_f == gamma_z0 + lambda0
    if not teissier_ok:
        raise InternalInconsistencyError(
            f"Teissier identity failed: {gamma_f} != {gamma_z0} + {lambda0}"
        )
    if not (beta1 == beta2 == beta3):
        raise InternalInconsistencyError(
            f"beta formulas disagree: {beta1}, {beta2}, {beta3}"
        )

    checks: dict[str, Verdict] = {}
    checks["teissier"] = Verdict(
        "teissier", HOLD, {"gamma_f": gamma_f, "gamma_z0": gamma_z0, "lambda0": lambda0}
    )
    checks["slice_additivity"] = Verdict(
        "slice_additivity",
        HOLD,
        {"mu_restricted": mu_rest, "gamma_z0": gamma_z0, "lambda1": lambda1},
    )
    checks["beta_formulas"] = Verdict(
        "beta_formulas", HOLD, {"by_le_numbers": beta1, "by_sections": beta2, "by_milnor": beta3}
    )

    report = InvariantReport(
        lambda0=lambda0,
        lambda1=lambda1,
        mu_restricted=mu_rest,
        sum_mu_circ=sum_mu,
        betti_diff=lambda0 - lambda1,
        beta=beta1,
        polar_components=polar_reports,
        le_components=le_reports,
        checks=checks,
        warnings=ctx.warnings,
    )

    if with_checks:
        checks["gll"] = check_gll(ctx, (gamma, lam))
        checks["beta_conjecture"] = check_beta_conjecture(ctx, report, (gamma, lam))
        checks["surface_slice"] = check_surface_slice(ctx)
        checks["hypersurface_bound"] = check_hypersurface_bound(ctx, h_hint, (gamma, lam), report)
        checks["smooth_surface"] = check_smooth_surface(ctx, report, (gamma, lam))
    return report


def beta(ctx: GermContext) -> InvariantReport:
    """The beta invariant with its three-formula cross-check."""
    return analyze(ctx, with_checks=False)


# ---------------------------------------------------------------------------
# named checks


def check_gll(ctx: GermContext, cycles=None) -> Verdict:
    """Non-splitting equivalence: polar curve empty at 0 iff the restricted
    Milnor number equals the weighted sum over critical components."""
    gamma, lam = cycles if cycles is not None else polar_and_le(ctx)
    z0 = ctx.ring.var(0)
    mu_rest = mu_restriction(ctx)
    weighted = sum(c.multiplicity * intersect_number(c.ideal, z0, ctx) for c in lam)
    side_mu = mu_rest == weighted
    side_polar = gamma.is_empty()
    details = {
        "mu_restricted": mu_rest,
        "weighted_sum": weighted,
        "polar_empty": side_polar,
    }
    if side_mu != side_polar:
        details["reason"] = "equivalence violated"
        return Verdict("gll", FAIL, details)
    if side_mu:
        single = len(lam.components) == 1
        comp = lam.components[0]
        smooth = mult_at_origin(comp.ideal, ctx) == 1
        transverse = intersect_number(comp.ideal, z0, ctx) == 1
        details.update({"single_component": single, "smooth": smooth, "transverse": transverse})
        if not (single and smooth and transverse):
            details["reason"] = "addendum violated"
            return Verdict("gll", FAIL, details)
    return Verdict("gll", HOLD, details)


def check_beta_conjecture(ctx: GermContext, report: InvariantReport, cycles=None) -> Verdict:
    """Instance consistency with the vanishing-beta conjecture.

    When beta is 0 the conjectural conclusion (single smooth critical
    component, empty polar curve, lambda0 = 0) must be observed; any
    violation is a headline result, reported as a failure and never
    suppressed.  Positive beta triggers no claim.
    """
    gamma, lam = cycles if cycles is not None else polar_and_le(ctx)
    details: dict = {"beta": report.beta}
    single = len(lam.components) == 1
    smooth = single and mult_at_origin(lam.components[0].ideal, ctx) == 1
    details["single_component"] = single
    details["smooth"] = smooth
    details["lambda0"] = report.lambda0
    if report.beta == 0:
        ok = gamma.is_empty() and single and smooth and report.lambda0 == 0
        details["polar_empty"] = gamma.is_empty()
        if not ok:
            details["reason"] = "beta vanishes but the conjectural conclusion fails"
            return Verdict("beta_conjecture", FAIL, details)
        return Verdict("beta_conjecture", HOLD, details)
    details["note"] = "beta positive; the conjecture makes no claim here"
    return Verdict("beta_conjecture", HOLD, details)


def check_surface_slice(ctx: GermContext) -> Verdict:
    """Triple intersection identity for the polar surface.

    Conditions: (a) the surface meets V(f) and V(z0) in dimension 0 at
    the origin, (b) the surface meets V(z0, z1) in dimension 0.  These
    must be equivalent, and when they hold
    (surface . V(f) . V(z0))_0 = mu(f|V(z0)) + (surface . V(z0, z1))_0.
    """
    if ctx.n < 2:
        return Verdict("surface_slice", UNDECIDED, {"reason": "needs at least three variables"})
    try:
        g2 = polar_surface(ctx)
    except NotASurfaceError as exc:
        return Verdict("surface_slice", UNDECIDED, {"reason": str(exc)})
    ring = ctx.ring
    z0, z1 = ring.var(0), ring.var(1)
    budget = ctx.budget
    cond_fz0 = dim_at_origin(IdealPresentation(ring, g2.gens + (ctx.f, z0)), budget) <= 0
    cond_line = dim_at_origin(IdealPresentation(ring, g2.gens + (z0, z1)), budget) <= 0
    details = {"proper_f_slice": cond_fz0, "proper_line": cond_line}
    if cond_fz0 != cond_line:
        details["reason"] = "equivalence of properness conditions violated"
        return Verdict("surface_slice", FAIL, details)
    if not cond_fz0:
        details["note"] = "conditions fail consistently; identity not applicable"
        return Verdict("surface_slice", HOLD, details)
    curve = _m_saturate(IdealPresentation(ring, g2.gens + (ctx.f,)), ctx)
    lhs = vdim_local(IdealPresentation(ring, curve.gens + (z0,)), budget)
    mu_rest = mu_restriction(ctx)
    line = vdim_local(IdealPresentation(ring, g2.gens + (z0, z1)), budget)
    details.update({"triple": lhs, "mu_restricted": mu_rest, "surface_line": line})
    if lhs != mu_rest + line:
        details["reason"] = "identity failed"
        return Verdict("surface_slice", FAIL, details)
    return Verdict("surface_slice", HOLD, details)


def _surface_cycle(ctx: GermContext, g2: IdealPresentation):
    """[V(g2)] as a list of (reduced component ideal, multiplicity, certified)."""
    ring = ctx.ring
    if len(g2.gens) == 1:
        out = []
        for q, m in factor_multiplicities(g2.gens[0]):
            comp = IdealPresentation(ring, (q,))
            if dim_at_origin(comp, ctx.budget) == -1:
                continue
            out.append((comp, m, True))
        return out
    reduced = _squarefree_gens(g2, ctx.budget)
    ctx.warn("polar surface treated as a single unsplit component")
    return [(reduced, 1, False)]


def check_hypersurface_bound(
    ctx: GermContext,
    h_hint: Polynomial | None = None,
    cycles=None,
    report: InvariantReport | None = None,
) -> Verdict:
    """Lower bound for beta when the polar curve is a divisor in the surface.

    Hypothesis one: every component of the (m-saturated) intersection of
    the polar surface with V(f) is a curve properly sliced by V(z0) with
    section number equal to its multiplicity at the origin.  Hypothesis
    two: the polar curve cycle equals surface . V(h) for some h; the
    candidates tried are the supplied hint and the factors of df/dz1.
    When both hold the two displayed inequalities are verified.
    """
    if ctx.n < 2:
        return Verdict("hypersurface_bound", UNDECIDED, {"reason": "needs at least three variables"})
    try:
        g2 = polar_surface(ctx)
    except NotASurfaceError as exc:
        return Verdict("hypersurface_bound", UNDECIDED, {"reason": str(exc)})
    gamma, lam = cycles if cycles is not None else polar_and_le(ctx)
    ring = ctx.ring
    z0, z1 = ring.var(0), ring.var(1)
    budget = ctx.budget
    details: dict = {}

    # hypothesis (1)
    hyp1 = True
    reasons = []
    inter = IdealPresentation(ring, g2.gens + (ctx.f,))
    d = dim_at_origin(inter, budget)
    if d != 1:
        hyp1 = False
        reasons.append(f"surface ∩ V(f) has dimension {d} at the origin")
        comps_detail = []
    else:
        sat = _m_saturate(inter, ctx)
        comps = decompose(sat, ctx, against=sat)
        comps_detail = []
        for comp in comps:
            section = intersect_number(comp.ideal, z0, ctx)
            m0 = mult_at_origin(comp.ideal, ctx)
            comps_detail.append(
                {"ideal": comp.gens_text(), "section": section, "mult_origin": m0}
            )
            if section != m0:
                hyp1 = False
                reasons.append(f"component {comp.gens_text()} has section {section} != mult {m0}")
    details["hypothesis_sections"] = {"holds": hyp1, "components": comps_detail}

    # hypothesis (2): find h with polar curve = surface . V(h)
    surface_cycle = _surface_cycle(ctx, g2)
    candidates: list[Polynomial] = []
    if h_hint is not None:
        candidates.append(h_hint)
    for q, _m in factor_multiplicities(ctx.partials[1]):
        if q not in candidates:
            candidates.append(q)
    found_h = None
    tried = []
    for h in candidates:
        if h.is_zero() or h.is_constant() or h.constant_term():
            tried.append({"h": h.to_text(), "result": "skipped (unit or nonvanishing)"})
            continue
        try:
            cycle = _intersect_surface_with(ctx, surface_cycle, h)
        except (ImproperIntersectionError, EngineError) as exc:
            tried.append({"h": h.to_text(), "result": f"improper: {exc}"})
            continue
        if _cycles_equal(ctx, cycle, gamma):
            found_h = h
            tried.append({"h": h.to_text(), "result": "matches the polar curve"})
            break
        tried.append({"h": h.to_text(), "result": "cycle differs"})
    details["hypothesis_divisor"] = {"holds": found_h is not None, "candidates": tried}

    if found_h is None:
        details["reason"] = "no candidate h"
        return Verdict("hypersurface_bound", UNDECIDED, details)
    if not hyp1:
        details["reason"] = "; ".join(reasons)
        return Verdict("hypersurface_bound", UNDECIDED, details)

    line_number = sum(
        m * vdim_local(IdealPresentation(ring, comp.gens + (z0, z1)), budget)
        for comp, m, _ in surface_cycle
    )
    rep = report if report is not None else analyze(ctx, with_checks=False)
    betti_ok = rep.betti_diff >= line_number
    beta_ok = rep.beta >= line_number + rep.sum_mu_circ
    details.update(
        {
            "h": found_h.to_text(),
            "surface_line_number": line_number,
            "betti_diff": rep.betti_diff,
            "sum_mu_circ": rep.sum_mu_circ,
            "beta": rep.beta,
            "betti_inequality": betti_ok,
            "beta_inequality": beta_ok,
        }
    )
    if betti_ok and beta_ok:
        return Verdict("hypersurface_bound", HOLD, details)
    details["reason"] = "a displayed inequality failed"
    return Verdict("hypersurface_bound", FAIL, details)


def _intersect_surface_with(ctx: GermContext, surface_cycle, h: Polynomial) -> CurveCycle:
    """The curve cycle (surface cycle) . V(h), component by component."""
    pieces = []
    for comp, m, _certified in surface_cycle:
        ideal = IdealPresentation(ctx.ring, comp.gens + (h,))
        d = dim_at_origin(ideal, ctx.budget)
        if d == -1:
            continue
        if d != 1:
            raise ImproperIntersectionError("V(h) does not cut the surface properly")
        cycle = decompose(ideal, ctx, against=ideal)
        for c in cycle:
            pieces.append((c.ideal, m * c.multiplicity, c.certified_prime))
    merged: list[list] = []
    for ideal, mult, cert in pieces:
        for row in merged:
            if _same_variety(ctx, row[0], ideal):
                row[1] += mult
                break
        else:
            merged.append([ideal, mult, cert])
    from .cycles import CycleComponent

    return CurveCycle(tuple(CycleComponent(i, m, c) for i, m, c in merged))


def _same_variety(ctx: GermContext, A: IdealPresentation, B: IdealPresentation) -> bool:
    budget = ctx.budget
    return all(radical_contains(A, g, budget) for g in B.gens) and all(
        radical_contains(B, g, budget) for g in A.gens
    )


def _cycles_equal(ctx: GermContext, A: CurveCycle, B: CurveCycle) -> bool:
    if len(A.components) != len(B.components):
        return False
    unmatched = list(B.components)
    for a in A.components:
        for i, b in enumerate(unmatched):
            if a.multiplicity == b.multiplicity and _same_variety(ctx, a.ideal, b.ideal):
                unmatched.pop(i)
                break
        else:
            return False
    return True


def check_smooth_surface(ctx: GermContext, report=None, cycles=None) -> Verdict:
    """Smooth polar surface + transverse coordinate plane section.

    When the reduced polar surface is smooth at the origin and V(z0, z1)
    is transverse to it, the vanishing-beta conclusion is guaranteed;
    the verdict also records the observed conjecture consistency.
    """
    if ctx.n < 2:
        return Verdict("smooth_surface", UNDECIDED, {"reason": "needs at least three variables"})
    try:
        g2 = polar_surface(ctx)
    except NotASurfaceError as exc:
        return Verdict("smooth_surface", UNDECIDED, {"reason": str(exc)})
    reduced = _squarefree_gens(g2, ctx.budget)
    smooth = is_smooth_at_origin(reduced, ctx)
    details = {"smooth": smooth}
    if not smooth:
        details["note"] = "hypotheses fail; no conclusion"
        return Verdict("smooth_surface", HOLD, details)
    transverse = is_transverse_line_section(reduced, (ctx.ring.var(0), ctx.ring.var(1)), ctx)
    details["transverse"] = transverse
    if not transverse:
        details["note"] = "hypotheses fail; no conclusion"
        return Verdict("smooth_surface", HOLD, details)
    details["note"] = "hypotheses hold; vanishing-beta conclusion guaranteed for this germ"
    rep = report if report is not None else analyze(ctx, with_checks=False)
    consistency = check_beta_conjecture(ctx, rep, cycles)
    details["conjecture_consistency"] = consistency.status
    if consistency.status == FAIL:
        return Verdict("smooth_surface", FAIL, details)
    return Verdict("smooth_surface", HOLD, details)


# ---------------------------------------------------------------------------
# suspensions


def suspend(g: Polynomial, h: Polynomial) -> Polynomial:
    """The join g(+)h on the disjoint union of the frames.

    Requires a 1-dimensional critical locus for g and an isolated
    critical point for h; the critical locus of the join is then a copy
    of the critical locus of g.
    """
    rg, rh = g.ring, h.ring
    if set(rg.frame) & set(rh.frame):
        raise FrameMismatchError("frames must be disjoint for a suspension")
    if rg.field != rh.field:
        raise FrameMismatchError("coefficient fields must agree")
    dg = dim_at_origin(jacobian_ideal(g))
    if dg != 1:
        raise InputError(f"first summand must have a 1-dimensional critical locus, got {dg}")
    if milnor_number(h) is INFINITE:
        raise InputError("second summand must have an isolated critical point")
    joined = PolyRing(rg.frame + rh.frame, rg.field)
    lift_g = Polynomial(joined, {e + (0,) * rh.nvars: c for e, c in g.terms.items()})
    lift_h = Polynomial(joined, {(0,) * rg.nvars + e: c for e, c in h.terms.items()})
    return lift_g + lift_h


def check_suspension(
    g: Polynomial,
    h: Polynomial,
    seed: int = 0,
    options: EngineOptions | None = None,
    g_hint: Polynomial | None = None,
) -> Verdict:
    """Multiplicativity of beta under suspension: beta(g(+)h) = mu(h) beta(g)."""
    f = suspend(g, h)
    ctx_g = make_context(g, z0_hint=g_hint, seed=seed, options=options)
    beta_g = beta(ctx_g).beta
    mu_h = milnor_number(h)
    hint = Polynomial(
        f.ring, {e + (0,) * h.ring.nvars: c for e, c in ctx_g.z0_source.terms.items()}
    )
    ctx_f = make_context(f, z0_hint=hint, seed=seed, options=options)
    beta_f = beta(ctx_f).beta
    details = {"beta_g": beta_g, "mu_h": mu_h, "beta_joined": beta_f}
    if beta_f == mu_h * beta_g:
        return Verdict("suspension", HOLD, details)
    details["reason"] = "multiplicativity failed"
    return Verdict("suspension", FAIL, details)


# ---------------------------------------------------------------------------
# non-reduced plane curves


@dataclass(frozen=True)
class StructuredPlaneCurve:
    """A plane germ presented as g^p * h with g irreducible (user-asserted)."""

    g: Polynomial
    p: int
    h: Polynomial

    def __post_init__(self):
        ring = self.g.ring
        if ring.nvars != 2:
            raise InputError("structured plane curves live in two variables")
        if not isinstance(self.p, int) or self.p <= 1:
            raise InputError("the exponent p must be an integer greater than 1")
        if self.g.is_zero() or self.g.is_constant() or self.g.constant_term():
            raise InputError("g must be a non-unit vanishing at the origin")
        if squarefree_part(self.g) not in (self.g, -self.g) and not _associate(
            squarefree_part(self.g), self.g
        ):
            raise InputError("g must be squarefree")
        if self.h.is_zero():
            raise InputError("h must be nonzero")
        if self.h.ring != ring:
            raise FrameMismatchError("g and h must share a ring")
        if self.g.divides(self.h):
            raise InputError("g divides h")

    def curve(self) -> Polynomial:
        return self.g**self.p * self.h


def _associate(a: Polynomial, b: Polynomial) -> bool:
    from .ring import content_normalized

    return content_normalized(a) == content_normalized(b)


def beta_plane_curve(s: StructuredPlaneCurve, seed: int = 0, options: EngineOptions | None = None) -> int:
    """Closed-form beta for g^p h, verified against the full pipeline.

    Branches on h(0): when h is a unit at the origin the answer is
    p * mu(g); otherwise (p+1) (g,h)_0 + p mu(g) + mu(h) - 1.
    """
    ring = s.g.ring
    budget = None
    mu_g = milnor_number(s.g)
    if mu_g is INFINITE:
        raise InputError("g must have an isolated singularity (it is squarefree)")
    if s.h.constant_term():
        value = s.p * mu_g
    else:
        pair = vdim_local(IdealPresentation(ring, (s.g, s.h)), budget)
        mu_h = milnor_number(s.h)
        if pair is INFINITE or mu_h is INFINITE:
            raise InputError("the structured formula needs (g,h)_0 and mu(h) finite")
        value = (s.p + 1) * pair + s.p * mu_g + mu_h - 1
    ctx = make_context(s.curve(), z0_hint=None, seed=seed, options=options)
    pipeline = beta(ctx).beta
    if pipeline != value:
        raise InternalInconsistencyError(
            f"formula mismatch: closed form {value}, pipeline {pipeline}"
        )
    return value


def mu_product_formula(g: Polynomial, h: Polynomial) -> int:
    """Milnor number of a product of coprime plane germs, two ways.

    Evaluates 2 (g,h)_0 + mu(g) + mu(h) - 1 and asserts it equals the
    Milnor number of g*h computed directly from the Jacobian ideal.
    """
    ring = g.ring
    if ring.nvars != 2 or h.ring != ring:
        raise InputError("the product formula is for two plane germs")
    if not poly_gcd(g, h).is_constant():
        raise InputError("g and h must be coprime")
    mu_g, mu_h = milnor_number(g), milnor_number(h)
    pair = vdim_local(IdealPresentation(ring, (g, h)))
    direct = milnor_number(g * h)
    if INFINITE in (mu_g, mu_h, pair, direct):
        raise InputError("the product must have an isolated critical point")
    value = 2 * pair + mu_g + mu_h - 1
    if value != direct:
        raise InternalInconsistencyError(
            f"product formula mismatch: formula {value}, direct {direct}"
        )
    return value


# ---------------------------------------------------------------------------
# independence of the linear form


def z0_independence(ctx: GermContext, trials: int = 3) -> Verdict:
    """Recompute beta under several generic forms; beta must not move.

    The individual Le numbers may vary with the form and are recorded
    without being asserted equal.
    """
    if trials < 1:
        raise InputError("need at least one trial")
    base = analyze(ctx, with_checks=False)
    runs = [
        {
            "z0": ctx.z0_source.to_text(),
            "lambda0": base.lambda0,
            "lambda1": base.lambda1,
            "beta": base.beta,
        }
    ]
    betas = {base.beta}
    attempts = 0
    k = 0
    seen = {ctx.z0_source.to_text()}
    while len(runs) < trials + 1 and attempts < 8 * trials:
        attempts += 1
        form = random_linear_form(
            _stable_seed(ctx.seed, "indep", k), ctx.original_ring, ctx.options.z0_coeff_bound
        )
        k += 1
        if form.to_text() in seen:
            continue
        seen.add(form.to_text())
        try:
            trial_ctx = make_context(
                ctx.original_f, z0_hint=form, seed=ctx.seed, options=ctx.options
            )
            rep = analyze(trial_ctx, with_checks=False)
        except (GenericityError, EngineError):
            continue
        runs.append(
            {
                "z0": form.to_text(),
                "lambda0": rep.lambda0,
                "lambda1": rep.lambda1,
                "beta": rep.beta,
            }
        )
        betas.add(rep.beta)
    details = {"runs": runs, "nonnegative": all(r["beta"] >= 0 for r in runs)}
    if len(runs) < trials + 1:
        details["reason"] = "not enough generic forms succeeded"
        return Verdict("z0_independence", UNDECIDED, details)
    if len(betas) == 1 and details["nonnegative"]:
        return Verdict("z0_independence", HOLD, details)
    details["reason"] = "beta varied across linear forms"
    return Verdict("z0_independence", FAIL, details)
