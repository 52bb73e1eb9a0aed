"""Exact exponent calculus for weighted parabolic evolution settings.

Everything here is plain rational arithmetic over `fractions.Fraction`:
criticality slacks, critical weights, the mixed time-space integrability
exponents, the starred exponents behind Serrin-type criteria, and the
interpolation-lemma exponents.  Outputs are exact whenever inputs are exact;
float inputs are snapped to nearby rationals and flagged `inexact`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Union

Rational = Union[int, float, Fraction]

# floats snap to the nearest rational with denominator <= this
_COERCE_DENOM = 10**12


class ParameterError(ValueError):
    """Inadmissible parameter combination."""


class GrowthWindowError(ParameterError):
    """A growth term's (phi, beta) lies outside the admissible window."""


def as_fraction(x: Rational) -> Fraction:
    """Coerce a number to an exact Fraction.

    ints and Fractions pass through exactly; floats snap to the nearest
    rational with denominator <= 1e12 so that decimal literals like 0.2
    mean 1/5.  Callers that care about exactness should pass Fractions.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise ParameterError(f"not a number: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ParameterError(f"non-finite value: {x!r}")
        return Fraction(x).limit_denominator(_COERCE_DENOM)
    raise ParameterError(f"not a number: {x!r}")


def is_exact(x: Rational) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def _any_inexact(*xs: Rational) -> bool:
    return any(not is_exact(x) for x in xs)


@dataclass(frozen=True)
class SobolevScale:
    """Interpolation scale of Bessel-potential spaces on the torus.

    The space at parameter theta in [0,1] has smoothness
    (1-theta)*low + theta*high and integrability q.
    """

    low: Fraction
    high: Fraction
    q: Fraction
    inexact: bool = False

    def __post_init__(self) -> None:
        inexact = _any_inexact(self.low, self.high, self.q)
        object.__setattr__(self, "low", as_fraction(self.low))
        object.__setattr__(self, "high", as_fraction(self.high))
        object.__setattr__(self, "q", as_fraction(self.q))
        object.__setattr__(self, "inexact", bool(self.inexact) or inexact)
        if not self.high > self.low:
            raise ParameterError("scale needs high > low smoothness")
        if not self.q > 1:
            raise ParameterError("scale integrability must exceed 1")

    @property
    def gap(self) -> Fraction:
        return self.high - self.low

    def smoothness_at(self, theta: Rational) -> Fraction:
        theta = as_fraction(theta)
        return (1 - theta) * self.low + theta * self.high


@dataclass(frozen=True)
class Setting:
    """A (scale, p, kappa) configuration for the weighted evolution problem.

    Weight admissibility: kappa in [0, p/2-1) for p > 2, and kappa = 0 when
    p = 2 (the Hilbert-space endpoint admits no weight).
    """

    scale: SobolevScale
    p: Fraction
    kappa: Fraction
    inexact: bool = False

    def __post_init__(self) -> None:
        inexact = self.scale.inexact or _any_inexact(self.p, self.kappa)
        object.__setattr__(self, "p", as_fraction(self.p))
        object.__setattr__(self, "kappa", as_fraction(self.kappa))
        object.__setattr__(self, "inexact", bool(self.inexact) or inexact)
        if self.p < 2:
            raise ParameterError("time integrability p must be >= 2")
        if self.p == 2:
            if self.kappa != 0:
                raise ParameterError("p = 2 forces kappa = 0")
        elif not (0 <= self.kappa < self.p / 2 - 1):
            raise ParameterError(
                f"kappa={self.kappa} outside [0, p/2-1) for p={self.p}"
            )

    @property
    def weight_index(self) -> Fraction:
        """(1+kappa)/p, the weight's contribution to every exponent window."""
        return (1 + self.kappa) / self.p


@dataclass(frozen=True)
class GrowthTerm:
    """One polynomial-growth term (rho, phi, beta) of the nonlinearity.

    Admissibility relative to a Setting: phi in (1-(1+kappa)/p, 1) and
    beta in (1-(1+kappa)/p, phi].
    """

    rho: Fraction
    phi: Fraction
    beta: Fraction
    inexact: bool = False

    def __post_init__(self) -> None:
        inexact = _any_inexact(self.rho, self.phi, self.beta)
        object.__setattr__(self, "rho", as_fraction(self.rho))
        object.__setattr__(self, "phi", as_fraction(self.phi))
        object.__setattr__(self, "beta", as_fraction(self.beta))
        object.__setattr__(self, "inexact", bool(self.inexact) or inexact)
        if self.rho < 0:
            raise ParameterError("growth power rho must be >= 0")

    def window_ok(self, weight_index: Fraction) -> bool:
        lo = 1 - weight_index
        return lo < self.phi < 1 and lo < self.beta <= self.phi


@dataclass(frozen=True)
class GrowthSpec:
    """Growth terms of the drift (f) and diffusion (g) nonlinearities."""

    f_terms: tuple[GrowthTerm, ...] = ()
    g_terms: tuple[GrowthTerm, ...] = ()
    has_trace_part_f: bool = False
    has_trace_part_g: bool = False
    sublinearity_constant: Optional[float] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "f_terms", tuple(self.f_terms))
        object.__setattr__(self, "g_terms", tuple(self.g_terms))
        if not self.f_terms and not self.g_terms:
            raise ParameterError("growth spec needs at least one term")

    def terms(self) -> Iterator[tuple[str, int, GrowthTerm]]:
        for i, t in enumerate(self.f_terms):
            yield "f", i, t
        for i, t in enumerate(self.g_terms):
            yield "g", i, t

    @property
    def inexact(self) -> bool:
        return any(t.inexact for _, _, t in self.terms())

    @property
    def max_phi(self) -> Fraction:
        return max(t.phi for _, _, t in self.terms())

    @property
    def max_rho(self) -> Fraction:
        return max(t.rho for _, _, t in self.terms())


@dataclass(frozen=True)
class BesovDescriptor:
    """B^{smoothness}_{q,p} on the torus; p is the secondary index."""

    smoothness: Fraction
    q: Fraction
    p: Fraction


def trace_space(s: Setting) -> BesovDescriptor:
    """Besov space of admissible initial data for a Setting.

    Real interpolation of the Bessel scale at parameter 1-(1+kappa)/p gives
    smoothness high - (high-low)*(1+kappa)/p, secondary index p.
    """
    sm = s.scale.high - s.scale.gap * s.weight_index
    return BesovDescriptor(smoothness=sm, q=s.scale.q, p=s.p)


def threshold_weight_index(term: GrowthTerm) -> Optional[Fraction]:
    """Critical value of (1+kappa)/p for one term; None when rho = 0.

    Solves rho*(phi-1+c) + beta = 1 for c.  Terms with rho = 0 never bind:
    their subcriticality gap 1-beta is positive and weight-independent.
    """
    if term.rho == 0:
        return None
    return (1 - term.beta) / term.rho + (1 - term.phi)


@dataclass(frozen=True)
class TermCriticality:
    part: str
    index: int
    term: GrowthTerm
    window_ok: bool
    lhs: Fraction
    slack: Fraction
    weight_margin: Optional[Fraction]
    critical: bool


@dataclass(frozen=True)
class XEntry:
    """One mixed-norm entry: time integrability, scale parameter, smoothness."""

    time_exponent: Fraction
    theta: Fraction
    smoothness: Fraction
    space_q: Fraction


@dataclass(frozen=True)
class TermExponents:
    part: str
    index: int
    rho_star: Fraction
    r: Fraction
    r_conj: Fraction
    x_entries: tuple[XEntry, XEntry]


@dataclass(frozen=True)
class CriticalityReport:
    terms: tuple[TermCriticality, ...]
    is_critical: bool
    all_subcritical: bool
    all_windows_ok: bool
    kappa_crit: Optional[Fraction] = None
    binding_terms: tuple[tuple[str, int], ...] = ()
    exponents: Optional[tuple[TermExponents, ...]] = None
    inexact: bool = False


def subcriticality(g: GrowthSpec, s: Setting) -> CriticalityReport:
    """Per-term criticality arithmetic at a given Setting.

    slack = 1 - [rho*(phi-1+(1+kappa)/p) + beta].  A term is critical when
    its slack is exactly zero; the report is critical when some term is and
    none is supercritical.  Window violations never raise here: they are
    reported per term via window_ok (the synthesis ops reject instead).
    """
    c = s.weight_index
    rows = []
    for part, i, t in g.terms():
        lhs = t.rho * (t.phi - 1 + c) + t.beta
        slack = 1 - lhs
        thr = threshold_weight_index(t)
        margin = None if thr is None else thr - c
        rows.append(
            TermCriticality(
                part=part,
                index=i,
                term=t,
                window_ok=t.window_ok(c),
                lhs=lhs,
                slack=slack,
                weight_margin=margin,
                critical=(slack == 0),
            )
        )
    rows = tuple(rows)
    all_sub = all(r.slack >= 0 for r in rows)
    return CriticalityReport(
        terms=rows,
        is_critical=all_sub and any(r.critical for r in rows),
        all_subcritical=all_sub,
        all_windows_ok=all(r.window_ok for r in rows),
        inexact=g.inexact or s.inexact,
    )


def critical_weight(g: GrowthSpec, p: Rational) -> Optional[Fraction]:
    """Smallest admissible kappa >= 0 at which some term turns critical.

    Per binding term (rho > 0) the equality kappa = p*c* - 1 with
    c* = (1-beta)/rho + (1-phi); the minimum over terms is returned when it
    lies in the admissible weight range for p (kappa = 0 is the only
    admissible value at p = 2), otherwise None.
    """
    p = as_fraction(p)
    if p < 2:
        raise ParameterError("time integrability p must be >= 2")
    candidates = []
    for _, _, t in g.terms():
        thr = threshold_weight_index(t)
        if thr is not None:
            candidates.append(p * thr - 1)
    if not candidates:
        return None
    kappa = min(candidates)
    if kappa == 0:
        return kappa
    if p > 2 and 0 <= kappa < p / 2 - 1:
        return kappa
    return None


def critical_weight_binding(g: GrowthSpec, p: Rational) -> tuple[tuple[str, int], ...]:
    """Indices of the terms achieving the critical weight (may be several)."""
    kappa = critical_weight(g, p)
    if kappa is None:
        return ()
    p = as_fraction(p)
    out = []
    for part, i, t in g.terms():
        thr = threshold_weight_index(t)
        if thr is not None and p * thr - 1 == kappa:
            out.append((part, i))
    return tuple(out)


def _require_windows(g: GrowthSpec, s: Setting) -> None:
    c = s.weight_index
    bad = [(part, i) for part, i, t in g.terms() if not t.window_ok(c)]
    if bad:
        raise GrowthWindowError(
            f"terms outside the (1-(1+kappa)/p, 1) window at weight index {c}: {bad}"
        )


def _require_subcritical(g: GrowthSpec, s: Setting) -> None:
    c = s.weight_index
    for part, i, t in g.terms():
        if t.rho * (t.phi - 1 + c) + t.beta > 1:
            raise ParameterError(f"term ({part},{i}) is supercritical at this setting")


def rho_star_and_x_exponents(g: GrowthSpec, s: Setting) -> tuple[TermExponents, ...]:
    """Per-term mixed time-space integrability exponents.

    rho* = (1-beta)/(phi-1+c), r' = c/(1-beta), r = c/(beta-1+c) with
    c = (1+kappa)/p; conjugacy 1/r + 1/r' = 1 is exact.  The two mixed-norm
    entries are (p*r at scale parameter beta) and (rho*p*r' at phi).
    """
    _require_windows(g, s)
    _require_subcritical(g, s)
    c = s.weight_index
    out = []
    for part, i, t in g.terms():
        denom = t.phi - 1 + c  # > 0 inside the window
        rho_star = (1 - t.beta) / denom
        r_conj = c / (1 - t.beta)
        r = c / (t.beta - 1 + c)
        entries = (
            XEntry(
                time_exponent=s.p * r,
                theta=t.beta,
                smoothness=s.scale.smoothness_at(t.beta),
                space_q=s.scale.q,
            ),
            XEntry(
                time_exponent=rho_star * s.p * r_conj,
                theta=t.phi,
                smoothness=s.scale.smoothness_at(t.phi),
                space_q=s.scale.q,
            ),
        )
        out.append(
            TermExponents(
                part=part, index=i, rho_star=rho_star, r=r, r_conj=r_conj,
                x_entries=entries,
            )
        )
    return tuple(out)


@dataclass(frozen=True)
class StarParams:
    part: str
    index: int
    rho_eff: Fraction
    phi_star: Fraction
    beta_star: Fraction
    case_id: int
    epsilon: Optional[Fraction]


def star_params_term(
    rho: Rational, phi: Rational, beta: Rational, p: Rational, kappa: Rational
) -> StarParams:
    """Starred exponents for one term, from raw parameters.

    Case 1 (phi* = phi, beta* = 1 - rho*(phi-1+c)) applies when
    rho*(phi-1+c) + phi >= 1; otherwise case 2 equalizes
    beta* = phi* = 1 - rho/(rho+1)*c.  rho = 0 is replaced by the canonical
    eps = min(kappa+1, (1-phi)/(phi-1+c))/2, which always lands in case 2.
    The identity rho_eff*(phi*-1+c) + beta* = 1 is exact in both cases.

    Only slack >= 0 and phi < 1 are required here (beta enters the
    construction through the slack alone); the GrowthSpec-level wrapper
    additionally enforces the admissibility window.
    """
    rho, phi, beta = as_fraction(rho), as_fraction(phi), as_fraction(beta)
    p, kappa = as_fraction(p), as_fraction(kappa)
    if p <= 1 or kappa < 0:
        raise ParameterError("need p > 1 and kappa >= 0")
    c = (1 + kappa) / p
    if not phi < 1:
        raise GrowthWindowError(f"phi={phi} must be below 1")
    if rho * (phi - 1 + c) + beta > 1:
        raise ParameterError("supercritical term has no starred exponents")
    if rho > 0:
        rho_eff, eps = rho, None
    else:
        if not phi > 1 - c:
            raise GrowthWindowError(
                f"rho=0 term needs phi={phi} above 1-(1+kappa)/p={1 - c}"
            )
        eps = min(kappa + 1, (1 - phi) / (phi - 1 + c)) / 2
        rho_eff = eps
    if rho_eff * (phi - 1 + c) + phi >= 1:
        case_id = 1
        phi_star = phi
        beta_star = 1 - rho_eff * (phi - 1 + c)
    else:
        case_id = 2
        phi_star = beta_star = 1 - rho_eff / (rho_eff + 1) * c
    return StarParams(
        part="", index=-1, rho_eff=rho_eff, phi_star=phi_star,
        beta_star=beta_star, case_id=case_id, epsilon=eps,
    )


def star_params(g: GrowthSpec, s: Setting) -> tuple[StarParams, ...]:
    """Starred exponents for every term of a GrowthSpec at a Setting."""
    _require_windows(g, s)
    _require_subcritical(g, s)
    out = []
    for part, i, t in g.terms():
        sp = star_params_term(t.rho, t.phi, t.beta, s.p, s.kappa)
        out.append(
            StarParams(
                part=part, index=i, rho_eff=sp.rho_eff, phi_star=sp.phi_star,
                beta_star=sp.beta_star, case_id=sp.case_id, epsilon=sp.epsilon,
            )
        )
    return tuple(out)


@dataclass(frozen=True)
class XiExponents:
    part: str
    index: int
    xi: Fraction
    xi_conj: Fraction
    x_entries: tuple[XEntry, XEntry]


def xi_exponents(g: GrowthSpec, s: Setting) -> tuple[XiExponents, ...]:
    """Conjugate time exponents built on the starred parameters.

    1/xi' = rho_eff*(phi*-1+c)/c and 1/xi = (beta*-1+c)/c; the star identity
    makes 1/xi + 1/xi' = 1 exact.  For a critical term (xi, xi') reduce to
    (r, r').
    """
    c = s.weight_index
    out = []
    for sp in star_params(g, s):
        inv_conj = sp.rho_eff * (sp.phi_star - 1 + c) / c
        xi_conj = 1 / inv_conj
        xi = c / (sp.beta_star - 1 + c)
        entries = (
            XEntry(
                time_exponent=s.p * xi,
                theta=sp.beta_star,
                smoothness=s.scale.smoothness_at(sp.beta_star),
                space_q=s.scale.q,
            ),
            XEntry(
                time_exponent=sp.rho_eff * s.p * xi_conj,
                theta=sp.phi_star,
                smoothness=s.scale.smoothness_at(sp.phi_star),
                space_q=s.scale.q,
            ),
        )
        out.append(
            XiExponents(part=sp.part, index=sp.index, xi=xi, xi_conj=xi_conj,
                        x_entries=entries)
        )
    return tuple(out)


@dataclass(frozen=True)
class InterpolationExponents:
    zeta: Fraction
    delta: Fraction
    phi: Fraction
    case_id: int
    theta0: Fraction


def interpolation_exponents(
    psi: Rational, p: Rational, kappa: Rational
) -> InterpolationExponents:
    """Exponents of the three-factor interpolation estimate.

    zeta = (1+kappa)/(psi-1+(1+kappa)/p) always.  Case selection for
    kappa > 0: case 1 (delta = 1-p/(1+kappa)*(psi-1+c), phi = 1) on
    (1-c*(1+kappa)/(2+kappa), 1), case 2 (delta = kappa/(kappa+1),
    phi = p*(psi-1+c)) on (1-c, 1-kappa/p]; in the overlap the interior
    prefers case 1 and the right endpoint psi = 1-kappa/p reports case 2
    (the two formula sets agree there).  kappa = 0 is case 3: delta = 1,
    phi = p*(psi-1+1/p).  theta0 is the least admissible time-smoothness
    parameter of the middle factor.
    """
    psi, p, kappa = as_fraction(psi), as_fraction(p), as_fraction(kappa)
    if p <= 1:
        raise ParameterError("need p > 1")
    if not (0 <= kappa < p - 1):
        raise ParameterError("need kappa in [0, p-1)")
    c = (1 + kappa) / p
    if not (1 - c < psi < 1):
        raise ParameterError(f"psi={psi} outside (1-(1+kappa)/p, 1)")
    zeta = (1 + kappa) / (psi - 1 + c)
    if kappa == 0:
        delta = Fraction(1)
        phi = p * (psi - 1 + 1 / p)
        return InterpolationExponents(zeta, delta, phi, 3, Fraction(0))
    case1_lo = 1 - c * (1 + kappa) / (2 + kappa)
    if psi > case1_lo and psi != 1 - kappa / p:
        delta = 1 - p / (1 + kappa) * (psi - 1 + c)
        phi = Fraction(1)
        theta0 = kappa / p - c * (psi - 1 + kappa / p) / (psi - 1 + c)
        return InterpolationExponents(zeta, delta, phi, 1, theta0)
    delta = kappa / (kappa + 1)
    phi = p * (psi - 1 + c)
    return InterpolationExponents(zeta, delta, phi, 2, kappa / p)


@dataclass(frozen=True)
class SerrinTerm:
    part: str
    index: int
    ok: bool
    reason: str


@dataclass(frozen=True)
class SerrinReport:
    ok: bool
    terms: tuple[SerrinTerm, ...]
    revised: bool


def revised_serrin_term_raw(
    rho: Rational, phi: Rational, beta: Rational, p: Rational, kappa: Rational
) -> tuple[bool, Fraction, Fraction, Fraction]:
    """Revised-criterion check for one raw term.

    Returns (ok, beta_star, phi_star, threshold) with the strict threshold
    1 - (1+kappa)/p * (1+kappa)/(2+kappa).
    """
    sp = star_params_term(rho, phi, beta, p, kappa)
    p, kappa = as_fraction(p), as_fraction(kappa)
    thr = 1 - (1 + kappa) / p * (1 + kappa) / (2 + kappa)
    return (sp.beta_star > thr and sp.phi_star > thr, sp.beta_star, sp.phi_star, thr)


def serrin_applicable(g: GrowthSpec, s: Setting, revised: bool = False) -> SerrinReport:
    """Whether the Serrin-type criterion applies to every growth term.

    Plain mode per term: beta = phi and (rho < 1+kappa when kappa > 0,
    rho <= 1 when kappa = 0).  Revised mode: both starred exponents exceed
    1 - (1+kappa)/p*(1+kappa)/(2+kappa) strictly.
    """
    rows = []
    if revised:
        for part, i, t in g.terms():
            ok, bs, ps, thr = revised_serrin_term_raw(t.rho, t.phi, t.beta, s.p, s.kappa)
            reason = (
                f"beta*={bs}, phi*={ps} vs threshold {thr}"
                if ok
                else f"starred exponents ({bs},{ps}) not above threshold {thr}"
            )
            rows.append(SerrinTerm(part, i, ok, reason))
    else:
        for part, i, t in g.terms():
            if t.beta != t.phi:
                rows.append(SerrinTerm(part, i, False, "needs beta = phi"))
                continue
            if s.kappa > 0:
                ok = t.rho < 1 + s.kappa
                reason = f"rho={t.rho} vs 1+kappa={1 + s.kappa} (strict)"
            else:
                ok = t.rho <= 1
                reason = f"rho={t.rho} vs 1 (kappa=0 branch)"
            rows.append(SerrinTerm(part, i, ok, reason))
    rows = tuple(rows)
    return SerrinReport(ok=all(r.ok for r in rows), terms=rows, revised=revised)


@dataclass(frozen=True)
class PerturbationMargin:
    delta: Fraction
    ok: bool


def perturbation_margin(
    c_det: Rational, c_sto: Rational, c_a: Rational, c_b: Rational
) -> PerturbationMargin:
    """delta = C_det*C_A + C_sto*C_B; admissible iff strictly below 1."""
    vals = [as_fraction(v) for v in (c_det, c_sto, c_a, c_b)]
    if any(v < 0 for v in vals):
        raise ParameterError("perturbation constants must be nonnegative")
    delta = vals[0] * vals[2] + vals[1] * vals[3]
    return PerturbationMargin(delta=delta, ok=delta < 1)


@dataclass(frozen=True)
class ClauseSelection:
    clause: str
    description: str


_QL_NON_CRITICAL = ClauseSelection(
    "blow_up_non_critical",
    "non-critical data space: finiteness of sup_t ||u(t)||_trace alone "
    "rules out blow-up",
)
_QL_CRITICAL_LP = ClauseSelection(
    "blow_up_limit_and_lp_bound",
    "critical data space with an a priori estimate: blow-up ruled out by "
    "sup_t ||u(t)||_trace < oo together with ||u||_{L^p(0,σ;X_{1-κ/p})} < oo",
)
_QL_CRITICAL_NO_LP = ClauseSelection(
    "blow_up_nonlinearity_functional",
    "critical data space without an L^p estimate: use finiteness of the "
    "weighted nonlinearity functional",
)
_SL_NO_SUP = ClauseSelection(
    "semilinear_nonlinearity_functional_or_serrin",
    "no sup-norm control: use the nonlinearity functional clause (1) or "
    "Serrin theorem",
)
_SL_SUP_NON_CRITICAL = ClauseSelection(
    "semilinear_sup_bound_non_critical",
    "sup-norm bound with a non-critical data space suffices",
)
_SL_SUP_CRITICAL = ClauseSelection(
    "semilinear_sup_and_lp_bound",
    "critical data space: combine the sup-norm bound with "
    "||u||_{L^p(0,σ;X_{1-κ/p})} < oo",
)


def criterion_select(
    semilinear: bool,
    is_critical: bool,
    have_sup_bound: bool,
    have_lp_bound: bool,
) -> ClauseSelection:
    """Route to the applicable blow-up criterion clause.

    The quasilinear tree branches on criticality then on the L^p estimate
    (the sup-norm flag is not consulted); the semilinear tree branches on
    the sup-norm bound then on criticality.
    """
    if not semilinear:
        if not is_critical:
            return _QL_NON_CRITICAL
        return _QL_CRITICAL_LP if have_lp_bound else _QL_CRITICAL_NO_LP
    if not have_sup_bound:
        return _SL_NO_SUP
    return _SL_SUP_NON_CRITICAL if not is_critical else _SL_SUP_CRITICAL


def one_d_growth_params(
    variant: str,
    *,
    eps: Rational | None = None,
    zeta: Rational | None = None,
    s: Rational | None = None,
    q: Rational | None = None,
    nu: Rational = 1,
) -> GrowthSpec:
    """Growth terms of the 1d conservative-drift problem on the torus.

    Variants fix the drift exponent phi1 = beta1 of the f-term (rho = 2):
      l2_eps:  phi1 = 2/3 + eps/3           for eps in [0, 1/2)
      lzeta:   phi1 = 1/2 + 1/(3*zeta)      for zeta in (2, oo)
      rough:   phi1 = (1/q + s)/3 + 1/2     for s in (0,1/3), q in (2, 2/s)
    The diffusion term is (2-nu, phi1, phi1) with nu in (0, 2].
    """
    nu = as_fraction(nu)
    if not (0 < nu <= 2):
        raise ParameterError("nu must lie in (0, 2]")
    if variant == "l2_eps":
        if eps is None:
            raise ParameterError("l2_eps variant needs eps")
        eps = as_fraction(eps)
        if not (0 <= eps < Fraction(1, 2)):
            raise ParameterError("eps must lie in [0, 1/2)")
        phi1 = Fraction(2, 3) + eps / 3
    elif variant == "lzeta":
        if zeta is None:
            raise ParameterError("lzeta variant needs zeta")
        zeta = as_fraction(zeta)
        if not zeta > 2:
            raise ParameterError("zeta must exceed 2")
        phi1 = Fraction(1, 2) + 1 / (3 * zeta)
    elif variant == "rough":
        if s is None or q is None:
            raise ParameterError("rough variant needs s and q")
        s, q = as_fraction(s), as_fraction(q)
        if not (0 < s < Fraction(1, 3)):
            raise ParameterError("s must lie in (0, 1/3)")
        if not (2 < q < 2 / s):
            raise ParameterError("q must lie in (2, 2/s)")
        phi1 = (1 / q + s) / 3 + Fraction(1, 2)
    else:
        raise ParameterError(f"unknown variant {variant!r}")
    return GrowthSpec(
        f_terms=(GrowthTerm(Fraction(2), phi1, phi1),),
        g_terms=(GrowthTerm(2 - nu, phi1, phi1),),
    )


def full_report(g: GrowthSpec, s: Setting) -> CriticalityReport:
    """Criticality report with the critical weight and exponent tables filled."""
    base = subcriticality(g, s)
    kappa = critical_weight(g, s.p)
    binding = critical_weight_binding(g, s.p)
    exps = None
    if base.all_windows_ok and base.all_subcritical:
        exps = rho_star_and_x_exponents(g, s)
    return CriticalityReport(
        terms=base.terms,
        is_critical=base.is_critical,
        all_subcritical=base.all_subcritical,
        all_windows_ok=base.all_windows_ok,
        kappa_crit=kappa,
        binding_terms=binding,
        exponents=exps,
        inexact=base.inexact,
    )


# ---------------------------------------------------------------------------
# JSON codecs.  Fractions serialize as "num/den" strings; parsing accepts
# "num/den", integers, and decimal floats.

def fraction_to_json(x: Fraction) -> str:
    x = as_fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def fraction_from_json(v) -> Fraction:
    if isinstance(v, str):
        try:
            return Fraction(v)
        except (ValueError, ZeroDivisionError) as e:
            raise ParameterError(f"bad rational literal {v!r}") from e
    return as_fraction(v)


def setting_to_dict(s: Setting) -> dict:
    return {
        "scale": {
            "low": fraction_to_json(s.scale.low),
            "high": fraction_to_json(s.scale.high),
            "q": fraction_to_json(s.scale.q),
        },
        "p": fraction_to_json(s.p),
        "kappa": fraction_to_json(s.kappa),
    }


def setting_from_dict(d: dict) -> Setting:
    try:
        sc = d["scale"]
        scale = SobolevScale(
            fraction_from_json(sc["low"]),
            fraction_from_json(sc["high"]),
            fraction_from_json(sc["q"]),
        )
        return Setting(scale, fraction_from_json(d["p"]), fraction_from_json(d["kappa"]))
    except (KeyError, TypeError) as e:
        raise ParameterError(f"malformed setting: {e}") from e


def growth_spec_to_dict(g: GrowthSpec) -> dict:
    def enc(ts):
        return [
            {
                "rho": fraction_to_json(t.rho),
                "phi": fraction_to_json(t.phi),
                "beta": fraction_to_json(t.beta),
            }
            for t in ts
        ]

    d = {"f_terms": enc(g.f_terms), "g_terms": enc(g.g_terms)}
    if g.has_trace_part_f:
        d["has_trace_part_f"] = True
    if g.has_trace_part_g:
        d["has_trace_part_g"] = True
    if g.sublinearity_constant is not None:
        d["sublinearity_constant"] = g.sublinearity_constant
    return d


def growth_spec_from_dict(d: dict) -> GrowthSpec:
    def dec(rows):
        return tuple(
            GrowthTerm(
                fraction_from_json(r["rho"]),
                fraction_from_json(r["phi"]),
                fraction_from_json(r["beta"]),
            )
            for r in rows
        )

    try:
        return GrowthSpec(
            f_terms=dec(d.get("f_terms", [])),
            g_terms=dec(d.get("g_terms", [])),
            has_trace_part_f=bool(d.get("has_trace_part_f", False)),
            has_trace_part_g=bool(d.get("has_trace_part_g", False)),
            sublinearity_constant=d.get("sublinearity_constant"),
        )
    except (KeyError, TypeError) as e:
        raise ParameterError(f"malformed growth spec: {e}") from e


def report_to_dict(rep: CriticalityReport) -> dict:
    def frac(x):
        return None if x is None else fraction_to_json(x)

    out = {
        "is_critical": rep.is_critical,
        "all_subcritical": rep.all_subcritical,
        "all_windows_ok": rep.all_windows_ok,
        "kappa_crit": frac(rep.kappa_crit),
        "binding_terms": [list(b) for b in rep.binding_terms],
        "inexact": rep.inexact,
        "terms": [
            {
                "part": r.part,
                "index": r.index,
                "rho": fraction_to_json(r.term.rho),
                "phi": fraction_to_json(r.term.phi),
                "beta": fraction_to_json(r.term.beta),
                "window_ok": r.window_ok,
                "lhs": fraction_to_json(r.lhs),
                "slack": fraction_to_json(r.slack),
                "weight_margin": frac(r.weight_margin),
                "critical": r.critical,
            }
            for r in rep.terms
        ],
    }
    if rep.exponents is not None:
        out["exponents"] = [
            {
                "part": e.part,
                "index": e.index,
                "rho_star": fraction_to_json(e.rho_star),
                "r": fraction_to_json(e.r),
                "r_conj": fraction_to_json(e.r_conj),
                "x_entries": [
                    {
                        "time_exponent": fraction_to_json(x.time_exponent),
                        "theta": fraction_to_json(x.theta),
                        "smoothness": fraction_to_json(x.smoothness),
                        "space_q": fraction_to_json(x.space_q),
                    }
                    for x in e.x_entries
                ],
            }
            for e in rep.exponents
        ]
    return out
