"""Construction of constant-mean-curvature generating curves.

Each rotation type reduces the CMC condition <H, H> = h_sign * C^2 to a
first-order equation for a turning function phi(u) driven by the profile
(r or f) and its first two derivatives:

* elliptic:    phi' = eta * sqrt((r r''+(r')^2+1)^2 + 4 h_sign C^2 r^2 (1+(r')^2))
                      / (r (1+(r')^2)),
               x1' = sqrt(1+(r')^2) cos phi,  x2' = sqrt(1+(r')^2) sin phi;
* hyperbolic:  phi' = eta * sqrt((r r''+(r')^2-1)^2 + 4 h_sign C^2 r^2 ((r')^2-1))
                      / (r ((r')^2-1)),
               case A ((r')^2>1): x2' = sqrt((r')^2-1) sinh phi,
                                  x4' = sqrt((r')^2-1) cosh phi;
               case B ((r')^2<1): x2' = sqrt(1-(r')^2) cosh phi,
                                  x4' = sqrt(1-(r')^2) sinh phi;
* parabolic:   psi' = eta * sqrt(((ln|ff'|)')^2 + 4 h_sign C^2) / f',
               phi = f' * (A + integral of psi'),  x1' = phi,
               g'  = (phi^2 - 1) / (2 f').

phi (and the coordinate components) are recovered by adaptive quadrature;
the curve jets are then assembled *analytically* from these identities,
never by differencing quadrature output, so arc-length holds to roundoff
and the twist x1'x2''-x1''x2' equals (1+(r')^2) phi' identically.

Sign bookkeeping: ``h_sign`` is the sign of <H, H> (the paper-level
choice under the radical) and ``eta`` the overall orientation of phi.
For hyperbolic profiles h_sign = sign((r')^2-1) is always feasible; the
opposite sign is admitted only where the radicand stays nonnegative, and
infeasibility is reported as empty validity rather than as an error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from .builders import TAU_SLOPE, GeneratingCurve, JetFn, RotationType
from .errors import (
    CaseMismatchError,
    EvalDomainError,
    InvariantViolationError,
    NearNullSlopeError,
    NegativeRadicandError,
    NonpositiveProfileError,
    ZeroDerivativeProfileError,
)
from .profiles import Jet2
from .quadrature import CumulativeIntegral, QuadratureConfig


@dataclass(frozen=True)
class CmcParams:
    """Target constant and integration constants of a generation run.

    ``C`` is the curvature constant (<H,H> = h_sign * C^2, C != 0),
    ``h_sign`` the sign of <H,H>, ``eta`` the orientation of phi.  ``u0``
    is the base point of all quadratures (interval left endpoint when
    None); ``phi0`` is the phi integration constant, which doubles as the
    parabolic constant A; ``c1``/``c2`` shift the two coordinate
    integrals.  The constants only translate/rotate the curve.
    """

    C: float
    h_sign: int = 1
    eta: int = 1
    u0: float | None = None
    phi0: float = 0.0
    c1: float = 0.0
    c2: float = 0.0

    def __post_init__(self):
        if self.C == 0.0:
            raise ValueError("C must be nonzero")
        if self.h_sign not in (-1, 1) or self.eta not in (-1, 1):
            raise ValueError("h_sign and eta must be +1 or -1")

    @property
    def target_h2(self) -> float:
        return self.h_sign * self.C * self.C


def as_jet_fn(profile) -> JetFn:
    """Accept a ProfileFunction or any callable u -> Jet2."""
    jet = getattr(profile, "jet", None)
    if jet is not None:
        return jet
    return profile


def _cached(fn: JetFn) -> JetFn:
    cache: dict[float, Jet2] = {}

    def wrapped(u: float) -> Jet2:
        hit = cache.get(u)
        if hit is None:
            hit = cache[u] = fn(u)
        return hit

    return wrapped


# --- phi-equation integrands ---------------------------------------------------

def _radicand_guarded(q: float, extra: float, u: float) -> float:
    """q^2 + extra with a roundoff guard; negative values are infeasible."""
    rad = q * q + extra
    if rad < 0.0:
        if rad > -1e-12 * (q * q + abs(extra) + 1.0):
            return 0.0
        raise NegativeRadicandError(
            f"radicand {rad!r} negative (infeasible h_sign/C)", u)
    return rad


def phi_integrand_elliptic(profile, params: CmcParams, u: float) -> float:
    """phi'(u) for the elliptic type; raises NonpositiveProfileError and
    NegativeRadicandError where the preconditions fail."""
    r = as_jet_fn(profile)(u)
    if not r.val > 0.0:
        raise NonpositiveProfileError(f"r(u)={r.val!r} <= 0 at u={u!r}")
    w2 = 1.0 + r.d1 * r.d1
    q = r.val * r.d2 + w2
    rad = _radicand_guarded(q, 4.0 * params.h_sign * (params.C * params.C)
                            * (r.val * r.val) * w2, u)
    return params.eta * math.sqrt(rad) / (r.val * w2)


def phi_integrand_hyperbolic(profile, params: CmcParams, u: float) -> float:
    """phi'(u) for the hyperbolic type (both cases share the formula)."""
    r = as_jet_fn(profile)(u)
    if not r.val > 0.0:
        raise NonpositiveProfileError(f"r(u)={r.val!r} <= 0 at u={u!r}")
    m = r.d1 * r.d1 - 1.0
    if abs(m) < TAU_SLOPE:
        raise NearNullSlopeError(f"(r')^2 - 1 = {m!r} at u={u!r}")
    q = r.val * r.d2 + m
    rad = _radicand_guarded(q, 4.0 * params.h_sign * (params.C * params.C)
                            * (r.val * r.val) * m, u)
    return params.eta * math.sqrt(rad) / (r.val * m)


def psi_integrand_parabolic(profile, params: CmcParams, u: float) -> float:
    """psi'(u) for the parabolic type, where phi = f' * psi."""
    f = as_jet_fn(profile)(u)
    if f.d1 == 0.0:
        raise ZeroDerivativeProfileError(f"f'(u) = 0 at u={u!r}")
    if f.val == 0.0:
        raise InvariantViolationError(f"f(u) = 0 at u={u!r}")
    log_slope = (f.val * f.d2 + f.d1 * f.d1) / (f.val * f.d1)  # (ln|ff'|)'
    rad = _radicand_guarded(log_slope,
                            4.0 * params.h_sign * params.C * params.C, u)
    return params.eta * math.sqrt(rad) / f.d1


# --- generators ----------------------------------------------------------------

def _base_point(params: CmcParams, interval: tuple[float, float]) -> float:
    u0 = interval[0] if params.u0 is None else params.u0
    if not interval[0] <= u0 <= interval[1]:
        raise ValueError(f"u0={u0!r} outside the generation interval {interval!r}")
    return u0


def generate_elliptic(profile, params: CmcParams,
                      config: QuadratureConfig | None = None,
                      interval: tuple[float, float] = (0.0, 1.0),
                      phi_scale: float = 1.0) -> GeneratingCurve:
    """Generate the elliptic CMC curve (x1, x2, r) over ``interval``.

    ``phi_scale`` multiplies phi after quadrature; values other than 1.0
    break the CMC property on purpose (negative-control hook) while
    keeping the arc-length identity intact.
    """
    config = config or QuadratureConfig()
    rj = _cached(as_jet_fn(profile))
    a, b = interval
    u0 = _base_point(params, interval)

    def dphi_raw(u: float) -> float:
        return phi_integrand_elliptic(rj, params, u)

    phi_cum = CumulativeIntegral(dphi_raw, a, b, config)
    phi_off = phi_cum(u0)

    def phi(u: float) -> float:
        return params.phi0 + phi_scale * (phi_cum(u) - phi_off)

    def dphi(u: float) -> float:
        return phi_scale * dphi_raw(u)

    def x1_slope(u: float) -> float:
        r = rj(u)
        return math.sqrt(1.0 + r.d1 * r.d1) * math.cos(phi(u))

    def x2_slope(u: float) -> float:
        r = rj(u)
        return math.sqrt(1.0 + r.d1 * r.d1) * math.sin(phi(u))

    x1_cum = CumulativeIntegral(x1_slope, a, b, config)
    x2_cum = CumulativeIntegral(x2_slope, a, b, config)
    x1_off = x1_cum(u0)
    x2_off = x2_cum(u0)

    def x1_fn(u: float) -> Jet2:
        r = rj(u)
        w = math.sqrt(1.0 + r.d1 * r.d1)
        wp = r.d1 * r.d2 / w
        p, dp = phi(u), dphi(u)
        cp, sp = math.cos(p), math.sin(p)
        return Jet2(params.c1 + x1_cum(u) - x1_off, w * cp, wp * cp - w * sp * dp)

    def x2_fn(u: float) -> Jet2:
        r = rj(u)
        w = math.sqrt(1.0 + r.d1 * r.d1)
        wp = r.d1 * r.d2 / w
        p, dp = phi(u), dphi(u)
        cp, sp = math.cos(p), math.sin(p)
        return Jet2(params.c2 + x2_cum(u) - x2_off, w * sp, wp * sp + w * cp * dp)

    return GeneratingCurve(RotationType.ELLIPTIC, (_cached(x1_fn), _cached(x2_fn), rj),
                           interval)


def _check_hyperbolic_case(rj: JetFn, case: RotationType,
                           interval: tuple[float, float]) -> None:
    want = 1.0 if case is RotationType.HYPERBOLIC_A else -1.0
    a, b = interval
    for k in range(65):
        u = a + (b - a) * k / 64.0
        m = rj(u).d1 ** 2 - 1.0
        if abs(m) < TAU_SLOPE:
            raise NearNullSlopeError(f"(r')^2 - 1 = {m!r} at u={u!r}")
        if m * want < 0.0:
            raise CaseMismatchError(
                f"(r')^2 - 1 = {m!r} at u={u!r} contradicts {case.value}")


def generate_hyperbolic(profile, params: CmcParams,
                        config: QuadratureConfig | None = None,
                        interval: tuple[float, float] = (0.0, 1.0),
                        case: RotationType = RotationType.HYPERBOLIC_A,
                        phi_scale: float = 1.0) -> GeneratingCurve:
    """Generate the hyperbolic CMC curve (r, x2, x4) over ``interval``.

    ``case`` selects Case A ((r')^2 > 1) or Case B ((r')^2 < 1); a profile
    whose slope contradicts the case, or crosses the null band, raises
    CaseMismatchError / NearNullSlopeError.
    """
    if case not in (RotationType.HYPERBOLIC_A, RotationType.HYPERBOLIC_B):
        raise ValueError(f"case must be hyperbolic, got {case}")
    config = config or QuadratureConfig()
    rj = _cached(as_jet_fn(profile))
    a, b = interval
    u0 = _base_point(params, interval)
    _check_hyperbolic_case(rj, case, interval)
    case_a = case is RotationType.HYPERBOLIC_A

    def dphi_raw(u: float) -> float:
        return phi_integrand_hyperbolic(rj, params, u)

    phi_cum = CumulativeIntegral(dphi_raw, a, b, config)
    phi_off = phi_cum(u0)

    def phi(u: float) -> float:
        return params.phi0 + phi_scale * (phi_cum(u) - phi_off)

    def dphi(u: float) -> float:
        return phi_scale * dphi_raw(u)

    def w_of(r: Jet2) -> float:
        m = r.d1 * r.d1 - 1.0
        return math.sqrt(m if case_a else -m)

    def x2_slope(u: float) -> float:
        p = phi(u)
        return w_of(rj(u)) * (math.sinh(p) if case_a else math.cosh(p))

    def x4_slope(u: float) -> float:
        p = phi(u)
        return w_of(rj(u)) * (math.cosh(p) if case_a else math.sinh(p))

    x2_cum = CumulativeIntegral(x2_slope, a, b, config)
    x4_cum = CumulativeIntegral(x4_slope, a, b, config)
    x2_off = x2_cum(u0)
    x4_off = x4_cum(u0)

    def x2_fn(u: float) -> Jet2:
        r = rj(u)
        w = w_of(r)
        wp = (r.d1 * r.d2 / w) if case_a else (-r.d1 * r.d2 / w)
        p, dp = phi(u), dphi(u)
        ch, sh = math.cosh(p), math.sinh(p)
        if case_a:
            return Jet2(params.c1 + x2_cum(u) - x2_off, w * sh, wp * sh + w * ch * dp)
        return Jet2(params.c1 + x2_cum(u) - x2_off, w * ch, wp * ch + w * sh * dp)

    def x4_fn(u: float) -> Jet2:
        r = rj(u)
        w = w_of(r)
        wp = (r.d1 * r.d2 / w) if case_a else (-r.d1 * r.d2 / w)
        p, dp = phi(u), dphi(u)
        ch, sh = math.cosh(p), math.sinh(p)
        if case_a:
            return Jet2(params.c2 + x4_cum(u) - x4_off, w * ch, wp * ch + w * sh * dp)
        return Jet2(params.c2 + x4_cum(u) - x4_off, w * sh, wp * sh + w * ch * dp)

    return GeneratingCurve(case, (rj, _cached(x2_fn), _cached(x4_fn)), interval)


def generate_parabolic(profile, params: CmcParams,
                       config: QuadratureConfig | None = None,
                       interval: tuple[float, float] = (0.5, 1.5),
                       phi_scale: float = 1.0) -> GeneratingCurve:
    """Generate the parabolic CMC curve (x1, f, g) over ``interval``.

    ``params.phi0`` plays the role of the constant A in phi = f'(A + ...).
    The arc-length identity (x1')^2 - 2 f' g' = 1 holds exactly by
    construction of g'.
    """
    config = config or QuadratureConfig()
    fj = _cached(as_jet_fn(profile))
    a, b = interval
    u0 = _base_point(params, interval)

    def dpsi_raw(u: float) -> float:
        return psi_integrand_parabolic(fj, params, u)

    psi_cum = CumulativeIntegral(dpsi_raw, a, b, config)
    psi_off = psi_cum(u0)

    def psi(u: float) -> float:
        return params.phi0 + phi_scale * (psi_cum(u) - psi_off)

    def phi_pair(u: float) -> tuple[float, float]:
        """phi = f' psi and phi' = f'' psi + f' psi'."""
        f = fj(u)
        s = psi(u)
        return f.d1 * s, f.d2 * s + f.d1 * phi_scale * dpsi_raw(u)

    def x1_slope(u: float) -> float:
        return phi_pair(u)[0]

    def g_slope(u: float) -> float:
        f = fj(u)
        p = phi_pair(u)[0]
        return (p * p - 1.0) / (2.0 * f.d1)

    x1_cum = CumulativeIntegral(x1_slope, a, b, config)
    g_cum = CumulativeIntegral(g_slope, a, b, config)
    x1_off = x1_cum(u0)
    g_off = g_cum(u0)

    def x1_fn(u: float) -> Jet2:
        p, dp = phi_pair(u)
        return Jet2(params.c1 + x1_cum(u) - x1_off, p, dp)

    def g_fn(u: float) -> Jet2:
        f = fj(u)
        p, dp = phi_pair(u)
        d1 = (p * p - 1.0) / (2.0 * f.d1)
        d2 = p * dp / f.d1 - (p * p - 1.0) * f.d2 / (2.0 * f.d1 * f.d1)
        return Jet2(params.c2 + g_cum(u) - g_off, d1, d2)

    return GeneratingCurve(RotationType.PARABOLIC, (_cached(x1_fn), fj, _cached(g_fn)),
                           interval)


def generate(rotation: RotationType, profile, params: CmcParams,
             config: QuadratureConfig | None = None,
             interval: tuple[float, float] = (0.0, 1.0),
             phi_scale: float = 1.0) -> GeneratingCurve:
    """Dispatch to the type-appropriate generator."""
    if rotation is RotationType.ELLIPTIC:
        return generate_elliptic(profile, params, config, interval, phi_scale)
    if rotation is RotationType.PARABOLIC:
        return generate_parabolic(profile, params, config, interval, phi_scale)
    return generate_hyperbolic(profile, params, config, interval, rotation, phi_scale)


# --- closed-form special cases --------------------------------------------------

#: Profile expressions whose phi has a closed form (one per type).
SPECIAL_PROFILE_EXPRS = {
    RotationType.ELLIPTIC: "sqrt(-u^2+2*a*u+b)",     # r r'' + (r')^2 + 1 = 0
    RotationType.HYPERBOLIC_A: "sqrt(u^2+2*a*u+b)",  # r r'' + (r')^2 - 1 = 0
    RotationType.HYPERBOLIC_B: "sqrt(u^2+2*a*u+b)",
    RotationType.PARABOLIC: "sqrt(2*a*u+b)",         # f f'' + (f')^2 = 0
}


def special_phi(rotation: RotationType, consts: Mapping[str, float],
                params: CmcParams, u: float) -> float:
    """The closed-form phi(u) quoted for the three special profiles.

    Constants: elliptic/hyperbolic use a, b and the inner offset d
    (default 0); parabolic uses a, b, A, B (B defaults to 1).  The
    expressions are evaluated verbatim; compare_special_case judges
    whether they actually differentiate to the phi-equation.
    """
    a = float(consts["a"])
    b_c = float(consts["b"])
    C = params.C
    if rotation is RotationType.ELLIPTIC:
        d = float(consts.get("d", 0.0))
        rad = -u * u + 2.0 * a * u + b_c
        s2 = a * a + b_c
        if rad <= 0.0 or s2 <= 0.0:
            raise EvalDomainError("special elliptic profile undefined", u)
        s = math.sqrt(s2)
        return (2.0 * C / s) * (0.5 * (u - a) * math.sqrt(rad)
                                + 0.5 * s2 * math.asin((u - a) / s) + d)
    if rotation is RotationType.PARABOLIC:
        big_a = float(consts.get("A", 0.0))
        big_b = float(consts.get("B", 1.0))
        rad = 2.0 * a * u + b_c
        if rad <= 0.0 or a == 0.0 or big_b == 0.0:
            raise EvalDomainError("special parabolic profile undefined", u)
        root = math.sqrt(rad)
        return (big_a + params.eta * (2.0 * C * big_b / (3.0 * a)) * root**3) / root
    # hyperbolic
    d = float(consts.get("d", 0.0))
    rad = u * u + 2.0 * a * u + b_c
    diff = a * a - b_c
    if rad <= 0.0 or diff == 0.0:
        raise EvalDomainError("special hyperbolic profile undefined", u)
    eps = 1.0 if diff > 0.0 else -1.0
    if (rotation is RotationType.HYPERBOLIC_A) != (eps > 0.0):
        raise CaseMismatchError(
            f"constants a={a!r}, b={b_c!r} give eps={eps!r}, not {rotation.value}")
    root = math.sqrt(rad)
    return (2.0 * params.eta * C / math.sqrt(eps * diff)) * (
        0.5 * (u + a) * root
        - 0.5 * eps * diff * math.log(abs(u + a + root)) + d)


# --- feasibility scan ------------------------------------------------------------

def _validity_predicate(rotation: RotationType, profile, params: CmcParams):
    jf = as_jet_fn(profile)

    def ok(u: float) -> bool:
        try:
            if rotation is RotationType.ELLIPTIC:
                phi_integrand_elliptic(jf, params, u)
            elif rotation is RotationType.PARABOLIC:
                psi_integrand_parabolic(jf, params, u)
            else:
                r = jf(u)
                m = r.d1 * r.d1 - 1.0
                want = 1.0 if rotation is RotationType.HYPERBOLIC_A else -1.0
                if m * want <= TAU_SLOPE:
                    return False
                phi_integrand_hyperbolic(jf, params, u)
        except (ArithmeticError, ValueError,
                NegativeRadicandError, NonpositiveProfileError,
                ZeroDerivativeProfileError, InvariantViolationError,
                NearNullSlopeError, EvalDomainError):
            return False
        return True

    return ok


def domain_validity(profile, params: CmcParams,
                    interval: tuple[float, float],
                    rotation: RotationType,
                    samples: int = 1025,
                    bisect_tol: float = 1e-10) -> list[tuple[float, float]]:
    """Maximal subintervals where the generator's preconditions hold.

    Scans a dense grid for changes of the validity predicate (profile
    positivity, f f' != 0, case-consistent slope, nonnegative radicand,
    evaluability) and locates each boundary by bisection to
    ``bisect_tol``.  An empty list is a normal outcome: it reports an
    infeasible (h_sign, C) choice.
    """
    lo, hi = interval
    if not hi > lo:
        raise ValueError("empty scan interval")
    ok = _validity_predicate(rotation, profile, params)
    us = [lo + (hi - lo) * k / (samples - 1) for k in range(samples)]
    flags = [ok(u) for u in us]

    def refine(u_good: float, u_bad: float) -> float:
        while abs(u_bad - u_good) > bisect_tol:
            mid = 0.5 * (u_good + u_bad)
            if ok(mid):
                u_good = mid
            else:
                u_bad = mid
        return u_good

    intervals: list[tuple[float, float]] = []
    start: float | None = us[0] if flags[0] else None
    for k in range(1, samples):
        if flags[k] == flags[k - 1]:
            continue
        if flags[k]:  # invalid -> valid
            start = refine(us[k], us[k - 1])
        else:  # valid -> invalid
            intervals.append((start, refine(us[k - 1], us[k])))
            start = None
    if start is not None:
        intervals.append((start, us[-1]))
    return [(s, e) for s, e in intervals if e > s]
