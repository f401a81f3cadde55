"""Rotational surfaces in the neutral 4-space and their closed forms.

Three rotation types act on an arc-length generating curve:

* elliptic   -- rotation about the Euclidean plane Oe1e2:
                z(u,v) = (x1, x2, r cos v, r sin v), r > 0;
* hyperbolic -- boost about the Lorentz plane Oe2e4:
                z(u,v) = (r cosh v, x2, r sinh v, x4), r > 0, (r')^2 != 1;
* parabolic  -- screw rotation about the degenerate plane span{e1, xi1}:
                z(u,v) = x1 e1 + f xi1 + (-v^2 f + g) xi2 + sqrt2 v f e4,
                with f f' != 0.

Besides the patch constructors this module carries the closed-form
adapted frames, the closed-form mean curvature of each type, the
Weingarten derivative table of the elliptic frame, and the hyperplane
degeneracy detector.  Parabolic patches are stored in the standard
e-basis; the lightlike pair xi1, xi2 appears only during assembly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

from .errors import InvariantViolationError, NearNullSlopeError
from .geometry import Vec4
from .profiles import Jet2
from .surfaces import Frame, MeanCurvature, PatchJets, SurfacePatch

#: Exclusion band around (r')^2 = 1 for hyperbolic surfaces.
TAU_SLOPE = 1e-6

#: Arc-length residual admitted for generating curves.
ARC_TOL = 1e-9

_SQRT2 = math.sqrt(2.0)

JetFn = Callable[[float], Jet2]


class RotationType(Enum):
    """Which plane the rotation fixes, and for hyperbolic surfaces the
    sign eps of (r')^2 - 1 (A: eps=+1, B: eps=-1)."""

    ELLIPTIC = "elliptic"
    HYPERBOLIC_A = "hyperbolicA"
    HYPERBOLIC_B = "hyperbolicB"
    PARABOLIC = "parabolic"


COMPONENT_NAMES = {
    RotationType.ELLIPTIC: ("x1", "x2", "r"),
    RotationType.HYPERBOLIC_A: ("r", "x2", "x4"),
    RotationType.HYPERBOLIC_B: ("r", "x2", "x4"),
    RotationType.PARABOLIC: ("x1", "f", "g"),
}


@dataclass(frozen=True)
class GeneratingCurve:
    """Arc-length generating curve: three jet-valued component functions.

    Component order follows the rotation type: elliptic (x1, x2, r),
    hyperbolic (r, x2, x4), parabolic (x1, f, g).
    """

    rotation: RotationType
    components: tuple[JetFn, JetFn, JetFn]
    domain: tuple[float, float]

    @property
    def component_names(self) -> tuple[str, str, str]:
        return COMPONENT_NAMES[self.rotation]

    def jets(self, u: float) -> tuple[Jet2, Jet2, Jet2]:
        c1, c2, c3 = self.components
        return c1(u), c2(u), c3(u)

    def arclength_residual(self, u: float) -> float:
        """|type-appropriate arc-length expression - 1| at u."""
        a, b, c = self.jets(u)
        if self.rotation is RotationType.ELLIPTIC:
            value = a.d1**2 + b.d1**2 - c.d1**2      # (x1')^2+(x2')^2-(r')^2
        elif self.rotation is RotationType.PARABOLIC:
            value = a.d1**2 - 2.0 * b.d1 * c.d1      # (x1')^2 - 2 f' g'
        else:
            value = a.d1**2 + b.d1**2 - c.d1**2      # (r')^2+(x2')^2-(x4')^2
        return abs(value - 1.0)

    def twist(self, u: float) -> float:
        """The quantity whose vanishing makes the surface hyperplanar:
        x1'x2''-x1''x2' (elliptic), x2'x4''-x2''x4' (hyperbolic),
        x1''f'-x1'f'' (parabolic)."""
        a, b, c = self.jets(u)
        if self.rotation is RotationType.ELLIPTIC:
            return a.d1 * b.d2 - a.d2 * b.d1
        if self.rotation is RotationType.PARABOLIC:
            return a.d2 * b.d1 - a.d1 * b.d2
        return b.d1 * c.d2 - b.d2 * c.d1


def _sample_points(domain: tuple[float, float], n: int = 33) -> list[float]:
    lo, hi = domain
    return [lo + (hi - lo) * (k + 0.5) / n for k in range(n)]


def _check_arclength(curve: GeneratingCurve, samples: list[float]) -> None:
    for u in samples:
        res = curve.arclength_residual(u)
        if not res <= ARC_TOL:
            raise InvariantViolationError(
                f"arc-length residual {res!r} at u={u!r} exceeds {ARC_TOL}")


# --- patch constructors ------------------------------------------------------

def build_elliptic(curve: GeneratingCurve,
                   v_window: tuple[float, float] = (0.0, 2.0 * math.pi),
                   check: bool = True) -> SurfacePatch:
    """Rotate (x1, x2, r, 0) about the plane Oe1e2.

    Validates the arc-length invariant and r > 0 on a sample grid before
    assembling analytic partials from the curve jets.
    """
    if curve.rotation is not RotationType.ELLIPTIC:
        raise InvariantViolationError(f"expected an elliptic curve, got {curve.rotation}")
    if check:
        samples = _sample_points(curve.domain)
        _check_arclength(curve, samples)
        for u in samples:
            r = curve.components[2](u)
            if not r.val > 0.0:
                raise InvariantViolationError(f"r(u)={r.val!r} <= 0 at u={u!r}")

    x1_fn, x2_fn, r_fn = curve.components

    def jets(u: float, v: float) -> PatchJets:
        x1, x2, r = x1_fn(u), x2_fn(u), r_fn(u)
        cv, sv = math.cos(v), math.sin(v)
        return PatchJets(
            position=Vec4(x1.val, x2.val, r.val * cv, r.val * sv),
            z_u=Vec4(x1.d1, x2.d1, r.d1 * cv, r.d1 * sv),
            z_v=Vec4(0.0, 0.0, -r.val * sv, r.val * cv),
            z_uu=Vec4(x1.d2, x2.d2, r.d2 * cv, r.d2 * sv),
            z_uv=Vec4(0.0, 0.0, -r.d1 * sv, r.d1 * cv),
            z_vv=Vec4(0.0, 0.0, -r.val * cv, -r.val * sv),
        )

    return SurfacePatch(jets, curve.domain, v_window, label="elliptic")


def build_hyperbolic(curve: GeneratingCurve,
                     v_window: tuple[float, float] = (-2.0, 2.0),
                     check: bool = True) -> SurfacePatch:
    """Boost (r, x2, 0, x4) about the Lorentz plane Oe2e4."""
    if curve.rotation not in (RotationType.HYPERBOLIC_A, RotationType.HYPERBOLIC_B):
        raise InvariantViolationError(f"expected a hyperbolic curve, got {curve.rotation}")
    want = 1.0 if curve.rotation is RotationType.HYPERBOLIC_A else -1.0
    if check:
        samples = _sample_points(curve.domain)
        _check_arclength(curve, samples)
        for u in samples:
            r = curve.components[0](u)
            if not r.val > 0.0:
                raise InvariantViolationError(f"r(u)={r.val!r} <= 0 at u={u!r}")
            m = r.d1 * r.d1 - 1.0
            if abs(m) < TAU_SLOPE:
                raise NearNullSlopeError(
                    f"(r')^2 - 1 = {m!r} inside the exclusion band at u={u!r}")
            if m * want < 0.0:
                raise InvariantViolationError(
                    f"(r')^2 - 1 = {m!r} contradicts {curve.rotation} at u={u!r}")

    r_fn, x2_fn, x4_fn = curve.components

    def jets(u: float, v: float) -> PatchJets:
        r, x2, x4 = r_fn(u), x2_fn(u), x4_fn(u)
        ch, sh = math.cosh(v), math.sinh(v)
        return PatchJets(
            position=Vec4(r.val * ch, x2.val, r.val * sh, x4.val),
            z_u=Vec4(r.d1 * ch, x2.d1, r.d1 * sh, x4.d1),
            z_v=Vec4(r.val * sh, 0.0, r.val * ch, 0.0),
            z_uu=Vec4(r.d2 * ch, x2.d2, r.d2 * sh, x4.d2),
            z_uv=Vec4(r.d1 * sh, 0.0, r.d1 * ch, 0.0),
            z_vv=Vec4(r.val * ch, 0.0, r.val * sh, 0.0),
        )

    return SurfacePatch(jets, curve.domain, v_window, label=curve.rotation.value)


def _from_null_basis(a: float, b: float, c: float, d: float) -> Vec4:
    """a*e1 + b*xi1 + c*xi2 + d*e4 expressed in the e-basis."""
    return Vec4(a, (b - c) / _SQRT2, (b + c) / _SQRT2, d)


def build_parabolic(curve: GeneratingCurve,
                    v_window: tuple[float, float] = (-2.0, 2.0),
                    check: bool = True) -> SurfacePatch:
    """Screw-rotate x1 e1 + f xi1 + g xi2 about the degenerate plane
    span{e1, xi1}."""
    if curve.rotation is not RotationType.PARABOLIC:
        raise InvariantViolationError(f"expected a parabolic curve, got {curve.rotation}")
    if check:
        samples = _sample_points(curve.domain)
        _check_arclength(curve, samples)
        for u in samples:
            f = curve.components[1](u)
            if f.val == 0.0 or f.d1 == 0.0:
                raise InvariantViolationError(f"f*f' vanishes at u={u!r}")

    x1_fn, f_fn, g_fn = curve.components

    def jets(u: float, v: float) -> PatchJets:
        x1, f, g = x1_fn(u), f_fn(u), g_fn(u)
        v2 = v * v
        return PatchJets(
            position=_from_null_basis(x1.val, f.val, -v2 * f.val + g.val,
                                      _SQRT2 * v * f.val),
            z_u=_from_null_basis(x1.d1, f.d1, -v2 * f.d1 + g.d1, _SQRT2 * v * f.d1),
            z_v=_from_null_basis(0.0, 0.0, -2.0 * v * f.val, _SQRT2 * f.val),
            z_uu=_from_null_basis(x1.d2, f.d2, -v2 * f.d2 + g.d2, _SQRT2 * v * f.d2),
            z_uv=_from_null_basis(0.0, 0.0, -2.0 * v * f.d1, _SQRT2 * f.d1),
            z_vv=_from_null_basis(0.0, 0.0, -2.0 * f.val, 0.0),
        )

    return SurfacePatch(jets, curve.domain, v_window, label="parabolic")


def build_surface(curve: GeneratingCurve,
                  v_window: tuple[float, float] | None = None,
                  check: bool = True) -> SurfacePatch:
    """Dispatch to the type-appropriate patch constructor."""
    if curve.rotation is RotationType.ELLIPTIC:
        return build_elliptic(curve, v_window or (0.0, 2.0 * math.pi), check)
    if curve.rotation is RotationType.PARABOLIC:
        return build_parabolic(curve, v_window or (-2.0, 2.0), check)
    return build_hyperbolic(curve, v_window or (-2.0, 2.0), check)


# --- closed-form frames ------------------------------------------------------

def elliptic_frame(curve: GeneratingCurve, u: float, v: float) -> Frame:
    """Closed-form adapted frame of the elliptic rotation.

    n1 = (-x2', x1', 0, 0)/w and n2 = (r'x1', r'x2', w^2 cos v,
    w^2 sin v)/w with w = sqrt(1+(r')^2); <n1,n1> = 1, <n2,n2> = -1.
    """
    x1, x2, r = curve.jets(u)
    w = math.sqrt(1.0 + r.d1 * r.d1)
    cv, sv = math.cos(v), math.sin(v)
    X = Vec4(x1.d1, x2.d1, r.d1 * cv, r.d1 * sv)
    Y = Vec4(0.0, 0.0, -sv, cv)
    n1 = Vec4(-x2.d1 / w, x1.d1 / w, 0.0, 0.0)
    n2 = Vec4(r.d1 * x1.d1 / w, r.d1 * x2.d1 / w, w * cv, w * sv)
    return Frame(X, Y, n1, n2, eps1=1, eps2=-1)


def hyperbolic_eps(curve: GeneratingCurve, u: float) -> int:
    """Sign of (r')^2 - 1; raises inside the exclusion band."""
    r = curve.components[0](u)
    m = r.d1 * r.d1 - 1.0
    if abs(m) < TAU_SLOPE:
        raise NearNullSlopeError(f"(r')^2 - 1 = {m!r} at u={u!r}")
    return 1 if m > 0.0 else -1


def hyperbolic_frame(curve: GeneratingCurve, u: float, v: float) -> Frame:
    """Closed-form adapted frame of the hyperbolic rotation.

    With eps = sign((r')^2 - 1) and rho = sqrt(eps((r')^2 - 1)):
    n1 = (0, x4', 0, x2')/rho, n2 = ((1-(r')^2) cosh v, -r'x2',
    (1-(r')^2) sinh v, -r'x4')/rho; <n1,n1> = eps, <n2,n2> = -eps.
    """
    r, x2, x4 = curve.jets(u)
    m = r.d1 * r.d1 - 1.0
    if abs(m) < TAU_SLOPE:
        raise NearNullSlopeError(f"(r')^2 - 1 = {m!r} at u={u!r}")
    eps = 1 if m > 0.0 else -1
    rho = math.sqrt(eps * m)
    ch, sh = math.cosh(v), math.sinh(v)
    X = Vec4(r.d1 * ch, x2.d1, r.d1 * sh, x4.d1)
    Y = Vec4(sh, 0.0, ch, 0.0)
    n1 = Vec4(0.0, x4.d1 / rho, 0.0, x2.d1 / rho)
    n2 = Vec4(-m * ch / rho, -r.d1 * x2.d1 / rho, -m * sh / rho, -r.d1 * x4.d1 / rho)
    return Frame(X, Y, n1, n2, eps1=eps, eps2=-eps)


# --- closed-form mean curvature ----------------------------------------------

def elliptic_H_closed(curve: GeneratingCurve, u: float, v: float = 0.0) -> MeanCurvature:
    """Closed-form mean curvature of the elliptic rotation:

    H = ( r(x1'x2''-x1''x2') n1 + (r r'' + (r')^2 + 1) n2 ) / (2 r w)
    with w = sqrt(1+(r')^2), and

    h2 = ( r^2(x1'x2''-x1''x2')^2 - (r r''+(r')^2+1)^2 ) / (4 r^2 w^2).
    """
    x1, x2, r = curve.jets(u)
    w2 = 1.0 + r.d1 * r.d1
    w = math.sqrt(w2)
    kappa = x1.d1 * x2.d2 - x1.d2 * x2.d1
    q = r.val * r.d2 + w2
    frame = elliptic_frame(curve, u, v)
    scale = 1.0 / (2.0 * r.val * w)
    H = (frame.n1 * (r.val * kappa) + frame.n2 * q) * scale
    h2 = (r.val**2 * kappa**2 - q * q) / (4.0 * r.val**2 * w2)
    return MeanCurvature(H, h2)


def hyperbolic_H_closed(curve: GeneratingCurve, u: float, v: float = 0.0) -> MeanCurvature:
    """Closed-form mean curvature of the hyperbolic rotation:

    H = eps ( r(x4'x2''-x4''x2') n1 - (r r''+(r')^2-1) n2 ) / (2 r rho)
    with rho = sqrt(eps((r')^2-1)), and

    h2 = ( r^2(x4'x2''-x4''x2')^2 - (r r''+(r')^2-1)^2 ) / (4 r^2 ((r')^2-1)).
    """
    r, x2, x4 = curve.jets(u)
    m = r.d1 * r.d1 - 1.0
    frame = hyperbolic_frame(curve, u, v)
    rho = math.sqrt(frame.eps1 * m)
    kappa = x4.d1 * x2.d2 - x4.d2 * x2.d1
    q = r.val * r.d2 + m
    scale = frame.eps1 / (2.0 * r.val * rho)
    H = (frame.n1 * (r.val * kappa) - frame.n2 * q) * scale
    h2 = (r.val**2 * kappa**2 - q * q) / (4.0 * r.val**2 * m)
    return MeanCurvature(H, h2)


def parabolic_h2_closed(curve: GeneratingCurve, u: float) -> float:
    """Closed-form <H, H> of the parabolic rotation:

    h2 = ( f^2 (x1''f' - x1'f'')^2 - (f f'' + (f')^2)^2 ) / (4 f^2 (f')^2).

    Only the scalar is available in closed form; the H vector comes from
    the surface kernel when needed.
    """
    x1, f, _ = curve.jets(u)
    if f.val == 0.0 or f.d1 == 0.0:
        raise InvariantViolationError(f"f*f' vanishes at u={u!r}")
    kappa = x1.d2 * f.d1 - x1.d1 * f.d2
    q = f.val * f.d2 + f.d1 * f.d1
    return (f.val**2 * kappa**2 - q * q) / (4.0 * f.val**2 * f.d1**2)


def h2_closed(curve: GeneratingCurve, u: float) -> float:
    """Type-dispatching closed-form <H, H>."""
    if curve.rotation is RotationType.ELLIPTIC:
        return elliptic_H_closed(curve, u).h2
    if curve.rotation is RotationType.PARABOLIC:
        return parabolic_h2_closed(curve, u)
    return hyperbolic_H_closed(curve, u).h2


# --- Weingarten table and degeneracy -----------------------------------------

@dataclass(frozen=True)
class WeingartenTable:
    """Expansions of the ambient derivatives of n1, n2 of the elliptic
    frame in {X, Y, n1, n2}; each entry maps frame labels to coefficients."""

    dX_n1: dict[str, float]
    dY_n1: dict[str, float]
    dX_n2: dict[str, float]
    dY_n2: dict[str, float]


def elliptic_weingarten(curve: GeneratingCurve, u: float) -> WeingartenTable:
    """Closed-form derivative expansions of the elliptic frame:

    d_X n1 = -(kappa/w) X + (r' kappa / w^2) n2,   d_Y n1 = 0,
    d_X n2 = (r''/w) X + (r' kappa / w^2) n1,      d_Y n2 = (w/r) Y,

    with kappa = x1'x2'' - x1''x2' and w = sqrt(1+(r')^2).
    """
    x1, x2, r = curve.jets(u)
    w2 = 1.0 + r.d1 * r.d1
    w = math.sqrt(w2)
    kappa = x1.d1 * x2.d2 - x1.d2 * x2.d1
    mixed = r.d1 * kappa / w2
    zero = {"X": 0.0, "Y": 0.0, "n1": 0.0, "n2": 0.0}
    return WeingartenTable(
        dX_n1={**zero, "X": -kappa / w, "n2": mixed},
        dY_n1=dict(zero),
        dX_n2={**zero, "X": r.d2 / w, "n1": mixed},
        dY_n2={**zero, "Y": w / r.val},
    )


@dataclass(frozen=True)
class DegeneracyReport:
    degenerate: bool
    max_twist: float
    hyperplane: str | None


def hyperplane_degeneracy(curve: GeneratingCurve, samples: int = 201,
                          tol: float = 1e-9) -> DegeneracyReport:
    """Detect whether the rotated surface stays inside a hyperplane.

    The test quantity is the type-appropriate twist (see
    GeneratingCurve.twist); when it vanishes on the whole domain the
    normal n1 is constant and the surface lies in span{X, Y, n2}.
    """
    max_twist = max(abs(curve.twist(u)) for u in _sample_points(curve.domain, samples))
    degenerate = max_twist <= tol
    return DegeneracyReport(
        degenerate=degenerate,
        max_twist=max_twist,
        hyperplane="span{X, Y, n2}" if degenerate else None,
    )
