"""Lorentz surface patches: fundamental forms, frames, mean curvature,
and an independent finite-difference oracle.

A patch is a map (u, v) -> position together with all partials up to
second order.  The mean curvature vector is the signed half-trace of the
second fundamental form with respect to an orthonormal (+,-) tangent
frame, H = (sigma(X,X) - sigma(Y,Y)) / 2; the sign-carrying trace is the
one consistent with the closed-form curvature of the rotational builders,
which the test suite asserts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import (
    DegenerateFrameError,
    NonLorentzMetricError,
    StencilOutOfDomainError,
)
from .geometry import (
    BASIS,
    TAU_CAUSAL,
    Vec4,
    inner,
    orthonormalize_indefinite,
    require_finite,
)

#: Default step for the finite-difference oracle.
FD_STEP = 1e-4


@dataclass(frozen=True)
class PatchJets:
    """Position and partials of a patch at one (u, v)."""

    position: Vec4
    z_u: Vec4
    z_v: Vec4
    z_uu: Vec4
    z_uv: Vec4
    z_vv: Vec4


@dataclass(frozen=True)
class SurfacePatch:
    """An immutable surface patch over a parameter rectangle."""

    jets: Callable[[float, float], PatchJets]
    u_domain: tuple[float, float]
    v_domain: tuple[float, float]
    label: str = ""

    def position(self, u: float, v: float) -> Vec4:
        return self.jets(u, v).position


@dataclass(frozen=True)
class FirstFundamentalForm:
    E: float
    F: float
    G: float

    @property
    def det(self) -> float:
        return self.E * self.G - self.F * self.F


@dataclass(frozen=True)
class Frame:
    """Adapted frame: unit spacelike X, unit timelike Y, normals n1, n2
    with <n_i, n_j> = eps_i * delta_ij."""

    X: Vec4
    Y: Vec4
    n1: Vec4
    n2: Vec4
    eps1: int
    eps2: int


@dataclass(frozen=True)
class MeanCurvature:
    H: Vec4
    h2: float  # <H, H>


def first_fundamental_form(patch: SurfacePatch, u: float, v: float) -> FirstFundamentalForm:
    """E, F, G at (u, v); raises NonLorentzMetricError unless EG - F^2 < 0."""
    jets = patch.jets(u, v)
    form = FirstFundamentalForm(
        inner(jets.z_u, jets.z_u),
        inner(jets.z_u, jets.z_v),
        inner(jets.z_v, jets.z_v),
    )
    if not form.det < 0.0:
        raise NonLorentzMetricError(
            f"EG - F^2 = {form.det!r} >= 0 at (u, v) = ({u!r}, {v!r})")
    return form


def _tangent_frame(jets: PatchJets, u: float, v: float) -> tuple[Vec4, Vec4, float, float]:
    """Unit spacelike X, unit timelike Y, plus E and F/E for sff scaling."""
    E = inner(jets.z_u, jets.z_u)
    F = inner(jets.z_u, jets.z_v)
    G = inner(jets.z_v, jets.z_v)
    det = E * G - F * F
    if not (det < 0.0 and E > 0.0):
        raise NonLorentzMetricError(
            f"no (+,-) tangent frame at (u, v) = ({u!r}, {v!r}): "
            f"E={E!r}, EG-F^2={det!r}")
    f_over_e = F / E
    g_red = G - F * f_over_e  # < 0
    X = jets.z_u * (1.0 / math.sqrt(E))
    Y = (jets.z_v - jets.z_u * f_over_e) * (1.0 / math.sqrt(-g_red))
    return X, Y, E, f_over_e


def tangent_frame(patch: SurfacePatch, u: float, v: float) -> tuple[Vec4, Vec4]:
    """Orthonormal tangent pair (X spacelike, Y timelike) at (u, v).

    For arc-length rotational patches (E = 1, F = 0) this is exactly
    X = z_u, Y = z_v / sqrt(-G).
    """
    X, Y, _, _ = _tangent_frame(patch.jets(u, v), u, v)
    return X, Y


def normal_projection(w: Vec4, X: Vec4, Y: Vec4) -> Vec4:
    """Component of w orthogonal to span{X, Y} (X unit spacelike, Y unit timelike)."""
    return w - X * inner(w, X) + Y * inner(w, Y)


def normal_frame_numeric(
    patch: SurfacePatch, u: float, v: float, tau_causal: float = TAU_CAUSAL
) -> tuple[Vec4, Vec4, int, int]:
    """Orthonormal normal pair built without any closed-form frame.

    Runs indefinite Gram-Schmidt on {X, Y, w1, w2} where the seeds w1, w2
    are the standard basis vectors most transverse to the tangent plane
    (smallest Euclidean norm of the tangent projection, ties broken by
    basis index).  Seed pairs are retried in deterministic order; if all
    six fail the point is reported as singular.  The spacelike normal is
    returned first.
    """
    jets = patch.jets(u, v)
    X, Y, _, _ = _tangent_frame(jets, u, v)
    scores = []
    for idx, e in enumerate(BASIS):
        proj = X * inner(e, X) - Y * inner(e, Y)
        scores.append((math.sqrt(proj.x1**2 + proj.x2**2 + proj.x3**2 + proj.x4**2), idx))
    pairs = sorted(
        ((scores[i][0] + scores[j][0], i, j) for i in range(4) for j in range(i + 1, 4))
    )
    for _, i, j in pairs:
        try:
            units = orthonormalize_indefinite([X, Y, BASIS[i], BASIS[j]], tau_causal)
        except DegenerateFrameError:
            continue
        (n1, s1), (n2, s2) = units[2], units[3]
        if s1 < s2:  # put the spacelike normal first
            n1, s1, n2, s2 = n2, s2, n1, s1
        return n1, n2, s1, s2
    raise DegenerateFrameError(
        f"singular point: no seed pair yields a normal frame at ({u!r}, {v!r})")


def frame_numeric(patch: SurfacePatch, u: float, v: float) -> Frame:
    """Full adapted frame with numerically constructed normals."""
    X, Y = tangent_frame(patch, u, v)
    n1, n2, eps1, eps2 = normal_frame_numeric(patch, u, v)
    return Frame(X, Y, n1, n2, eps1, eps2)


def second_fundamental_form(
    patch: SurfacePatch, frame: Frame, u: float, v: float
) -> tuple[Vec4, Vec4, Vec4]:
    """sigma(X,X), sigma(X,Y), sigma(Y,Y) as vectors in span{n1, n2}.

    sigma is tensorial, so the values follow from the normal projections
    of z_uu, z_uv, z_vv rescaled by the frame coefficients.
    """
    jets = patch.jets(u, v)
    X, Y, E, f_over_e = _tangent_frame(jets, u, v)
    g_red = inner(jets.z_v, jets.z_v) - f_over_e * inner(jets.z_u, jets.z_v)
    n_uu = normal_projection(jets.z_uu, X, Y)
    n_uv = normal_projection(jets.z_uv, X, Y)
    n_vv = normal_projection(jets.z_vv, X, Y)
    sxx = n_uu * (1.0 / E)
    sxy = (n_uv - n_uu * f_over_e) * (1.0 / math.sqrt(E * -g_red))
    syy = (n_vv - n_uv * (2.0 * f_over_e) + n_uu * (f_over_e * f_over_e)) * (1.0 / -g_red)
    return sxx, sxy, syy


def normal_components(sigma: Vec4, frame: Frame) -> tuple[float, float]:
    """Coefficients of a normal vector in the frame's {n1, n2}."""
    return frame.eps1 * inner(sigma, frame.n1), frame.eps2 * inner(sigma, frame.n2)


def mean_curvature(patch: SurfacePatch, u: float, v: float) -> MeanCurvature:
    """H = (sigma(X,X) - sigma(Y,Y)) / 2 and h2 = <H, H> at (u, v).

    Needs only the tangent frame (normal projection is frame-free), so it
    serves as the oracle side against the closed-form expressions.
    """
    jets = patch.jets(u, v)
    X, Y, E, f_over_e = _tangent_frame(jets, u, v)
    g_red = inner(jets.z_v, jets.z_v) - f_over_e * inner(jets.z_u, jets.z_v)
    n_uu = normal_projection(jets.z_uu, X, Y)
    n_uv = normal_projection(jets.z_uv, X, Y)
    n_vv = normal_projection(jets.z_vv, X, Y)
    sxx = n_uu * (1.0 / E)
    syy = (n_vv - n_uv * (2.0 * f_over_e) + n_uu * (f_over_e * f_over_e)) * (1.0 / -g_red)
    H = (sxx - syy) * 0.5
    return MeanCurvature(H, inner(H, H))


def fd_patch(
    position: Callable[[float, float], Vec4],
    h: float,
    u_domain: tuple[float, float],
    v_domain: tuple[float, float],
) -> SurfacePatch:
    """Patch whose partials come from second-order central differences.

    ``position`` is trusted for values only; all six derivative slots are
    rebuilt from a 9-point stencil with O(h^2) error, which makes the
    result an oracle independent of any analytic jet assembly.  Stencils
    reaching outside ``u_domain`` x ``v_domain`` raise
    StencilOutOfDomainError; the returned patch domain is shrunk by h.
    """
    if not h > 0.0:
        raise ValueError("h must be positive")
    u_lo, u_hi = u_domain
    v_lo, v_hi = v_domain

    def jets(u: float, v: float) -> PatchJets:
        if u - h < u_lo - 1e-12 or u + h > u_hi + 1e-12 \
                or v - h < v_lo - 1e-12 or v + h > v_hi + 1e-12:
            raise StencilOutOfDomainError(
                f"stencil around ({u!r}, {v!r}) with h={h!r} leaves the domain")
        c = position(u, v)
        pu = position(u + h, v)
        mu = position(u - h, v)
        pv = position(u, v + h)
        mv = position(u, v - h)
        pp = position(u + h, v + h)
        pm = position(u + h, v - h)
        mp = position(u - h, v + h)
        mm = position(u - h, v - h)
        require_finite(c, "stencil position")
        inv2h = 0.5 / h
        invh2 = 1.0 / (h * h)
        return PatchJets(
            position=c,
            z_u=(pu - mu) * inv2h,
            z_v=(pv - mv) * inv2h,
            z_uu=(pu - c * 2.0 + mu) * invh2,
            z_uv=(pp - pm - mp + mm) * (0.25 * invh2),
            z_vv=(pv - c * 2.0 + mv) * invh2,
        )

    return SurfacePatch(
        jets=jets,
        u_domain=(u_lo + h, u_hi - h),
        v_domain=(v_lo + h, v_hi - h),
        label="fd-oracle",
    )


def fd_oracle(patch: SurfacePatch, h: float = FD_STEP) -> SurfacePatch:
    """Finite-difference twin of ``patch`` built from its positions only."""
    return fd_patch(patch.position, h, patch.u_domain, patch.v_domain)
