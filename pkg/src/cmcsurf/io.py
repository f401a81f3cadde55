"""CSV and OBJ export plus curve reconstruction from samples.

Curve CSV layout (RFC-4180-style, '.' decimal separator): one header row
naming ``u``, the three type-appropriate components, then their first and
second derivatives with ``d``/``dd`` prefixes, e.g.

    u,x1,x2,r,dx1,dx2,dr,ddx1,ddx2,ddr

The component names identify the rotation type on re-read; for hyperbolic
curves the case (A/B) is recovered from the sign of (r')^2 - 1 in the
data.  Reconstruction uses piecewise quintic Hermite interpolation that
matches value and both stored derivatives at every sample, so a re-read
curve reproduces validation results to the sampling resolution.

OBJ export projects the 4-coordinate samples to three viewing axes; the
projection is recorded in a comment and carries no geometric claim.
"""

from __future__ import annotations

import csv
import os
import tempfile
from typing import Sequence

import numpy as np
from scipy.interpolate import BPoly

from .builders import COMPONENT_NAMES, GeneratingCurve, RotationType
from .profiles import Jet2
from .surfaces import SurfacePatch

_COORD_NAMES = ("x1", "x2", "x3", "x4")


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def curve_samples(curve: GeneratingCurve, n: int) -> list[float]:
    lo, hi = curve.domain
    return [lo + (hi - lo) * k / (n - 1) for k in range(n)]


def write_curve_csv(path: str, curve: GeneratingCurve, samples: int = 401) -> None:
    """Sample the curve jets on a uniform grid and write them as CSV."""
    names = curve.component_names
    header = ["u"] + list(names) + [f"d{c}" for c in names] + [f"dd{c}" for c in names]
    rows = [header]
    for u in curve_samples(curve, samples):
        jets = curve.jets(u)
        rows.append([repr(u)]
                    + [repr(j.val) for j in jets]
                    + [repr(j.d1) for j in jets]
                    + [repr(j.d2) for j in jets])
    out = []
    writer_target = _ListWriter(out)
    writer = csv.writer(writer_target)
    writer.writerows(rows)
    _atomic_write(path, "".join(out))


class _ListWriter:
    def __init__(self, sink: list[str]):
        self.sink = sink

    def write(self, chunk: str) -> None:
        self.sink.append(chunk)


def read_curve_csv(path: str) -> tuple[RotationType, np.ndarray, np.ndarray]:
    """Read a curve CSV; returns (rotation, u samples, jets[n, 3, 3]).

    jets[i, k] holds (value, d1, d2) of component k at u[i].
    """
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader)
        data = np.array([[float(cell) for cell in row] for row in reader])
    names = tuple(header[1:4])
    rotation = None
    for rot, rot_names in COMPONENT_NAMES.items():
        if names == rot_names:
            rotation = rot
            break
    if rotation is None:
        raise ValueError(f"unrecognized curve components {names!r} in {path}")
    if rotation in (RotationType.HYPERBOLIC_A, RotationType.HYPERBOLIC_B):
        slopes = data[:, 4]  # column "dr"
        median_m = float(np.median(slopes * slopes - 1.0))
        rotation = (RotationType.HYPERBOLIC_A if median_m > 0.0
                    else RotationType.HYPERBOLIC_B)
    us = data[:, 0]
    jets = np.stack(
        [np.stack([data[:, 1 + k], data[:, 4 + k], data[:, 7 + k]], axis=1)
         for k in range(3)], axis=1)
    return rotation, us, jets


def curve_from_samples(rotation: RotationType, us: Sequence[float],
                       jets: np.ndarray) -> GeneratingCurve:
    """Rebuild a GeneratingCurve from sampled jets.

    Each component becomes a quintic Hermite spline matching value and
    both derivatives at every sample; the jets of the rebuilt curve come
    from the spline and its analytic derivatives (no differencing).
    """
    us = np.asarray(us, dtype=float)
    components = []
    for k in range(3):
        poly = BPoly.from_derivatives(us, jets[:, k, :])
        d1 = poly.derivative()
        d2 = d1.derivative()

        def jet_fn(u: float, p=poly, q=d1, s=d2) -> Jet2:
            return Jet2(float(p(u)), float(q(u)), float(s(u)))

        components.append(jet_fn)
    return GeneratingCurve(rotation, tuple(components),
                           (float(us[0]), float(us[-1])))


def load_curve(path: str) -> GeneratingCurve:
    """read_curve_csv + curve_from_samples in one step."""
    rotation, us, jets = read_curve_csv(path)
    return curve_from_samples(rotation, us, jets)


def write_surface_csv(path: str, patch: SurfacePatch,
                      us: Sequence[float], vs: Sequence[float]) -> None:
    """Write grid samples of the patch as u,v,x1,x2,x3,x4 rows."""
    out: list[str] = []
    writer = csv.writer(_ListWriter(out))
    writer.writerow(["u", "v"] + list(_COORD_NAMES))
    for u in us:
        for v in vs:
            p = patch.position(u, v)
            writer.writerow([repr(u), repr(v), repr(p.x1), repr(p.x2),
                             repr(p.x3), repr(p.x4)])
    _atomic_write(path, "".join(out))


def write_surface_obj(path: str, patch: SurfacePatch,
                      us: Sequence[float], vs: Sequence[float],
                      project: tuple[str, str, str] = ("x1", "x3", "x4")) -> None:
    """Write an OBJ mesh of the sampled patch.

    The three projection axes are a viewing aid only; they are recorded in
    a leading comment.  Faces are the grid quads, 1-indexed.
    """
    idx = [_COORD_NAMES.index(name) for name in project]
    lines = ["# cmcsurf surface export", f"# projection: {','.join(project)}"]
    for u in us:
        for v in vs:
            p = patch.position(u, v)
            coords = (p.x1, p.x2, p.x3, p.x4)
            lines.append("v " + " ".join(repr(coords[i]) for i in idx))
    nv = len(vs)
    for i in range(len(us) - 1):
        for j in range(nv - 1):
            a = i * nv + j + 1
            b = a + 1
            c = (i + 1) * nv + j + 2
            d = c - 1
            lines.append(f"f {a} {b} {c} {d}")
    _atomic_write(path, "\n".join(lines) + "\n")
