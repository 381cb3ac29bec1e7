"""Numerical immersion x(z) = Re integral(phi) on a chart grid, plus export.

The four 1-forms phi_i dz are integrated edge by edge over a rectangular or
annular grid with composite Gauss-Legendre quadrature: order 8 supplies the
value, the difference against order 4 the error estimate, and both are
accumulated along the integration path from the base point.  Edges that fail
to converge are bisected; an edge that keeps failing (it is grazing a pole)
raises instead of silently degrading.

Punctures and poles of h, g1, g2 are fenced off by an exclusion radius
(mesh_exclusion_factor times the region diameter), because the metric blows
up at complete ends.  The patch itself is always simply connected, so x is
single-valued on it even when the periods of the data do not vanish; the
mesh is then stamped ``universal_cover_patch`` to record that the surface as
a whole only closes up on the universal cover.  Annular grids are cut along
the angle-0 seam, with the seam column duplicated, for the same reason.

Integration order: the column through the base vertex first, then each row
from that column outward, then a breadth-first sweep for any vertices whose
row was interrupted by an exclusion.  A sample of grid cells is re-integrated
around the full cell loop; the largest such loop residual is recorded on the
mesh as an independent path-independence check.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .curvature import gauss_curvature
from .tolerances import Tolerances, default_tolerances
from .weierstrass import (
    WeierstrassData,
    compute_periods,
    metric_factor_from_phi,
    phi_from_data,
)

__all__ = [
    "Rectangle",
    "Annulus",
    "SurfaceMesh",
    "MeshRegionError",
    "QuadratureConvergenceError",
    "build_mesh",
    "export_mesh",
]


class MeshRegionError(ValueError):
    """The requested region, base point, and exclusions are incompatible."""


class QuadratureConvergenceError(RuntimeError):
    """An edge integral keeps disagreeing between quadrature orders."""

    def __init__(self, a: complex, b: complex, error: float):
        self.a = a
        self.b = b
        self.error = error
        super().__init__(
            f"edge integral from {a} to {b} does not converge "
            f"(order-8 vs order-4 disagreement {error:.3e}); "
            "the edge probably grazes a pole"
        )


@dataclass(frozen=True)
class Rectangle:
    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError("rectangle must have positive extent on both axes")

    @property
    def diameter(self) -> float:
        return float(np.hypot(self.re_max - self.re_min, self.im_max - self.im_min))

    def contains(self, z: complex) -> bool:
        return (
            self.re_min <= z.real <= self.re_max
            and self.im_min <= z.imag <= self.im_max
        )


@dataclass(frozen=True)
class Annulus:
    center: complex
    r_inner: float
    r_outer: float

    def __post_init__(self):
        if not (0 < self.r_inner < self.r_outer):
            raise ValueError("annulus needs 0 < r_inner < r_outer")

    @property
    def diameter(self) -> float:
        return 2.0 * self.r_outer

    def contains(self, z: complex) -> bool:
        return self.r_inner <= abs(z - self.center) <= self.r_outer


@dataclass(frozen=True)
class SurfaceMesh:
    """Grid immersion with per-vertex metric, curvature, and error estimates.

    Arrays are flat over the row-major grid of ``shape`` = (rows, cols);
    ``included`` masks vertices inside exclusion zones or unreachable from
    the base point (their x, metric, and K entries are NaN).  ``faces`` are
    counter-clockwise quads of flat indices, only over included vertices.
    """

    z: np.ndarray  # (n,) complex grid points
    x: np.ndarray  # (n, 4) immersion, x(base_point) = 0
    metric: np.ndarray  # (n,) lambda^2
    gauss: np.ndarray  # (n,) K
    included: np.ndarray  # (n,) bool
    path_error: np.ndarray  # (n,) accumulated quadrature error estimate
    faces: tuple[tuple[int, int, int, int], ...]
    shape: tuple[int, int]
    base_point: complex
    universal_cover_patch: bool
    max_loop_residual: float

    def __post_init__(self):
        for arr in (self.z, self.x, self.metric, self.gauss, self.included, self.path_error):
            arr.setflags(write=False)

    @property
    def included_count(self) -> int:
        return int(np.count_nonzero(self.included))


# -- quadrature -----------------------------------------------------------------

_GL8_NODES, _GL8_WEIGHTS = np.polynomial.legendre.leggauss(8)
_GL4_NODES, _GL4_WEIGHTS = np.polynomial.legendre.leggauss(4)
_MAX_EDGE_SPLITS = 8


def _edge_once(forms, a: complex, b: complex) -> tuple[np.ndarray, float]:
    mid, half = (a + b) / 2.0, (b - a) / 2.0
    z8 = mid + half * _GL8_NODES
    z4 = mid + half * _GL4_NODES
    inc8 = np.array([half * np.sum(_GL8_WEIGHTS * f(z8)) for f in forms])
    inc4 = np.array([half * np.sum(_GL4_WEIGHTS * f(z4)) for f in forms])
    return inc8, float(np.linalg.norm(inc8 - inc4))


def _edge_increment(forms, a: complex, b: complex, rtol: float, depth: int = 0):
    """Integral of the four forms along [a, b], bisecting until converged."""
    inc, err = _edge_once(forms, a, b)
    if err <= rtol * max(1.0, float(np.linalg.norm(inc))):
        return inc, err
    if depth >= _MAX_EDGE_SPLITS:
        raise QuadratureConvergenceError(a, b, err)
    mid = (a + b) / 2.0
    left, el = _edge_increment(forms, a, mid, rtol, depth + 1)
    right, er = _edge_increment(forms, mid, b, rtol, depth + 1)
    return left + right, el + er


# -- grid construction ----------------------------------------------------------


def _normalize_resolution(resolution) -> tuple[int, int]:
    if isinstance(resolution, int):
        rows = cols = resolution
    else:
        rows, cols = (int(r) for r in resolution)
    if rows < 2 or cols < 2:
        raise ValueError("resolution must be at least 2 vertices per axis")
    return int(rows), int(cols)


def _grid_points(region, rows: int, cols: int) -> np.ndarray:
    if isinstance(region, Rectangle):
        re = np.linspace(region.re_min, region.re_max, cols)
        im = np.linspace(region.im_min, region.im_max, rows)
        return (re[None, :] + 1j * im[:, None]).reshape(-1)
    radii = np.linspace(region.r_inner, region.r_outer, rows)
    angles = np.linspace(0.0, 2.0 * np.pi, cols)  # seam column duplicated
    return (region.center + radii[:, None] * np.exp(1j * angles[None, :])).reshape(-1)


def _exclusion_centers(d: WeierstrassData, tol: Tolerances) -> list[complex]:
    centers = list(d.finite_punctures())
    for f in (d.h, d.g1, d.g2):
        for point, _order in f.finite_poles(tol):
            centers.append(point)
    return centers


def _segment_clears(a: complex, b: complex, centers, radius: float) -> bool:
    ab = b - a
    length2 = abs(ab) ** 2
    for c in centers:
        if length2 == 0.0:
            t = 0.0
        else:
            t = ((c - a).real * ab.real + (c - a).imag * ab.imag) / length2
        t = min(1.0, max(0.0, t))
        if abs(a + t * ab - c) < radius:
            return False
    return True


# -- mesh assembly --------------------------------------------------------------


def build_mesh(
    d: WeierstrassData,
    region,
    resolution,
    z0: complex,
    tol: Tolerances | None = None,
) -> SurfaceMesh:
    """Integrate the immersion over a grid on ``region`` anchored at ``z0``.

    ``region`` is a Rectangle or Annulus; ``resolution`` a vertex count per
    axis (int or (rows, cols)).  x(z0) = 0 fixes the translation.  Punctures
    and poles are fenced off by mesh_exclusion_factor * diameter; a puncture
    strictly inside the region with a zero exclusion factor is an error, as
    is a base point that is excluded, outside, or at a degenerate metric
    point.
    """
    tol = tol or default_tolerances()
    if not isinstance(region, (Rectangle, Annulus)):
        raise TypeError("region must be a Rectangle or an Annulus")
    rows, cols = _normalize_resolution(resolution)
    z0 = complex(z0)

    zs = _grid_points(region, rows, cols)
    n = zs.size
    radius = tol.mesh_exclusion_factor * region.diameter
    centers = _exclusion_centers(d, tol)

    if radius <= 0.0:
        for p in d.finite_punctures():
            if region.contains(p):
                raise MeshRegionError(
                    f"puncture {p} lies inside the region and the exclusion radius is zero"
                )
    if not region.contains(z0):
        raise MeshRegionError(f"base point {z0} is outside the region")
    if any(abs(z0 - c) < radius for c in centers):
        raise MeshRegionError(f"base point {z0} is inside an exclusion zone")
    phi = phi_from_data(d)
    if not metric_factor_from_phi(phi, z0) > 0.0:
        raise MeshRegionError(f"metric degenerates at the base point {z0}")

    included = np.ones(n, dtype=bool)
    if centers:
        carr = np.array(centers)
        dist = np.min(np.abs(zs[:, None] - carr[None, :]), axis=1)
        included &= dist >= radius

    forms = phi.forms
    values = np.full((n, 4), np.nan + 0j, dtype=complex)
    errors = np.full(n, np.inf)
    assigned = np.zeros(n, dtype=bool)

    def flat(i: int, j: int) -> int:
        return i * cols + j

    def edge_open(u: int, v: int) -> bool:
        return (
            included[u]
            and included[v]
            and _segment_clears(zs[u], zs[v], centers, radius)
        )

    def extend(u: int, v: int) -> None:
        inc, err = _edge_increment(forms, zs[u], zs[v], tol.quad_rtol)
        values[v] = values[u] + inc
        errors[v] = errors[u] + err
        assigned[v] = True

    if not included.any():
        raise MeshRegionError("every grid vertex falls inside an exclusion zone")
    candidates = np.flatnonzero(included)
    anchor = int(candidates[np.argmin(np.abs(zs[candidates] - z0))])
    inc0, err0 = _edge_increment(forms, z0, zs[anchor], tol.quad_rtol)
    values[anchor] = inc0
    errors[anchor] = err0
    assigned[anchor] = True

    # column through the anchor, then rows outward, then a BFS sweep for
    # vertices cut off from their row by an exclusion zone
    ai, aj = divmod(anchor, cols)
    for step in (-1, 1):
        i = ai
        while 0 <= i + step < rows:
            u, v = flat(i, aj), flat(i + step, aj)
            if not (assigned[u] and not assigned[v] and edge_open(u, v)):
                break
            extend(u, v)
            i += step
    for i in range(rows):
        if not assigned[flat(i, aj)]:
            continue
        for step in (-1, 1):
            j = aj
            while 0 <= j + step < cols:
                u, v = flat(i, j), flat(i, j + step)
                if not (assigned[u] and not assigned[v] and edge_open(u, v)):
                    break
                extend(u, v)
                j += step
    queue = deque(sorted(np.flatnonzero(assigned).tolist()))
    while queue:
        u = queue.popleft()
        i, j = divmod(u, cols)
        for di, dj in ((-1, 0), (1, 0), (0, -1), (0, 1)):
            ii, jj = i + di, j + dj
            if not (0 <= ii < rows and 0 <= jj < cols):
                continue
            v = flat(ii, jj)
            if not assigned[v] and edge_open(u, v):
                extend(u, v)
                queue.append(v)

    # vertices that never got a value are unreachable; drop them
    included &= assigned

    faces: list[tuple[int, int, int, int]] = []
    for i in range(rows - 1):
        for j in range(cols - 1):
            quad = (flat(i, j), flat(i, j + 1), flat(i + 1, j + 1), flat(i + 1, j))
            if all(included[v] for v in quad) and all(
                _segment_clears(zs[quad[t]], zs[quad[(t + 1) % 4]], centers, radius)
                for t in range(4)
            ):
                faces.append(quad)

    max_residual = 0.0
    if faces:
        stride = max(1, len(faces) // 64)
        for quad in faces[::stride]:
            loop = np.zeros(4, dtype=complex)
            for t in range(4):
                inc, _ = _edge_increment(
                    forms, zs[quad[t]], zs[quad[(t + 1) % 4]], tol.quad_rtol
                )
                loop += inc
            max_residual = max(max_residual, float(np.linalg.norm(loop.real)))

    x = values.real.copy()
    x[~included] = np.nan
    errors[~included] = np.nan
    with np.errstate(divide="ignore", invalid="ignore"):
        metric = metric_factor_from_phi(phi, zs)
        curvature = gauss_curvature(d, zs)
    metric = np.where(included, metric, np.nan)
    curvature = np.where(included, curvature, np.nan)

    period_ok = bool(compute_periods(d, tol).period_ok)

    return SurfaceMesh(
        z=zs,
        x=x,
        metric=metric,
        gauss=curvature,
        included=included,
        path_error=errors,
        faces=tuple(faces),
        shape=(rows, cols),
        base_point=z0,
        universal_cover_patch=not period_ok,
        max_loop_residual=max_residual,
    )


# -- export ---------------------------------------------------------------------

_CSV_HEADER = "re_z,im_z,x1,x2,x3,x4,metric_factor,gauss_curvature"


def _projection_matrix(projection) -> np.ndarray:
    if projection is None:
        projection = (0, 1, 2)
    if isinstance(projection, (tuple, list)) and len(projection) == 3 and all(
        isinstance(i, int) for i in projection
    ):
        if sorted(set(projection)) != sorted(projection) or not all(
            0 <= i <= 3 for i in projection
        ):
            raise ValueError("projection axes must be three distinct indices in 0..3")
        m = np.zeros((3, 4))
        for row, axis in enumerate(projection):
            m[row, axis] = 1.0
        return m
    m = np.asarray(projection, dtype=float)
    if m.shape != (3, 4):
        raise ValueError("projection matrix must have shape (3, 4)")
    if not np.allclose(m @ m.T, np.eye(3), atol=1e-9):
        raise ValueError("projection matrix rows must be orthonormal")
    return m


def export_mesh(mesh: SurfaceMesh, path, fmt: str = "csv", projection=None) -> None:
    """Write the included vertices as CSV, or a triangulated OBJ projection.

    CSV columns: re_z, im_z, x1..x4, metric_factor, gauss_curvature, one row
    per included vertex, 17 significant digits.  OBJ writes only v/f records,
    with the 4D immersion projected by three coordinate axes (default x1x2x3)
    or an orthonormal 3x4 matrix; quads become two triangles.
    """
    if fmt == "csv":
        lines = [_CSV_HEADER]
        for v in np.flatnonzero(mesh.included):
            z = mesh.z[v]
            fields = (
                z.real,
                z.imag,
                *(mesh.x[v, c] for c in range(4)),
                mesh.metric[v],
                mesh.gauss[v],
            )
            lines.append(",".join(f"{value:.17g}" for value in fields))
    elif fmt == "obj-3d":
        m = _projection_matrix(projection)
        obj_index = np.zeros(mesh.z.size, dtype=int)
        lines = []
        count = 0
        for v in np.flatnonzero(mesh.included):
            count += 1
            obj_index[v] = count  # OBJ indices are 1-based
            p = m @ mesh.x[v]
            lines.append("v " + " ".join(f"{c:.17g}" for c in p))
        for a, b, c, e in mesh.faces:
            lines.append(f"f {obj_index[a]} {obj_index[b]} {obj_index[c]}")
            lines.append(f"f {obj_index[a]} {obj_index[c]} {obj_index[e]}")
    else:
        raise ValueError(f"unknown export format: {fmt!r} (expected 'csv' or 'obj-3d')")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
