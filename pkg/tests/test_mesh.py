from __future__ import annotations

from dataclasses import replace

import numpy as np
import pytest

from wlab.mesh import (
    Annulus,
    MeshRegionError,
    QuadratureConvergenceError,
    Rectangle,
    build_mesh,
    export_mesh,
)
from wlab.rational import RationalFunction
from wlab.tolerances import Tolerances
from wlab.weierstrass import WeierstrassData

Z = RationalFunction.variable()
ONE = RationalFunction.constant(1)
ZERO = RationalFunction.constant(0)


def enneper() -> WeierstrassData:
    return WeierstrassData(h=ONE, g1=Z, g2=ZERO, punctures=("inf",))


def enneper_exact(z: complex) -> np.ndarray:
    """Antiderivative of (1/2, i/2, z/2, -iz/2): x = Re(z/2, iz/2, z^2/4, -iz^2/4)."""
    return np.array(
        [(z / 2).real, (1j * z / 2).real, (z * z / 4).real, (-1j * z * z / 4).real]
    )


def vertex_at(mesh, z: complex) -> int:
    v = int(np.argmin(np.abs(mesh.z - z)))
    assert abs(mesh.z[v] - z) < 1e-12
    return v


# ---------------------------------------------------------------------------
# integration correctness


def test_matches_closed_form_antiderivative():
    m = build_mesh(enneper(), Rectangle(-1.5, 1.5, -1.5, 1.5), 13, 0j)
    assert np.allclose(m.x[vertex_at(m, 1.0)], [0.5, 0.0, 0.25, 0.0], atol=1e-8)
    assert np.allclose(m.x[vertex_at(m, 1j)], [0.0, -0.5, -0.25, 0.0], atol=1e-8)
    for v in np.flatnonzero(m.included):
        assert np.linalg.norm(m.x[v] - enneper_exact(m.z[v])) < 1e-8


def test_base_point_maps_to_origin():
    m = build_mesh(enneper(), Rectangle(-1.0, 1.0, -1.0, 1.0), 9, 0j)
    assert np.allclose(m.x[vertex_at(m, 0j)], 0.0, atol=1e-14)
    shifted = build_mesh(enneper(), Rectangle(-1.0, 1.0, -1.0, 1.0), 9, 0.5 + 0.5j)
    assert np.allclose(shifted.x[vertex_at(shifted, 0.5 + 0.5j)], 0.0, atol=1e-14)


def test_refinement_stays_within_error_estimate():
    d = WeierstrassData(h=1 / Z**3, g1=Z, g2=ONE, punctures=("0", "inf"))
    region = Rectangle(0.5, 2.5, 0.5, 2.5)
    coarse = build_mesh(d, region, 9, 1.0 + 1.0j)
    fine = build_mesh(d, region, 17, 1.0 + 1.0j)
    rows, cols = coarse.shape
    for i in range(rows):
        for j in range(cols):
            u = i * cols + j
            v = (2 * i) * (2 * cols - 1) + 2 * j
            assert abs(fine.z[v] - coarse.z[u]) < 1e-12
            budget = coarse.path_error[u] + fine.path_error[v] + 1e-12
            assert np.linalg.norm(fine.x[v] - coarse.x[u]) <= budget


def test_loop_residuals_far_below_error_budget():
    m = build_mesh(enneper(), Rectangle(-1.0, 1.0, -1.0, 1.0), 13, 0j)
    budget = 10 * np.nanmax(m.path_error) + 1e-12
    assert m.max_loop_residual <= budget


def test_discrete_conformality_and_pullback_metric():
    n = 41
    m = build_mesh(enneper(), Rectangle(-1.0, 1.0, -1.0, 1.0), n, 0j)
    rows, cols = m.shape
    h = 2.0 / (n - 1)
    x = m.x.reshape(rows, cols, 4)
    lam2 = m.metric.reshape(rows, cols)
    xu = (x[:, 2:, :] - x[:, :-2, :]) / (2 * h)
    xv = (x[2:, :, :] - x[:-2, :, :]) / (2 * h)
    inner = np.einsum("ijk,ijk->ij", xu[1:-1, :, :], xv[:, 1:-1, :])
    eu = np.einsum("ijk,ijk->ij", xu[1:-1, :, :], xu[1:-1, :, :])
    ev = np.einsum("ijk,ijk->ij", xv[:, 1:-1, :], xv[:, 1:-1, :])
    scale = 1.0 + lam2[1:-1, 1:-1]
    assert np.max(np.abs(inner) / scale) < 5e-3
    assert np.max(np.abs(eu - ev) / scale) < 5e-3
    assert np.max(np.abs(eu - lam2[1:-1, 1:-1]) / scale) < 5e-3


def test_flat_data_spans_a_two_plane():
    d = WeierstrassData(
        h=ONE, g1=RationalFunction.constant(2), g2=RationalFunction.constant(0.5j), punctures=("inf",)
    )
    m = build_mesh(d, Rectangle(-1.0, 1.0, -1.0, 1.0), 9, 0j)
    svals = np.linalg.svd(np.cov(m.x[m.included].T), compute_uv=False)
    assert svals[2] < 1e-9 and svals[3] < 1e-9


# ---------------------------------------------------------------------------
# annulus patches and periods


def test_annulus_seam_gap_is_the_period():
    # phi_4 = -i/(2z) has residue -i/2, so x_4 gains Re(2 pi i * -i/2) = pi
    # per loop; the cut seam exposes exactly that gap.
    d = WeierstrassData(h=1 / Z**2, g1=Z, g2=ZERO, punctures=("0", "inf"))
    m = build_mesh(d, Annulus(0j, 0.5, 2.0), (7, 25), 1.0 + 0j)
    assert m.universal_cover_patch
    rows, cols = m.shape
    gaps = [m.x[r * cols + cols - 1] - m.x[r * cols] for r in range(rows)]
    for gap in gaps:
        assert np.allclose(gap, [0.0, 0.0, 0.0, np.pi], atol=1e-9)


def test_annulus_closes_when_periods_vanish():
    d = WeierstrassData(h=1 / Z**3, g1=Z, g2=ONE, punctures=("0", "inf"))
    m = build_mesh(d, Annulus(0j, 0.5, 2.0), (7, 25), 1.0 + 0j)
    assert not m.universal_cover_patch
    rows, cols = m.shape
    for r in range(rows):
        gap = m.x[r * cols + cols - 1] - m.x[r * cols]
        assert np.linalg.norm(gap) < 1e-9


# ---------------------------------------------------------------------------
# exclusions and validation


def test_puncture_inside_region_is_fenced_off():
    d = WeierstrassData(h=1 / Z, g1=Z, g2=ZERO, punctures=("0", "inf"))
    m = build_mesh(d, Rectangle(-1.0, 1.0, -1.0, 1.0), 9, 1.0 + 1.0j)
    center = vertex_at(m, 0j)
    assert not m.included[center]
    assert m.included_count == m.z.size - 1
    assert np.isnan(m.x[center, 0]) and np.isnan(m.metric[center])
    assert all(center not in quad for quad in m.faces)
    assert len(m.faces) == 64 - 4
    assert np.isfinite(m.x[m.included]).all()


def test_zero_exclusion_with_interior_puncture_rejected():
    d = WeierstrassData(h=1 / Z, g1=Z, g2=ZERO, punctures=("0", "inf"))
    bare = replace(Tolerances(), mesh_exclusion_factor=0.0)
    with pytest.raises(MeshRegionError):
        build_mesh(d, Rectangle(-1.0, 1.0, -1.0, 1.0), 9, 1.0 + 1.0j, tol=bare)


def test_base_point_validation():
    with pytest.raises(MeshRegionError):
        build_mesh(enneper(), Rectangle(-1.0, 1.0, -1.0, 1.0), 9, 5.0 + 0j)
    d = WeierstrassData(h=1 / Z, g1=Z, g2=ZERO, punctures=("0", "inf"))
    with pytest.raises(MeshRegionError):
        build_mesh(d, Rectangle(-1.0, 1.0, -1.0, 1.0), 9, 0j)


def test_region_and_resolution_validation():
    with pytest.raises(TypeError):
        build_mesh(enneper(), "rectangle", 9, 0j)
    with pytest.raises(ValueError):
        build_mesh(enneper(), Rectangle(-1.0, 1.0, -1.0, 1.0), 1, 0j)
    with pytest.raises(ValueError):
        Rectangle(1.0, -1.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        Annulus(0j, 2.0, 0.5)


def test_edge_through_pole_fails_loudly():
    # g1 has a pole at 0.1, placed exactly on a grid row, and the exclusion
    # radius is zeroed so nothing fences it off: the edge quadrature must
    # refuse rather than return garbage.
    d = WeierstrassData(h=ONE, g1=1 / (Z - 0.1), g2=ZERO, punctures=("inf",))
    bare = replace(Tolerances(), mesh_exclusion_factor=0.0)
    with pytest.raises(QuadratureConvergenceError):
        build_mesh(d, Rectangle(-1.0, 1.0, -1.0, 1.0), 9, -1.0 + 0j, tol=bare)


# ---------------------------------------------------------------------------
# export


def test_csv_two_by_two(tmp_path):
    m = build_mesh(enneper(), Rectangle(0.0, 1.0, 0.0, 1.0), 2, 0j)
    out = tmp_path / "m.csv"
    export_mesh(m, out, "csv")
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "re_z,im_z,x1,x2,x3,x4,metric_factor,gauss_curvature"
    assert len(lines) == 1 + 4


def test_csv_deterministic(tmp_path):
    region = Rectangle(-1.0, 1.0, -1.0, 1.0)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    export_mesh(build_mesh(enneper(), region, 7, 0j), a, "csv")
    export_mesh(build_mesh(enneper(), region, 7, 0j), b, "csv")
    assert a.read_bytes() == b.read_bytes()


def test_obj_counts_and_projection(tmp_path):
    d = WeierstrassData(h=1 / Z, g1=Z, g2=ZERO, punctures=("0", "inf"))
    m = build_mesh(d, Rectangle(-1.0, 1.0, -1.0, 1.0), 9, 1.0 + 1.0j)
    out = tmp_path / "m.obj"
    export_mesh(m, out, "obj-3d", projection=(0, 1, 3))
    lines = out.read_text(encoding="utf-8").splitlines()
    vs = [l for l in lines if l.startswith("v ")]
    fs = [l for l in lines if l.startswith("f ")]
    assert len(vs) == m.included_count
    assert len(fs) == 2 * len(m.faces)
    assert set(l.split()[0] for l in lines) == {"v", "f"}
    refs = {int(t) for l in fs for t in l.split()[1:]}
    assert min(refs) >= 1 and max(refs) <= len(vs)


def test_obj_matrix_projection(tmp_path):
    m = build_mesh(enneper(), Rectangle(0.0, 1.0, 0.0, 1.0), 3, 0j)
    ortho = np.array(
        [[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 0.6, 0.8]]
    )
    export_mesh(m, tmp_path / "ok.obj", "obj-3d", projection=ortho)
    skewed = ortho.copy()
    skewed[2, 2] = 1.0
    with pytest.raises(ValueError):
        export_mesh(m, tmp_path / "bad.obj", "obj-3d", projection=skewed)
    with pytest.raises(ValueError):
        export_mesh(m, tmp_path / "bad2.obj", "obj-3d", projection=(0, 0, 1))
    with pytest.raises(ValueError):
        export_mesh(m, tmp_path / "bad3.csv", "vtk")
