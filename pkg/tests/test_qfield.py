import numpy as np
import pytest

from polyft import qfield
from polyft.errors import FieldEvaluationError, FieldFormatError, GridMismatch, OpenMesh, ZeroWavevector
from polyft.ft_core import ft_sphere_analytic
from polyft.geometry import SurfaceMesh
from polyft.mesh_io import icosphere, read_field_csv, write_field_csv
from polyft.qfield import Axis, FTField, QGrid, compare_fields, evaluate_field


def line_grid(lo, hi, n):
    return QGrid(Axis(lo, hi, n), Axis(0.0, 0.0, 1), Axis(0.0, 0.0, 1))


def test_axis_parse():
    assert Axis.parse("-10:10:40") == Axis(-10.0, 10.0, 40)
    assert Axis.parse("2.5") == Axis(2.5, 2.5, 1)
    assert Axis.parse("3:7:1").values().tolist() == [3.0]
    v = Axis.parse("0:1:5").values()
    assert v[0] == 0.0 and v[-1] == 1.0 and len(v) == 5
    for bad in ("1:2", "a:b:c", "0:1:0", "2:1:3"):
        with pytest.raises(ValueError):
            Axis.parse(bad)


def test_grid_points_qx_fastest():
    g = QGrid(Axis(0, 1, 2), Axis(5, 6, 2), Axis(9, 9, 1))
    assert g.shape == (2, 2, 1) and len(g) == 4
    assert g.points().tolist() == [[0, 5, 9], [1, 5, 9], [0, 6, 9], [1, 6, 9]]
    assert QGrid.from_points(g.points()) == g


def test_from_points_rejects_irregular():
    with pytest.raises(FieldFormatError):
        QGrid.from_points([[0, 0, 0], [1, 0, 0], [3, 0, 0]])


def test_single_point_cube(cube):
    field = evaluate_field("mesh", cube, line_grid(0, 0, 1))
    assert field.values.tolist() == [1.0 + 0j]


def test_symmetric_grid_conjugate_pairs(cube):
    g = QGrid(Axis(-5, 5, 11), Axis(-3, 3, 7), Axis(-2, 2, 3))
    v = evaluate_field("mesh", cube, g).values
    # the point list of a symmetric grid reversed is its negation
    np.testing.assert_array_equal(g.points()[::-1], -g.points())
    np.testing.assert_allclose(v[::-1], np.conj(v), rtol=0, atol=1e-12)


def test_compare_against_itself(cube):
    f = evaluate_field("mesh", cube, line_grid(-4, 4, 9))
    rep = compare_fields(f, f)
    assert (rep.max_abs, rep.mean_abs, rep.max_rel) == (0.0, 0.0, 0.0)
    assert rep.lines() == ["max_abs=0", "mean_abs=0", "max_rel=0", "at_q=-4,0,0"]


def test_cube_mesh_vs_prism(cube):
    g = QGrid(Axis(-20, 20, 9), Axis(-7, 13, 5), Axis(0.5, 0.5, 1))
    rep = compare_fields(evaluate_field("mesh", cube, g), evaluate_field("prism", (1, 1, 1), g))
    assert rep.max_abs < 1e-10


def test_grid_mismatch(cube):
    a = evaluate_field("prism", (1, 1, 1), line_grid(0, 1, 3))
    b = evaluate_field("prism", (1, 1, 1), line_grid(0, 1, 4))
    with pytest.raises(GridMismatch):
        compare_fields(a, b)


def test_icosphere_level_convergence():
    g = line_grid(0.5, 10, 50)
    ref = evaluate_field("sphere", 1.0, g)
    from polyft.mesh_io import match_volume

    errs = []
    for level in (1, 3):
        m = match_volume(icosphere(1.0, level), 4 * np.pi / 3)
        errs.append(compare_fields(evaluate_field("mesh", m, g), ref).max_rel)
    assert errs[1] < errs[0]


def test_sphere_backend():
    g = line_grid(0, 10, 11)
    f = evaluate_field("sphere", 2.0, g)
    np.testing.assert_array_equal(f.values, ft_sphere_analytic(g.points()[:, 0], 2.0))


def test_threads_do_not_change_bits(fixture_mesh):
    g = QGrid(Axis(-10, 10, 23), Axis(-10, 10, 29), Axis(0, 0, 1))
    one = evaluate_field("mesh", fixture_mesh, g, threads=1).values
    many = evaluate_field("mesh", fixture_mesh, g, threads=8).values
    assert one.tobytes() == many.tobytes()


def test_error_carries_q(monkeypatch):
    def backend(kind, subject):
        def fn(qs):
            if np.any(qs[:, 0] == 2.0):
                raise ZeroWavevector("boom")
            return np.ones(len(qs))
        return fn

    monkeypatch.setattr(qfield, "_backend", backend)
    with pytest.raises(FieldEvaluationError) as info:
        evaluate_field("prism", None, line_grid(0, 4, 5), threads=2)
    assert tuple(info.value.q) == (2.0, 0.0, 0.0)
    assert isinstance(info.value.cause, ZeroWavevector)


def test_open_mesh_fails_before_evaluation(cube):
    with pytest.raises(OpenMesh):
        evaluate_field("mesh", SurfaceMesh(cube.vertices, cube.facets[:-2]), line_grid(0, 1, 3))


def test_field_length_checked():
    with pytest.raises(ValueError):
        FTField(line_grid(0, 1, 3), np.zeros(2))


def test_csv_round_trip_preserves_field(fixture_mesh):
    g = QGrid(Axis(-10, 10, 7), Axis(-1, 3, 4), Axis(0.25, 0.25, 1))
    f = evaluate_field("mesh", fixture_mesh, g)
    back = read_field_csv(write_field_csv(f))
    assert back.grid == g
    np.testing.assert_array_equal(back.values, f.values)
