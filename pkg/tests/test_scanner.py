import dataclasses
import math

import numpy as np
import pytest

from onetrough import (
    Classification,
    DomainError,
    GridSpec,
    NumericalError,
    RegionMap,
    audit_bounds,
    boundary_curves,
    count_levels,
    make_params,
    p0,
    scan,
    theta_min,
)
from onetrough import scanner
from onetrough.scanner import scan_column

SMALL = GridSpec(0.1, 1.4, 0.1, 0.05, 0.95, 0.1)


@pytest.fixture(scope="module")
def coarse_map():
    return scan(GridSpec.coarse())


def test_grid_shapes():
    assert GridSpec.coarse().shape == (28, 49)
    assert GridSpec().shape == (277, 499)
    assert GridSpec.from_counts(100, 100).shape == (100, 100)


@pytest.mark.parametrize(
    "kw",
    [dict(c_step=0.0), dict(p_step=-1.0), dict(c_min=0.0), dict(c_max=1.5), dict(p_max=1.0), dict(c_min=1.0, c_max=0.5)],
)
def test_grid_validation(kw):
    with pytest.raises(DomainError):
        GridSpec(**kw)


def test_determinism():
    a, b = scan(SMALL), scan(SMALL)
    assert np.array_equal(a.counts(), b.counts())
    assert [c.classification for c in a.iter_cells()] == [c.classification for c in b.iter_cells()]


def test_parallel_matches_serial():
    assert scan(SMALL, workers=2).cells == scan(SMALL).cells


def test_column_reuse_matches_per_cell():
    c = 0.7
    ps = [0.01, 0.2, 0.5]
    col = scan_column(c, ps)
    shared = theta_min(c)
    for cell, p in zip(col, ps):
        res = count_levels(make_params(c, p))
        assert cell.count == res.count
        assert cell.levels == tuple(res.levels)
        reused = count_levels(make_params(c, p), shared)
        assert abs(reused.window.theta_min - res.window.theta_min) <= 1e-12


def test_cell_at_five_point():
    spec = GridSpec(0.61005, 0.61105, 0.0005, 0.00065, 0.00075, 0.00005)
    region = scan(spec)
    assert region.cells[0][0].count == 5
    assert region.cells[0][0].levels == (2, 3, 4, 5, 6)
    assert region.counts().max() == 5


def test_cell_at_zero_point():
    cell = scan(GridSpec(0.99, 0.99, 0.01, 0.4, 0.4, 0.01)).cells[0][0]
    assert cell.count == 0 and cell.classification is Classification.ZERO


def test_coarse_scan_observed_max(coarse_map):
    # five-solution cells need p below about 1e-3; the coarse grid starts at 0.02
    assert coarse_map.counts().max() == 3
    assert audit_bounds(coarse_map) == []


def test_small_p_grid_reaches_five():
    spec = GridSpec(0.40, 0.60, 0.01, 0.0002, 0.0012, 0.0002)
    region = scan(spec)
    assert region.counts().max() == 5
    assert audit_bounds(region) == []


def test_audit_detects_corruption(coarse_map):
    cells = [list(col) for col in coarse_map.cells]
    cells[3][4] = dataclasses.replace(cells[3][4], count=cells[3][4].bound + 1)
    bad = audit_bounds(RegionMap(coarse_map.spec, cells))
    assert bad == [cells[3][4]]


def test_audit_empty_map():
    assert audit_bounds(RegionMap(SMALL, [])) == []


def test_high_p_strip_zero(coarse_map):
    for cell in coarse_map.iter_cells():
        if cell.p > 0.64 and cell.p > p0(cell.c):
            assert cell.count == 0


def test_empty_window_cells_classified(coarse_map):
    kinds = {cell.classification for cell in coarse_map.iter_cells()}
    assert Classification.ZERO in kinds and Classification.N_SOLUTIONS in kinds
    region = scan(GridSpec(1.40, 1.40, 0.01, 0.995, 0.995, 0.01))
    assert region.cells[0][0].classification is Classification.EMPTY_WINDOW


def test_failed_cells_recorded(monkeypatch):
    real = scanner.count_levels

    def flaky(params, tm=None):
        if abs(params.p - 0.45) < 1e-9:
            raise NumericalError("injected")
        return real(params, tm)

    monkeypatch.setattr(scanner, "count_levels", flaky)
    region = scan(GridSpec(0.5, 0.6, 0.1, 0.35, 0.55, 0.1))
    failed = [c for c in region.iter_cells() if c.classification is Classification.FAILED]
    assert len(failed) == 2 and all(c.error == "injected" for c in failed)
    assert (region.counts() == -1).sum() == 2
    assert audit_bounds(region) == []


def test_boundary_curves():
    spec = GridSpec(0.5, 1.40, 0.01, 0.01, 0.99, 0.5)
    curves = boundary_curves(spec).curves
    p0c = dict(curves["p0"])
    assert min(p0c) == pytest.approx(1.01)
    assert p0c[min(p0c)] == pytest.approx(p0(1.01))
    assert max(p0c.values()) == pytest.approx(p0(1.40))
    assert p0(math.sqrt(2)) == pytest.approx(1.0)
    assert curves["p2"][0][1] == pytest.approx(0.64)
    assert curves["theta_min=theta2"], "empty-window frontier missing"
    assert all(c > 1 for c, _ in curves["theta_min=theta2"])
    for c, p in curves["theta_min=theta1"]:
        assert c > 0.9 and p > p0(c)


def test_frontier_separates_empty_window():
    spec = GridSpec(1.35, 1.40, 0.05, 0.01, 0.99, 0.5)
    for c, p in boundary_curves(spec).curves["theta_min=theta2"]:
        below = count_levels(make_params(c, p - 1e-3))
        above = count_levels(make_params(c, min(p + 1e-3, 1 - 1e-6)))
        assert not below.window_empty and above.window_empty
