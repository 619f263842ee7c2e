import numpy as np
import pytest

from adplab import rendezvous as rv
from adplab.lp_core import LpVector, basis


def test_avg_distance_hand_value():
    p = 2.0
    pts = [basis(0, 2, p), basis(0, 2, p).scale(-1.0)]
    assert rv.avg_distance(pts, basis(1, 2, p)) == pytest.approx(np.sqrt(2.0))
    assert rv.avg_distance(pts, basis(0, 2, p)) == pytest.approx(1.0)


def test_antipodal_pair_in_euclidean_plane():
    pts = [basis(0, 2, 2.0), basis(0, 2, 2.0).scale(-1.0)]
    iv = rv.interval(pts, starts=8, seed=0)
    lo, hi = rv.circle_oracle(pts)
    assert iv.lo == pytest.approx(1.0, abs=1e-5) and iv.hi == pytest.approx(np.sqrt(2), abs=1e-5)
    assert iv.lo == pytest.approx(lo, abs=1e-5) and iv.hi == pytest.approx(hi, abs=1e-5)
    assert iv.converged


@pytest.mark.parametrize("p", [2.0, 3.0, 5.0])
def test_single_point(p):
    iv = rv.interval([basis(0, 3, p)], starts=4, seed=1)
    assert iv.lo == pytest.approx(0.0, abs=1e-6)
    assert iv.hi == pytest.approx(2.0, abs=1e-6)


@pytest.mark.parametrize("seed", [0, 1, 2])
@pytest.mark.parametrize("p", [2.5, 4.0])
def test_random_planar_sets_match_grid_oracle(seed, p):
    pts = rv.random_sphere_points(4, 2, p, seed=seed)
    iv = rv.interval(pts, starts=8, seed=seed)
    lo, hi = rv.circle_oracle(pts, grid=200_000)
    assert iv.lo == pytest.approx(lo, abs=1e-5)
    assert iv.hi == pytest.approx(hi, abs=1e-5)


def test_points_must_be_unit():
    with pytest.raises(ValueError):
        rv.interval([LpVector([2.0, 0.0], 3.0)])
    with pytest.raises(ValueError):
        rv.circle_oracle([basis(0, 3, 3.0)])


def test_dimension_sweep_rows():
    rows = rv.dimension_sweep(3, [2, 4], 3.0, starts=4, seed=0)
    assert [r["d"] for r in rows] == [2, 4]
    assert all(0.0 <= r["lo"] <= r["hi"] <= 2.0 for r in rows)
