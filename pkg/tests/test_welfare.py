import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from contract_lab.contract import Scenario
from contract_lab.distributions import Exponential, PointMass
from contract_lab.welfare import (
    anchors,
    build_trajectories,
    efficient_welfare,
    grid_revelation_preference,
    sign_changes,
)


def test_efficient_welfare_examples(uniform_scenario):
    assert efficient_welfare(uniform_scenario) == pytest.approx(0.3125, abs=1e-12)
    assert efficient_welfare(Scenario(1.5, 0.3, PointMass(0.0), PointMass(0.0))) == pytest.approx(1.5, abs=1e-14)


@pytest.mark.parametrize("lam", [0.05, 0.1, 0.5])
def test_efficient_welfare_exponential(lam):
    b = 20 * lam
    s = Scenario(b, 0.5, Exponential(lam), Exponential(lam))
    assert efficient_welfare(s) == pytest.approx(b - lam, abs=1e-3)
    assert efficient_welfare(s) == pytest.approx(b - lam + lam * math.exp(-b / lam), abs=1e-10)


def test_fig6_trajectories(fig6):
    garb, rest = build_trajectories(fig6, 201, "fig6")
    a = anchors(fig6)
    assert garb.anchors == rest.anchors == a
    assert (garb.points[0].v, garb.points[0].pi) == (pytest.approx(a["A"][0], abs=1e-10), pytest.approx(a["A"][1], abs=1e-10))
    assert (garb.points[-1].v, garb.points[-1].pi) == (pytest.approx(a["F"][0], abs=1e-10), pytest.approx(a["F"][1], abs=1e-10))
    assert (rest.points[0].v, rest.points[-1].v) == (pytest.approx(a["A"][0], abs=1e-9), pytest.approx(a["F"][0], abs=1e-9))
    for traj in (garb, rest):
        pis = [p.pi for p in traj.points]
        assert all(b >= c - 1e-12 for c, b in zip(pis, pis[1:]))
        assert all(p.w <= a["w_max"] + 1e-12 for p in traj.points)
        assert all(abs(p.w - p.v - p.pi) <= 1e-10 for p in traj.points)
    vg = [p.v for p in garb.points]
    best = max(range(len(vg)), key=vg.__getitem__)
    assert 0 < best < len(vg) - 1 and vg[best] > a["A"][0]
    vr = [p.v for p in rest.points]
    assert max(range(len(vr)), key=vr.__getitem__) == 0
    assert garb.to_dict()["anchors"]["A"] == list(a["A"])


def test_trajectories_need_points(fig6):
    with pytest.raises(ValueError):
        build_trajectories(fig6, 5)


def test_revelation_grid_examples():
    cells = grid_revelation_preference(1.0, 0.5, [0.3, 0.95], [0.3, 0.05])
    assert [(c.lambda0, c.lambda1) for c in cells] == [(0.3, 0.3), (0.3, 0.05), (0.95, 0.3), (0.95, 0.05)]
    assert abs(cells[0].v_rev_minus_v_con) <= 1e-12
    # frozen from a verified run
    assert cells[3].v_rev_minus_v_con == pytest.approx(0.018243829876800843, abs=1e-9)
    assert cells[3].w_con == pytest.approx(0.5440523627941564, abs=1e-9)
    assert cells[3].w_rev == pytest.approx(0.6005005239710546, abs=1e-9)
    with pytest.raises(ValueError):
        grid_revelation_preference(1.0, 0.5, [0.0], [0.1])


@given(st.floats(0.01, 1.0), st.floats(0.01, 1.0))
def test_revelation_grid_antisymmetric_at_half(l0, l1):
    a, c = grid_revelation_preference(1.0, 0.5, [l0, l1], [l1])[0], grid_revelation_preference(1.0, 0.5, [l1], [l0])[0]
    assert a.v_rev_minus_v_con == pytest.approx(c.v_rev_minus_v_con, abs=1e-9)


def test_sign_changes():
    assert sign_changes([1, -1, 1]) == 2
    assert sign_changes([1, 0, 1]) == 0
    assert sign_changes([1e-12, -1e-12, 3], 1e-10) == 0
    assert sign_changes([]) == 0
