"""Solver contracts: residuals, uniqueness, branch logic, vectorization."""

import math

import numpy as np
import pytest

from ngstate import ReducedState
from ngstate import saddle
from ngstate import specfun as sf
from ngstate.saddle import Branch

LN2_SQ = 0.48045301391820142


def gap_residual(state, s, kernel):
    return (s - state.z0_sq) / state.xi - 1.0 / kernel(s)


def test_solve_gap_gaussian_shortcut():
    st = ReducedState.from_nx(1.0, 0.0)
    sol = saddle.solve_gap(st)
    assert sol.s == pytest.approx(LN2_SQ, rel=1e-15)
    assert sol.iterations == 0 and sol.residual == 0.0
    assert sol.branch is Branch.REAL


def test_solve_gap_self_consistency():
    # the construction pins the solution at ln(1+1/n)^2 for every x
    for n, x in [(1.0, 5.0), (0.1, 0.5), (10.0, 15.0), (10.0, 1000.0)]:
        st = ReducedState.from_nx(n, x)
        sol = saddle.solve_gap(st)
        assert sol.s == pytest.approx(st.z_gauss ** 2, rel=1e-12)
        assert abs(sol.residual) < 1e-12
        assert sol.s > 0.0


def test_solve_gap_negative_bare_frequency():
    st = ReducedState.from_nx(2.0, 3.0)  # z0_sq < 0 once x > 1/2
    assert st.z0_sq < 0
    sol = saddle.solve_gap(st)
    assert sol.s > 0
    assert abs(gap_residual(st, sol.s, sf.h_trace)) < 1e-10


def test_solve_gap_tilde_orders():
    st0 = ReducedState.from_nx(3.0, 0.0)
    assert saddle.solve_gap_tilde(st0).s == pytest.approx(st0.z_gauss ** 2, rel=1e-15)
    for n, x in [(0.1, 0.5), (1.0, 5.0), (10.0, 15.0), (100.0, 1.0)]:
        st = ReducedState.from_nx(n, x)
        sol = saddle.solve_gap_tilde(st)
        assert 0 < sol.s < st.z_gauss ** 2  # tilde frequency always drops
        lhs = (sol.s - st.z0_sq) / st.xi
        assert abs(gap_residual(st, sol.s, sf.h2)) < 1e-12 * max(1.0, abs(lhs))
        assert abs(sol.residual) < 1e-12
        n_tilde = 1.0 / math.expm1(math.sqrt(sol.s))
        assert n_tilde > n


def test_solve_gap_tilde_large_n_quadratic_limit():
    st = ReducedState.from_nx(100.0, 1.0)
    sol = saddle.solve_gap_tilde(st)
    n_tilde = 1.0 / math.expm1(math.sqrt(sol.s))
    # golden-ratio value of the limiting quadratic at x = 1
    assert n_tilde / 100.0 == pytest.approx(math.sqrt(1.6180339887498949), rel=2e-3)


def test_solve_trace_raw_validation():
    with pytest.raises(ValueError):
        saddle.solve_trace_raw(0.5, 0.0)


def test_saddle_uv_center_point():
    st = ReducedState.from_nx(10.0, 15.0)
    sol = saddle.solve_saddle_uv(st, 0.0, 0.0)
    assert sol.branch is Branch.IMAGINARY_CONTINUED
    assert sol.s == pytest.approx(-0.26301717967147564, rel=1e-10)
    assert abs(sol.residual) < 1e-12


def test_saddle_uv_gaussian_limit():
    st = ReducedState.from_nx(10.0, 0.0)
    for u_sq, v_sq in [(0.0, 0.0), (3.0, 1.0), (50.0, 4.0)]:
        sol = saddle.solve_saddle_uv(st, u_sq, v_sq)
        assert sol.s == st.z0_sq


def test_saddle_uv_zero_crossing_on_peak_locus():
    st = ReducedState.from_nx(10.0, 15.0)
    for v_sq in (0.0, 10.0, 60.0):
        u_c_sq = -st.z0_sq / st.xi - 1.0 / 3.0 - v_sq / 3.0
        assert u_c_sq > 0
        sol = saddle.solve_saddle_uv(st, u_c_sq, v_sq)
        assert abs(sol.s) < 1e-10
        assert saddle.solve_saddle_uv(st, u_c_sq + 1e-6, v_sq).s > 0
        assert saddle.solve_saddle_uv(st, u_c_sq - 1e-6, v_sq).s < 0


def test_saddle_uv_real_branch_condition():
    st = ReducedState.from_nx(10.0, 15.0)
    thresh = -st.z0_sq / st.xi
    for u_sq, v_sq in [(0.0, 0.0), (100.0, 30.0), (250.0, 0.0), (0.0, 700.0)]:
        sol = saddle.solve_saddle_uv(st, u_sq, v_sq)
        real_expected = (1.0 / 3.0 + u_sq + v_sq / 3.0) >= thresh
        assert (sol.branch is Branch.REAL) == real_expected
        assert (sol.s >= 0) == real_expected


def test_saddle_uv_uniqueness_scan():
    rng = np.random.default_rng(20240811)
    for _ in range(100):
        n = float(rng.uniform(0.05, 30.0))
        x = float(rng.uniform(0.01, 40.0))
        u_sq = float(rng.uniform(0.0, 50.0))
        v_sq = float(rng.uniform(0.0, 20.0))
        st = ReducedState.from_nx(n, x)
        # scan past the solver's own root so the crossing is inside the grid
        s_root = saddle.solve_saddle_uv(st, u_sq, v_sq).s
        hi = max(60.0, 2.0 * abs(s_root) + 10.0)
        grid = np.linspace(-math.pi ** 2 + 1e-6, hi, 30001)
        f0, fu, fv = sf.small_f(grid)
        diff = (grid - st.z0_sq) / st.xi - (f0 + fu * u_sq + fv * v_sq)
        signs = np.sign(diff)
        crossings = np.sum(signs[:-1] != signs[1:])
        assert crossings == 1, (n, x, u_sq, v_sq)


def test_saddle_uv_monotone_in_u_and_v():
    st = ReducedState.from_nx(10.0, 15.0)
    u = np.linspace(0.0, 300.0, 40)
    s_u, _ = saddle.solve_saddle_uv_many(st, u, np.zeros_like(u))
    assert np.all(np.diff(s_u) > 0)
    v = np.linspace(0.0, 50.0, 40)
    s_v, _ = saddle.solve_saddle_uv_many(st, np.zeros_like(v), v)
    assert np.all(np.diff(s_v) > 0)


def test_vectorized_matches_scalar():
    st = ReducedState.from_nx(2.0, 7.0)
    u = np.array([0.0, 1.0, 10.0, 100.0])
    v = np.array([0.0, 2.0, 0.5, 30.0])
    s_many, _ = saddle.solve_saddle_uv_many(st, u, v)
    for i in range(u.size):
        s_one = saddle.solve_saddle_uv(st, float(u[i]), float(v[i])).s
        assert s_many[i] == pytest.approx(s_one, rel=1e-13, abs=1e-14)


def test_vectorized_broadcasting_and_validation():
    st = ReducedState.from_nx(1.0, 1.0)
    u = np.linspace(0.0, 5.0, 7)[:, None]
    v = np.linspace(0.0, 2.0, 3)[None, :]
    s, _ = saddle.solve_saddle_uv_many(st, u, v)
    assert s.shape == (7, 3)
    with pytest.raises(ValueError):
        saddle.solve_saddle_uv_many(st, np.array([-1.0]), np.array([0.0]))
