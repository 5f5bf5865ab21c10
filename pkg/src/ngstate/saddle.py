"""Root solvers for the three self-consistency (gap/saddle) equations.

All three equations share one shape,

    (s - z0_sq)/xi = RHS(s),

with a right-hand side that decreases monotonically in s and diverges to
+infinity at the left edge of its domain, while the left-hand side is an
increasing straight line.  The difference LHS - RHS is therefore strictly
increasing with a single sign change, which makes plain bracketed
bisection both safe and bitwise deterministic -- no damping, no starting
guesses, no luck involved.  The solvers below differ only in the RHS
kernel and the domain:

    solve_gap         1/h_trace(s)            s in (0, inf)
    solve_gap_tilde   1/h2(s)                 s in (0, inf)
    solve_saddle_uv   f0 + fu*u^2 + fv*v^2    s in (-pi^2, inf)

The grid front end solve_saddle_uv_many runs the same bisection on whole
numpy arrays at once (one kernel evaluation per iteration for the entire
grid), which is what keeps large surface sweeps cheap.

For x = 0 every equation degenerates (xi = 0 pins s = z0_sq exactly), so
the solvers return the closed-form answer without iterating.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING

import numpy as np

from . import specfun as _sf

if TYPE_CHECKING:  # pragma: no cover - import only for type checkers
    from .statemap import ReducedState

__all__ = [
    "Branch",
    "SaddleSolution",
    "solve_gap",
    "solve_gap_tilde",
    "solve_saddle_uv",
    "solve_saddle_uv_many",
    "solve_trace_raw",
]

_MAX_ITER = 160
_HI_CAP = 1e250


class Branch(Enum):
    REAL = "Real"
    IMAGINARY_CONTINUED = "ImaginaryContinued"


@dataclass(frozen=True)
class SaddleSolution:
    """A solved squared frequency with bookkeeping.

    residual is the defining-equation mismatch at s, measured relative to
    the magnitude of the left-hand side (or 1 if that is smaller).
    """

    s: float
    branch: Branch
    residual: float
    iterations: int


def _branch_of(s):
    return Branch.REAL if s >= 0.0 else Branch.IMAGINARY_CONTINUED


def solve_trace_raw(z0_sq, xi, kernel=_sf.h_trace) -> SaddleSolution:
    """Solve (s - z0_sq)/xi = 1/kernel(s) for s > 0 (raw-parameter form).

    kernel is h_trace for the physical state, h2 for the doubled-parameter
    system that shows up in purity work; both vanish linearly at s = 0+ so
    the RHS always dominates at the left end and a bracket exists.
    """
    if not xi > 0:
        raise ValueError(f"solve_trace_raw needs xi > 0, got {xi}")

    def g(s):
        return (s - z0_sq) / xi - 1.0 / kernel(s)

    lo = 1e-6
    while g(lo) >= 0.0:
        lo /= 16.0
        if lo < 1e-300:
            raise RuntimeError("failed to bracket the trace gap equation from below")
    hi = max(z0_sq, 1.0)
    while g(hi) < 0.0:
        hi *= 2.0
        if hi > _HI_CAP:
            raise RuntimeError("failed to bracket the trace gap equation from above")
    it = 0
    # width tolerance must be relative to s itself: roots can sit at
    # s ~ 1e-5 (large n) and an absolute cutoff would leave the scaled
    # residual orders of magnitude above the 1e-12 contract
    while it < _MAX_ITER and (hi - lo) > 1e-15 * max(abs(lo), abs(hi)):
        mid = 0.5 * (lo + hi)
        if g(mid) < 0.0:
            lo = mid
        else:
            hi = mid
        it += 1
    s = 0.5 * (lo + hi)
    scale = max(1.0, abs((s - z0_sq) / xi))
    return SaddleSolution(s=s, branch=Branch.REAL, residual=g(s) / scale,
                          iterations=it)


def solve_gap(state: "ReducedState") -> SaddleSolution:
    """Effective squared frequency of the state's Gaussian kernel (s > 0)."""
    if state.x == 0.0:
        return SaddleSolution(s=state.z0_sq, branch=Branch.REAL,
                              residual=0.0, iterations=0)
    return solve_trace_raw(state.z0_sq, state.xi, kernel=_sf.h_trace)


def solve_gap_tilde(state: "ReducedState") -> SaddleSolution:
    """Doubled-parameter squared frequency (s > 0, kernel z*tanh z)."""
    if state.x == 0.0:
        return SaddleSolution(s=state.z0_sq, branch=Branch.REAL,
                              residual=0.0, iterations=0)
    return solve_trace_raw(state.z0_sq, state.xi, kernel=_sf.h2)


def _rhs_many(s, u_sq, v_sq):
    f0, fu, fv = _sf.small_f(s)
    return f0 + fu * u_sq + fv * v_sq


def solve_saddle_uv_many(state: "ReducedState", u_sq, v_sq, max_iter=_MAX_ITER):
    """Vectorized matrix-element saddle solve over arrays of (u^2, v^2).

    Returns (s, iterations) where s has the broadcast shape of the inputs.
    The bracket is shared by all points (the equation's difference
    function is increasing in s and decreasing in u^2, v^2), then plain
    synchronized bisection runs on the whole array at once.
    """
    if state.x == 0.0:
        u_sq, v_sq = np.broadcast_arrays(np.asarray(u_sq, float),
                                         np.asarray(v_sq, float))
        return np.full(u_sq.shape, state.z0_sq), 0
    u_sq = np.asarray(u_sq, dtype=float)
    v_sq = np.asarray(v_sq, dtype=float)
    if np.any(u_sq < 0) or np.any(v_sq < 0):
        raise ValueError("u_sq and v_sq must be >= 0")
    u_sq, v_sq = np.broadcast_arrays(u_sq, v_sq)
    z0_sq, xi = state.z0_sq, state.xi

    def g(s):
        return (s - z0_sq) / xi - _rhs_many(s, u_sq, v_sq)

    # Every step below is strictly per-element: each point's bracket and
    # bisection trajectory depend only on that point, never on which other
    # points happen to share the call.  That is what makes grid results
    # bitwise independent of how a surface is chunked across workers.
    pole = -math.pi ** 2

    # Left end: f0 ~ 2/eps at s = -pi^2 + eps beats any finite LHS once
    # eps is small enough; walk each point in until it does.
    eps = np.full(u_sq.shape, 1e-9)
    need = g(pole + eps) >= 0.0
    while np.any(need):
        eps = np.where(need, eps / 1000.0, eps)
        if np.any(eps[need] < 1e-14):
            raise RuntimeError("failed to bracket the saddle equation at the pole")
        need = need & (g(pole + eps) >= 0.0)
    lo = pole + eps

    hi = np.full(u_sq.shape, max(z0_sq, 1.0))
    need = g(hi) < 0.0
    while np.any(need):
        hi = np.where(need, hi * 2.0, hi)
        if np.any(hi[need] > _HI_CAP):
            raise RuntimeError("failed to bracket the saddle equation from above")
        need = need & (g(hi) < 0.0)

    # Fixed-count bisection (no data-dependent early exit): after max_iter
    # halvings every interval is at the floating-point floor, and skipping
    # a shared convergence test keeps each element's result independent of
    # its neighbours.
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        below = g(mid) < 0.0
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi), max_iter


def solve_saddle_uv(state: "ReducedState", u_sq: float, v_sq: float) -> SaddleSolution:
    """Matrix-element saddle frequency at a single phase-space point.

    Unique root of (s - z0_sq)/xi = f0(s) + fu(s)*u^2 + fv(s)*v^2 over
    s in (-pi^2, inf).  The branch tag records whether the root needed
    the imaginary continuation (s < 0).
    """
    if state.x == 0.0:
        return SaddleSolution(s=state.z0_sq, branch=_branch_of(state.z0_sq),
                              residual=0.0, iterations=0)
    s_arr, it = solve_saddle_uv_many(state, np.array([u_sq]), np.array([v_sq]))
    s = float(s_arr[0])
    lhs = (s - state.z0_sq) / state.xi
    resid = (lhs - _rhs_many(s, u_sq, v_sq)) / max(1.0, abs(lhs))
    return SaddleSolution(s=s, branch=_branch_of(s), residual=float(resid),
                          iterations=it)
