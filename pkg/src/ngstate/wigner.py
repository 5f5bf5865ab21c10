"""O(N) Wigner function by finite-N Bessel quadrature and extrapolation.

The Wigner function of the effective operator depends on phase space only
through u^2 (position radius) and r^2 (a reduced momentum-displacement
radius).  At finite even N it is a one-dimensional integral against the
position-basis amplitude D = exp(N ln_d):

    W_N = (N r / 2) (8 pi / r)^{N/2}
          * Integral_0^inf dv  v^{N/2} J_{N/2-1}(N r v) D(u^2, v^2),

which this module evaluates in log-factored form: the smooth envelope
exp(N g(v)), g = (1/2) ln v + ln_d, is scaled by its maximum, while the
Bessel factor (|J| <= 1) stays linear.  At r = 0 the Bessel kernel is
replaced by its exact small-argument limit, where the r-dependence
cancels analytically:

    W_N(r=0) = (4 pi N)^{N/2} / Gamma(N/2) * Integral dv v^{N-1} D.

ln w per dof, (1/N) ln W_N, is computed for each N in the settings list
and extrapolated to N -> infinity (Richardson in 1/N by default).  At
x = 0 the integral is a Weber integral with the exact value
ln w_N = ln w_inf - ln(2)/N, so the extrapolation is exact there; the
closed Gaussian form ln_w_gaussian_exact is exposed as the oracle.

Every quadrature mesh is a pure function of the call inputs (state, grid,
settings), and each grid point's value depends only on that point plus
the shared mesh -- results are bitwise reproducible no matter how a
caller distributes points over workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import densmat as _dm
from . import specfun as _sf
from .errors import NotConverged, QuadratureNonPositive
from .statemap import GaussianMoments, ReducedState

__all__ = [
    "Extrapolation",
    "ProjectionGrid",
    "ProjectionMode",
    "SqueezeParams",
    "WignerGrid",
    "WignerSettings",
    "ln_w",
    "ln_w_at_N",
    "ln_w_gaussian_exact",
    "project_physical",
    "wigner_grid",
]

_GL_ORDER = 16
_ENVELOPE_DROP = 45.0  # e^-45 ~ 3e-20: envelope negligible past the cut


class Extrapolation(Enum):
    LAST_VALUE = "LastValue"
    RICHARDSON_IN_1_OVER_N = "RichardsonIn1OverN"


class ProjectionMode(Enum):
    PARA = "para"
    PERP = "perp"


@dataclass(frozen=True)
class WignerSettings:
    """Quadrature and extrapolation knobs.

    n_list must be ascending even integers (integer Bessel order N/2-1),
    at least three entries.  quad_points / v_max default to automatic
    sizing from the oscillation wavelength and envelope decay.
    """

    n_list: tuple = (4, 8, 12, 16, 20, 24, 28, 32, 36, 40)
    quad_points: int | None = None
    v_max: float | None = None
    extrapolation: Extrapolation = Extrapolation.RICHARDSON_IN_1_OVER_N
    spread_tol: float = 1e-3

    def __post_init__(self):
        ns = tuple(int(N) for N in self.n_list)
        object.__setattr__(self, "n_list", ns)
        if len(ns) < 3:
            raise ValueError("n_list needs at least three entries to extrapolate")
        if any(N < 4 or N % 2 for N in ns):
            raise ValueError(f"all N must be even and >= 4, got {ns}")
        if any(b <= a for a, b in zip(ns, ns[1:])):
            raise ValueError(f"n_list must be strictly ascending, got {ns}")
        if self.quad_points is not None and self.quad_points < _GL_ORDER:
            raise ValueError(f"quad_points must be >= {_GL_ORDER}")
        if self.v_max is not None and not self.v_max > 0:
            raise ValueError("v_max must be positive")
        if not self.spread_tol > 0:
            raise ValueError("spread_tol must be positive")


@dataclass(frozen=True)
class SqueezeParams:
    """Polar parametrization of the Gaussian correlators at fixed n.

    gamma sets the squeezing strength, phi the orientation; gamma = 0 is
    the isotropic thermal point F = K = n + 1/2, R = 0.
    """

    n: float
    gamma: float
    phi: float

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be >= 0")
        if not 0.0 <= self.gamma < 1.0:
            raise ValueError(f"gamma must lie in [0, 1), got {self.gamma}")
        if not 0.0 <= self.phi < 2.0 * math.pi:
            raise ValueError(f"phi must lie in [0, 2*pi), got {self.phi}")

    def moments(self) -> GaussianMoments:
        a_bar = (self.n + 0.5) / math.sqrt(1.0 - self.gamma ** 2)
        return GaussianMoments(F=a_bar * (1.0 + self.gamma * math.cos(self.phi)),
                               K=a_bar * (1.0 - self.gamma * math.cos(self.phi)),
                               R=a_bar * self.gamma * math.sin(self.phi))


@dataclass(frozen=True)
class WignerGrid:
    """Extrapolated ln w over a tensor (u, r) grid, shifted to max = 0."""

    u: np.ndarray
    r: np.ndarray
    ln_w_norm: np.ndarray  # (u.size, r.size)
    spread: np.ndarray     # same shape, extrapolation diagnostic
    ln_w_max: float
    quad_points: int
    v_max: float

    def rows(self):
        for i, ui in enumerate(self.u):
            for k, rk in enumerate(self.r):
                yield (float(ui), float(rk),
                       float(self.ln_w_norm[i, k]), float(self.spread[i, k]))


@dataclass(frozen=True)
class ProjectionGrid:
    """ln w over a physical (phi, pi) grid for one projection mode."""

    phi: np.ndarray
    pi: np.ndarray
    ln_w_norm: np.ndarray  # (phi.size, pi.size)
    spread: np.ndarray
    ln_w_max: float
    mode: ProjectionMode
    quad_points: int
    v_max: float

    def rows(self):
        for i, ph in enumerate(self.phi):
            for k, pk in enumerate(self.pi):
                yield float(ph), float(pk), float(self.ln_w_norm[i, k])


def ln_w_gaussian_exact(state: ReducedState, u_sq, r_sq):
    """Closed-form N -> infinity Wigner exponent of the x = 0 state.

    Follows from the Weber integral; the finite-N value is exactly this
    minus ln(2)/N, which makes it the pipeline oracle at x = 0.
    """
    n, z = state.n, state.z_gauss
    return (math.log(2.0 / (2.0 * n + 1.0))
            - 0.5 * state.kappa * np.asarray(u_sq, dtype=float)
            - np.asarray(r_sq, dtype=float) / (2.0 * z * (2.0 * n + 1.0)))


# ---------------------------------------------------------------------------
# quadrature plumbing


def _auto_v_max(state: ReducedState, u_sq, n_min: int) -> float:
    """Envelope cut: smallest v past the maximum of ln v + ln d where the
    weakest retained exponent N_min*(g - g_max) has dropped below -45."""
    u_sq = np.atleast_1d(np.asarray(u_sq, dtype=float))
    probe_hi = 48.0
    while True:
        v = np.linspace(1e-3, probe_hi, 1025)
        g = np.log(v)[None, :] + _dm.ln_d_many(state, u_sq[:, None],
                                               (v * v)[None, :])
        g_max = g.max(axis=1)
        past_peak = np.arange(v.size)[None, :] > np.argmax(g, axis=1)[:, None]
        dropped = past_peak & (n_min * (g - g_max[:, None]) < -_ENVELOPE_DROP)
        if np.all(dropped.any(axis=1)):
            return float(v[np.argmax(dropped, axis=1)].max())
        probe_hi *= 2.0
        if probe_hi > 1e4:
            raise RuntimeError("envelope failed to decay below the quadrature cut")


def _panel_count(v_max: float, n_max: int, r_max: float,
                 quad_points) -> int:
    if quad_points is not None:
        return max(1, int(round(quad_points / _GL_ORDER)))
    if r_max > 0.0:
        # 16-point panels spanning 2.5 oscillation wavelengths resolve the
        # Bessel factor to ~1e-12; the floor handles the smooth envelope
        panel_w = 2.5 * (2.0 * math.pi / (n_max * r_max))
        return int(min(600, max(24, math.ceil(v_max / panel_w))))
    return 24


def _gl_mesh(v_max: float, n_panels: int):
    x16, w16 = np.polynomial.legendre.leggauss(_GL_ORDER)
    edges = np.linspace(0.0, v_max, n_panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    v = (mid[:, None] + half[:, None] * x16[None, :]).ravel()
    w = (half[:, None] * w16[None, :]).ravel()
    return v, w


def _ln_w_single_point_r0(N: int, g_full_row, weights, v) -> float:
    g_max = float(g_full_row.max())
    integral = float(np.sum((weights / v) * np.exp(N * (g_full_row - g_max))))
    # integrand is positive; only total envelope underflow could zero it
    if integral <= 0.0:
        raise QuadratureNonPositive(f"r = 0 integral vanished at N = {N}")
    return (0.5 * math.log(4.0 * math.pi * N) - math.lgamma(N / 2.0) / N
            + g_max + math.log(integral) / N)


def _assemble_grid_per_n(state, u_sq, r, n_list, v, w):
    """ln w for each N over a tensor grid: (nN, nu, nr)."""
    ln_v = np.log(v)
    lnd = _dm.ln_d_many(state, u_sq[:, None], (v * v)[None, :])  # (nu, nodes)
    g_half = 0.5 * ln_v[None, :] + lnd
    g_full = ln_v[None, :] + lnd
    gmax_h = g_half.max(axis=1)
    gmax_f = g_full.max(axis=1)

    pos = r > 0.0
    r_pos = r[pos]
    out = np.empty((len(n_list), u_sq.size, r.size))
    for i_n, N in enumerate(n_list):
        order = N // 2 - 1
        if r_pos.size:
            envelope = np.exp(N * (g_half - gmax_h[:, None])) * w  # (nu, nodes)
            bes = _sf.bessel_j(order, N * np.outer(r_pos, v))      # (nr+, nodes)
            integral = envelope @ bes.T                            # (nu, nr+)
            if np.any(integral <= 0.0):
                bad = np.argwhere(integral <= 0.0)[0]
                raise QuadratureNonPositive(
                    f"oscillatory quadrature lost positivity at N = {N}, "
                    f"u^2 = {u_sq[bad[0]]:.6g}, r = {r_pos[bad[1]]:.6g}")
            prefac = np.log(N * r_pos / 2.0) / N + 0.5 * np.log(8.0 * math.pi / r_pos)
            out[i_n][:, pos] = (np.log(integral) / N + gmax_h[:, None]
                                + prefac[None, :])
        if np.any(~pos):
            env0 = np.exp(N * (g_full - gmax_f[:, None])) * (w / v)
            integral0 = env0.sum(axis=1)
            if np.any(integral0 <= 0.0):
                raise QuadratureNonPositive(f"r = 0 integral vanished at N = {N}")
            col = (0.5 * math.log(4.0 * math.pi * N) - math.lgamma(N / 2.0) / N
                   + gmax_f + np.log(integral0) / N)
            out[i_n][:, ~pos] = col[:, None]
    return out


def _assemble_rows_per_n(state, u_sq, r_rows, n_list, v, w):
    """Same as above for a per-row r matrix (nu, nr): (nN, nu, nr)."""
    ln_v = np.log(v)
    lnd = _dm.ln_d_many(state, u_sq[:, None], (v * v)[None, :])
    g_half = 0.5 * ln_v[None, :] + lnd
    g_full = ln_v[None, :] + lnd

    out = np.empty((len(n_list), u_sq.size, r_rows.shape[1]))
    for i_u in range(u_sq.size):
        row_r = r_rows[i_u]
        pos = row_r > 0.0
        r_pos = row_r[pos]
        gh = g_half[i_u]
        gf = g_full[i_u]
        gmax_h = float(gh.max())
        for i_n, N in enumerate(n_list):
            order = N // 2 - 1
            if r_pos.size:
                envelope = np.exp(N * (gh - gmax_h)) * w
                bes = _sf.bessel_j(order, N * np.outer(r_pos, v))
                integral = bes @ envelope
                if np.any(integral <= 0.0):
                    bad = int(np.argwhere(integral <= 0.0)[0][0])
                    raise QuadratureNonPositive(
                        f"oscillatory quadrature lost positivity at N = {N}, "
                        f"u^2 = {u_sq[i_u]:.6g}, r = {r_pos[bad]:.6g}")
                out[i_n, i_u, pos] = (np.log(integral) / N + gmax_h
                                      + np.log(N * r_pos / 2.0) / N
                                      + 0.5 * np.log(8.0 * math.pi / r_pos))
            if np.any(~pos):
                out[i_n, i_u, ~pos] = _ln_w_single_point_r0(N, gf, w, v)
    return out


def _richardson_steps(vals, n_list):
    """Three-point Lagrange extrapolants to 1/N = 0, one per tail index."""
    h = 1.0 / np.asarray(n_list, dtype=float)
    steps = []
    for k in range(2, len(n_list)):
        h0, h1, h2 = h[k - 2], h[k - 1], h[k]
        c0 = h1 * h2 / ((h0 - h1) * (h0 - h2))
        c1 = h0 * h2 / ((h1 - h0) * (h1 - h2))
        c2 = h0 * h1 / ((h2 - h0) * (h2 - h1))
        steps.append(c0 * vals[k - 2] + c1 * vals[k - 1] + c2 * vals[k])
    return np.stack(steps)


def _extrapolate(vals, n_list, scheme: Extrapolation):
    """(value, spread) along axis 0; spread = |last - secondlast| of the
    scheme's own sequence."""
    if scheme is Extrapolation.LAST_VALUE:
        return vals[-1], np.abs(vals[-1] - vals[-2])
    steps = _richardson_steps(vals, n_list)
    if steps.shape[0] >= 2:
        return steps[-1], np.abs(steps[-1] - steps[-2])
    return steps[-1], np.abs(steps[-1] - vals[-1])


def _prepare(state, u_sq, r_max, settings):
    v_max = settings.v_max if settings.v_max is not None else \
        _auto_v_max(state, u_sq, settings.n_list[0])
    n_panels = _panel_count(v_max, settings.n_list[-1], r_max,
                            settings.quad_points)
    v, w = _gl_mesh(v_max, n_panels)
    return v, w, v_max, n_panels * _GL_ORDER


# ---------------------------------------------------------------------------
# public surface


def ln_w_at_N(state: ReducedState, u_sq: float, r_sq: float, N: int,
              settings: WignerSettings | None = None) -> float:
    """Per-dof log Wigner value at one finite even N (no extrapolation)."""
    settings = settings or WignerSettings()
    N = int(N)
    if N < 4 or N % 2:
        raise ValueError(f"N must be even and >= 4, got {N}")
    if u_sq < 0 or r_sq < 0:
        raise ValueError("u_sq and r_sq must be >= 0")
    u_arr = np.array([u_sq], dtype=float)
    r_arr = np.array([math.sqrt(r_sq)], dtype=float)
    v, w, _, _ = _prepare(state, u_arr, float(r_arr[0]), settings)
    out = _assemble_grid_per_n(state, u_arr, r_arr, (N,), v, w)
    return float(out[0, 0, 0])


def ln_w(state: ReducedState, u_sq: float, r_sq: float,
         settings: WignerSettings | None = None):
    """Extrapolated per-dof log Wigner value -> (value, spread).

    Raises NotConverged when the scheme's last step exceeds spread_tol.
    """
    settings = settings or WignerSettings()
    if u_sq < 0 or r_sq < 0:
        raise ValueError("u_sq and r_sq must be >= 0")
    u_arr = np.array([u_sq], dtype=float)
    r_arr = np.array([math.sqrt(r_sq)], dtype=float)
    v, w, _, _ = _prepare(state, u_arr, float(r_arr[0]), settings)
    per_n = _assemble_grid_per_n(state, u_arr, r_arr, settings.n_list, v, w)
    value, spread = _extrapolate(per_n, settings.n_list, settings.extrapolation)
    value, spread = float(value[0, 0]), float(spread[0, 0])
    if spread > settings.spread_tol:
        raise NotConverged(
            f"ln w spread {spread:.3e} above tolerance {settings.spread_tol:.3e} "
            f"at u^2 = {u_sq:.6g}, r^2 = {r_sq:.6g}",
            value=value, spread=spread)
    return value, spread


def wigner_grid(state: ReducedState, u, r,
                settings: WignerSettings | None = None) -> WignerGrid:
    """Extrapolated ln w over the tensor grid u x r, normalized to max = 0.

    Convergence is reported per point in .spread rather than raised, so a
    caller can flag partial results; QuadratureNonPositive still raises.
    """
    settings = settings or WignerSettings()
    u = np.asarray(u, dtype=float)
    r = np.asarray(r, dtype=float)
    if u.ndim != 1 or r.ndim != 1:
        raise ValueError("u and r must be one-dimensional")
    if np.any(u < 0) or np.any(r < 0):
        raise ValueError("grid values must be >= 0")
    u_sq = u * u
    r_max = float(r.max()) if r.size else 0.0
    v, w, v_max, n_quad = _prepare(state, u_sq, r_max, settings)
    per_n = _assemble_grid_per_n(state, u_sq, r, settings.n_list, v, w)
    value, spread = _extrapolate(per_n, settings.n_list, settings.extrapolation)
    top = float(value.max())
    return WignerGrid(u=u, r=r, ln_w_norm=value - top, spread=spread,
                      ln_w_max=top, quad_points=n_quad, v_max=v_max)


def project_physical(sq: SqueezeParams, x: float, mode: ProjectionMode,
                     phi, pi, settings: WignerSettings | None = None
                     ) -> ProjectionGrid:
    """ln w on a physical (phi, pi) grid (per-sqrt(N)-scaled coordinates).

    The map into the reduced (u, r) plane uses A = kappa*F and the actual
    correlator slope rho = R/F:

        u^2        = phi^2 / A
        r^2 (para) = 4 A (pi - rho phi)^2      -- collinear O(N) vectors
        r^2 (perp) = 4 A (pi^2 + rho^2 phi^2)  -- orthogonal O(N) vectors

    At x = 0 this reproduces the exact Gaussian Wigner function of the
    correlators (F, K, R), tilt included.
    """
    settings = settings or WignerSettings()
    phi = np.asarray(phi, dtype=float)
    pi_arr = np.asarray(pi, dtype=float)
    if phi.ndim != 1 or pi_arr.ndim != 1:
        raise ValueError("phi and pi must be one-dimensional")
    m = sq.moments()
    state = ReducedState.from_nx(sq.n, x)
    big_a = state.kappa * m.F
    rho = m.R / m.F
    u_sq = phi * phi / big_a
    if mode is ProjectionMode.PARA:
        diff = pi_arr[None, :] - rho * phi[:, None]
        r_sq = 4.0 * big_a * diff * diff
    elif mode is ProjectionMode.PERP:
        r_sq = 4.0 * big_a * (pi_arr[None, :] ** 2
                              + (rho * phi[:, None]) ** 2)
    else:
        raise ValueError(f"unknown projection mode {mode!r}")
    r_rows = np.sqrt(r_sq)
    r_max = float(r_rows.max()) if r_rows.size else 0.0
    v, w, v_max, n_quad = _prepare(state, u_sq, r_max, settings)
    per_n = _assemble_rows_per_n(state, u_sq, r_rows, settings.n_list, v, w)
    value, spread = _extrapolate(per_n, settings.n_list, settings.extrapolation)
    top = float(value.max())
    return ProjectionGrid(phi=phi, pi=pi_arr, ln_w_norm=value - top,
                          spread=spread, ln_w_max=top, mode=mode,
                          quad_points=n_quad, v_max=v_max)
