"""Special-function kernels on the squared-frequency axis s = z**2.

Every transcendental kernel used by the solvers is an analytic function of
the *squared* frequency s.  Working in s instead of z means the continuation
to imaginary frequency (z = i*y, i.e. -pi**2 < s < 0) is plain real
arithmetic: hyperbolic functions of z turn into trigonometric functions of
y = sqrt(-s) and nothing in the call chain ever touches a complex number.

The kernels, with their two closed-form branches::

                       s > 0  (z = sqrt(s))        s < 0  (y = sqrt(-s))
    h_trace(s)         z tanh(z/2)                 -y tan(y/2)
    h2(s)              z tanh(z)                   -y tan(y)
    F0(s)              -ln sqrt(z/(4 pi sinh z))   -ln sqrt(y/(4 pi sin y))
    Fu(s)              (z/2) tanh(z/2)             -(y/2) tan(y/2)
    Fv(s)              (z/2) coth(z/2)             (y/2) cot(y/2)
    f0(s)              (z coth z - 1)/z**2         (1 - y cot y)/y**2
    fu(s)              (sinh z/z + 1)/(2cosh^2(z/2))   (sin y/y + 1)/(1+cos y)
    fv(s)              (sinh z/z - 1)/(2sinh^2(z/2))   (1 - sin y/y)/(1-cos y)

All eight are smooth through s = 0; the apparent 0/0 at the branch point is
removed by switching to Taylor polynomials for |s| < SERIES_CUT.  The
coefficients below are exact rationals (generated once with a computer
algebra system and frozen); with seven terms the truncation error at the
cut is far below double precision.

The small-f kernels are 4 d/ds of the corresponding big-F kernels; the
solvers rely on that pairing (stationarity of the saddle exponent), and a
unit test pins it down by finite differences.

Domain limits: h2 hits its first pole at s = -pi**2/4, everything else at
s = -pi**2.  Callers get a ValueError at or beyond the pole rather than a
garbage value from the wrong trigonometric sheet.
"""

import math

import numpy as np
from scipy import special as _sp

__all__ = [
    "POLE_MAIN",
    "POLE_HALF",
    "SERIES_CUT",
    "h_trace",
    "h2",
    "big_f",
    "small_f",
    "bessel_j",
]

POLE_MAIN = -math.pi ** 2  # h_trace, big_f, small_f diverge here
POLE_HALF = -math.pi ** 2 / 4  # first pole of tan(y) hit by h2

# Width of the Taylor window around s = 0.  The closed forms for fu/fv
# cancel like s/6 near the origin, so the window must be wide enough that
# the surviving closed-form cancellation (~1e-16/s) stays below 1e-13;
# with seven exact series terms the polynomial side is good to ~1e-19
# here, so 1e-2 leaves both sides comfortably at double precision.
SERIES_CUT = 1e-2

_LN2 = math.log(2.0)
_LN4PI = math.log(4.0 * math.pi)

# --- Taylor coefficients about s = 0 (exact rationals, ascending powers) ---

_H_TRACE = (0.0, 1 / 2, -1 / 24, 1 / 240, -17 / 40320, 31 / 725760,
            -691 / 159667200)
_H2 = (0.0, 1.0, -1 / 3, 2 / 15, -17 / 315, 62 / 2835, -1382 / 155925)
_F0 = (0.5 * _LN4PI, 1 / 12, -1 / 360, 1 / 5670, -1 / 75600, 1 / 935550,
       -691 / 7662154500)
_FU = (0.0, 1 / 4, -1 / 48, 1 / 480, -17 / 80640, 31 / 1451520,
       -691 / 319334400)
_FV = (1.0, 1 / 12, -1 / 720, 1 / 30240, -1 / 1209600, 1 / 47900160,
       -691 / 1307674368000)
_SF0 = (1 / 3, -1 / 45, 2 / 945, -1 / 4725, 2 / 93555, -1382 / 638512875,
        4 / 18243225)
_SFU = (1.0, -1 / 6, 1 / 40, -17 / 5040, 31 / 72576, -691 / 13305600,
        5461 / 889574400)
_SFV = (1 / 3, -1 / 90, 1 / 2520, -1 / 75600, 1 / 2395008,
        -691 / 54486432000, 1 / 2668723200)


def _horner(s, coeffs):
    acc = np.zeros_like(s) + coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * s + c
    return acc


def _lnsinh(z):
    # log(sinh z) without overflow for large z
    return z - _LN2 + np.log1p(-np.exp(-2.0 * z))


# Closed-form branches.  The positive-branch fu/fv are written in terms of
# t = exp(-z) so they stay finite for arbitrarily large z (sinh/cosh would
# overflow past z ~ 710).

def _h_trace_pos(z):
    return z * np.tanh(0.5 * z)


def _h_trace_neg(y):
    return -y * np.tan(0.5 * y)


def _h2_pos(z):
    return z * np.tanh(z)


def _h2_neg(y):
    return -y * np.tan(y)


def _f0_big_pos(z):
    return 0.5 * (_LN4PI + _lnsinh(z) - np.log(z))


def _f0_big_neg(y):
    return 0.5 * (_LN4PI + np.log(np.sin(y)) - np.log(y))


def _fu_big_pos(z):
    return 0.5 * z * np.tanh(0.5 * z)


def _fu_big_neg(y):
    return -0.5 * y * np.tan(0.5 * y)


def _fv_big_pos(z):
    return 0.5 * z / np.tanh(0.5 * z)


def _fv_big_neg(y):
    return 0.5 * y / np.tan(0.5 * y)


def _f0_small_pos(z):
    return (z / np.tanh(z) - 1.0) / (z * z)


def _f0_small_neg(y):
    return (1.0 - y / np.tan(y)) / (y * y)


def _fu_small_pos(z):
    t = np.exp(-z)
    return ((1.0 - t * t) / (2.0 * z) + t) / (t + 0.5 * (1.0 + t * t))


def _fu_small_neg(y):
    # 1 + cos y written as 2 cos^2(y/2): the naive form rounds to exactly
    # zero a hair away from y = pi and the inf poisons grid bracketing.
    c = np.cos(0.5 * y)
    return (np.sin(y) / y + 1.0) / (2.0 * c * c)


def _fv_small_pos(z):
    t = np.exp(-z)
    return ((1.0 - t * t) / (2.0 * z) - t) / (0.5 * (1.0 + t * t) - t)


def _fv_small_neg(y):
    s2 = np.sin(0.5 * y)
    return (1.0 - np.sin(y) / y) / (2.0 * s2 * s2)


def _eval(s, coeffs, pos_fn, neg_fn, pole, name):
    arr = np.asarray(s, dtype=float)
    if not np.all(arr > pole):
        raise ValueError(
            f"{name}: argument must satisfy s > {pole:.6f} (pole), "
            f"got min {np.min(arr) if arr.size else 'empty'}"
        )
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    out = np.empty_like(arr)
    small = np.abs(arr) < SERIES_CUT
    pos = arr >= SERIES_CUT
    neg = arr <= -SERIES_CUT
    if small.any():
        out[small] = _horner(arr[small], coeffs)
    if pos.any():
        out[pos] = pos_fn(np.sqrt(arr[pos]))
    if neg.any():
        out[neg] = neg_fn(np.sqrt(-arr[neg]))
    return float(out[0]) if scalar else out


def h_trace(s):
    """Gap kernel z*tanh(z/2) as a function of s = z**2.

    Continues to -y*tan(y/2) for s < 0 and to a Taylor polynomial near
    s = 0.  Defined on s > -pi**2.  Also satisfies
    h_trace(ln(1+1/n)**2) = ln(1+1/n)/(2n+1), the occupation identity
    used throughout the state map.
    """
    return _eval(s, _H_TRACE, _h_trace_pos, _h_trace_neg, POLE_MAIN,
                 "h_trace")


def h2(s):
    """Doubled-parameter gap kernel z*tanh(z) of s = z**2 (s > -pi**2/4)."""
    return _eval(s, _H2, _h2_pos, _h2_neg, POLE_HALF, "h2")


def big_f(s):
    """Exponent kernels (F0, Fu, Fv) of s = z**2 on s > -pi**2.

    F0(s) = -ln sqrt(z/(4 pi sinh z)),  Fu(s) = (z/2) tanh(z/2),
    Fv(s) = (z/2) coth(z/2), each continued through s <= 0 as in the
    module table.  Fv > 0 on the whole domain and sign(Fu) = sign(s).

    Returns a tuple of three floats (or arrays, matching the input shape).
    """
    return (
        _eval(s, _F0, _f0_big_pos, _f0_big_neg, POLE_MAIN, "big_f"),
        _eval(s, _FU, _fu_big_pos, _fu_big_neg, POLE_MAIN, "big_f"),
        _eval(s, _FV, _fv_big_pos, _fv_big_neg, POLE_MAIN, "big_f"),
    )


def small_f(s):
    """Saddle right-hand-side kernels (f0, fu, fv) of s = z**2.

    f0(s) = (z coth z - 1)/z**2, fu(s) = (sinh z/z + 1)/(2 cosh^2(z/2)),
    fv(s) = (sinh z/z - 1)/(2 sinh^2(z/2)), on s > -pi**2; all three are
    positive there and f0 diverges at the pole, which is what guarantees
    the saddle equation always brackets a root.  Identity: each small-f
    kernel is 4 d/ds of its big-F partner.

    Returns (f0, fu, fv) matching the input shape.
    """
    return (
        _eval(s, _SF0, _f0_small_pos, _f0_small_neg, POLE_MAIN, "small_f"),
        _eval(s, _SFU, _fu_small_pos, _fu_small_neg, POLE_MAIN, "small_f"),
        _eval(s, _SFV, _fv_small_pos, _fv_small_neg, POLE_MAIN, "small_f"),
    )


def bessel_j(order, argument):
    """Bessel J of non-negative integer order at non-negative argument."""
    if int(order) != order or order < 0:
        raise ValueError(f"bessel_j: order must be a non-negative integer, got {order}")
    arg = np.asarray(argument, dtype=float)
    if not np.all(arg >= 0):
        raise ValueError("bessel_j: argument must be >= 0")
    out = _sp.jv(int(order), arg)
    return float(out) if arg.ndim == 0 else out
