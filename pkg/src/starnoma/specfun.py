"""Special-function kernel used by every analytical expression.

Everything here is pure floating-point math with no state: modified Bessel
functions I_n / K_n, the generalized Marcum Q-function, the (regularized)
lower incomplete gamma function, the half-order Laguerre polynomial that
carries the Rician moment identities, and the Gauss hypergeometric series.

Scalar entry points are the public contract; ``*_vec`` helpers operate on
NumPy arrays and exist because the outage/rate formulas evaluate the same
function over full quadrature grids.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import digamma as _digamma

from .errors import NonConvergenceError, SeriesDivergenceError

_EPS = 2.220446049250313e-16
# exp() overflows just above this; used to signal unrepresentable growth.
_MAX_EXP_ARG = 709.78


@dataclass(frozen=True)
class EvalOptions:
    """Truncation control for the series evaluations."""

    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_terms: int = 500

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")


_DEFAULT_OPTS = EvalOptions()


# ---------------------------------------------------------------------------
# Modified Bessel functions of the first kind (exponentially scaled inside)
# ---------------------------------------------------------------------------

_SERIES_CUTOFF = 20.0  # power series below, asymptotic expansion above


def _ive_series(order, x):
    """e^-x * I_order(x) by the ascending power series, x <= ~20."""
    x = np.asarray(x, dtype=float)
    half = x / 2.0
    term = half**order / math.gamma(order + 1)
    total = term.copy()
    quarter_sq = half * half
    for k in range(1, 400):
        term = term * quarter_sq / (k * (k + order))
        total += term
        if np.all(term <= 1e-18 * total):
            break
    else:
        raise NonConvergenceError("I_n power series did not converge")
    return np.exp(-x) * total


def _ive_asymptotic(order, x):
    """e^-x * I_order(x) by the large-argument expansion, x >= ~20."""
    x = np.asarray(x, dtype=float)
    four_nu_sq = 4.0 * order * order
    term = np.ones_like(x)
    total = term.copy()
    prev = np.full_like(x, np.inf)
    for k in range(1, 60):
        factor = ((2 * k - 1) ** 2 - four_nu_sq) / (8.0 * k)
        term = term * factor / x
        if np.all(np.abs(term) >= prev):
            break  # divergent tail reached; stop at the smallest term
        total += term
        prev = np.abs(term)
        if np.all(np.abs(term) <= 1e-18 * np.abs(total)):
            break
    return total / np.sqrt(2.0 * math.pi * x)


def _ive_vec(order, x):
    """Exponentially scaled I_order over an array of x >= 0."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    small = x <= _SERIES_CUTOFF
    if np.any(small):
        out[small] = _ive_series(order, x[small])
    if np.any(~small):
        out[~small] = _ive_asymptotic(order, x[~small])
    return out


def bessel_i(order: int, x: float) -> float:
    """Modified Bessel function of the first kind, I_order(x), x >= 0.

    Raises OverflowError once e^x * (scaled value) exceeds double range;
    the scaled form is what the outage formulas consume internally.
    """
    if not isinstance(order, (int, np.integer)) or order < 0:
        raise ValueError("order must be a non-negative integer")
    if not math.isfinite(x) or x < 0:
        raise ValueError("x must be finite and >= 0")
    scaled = float(_ive_vec(order, np.array([x]))[0])
    if scaled == 0.0:
        return 0.0
    log_val = x + math.log(scaled)
    if log_val > _MAX_EXP_ARG:
        raise OverflowError(f"I_{order}({x}) exceeds double-precision range")
    return math.exp(log_val)


# ---------------------------------------------------------------------------
# Modified Bessel functions of the second kind
# ---------------------------------------------------------------------------

_EULER_GAMMA = 0.5772156649015328606


def _k0_k1_series(x):
    """K_0 and K_1 from the ascending series, reliable for x < 2."""
    half = x / 2.0
    log_half = math.log(half)
    q = half * half

    # K_0 = -(log(x/2) + gamma) I_0 + sum H_k q^k / (k!)^2
    c = 1.0       # q^k / (k!)^2
    i0 = 1.0
    s0 = 0.0
    h = 0.0
    # K_1 via DLMF 10.31.2 with n = 1
    d = half      # (x/2)^(2k+1) / (k! (k+1)!)
    i1 = half
    s1 = d * (1.0 - 2.0 * _EULER_GAMMA)  # psi(1) + psi(2) at k=0
    for k in range(1, 200):
        c = c * q / (k * k)
        h += 1.0 / k
        i0 += c
        s0 += c * h
        d = d * q / (k * (k + 1))
        i1 += d
        psi_sum = (h - _EULER_GAMMA) + (h + 1.0 / (k + 1) - _EULER_GAMMA)
        s1 += d * psi_sum
        if c <= 1e-18 * i0 and d <= 1e-18 * i1:
            break
    else:
        raise NonConvergenceError("K_n series did not converge")
    k0 = -(log_half + _EULER_GAMMA) * i0 + s0
    k1 = 1.0 / x + log_half * i1 - 0.5 * s1
    return k0, k1


def _k0_k1_cf2(x):
    """K_0 and K_1 by Temme's continued fraction (CF2), for x >= 2."""
    max_iter = 400
    mu2 = 0.0  # order 0
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = delh = d
    q1 = 0.0
    q2 = 1.0
    a1 = 0.25 - mu2
    q = c = a1
    a = -a1
    s = 1.0 + q * delh
    for i in range(2, max_iter):
        a -= 2.0 * (i - 1)
        c = -a * c / i
        qnew = (q1 - b * q2) / a
        q1, q2 = q2, qnew
        q += c * qnew
        b += 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h += delh
        dels = q * delh
        s += dels
        if abs(dels / s) < _EPS:
            break
    else:
        raise NonConvergenceError("K_n continued fraction did not converge")
    h = a1 * h
    k0 = math.sqrt(math.pi / (2.0 * x)) * math.exp(-x) / s
    k1 = k0 * (0.5 + x - h) / x
    return k0, k1


def bessel_k(order: int, x: float) -> float:
    """Modified Bessel function of the second kind, K_order(x), x > 0.

    K_{-n}(x) = K_n(x); higher orders follow the stable upward recurrence
    K_{n+1} = K_{n-1} + (2n/x) K_n.
    """
    if not isinstance(order, (int, np.integer)):
        raise ValueError("order must be an integer")
    if not (math.isfinite(x) and x > 0):
        raise ValueError("x must be finite and > 0")
    n = abs(int(order))
    k0, k1 = _k0_k1_series(x) if x < 2.0 else _k0_k1_cf2(x)
    if n == 0:
        return k0
    if n == 1:
        return k1
    prev, cur = k0, k1
    for m in range(1, n):
        prev, cur = cur, prev + (2.0 * m / x) * cur
        if math.isinf(cur):
            break
    return cur


def log_bessel_k(order: int, x: float) -> float:
    """log K_order(x); falls back to the small-argument leading term when
    the recurrence overflows (order >= 2, x -> 0)."""
    n = abs(int(order))
    val = bessel_k(n, x)
    if math.isfinite(val) and val > 0.0:
        return math.log(val)
    # K_n(x) ~ (1/2) Gamma(n) (2/x)^n for x -> 0
    return math.log(0.5) + math.lgamma(n) + n * (math.log(2.0) - math.log(x))


# ---------------------------------------------------------------------------
# Regularized incomplete gamma pair
# ---------------------------------------------------------------------------


def _gamma_p_series_vec(a, x, opts):
    """Lower regularized P(a, x) by the ascending series, for x < a + 1."""
    x = np.asarray(x, dtype=float)
    v = np.full_like(x, 1.0 / a)
    s = v.copy()
    for k in range(1, opts.max_terms * 4):
        v = v * x / (a + k)
        s += v
        if np.all(v <= _EPS * s):
            break
    else:
        raise NonConvergenceError("incomplete gamma series did not converge")
    with np.errstate(divide="ignore", invalid="ignore"):
        log_pref = a * np.log(x) - x - math.lgamma(a)
    out = s * np.exp(log_pref)
    return np.where(x == 0.0, 0.0, out)


def _gamma_q_cf_vec(a, x, opts):
    """Upper regularized Q(a, x) by the Lentz continued fraction, x >= a + 1."""
    x = np.asarray(x, dtype=float)
    fpmin = 1e-300
    b = x + 1.0 - a
    c = np.full_like(x, 1.0 / fpmin)
    d = 1.0 / b
    h = d.copy()
    for i in range(1, opts.max_terms * 4):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        np.copyto(d, fpmin, where=np.abs(d) < fpmin)
        c = b + an / c
        np.copyto(c, fpmin, where=np.abs(c) < fpmin)
        d = 1.0 / d
        delta = d * c
        h *= delta
        if np.all(np.abs(delta - 1.0) < 4.0 * _EPS):
            break
    else:
        raise NonConvergenceError(
            "incomplete gamma continued fraction did not converge")
    return h * np.exp(a * np.log(x) - x - math.lgamma(a))


def _gamma_p_vec(a, x, opts=_DEFAULT_OPTS):
    """Lower regularized incomplete gamma P(a, x) over an array of x >= 0."""
    if not (a > 0):
        raise ValueError("a must be > 0")
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    lo = x < a + 1.0
    if np.any(lo):
        out[lo] = _gamma_p_series_vec(a, x[lo], opts)
    if np.any(~lo):
        out[~lo] = 1.0 - _gamma_q_cf_vec(a, x[~lo], opts)
    return np.clip(out, 0.0, 1.0)


def reg_lower_gamma(a: float, x: float, opts: EvalOptions = _DEFAULT_OPTS) -> float:
    """Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a)."""
    if not (math.isfinite(x) and x >= 0):
        raise ValueError("x must be finite and >= 0")
    return float(_gamma_p_vec(a, np.array([x]), opts)[0])


def reg_upper_gamma(a: float, x: float, opts: EvalOptions = _DEFAULT_OPTS) -> float:
    """Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x)."""
    if not (math.isfinite(x) and x >= 0):
        raise ValueError("x must be finite and >= 0")
    if not (a > 0):
        raise ValueError("a must be > 0")
    if x < a + 1.0:
        return 1.0 - float(_gamma_p_series_vec(a, np.array([x]), opts)[0])
    return float(_gamma_q_cf_vec(a, np.array([x]), opts)[0])


def lower_inc_gamma(a: float, x: float, opts: EvalOptions = _DEFAULT_OPTS) -> float:
    """Unregularized lower incomplete gamma, gamma(a, x)."""
    return reg_lower_gamma(a, x, opts) * math.gamma(a)


# ---------------------------------------------------------------------------
# Generalized Marcum Q-function (first order)
# ---------------------------------------------------------------------------


def _marcum_q_vec(a, b, opts=_DEFAULT_OPTS):
    """Q(a, b) over an array of b, fixed a.

    Canonical series over the Poisson(a^2/2) weights; the k-th factor is a
    Poisson(b^2/2) tail.  For b < a the complement is accumulated instead so
    every branch sums positive terms only.
    """
    if not (math.isfinite(a) and a >= 0):
        raise ValueError("a must be finite and >= 0")
    b = np.asarray(b, dtype=float)
    if np.any(~np.isfinite(b)) or np.any(b < 0):
        raise ValueError("b must be finite and >= 0")

    x = 0.5 * a * a
    y = 0.5 * b * b
    if x == 0.0:
        return np.exp(-y)
    if x > 600.0:
        raise NonConvergenceError("marcum_q: a out of supported range")

    k_end = int(math.ceil(x + 12.0 * math.sqrt(x) + 25.0))
    p = math.exp(-x)          # Poisson(x) pmf at k
    p_cum = p
    t = np.exp(-y)            # Poisson(y) pmf at k
    cdf_y = t.copy()          # Poisson(y) cdf at k
    s_direct = p * cdf_y
    s_complement = p * (1.0 - cdf_y)
    for k in range(1, k_end + 1):
        p = p * x / k
        p_cum += p
        t = t * y / k
        cdf_y = cdf_y + t
        s_direct += p * cdf_y
        s_complement += p * (1.0 - cdf_y)
    if 1.0 - p_cum > opts.abs_tol:
        raise NonConvergenceError("marcum_q series truncated too early")
    out = np.where(y >= x, s_direct, 1.0 - s_complement)
    return np.clip(out, 0.0, 1.0)


def marcum_q(a: float, b: float, opts: EvalOptions = _DEFAULT_OPTS) -> float:
    """Generalized Marcum Q-function of first order,
    Q(a, b) = int_b^inf x exp(-(x^2 + a^2)/2) I_0(a x) dx."""
    if not (math.isfinite(b) and b >= 0):
        raise ValueError("b must be finite and >= 0")
    if b == 0.0:
        return 1.0
    return float(_marcum_q_vec(a, np.array([b]), opts)[0])


# ---------------------------------------------------------------------------
# Half-order Laguerre polynomial
# ---------------------------------------------------------------------------


def laguerre_half(x: float) -> float:
    """L_{1/2}(x) = e^{x/2} [(1 - x) I_0(-x/2) - x I_1(-x/2)].

    Evaluated through the exponentially scaled Bessel functions so the
    Rician-factor sweep (x = -kappa, kappa up to ~1e8) never overflows.
    """
    if not math.isfinite(x):
        raise ValueError("x must be finite")
    t = abs(x) / 2.0
    i0e = float(_ive_vec(0, np.array([t]))[0])
    i1e = float(_ive_vec(1, np.array([t]))[0])
    if x <= 0.0:
        # e^{x/2} I_nu(t) = i_nu_e(t) exactly, since t = -x/2
        return (1.0 - x) * i0e + (-x) * i1e
    if x > _MAX_EXP_ARG:
        raise OverflowError("laguerre_half overflows for large positive x")
    return math.exp(x) * ((1.0 - x) * i0e + x * i1e)


# ---------------------------------------------------------------------------
# Gauss hypergeometric function 2F1
# ---------------------------------------------------------------------------


def _is_nonpositive_int(v, tol=1e-12):
    return v <= tol and abs(v - round(v)) < tol


def _hyp2f1_series(a, b, c, z, opts):
    term = 1.0
    total = 1.0
    # remaining tail is ~ geometric with ratio |z| once k is large
    tail_factor = 1.0 - abs(z) if abs(z) < 1.0 else 1.0
    for k in range(opts.max_terms):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z
        total += term
        if abs(term) <= (opts.abs_tol + opts.rel_tol * abs(total)) * tail_factor:
            return total
    raise NonConvergenceError("2F1 series did not converge")


def _hyp2f1_polynomial(a, b, c, z):
    # a or b is a non-positive integer: the series terminates exactly.
    n = int(round(-a if _is_nonpositive_int(a) else -b))
    term = 1.0
    total = 1.0
    for k in range(n):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z
        total += term
    return total


def _hyp2f1_near_one(a, b, c, z, opts):
    """Connection formulas in powers of 1 - z, for z close to 1."""
    s = c - a - b
    w = 1.0 - z
    if abs(s - round(s)) < 1e-12 and round(s) == 0:
        # c = a + b: logarithmic case (A&S 15.3.10)
        log_w = math.log(w)
        pref = math.gamma(c) / (math.gamma(a) * math.gamma(b))
        coef = 1.0
        total = 0.0
        for k in range(opts.max_terms * 40):
            bracket = (2.0 * _digamma(k + 1.0) - _digamma(a + k)
                       - _digamma(b + k) - log_w)
            term = coef * bracket
            total += term
            if abs(term) <= (opts.abs_tol + opts.rel_tol * abs(total)):
                return pref * total
            coef *= (a + k) * (b + k) / ((k + 1.0) ** 2) * w
        raise NonConvergenceError("2F1 logarithmic expansion did not converge")
    if abs(s - round(s)) < 1e-12:
        # integer s != 0: fall back on the plain series
        return _hyp2f1_series(a, b, c, z, opts)
    g = math.gamma
    term1 = (g(c) * g(s) / (g(c - a) * g(c - b))
             * _hyp2f1_series(a, b, 1.0 - s, w, opts))
    term2 = (w**s * g(c) * g(-s) / (g(a) * g(b))
             * _hyp2f1_series(c - a, c - b, 1.0 + s, w, opts))
    return term1 + term2


def gauss_2f1(a: float, b: float, c: float, z: float,
              opts: EvalOptions = _DEFAULT_OPTS) -> float:
    """Gauss hypergeometric function 2F1(a, b; c; z) for real arguments,
    |z| < 1 (or z = 1 when c - a - b > 0)."""
    for v in (a, b, c, z):
        if not math.isfinite(v):
            raise ValueError("arguments must be finite")
    if _is_nonpositive_int(c) and not (
            _is_nonpositive_int(a) and -a < -c) and not (
            _is_nonpositive_int(b) and -b < -c):
        raise ValueError("c must not be a non-positive integer")
    if _is_nonpositive_int(a) or _is_nonpositive_int(b):
        return _hyp2f1_polynomial(a, b, c, z)
    if z == 1.0:
        if c - a - b <= 0:
            raise SeriesDivergenceError(
                "2F1 diverges at z = 1 when c - a - b <= 0")
        g = math.gamma
        return g(c) * g(c - a - b) / (g(c - a) * g(c - b))
    if abs(z) >= 1.0:
        raise ValueError("require |z| < 1 (or z = 1 with c - a - b > 0)")
    if z < -0.5:
        # Pfaff transformation moves the argument into (0, 1)
        return (1.0 - z) ** (-a) * gauss_2f1(a, c - b, c, z / (z - 1.0), opts)
    if z > 0.9:
        return _hyp2f1_near_one(a, b, c, z, opts)
    return _hyp2f1_series(a, b, c, z, opts)
