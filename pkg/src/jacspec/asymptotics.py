"""Large-index eigenvalue asymptotics: formulas, residuals, decay fits.

The first-order asymptote is n - g^2 + (c1 + c2)/2; the next correction
is the diagonal of the conjugated parity matrix scaled by (c1 - c2)/2.
The error term is controlled by the remainder column norm s_n, computed
here with a certified tail bound.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import specfun
from .eigensolve import SpectralRequest, converged_spectrum

__all__ = [
    "AsymptoticRow",
    "DecayFit",
    "diagonal_correction",
    "dyadic_block_maxima",
    "first_order",
    "fit_decay",
    "remainder_s",
    "remainder_s_sweep",
    "residual_table",
]


@dataclass(frozen=True)
class AsymptoticRow:
    """Computed eigenvalue against its asymptote at one index."""

    n: int
    lam: float
    first_order: float
    diag_corr: float
    r1: float
    r2: float
    s_n: float
    s_n_tail_bound: float
    converged: bool


@dataclass(frozen=True)
class DecayFit:
    """Power-law model value ~ C * n^(-alpha) from a log-log fit."""

    C: float
    alpha: float
    residual_rms: float
    n_range: tuple
    dropped: int


def first_order(n, p):
    """Leading asymptote n - g^2 + (c1 + c2)/2."""
    return n - p.g * p.g + 0.5 * (p.c1 + p.c2)


def diagonal_correction(n, p):
    """Second term: (c1 - c2)/2 times the conjugated-parity diagonal."""
    sign = -1.0 if n % 2 else 1.0
    if p.g == 0.0:
        return 0.5 * (p.c1 - p.c2) * sign
    return 0.5 * (p.c1 - p.c2) * sign * specfun.laguerre_function(n, 0, 4.0 * p.g * p.g)


def _order_cap(x, hard_cap):
    # first order whose recurrence seed underflows double precision;
    # columns past it are identically zero in float64
    p = np.arange(1, hard_cap + 2, dtype=float)
    seed_log = -0.5 * x + 0.5 * p * np.log(x) - 0.5 * specfun._log_gamma_arr(p + 1.0)
    dead = np.nonzero(seed_log < math.log(5e-324))[0]
    return int(p[dead[0]]) if dead.size else hard_cap


def _sum_window(n, w, K):
    # sum over 0 <= k <= n + K, k != n of w(k, n-k)^2 / (n-k)^2, where
    # w is the function table at the relevant x; orders beyond the
    # table contribute exact zeros
    p_cap = w.shape[1] - 1
    total = 0.0
    lo = np.arange(1, min(n, K) + 1)          # offsets below the diagonal
    usable = lo[lo <= p_cap]
    if usable.size:
        vals = w[n - usable, usable]
        total += float(np.sum((vals / usable) ** 2))
    hi = np.arange(1, min(K, p_cap) + 1)      # offsets above the diagonal
    if hi.size:
        vals = w[n, hi]
        total += float(np.sum((vals / hi) ** 2))
    return total


def remainder_s(n, g, eps_tail=1e-8):
    """Remainder column norm s_n with a certified tail bound.

    Sums the squared conjugated-parity entries over the window
    |k - n| <= K weighted by 1/(n-k)^2, where K grows until the crude
    orthonormality tail bound 1/K^2 drops below eps_tail^2.  Window
    terms whose Laguerre seed underflows double precision are exact
    zeros and are skipped rather than evaluated.  Returns
    (sqrt(partial sum), 1/K^2).
    """
    if n < 0:
        raise ValueError("index must be nonnegative")
    if eps_tail <= 0.0:
        raise ValueError("eps_tail must be positive")
    K = int(math.ceil(1.0 / eps_tail)) + 1
    tail = 1.0 / (K * K)
    if g == 0.0:
        return 0.0, tail
    x = 4.0 * g * g
    p_cap = _order_cap(x, max(n, 64) + 4096)
    w = specfun.laguerre_function_table(n, min(p_cap, K), x)
    return math.sqrt(_sum_window(n, w, K)), tail


def remainder_s_sweep(ns, g, eps_tail=1e-8):
    """Vector of s_n over an index array, sharing one function table."""
    ns = np.asarray(ns, dtype=int)
    if ns.size and ns.min() < 0:
        raise ValueError("indices must be nonnegative")
    K = int(math.ceil(1.0 / eps_tail)) + 1
    tails = np.full(ns.shape, 1.0 / (K * K))
    if g == 0.0 or ns.size == 0:
        return np.zeros(ns.shape), tails
    x = 4.0 * g * g
    n_top = int(ns.max())
    p_cap = _order_cap(x, n_top + 4096)
    w = specfun.laguerre_function_table(n_top, min(p_cap, K), x)
    out = np.array([math.sqrt(_sum_window(int(n), w, K)) for n in ns])
    return out, tails


def residual_table(p, n_lo, n_hi, tol=1e-8, eps_tail=1e-8):
    """Rows comparing computed eigenvalues with their asymptotes."""
    if p.g == 0.0:
        warnings.warn("g = 0: residuals compare a purely diagonal operator")
    spectrum = converged_spectrum(p, SpectralRequest(n_lo=n_lo, n_hi=n_hi, tol=tol))
    ns = np.arange(n_lo, n_hi + 1)
    fo = ns - p.g * p.g + 0.5 * (p.c1 + p.c2)
    sign = np.where(ns % 2 == 1, -1.0, 1.0)
    if p.g == 0.0:
        parity_term = sign
    else:
        parity_term = sign * specfun.laguerre_function_table(n_hi, 0, 4.0 * p.g * p.g)[
            ns, 0
        ]
    dc = 0.5 * (p.c1 - p.c2) * parity_term
    s_vals, s_tails = remainder_s_sweep(ns, p.g, eps_tail)
    rows = []
    for i, n in enumerate(ns):
        lam = float(spectrum.values[i])
        r1 = lam - float(fo[i])
        rows.append(
            AsymptoticRow(
                n=int(n),
                lam=lam,
                first_order=float(fo[i]),
                diag_corr=float(dc[i]),
                r1=r1,
                r2=r1 - float(dc[i]),
                s_n=float(s_vals[i]),
                s_n_tail_bound=float(s_tails[i]),
                converged=bool(spectrum.converged[i]),
            )
        )
    return rows


def fit_decay(pairs):
    """Least-squares power-law fit on (ln n, ln value).

    Zero or negative values are dropped and counted; at least 8 usable
    points are required.
    """
    usable = [(n, v) for n, v in pairs if v > 0.0]
    dropped = len(pairs) - len(usable)
    if len(usable) < 8:
        raise ValueError(f"need >= 8 positive points, have {len(usable)}")
    ns = np.array([n for n, _ in usable], dtype=float)
    vs = np.array([v for _, v in usable])
    ln_n, ln_v = np.log(ns), np.log(vs)
    slope, intercept = np.polyfit(ln_n, ln_v, 1)
    resid = ln_v - (slope * ln_n + intercept)
    return DecayFit(
        C=float(np.exp(intercept)),
        alpha=float(-slope),
        residual_rms=float(np.sqrt(np.mean(resid**2))),
        n_range=(int(ns.min()), int(ns.max())),
        dropped=dropped,
    )


def dyadic_block_maxima(ns, values):
    """Max |value| per dyadic block [2^j, 2^(j+1)), keyed by j."""
    ns = np.asarray(ns)
    values = np.abs(np.asarray(values, dtype=float))
    out = {}
    for n, v in zip(ns, values):
        if n < 1:
            continue
        j = int(math.floor(math.log2(n)))
        out[j] = max(out.get(j, 0.0), v)
    return out
