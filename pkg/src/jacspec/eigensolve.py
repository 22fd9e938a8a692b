"""Index-addressed eigenvalues of symmetric tridiagonal matrices.

Sturm-sequence bisection only: no eigenvectors, certified index
bracketing, and an adaptive truncation loop that doubles the matrix
until the requested eigenvalues of the infinite operator stop moving.
"""

from dataclasses import dataclass, field

import numpy as np

from .model import build_A

__all__ = [
    "SpectralRequest",
    "SpectrumSlice",
    "converged_spectrum",
    "eigenvalue_by_index",
    "sturm_count",
]

_SAFMIN = np.finfo(float).tiny
_N_MAX = 2**21


@dataclass(frozen=True)
class SpectralRequest:
    """Ascending 0-based eigenvalue index range with absolute tolerance."""

    n_lo: int
    n_hi: int
    tol: float

    def __post_init__(self):
        if self.n_lo < 0 or self.n_hi < self.n_lo:
            raise ValueError(f"bad index range [{self.n_lo}, {self.n_hi}]")
        if self.n_hi - self.n_lo > 10**5:
            raise ValueError("index range wider than 1e5")
        if self.tol < 1e-12:
            raise ValueError(f"tol below the double-precision floor: {self.tol}")


@dataclass
class SpectrumSlice:
    """Eigenvalues by index with truncation-convergence metadata."""

    indices: range
    values: np.ndarray
    truncation_N: int
    converged: np.ndarray
    est_error: np.ndarray
    history: list = field(default_factory=list)  # (N, max est_error) per doubling

    def __post_init__(self):
        ok = self.converged
        if ok.sum() > 1 and not np.all(np.diff(self.values[ok]) > 0.0):
            raise AssertionError("converged eigenvalues are not strictly increasing")


def _gershgorin(tri):
    n = tri.n
    radius = np.zeros(n)
    if n > 1:
        radius[:-1] += np.abs(tri.off)
        radius[1:] += np.abs(tri.off)
    return float(np.min(tri.diag - radius)), float(np.max(tri.diag + radius))


def _sturm_count_batch(diag, off2, xs, pivmin):
    q = diag[0] - xs
    count = (q < 0.0).astype(np.int64)
    for i in range(1, diag.shape[0]):
        q = np.where(np.abs(q) < pivmin, -pivmin, q)
        q = (diag[i] - xs) - off2[i - 1] / q
        count += q < 0.0
    return count


def _pivmin(off2):
    return _SAFMIN * max(1.0, float(off2.max(initial=0.0)))


def sturm_count(T, x):
    """Number of eigenvalues of T strictly below x."""
    off2 = T.off * T.off
    return int(
        _sturm_count_batch(T.diag, off2, np.array([float(x)]), _pivmin(off2))[0]
    )


def _bisect_indices(T, indices, tol):
    off2 = T.off * T.off
    pivmin = _pivmin(off2)
    lo0, hi0 = _gershgorin(T)
    # open the bracket a hair so the counts at the ends are exact
    width = max(hi0 - lo0, 1.0)
    lo0 -= 1e-12 * width
    hi0 += 1e-12 * width
    lo = np.full(indices.shape, lo0)
    hi = np.full(indices.shape, hi0)
    max_iter = int(np.ceil(np.log2(max((hi0 - lo0) / tol, 2.0)))) + 3
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        above = _sturm_count_batch(T.diag, off2, mid, pivmin) > indices
        hi = np.where(above, mid, hi)
        lo = np.where(above, lo, mid)
        if np.all(hi - lo < tol):
            break
    return 0.5 * (lo + hi)


def eigenvalue_by_index(T, n, tol):
    """Eigenvalue number n (ascending, 0-based) of T to absolute tol."""
    if not 0 <= n < T.n:
        raise IndexError(f"eigenvalue index {n} out of range for size {T.n}")
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    return float(_bisect_indices(T, np.array([n]), tol)[0])


def converged_spectrum(p, req, n_start=None):
    """Eigenvalues of the infinite operator for indices in req.

    Starts from a truncation well past n_hi and doubles it until the
    requested eigenvalues move by less than req.tol between successive
    sizes.  Non-convergence at the hard size cap is reported per index
    through the ``converged`` flags, never silently.
    """
    indices = np.arange(req.n_lo, req.n_hi + 1)
    n = n_start if n_start is not None else max(2 * req.n_hi + 64, 256)
    n = max(n, req.n_hi + 2)
    solver_tol = req.tol / 8.0
    vals = _bisect_indices(build_A(p, n), indices, solver_tol)
    history = []
    while True:
        n2 = 2 * n
        vals2 = _bisect_indices(build_A(p, n2), indices, solver_tol)
        est = np.abs(vals2 - vals)
        history.append((n2, float(est.max())))
        done = est < req.tol
        if np.all(done) or n2 >= _N_MAX:
            return SpectrumSlice(
                indices=range(req.n_lo, req.n_hi + 1),
                values=vals2,
                truncation_N=n2,
                converged=done,
                est_error=est,
                history=history,
            )
        n, vals = n2, vals2
