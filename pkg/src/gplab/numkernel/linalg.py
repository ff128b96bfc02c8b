"""Symmetric tridiagonal operators: solves, Sturm counts, bisection."""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import lapack

from ..errors import DomainError, PivotBreakdownWarning, SingularMatrixError
from ._backend import kernels
from .grid import RadialGrid


@dataclass(frozen=True, eq=False)
class TridiagonalOperator:
    """Symmetric tridiagonal matrix A with an optional diagonal weight W.

    Represents the pencil ``A - lam W``. ``W`` defaults to the identity.

    Parameters
    ----------
    diag : ndarray, shape (n,)
    offdiag : ndarray, shape (n-1,)
    grid : RadialGrid, optional
        Grid the operator was discretized on.
    weight : ndarray, shape (n,), optional
        Positive diagonal of W.
    """

    diag: np.ndarray
    offdiag: np.ndarray
    grid: RadialGrid | None = None
    weight: np.ndarray | None = None

    def __post_init__(self):
        a = np.array(self.diag, dtype=float)
        e = np.array(self.offdiag, dtype=float)
        if a.ndim != 1 or e.shape != (max(a.size - 1, 0),):
            raise DomainError("offdiag must have length len(diag) - 1")
        w = np.ones_like(a) if self.weight is None else np.array(
            self.weight, dtype=float)
        if w.shape != a.shape or np.any(w <= 0.0):
            raise DomainError("weight must be positive and match diag")
        for arr in (a, e, w):
            arr.setflags(write=False)
        object.__setattr__(self, "diag", a)
        object.__setattr__(self, "offdiag", e)
        object.__setattr__(self, "weight", w)

    @property
    def n(self) -> int:
        return self.diag.size

    def matvec(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        y = self.diag * x
        y[:-1] += self.offdiag * x[1:]
        y[1:] += self.offdiag * x[:-1]
        return y

    def shifted(self, lam: float) -> "TridiagonalOperator":
        """The matrix ``A - lam W`` with unit weight."""
        return TridiagonalOperator(self.diag - lam * self.weight,
                                   self.offdiag, self.grid)

    def gershgorin(self) -> tuple[float, float]:
        """Bounds on the generalized spectrum of ``(A, W)``."""
        rad = np.zeros(self.n)
        rad[:-1] += np.abs(self.offdiag)
        rad[1:] += np.abs(self.offdiag)
        return (float(np.min((self.diag - rad) / self.weight)),
                float(np.max((self.diag + rad) / self.weight)))


def solve_tridiagonal(T: TridiagonalOperator, rhs) -> np.ndarray:
    """Solve ``A x = rhs`` by LU with partial pivoting.

    Raises
    ------
    SingularMatrixError
        On an exactly singular pivot or when ``||A x - rhs||_inf`` exceeds
        ``1e-10 ||rhs||_inf``.
    """
    b = np.array(rhs, dtype=float)
    if b.shape != T.diag.shape:
        raise DomainError("rhs must match the operator size")
    if T.n == 1:
        if T.diag[0] == 0.0:
            raise SingularMatrixError("zero 1x1 matrix")
        return b / T.diag
    _, _, _, x, info = lapack.dgtsv(T.offdiag.copy(), T.diag.copy(),
                                    T.offdiag.copy(), b.copy())
    if info != 0:
        raise SingularMatrixError(f"tridiagonal LU failed (info={info})")
    res = np.max(np.abs(T.matvec(x) - b))
    scale = np.max(np.abs(b))
    if not np.isfinite(res) or res > 1e-10 * scale:
        raise SingularMatrixError(
            f"residual {res:.3e} exceeds 1e-10 * ||rhs|| = {1e-10 * scale:.3e}")
    return x


def count_eigs_below(T: TridiagonalOperator, lam: float) -> int:
    """Exact number of eigenvalues of the pencil ``(A, W)`` strictly below lam.

    Counts negative pivots of the LDL^T factorization of ``A - lam W``.
    A zero pivot is replaced by ``1e-14`` times the local row scale and a
    :class:`PivotBreakdownWarning` is issued.
    """
    count, perturbed = kernels.sturm_count(T.diag, T.offdiag, T.weight, lam)
    if perturbed:
        warnings.warn(f"zero pivot perturbed at lam={lam!r}",
                      PivotBreakdownWarning, stacklevel=2)
    return int(count)


def eigenvalue_bisect(T: TridiagonalOperator, k: int, tol: float = 1e-8,
                      bounds: tuple[float, float] | None = None) -> float:
    """The ``k``-th smallest eigenvalue (0-based) of ``(A, W)`` by bisection.

    Bisection on :func:`count_eigs_below` to absolute accuracy ``tol``.
    """
    if not 0 <= k < T.n:
        raise DomainError("eigenvalue index out of range")
    lo, hi = T.gershgorin() if bounds is None else bounds
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if kernels.sturm_count(T.diag, T.offdiag, T.weight, mid)[0] > k:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def lowest_eigenvalues(T: TridiagonalOperator, m: int,
                       tol: float = 1e-8) -> np.ndarray:
    """The ``m`` smallest eigenvalues of ``(A, W)`` to absolute ``tol``."""
    lo, hi = T.gershgorin()
    return np.array([eigenvalue_bisect(T, k, tol, (lo, hi))
                     for k in range(min(m, T.n))])
