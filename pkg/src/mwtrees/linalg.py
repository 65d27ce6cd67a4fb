"""Dense linear-algebra kernels shared by the whole package.

Everything here works on plain float64 numpy arrays.  Rank, symmetry and
definiteness decisions are made with relative thresholds so they behave the
same across scales; the defaults below can be overridden per call.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import NotSPDError, NotSymmetricError, SingularMatrixError

# Relative cutoff (times the largest singular value / pivot) below which a
# direction counts as numerically zero.
DEFAULT_RANK_TOL = 1e-9
# Relative asymmetry (times the Frobenius norm) tolerated before a matrix is
# rejected as non-symmetric.
DEFAULT_SYMMETRY_TOL = 1e-9
# Relative eigenvalue floor (times the largest eigenvalue) for SPD checks.
DEFAULT_SPD_EIG_TOL = 1e-12


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Coerce ``a`` to a 2-D float64 array, rejecting non-finite entries."""
    m = np.asarray(a, dtype=float)
    if m.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} contains non-finite entries")
    return m


def _require_square(m: np.ndarray, name: str = "matrix") -> None:
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be square, got shape {m.shape}")


def asymmetry(a) -> float:
    """Largest entry of ``|a - a.T|``; 0.0 for an exactly symmetric matrix."""
    m = as_matrix(a)
    _require_square(m)
    if m.size == 0:
        return 0.0
    return float(np.max(np.abs(m - m.T)))


def is_symmetric(a, sym_tol: float = DEFAULT_SYMMETRY_TOL) -> bool:
    """True when the relative asymmetry of ``a`` is within ``sym_tol``."""
    m = as_matrix(a)
    _require_square(m)
    return asymmetry(m) <= sym_tol * max(1e-300, float(np.linalg.norm(m)))


def kronecker(a, b) -> np.ndarray:
    """Kronecker product: block (i, j) of the result is ``a[i, j] * b``."""
    return np.kron(as_matrix(a, "a"), as_matrix(b, "b"))


def inverse(a, rel_tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Inverse of a square matrix via LU with partial pivoting.

    Raises SingularMatrixError when the smallest pivot magnitude falls below
    ``rel_tol`` times the largest, instead of silently amplifying noise.
    """
    m = as_matrix(a)
    _require_square(m)
    if m.shape[0] == 0:
        return m.copy()
    with warnings.catch_warnings():
        # exact singularity is handled below by raising; no need to warn too
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(m, check_finite=False)
    pivots = np.abs(np.diag(lu))
    largest = float(pivots.max())
    if largest == 0.0 or float(pivots.min()) <= rel_tol * largest:
        raise SingularMatrixError(
            f"matrix of shape {m.shape} is singular to working precision"
        )
    return scipy.linalg.lu_solve((lu, piv), np.eye(m.shape[0]), check_finite=False)


def determinant(a) -> float:
    """Determinant via LU factorization."""
    m = as_matrix(a)
    _require_square(m)
    return float(np.linalg.det(m))


def sign_log_determinant(a) -> tuple[float, float]:
    """Return ``(sign, log|det|)``; sign is 0.0 when the input is singular.

    Safe for determinants far beyond float range, e.g. large block matrices
    whose determinant overflows ``determinant``.
    """
    m = as_matrix(a)
    _require_square(m)
    sign, logabs = np.linalg.slogdet(m)
    return float(sign), float(logabs)


def symmetric_eigenvalues(a, sym_tol: float = DEFAULT_SYMMETRY_TOL) -> np.ndarray:
    """All eigenvalues of a symmetric matrix, sorted in descending order.

    Raises NotSymmetricError instead of quietly symmetrizing, so that an
    asymmetric matrix reaching a spectral routine is caught as a bug.
    """
    m = as_matrix(a)
    _require_square(m)
    if not is_symmetric(m, sym_tol):
        raise NotSymmetricError(
            f"matrix is not symmetric: max |a - a.T| entry {asymmetry(m):.3e}"
        )
    return np.linalg.eigvalsh(m)[::-1].copy()


def numerical_rank(a, rel_tol: float = DEFAULT_RANK_TOL) -> int:
    """Number of singular values above ``rel_tol`` times the largest one."""
    m = as_matrix(a)
    if m.size == 0:
        return 0
    sv = np.linalg.svd(m, compute_uv=False)
    largest = float(sv.max())
    if largest == 0.0:
        return 0
    return int(np.count_nonzero(sv > rel_tol * largest))


def pseudo_inverse(a, rel_tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Moore-Penrose pseudo-inverse with the same rank cutoff as
    :func:`numerical_rank`."""
    m = as_matrix(a)
    return np.linalg.pinv(m, rcond=rel_tol)


def random_g_inverse(a, seed: int, rel_tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Seeded sample from the family of generalized inverses of ``a``.

    Returns ``P + (I - P a) U + V (I - a P)`` where ``P`` is the
    pseudo-inverse and ``U``, ``V`` are drawn uniform(-1, 1) from numpy's
    PCG64 stream for ``seed`` (``U`` first, then ``V``).  Every sample ``H``
    satisfies ``a @ H @ a == a`` up to rounding; for invertible ``a`` the
    correction terms vanish and the sample is the plain inverse.
    """
    m = as_matrix(a)
    p = pseudo_inverse(m, rel_tol)
    rng = np.random.default_rng(seed)
    u = rng.uniform(-1.0, 1.0, size=p.shape)
    v = rng.uniform(-1.0, 1.0, size=p.shape)
    left = np.eye(p.shape[0]) - p @ m
    right = np.eye(m.shape[0]) - m @ p
    return p + left @ u + v @ right


def _spd_eigendecomposition(
    w: np.ndarray,
    eig_tol: float,
    sym_tol: float,
) -> tuple[np.ndarray, np.ndarray]:
    _require_square(w)
    if not is_symmetric(w, sym_tol):
        raise NotSPDError(
            f"matrix is not symmetric: max |a - a.T| entry {asymmetry(w):.3e}"
        )
    lam, vec = np.linalg.eigh(w)
    if lam[-1] <= 0.0 or lam[0] <= eig_tol * lam[-1]:
        raise NotSPDError(
            f"matrix is not positive definite: eigenvalue range "
            f"[{lam[0]:.3e}, {lam[-1]:.3e}]"
        )
    return lam, vec


def is_spd(
    a,
    eig_tol: float = DEFAULT_SPD_EIG_TOL,
    sym_tol: float = DEFAULT_SYMMETRY_TOL,
) -> bool:
    """True when ``a`` is symmetric positive definite to working precision."""
    m = as_matrix(a)
    try:
        _spd_eigendecomposition(m, eig_tol, sym_tol)
    except NotSPDError:
        return False
    return True


def spd_inverse_sqrt(
    w,
    eig_tol: float = DEFAULT_SPD_EIG_TOL,
    sym_tol: float = DEFAULT_SYMMETRY_TOL,
) -> np.ndarray:
    """Symmetric ``m`` with ``m @ m == inv(w)`` for SPD ``w``.

    Computed from the eigendecomposition; raises NotSPDError when ``w`` is
    asymmetric or has an eigenvalue at or below ``eig_tol`` times its largest.
    """
    m = as_matrix(w)
    lam, vec = _spd_eigendecomposition(m, eig_tol, sym_tol)
    root = (vec / np.sqrt(lam)) @ vec.T
    # eigh round-off can leave a ~1e-16 asymmetry; return an exactly
    # symmetric factor
    return 0.5 * (root + root.T)


@dataclass(frozen=True)
class Inertia:
    """Eigenvalue sign counts (positive, negative, zero) of a symmetric
    matrix."""

    positive: int
    negative: int
    zero: int

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.positive, self.negative, self.zero)


def inertia_of(eigenvalues, zero_tol: float = DEFAULT_RANK_TOL) -> Inertia:
    """Count eigenvalues above, below, and within ``zero_tol * max|lam|`` of
    zero."""
    lam = np.asarray(eigenvalues, dtype=float).ravel()
    if lam.size == 0:
        return Inertia(0, 0, 0)
    cut = zero_tol * float(np.max(np.abs(lam)))
    positive = int(np.count_nonzero(lam > cut))
    negative = int(np.count_nonzero(lam < -cut))
    return Inertia(positive, negative, lam.size - positive - negative)


@dataclass(frozen=True)
class BlockMatrix:
    """A dense array addressed as a grid of equally sized square blocks.

    ``data`` has shape (rows * block_size, cols * block_size).  Block indices
    are 1-based to match vertex numbering; ``block(i, j)`` returns a copy of
    the block at grid position (i, j).
    """

    data: np.ndarray
    block_size: int

    def __post_init__(self):
        m = as_matrix(self.data, "data")
        s = self.block_size
        if s < 1:
            raise ValueError(f"block_size must be >= 1, got {s}")
        if m.shape[0] % s or m.shape[1] % s:
            raise ValueError(
                f"shape {m.shape} does not divide into {s}x{s} blocks"
            )
        object.__setattr__(self, "data", m)

    @property
    def block_rows(self) -> int:
        return self.data.shape[0] // self.block_size

    @property
    def block_cols(self) -> int:
        return self.data.shape[1] // self.block_size

    def block(self, i: int, j: int) -> np.ndarray:
        """The ``block_size`` x ``block_size`` submatrix at 1-based grid
        position (i, j)."""
        if not (1 <= i <= self.block_rows and 1 <= j <= self.block_cols):
            raise IndexError(
                f"block ({i}, {j}) out of range for "
                f"{self.block_rows}x{self.block_cols} grid"
            )
        s = self.block_size
        return self.data[(i - 1) * s : i * s, (j - 1) * s : j * s].copy()

    def pair_contraction(self, i: int, j: int) -> np.ndarray:
        """``block(i,i) + block(j,j) - block(i,j) - block(j,i)``.

        For a generalized inverse of a block Laplacian this combination is
        the same for every member of the family, which is what makes it a
        usable distance surrogate.
        """
        return (
            self.block(i, i) + self.block(j, j)
            - self.block(i, j) - self.block(j, i)
        )
