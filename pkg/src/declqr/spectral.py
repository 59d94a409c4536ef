"""Unitary DFT machinery and circulant matrices.

A circulant matrix is fixed by its first row; row j is the first row cyclically
shifted right by j entries. The DFT diagonalizes every circulant, and the
diagonal is the eigenvalue sequence indexed by spatial frequency
kappa = 0..n-1. Transforms are computed by direct O(n^2) summation; sizes here
never justify an FFT.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .matcore import as_matrix


@dataclass
class CirculantSpec:
    """A circulant matrix, stored as its first row."""

    first_row: np.ndarray

    def __post_init__(self):
        row = np.asarray(self.first_row, dtype=float)
        if row.ndim != 1 or row.size < 1:
            raise InputError("first_row must be a nonempty 1-D sequence")
        if not np.all(np.isfinite(row)):
            raise InputError("first_row contains NaN or Inf entries")
        self.first_row = row

    @property
    def n(self):
        return self.first_row.size


def identity_spec(n):
    """CirculantSpec of the n x n identity."""
    row = np.zeros(n)
    row[0] = 1.0
    return CirculantSpec(row)


def dft_matrix(n):
    """Unitary DFT matrix F with F[k, j] = exp(-2 pi i k j / n) / sqrt(n)."""
    if n < 1:
        raise InputError("transform size must be at least 1")
    k = np.arange(n)
    return np.exp(-2j * np.pi * np.outer(k, k) / n) / np.sqrt(n)


def dft_apply(x):
    """Unitary DFT of a real or complex vector."""
    x = np.asarray(x)
    if x.ndim != 1 or x.size < 1:
        raise InputError("dft_apply expects a nonempty 1-D sequence")
    if not np.all(np.isfinite(x)):
        raise InputError("dft_apply input contains NaN or Inf entries")
    return dft_matrix(x.size) @ x


def dft_inverse(xhat):
    """Inverse of dft_apply (the DFT matrix is unitary and symmetric)."""
    xhat = np.asarray(xhat)
    if xhat.ndim != 1 or xhat.size < 1:
        raise InputError("dft_inverse expects a nonempty 1-D sequence")
    return np.conj(dft_matrix(xhat.size)) @ xhat


def circulant_materialize(spec):
    """Dense n x n matrix of a CirculantSpec: M[i, j] = first_row[(j - i) mod n]."""
    row = spec.first_row
    n = row.size
    idx = (np.arange(n)[None, :] - np.arange(n)[:, None]) % n
    return row[idx]


def circulant_eigenvalues(spec):
    """Eigenvalue sequence m(kappa) = sum_j row[j] exp(+2 pi i j kappa / n).

    Ordered by frequency kappa = 0..n-1, matching the diagonal of F M F^{-1}.
    The upper half is filled by conjugation, so the real-source symmetry
    values[n - k] == conj(values[k]) holds exactly.
    """
    row = spec.first_row
    n = row.size
    j = np.arange(n)
    vals = np.empty(n, dtype=complex)
    for k in range(n // 2 + 1):
        if 2 * k == n:
            # Self-conjugate frequency: the value is sum_j row[j] (-1)^j,
            # computed in real arithmetic so it is exactly real.
            vals[k] = np.sum(row * np.where(j % 2 == 0, 1.0, -1.0))
        else:
            vals[k] = np.sum(row * np.exp(2j * np.pi * j * k / n))
        if 0 < k < n - k:
            vals[n - k] = np.conj(vals[k])
    return vals


def is_circulant(M, tol=1e-12):
    """True when every row is the cyclic right-shift of the previous row,
    entrywise within absolute tolerance tol."""
    M = as_matrix(M, "M", square=True)
    for i in range(1, M.shape[0]):
        if np.max(np.abs(M[i] - np.roll(M[i - 1], 1))) > tol:
            return False
    return True
