"""Reference numpy implementations of the hot kernels.

Power tables are built by cumulative multiplication so the compiled
backend, which multiplies sequentially, agrees to the last few ulps.
"""

from __future__ import annotations

import numpy as np


def _power_table(column: np.ndarray, degree: int) -> np.ndarray:
    """table[:, e] = column**e for e in 0..degree, by sequential products."""
    table = np.empty((column.shape[0], degree + 1), dtype=np.complex128)
    table[:, 0] = 1.0
    for e in range(1, degree + 1):
        table[:, e] = table[:, e - 1] * column
    return table


def eval_poly_batch(expo: np.ndarray, coeffs: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Evaluate sum_a coeffs[a, :] * prod_j points[:, j]**expo[a, j].

    expo is (K, n) int64, coeffs is (K, d) complex, points is (S, n)
    complex; the result is (S, d) complex.
    """
    S = points.shape[0]
    K, n = expo.shape
    monomials = np.ones((S, K), dtype=np.complex128)
    for j in range(n):
        degree = int(expo[:, j].max())
        table = _power_table(points[:, j], degree)
        monomials *= table[:, expo[:, j]]
    return monomials @ coeffs


def restriction_coeffs(
    expo: np.ndarray, coeffs: np.ndarray, z: np.ndarray, axis: int
) -> np.ndarray:
    """Coefficients of w -> P(z with z[axis] = w), a polynomial of one variable.

    Returns b of shape (deg+1, d) with b[t] = sum over monomials whose
    axis exponent is t of coeffs[a, :] * prod_{j != axis} z[j]**expo[a, j].
    """
    K, n = expo.shape
    degree = int(expo[:, axis].max())
    monomials = np.ones(K, dtype=np.complex128)
    for j in range(n):
        if j == axis:
            continue
        table = _power_table(z[j : j + 1], int(expo[:, j].max()))[0]
        monomials *= table[expo[:, j]]
    out = np.zeros((degree + 1, coeffs.shape[1]), dtype=np.complex128)
    np.add.at(out, expo[:, axis], monomials[:, None] * coeffs)
    return out
