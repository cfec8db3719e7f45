"""Hot numeric kernels: compiled core with a pure-numpy fallback.

The compiled backend is selected at import time when the extension
built; `use("reference")` forces the numpy implementation at runtime,
`use("compiled")` switches back.  Wrappers normalize dtypes and chunk
large evaluation batches so peak memory stays bounded.
"""

from __future__ import annotations

import numpy as np

from . import _ref

try:
    from . import _fast
except ImportError:
    _fast = None

_active = _fast if _fast is not None else _ref

# Chunk evaluation batches so the (S, K) monomial workspace stays small.
_CHUNK_CELLS = 1 << 22


def available_backends() -> tuple[str, ...]:
    return ("compiled", "reference") if _fast is not None else ("reference",)


def backend_name() -> str:
    return "compiled" if _active is _fast else "reference"


def use(backend: str) -> None:
    """Select the kernel backend: "compiled" or "reference"."""
    global _active
    if backend == "reference":
        _active = _ref
    elif backend == "compiled":
        if _fast is None:
            raise RuntimeError("compiled backend is not available")
        _active = _fast
    else:
        raise ValueError(f"unknown backend {backend!r}")


def _as_expo(expo) -> np.ndarray:
    out = np.ascontiguousarray(expo, dtype=np.int64)
    if out.ndim != 2:
        raise ValueError(f"exponent matrix must be 2-D, got shape {out.shape}")
    if out.size and out.min() < 0:
        raise ValueError("exponents must be nonnegative")
    return out


def _as_complex(a, ndim: int, name: str) -> np.ndarray:
    out = np.ascontiguousarray(a, dtype=np.complex128)
    if out.ndim != ndim:
        raise ValueError(f"{name} must be {ndim}-D, got shape {out.shape}")
    return out


def eval_poly_batch(expo, coeffs, points) -> np.ndarray:
    """Evaluate a dense polynomial at a batch of points; returns (S, d) complex.

    expo is (K, n) nonnegative integers, coeffs is (K, d), points is
    (S, n).
    """
    expo = _as_expo(expo)
    coeffs = _as_complex(coeffs, 2, "coeffs")
    points = _as_complex(points, 2, "points")
    K, n = expo.shape
    if coeffs.shape[0] != K:
        raise ValueError(f"coeffs rows {coeffs.shape[0]} != monomial count {K}")
    if points.shape[1] != n:
        raise ValueError(f"points columns {points.shape[1]} != dimension {n}")
    S = points.shape[0]
    if S == 0:
        return np.zeros((0, coeffs.shape[1]), dtype=np.complex128)
    step = max(1, _CHUNK_CELLS // max(1, K))
    if S <= step:
        return _active.eval_poly_batch(expo, coeffs, points)
    out = np.empty((S, coeffs.shape[1]), dtype=np.complex128)
    for start in range(0, S, step):
        stop = min(start + step, S)
        out[start:stop] = _active.eval_poly_batch(expo, coeffs, points[start:stop])
    return out


def restriction_coeffs(expo, coeffs, z, axis: int) -> np.ndarray:
    """Univariate coefficients of the restriction along one axis.

    Returns b of shape (deg+1, d) with P(z with z[axis] = w) equal to
    sum_t b[t] w^t.
    """
    expo = _as_expo(expo)
    coeffs = _as_complex(coeffs, 2, "coeffs")
    z = _as_complex(z, 1, "z")
    K, n = expo.shape
    if coeffs.shape[0] != K:
        raise ValueError(f"coeffs rows {coeffs.shape[0]} != monomial count {K}")
    if z.shape[0] != n:
        raise ValueError(f"z length {z.shape[0]} != dimension {n}")
    if not 0 <= axis < n:
        raise ValueError(f"axis {axis} outside [0, {n})")
    return _active.restriction_coeffs(expo, coeffs, z, axis)
