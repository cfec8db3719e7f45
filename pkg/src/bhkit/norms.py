"""Norms of homogeneous polynomials: coefficients, Blei mixed norms,
certified polydisc sup-norm enclosures, and torus L^p estimates.

Soundness discipline: anything consumed on the large side of an
inequality check must be supnorm_upper or an exact norm; supnorm_lower
exists for tightness reporting and for the left side.  By the maximum
principle the polydisc sup of an m-homogeneous polynomial is attained
on the torus, so all searching happens over phases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels
from .combinatorics import SubsetPair
from .polynomials import HomogeneousPolynomial, evaluate_batch
from .spaces import AtomicFunctionSpace, norm as space_norm

__all__ = [
    "Enclosure",
    "coeff_lp_norm",
    "mixed_norm",
    "supnorm_lower",
    "supnorm_upper",
    "supnorm_enclosure",
    "torus_lp_norm",
    "exact_l2_torus",
]

# Uniform-grid upper bounds refuse more evaluations than this.
_GRID_GUARD = 10**8

_SCAN_POINTS = 1024


@dataclass(frozen=True)
class Enclosure:
    """A certified [lower, upper] interval for a polydisc sup-norm."""

    lower: float
    upper: float
    method: str
    budget: int

    def __post_init__(self) -> None:
        if not (
            0.0 <= self.lower <= self.upper
            and math.isfinite(self.lower)
            and math.isfinite(self.upper)
        ):
            raise ValueError(f"invalid enclosure [{self.lower}, {self.upper}]")


def _check_target(P: HomogeneousPolynomial, target: AtomicFunctionSpace | None) -> None:
    if target is None:
        if P.coeff_dim != 1:
            raise ValueError("vector-valued polynomial needs a target space")
    elif target.atoms != P.coeff_dim:
        raise ValueError(
            f"target has {target.atoms} atoms but coefficients have dimension "
            f"{P.coeff_dim}"
        )


def _scores(values: np.ndarray, target: AtomicFunctionSpace | None) -> np.ndarray:
    """Modulus (scalar) or target norm (vector) of each row."""
    if target is None:
        return np.abs(values[:, 0])
    q = target.exponent
    return np.sum(target.weights * np.abs(values) ** q, axis=1) ** (1.0 / q)


def coeff_lp_norm(
    P: HomogeneousPolynomial, p: float, target: AtomicFunctionSpace | None = None
) -> float:
    """(sum_alpha ||c_alpha||^p)^(1/p) with the modulus or target norm."""
    if p < 1.0:
        raise ValueError(f"need p >= 1, got {p}")
    _check_target(P, target)
    scores = _scores(P.coefficients, target)
    return float(np.sum(scores**p) ** (1.0 / p))


def mixed_norm(a: np.ndarray, pair: SubsetPair, s: float, q: float) -> float:
    """The Blei mixed norm (sum_{i_S} (sum_{i_Shat} |a_i|^q)^(s/q))^(1/s).

    a is the dense coefficient tensor over M(m, n), shape (n,) * m; the
    subset pair selects which positions are outer.  An empty complement
    degenerates to the plain sum of |a_i|^s.
    """
    if not 1.0 <= s <= q:
        raise ValueError(f"need 1 <= s <= q, got s={s}, q={q}")
    if a.ndim != pair.m:
        raise ValueError(f"tensor has {a.ndim} axes but the subset universe is {pair.m}")
    if len(set(a.shape)) != 1:
        raise ValueError(f"tensor axes must share one dimension, got shape {a.shape}")
    complement_axes = tuple(position - 1 for position in pair.complement)
    inner = np.sum(np.abs(a) ** q, axis=complement_axes)
    return float(np.sum(inner ** (s / q)) ** (1.0 / s))


@lru_cache(maxsize=None)
def _scan_powers(degree: int) -> np.ndarray:
    """(1024, degree+1) matrix of e^(i t theta_g) on the uniform phase grid."""
    phases = np.exp(2j * np.pi * np.arange(_SCAN_POINTS) / _SCAN_POINTS)
    out = np.empty((_SCAN_POINTS, degree + 1), dtype=np.complex128)
    out[:, 0] = 1.0
    for t in range(1, degree + 1):
        out[:, t] = out[:, t - 1] * phases
    out.setflags(write=False)
    return out


def _univariate_scores(b: np.ndarray, thetas: np.ndarray, target) -> np.ndarray:
    powers = np.exp(1j * thetas[:, None] * np.arange(b.shape[0])[None, :])
    return _scores(powers @ b, target)


def _max_univariate(b: np.ndarray, target) -> tuple[float, float]:
    """(theta, score) maximizing the restriction by dense scan plus refinement.

    Every candidate is a true evaluation, so the result is a valid
    lower bound wherever it lands.
    """
    degree = b.shape[0] - 1
    values = _scores(_scan_powers(degree) @ b, target)
    g = int(np.argmax(values))
    best_theta = 2.0 * math.pi * g / _SCAN_POINTS
    best_value = float(values[g])
    half_width = math.pi / _SCAN_POINTS
    for _ in range(3):
        thetas = best_theta + half_width * np.array([-1.0, -0.5, 0.0, 0.5, 1.0])
        local = _univariate_scores(b, thetas, target)
        i = int(np.argmax(local))
        if local[i] > best_value:
            best_value = float(local[i])
            best_theta = float(thetas[i])
        half_width /= 4.0
    return best_theta, best_value


def supnorm_lower(
    P: HomogeneousPolynomial,
    budget: int,
    seed: int,
    target: AtomicFunctionSpace | None = None,
) -> float:
    """Certified lower bound for the polydisc sup-norm.

    Starts at the all-ones point plus `budget` random torus points,
    then runs coordinate-wise phase ascent: each axis restriction is a
    univariate polynomial maximized by dense scan and local refinement.
    Deterministic per seed; every reported value is a true evaluation.
    """
    if budget < 1:
        raise ValueError(f"need budget >= 1, got {budget}")
    _check_target(P, target)
    expo, coeffs = P.exponents, P.coefficients
    rng = np.random.default_rng(seed)
    starts = [np.ones(P.n, dtype=np.complex128)]
    starts += [np.exp(2j * np.pi * rng.random(P.n)) for _ in range(budget)]
    best = 0.0
    for start in starts:
        z = start.copy()
        value = float(_scores(kernels.eval_poly_batch(expo, coeffs, z[None, :]), target)[0])
        for _ in range(8):
            improved = False
            for axis in range(P.n):
                b = kernels.restriction_coeffs(expo, coeffs, z, axis)
                theta, axis_value = _max_univariate(b, target)
                if axis_value > value * (1.0 + 1e-14) + 1e-300:
                    z[axis] = complex(math.cos(theta), math.sin(theta))
                    value = axis_value
                    improved = True
            if not improved:
                break
        best = max(best, value)
    return best


def _grid_max(
    P: HomogeneousPolynomial, grid_per_axis: int, target: AtomicFunctionSpace | None
) -> float:
    """Maximum score over the uniform phase grid, evaluated in chunks."""
    G, n = grid_per_axis, P.n
    total = G**n
    radix = np.int64(G) ** np.arange(n - 1, -1, -1, dtype=np.int64)
    best = 0.0
    chunk = 1 << 16
    for start in range(0, total, chunk):
        linear = np.arange(start, min(start + chunk, total), dtype=np.int64)
        digits = (linear[:, None] // radix[None, :]) % G
        points = np.exp(2j * np.pi * digits / G)
        scores = _scores(evaluate_batch(P, points), target)
        best = max(best, float(scores.max()))
    return best


def supnorm_upper(
    P: HomogeneousPolynomial,
    grid_per_axis: int,
    target: AtomicFunctionSpace | None = None,
) -> float:
    """Certified upper bound for the polydisc sup-norm.

    The smaller of the coefficient-sum bound sum_alpha ||c_alpha|| and
    the uniform phase-grid maximum inflated by L*h*n/2 with h = 2 pi /
    grid_per_axis and the per-coordinate Lipschitz constant L = m *
    sum_alpha ||c_alpha||.
    """
    if grid_per_axis < 1:
        raise ValueError(f"need grid_per_axis >= 1, got {grid_per_axis}")
    _check_target(P, target)
    coeff_sum = float(np.sum(_scores(P.coefficients, target)))
    if grid_per_axis**P.n > _GRID_GUARD:
        raise ValueError(
            f"grid of {grid_per_axis}^{P.n} points exceeds the {_GRID_GUARD} guard"
        )
    lipschitz = P.m * coeff_sum
    h = 2.0 * math.pi / grid_per_axis
    inflated = _grid_max(P, grid_per_axis, target) + lipschitz * h * P.n / 2.0
    return min(coeff_sum, inflated)


def supnorm_enclosure(
    P: HomogeneousPolynomial,
    budget: int,
    grid_per_axis: int,
    seed: int,
    target: AtomicFunctionSpace | None = None,
) -> Enclosure:
    """Two-sided sup-norm enclosure from the lower search and upper grid.

    On families where both sides are tight the two bounds can cross by
    float rounding; the lower end is clipped to keep the interval valid.
    """
    lower = supnorm_lower(P, budget, seed, target)
    upper = supnorm_upper(P, grid_per_axis, target)
    return Enclosure(
        lower=min(lower, upper),
        upper=upper,
        method=f"phase-ascent({budget})+grid({grid_per_axis})",
        budget=budget + grid_per_axis**P.n,
    )


def torus_lp_norm(
    P: HomogeneousPolynomial,
    p: float,
    samples: int,
    seed: int | list[int],
    target: AtomicFunctionSpace | None = None,
    stratified: bool = False,
) -> tuple[float, float]:
    """Monte Carlo estimate of the L^p norm under product Haar measure.

    Returns (estimate, standard error) with the delta method mapping
    the variance of the p-th power mean through x -> x^(1/p).  The
    stratified flag uses per-coordinate Latin hypercube phases; the
    error formula stays the iid one, which is conservative there.
    """
    if p <= 0.0:
        raise ValueError(f"need p > 0, got {p}")
    if samples < 2:
        raise ValueError(f"need samples >= 2, got {samples}")
    _check_target(P, target)
    rng = np.random.default_rng(seed)
    if stratified:
        u = np.empty((samples, P.n))
        for j in range(P.n):
            u[:, j] = (rng.permutation(samples) + rng.random(samples)) / samples
    else:
        u = rng.random((samples, P.n))
    scores = _scores(evaluate_batch(P, np.exp(2j * np.pi * u)), target)
    powered = scores**p
    mean = math.fsum(powered) / samples
    variance = math.fsum((powered - mean) ** 2) / (samples - 1)
    if mean == 0.0:
        return 0.0, 0.0
    estimate = mean ** (1.0 / p)
    std_error = (1.0 / p) * mean ** (1.0 / p - 1.0) * math.sqrt(variance / samples)
    return float(estimate), float(std_error)


def exact_l2_torus(
    P: HomogeneousPolynomial, target: AtomicFunctionSpace | None = None
) -> float:
    """The exact L^2 torus norm from monomial orthonormality.

    Scalar case: the coefficient ell_2 norm.  Vector case: the target
    norm of the atomwise L^2 aggregates (sum_alpha |c_alpha[a]|^2)^(1/2).
    """
    _check_target(P, target)
    if target is None:
        return coeff_lp_norm(P, 2.0)
    aggregate = np.sqrt(np.sum(np.abs(P.coefficients) ** 2, axis=0))
    return space_norm(target, aggregate)
