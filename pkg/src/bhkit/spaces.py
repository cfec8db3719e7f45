"""Finite atomic models of Banach function spaces.

A model is a weighted ell_q space on d atoms with measure weights
mu_j > 0 and norm (sum_j mu_j |f_j|^q)^(1/q); functionals pair against
vectors through the integral pairing <phi, x> = sum_j mu_j phi_j x_j.
Diagonal rescaling makes a weighted model lattice-isometric to the
unweighted one, so all lattice constants below are weight-free.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .constants import COMPLEX_GROTHENDIECK_UPPER

__all__ = [
    "AtomicFunctionSpace",
    "LinearOperator",
    "LatticeConstants",
    "OperatorNorm",
    "SummingEstimate",
    "norm",
    "pth_power_space",
    "lattice_constants",
    "operator_norm",
    "weak_ell1_norm",
    "summing_norm_lower",
    "grothendieck_upper",
    "serialize_operator",
    "parse_operator",
]

# Cap on the phase-grid size used for weak-norm enclosures.
_GRID_BUDGET = 200_000


def _frozen_array(values, dtype, name: str, ndim: int) -> np.ndarray:
    out = np.array(values, dtype=dtype)
    if out.ndim != ndim:
        raise ValueError(f"{name} must be {ndim}-D, got shape {out.shape}")
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class AtomicFunctionSpace:
    """Weighted ell_q on finitely many atoms."""

    weights: np.ndarray
    exponent: float

    def __post_init__(self) -> None:
        weights = _frozen_array(self.weights, np.float64, "weights", 1)
        if weights.size < 1:
            raise ValueError("need at least one atom")
        if not np.all(np.isfinite(weights)) or weights.min() <= 0.0:
            raise ValueError("weights must be strictly positive and finite")
        if not self.exponent >= 1.0:
            raise ValueError(f"exponent must be >= 1, got {self.exponent}")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "exponent", float(self.exponent))

    @property
    def atoms(self) -> int:
        return self.weights.shape[0]


@dataclass(frozen=True)
class LinearOperator:
    """A matrix operator between two atomic models."""

    source: AtomicFunctionSpace
    target: AtomicFunctionSpace
    matrix: np.ndarray

    def __post_init__(self) -> None:
        matrix = _frozen_array(self.matrix, np.complex128, "matrix", 2)
        expected = (self.target.atoms, self.source.atoms)
        if matrix.shape != expected:
            raise ValueError(f"matrix must have shape {expected}, got {matrix.shape}")
        object.__setattr__(self, "matrix", matrix)

    def apply(self, f) -> np.ndarray:
        return self.matrix @ np.asarray(f, dtype=np.complex128)


@dataclass(frozen=True)
class LatticeConstants:
    """Concavity/convexity constant maps and the cotype 2 enclosure."""

    concavity: Callable[[float], float]
    convexity: Callable[[float], float]
    cotype2_upper: float
    cotype2_lower: float


@dataclass(frozen=True)
class OperatorNorm:
    """Operator norm value with its certificate status.

    status is "exact" (ell_1 source, column maximum), "converged"
    (Hilbert-to-Hilbert singular value), or "lower-bound" (multistart
    ascent; the true norm may be larger).
    """

    value: float
    status: str
    witness: np.ndarray


@dataclass(frozen=True)
class SummingEstimate:
    """An interval estimate of an absolutely summing norm."""

    r: float
    lower: float
    upper: float | None
    witness: tuple[np.ndarray, ...]


def norm(space: AtomicFunctionSpace, f) -> float:
    """The weighted ell_q norm (sum_j mu_j |f_j|^q)^(1/q)."""
    values = np.asarray(f, dtype=np.complex128)
    if values.shape != (space.atoms,):
        raise ValueError(f"vector must have shape ({space.atoms},), got {values.shape}")
    q = space.exponent
    return float(np.sum(space.weights * np.abs(values) ** q) ** (1.0 / q))


def pth_power_space(space: AtomicFunctionSpace, p: float) -> AtomicFunctionSpace:
    """The p-th power model: same atoms, exponent q/p.

    Satisfies the power identity norm_{X[p]}(f) = norm_X(|f|^(1/p))^p.
    """
    if not 1.0 <= p <= space.exponent:
        raise ValueError(f"need 1 <= p <= {space.exponent}, got p={p}")
    return AtomicFunctionSpace(space.weights, space.exponent / p)


def _cotype2_ratio(space: AtomicFunctionSpace, family: np.ndarray) -> float:
    """(sum ||x_i||^2)^(1/2) / (avg over signs ||sum eps_i x_i||^2)^(1/2), exactly."""
    F = family.shape[0]
    left = math.sqrt(sum(norm(space, x) ** 2 for x in family))
    total = 0.0
    for bits in range(1 << F):
        signs = np.array([1.0 if bits >> i & 1 else -1.0 for i in range(F)])
        total += norm(space, signs @ family) ** 2
    return left / math.sqrt(total / (1 << F))


def lattice_constants(space: AtomicFunctionSpace) -> LatticeConstants:
    """Concavity, convexity, and cotype 2 constants of the weighted model.

    M_{q'} = 1 for q' >= q and M^p = 1 for p <= q; the remaining ranges
    get the finite-dimensional Hoelder bound d^|1/q'-1/q|.  The cotype 2
    constant is 1 for q = 2; otherwise the upper bound is sqrt(2) for
    q < 2 (Khintchine transfer) and d^(1/2-1/q) for q > 2 (norm
    equivalence with the Hilbert model), and the lower bound is the best
    exactly averaged random-sign ratio over a fixed family sample.
    """
    d = space.atoms
    q = space.exponent

    def concavity(q_prime: float) -> float:
        if q_prime < 1.0:
            raise ValueError(f"need q' >= 1, got {q_prime}")
        if q_prime >= q:
            return 1.0
        return d ** (1.0 / q_prime - 1.0 / q)

    def convexity(p: float) -> float:
        if p < 1.0:
            raise ValueError(f"need p >= 1, got {p}")
        if p <= q:
            return 1.0
        return d ** (1.0 / q - 1.0 / p)

    if q == 2.0:
        return LatticeConstants(concavity, convexity, 1.0, 1.0)
    upper = math.sqrt(2.0) if q < 2.0 else d ** (0.5 - 1.0 / q)
    # Any family certifies a lower bound; a singleton gives exactly 1.
    lower = 1.0
    rng = np.random.default_rng(20)
    for _ in range(8):
        family = rng.standard_normal((6, d)) + 1j * rng.standard_normal((6, d))
        lower = max(lower, _cotype2_ratio(space, family))
    return LatticeConstants(concavity, convexity, upper, min(lower, upper))


def _conj_phases(x: np.ndarray) -> np.ndarray:
    """conj(sign x) entrywise, 0 where x vanishes."""
    magnitude = np.abs(x)
    safe = np.where(magnitude > 0.0, magnitude, 1.0)
    return np.where(magnitude > 0.0, np.conj(x) / safe, 0.0)


def _row_norms(space: AtomicFunctionSpace, Y: np.ndarray) -> np.ndarray:
    """norm(space, row) for each row of Y, vectorized."""
    q = space.exponent
    return np.sum(space.weights * np.abs(Y) ** q, axis=1) ** (1.0 / q)


def _norming_functional(space: AtomicFunctionSpace, x: np.ndarray) -> np.ndarray:
    """phi with <phi, x> = norm(x) and dual norm 1 (0 on a zero vector)."""
    value = norm(space, x)
    if value == 0.0:
        return np.zeros_like(x)
    phase = _conj_phases(x)
    if space.exponent == 1.0:
        return phase
    return phase * (np.abs(x) / value) ** (space.exponent - 1.0)


def _linear_maximizer(space: AtomicFunctionSpace, c: np.ndarray) -> np.ndarray:
    """Unit vector maximizing Re sum_j c_j f_j (plain sum, no weights)."""
    if not c.any():
        f = np.zeros(space.atoms, dtype=np.complex128)
        f[0] = 1.0
        return f / norm(space, f)
    q = space.exponent
    phase = _conj_phases(c)
    if q == 1.0:
        j = int(np.argmax(np.abs(c) / space.weights))
        f = np.zeros(space.atoms, dtype=np.complex128)
        f[j] = phase[j] / space.weights[j]
        return f
    b = np.abs(c) * space.weights ** (-1.0 / q)
    g = phase * b ** (1.0 / (q - 1.0))
    f = g * space.weights ** (-1.0 / q)
    return f / norm(space, f)


def operator_norm(v: LinearOperator) -> OperatorNorm:
    """The operator norm with a certificate.

    ell_1 sources are exact (unit-ball extreme points e_j / mu_j);
    Hilbert-to-Hilbert is the largest singular value of the rescaled
    matrix; anything else is a multistart alternating ascent reported
    as a lower bound.
    """
    d_s, d_t = v.source.atoms, v.target.atoms
    if v.source.exponent == 1.0:
        column_norms = np.array(
            [norm(v.target, v.matrix[:, j]) / v.source.weights[j] for j in range(d_s)]
        )
        j = int(np.argmax(column_norms))
        witness = np.zeros(d_s, dtype=np.complex128)
        witness[j] = 1.0 / v.source.weights[j]
        return OperatorNorm(float(column_norms[j]), "exact", witness)
    if v.source.exponent == 2.0 and v.target.exponent == 2.0:
        scale_t = np.sqrt(v.target.weights)
        scale_s = np.sqrt(v.source.weights)
        rescaled = v.matrix * scale_t[:, None] / scale_s[None, :]
        _, sigma, vh = np.linalg.svd(rescaled)
        witness = np.conj(vh[0]) / scale_s
        return OperatorNorm(float(sigma[0]), "converged", witness)
    rng = np.random.default_rng(7)
    best_value, best_witness = -1.0, None
    starts = [np.ones(d_s, dtype=np.complex128)]
    starts += [np.eye(d_s, dtype=np.complex128)[j] for j in range(d_s)]
    starts += [
        rng.standard_normal(d_s) + 1j * rng.standard_normal(d_s) for _ in range(32)
    ]
    for start in starts:
        if norm(v.source, start) == 0.0:
            continue
        f = start / norm(v.source, start)
        value = norm(v.target, v.matrix @ f)
        for _ in range(60):
            y = v.matrix @ f
            phi = _norming_functional(v.target, y)
            c = (v.target.weights * phi) @ v.matrix
            f_next = _linear_maximizer(v.source, c)
            value_next = norm(v.target, v.matrix @ f_next)
            if value_next <= value + 1e-12 * max(1.0, value):
                if value_next > value:
                    f, value = f_next, value_next
                break
            f, value = f_next, value_next
        if value > best_value:
            best_value, best_witness = value, f
    return OperatorNorm(float(best_value), "lower-bound", best_witness)


def _phase_grid(Q: int, N: int) -> np.ndarray:
    """All (Q^N, N) combinations of Q-th roots of unity."""
    roots = np.exp(2j * np.pi * np.arange(Q) / Q)
    grids = np.meshgrid(*([roots] * N), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def _as_vector_list(space: AtomicFunctionSpace, xs) -> np.ndarray:
    X = np.array([np.asarray(x, dtype=np.complex128) for x in xs])
    if X.ndim != 2 or X.shape[1] != space.atoms:
        raise ValueError(f"need vectors of dimension {space.atoms}")
    if X.shape[0] == 0:
        raise ValueError("need at least one vector")
    return X


def _weak_grid(space: AtomicFunctionSpace, X: np.ndarray, total: float, budget: int):
    """Phase-grid (lower, upper) for the weak norm, or None above the budget."""
    N = X.shape[0]
    Q = 4
    if Q**N > budget:
        return None
    while Q < 64 and (Q + 1) ** N <= budget:
        Q += 1
    grid_max = float(_row_norms(space, _phase_grid(Q, N) @ X).max())
    return grid_max, grid_max + 2.0 * math.sin(math.pi / (2 * Q)) * total


def _weak_ell1_upper(space: AtomicFunctionSpace, X: np.ndarray, budget: int) -> float:
    total = float(_row_norms(space, X).sum())
    if total == 0.0:
        return 0.0
    grid = _weak_grid(space, X, total, budget)
    return total if grid is None else min(total, grid[1])


def weak_ell1_norm(space: AtomicFunctionSpace, xs) -> tuple[float, float]:
    """Enclosure of the weak ell_1 norm sup over the dual ball of sum |phi(x_i)|.

    By duality this equals max over unimodular (c_i) of norm(sum c_i
    x_i).  The lower bound is a multistart alternating phase ascent;
    the upper bound is the smaller of sum_i norm(x_i) and a phase-grid
    enclosure max_grid + 2 sin(pi/(2Q)) sum_i norm(x_i) when the grid
    fits the budget.
    """
    X = _as_vector_list(space, xs)
    N = X.shape[0]
    total = float(_row_norms(space, X).sum())
    if total == 0.0:
        return 0.0, 0.0
    upper = total
    lower = 0.0
    grid = _weak_grid(space, X, total, _GRID_BUDGET)
    if grid is not None:
        lower = grid[0]
        upper = min(upper, grid[1])
    rng = np.random.default_rng(11)
    starts = [np.ones(N, dtype=np.complex128)]
    starts += [np.exp(2j * np.pi * rng.random(N)) for _ in range(63)]
    for c in starts:
        value = norm(space, c @ X)
        for _ in range(50):
            phi = _norming_functional(space, c @ X)
            t = X @ (space.weights * phi)
            c_next = np.where(np.abs(t) > 0.0, _conj_phases(t), c)
            value_next = norm(space, c_next @ X)
            if value_next <= value + 1e-12 * max(1.0, value):
                if value_next > value:
                    c, value = c_next, value_next
                break
            c, value = c_next, value_next
        lower = max(lower, value)
    return min(lower, upper), upper


def _normalized(space: AtomicFunctionSpace, x: np.ndarray) -> np.ndarray:
    return x / norm(space, x)


def summing_norm_lower(
    v: LinearOperator, r: float, seq_len_cap: int = 8, trials: int = 32, seed: int = 0
) -> SummingEstimate:
    """Search lower bound for the (r, 1)-summing norm of v.

    Maximizes (sum_i ||v x_i||^r)^(1/r) / weak_ell1_upper(xs) over
    deterministic atom sequences and random trial sequences; every
    prefix of every sequence is a candidate, so the result is monotone
    nondecreasing in both trials and seq_len_cap for a fixed seed.  The
    upper end is filled by Grothendieck when the shapes allow it.
    """
    if r < 1.0:
        raise ValueError(f"need r >= 1, got {r}")
    if seq_len_cap < 1:
        raise ValueError(f"need seq_len_cap >= 1, got {seq_len_cap}")
    d = v.source.atoms
    best_lower, best_witness = 0.0, ()

    def consider(sequence: np.ndarray) -> None:
        nonlocal best_lower, best_witness
        image_norms = _row_norms(v.target, sequence @ v.matrix.T)
        for N in range(1, sequence.shape[0] + 1):
            numerator = float(np.sum(image_norms[:N] ** r) ** (1.0 / r))
            if numerator == 0.0:
                continue
            weak_upper = _weak_ell1_upper(v.source, sequence[:N], budget=20_000)
            ratio = numerator / weak_upper
            if ratio > best_lower:
                best_lower = ratio
                best_witness = tuple(np.array(x) for x in sequence[:N])

    basis = np.eye(d, dtype=np.complex128)
    for j in range(d):
        consider(_normalized(v.source, basis[j])[None, :])
    consider(
        np.array([_normalized(v.source, basis[j]) for j in range(min(d, seq_len_cap))])
    )
    for t in range(trials):
        rng = np.random.default_rng([seed, t])
        draws = rng.standard_normal((seq_len_cap, d)) + 1j * rng.standard_normal(
            (seq_len_cap, d)
        )
        consider(np.array([_normalized(v.source, x) for x in draws]))
    upper = None
    if v.source.exponent == 1.0 and v.target.exponent == 2.0:
        upper = grothendieck_upper(v)
    return SummingEstimate(r=float(r), lower=best_lower, upper=upper, witness=best_witness)


def grothendieck_upper(v: LinearOperator, kg: float = COMPLEX_GROTHENDIECK_UPPER) -> float:
    """K_G * ||v|| for v from an ell_1 model to a Hilbert model.

    Valid as an upper bound for the rho-summing norm of v for every
    rho >= 1; the constant is configurable.
    """
    if v.source.exponent != 1.0 or v.target.exponent != 2.0:
        raise ValueError(
            "Grothendieck upper bound needs an ell_1 source and ell_2 target, "
            f"got exponents {v.source.exponent} -> {v.target.exponent}"
        )
    return kg * operator_norm(v).value


def _space_payload(space: AtomicFunctionSpace) -> dict:
    return {
        "atoms": space.atoms,
        "weights": [float(w) for w in space.weights],
        "exponent": space.exponent,
    }


def _space_from_payload(payload, what: str) -> AtomicFunctionSpace:
    if not isinstance(payload, dict):
        raise ValueError(f"{what} must be an object")
    for field in ("atoms", "weights", "exponent"):
        if field not in payload:
            raise ValueError(f"{what}: missing field {field!r}")
    weights = payload["weights"]
    if not isinstance(weights, list) or len(weights) != payload["atoms"]:
        raise ValueError(f"{what}: weights must list exactly {payload['atoms']} values")
    return AtomicFunctionSpace(weights, payload["exponent"])


def serialize_operator(v: LinearOperator) -> str:
    """JSON text with source, target, and the row-major [re, im] matrix."""
    payload = {
        "source": _space_payload(v.source),
        "target": _space_payload(v.target),
        "matrix": [
            [[float(entry.real), float(entry.imag)] for entry in row]
            for row in v.matrix
        ],
    }
    return json.dumps(payload, indent=2)


def parse_operator(text: str) -> LinearOperator:
    """Inverse of serialize_operator; malformed input raises with diagnostics."""
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(
            f"invalid operator JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(payload, dict):
        raise ValueError("operator file must be a JSON object")
    for field in ("source", "target", "matrix"):
        if field not in payload:
            raise ValueError(f"missing field {field!r}")
    source = _space_from_payload(payload["source"], "source")
    target = _space_from_payload(payload["target"], "target")
    rows = payload["matrix"]
    if not isinstance(rows, list) or len(rows) != target.atoms:
        raise ValueError(f"matrix must list exactly {target.atoms} rows")
    matrix = np.zeros((target.atoms, source.atoms), dtype=np.complex128)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != source.atoms:
            raise ValueError(f"matrix row {i} must list exactly {source.atoms} entries")
        for j, pair in enumerate(row):
            if not (
                isinstance(pair, list)
                and len(pair) == 2
                and all(isinstance(x, (int, float)) for x in pair)
            ):
                raise ValueError(f"matrix entry ({i}, {j}) must be a [re, im] pair")
            matrix[i, j] = complex(pair[0], pair[1])
    return LinearOperator(source, target, matrix)
