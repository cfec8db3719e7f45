"""m-homogeneous polynomials on C^n with scalar or vector coefficients.

Coefficients are stored densely in the lexicographic J(m, n) order from
the combinatorics module; serialization is sparse (zero coefficients
omitted).  The symmetric m-linear form associated to a polynomial keeps
its values on J(m, n) and extends to all of M(m, n) by symmetry.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels
from .combinatorics import (
    IndexTuple,
    SubsetPair,
    alpha_of,
    enumerate_J,
    multiplicity,
)

__all__ = [
    "HomogeneousPolynomial",
    "SymmetricForm",
    "exponent_matrix",
    "evaluate",
    "evaluate_batch",
    "polarize",
    "depolarize",
    "evaluate_form",
    "full_tensor",
    "partial_apply",
    "random_polynomial",
    "serialize",
    "parse",
]

# Full multilinear expansion is O(n^m); reject anything bigger.
_EXPANSION_GUARD = 10**7

_LAWS = ("steinhaus", "gaussian", "unimodular-sparse")


@lru_cache(maxsize=None)
def exponent_matrix(m: int, n: int) -> np.ndarray:
    """The (K, n) int64 matrix of exponent vectors in J(m, n) order."""
    rows = [alpha_of(i).exponents for i in enumerate_J(m, n)]
    out = np.array(rows, dtype=np.int64)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def _multiplicities(m: int, n: int) -> np.ndarray:
    out = np.array([multiplicity(i) for i in enumerate_J(m, n)], dtype=np.float64)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def _tuple_keys(m: int, n: int) -> np.ndarray:
    """Canonical tuples of J(m, n) encoded as base-n integers, ascending."""
    radix = n ** np.arange(m - 1, -1, -1, dtype=np.int64)
    entries = np.array([i.entries for i in enumerate_J(m, n)], dtype=np.int64) - 1
    out = entries @ radix
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def _position_index(m: int, n: int) -> dict[tuple[int, ...], int]:
    """Exponent vector -> row position in J(m, n) order."""
    return {alpha_of(i).exponents: pos for pos, i in enumerate(enumerate_J(m, n))}


def _frozen_coefficients(coefficients, K: int, coeff_dim: int, what: str) -> np.ndarray:
    out = np.array(coefficients, dtype=np.complex128)
    if out.shape != (K, coeff_dim):
        raise ValueError(f"{what} must have shape ({K}, {coeff_dim}), got {out.shape}")
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class HomogeneousPolynomial:
    """P(z) = sum_{|alpha| = m} c_alpha z^alpha with c_alpha in C^coeff_dim.

    coefficients has shape (K, coeff_dim) with K = binomial(n+m-1, m),
    rows in enumerate_J(m, n) order.  Immutable after construction.
    """

    n: int
    m: int
    coeff_dim: int
    coefficients: np.ndarray

    def __post_init__(self) -> None:
        if self.n < 1 or self.m < 1 or self.coeff_dim < 1:
            raise ValueError(
                f"need n, m, coeff_dim >= 1, got n={self.n}, m={self.m}, "
                f"coeff_dim={self.coeff_dim}"
            )
        K = math.comb(self.n + self.m - 1, self.m)
        object.__setattr__(
            self,
            "coefficients",
            _frozen_coefficients(self.coefficients, K, self.coeff_dim, "coefficients"),
        )

    @property
    def K(self) -> int:
        return self.coefficients.shape[0]

    @property
    def exponents(self) -> np.ndarray:
        return exponent_matrix(self.m, self.n)


@dataclass(frozen=True)
class SymmetricForm:
    """The symmetric m-linear form a_i on J(m, n), extended by symmetry.

    For the associated polynomial, a_i = c_alpha(i) / multiplicity(i).
    """

    n: int
    m: int
    coeff_dim: int
    values: np.ndarray

    def __post_init__(self) -> None:
        if self.n < 1 or self.m < 1 or self.coeff_dim < 1:
            raise ValueError(
                f"need n, m, coeff_dim >= 1, got n={self.n}, m={self.m}, "
                f"coeff_dim={self.coeff_dim}"
            )
        K = math.comb(self.n + self.m - 1, self.m)
        object.__setattr__(
            self, "values", _frozen_coefficients(self.values, K, self.coeff_dim, "values")
        )


def _as_point(z, n: int) -> np.ndarray:
    out = np.asarray(z, dtype=np.complex128)
    if out.shape != (n,):
        raise ValueError(f"point must have shape ({n},), got {out.shape}")
    return out


def evaluate(P: HomogeneousPolynomial, z) -> np.ndarray:
    """P(z) as a complex vector of length coeff_dim."""
    point = _as_point(z, P.n)
    return kernels.eval_poly_batch(P.exponents, P.coefficients, point[None, :])[0]


def evaluate_batch(P: HomogeneousPolynomial, points) -> np.ndarray:
    """P at each row of points; returns (S, coeff_dim) complex."""
    pts = np.asarray(points, dtype=np.complex128)
    if pts.ndim != 2 or pts.shape[1] != P.n:
        raise ValueError(f"points must have shape (S, {P.n}), got {pts.shape}")
    return kernels.eval_poly_batch(P.exponents, P.coefficients, pts)


def polarize(P: HomogeneousPolynomial) -> SymmetricForm:
    """The unique symmetric form with a_i = c_alpha(i) / multiplicity(i)."""
    mults = _multiplicities(P.m, P.n)
    return SymmetricForm(P.n, P.m, P.coeff_dim, P.coefficients / mults[:, None])


def depolarize(L: SymmetricForm) -> HomogeneousPolynomial:
    """The polynomial with c_alpha(i) = multiplicity(i) * a_i."""
    mults = _multiplicities(L.m, L.n)
    return HomogeneousPolynomial(L.n, L.m, L.coeff_dim, L.values * mults[:, None])


def evaluate_form(L: SymmetricForm, ws) -> np.ndarray:
    """L(w_1, ..., w_m) by full expansion over M(m, n).

    Cost is n^m terms; inputs with n^m > 10^7 are rejected.  Symmetric
    in the arguments and equal to evaluate(depolarize(L), z) on the
    diagonal.
    """
    if len(ws) != L.m:
        raise ValueError(f"need exactly {L.m} argument vectors, got {len(ws)}")
    W = np.stack([_as_point(w, L.n) for w in ws])
    total_terms = L.n**L.m
    if total_terms > _EXPANSION_GUARD:
        raise ValueError(
            f"full expansion needs n^m = {total_terms} terms, above the "
            f"{_EXPANSION_GUARD} guard"
        )
    radix = np.int64(L.n) ** np.arange(L.m - 1, -1, -1, dtype=np.int64)
    jkeys = _tuple_keys(L.m, L.n)
    total = np.zeros(L.coeff_dim, dtype=np.complex128)
    chunk = 1 << 20
    for start in range(0, total_terms, chunk):
        linear = np.arange(start, min(start + chunk, total_terms), dtype=np.int64)
        digits = (linear[:, None] // radix[None, :]) % L.n
        products = np.prod(W[np.arange(L.m)[None, :], digits], axis=1)
        keys = np.sort(digits, axis=1) @ radix
        positions = np.searchsorted(jkeys, keys)
        total += products @ L.values[positions]
    return total


def full_tensor(L: SymmetricForm) -> np.ndarray:
    """The scalar form as a dense (n,)*m tensor over all of M(m, n).

    tensor[i_1-1, ..., i_m-1] = a_i, extended by symmetry; scalar forms
    only, and the n^m > 10^7 guard applies.
    """
    if L.coeff_dim != 1:
        raise ValueError("full tensor expansion is for scalar forms only")
    total_terms = L.n**L.m
    if total_terms > _EXPANSION_GUARD:
        raise ValueError(
            f"full tensor needs n^m = {total_terms} entries, above the "
            f"{_EXPANSION_GUARD} guard"
        )
    radix = np.int64(L.n) ** np.arange(L.m - 1, -1, -1, dtype=np.int64)
    jkeys = _tuple_keys(L.m, L.n)
    linear = np.arange(total_terms, dtype=np.int64)
    digits = (linear[:, None] // radix[None, :]) % L.n
    keys = np.sort(digits, axis=1) @ radix
    positions = np.searchsorted(jkeys, keys)
    return L.values[positions, 0].reshape((L.n,) * L.m)


def partial_apply(L: SymmetricForm, pair: SubsetPair, fixed) -> SymmetricForm:
    """Substitute the fixed vector into every complement coordinate of L.

    Returns the k-linear symmetric form w -> L(w at S, fixed at the
    complement); by symmetry only k = |S| matters.
    """
    if pair.m != L.m:
        raise ValueError(f"subset universe {pair.m} does not match degree {L.m}")
    if pair.k < 1:
        raise ValueError("need a nonempty subset S")
    z = _as_point(fixed, L.n)
    k = pair.k
    if k == L.m:
        return SymmetricForm(L.n, L.m, L.coeff_dim, L.values)
    tail_classes = enumerate_J(L.m - k, L.n)
    head_classes = enumerate_J(k, L.n)
    if len(tail_classes) * len(head_classes) > _EXPANSION_GUARD:
        raise ValueError("partial application above the complexity guard")
    position = _position_index(L.m, L.n)
    tails = []
    for u in tail_classes:
        alpha_u = alpha_of(u).exponents
        weight = multiplicity(u) * math.prod(
            z[c] ** e for c, e in enumerate(alpha_u) if e
        )
        tails.append((alpha_u, weight))
    out = np.zeros((len(head_classes), L.coeff_dim), dtype=np.complex128)
    for row, j in enumerate(head_classes):
        alpha_j = alpha_of(j).exponents
        for alpha_u, weight in tails:
            merged = tuple(a + b for a, b in zip(alpha_j, alpha_u))
            out[row] += weight * L.values[position[merged]]
    return SymmetricForm(L.n, k, L.coeff_dim, out)


def random_polynomial(
    n: int, m: int, coeff_dim: int, law: str, seed: int | list[int]
) -> HomogeneousPolynomial:
    """A random polynomial, deterministic for a fixed seed.

    steinhaus: independent uniform-phase unit-modulus entries.
    gaussian: standard complex normal entries, E|c|^2 = 1.
    unimodular-sparse: coefficients kept with probability 1/2 (first
    one kept if the draw empties the polynomial), entries uniform
    fourth roots of unity.
    """
    if law not in _LAWS:
        raise ValueError(f"unknown law {law!r}, expected one of {_LAWS}")
    K = math.comb(n + m - 1, m)
    rng = np.random.default_rng(seed)
    if law == "steinhaus":
        coeffs = np.exp(2j * np.pi * rng.random((K, coeff_dim)))
    elif law == "gaussian":
        coeffs = (
            rng.standard_normal((K, coeff_dim)) + 1j * rng.standard_normal((K, coeff_dim))
        ) / np.sqrt(2.0)
    else:
        roots = np.array([1.0, 1.0j, -1.0, -1.0j])
        coeffs = roots[rng.integers(0, 4, size=(K, coeff_dim))]
        keep = rng.random(K) < 0.5
        if not keep.any():
            keep[0] = True
        coeffs = coeffs * keep[:, None]
    return HomogeneousPolynomial(n, m, coeff_dim, coeffs)


def serialize(P: HomogeneousPolynomial) -> str:
    """JSON text with zero coefficients omitted; exact round trip."""
    entries = []
    expo = P.exponents
    for row in range(P.K):
        value = P.coefficients[row]
        if not value.any():
            continue
        entries.append(
            {
                "alpha": [int(e) for e in expo[row]],
                "value": [[float(v.real), float(v.imag)] for v in value],
            }
        )
    payload = {"n": P.n, "m": P.m, "coeff_dim": P.coeff_dim, "coefficients": entries}
    return json.dumps(payload, indent=2)


def parse(text: str) -> HomogeneousPolynomial:
    """Inverse of serialize; malformed input raises with position diagnostics."""
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(
            f"invalid polynomial JSON at line {exc.lineno}, column {exc.colno}: "
            f"{exc.msg}"
        ) from exc
    if not isinstance(payload, dict):
        raise ValueError("polynomial file must be a JSON object")
    for field in ("n", "m", "coeff_dim", "coefficients"):
        if field not in payload:
            raise ValueError(f"missing field {field!r}")
    n, m, coeff_dim = payload["n"], payload["m"], payload["coeff_dim"]
    for name, value in (("n", n), ("m", m), ("coeff_dim", coeff_dim)):
        if not isinstance(value, int) or value < 1:
            raise ValueError(f"field {name!r} must be a positive integer, got {value!r}")
    position = _position_index(m, n)
    K = math.comb(n + m - 1, m)
    coeffs = np.zeros((K, coeff_dim), dtype=np.complex128)
    seen: set[int] = set()
    for idx, entry in enumerate(payload["coefficients"]):
        where = f"coefficient entry {idx}"
        if not isinstance(entry, dict) or "alpha" not in entry or "value" not in entry:
            raise ValueError(f"{where}: expected an object with alpha and value")
        alpha = entry["alpha"]
        if (
            not isinstance(alpha, list)
            or len(alpha) != n
            or not all(isinstance(a, int) and a >= 0 for a in alpha)
        ):
            raise ValueError(
                f"{where}: alpha must be a list of {n} nonnegative integers, "
                f"got {alpha!r}"
            )
        if sum(alpha) != m:
            raise ValueError(f"{where}: |alpha| = {sum(alpha)} does not match m = {m}")
        row = position[tuple(alpha)]
        if row in seen:
            raise ValueError(f"{where}: duplicate alpha {alpha!r}")
        seen.add(row)
        value = entry["value"]
        if not isinstance(value, list) or len(value) != coeff_dim:
            raise ValueError(f"{where}: value must list {coeff_dim} complex pairs")
        for c, pair in enumerate(value):
            if not (
                isinstance(pair, list)
                and len(pair) == 2
                and all(isinstance(x, (int, float)) for x in pair)
            ):
                raise ValueError(f"{where}: value[{c}] must be a [re, im] pair")
            coeffs[row, c] = complex(pair[0], pair[1])
    return HomogeneousPolynomial(n, m, coeff_dim, coeffs)
