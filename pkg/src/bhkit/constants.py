"""Closed-form constants for Bohnenblust-Hille-type inequalities.

Everything here is a deterministic function of its arguments: the
hypercontractive polynomial bound, the multilinear Gamma-product
constant, the combinatorial polarization factors, the mixed bounds for
2-convex lattices and Hilbert function spaces, and the subexponential
envelope kappa(1+eps)^m.  Large products are evaluated in log space
with an exact-integer fallback for small degrees, so envelope scans up
to m = 1000 neither overflow nor lose more than a few ulps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable

__all__ = [
    "EULER_GAMMA",
    "COMPLEX_GROTHENDIECK_UPPER",
    "BoundReport",
    "EnvelopeReport",
    "log_gamma",
    "rho",
    "s_k",
    "bh_multilinear_constant",
    "hypercontractive_bound",
    "C_mk",
    "harris_factor",
    "scalar_bh_bound",
    "scalar_bh_best",
    "vector_bound_2convex",
    "hilbert_lattice_bound",
    "subexp_envelope",
    "asymptotic_multilinear_bound",
    "fit_asymptotic_kappa",
    "kahane_constant_upper",
]

EULER_GAMMA = 0.5772156649015329

# Best published upper bound for the complex Grothendieck constant,
# rounded up in the last digit so it stays a valid upper bound.
COMPLEX_GROTHENDIECK_UPPER = 1.40491

# Exact-integer combinatorics below this degree; log space above.
_EXACT_DEGREE_LIMIT = 20


@dataclass(frozen=True)
class BoundReport:
    """A named bound with its multiplicative factor breakdown.

    value is always the sequential product of the factor values, so the
    product invariant holds exactly, not merely to tolerance.
    """

    name: str
    parameters: dict
    value: float
    factors: tuple[tuple[str, float], ...]


@dataclass(frozen=True)
class EnvelopeReport:
    """Result of a subexponential-envelope scan.

    ratios[i] is scalar_bh_best(m).value / (1+eps)^m at m = i + 2.
    tail_decreasing reports whether the ratio is strictly decreasing on
    the final decade of the scan range (the trailing max(10, m_max//10)
    degrees).
    """

    eps: float
    m_max: int
    kappa: float
    m_star: int
    tail_decreasing: bool
    ratios: tuple[float, ...] = field(repr=False)


def _report(name: str, parameters: dict, factors: list[tuple[str, float]]) -> BoundReport:
    value = math.prod(v for _, v in factors)
    return BoundReport(name=name, parameters=parameters, value=value, factors=tuple(factors))


def log_gamma(x: float) -> float:
    """Natural log of Gamma(x) for x > 0."""
    if x <= 0:
        raise ValueError(f"log_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def rho(m: int, r: float, q: float = 2.0) -> float:
    """The interpolation exponent q*m*r / (q + (m-1)*r).

    Strictly increasing in m, with rho(1, r, q) = r and sup over m
    equal to q.
    """
    if m < 1:
        raise ValueError(f"need m >= 1, got {m}")
    if not 1.0 <= r < q:
        raise ValueError(f"need 1 <= r < q, got r={r}, q={q}")
    return q * m * r / (q + (m - 1) * r)


def s_k(k: int, r: float) -> float:
    """The Kahane interpolation exponent 2kr / (2 + (k-1)r) = rho(k, r, 2)."""
    return rho(k, r, 2.0)


def _bh_stage(j: int, t: float) -> tuple[float, float]:
    """Gamma argument and exponent of the j-th factor of the multilinear constant."""
    arg = 2.0 - (2.0 - t) / (j * t - 2.0 * t + 2.0)
    expo = (t * (j - 2) + 2.0) / (2.0 * t - 2.0 * j * t)
    return arg, expo


# t -> prefix sums of log factors; entry [m] is log C_{m,t}, index 0 unused.
_BH_LOG_TABLE: dict[float, list[float]] = {}


def _log_bh_multilinear(m: int, t: float) -> float:
    if m < 1:
        raise ValueError(f"need m >= 1, got {m}")
    if not 1.0 <= t < 2.0:
        raise ValueError(f"need t in [1, 2), got {t}")
    table = _BH_LOG_TABLE.get(t, [0.0, 0.0])
    if m >= len(table):
        extended = list(table)
        for j in range(len(extended), m + 1):
            arg, expo = _bh_stage(j, t)
            extended.append(extended[-1] + expo * math.lgamma(arg))
        _BH_LOG_TABLE[t] = table = extended
    return table[m]


def bh_multilinear_constant(m: int, t: float) -> float:
    """The multilinear Bohnenblust-Hille constant upper bound.

    prod_{j=2}^{m} Gamma(2 - (2-t)/(jt-2t+2)) ** ((t(j-2)+2)/(2t-2jt)),
    an empty product (= 1) at m = 1.  Nondecreasing in m.
    """
    return math.exp(_log_bh_multilinear(m, t))


def hypercontractive_bound(m: int) -> float:
    """The hypercontractive polynomial bound (1+1/m)^(m-1) * sqrt(m) * sqrt(2)^(m-1)."""
    if m < 1:
        raise ValueError(f"need m >= 1, got {m}")
    return (1.0 + 1.0 / m) ** (m - 1) * math.sqrt(m) * math.sqrt(2.0) ** (m - 1)


def _log_C_mk(m: int, k: int) -> float:
    if not 1 <= k <= m:
        raise ValueError(f"need 1 <= k <= m, got k={k}, m={m}")
    log_power = m * math.log(m)
    if k < m:
        log_power -= (m - k) * math.log(m - k)
    return log_power + 0.5 * (math.lgamma(m - k + 1) - math.lgamma(m + 1))


def C_mk(m: int, k: int) -> float:
    """The polarization constant m^m / (m-k)^(m-k) * sqrt((m-k)!/m!).

    Convention 0^0 = 1 at k = m.  Exact integer arithmetic up to degree
    20 (one correctly rounded square root), log space beyond.
    """
    if not 1 <= k <= m:
        raise ValueError(f"need 1 <= k <= m, got k={k}, m={m}")
    if m <= _EXACT_DEGREE_LIMIT:
        # C = A * sqrt(B) computed as sqrt(A^2 * B) with A, B exact rationals.
        a = Fraction(m**m, (m - k) ** (m - k))
        b = Fraction(math.factorial(m - k), math.factorial(m))
        return math.sqrt(float(a * a * b))
    return math.exp(_log_C_mk(m, k))


def harris_factor(m: int, k: int) -> float:
    """The polarization prefactor (m-k)! * m^m / ((m-k)^(m-k) * m!).

    Equals C_mk(m, k) * sqrt((m-k)!/m!); convention 0^0 = 1 at k = m.
    """
    if not 1 <= k <= m:
        raise ValueError(f"need 1 <= k <= m, got k={k}, m={m}")
    if m <= _EXACT_DEGREE_LIMIT:
        exact = Fraction(math.factorial(m - k) * m**m, (m - k) ** (m - k) * math.factorial(m))
        return float(exact)
    log_value = m * math.log(m) - (m - k) * math.log(m - k) if k < m else m * math.log(m)
    return math.exp(log_value + math.lgamma(m - k + 1) - math.lgamma(m + 1))


def _prefactor(m: int, k: int, r: float) -> float:
    """(2/s_k)^((m-k)/2), the hypercontractive prefactor of the split bounds."""
    return (2.0 / s_k(k, r)) ** ((m - k) / 2.0)


def _log_scalar_bh(m: int, k: int) -> float:
    return (
        (m - k) / 2.0 * math.log(2.0 / s_k(k, 1.0))
        + _log_C_mk(m, k)
        + _log_bh_multilinear(k, 1.0)
    )


def scalar_bh_bound(m: int, k: int) -> BoundReport:
    """The scalar polynomial bound (1+1/k)^((m-k)/2) * C_mk(m,k) * C_k.

    C_k is the k-linear constant bh_multilinear_constant(k, 1), and the
    prefactor equals (2/s_k)^((m-k)/2) at r = 1.
    """
    if m < 2 or not 1 <= k <= m - 1:
        raise ValueError(f"need m >= 2 and 1 <= k <= m-1, got m={m}, k={k}")
    factors = [
        ("prefactor", _prefactor(m, k, 1.0)),
        ("C_mk", C_mk(m, k)),
        ("C_k", bh_multilinear_constant(k, 1.0)),
    ]
    return _report("scalar_bh", {"m": m, "k": k}, factors)


@lru_cache(maxsize=None)
def _best_split(m: int) -> tuple[int, float]:
    """(k*, log value) minimizing the scalar bound over k in [1, m-1]."""
    best_k, best_log = 1, _log_scalar_bh(m, 1)
    for k in range(2, m):
        log_value = _log_scalar_bh(m, k)
        if log_value < best_log:
            best_k, best_log = k, log_value
    return best_k, best_log


def scalar_bh_best(m: int) -> tuple[int, BoundReport]:
    """The best scalar bound over all splits, ties broken toward smaller k."""
    if m < 2:
        raise ValueError(f"need m >= 2, got {m}")
    k_star, _ = _best_split(m)
    return k_star, scalar_bh_bound(m, k_star)


def vector_bound_2convex(
    m: int,
    k: int,
    r: float,
    M2: float,
    C2X: float,
    kahane: Callable[[float], float],
    pi_r1: float,
) -> BoundReport:
    """The split bound for 2-convex lattice targets.

    (2/s_k)^((m-k)/2) * C2X^(k-1) * prod_{j=1}^{k-1} K(s_j) * C_mk(m,k)
    * M2 * pi_r1, where s_j = 2jr/(2+(j-1)r) and K is the supplied
    Kahane provider.  With M2 = C2X = pi_r1 = 1 and the provider chosen
    as the multilinear stage ratio, this reproduces scalar_bh_bound.
    """
    if not 1 <= k <= m:
        raise ValueError(f"need 1 <= k <= m, got k={k}, m={m}")
    if not 1.0 <= r < 2.0:
        raise ValueError(f"need r in [1, 2), got {r}")
    if M2 < 1.0 or C2X < 1.0:
        raise ValueError(f"need M2 >= 1 and C2X >= 1, got M2={M2}, C2X={C2X}")
    if pi_r1 <= 0.0:
        raise ValueError(f"need pi_r1 > 0, got {pi_r1}")
    factors = [
        ("prefactor", _prefactor(m, k, r)),
        ("C2X_power", C2X ** (k - 1)),
    ]
    for j in range(1, k):
        factors.append((f"K(s_{j})", kahane(s_k(j, r))))
    factors.extend(
        [
            ("C_mk", C_mk(m, k)),
            ("M2", M2),
            ("pi_r1", pi_r1),
        ]
    )
    parameters = {"m": m, "k": k, "r": r, "M2": M2, "C2X": C2X, "pi_r1": pi_r1}
    return _report("vector_2convex", parameters, factors)


def hilbert_lattice_bound(m: int, k: int, r: float) -> BoundReport:
    """The split bound for Hilbert function space targets, summing factor excluded.

    (2/s_k)^((m-k)/2) * C_mk(m,k) * bh_multilinear_constant(k, r).  The
    caller supplies the absolutely summing factor pi(v); its index is
    recorded as summing_exponent = 2r(m-1)/(2+(m-2)r).  A second
    convention, 2rm/(2+(m-1)r) = rho(m, r, 2), circulates for the
    m-linear version; it disagrees for m >= 2 and is surfaced as
    summing_exponent_alt rather than silently merged.
    """
    if not 1 <= k <= m:
        raise ValueError(f"need 1 <= k <= m, got k={k}, m={m}")
    if not 1.0 <= r < 2.0:
        raise ValueError(f"need r in [1, 2), got {r}")
    factors = [
        ("prefactor", _prefactor(m, k, r)),
        ("C_mk", C_mk(m, k)),
        ("C_kr", bh_multilinear_constant(k, r)),
    ]
    parameters = {
        "m": m,
        "k": k,
        "r": r,
        "summing_exponent": 2.0 * r * (m - 1) / (2.0 + (m - 2) * r),
        "summing_exponent_alt": rho(m, r, 2.0),
    }
    return _report("hilbert_lattice", parameters, factors)


def subexp_envelope(eps: float, m_max: int) -> EnvelopeReport:
    """Scan the envelope kappa = max_m scalar_bh_best(m).value / (1+eps)^m.

    Ratios are formed in log space so large eps or deep scans cannot
    overflow; ties in the argmax go to the smaller m.
    """
    if eps <= 0.0:
        raise ValueError(f"need eps > 0, got {eps}")
    if m_max < 2:
        raise ValueError(f"need m_max >= 2, got {m_max}")
    log_growth = math.log1p(eps)
    log_ratios = [_best_split(m)[1] - m * log_growth for m in range(2, m_max + 1)]
    m_star = 2 + max(range(len(log_ratios)), key=lambda i: (log_ratios[i], -i))
    window = max(10, m_max // 10)
    tail = log_ratios[-window:]
    tail_decreasing = all(b < a for a, b in zip(tail, tail[1:]))
    return EnvelopeReport(
        eps=eps,
        m_max=m_max,
        kappa=math.exp(log_ratios[m_star - 2]),
        m_star=m_star,
        tail_decreasing=tail_decreasing,
        ratios=tuple(math.exp(v) for v in log_ratios),
    )


def asymptotic_multilinear_bound(m: int, t: float, kappa_t: float) -> float:
    """The asymptotic envelope kappa_t * m^((gamma-1)(t-2)/(2t)).

    The exponent is positive for t < 2; kappa_t is caller-supplied.
    """
    if m < 1:
        raise ValueError(f"need m >= 1, got {m}")
    if not 1.0 <= t < 2.0:
        raise ValueError(f"need t in [1, 2), got {t}")
    if kappa_t <= 0.0:
        raise ValueError(f"need kappa_t > 0, got {kappa_t}")
    exponent = (EULER_GAMMA - 1.0) * (t - 2.0) / (2.0 * t)
    return kappa_t * m**exponent


def fit_asymptotic_kappa(t: float, m_max: int) -> float:
    """Least kappa_t making the asymptotic bound dominate the multilinear constant.

    kappa_t = max over 1 <= m <= m_max of bh_multilinear_constant(m, t)
    divided by m^((gamma-1)(t-2)/(2t)).
    """
    if m_max < 1:
        raise ValueError(f"need m_max >= 1, got {m_max}")
    exponent = (EULER_GAMMA - 1.0) * (t - 2.0) / (2.0 * t)
    return max(
        math.exp(_log_bh_multilinear(m, t) - exponent * math.log(m))
        for m in range(1, m_max + 1)
    )


def kahane_constant_upper(p: float) -> float:
    """Default Kahane constant provider: K_{p,2} <= sqrt(2) on [1, 2), 1 at p = 2.

    The L^p mean of a random polynomial sits between the L^1 and L^2
    means for p in [1, 2], so the p = 1 bound sqrt(2) covers the whole
    range; sharper tables can be injected wherever a provider callable
    is accepted.
    """
    if not 1.0 <= p <= 2.0:
        raise ValueError(f"need p in [1, 2], got {p}")
    if p == 2.0:
        return 1.0
    return math.sqrt(2.0)
