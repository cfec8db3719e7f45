"""Inequality checks: equality cases, random passes, declines, reports."""

import csv
import io
import json
import math

import numpy as np
import pytest

from bhkit.constants import (
    bh_multilinear_constant,
    hilbert_lattice_bound,
    rho,
    scalar_bh_best,
    scalar_bh_bound,
)
from bhkit.norms import coeff_lp_norm, supnorm_upper
from bhkit.polynomials import (
    HomogeneousPolynomial,
    SymmetricForm,
    full_tensor,
    polarize,
    random_polynomial,
)
from bhkit.spaces import AtomicFunctionSpace, LinearOperator
from bhkit.verification import (
    EXACT_RTOL,
    CheckDeclined,
    check_blei,
    check_coeff_lemma,
    check_hilbert_lattice,
    check_hypercontractive,
    check_multilinear_gt,
    check_scalar_bh,
    check_vector_bh,
    kahane_empirical,
    lower_bound_search,
    report_to_json,
    reports_to_csv,
)


def _scalar_poly(n, m, coeffs):
    return HomogeneousPolynomial(n, m, 1, np.asarray(coeffs, dtype=np.complex128)[:, None])


def _ell(q, d, weights=None):
    return AtomicFunctionSpace(np.ones(d) if weights is None else weights, q)


def _dense_tensor(m, n, seed):
    return full_tensor(polarize(random_polynomial(n, m, 1, "gaussian", seed)))


_SCALAR_IDENTITY = LinearOperator(_ell(1.0, 1), _ell(2.0, 1), np.array([[1.0]]))


# report plumbing


def test_report_fields_and_json_shape():
    report = check_blei(_dense_tensor(2, 2, 0), k=1, s=1.0, q=2.0)
    assert report.margin == report.rhs - report.lhs
    payload = json.loads(report_to_json(report))
    assert set(payload) == {
        "check_name",
        "parameters",
        "lhs",
        "rhs",
        "margin",
        "pass",
        "diagnostics",
    }
    assert payload["pass"] is True
    assert payload["parameters"]["m"] == 2


def test_reports_to_csv_columns():
    reports = [check_blei(_dense_tensor(2, 2, s), k=1, s=1.0, q=2.0) for s in range(3)]
    rows = list(csv.reader(io.StringIO(reports_to_csv(reports))))
    assert rows[0] == [
        "check_name",
        "parameters",
        "lhs",
        "rhs",
        "margin",
        "pass",
        "diagnostics",
    ]
    assert len(rows) == 4
    assert json.loads(rows[1][1])["k"] == 1
    assert rows[1][5] == "True"


# Blei mixed-norm interpolation


def test_blei_collapses_to_equality_when_s_equals_q():
    report = check_blei(_dense_tensor(3, 2, 1), k=2, s=2.0, q=2.0)
    assert report.passed
    assert report.lhs == pytest.approx(report.rhs, rel=1e-12)


def test_blei_full_subset_is_equality():
    report = check_blei(_dense_tensor(2, 3, 2), k=2, s=1.5, q=2.0)
    assert report.passed
    assert report.lhs == pytest.approx(report.rhs, rel=1e-12)


@pytest.mark.parametrize("m,n", [(2, 2), (2, 3), (3, 2)])
@pytest.mark.parametrize("s,q", [(1.0, 2.0), (4.0 / 3.0, 2.0), (1.5, 3.0)])
def test_blei_holds_on_random_tensors(m, n, s, q):
    for seed in range(5):
        report = check_blei(_dense_tensor(m, n, seed), k=1, s=s, q=q)
        assert report.passed
        assert report.margin >= -EXACT_RTOL * max(report.rhs, 1.0)


def test_blei_zero_tensor_passes():
    report = check_blei(np.zeros((2, 2)), k=1, s=1.0, q=2.0)
    assert report.passed
    assert report.lhs == report.rhs == 0.0


def test_blei_validation():
    a = _dense_tensor(2, 2, 0)
    with pytest.raises(ValueError, match="k"):
        check_blei(a, k=3, s=1.0, q=2.0)
    with pytest.raises(ValueError, match="s <= q"):
        check_blei(a, k=1, s=3.0, q=2.0)


# scalar coefficient bound


def test_scalar_bh_on_z1_z2():
    P = _scalar_poly(2, 2, [0.0, 1.0, 0.0])
    report = check_scalar_bh(P, k=1)
    assert report.passed
    assert report.lhs == pytest.approx(1.0, rel=1e-12)
    assert report.diagnostics["constant"] == scalar_bh_bound(2, 1).value
    assert report.margin > 0.0


def test_scalar_bh_degree_one_equality():
    P = HomogeneousPolynomial(
        3, 1, 1, np.array([[1.0 + 1.0j], [-2.0], [0.5j]], dtype=np.complex128)
    )
    report = check_scalar_bh(P)
    assert report.passed
    assert report.parameters["k"] is None
    assert report.diagnostics["constant"] == 1.0
    assert report.lhs == pytest.approx(report.diagnostics["sup_upper"], rel=1e-9)
    assert report.diagnostics["enclosure_width"] < 1e-6 * report.lhs


@pytest.mark.parametrize("m,n,k", [(2, 2, 1), (3, 2, 1), (3, 3, 2), (4, 2, 3)])
def test_scalar_bh_holds_on_steinhaus_polynomials(m, n, k):
    P = random_polynomial(n, m, 1, "steinhaus", 100 + m + n)
    report = check_scalar_bh(P, k=k)
    assert report.passed


def test_scalar_bh_validation():
    P = random_polynomial(2, 2, 1, "gaussian", 0)
    with pytest.raises(ValueError, match="k"):
        check_scalar_bh(P)
    with pytest.raises(ValueError, match="k"):
        check_scalar_bh(P, k=2)
    vector = random_polynomial(2, 2, 2, "gaussian", 0)
    with pytest.raises(ValueError, match="scalar"):
        check_scalar_bh(vector, k=1)


# hypercontractive comparison


def test_hypercontractive_single_variable_monomial_is_flat():
    # |c z^m| is constant on the torus, so L^q = L^p exactly.
    P = _scalar_poly(1, 3, [2.0j])
    report = check_hypercontractive(P, p=1.0, q=2.0, samples=100, seed=0)
    assert report.passed
    assert report.diagnostics["lhs_exact"] is True
    assert report.lhs == pytest.approx(2.0, rel=1e-12)
    est_p = report.rhs / report.diagnostics["constant"]
    assert est_p == pytest.approx(2.0, rel=1e-12)


@pytest.mark.parametrize("p,q", [(1.0, 2.0), (2.0, 4.0)])
def test_hypercontractive_holds_on_random_polynomials(p, q):
    for seed in range(4):
        P = random_polynomial(2, 2, 1, "gaussian", 200 + seed)
        report = check_hypercontractive(P, p=p, q=q, samples=4000, seed=seed)
        assert report.passed
        assert report.diagnostics["rhs_exact"] is (p == 2.0)


def test_hypercontractive_validation():
    P = random_polynomial(2, 2, 1, "gaussian", 0)
    with pytest.raises(ValueError, match="p < q"):
        check_hypercontractive(P, p=2.0, q=2.0, samples=10, seed=0)
    vector = random_polynomial(2, 2, 2, "gaussian", 0)
    with pytest.raises(ValueError, match="scalar"):
        check_hypercontractive(vector, p=1.0, q=2.0, samples=10, seed=0)


# coefficient lemma


def test_coeff_lemma_exact_case_is_parseval_equality():
    P = random_polynomial(2, 2, 3, "gaussian", 9)
    X = _ell(2.0, 3)
    report = check_coeff_lemma(P, X, p=2.0, q=2.0, samples=10, seed=0)
    assert report.passed
    assert report.diagnostics["rhs_exact"] is True
    assert report.lhs == pytest.approx(report.rhs, rel=1e-12)


def test_coeff_lemma_monte_carlo_case():
    P = random_polynomial(2, 2, 2, "steinhaus", 10)
    X = AtomicFunctionSpace([1.0, 0.5], 2.0)
    report = check_coeff_lemma(P, X, p=1.0, q=2.0, samples=4000, seed=1)
    assert report.passed
    assert report.diagnostics["sigma"] > 0.0


def test_coeff_lemma_validation():
    P = random_polynomial(2, 2, 2, "gaussian", 0)
    with pytest.raises(ValueError, match="1 <= p <= 2 <= q"):
        check_coeff_lemma(P, _ell(2.0, 2), p=3.0, q=2.0, samples=10, seed=0)
    with pytest.raises(ValueError, match="exponent"):
        check_coeff_lemma(P, _ell(2.0, 2), p=1.0, q=3.0, samples=10, seed=0)


# vector-valued coefficient bound


def test_vector_bh_scalar_recovery_uses_scalar_constant():
    P = random_polynomial(2, 3, 1, "steinhaus", 11)
    report = check_vector_bh(P, _SCALAR_IDENTITY, r=1.0, k=1, pi_upper=1.0)
    assert report.passed
    assert report.diagnostics["scalar_recovery"] is True
    assert report.diagnostics["constant"] == scalar_bh_bound(3, 1).value
    assert report.diagnostics["pi_source"] == "supplied"


def test_vector_bh_grothendieck_route():
    P = random_polynomial(2, 2, 3, "gaussian", 12)
    v = LinearOperator(
        _ell(1.0, 3),
        _ell(2.0, 2),
        np.array([[1.0, 0.5, 0.0], [0.0, 0.5j, 1.0]]),
    )
    report = check_vector_bh(P, v, r=1.0, k=1)
    assert report.passed
    assert report.diagnostics["pi_source"] == "grothendieck"
    assert report.diagnostics["scalar_recovery"] is False
    factors = report.diagnostics["factors"]
    assert math.prod(value for _, value in factors) == report.diagnostics["constant"]


def test_vector_bh_zero_polynomial_is_degenerate_pass():
    K = math.comb(2 + 2 - 1, 2)
    P = HomogeneousPolynomial(2, 2, 2, np.zeros((K, 2), dtype=np.complex128))
    v = LinearOperator(_ell(1.0, 2), _ell(2.0, 2), np.eye(2))
    report = check_vector_bh(P, v, r=1.5, k=2)
    assert report.passed
    assert report.lhs == 0.0
    assert report.rhs == 0.0


def test_vector_bh_declines_without_summing_bound():
    P = random_polynomial(2, 2, 2, "gaussian", 14)
    v = LinearOperator(_ell(2.0, 2), _ell(2.0, 2), np.eye(2))
    with pytest.raises(CheckDeclined, match="summing"):
        check_vector_bh(P, v, r=1.0, k=1)
    report = check_vector_bh(P, v, r=1.0, k=1, pi_upper=2.0)
    assert report.passed


def test_vector_bh_validation():
    P = random_polynomial(2, 2, 2, "gaussian", 15)
    v = LinearOperator(_ell(1.0, 2), _ell(2.0, 2), np.eye(2))
    with pytest.raises(ValueError, match="k"):
        check_vector_bh(P, v, r=1.0, k=3)
    with pytest.raises(ValueError, match="r in"):
        check_vector_bh(P, v, r=2.0, k=1)
    bad_target = LinearOperator(_ell(1.0, 2), _ell(1.0, 2), np.eye(2))
    with pytest.raises(ValueError, match="q = 2"):
        check_vector_bh(P, bad_target, r=1.0, k=1)
    narrow = LinearOperator(_ell(1.0, 3), _ell(2.0, 2), np.zeros((2, 3)))
    with pytest.raises(ValueError, match="atoms"):
        check_vector_bh(P, narrow, r=1.0, k=1)


# multilinear summability


def test_multilinear_gt_zero_form_passes():
    K = math.comb(2 + 2 - 1, 2)
    T = SymmetricForm(2, 2, 1, np.zeros((K, 1), dtype=np.complex128))
    report = check_multilinear_gt(T, _SCALAR_IDENTITY, r=1.0)
    assert report.passed
    assert report.lhs == 0.0


def test_multilinear_gt_basis_functional():
    # T(z) = z_1 with the identity into the Hilbert model: lhs = 1 and
    # rhs = K_G, so the margin is the Grothendieck constant gap.
    T = polarize(_scalar_poly(2, 1, [1.0, 0.0]))
    report = check_multilinear_gt(T, _SCALAR_IDENTITY, r=1.0)
    assert report.passed
    assert report.lhs == pytest.approx(1.0, rel=1e-12)
    assert report.diagnostics["constant"] == 1.0
    assert report.diagnostics["arg_grid"] > 0


def test_multilinear_gt_skips_uneconomic_grids():
    T = polarize(random_polynomial(2, 2, 1, "gaussian", 16))
    report = check_multilinear_gt(T, _SCALAR_IDENTITY, r=1.0)
    assert report.passed
    # G <= 8 on a 2x2 argument grid cannot beat the coefficient sum.
    assert report.diagnostics["arg_grid"] == 0
    assert report.diagnostics["form_norm_upper"] == report.diagnostics["coeff_sum_bound"]


def test_multilinear_gt_records_both_exponent_conventions():
    T = polarize(random_polynomial(2, 3, 2, "gaussian", 17))
    v = LinearOperator(_ell(1.0, 2), _ell(2.0, 2), np.eye(2))
    report = check_multilinear_gt(T, v, r=1.5)
    assert report.passed
    m, r = 3, 1.5
    assert report.diagnostics["summing_exponent"] == rho(m, r, 2.0)
    assert report.diagnostics["summing_exponent_alt"] == pytest.approx(
        2.0 * r * (m - 1) / (2.0 + (m - 2) * r)
    )
    assert report.diagnostics["exponent_warning"] is True
    assert report.diagnostics["constant"] == bh_multilinear_constant(m, r)


def test_multilinear_gt_declines_off_grothendieck_shapes():
    T = polarize(random_polynomial(2, 2, 2, "gaussian", 18))
    v = LinearOperator(_ell(2.0, 2), _ell(2.0, 2), np.eye(2))
    with pytest.raises(CheckDeclined, match="ell_1"):
        check_multilinear_gt(T, v, r=1.0)


def test_multilinear_gt_validation():
    T = polarize(random_polynomial(2, 2, 1, "gaussian", 19))
    with pytest.raises(ValueError, match="r in"):
        check_multilinear_gt(T, _SCALAR_IDENTITY, r=0.5)
    v = LinearOperator(_ell(1.0, 3), _ell(2.0, 2), np.zeros((2, 3)))
    with pytest.raises(ValueError, match="atoms"):
        check_multilinear_gt(T, v, r=1.0)


# Hilbert lattice split bound


@pytest.mark.parametrize("k", [1, 2, 3])
def test_hilbert_lattice_holds_on_random_instances(k):
    P = random_polynomial(2, 3, 2, "steinhaus", 20 + k)
    v = LinearOperator(_ell(1.0, 2), _ell(2.0, 2), np.eye(2) / 2.0)
    report = check_hilbert_lattice(P, v, r=1.0, k=k)
    assert report.passed
    bound = hilbert_lattice_bound(3, k, 1.0)
    assert report.diagnostics["constant"] == bound.value
    assert report.diagnostics["summing_exponent"] == bound.parameters["summing_exponent"]
    assert (
        report.diagnostics["summing_exponent_alt"]
        == bound.parameters["summing_exponent_alt"]
    )


def test_hilbert_lattice_declines_off_grothendieck_shapes():
    P = random_polynomial(2, 2, 2, "gaussian", 24)
    v = LinearOperator(_ell(2.0, 2), _ell(2.0, 2), np.eye(2))
    with pytest.raises(CheckDeclined, match="ell_1"):
        check_hilbert_lattice(P, v, r=1.0, k=1)


def test_hilbert_lattice_validation():
    P = random_polynomial(2, 2, 2, "gaussian", 25)
    v = LinearOperator(_ell(1.0, 2), _ell(2.0, 2), np.eye(2))
    with pytest.raises(ValueError, match="k"):
        check_hilbert_lattice(P, v, r=1.0, k=0)
    with pytest.raises(ValueError, match="r in"):
        check_hilbert_lattice(P, v, r=2.5, k=1)


# empirical Kahane ratios


def test_kahane_single_vector_ratio_is_one():
    X = _ell(2.0, 3)
    x = np.array([1.0, 2.0j, -0.5])
    report = kahane_empirical(X, [x], p=1.0, trials=64, seed=0)
    assert report.passed
    assert report.lhs == pytest.approx(1.0, rel=1e-12)


def test_kahane_p2_ratio_is_exactly_one():
    X = _ell(2.0, 2)
    rng = np.random.default_rng(3)
    xs = rng.standard_normal((4, 2)) + 1j * rng.standard_normal((4, 2))
    report = kahane_empirical(X, xs, p=2.0, trials=128, seed=1)
    assert report.lhs == 1.0
    assert report.diagnostics["se"] == 0.0


def test_kahane_hilbert_basis_ratio_is_one():
    # ||sum eps_i e_i||_2 = sqrt(d) for every sign pattern.
    report = kahane_empirical(_ell(2.0, 4), np.eye(4), p=1.0, trials=256, seed=2)
    assert report.passed
    assert abs(report.lhs - 1.0) < 1e-12
    assert report.diagnostics["se"] == pytest.approx(0.0, abs=1e-12)


def test_kahane_random_family_within_bound():
    X = AtomicFunctionSpace([1.0, 2.0, 0.5], 1.0)
    rng = np.random.default_rng(7)
    xs = rng.standard_normal((5, 3)) + 1j * rng.standard_normal((5, 3))
    report = kahane_empirical(X, xs, p=1.0, trials=5000, seed=4)
    assert report.passed
    assert report.diagnostics["bound"] == pytest.approx(math.sqrt(2.0), rel=1e-15)


def test_kahane_validation():
    X = _ell(2.0, 2)
    with pytest.raises(ValueError, match="trials"):
        kahane_empirical(X, np.eye(2), p=1.0, trials=1, seed=0)
    with pytest.raises(ValueError, match="dimension"):
        kahane_empirical(X, np.ones((2, 3)), p=1.0, trials=4, seed=0)


# lower-bound search


def test_search_degree_one_ratio_is_one():
    best, P = lower_bound_search(1, 2, budget=1, seed=0)
    assert best == pytest.approx(1.0, rel=1e-12)
    assert P.m == 1


def test_search_stays_below_the_proved_constant():
    best, P = lower_bound_search(2, 2, budget=2, seed=0)
    assert 1.0 - 1e-12 <= best <= scalar_bh_best(2)[1].value * (1.0 + 1e-6)
    assert coeff_lp_norm(P, 4.0 / 3.0) > 0.0
    assert supnorm_upper(P, 32) > 0.0


def test_search_is_monotone_in_budget():
    small, _ = lower_bound_search(2, 2, budget=1, seed=5)
    large, _ = lower_bound_search(2, 2, budget=3, seed=5)
    assert small <= large


def test_search_validation():
    with pytest.raises(ValueError, match="budget"):
        lower_bound_search(2, 2, budget=0, seed=0)
