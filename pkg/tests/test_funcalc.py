import math

import numpy as np
import pytest
import scipy.linalg as sla
from hypothesis import given, strategies as st
from scipy import integrate

from meromat import errors
from meromat.funcalc import (
    LocalFunctionData,
    apply_holomorphic,
    apply_meromorphic,
    drazin,
    exp_function,
    exp_integral,
    fundamental_matrix,
    fundamental_matrix_drazin,
    generalized_binomial,
    identity_function,
    log_function,
    matrix_power,
    polynomial_function,
    power_function,
)
from meromat.spectral import decompose
from meromat.testing import jordan_matrix, planted_matrix

from conftest import random_stochastic


def drazin_oracle(A, k):
    """A^D = A^k (A^(2k+1))^+ A^k for k at least the index of zero."""
    Ak = np.linalg.matrix_power(A, k)
    return Ak @ np.linalg.pinv(np.linalg.matrix_power(A, 2 * k + 1), rcond=1e-10) @ Ak


def singular_planted(rng, zero_blocks, dim=6):
    return planted_matrix(rng, dim=dim, zero_blocks=zero_blocks, box=2.0)[0]


# -- worked examples ---------------------------------------------------------

def test_power_three_of_jordan_block():
    out = matrix_power(decompose([[2, 1], [0, 2]]), 3)
    np.testing.assert_allclose(out, [[8, 12], [0, 8]], atol=1e-12)


def test_drazin_of_diagonal_singular():
    np.testing.assert_allclose(drazin(decompose(np.diag([2.0, 0.0]))), np.diag([0.5, 0.0]), atol=1e-15)


def test_exp_of_zero_is_identity():
    np.testing.assert_allclose(apply_holomorphic(decompose(np.zeros((3, 3))), exp_function()), np.eye(3))


def test_exp_of_jordan_block_frozen():
    e2 = 7.38905609893065
    out = apply_holomorphic(decompose([[2, 1], [0, 2]]), exp_function())
    np.testing.assert_allclose(out, [[e2, e2], [0, e2]], rtol=1e-13)


def test_drazin_frozen_hand_value():
    # eigenvalue 1 simple with right vector e1 and left vector (1, 1, 1);
    # eigenvalue 0 has index 2, so A^D is the eigenvalue 1 projector
    A = np.array([[1.0, 1.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 0.0]])
    d = decompose(A)
    assert d.records[d.spectrum.locate(0)].index == 2
    ref = [[1, 1, 1], [0, 0, 0], [0, 0, 0]]
    np.testing.assert_allclose(drazin(d), ref, atol=1e-13)
    np.testing.assert_allclose(drazin(d, method="spectral"), ref, atol=1e-13)


def test_zero_scalar_drazin_exact():
    d = decompose([[0.0]])
    assert np.array_equal(drazin(d), np.zeros((1, 1)))
    assert np.array_equal(drazin(d, method="spectral"), np.zeros((1, 1)))


def test_identity_function_reproduces_matrix(rng):
    A = planted_matrix(rng, dim=6)[0]
    np.testing.assert_allclose(apply_holomorphic(decompose(A), identity_function()), A, atol=1e-9)


def test_polynomial_matches_direct(rng):
    A = planted_matrix(rng, dim=5)[0]
    p = apply_holomorphic(decompose(A), polynomial_function([1, -2, 0, 0.5]))
    ref = np.eye(5) - 2 * A + 0.5 * np.linalg.matrix_power(A, 3)
    np.testing.assert_allclose(p, ref, atol=1e-8 * np.linalg.norm(ref))


def test_log_matches_scipy():
    rng = np.random.default_rng(3)
    J = jordan_matrix([(2.0, 2), (1.0 + 1.0j, 1), (0.5, 1)])
    Y = rng.normal(size=(4, 4))
    A = Y @ J @ np.linalg.inv(Y)
    L = apply_holomorphic(decompose(A), log_function())
    np.testing.assert_allclose(L, sla.logm(A), atol=1e-9)


def test_fractional_power_squares_back(rng):
    A = planted_matrix(rng, dim=6)[0]
    d = decompose(A)
    if np.any((d.spectrum.values.real < 0) & (np.abs(d.spectrum.values.imag) < 1e-12)):
        A = A @ A
        d = decompose(A)
    half = matrix_power(d, 0.5)
    np.testing.assert_allclose(half @ half, A, atol=1e-8 * np.linalg.norm(A))
    np.testing.assert_allclose(apply_holomorphic(d, power_function(0.5)), half, atol=1e-10 * np.linalg.norm(half))


def test_generalized_binomial_values():
    assert generalized_binomial(5, 2) == 10
    assert generalized_binomial(-1, 3) == -1
    assert generalized_binomial(0.5, 2) == pytest.approx(-0.125)
    assert generalized_binomial(3, 4) == 0


def test_laurent_data_gives_drazin():
    # f(z) = 1/z: Taylor data at nonzero eigenvalues, non-negative part
    # of the Laurent series (all zero) at the pole
    A = np.array([[3.0, 1.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 0.0]])
    d = decompose(A)
    data = LocalFunctionData([(3.0, [1 / 3, -1 / 9]), (0.0, [0.0, 0.0])])
    np.testing.assert_allclose(apply_meromorphic(d, data), drazin(d), atol=1e-13)


def test_meromorphic_errors():
    d = decompose(np.array([[3.0, 1.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 0.0]]))
    with pytest.raises(errors.MissingEigenvalueData):
        apply_meromorphic(d, LocalFunctionData([(3.0, [1.0])]))
    with pytest.raises(errors.InsufficientLaurentDepth):
        apply_meromorphic(d, LocalFunctionData([(3.0, [1.0]), (0.0, [1.0])]))
    with pytest.raises(errors.FunctionSingularAtEigenvalue):
        apply_holomorphic(d, log_function())
    with pytest.raises(errors.FunctionSingularAtEigenvalue):
        apply_holomorphic(d, power_function(-0.5))
    with pytest.raises(errors.ZeroC):
        drazin(d, c=0)


def test_drazin_of_nonsingular_is_inverse(rng):
    A = planted_matrix(rng, dim=7)[0]
    d = decompose(A)
    if 0 in d.spectrum.values:
        pytest.skip("singular draw")
    np.testing.assert_allclose(drazin(d), np.linalg.inv(A), atol=1e-10 * np.linalg.norm(np.linalg.inv(A)))


def test_exp_integral_two_state_closed_form():
    G = np.array([[-1.0, 1.0], [1.0, -1.0]])
    P = np.full((2, 2), 0.5)
    ref = 2.0 * P + (1 - math.exp(-4.0)) / 2 * (np.eye(2) - P)
    np.testing.assert_allclose(exp_integral(decompose(G), 2.0), ref, atol=1e-14)


def test_fundamental_matrix_errors():
    with pytest.raises(errors.NotStochastic):
        fundamental_matrix([[0.5, 0.6], [0.5, 0.5]])
    with pytest.raises(errors.NotStochastic):
        fundamental_matrix([[1.5, -0.5], [0.5, 0.5]])


def test_fundamental_matrix_two_state():
    T = np.array([[0.9, 0.1], [0.3, 0.7]])
    Z = fundamental_matrix(T)
    pi = np.array([0.75, 0.25])
    np.testing.assert_allclose(Z, np.linalg.inv(np.eye(2) - T + np.outer(np.ones(2), pi)), atol=1e-14)
    np.testing.assert_allclose(fundamental_matrix_drazin(T), Z, atol=1e-12)


# -- properties --------------------------------------------------------------

@given(st.integers(0, 2**32 - 1), st.sampled_from([(1,), (2,), (2, 1), (3,), (1, 1)]))
def test_drazin_matches_pinv_oracle_and_axioms(seed, zb):
    rng = np.random.default_rng(seed)
    A = singular_planted(rng, zb)
    d = decompose(A)
    nu0 = max(zb)
    AD = drazin(d)
    ref = drazin_oracle(A, nu0)
    scale = max(1.0, np.linalg.norm(ref))
    assert np.linalg.norm(AD - ref) <= 1e-6 * scale
    Ak = np.linalg.matrix_power(A, nu0)
    assert np.linalg.norm(Ak @ AD @ A - Ak) <= 1e-8 * max(1, np.linalg.norm(Ak))
    assert np.linalg.norm(AD @ A @ AD - AD) <= 1e-8 * scale
    assert np.linalg.norm(A @ AD - AD @ A) <= 1e-8 * scale


@given(st.integers(0, 2**32 - 1))
def test_exp_matches_expm(seed):
    rng = np.random.default_rng(seed)
    A = planted_matrix(rng, dim_max=8, box=1.5)[0]
    E = apply_holomorphic(decompose(A), exp_function(0.7))
    ref = sla.expm(0.7 * A)
    assert np.linalg.norm(E - ref) <= 1e-8 * max(1, np.linalg.norm(ref))


@given(st.integers(0, 2**32 - 1), st.integers(0, 6))
def test_integer_powers(seed, L):
    rng = np.random.default_rng(seed)
    A = planted_matrix(rng, dim_max=8)[0]
    ref = np.linalg.matrix_power(A, L)
    assert np.linalg.norm(matrix_power(decompose(A), L) - ref) <= 1e-9 * max(1, np.linalg.norm(ref))


@given(st.integers(0, 2**32 - 1), st.integers(1, 3), st.integers(1, 3))
def test_negative_power_semigroup_singular(seed, p, q):
    rng = np.random.default_rng(seed)
    A = singular_planted(rng, (2,))
    d = decompose(A)
    lhs = matrix_power(d, -p) @ matrix_power(d, -q)
    ref = matrix_power(d, -(p + q))
    assert np.linalg.norm(lhs - ref) <= 1e-8 * max(1, np.linalg.norm(ref))
    np.testing.assert_allclose(matrix_power(d, -1), drazin(d), atol=1e-8 * max(1, np.linalg.norm(ref)))


@given(st.integers(0, 2**32 - 1))
def test_exp_integral_matches_quadrature(seed):
    rng = np.random.default_rng(seed)
    L = singular_planted(rng, (2,), dim=5)
    tau = 0.8
    ref, _ = integrate.quad_vec(lambda t: sla.expm(t * L), 0, tau, epsabs=1e-13, epsrel=1e-12)
    out = exp_integral(decompose(L), tau)
    assert np.linalg.norm(out - ref) <= 1e-8 * max(1, np.linalg.norm(ref))


@given(st.integers(0, 2**32 - 1), st.integers(2, 7))
def test_fundamental_matrix_routes(seed, n):
    rng = np.random.default_rng(seed)
    T = random_stochastic(rng, n)
    np.testing.assert_allclose(fundamental_matrix(T), fundamental_matrix_drazin(T), atol=1e-10)
