import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from meromat import errors
from meromat.stoch import (
    average_rate,
    green_kubo,
    green_kubo_eigen_expansion,
    green_kubo_quadrature,
    inhomogeneous_poisson_transition,
    poisson_generator,
    poisson_tail_mass,
    poisson_transition,
    stationary_distribution,
)

from conftest import random_rate, random_stochastic


def pmf(n, mu):
    return mu ** n * math.exp(-mu) / math.factorial(n)


def test_generator_shape_and_entries():
    G = poisson_generator(3, 2.0)
    ref = np.array([[-2, 2, 0, 0], [0, -2, 2, 0], [0, 0, -2, 2], [0, 0, 0, -2.0]])
    np.testing.assert_array_equal(G, ref)


def test_pmf_frozen_values():
    T = poisson_transition(8, 1.0, 1.0)
    np.testing.assert_allclose(T[0, :3], [0.36787944117144233, 0.36787944117144233, 0.18393972058572117],
                               rtol=1e-15)


@pytest.mark.parametrize("r,t", [(1.0, 1.0), (1.5, 2.0), (0.2, 7.0)])
def test_transition_matches_closed_form(r, t):
    N = 20
    T = poisson_transition(N, r, t)
    for i in range(N + 1):
        for n in range(N + 1 - i):
            assert T[i, i + n] == pytest.approx(pmf(n, r * t), abs=1e-13)
    assert np.all(np.tril(T, -1) == 0)


def test_rows_lose_exactly_the_tail_mass():
    N, r, t = 10, 1.3, 2.5
    T = poisson_transition(N, r, t)
    for i in range(N + 1):
        assert T[i].sum() == pytest.approx(1 - poisson_tail_mass(N, r, t, i), abs=1e-13)


def test_zero_time_is_identity():
    np.testing.assert_allclose(poisson_transition(5, 2.0, 0.0), np.eye(6), atol=1e-15)


def test_invalid_rates():
    with pytest.raises(errors.InvalidRate):
        poisson_generator(4, 0.0)
    with pytest.raises(errors.InvalidRate):
        poisson_generator(4, -1.0)
    with pytest.raises(errors.InputError):
        poisson_generator(0, 1.0)
    with pytest.raises(errors.InputError):
        poisson_transition(4, 1.0, -1.0)


def test_inhomogeneous_matches_average():
    T = inhomogeneous_poisson_transition(30, lambda t: 1 + np.sin(t), 0, 2 * np.pi)
    np.testing.assert_allclose(T, poisson_transition(30, 1.0, 2 * np.pi), atol=1e-10)


def test_inhomogeneous_matches_time_ordered_product():
    rate = lambda t: 0.5 + t ** 2
    N, t0, tf, steps = 12, 0.0, 1.5, 3000
    h = (tf - t0) / steps
    P = np.eye(N + 1)
    for k in range(steps):
        P = P @ poisson_transition(N, rate(t0 + (k + 0.5) * h), h)
    np.testing.assert_allclose(inhomogeneous_poisson_transition(N, rate, t0, tf), P, atol=1e-6)


def test_negative_rate_and_quadrature_failure():
    with pytest.raises(errors.NegativeRate):
        average_rate(lambda t: np.cos(t), 0.0, 3.0)
    with pytest.raises(errors.QuadratureFailure):
        average_rate(lambda t: np.inf if t > 0.5 else 1.0, 0.0, 1.0)
    assert average_rate(lambda t: 2.0, 1.0, 1.0) == 2.0


def test_stationary_distribution_stochastic_and_rate():
    T = np.array([[0.9, 0.1], [0.3, 0.7]])
    np.testing.assert_allclose(stationary_distribution(T), [0.75, 0.25], atol=1e-14)
    G = np.array([[-1.0, 1.0], [3.0, -3.0]])
    np.testing.assert_allclose(stationary_distribution(G), [0.75, 0.25], atol=1e-14)


def test_stationary_not_unique():
    with pytest.raises(errors.NonUniqueStationary):
        stationary_distribution(np.eye(2))
    with pytest.raises(errors.InputError):
        stationary_distribution([[1.0, 1.0], [0.0, 1.0]])


@pytest.mark.parametrize("a,b", [(1.0, 1.0), (1.0, 3.0), (0.2, 5.0)])
def test_green_kubo_two_state_closed_form(a, b):
    # telegraph process with values +-1: variance 4ab/(a+b)^2, decay rate a+b
    G = np.array([[-a, a], [b, -b]])
    ref = 4 * a * b / (a + b) ** 3
    assert green_kubo(G, [1, -1]) == pytest.approx(ref, rel=1e-13)
    assert green_kubo_eigen_expansion(G, [1, -1]) == pytest.approx(ref, rel=1e-13)
    assert green_kubo_quadrature(G, [1, -1]) == pytest.approx(ref, rel=1e-8)


def test_green_kubo_constant_observable_is_zero(rng):
    G = random_rate(rng, 5)
    assert abs(green_kubo(G, np.full(5, 2.5))) <= 1e-12


def test_green_kubo_cross_observables(rng):
    G = random_rate(rng, 4)
    A, B = rng.normal(size=4), rng.normal(size=4)
    k = green_kubo(G, A, B)
    assert k == pytest.approx(green_kubo_quadrature(G, A, B), rel=1e-6)


def test_green_kubo_eigen_requires_diagonalizable():
    G = np.array([[-1.0, 1.0, 0.0], [0.0, -1.0, 1.0], [0.0, 0.0, 0.0]])
    assert green_kubo(G, [1.0, 0.0, 0.0]) == pytest.approx(green_kubo_quadrature(G, [1.0, 0.0, 0.0]), abs=1e-9)
    with pytest.raises(errors.NotDiagonalizable):
        green_kubo_eigen_expansion(G, [1.0, 0.0, 0.0])


def test_green_kubo_rejects_bad_inputs():
    with pytest.raises(errors.NotRateMatrix):
        green_kubo([[-1.0, 0.5], [1.0, -1.0]], [1, 2])
    with pytest.raises(errors.InputError):
        green_kubo([[-1.0, 1.0], [1.0, -1.0]], [1, 2, 3])


@given(st.integers(0, 2**32 - 1), st.integers(2, 7))
def test_random_chain_spectral_facts(seed, n):
    rng = np.random.default_rng(seed)
    T = random_stochastic(rng, n, sparsity=0.5)
    from meromat.spectral import decompose
    d = decompose(T)
    for rec, comp in d.items():
        assert abs(rec.value) <= 1 + 1e-9
        if abs(abs(rec.value) - 1) <= 1e-9:
            assert rec.index == 1
        j = d.spectrum.locate(np.conj(rec.value))
        np.testing.assert_allclose(d.companions[j][0], np.conj(comp[0]), atol=1e-9)
    pi = stationary_distribution(T, d)
    np.testing.assert_allclose(pi @ T, pi, atol=1e-12)


@given(st.integers(0, 2**32 - 1), st.integers(2, 6))
def test_green_kubo_routes_agree(seed, n):
    rng = np.random.default_rng(seed)
    G = random_rate(rng, n)
    A = rng.normal(size=n)
    k1, k2 = green_kubo(G, A), green_kubo_eigen_expansion(G, A)
    assert abs(k1 - k2) <= 1e-10 * max(1, abs(k1))
    assert k1 >= -1e-12  # autocovariance integral of a reversible-or-not chain at B = A
