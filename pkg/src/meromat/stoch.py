"""Markov chains, Poisson counting processes and Green-Kubo transport."""

from __future__ import annotations

import logging
import warnings

import numpy as np
import scipy.linalg as sla
from scipy import integrate, stats

from .errors import (
    InputError,
    InvalidRate,
    NegativeRate,
    NonUniqueStationary,
    NotDiagonalizable,
    NotRateMatrix,
    QuadratureFailure,
    StationaryEigenvalueMissing,
)
from .funcalc import apply_holomorphic, check_stochastic, drazin, exp_function
from .spectral import SpectralDecomposition, as_square_matrix, decompose

__all__ = [
    "check_rate_matrix",
    "stationary_distribution",
    "poisson_generator",
    "poisson_transition",
    "poisson_tail_mass",
    "average_rate",
    "inhomogeneous_poisson_transition",
    "green_kubo",
    "green_kubo_eigen_expansion",
    "green_kubo_quadrature",
]

log = logging.getLogger(__name__)


def check_rate_matrix(G, atol=1e-12):
    """Validate a rate matrix (non-negative off diagonal, rows sum to zero).

    Raises
    ------
    NotRateMatrix
    """
    G = as_square_matrix(G, "G")
    if np.any(G.imag != 0):
        raise NotRateMatrix("rate matrix must be real")
    G = G.real
    n = G.shape[0]
    scale = max(1.0, float(np.max(np.abs(G))))
    off = G - np.diag(np.diag(G))
    if np.any(off < -atol * scale):
        raise NotRateMatrix("rate matrix has negative off-diagonal entries")
    if np.any(np.abs(G.sum(axis=1)) > atol * scale * max(1, n)):
        raise NotRateMatrix("rows of a rate matrix must sum to zero")
    return G


def _classify(M):
    """Return ``("stochastic", T)`` or ``("rate", G)``."""
    M = as_square_matrix(M)
    rows = M.sum(axis=1)
    if np.allclose(rows, 1.0, rtol=0, atol=1e-9):
        return "stochastic", check_stochastic(M)
    if np.allclose(rows, 0.0, rtol=0, atol=1e-9 * max(1.0, float(np.max(np.abs(M))))):
        return "rate", check_rate_matrix(M)
    raise InputError("matrix is neither row stochastic nor a rate matrix")


def stationary_distribution(M, decomp=None):
    """Stationary distribution of a stochastic or rate matrix.

    The eigenprojector of the stationary eigenvalue (1 for a stochastic
    matrix, 0 for a rate matrix) equals ``1 pi``, so every row of it is
    ``pi``.

    Parameters
    ----------
    M : array_like
        Row stochastic matrix or rate matrix.
    decomp : SpectralDecomposition, optional
        Decomposition of `M`.

    Returns
    -------
    ndarray
        Non-negative real row vector summing to one.

    Raises
    ------
    NonUniqueStationary
        If the stationary eigenvalue is degenerate.
    StationaryEigenvalueMissing
    """
    kind, M = _classify(M)
    if decomp is None:
        decomp = decompose(M)
    target = 1.0 if kind == "stochastic" else 0.0
    try:
        i = decomp.spectrum.locate(target)
    except InputError:
        raise StationaryEigenvalueMissing(f"{target} is not an eigenvalue") from None
    rec = decomp.records[i]
    if rec.algebraic != 1:
        raise NonUniqueStationary(
            f"stationary eigenvalue has multiplicity {rec.algebraic}; the chain is not irreducible"
        )
    pi = decomp.companions[i][0].mean(axis=0).real
    pi = np.where(np.abs(pi) < 1e-13, 0.0, pi)
    if np.any(pi < -1e-9):
        raise NonUniqueStationary("stationary projector does not give a probability vector")
    pi = np.clip(pi, 0.0, None)
    return pi / pi.sum()


def poisson_generator(N, r):
    """Generator ``G = -r I + r D_1`` of a Poisson process truncated at `N`.

    States are event counts ``0..N``; ``D_1`` is the first superdiagonal
    shift. The last state is absorbing in the truncation only through the
    missing outflow, so rows do not sum to zero at ``N``.

    Parameters
    ----------
    N : int
        Largest event count kept, at least 1.
    r : float
        Positive rate.

    Raises
    ------
    InvalidRate
    """
    if not (np.isfinite(r) and r > 0):
        raise InvalidRate(f"rate must be positive and finite, got {r}")
    if int(N) != N or N < 1:
        raise InputError("N must be a positive integer")
    N = int(N)
    return -r * np.eye(N + 1) + r * np.eye(N + 1, k=1)


def poisson_transition(N, r, t, decomp=None):
    """Transition matrix ``exp(t G)`` of the truncated Poisson process.

    Entry ``(i, i + n)`` is ``(r t)^n exp(-r t) / n!``. The truncation loses
    the mass of counts above `N`; see `poisson_tail_mass`.

    Parameters
    ----------
    N : int
    r : float
    t : float
        Non-negative duration.
    decomp : SpectralDecomposition, optional
        Decomposition of the generator, for repeated calls.
    """
    if not (np.isfinite(t) and t >= 0):
        raise InputError("t must be non-negative")
    G = poisson_generator(N, r)
    if decomp is None:
        decomp = decompose(G)
    return apply_holomorphic(decomp, exp_function(t)).real


def poisson_tail_mass(N, r, t, i=0):
    """Probability of more than ``N - i`` events in time `t`, from state `i`.

    This is the mass missing from row `i` of the truncated transition matrix.
    """
    if not (np.isfinite(r) and r > 0):
        raise InvalidRate(f"rate must be positive and finite, got {r}")
    return float(stats.poisson.sf(N - i, r * t))


def average_rate(rate, t0, tf, epsabs=1e-10, epsrel=1e-10, limit=200, probes=257):
    """Time average of a rate function over ``[t0, tf]`` by adaptive quadrature.

    Raises
    ------
    NegativeRate
        If the rate is negative anywhere it is evaluated.
    QuadratureFailure
        If the integrator does not converge.
    """
    if not (np.isfinite(t0) and np.isfinite(tf)) or tf < t0:
        raise InputError("need finite t0 <= tf")
    if tf == t0:
        value = float(rate(t0))
        if value < 0:
            raise NegativeRate(f"rate is negative at t = {t0}")
        return value
    for s in np.linspace(t0, tf, probes):
        if float(rate(s)) < 0:
            raise NegativeRate(f"rate is negative at t = {s}")

    def integrand(s):
        v = float(rate(s))
        if v < 0:
            raise NegativeRate(f"rate is negative at t = {s}")
        if not np.isfinite(v):
            raise QuadratureFailure(f"rate is not finite at t = {s}")
        return v

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        res = integrate.quad(integrand, t0, tf, epsabs=epsabs, epsrel=epsrel, limit=limit, full_output=1)
    value, err, info = res[0], res[1], res[2]
    if len(res) > 3 or not np.isfinite(value):
        raise QuadratureFailure(f"quadrature of the rate did not converge: {res[3] if len(res) > 3 else value}")
    if err > max(epsabs, epsrel * abs(value)) * 10:
        raise QuadratureFailure(f"quadrature error estimate {err:.3e} too large")
    log.debug("average rate: %d evaluations", info["neval"])
    return value / (tf - t0)


def inhomogeneous_poisson_transition(N, rate, t0, tf, epsabs=1e-10, limit=200):
    """Transition matrix of a Poisson process with time dependent rate.

    The generators at different times are multiples of one matrix and so
    commute; the time ordered exponential reduces to ``exp((tf - t0) G)``
    with ``G`` built from the average rate over the interval.

    Parameters
    ----------
    N : int
    rate : callable
        ``rate(t) >= 0``.
    t0, tf : float

    Raises
    ------
    NegativeRate, QuadratureFailure
    """
    mean = average_rate(rate, t0, tf, epsabs=epsabs, limit=limit)
    if mean == 0 or tf == t0:
        return np.eye(int(N) + 1)
    return poisson_transition(N, mean, tf - t0)


def _observable(x, n, name):
    x = np.asarray(x, dtype=complex)
    if x.shape != (n,):
        raise InputError(f"observable {name} must have length {n}")
    if not np.all(np.isfinite(x)):
        raise InputError(f"observable {name} has non-finite entries")
    return x


def _gk_setup(G, decomp, A, B):
    G = check_rate_matrix(G)
    n = G.shape[0]
    if decomp is None:
        decomp = decompose(G)
    if not isinstance(decomp, SpectralDecomposition):
        raise InputError("expected a SpectralDecomposition")
    A = _observable(A, n, "A")
    B = A if B is None else _observable(B, n, "B")
    pi = stationary_distribution(G, decomp)
    return G, decomp, A, B, pi


def _real_if_close(x):
    x = complex(x)
    return x.real if abs(x.imag) <= 1e-13 * max(1.0, abs(x)) else x


def green_kubo(G, A, B=None, decomp=None):
    """Integrated autocorrelation ``kappa = -pi diag(A) G^D diag(B) 1``.

    Equals ``int_0^inf (<A(t) B(0)> - <A><B>) dt`` for an ergodic chain
    with generator `G`, without integrating in time.

    Parameters
    ----------
    G : array_like
        Rate matrix of an irreducible chain.
    A, B : array_like
        Observables as state vectors; `B` defaults to `A`.
    decomp : SpectralDecomposition, optional

    Returns
    -------
    float or complex
    """
    G, decomp, A, B, pi = _gk_setup(G, decomp, A, B)
    GD = drazin(decomp)
    return _real_if_close(-(pi * A) @ GD @ B)


def green_kubo_eigen_expansion(G, A, B=None, decomp=None):
    """``kappa = -sum_{lam != 0} (1 / lam) pi diag(A) G_lam diag(B) 1``.

    Raises
    ------
    NotDiagonalizable
        If any eigenvalue of `G` has index above one.
    """
    G, decomp, A, B, pi = _gk_setup(G, decomp, A, B)
    total = 0j
    for rec, comp in decomp.items():
        if rec.index > 1:
            raise NotDiagonalizable(f"eigenvalue {rec.value} has index {rec.index}")
        if rec.value == 0:
            continue
        total += -(1.0 / rec.value) * ((pi * A) @ comp[0] @ B)
    return _real_if_close(total)


def green_kubo_quadrature(G, A, B=None, t_max=np.inf, epsabs=1e-12, epsrel=1e-10, limit=400):
    """Green-Kubo integral by direct quadrature of the correlation function.

    Uses ``scipy.linalg.expm`` and a null space computation for the
    stationary distribution, independently of the decomposition. Intended
    as an oracle for small chains.
    """
    G = check_rate_matrix(G)
    n = G.shape[0]
    A = _observable(A, n, "A")
    B = A if B is None else _observable(B, n, "B")
    ns = sla.null_space(G.T)
    if ns.shape[1] != 1:
        raise NonUniqueStationary("rate matrix has a degenerate null space")
    pi = ns[:, 0] / ns[:, 0].sum()
    piA = pi * A
    mean = (piA @ np.ones(n)) * (pi @ B)

    def corr(t, part):
        v = piA @ sla.expm(t * G) @ B - mean
        return v.real if part == 0 else v.imag

    out = []
    for part in (0, 1):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            val, err = integrate.quad(corr, 0, t_max, args=(part,), epsabs=epsabs, epsrel=epsrel, limit=limit)
        out.append(val)
    return _real_if_close(complex(out[0], out[1]))
