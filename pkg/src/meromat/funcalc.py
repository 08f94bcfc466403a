"""Functions of matrices through eigenprojector companions.

For a function with local expansion ``f(z) = sum_n c_n (z - lam)^n`` near
each eigenvalue,

    f(A) = sum_lam sum_{m < nu_lam} c_m(lam) A_{lam, m}

The expansion may have a pole (negative ``n``); only the coefficients
``c_0 .. c_{nu-1}`` enter, which is how the Drazin inverse and negative
powers of singular matrices are obtained.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import (
    FunctionSingularAtEigenvalue,
    InputError,
    InsufficientLaurentDepth,
    MissingEigenvalueData,
    NotStochastic,
    StationaryEigenvalueMissing,
    ZeroC,
)
from .spectral import SpectralDecomposition, as_square_matrix, decompose

__all__ = [
    "LaurentExpansion",
    "LocalFunctionData",
    "HolomorphicFunction",
    "exp_function",
    "log_function",
    "power_function",
    "polynomial_function",
    "identity_function",
    "apply_meromorphic",
    "apply_holomorphic",
    "generalized_binomial",
    "matrix_power",
    "drazin",
    "exp_integral",
    "check_stochastic",
    "fundamental_matrix",
    "fundamental_matrix_drazin",
]

INTEGER_TOL = 1e-12


@dataclass(frozen=True)
class LaurentExpansion:
    """Non-negative part of a Laurent series around `lam`.

    Attributes
    ----------
    lam : complex
    coeffs : tuple of complex
        ``coeffs[m]`` multiplies ``(z - lam)^m``.
    """

    lam: complex
    coeffs: tuple


class LocalFunctionData:
    """Local expansion coefficients of a function at each eigenvalue.

    Parameters
    ----------
    expansions : iterable of LaurentExpansion or (lam, coeffs) pairs
    """

    def __init__(self, expansions):
        items = []
        for e in expansions:
            if not isinstance(e, LaurentExpansion):
                lam, coeffs = e
                e = LaurentExpansion(complex(lam), tuple(complex(c) for c in coeffs))
            items.append(e)
        self.expansions = tuple(items)

    def __len__(self):
        return len(self.expansions)

    def lookup(self, lam, tol):
        """Expansion whose centre is nearest to `lam` within `tol`."""
        if not self.expansions:
            raise MissingEigenvalueData(f"no expansion supplied for eigenvalue {lam}")
        d = [abs(e.lam - lam) for e in self.expansions]
        i = int(np.argmin(d))
        if d[i] > tol:
            raise MissingEigenvalueData(f"no expansion supplied for eigenvalue {lam}")
        return self.expansions[i]


@dataclass(frozen=True)
class HolomorphicFunction:
    """A scalar function known through its derivatives.

    Attributes
    ----------
    name : str
    derivatives : callable
        ``derivatives(z, k)`` returns ``[f(z), f'(z), ..., f^(k)(z)]``.
    singular : callable, optional
        ``singular(z)`` returns True where the function is not holomorphic.
    """

    name: str
    derivatives: Callable[[complex, int], Sequence[complex]]
    singular: Callable[[complex], bool] | None = None

    def taylor(self, z, order):
        """Taylor coefficients ``f^(m)(z) / m!`` for ``m < order``."""
        if self.singular is not None and self.singular(z):
            raise FunctionSingularAtEigenvalue(f"{self.name} is singular at {z}")
        d = list(self.derivatives(complex(z), order - 1))
        return [complex(d[m]) / math.factorial(m) for m in range(order)]


def exp_function(t=1.0):
    """``z -> exp(t z)``."""
    t = complex(t)

    def derivs(z, k):
        e = cmath.exp(t * z)
        return [t ** j * e for j in range(k + 1)]

    return HolomorphicFunction(f"exp({t}*z)" if t != 1 else "exp", derivs)


def log_function():
    """Principal branch logarithm; singular on the closed negative real axis."""

    def derivs(z, k):
        out = [cmath.log(z)]
        for j in range(1, k + 1):
            out.append((-1) ** (j - 1) * math.factorial(j - 1) / z ** j)
        return out

    def singular(z):
        return z == 0 or (z.real <= 0 and z.imag == 0)

    return HolomorphicFunction("log", derivs, singular)


def generalized_binomial(L, m):
    """``binom(L, m) = L (L - 1) ... (L - m + 1) / m!`` for complex `L`."""
    out = 1.0 + 0j
    for j in range(m):
        out *= (L - j) / (j + 1)
    return out


def _as_integer(L):
    Lc = complex(L)
    if abs(Lc.imag) <= INTEGER_TOL and abs(Lc.real - round(Lc.real)) <= INTEGER_TOL:
        return int(round(Lc.real))
    return None


def _power(z, p):
    """Principal branch ``z**p`` that stays exact for integer `p`."""
    k = _as_integer(p)
    if k is not None:
        return complex(z) ** k
    return cmath.exp(complex(p) * cmath.log(z))


def power_function(L):
    """``z -> z^L`` on the principal branch."""
    L = complex(L)
    whole = _as_integer(L)

    def derivs(z, k):
        return [generalized_binomial(L, j) * math.factorial(j) * _power(z, L - j) for j in range(k + 1)]

    def singular(z):
        return z == 0 and not (whole is not None and whole >= 0)

    return HolomorphicFunction(f"z^{L}", derivs, singular)


def polynomial_function(coeffs):
    """``z -> sum_j coeffs[j] z^j``."""
    coeffs = [complex(c) for c in coeffs]
    poly = np.polynomial.Polynomial(coeffs)

    def derivs(z, k):
        out = []
        p = poly
        for _ in range(k + 1):
            out.append(complex(p(z)))
            p = p.deriv()
        return out

    return HolomorphicFunction("polynomial", derivs)


def identity_function():
    """``z -> z``."""
    return polynomial_function([0.0, 1.0])


def _check_decomp(decomp):
    if not isinstance(decomp, SpectralDecomposition):
        raise InputError("expected a SpectralDecomposition")


def apply_meromorphic(decomp, fdata, match_tol=None):
    """Evaluate ``f(A)`` from local expansion coefficients.

    Parameters
    ----------
    decomp : SpectralDecomposition
    fdata : LocalFunctionData
        Needs an expansion within `match_tol` of every eigenvalue, with at
        least ``nu`` coefficients.
    match_tol : float, optional
        Defaults to ``max(resolution, 1e-9 * (1 + |lam|))``.

    Raises
    ------
    MissingEigenvalueData
    InsufficientLaurentDepth
    """
    _check_decomp(decomp)
    n = decomp.dim
    out = np.zeros((n, n), dtype=complex)
    for rec, comp in decomp.items():
        tol = match_tol if match_tol is not None else max(
            decomp.spectrum.resolution, 1e-9 * (1 + abs(rec.value)))
        e = fdata.lookup(rec.value, tol)
        if len(e.coeffs) < rec.index:
            raise InsufficientLaurentDepth(
                f"eigenvalue {rec.value} has index {rec.index} but only {len(e.coeffs)} coefficients were given"
            )
        for m, c in enumerate(comp):
            if e.coeffs[m] != 0:
                out = out + e.coeffs[m] * c
    return out


def apply_holomorphic(decomp, f):
    """Evaluate ``f(A)`` for a function holomorphic on the spectrum.

    Parameters
    ----------
    decomp : SpectralDecomposition
    f : HolomorphicFunction

    Raises
    ------
    FunctionSingularAtEigenvalue
    """
    _check_decomp(decomp)
    data = LocalFunctionData(
        (rec.value, f.taylor(rec.value, rec.index)) for rec in decomp.records
    )
    return apply_meromorphic(decomp, data, match_tol=0.0)


def matrix_power(decomp, L):
    """``A^L`` for complex `L`, including singular `A`.

    ``A^L = sum_{lam != 0} sum_m binom(L, m) lam^(L - m) A_{lam, m}
    + [0 in spectrum] sum_m delta_{L, m} A_{0, m}``

    Nonzero eigenvalues use the principal branch. The zero eigenvalue
    contributes only when `L` is a non-negative integer below its index, so
    negative powers reproduce the Drazin inverse powers.
    """
    _check_decomp(decomp)
    L = complex(L)
    whole = _as_integer(L)
    n = decomp.dim
    out = np.zeros((n, n), dtype=complex)
    for rec, comp in decomp.items():
        if rec.value == 0:
            if whole is not None and 0 <= whole < len(comp):
                out = out + comp[whole]
            continue
        for m, c in enumerate(comp):
            out = out + generalized_binomial(L, m) * _power(rec.value, L - m) * c
    return out


def drazin(decomp, c=None, method="product"):
    """Drazin inverse ``A^D``.

    Parameters
    ----------
    decomp : SpectralDecomposition
    c : complex, optional
        Shift for the product route, ``A^D = (I - A_0)(A + c A_0)^{-1}``.
        Any nonzero value gives the same result; defaults to the spectral
        radius plus one.
    method : {"product", "spectral"}
        ``"spectral"`` sums ``(-1)^m lam^(-1-m) A_{lam, m}`` over nonzero
        eigenvalues.

    Raises
    ------
    ZeroC
        If ``c == 0``.
    """
    _check_decomp(decomp)
    if method == "spectral":
        return matrix_power(decomp, -1)
    if method != "product":
        raise InputError(f"unknown method {method!r}")
    if c is None:
        c = decomp.spectrum.spectral_radius() + 1.0
    c = complex(c)
    if c == 0:
        raise ZeroC("the shift c must be nonzero")
    n = decomp.dim
    eye = np.eye(n)
    try:
        A0 = decomp.projector(0.0)
    except InputError:
        return np.linalg.inv(decomp.source)
    return (eye - A0) @ np.linalg.inv(decomp.source + c * A0)


def exp_integral(decomp, tau):
    """``int_0^tau exp(t L) dt`` for a possibly singular generator `L`.

    ``sum_{m < nu_0} tau^(m+1) / (m+1)! L_{0, m} + L^D (exp(tau L) - I)``
    """
    _check_decomp(decomp)
    tau = complex(tau)
    n = decomp.dim
    out = np.zeros((n, n), dtype=complex)
    for rec, comp in decomp.items():
        if rec.value == 0:
            for m, c in enumerate(comp):
                out = out + tau ** (m + 1) / math.factorial(m + 1) * c
    E = apply_holomorphic(decomp, exp_function(tau))
    return out + drazin(decomp) @ (E - np.eye(n))


def check_stochastic(T, atol=1e-12):
    """Validate a row stochastic matrix and return it as a real array.

    Raises
    ------
    NotStochastic
    """
    T = as_square_matrix(T, "T")
    n = T.shape[0]
    if np.any(np.abs(T.imag) > 0):
        raise NotStochastic("stochastic matrix must be real")
    T = T.real
    tol = atol * max(1, n)
    if np.any(T < -tol):
        raise NotStochastic("stochastic matrix has negative entries")
    if np.any(np.abs(T.sum(axis=1) - 1.0) > tol):
        raise NotStochastic("rows of a stochastic matrix must sum to one")
    return T


def _stationary_projector(decomp):
    try:
        i = decomp.spectrum.locate(1.0)
    except InputError:
        raise StationaryEigenvalueMissing("1 is not an eigenvalue") from None
    rec = decomp.records[i]
    if rec.index != 1:
        raise StationaryEigenvalueMissing("eigenvalue 1 is not semisimple")
    return decomp.companions[i][0]


def fundamental_matrix(T, decomp=None):
    """Fundamental matrix ``Z = (I - T + T_1)^{-1}`` of a Markov chain.

    Parameters
    ----------
    T : array_like
        Row stochastic matrix.
    decomp : SpectralDecomposition, optional
        Decomposition of `T`; computed when omitted.

    Raises
    ------
    NotStochastic, StationaryEigenvalueMissing
    """
    T = check_stochastic(T)
    if decomp is None:
        decomp = decompose(T)
    T1 = _stationary_projector(decomp)
    n = T.shape[0]
    return np.linalg.inv(np.eye(n) - T + T1)


def fundamental_matrix_drazin(T, decomp=None):
    """Fundamental matrix as ``(I - T)^D + T_1``, an independent route."""
    T = check_stochastic(T)
    if decomp is None:
        decomp = decompose(T)
    T1 = _stationary_projector(decomp)
    n = T.shape[0]
    return drazin(decompose(np.eye(n) - T)) + T1
