"""Autocorrelation and power spectra of state emitting hidden Markov models.

A model is a stochastic matrix ``T`` over latent states together with the
mean and second moment of the emission in each state. For lag
``tau >= 1`` the autocorrelation is ``gamma(tau) = pi conj(Omega) T^(tau-1)
Omega 1`` with ``Omega = diag(means) T``, so every spectral quantity is a
function of ``T`` and is evaluated through its eigenprojector companions.

Frequencies are in radians per step on ``[0, 2 pi)``. A power spectrum is
returned as a continuous density sampled on a grid plus a list of
discrete lines ``(angle, weight)`` for eigenvalues on the unit circle; the
lines are not rasterized onto the grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import signal
from scipy.sparse.csgraph import connected_components

from .errors import (
    DefectiveUnitCircleMode,
    EmptySeries,
    GridHitsSpectralLine,
    InputError,
    InsideUnitCircle,
    MissingSampler,
    NonUniqueStationary,
    SeriesTooShort,
)
from .funcalc import check_stochastic
from .spectral import SpectralDecomposition, as_square_matrix, decompose
from .stoch import check_rate_matrix, stationary_distribution

__all__ = [
    "DeltaEmission",
    "NormalEmission",
    "DiscreteEmission",
    "HiddenMarkovModel",
    "PowerSpectrumResult",
    "observation_matrix",
    "autocorrelation",
    "autocorrelation_sequence",
    "power_spectrum",
    "power_spectrum_resolvent",
    "deterministic_reduction",
    "continuous_time_power_spectrum",
    "finite_n_spectrum",
    "sample_hmm",
    "periodogram",
    "welch_spectrum",
    "ztransform_observations",
    "eigenvalue_scan",
    "default_grid",
]

UNIT_CIRCLE_TOL = 1e-9
LINE_GUARD = 1e-8


# --------------------------------------------------------------------------
# emissions


@dataclass(frozen=True)
class DeltaEmission:
    """Always emits `value`."""

    value: complex

    @property
    def mean(self):
        return complex(self.value)

    @property
    def second_moment(self):
        return abs(self.value) ** 2

    def sample(self, rng, size):
        return np.full(size, complex(self.value))


@dataclass(frozen=True)
class NormalEmission:
    """Real Gaussian emission with the given mean and variance.

    A complex `mean` shifts a real Gaussian; the noise stays real.
    """

    mean_value: complex
    variance: float

    def __post_init__(self):
        if not self.variance >= 0:
            raise InputError("variance must be non-negative")

    @property
    def mean(self):
        return complex(self.mean_value)

    @property
    def second_moment(self):
        return abs(self.mean_value) ** 2 + float(self.variance)

    def sample(self, rng, size):
        return self.mean_value + math.sqrt(self.variance) * rng.standard_normal(size)


@dataclass(frozen=True)
class DiscreteEmission:
    """Emits ``values[k]`` with probability ``probs[k]``."""

    values: tuple
    probs: tuple

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if len(self.values) != len(p) or len(p) == 0:
            raise InputError("values and probs must be non-empty and of equal length")
        if np.any(p < 0) or not np.isclose(p.sum(), 1.0, rtol=0, atol=1e-12):
            raise InputError("probs must be non-negative and sum to one")

    @property
    def mean(self):
        return complex(np.dot(self.probs, np.asarray(self.values, dtype=complex)))

    @property
    def second_moment(self):
        return float(np.dot(self.probs, np.abs(np.asarray(self.values, dtype=complex)) ** 2))

    def sample(self, rng, size):
        idx = rng.choice(len(self.values), size=size, p=np.asarray(self.probs, dtype=float))
        return np.asarray(self.values, dtype=complex)[idx]


# --------------------------------------------------------------------------
# model


@dataclass(frozen=True)
class HiddenMarkovModel:
    """State emitting hidden Markov model.

    Parameters
    ----------
    T : array_like
        Row stochastic transition matrix over latent states.
    means : array_like
        Complex emission mean per state.
    second_moments : array_like
        Emission ``E|x|^2`` per state; at least ``|mean|^2``.
    emissions : sequence, optional
        Per state samplers (`DeltaEmission`, `NormalEmission`,
        `DiscreteEmission`) consistent with the moments.
    """

    T: np.ndarray
    means: np.ndarray
    second_moments: np.ndarray
    emissions: tuple = field(default=None, compare=False)

    def __post_init__(self):
        T = check_stochastic(self.T)
        n = T.shape[0]
        means = np.asarray(self.means, dtype=complex).reshape(-1)
        sec = np.asarray(self.second_moments, dtype=complex).reshape(-1)
        if means.shape != (n,) or sec.shape != (n,):
            raise InputError(f"means and second_moments must have length {n}")
        if not (np.all(np.isfinite(means)) and np.all(np.isfinite(sec))):
            raise InputError("emission moments must be finite")
        if np.any(sec.imag != 0):
            raise InputError("second moments must be real")
        sec = sec.real
        if np.any(sec < np.abs(means) ** 2 - 1e-12 * np.maximum(1.0, sec)):
            raise InputError("second moment below squared mean magnitude")
        for name, val in (("T", T), ("means", means), ("second_moments", sec)):
            val.setflags(write=False)
            object.__setattr__(self, name, val)
        if self.emissions is not None:
            em = tuple(self.emissions)
            if len(em) != n:
                raise InputError(f"need {n} emission samplers")
            for s, e in enumerate(em):
                if abs(e.mean - means[s]) > 1e-9 * max(1.0, abs(means[s])) or \
                        abs(e.second_moment - sec[s]) > 1e-9 * max(1.0, sec[s]):
                    raise InputError(f"sampler for state {s} disagrees with the stated moments")
            object.__setattr__(self, "emissions", em)

    @classmethod
    def from_emissions(cls, T, emissions):
        """Model whose moments are read from the samplers."""
        emissions = tuple(emissions)
        return cls(T, [e.mean for e in emissions], [e.second_moment for e in emissions], emissions)

    @property
    def n_states(self):
        return self.T.shape[0]

    @property
    def deterministic(self):
        """True when every state emits its mean with certainty."""
        return bool(np.allclose(self.second_moments, np.abs(self.means) ** 2, rtol=1e-12, atol=1e-15))

    def check_irreducible(self):
        """Raise `NonUniqueStationary` unless the latent chain is irreducible."""
        ncomp, _ = connected_components(self.T > 0, directed=True, connection="strong")
        if ncomp != 1:
            raise NonUniqueStationary("latent chain is not irreducible")


@dataclass(frozen=True)
class PowerSpectrumResult:
    """Continuous density on a grid and discrete lines.

    Attributes
    ----------
    omega : ndarray
        Grid in radians per step.
    density : ndarray
        Real continuous density ``P_c`` on the grid.
    lines : tuple of (float, float)
        ``(angle, weight)`` of each delta line, angle in ``[0, 2 pi)``.
    """

    omega: np.ndarray
    density: np.ndarray
    lines: tuple = ()

    @property
    def continuous(self):
        return list(zip(self.omega.tolist(), self.density.tolist()))

    @property
    def discrete(self):
        return list(self.lines)


def default_grid(n=512, lo=0.0, hi=2 * np.pi):
    """``n`` cell midpoints on ``[lo, hi)``; avoids the points 0 and pi."""
    if n < 2:
        raise InputError("grid needs at least two points")
    return lo + (np.arange(n) + 0.5) * (hi - lo) / n


def _grid(omega):
    w = np.atleast_1d(np.asarray(omega, dtype=float))
    if w.ndim != 1 or w.size == 0 or not np.all(np.isfinite(w)):
        raise InputError("omega grid must be a non-empty finite 1-d array")
    return w


def _analysis(hmm, decomp):
    if not isinstance(hmm, HiddenMarkovModel):
        raise InputError("expected a HiddenMarkovModel")
    hmm.check_irreducible()
    if decomp is None:
        decomp = decompose(hmm.T)
    pi = stationary_distribution(hmm.T, decomp)
    return decomp, pi


def observation_matrix(hmm):
    """``Omega = diag(means) T``."""
    return hmm.means[:, None] * hmm.T


# --------------------------------------------------------------------------
# autocorrelation


def autocorrelation(hmm, tau, decomp=None):
    """Stationary autocorrelation ``gamma(tau) = E[conj(x_t) x_{t+tau}]``.

    ``gamma(0) = sum_s pi_s second_moment_s`` and ``gamma(-tau) =
    conj(gamma(tau))``.
    """
    if int(tau) != tau:
        raise InputError("lag must be an integer")
    tau = int(tau)
    seq = autocorrelation_sequence(hmm, abs(tau), decomp)
    return seq[-1] if tau >= 0 else np.conj(seq[-1])


def autocorrelation_sequence(hmm, max_lag, decomp=None):
    """``gamma(0), ..., gamma(max_lag)`` by iterated products with ``T``."""
    if int(max_lag) != max_lag or max_lag < 0:
        raise InputError("max_lag must be a non-negative integer")
    _, pi = _analysis(hmm, decomp)
    Om = observation_matrix(hmm)
    out = np.empty(int(max_lag) + 1, dtype=complex)
    out[0] = pi @ hmm.second_moments
    row = pi @ np.conj(Om)
    v = Om @ np.ones(hmm.n_states)
    for k in range(1, int(max_lag) + 1):
        out[k] = row @ v
        v = hmm.T @ v
    return out


# --------------------------------------------------------------------------
# power spectra


def _mode_coefficients(pi, Om, comp):
    left = pi @ np.conj(Om)
    right = Om @ np.ones(len(pi))
    return [complex(left @ c @ right) for c in comp]


def _scale_tol(values):
    return 1e-12 * max(1.0, max((abs(v) for v in values), default=0.0))


def power_spectrum(hmm, omega_grid=None, decomp=None, unit_circle_tol=UNIT_CIRCLE_TOL,
                   line_guard=LINE_GUARD):
    """Exact power spectrum from the eigenprojector expansion.

    ``P_c(w) = <|x|^2> + sum_{lam, m} 2 Re(c_{lam,m} / (e^{iw} - lam)^(m+1))``
    with ``c_{lam,m} = pi conj(Omega) T_{lam,m} Omega 1``. Unit circle
    eigenvalues contribute delta lines of weight ``2 pi Re(c_lam / lam)``;
    their finite principal value part stays in ``P_c``, so ``P_c`` equals
    the resolvent formula everywhere off the lines.

    Parameters
    ----------
    hmm : HiddenMarkovModel
    omega_grid : array_like, optional
        Defaults to `default_grid` with 512 points.
    decomp : SpectralDecomposition, optional
        Decomposition of ``hmm.T``.
    unit_circle_tol : float
        ``| |lam| - 1 | <= unit_circle_tol`` marks a line.
    line_guard : float
        Grid points closer than this to a line with nonzero weight raise.

    Raises
    ------
    GridHitsSpectralLine
    DefectiveUnitCircleMode
        If a unit circle eigenvalue has index above one.
    NonUniqueStationary
    """
    w = _grid(default_grid() if omega_grid is None else omega_grid)
    decomp, pi = _analysis(hmm, decomp)
    Om = observation_matrix(hmm)
    zs = np.exp(1j * w)
    total = np.full(w.shape, complex(pi @ hmm.second_moments))
    lines = []
    terms = []
    for rec, comp in decomp.items():
        c = _mode_coefficients(pi, Om, comp)
        on_circle = abs(abs(rec.value) - 1.0) <= unit_circle_tol
        if on_circle and rec.index > 1 and any(abs(x) > _scale_tol(c) for x in c[1:]):
            raise DefectiveUnitCircleMode(f"unit circle eigenvalue {rec.value} is defective")
        terms.append((rec, c, on_circle))
    for rec, c, on_circle in terms:
        if all(x == 0 for x in c):
            continue
        lam = rec.value
        if on_circle:
            ang = float(np.mod(np.angle(lam), 2 * np.pi))
            weight = 2 * np.pi * (c[0] / lam).real
            dist = np.abs(np.angle(np.exp(1j * (w - ang))))
            if abs(c[0]) > _scale_tol(c) and np.any(dist <= line_guard):
                raise GridHitsSpectralLine(f"grid point within {line_guard} of the line at {ang}")
            if abs(weight) > 1e-12:
                lines.append((ang, float(weight)))
        inv = 1.0 / (zs - lam)
        f = inv
        for m in range(len(c)):
            if c[m] != 0:
                total = total + 2 * (c[m] * f).real
            f = f * inv
    density = total.real
    lines.sort()
    return PowerSpectrumResult(omega=w, density=density, lines=tuple(lines))


def power_spectrum_resolvent(hmm, omega_grid=None):
    """``P_c`` by direct linear solves, ``<|x|^2> + 2 Re pi conj(Omega)
    (e^{iw} I - T)^{-1} Omega 1``. Independent of the decomposition."""
    w = _grid(default_grid() if omega_grid is None else omega_grid)
    hmm.check_irreducible()
    n = hmm.n_states
    T = hmm.T
    evals, evecs = np.linalg.eig(T.T)
    i = int(np.argmin(np.abs(evals - 1)))
    pi = np.real(evecs[:, i])
    pi = pi / pi.sum()
    Om = observation_matrix(hmm)
    left = pi @ np.conj(Om)
    right = Om @ np.ones(n)
    out = np.empty(w.shape)
    for k, om in enumerate(w):
        x = np.linalg.solve(np.exp(1j * om) * np.eye(n) - T, right)
        out[k] = (pi @ hmm.second_moments + 2 * (left @ x)).real
    return out


def deterministic_reduction(hmm):
    """Model with the same means and deterministic emissions.

    Its power spectrum differs from that of `hmm` by the constant
    ``sum_s pi_s (second_moment_s - |mean_s|^2)``; the lines are identical.
    """
    means = hmm.means.copy()
    return HiddenMarkovModel(hmm.T.copy(), means, np.abs(means) ** 2,
                             tuple(DeltaEmission(complex(m)) for m in means))


def continuous_time_power_spectrum(G, Omega, omega_grid, decomp=None, axis_tol=UNIT_CIRCLE_TOL):
    """Power spectrum of a continuous time process with rate matrix `G`.

    ``P_c(w) = sum_{lam != 0} sum_m 2 Re(c_{lam,m} / (i w - lam)^(m+1))``
    with ``c_{lam,m} = pi conj(Omega) G_{lam,m} Omega 1``. Eigenvalues on
    the imaginary axis (in particular the stationary eigenvalue 0) are left
    out of ``P_c`` and reported as lines ``(Im lam, 2 pi Re c_lam)``.

    Returns
    -------
    PowerSpectrumResult
    """
    G = check_rate_matrix(G)
    n = G.shape[0]
    Om = as_square_matrix(Omega, "Omega")
    if Om.shape != G.shape:
        raise InputError("Omega must have the shape of G")
    w = _grid(omega_grid)
    if decomp is None:
        decomp = decompose(G)
    if not isinstance(decomp, SpectralDecomposition):
        raise InputError("expected a SpectralDecomposition")
    pi = stationary_distribution(G, decomp)
    total = np.zeros(w.shape, dtype=complex)
    lines = []
    for rec, comp in decomp.items():
        c = _mode_coefficients(pi, Om, comp)
        lam = rec.value
        if abs(lam.real) <= axis_tol:
            if rec.index > 1 and any(abs(x) > _scale_tol(c) for x in c[1:]):
                raise DefectiveUnitCircleMode(f"imaginary axis eigenvalue {lam} is defective")
            weight = 2 * np.pi * c[0].real
            if abs(weight) > 1e-12:
                lines.append((float(lam.imag), float(weight)))
            continue
        inv = 1.0 / (1j * w - lam)
        f = inv
        for m in range(len(c)):
            total = total + 2 * (c[m] * f).real
            f = f * inv
    lines.sort()
    return PowerSpectrumResult(omega=w, density=total.real, lines=tuple(lines))


def finite_n_spectrum(hmm, omega_grid, N, decomp=None):
    """Expected periodogram of ``N`` samples from the analytic ACF.

    ``(1 / N) sum_{|tau| < N} (N - |tau|) gamma(tau) e^{-i w tau}``
    """
    w = _grid(omega_grid)
    if int(N) != N or N < 1:
        raise InputError("N must be a positive integer")
    N = int(N)
    g = autocorrelation_sequence(hmm, N - 1, decomp)
    tau = np.arange(1, N)
    wts = (N - tau) / N
    out = np.empty(w.shape)
    for k, om in enumerate(w):
        s = np.sum(wts * g[1:] * np.exp(-1j * om * tau))
        out[k] = (g[0] + 2 * s.real).real
    return out


# --------------------------------------------------------------------------
# sampling and estimation


def sample_hmm(hmm, n, seed, stochastic=True, initial_state=None, return_states=False):
    """Simulate an observation series.

    Parameters
    ----------
    hmm : HiddenMarkovModel
    n : int
        Series length.
    seed : int or numpy.random.SeedSequence
        Explicit seed; equal seeds give bit-identical output.
    stochastic : bool, default True
        Draw emissions from the samplers. With False every state emits its
        mean.
    initial_state : int, optional
        Drawn from the stationary distribution when omitted.
    return_states : bool

    Raises
    ------
    MissingSampler
        If stochastic emissions are requested for a model with random
        emissions but no samplers.
    """
    if int(n) != n or n < 0:
        raise InputError("n must be a non-negative integer")
    n = int(n)
    if stochastic and hmm.emissions is None and not hmm.deterministic:
        raise MissingSampler("model has random emissions but no sampler")
    rng = np.random.default_rng(seed)
    S = hmm.n_states
    if initial_state is None:
        pi = stationary_distribution(hmm.T)
        s = int(rng.choice(S, p=pi))
    else:
        s = int(initial_state)
        if not 0 <= s < S:
            raise InputError("initial_state out of range")
    nxt = [rng.choice(S, size=max(n, 1), p=hmm.T[k] / hmm.T[k].sum()) for k in range(S)]
    states = np.empty(n, dtype=np.int64)
    for t in range(n):
        states[t] = s
        s = nxt[s][t]
    x = np.empty(n, dtype=complex)
    for k in range(S):
        mask = states == k
        cnt = int(mask.sum())
        if cnt == 0:
            continue
        if stochastic and hmm.emissions is not None:
            x[mask] = hmm.emissions[k].sample(rng, cnt)
        else:
            x[mask] = hmm.means[k]
    return (x, states) if return_states else x


def _series(series):
    x = np.asarray(series, dtype=complex).reshape(-1)
    if x.size == 0:
        raise EmptySeries("series is empty")
    if not np.all(np.isfinite(x)):
        raise InputError("series has non-finite values")
    return x


def periodogram(series, omega_grid, method="dft", chunk=1 << 22):
    """Periodogram ``(1 / N) |sum_n X_n e^{-i w n}|^2`` on a grid.

    Parameters
    ----------
    series : array_like
    omega_grid : array_like
    method : {"dft", "acf"}
        ``"acf"`` uses the window ``N - |tau|`` applied to the sample
        autocorrelation; the two are algebraically identical.

    Raises
    ------
    EmptySeries
    """
    x = _series(series)
    w = _grid(omega_grid)
    N = x.size
    if method == "dft":
        out = np.empty(w.shape)
        n = np.arange(N)
        step = max(1, chunk // N)
        for k in range(0, w.size, step):
            E = np.exp(-1j * np.outer(w[k:k + step], n))
            out[k:k + step] = np.abs(E @ x) ** 2 / N
        return out
    if method == "acf":
        L = 1 << int(np.ceil(np.log2(2 * N)))
        F = np.fft.fft(x, L)
        r = np.fft.ifft(np.abs(F) ** 2)[:N]  # r[tau] = sum_n conj(X_n) X_{n+tau}
        tau = np.arange(1, N)
        out = np.empty(w.shape)
        for k, om in enumerate(w):
            s = np.sum(r[1:] * np.exp(-1j * om * tau))
            out[k] = (r[0] + 2 * s.real).real / N
        return out
    raise InputError(f"unknown method {method!r}")


def welch_spectrum(series, nperseg=1024):
    """Welch estimate of the two sided density in radians per step.

    Thin wrapper over ``scipy.signal.welch`` with unit sampling rate; the
    density normalization then matches `periodogram`.

    Returns
    -------
    omega : ndarray
        Angles in ``[0, 2 pi)``, ascending.
    density : ndarray
    """
    x = _series(series)
    f, p = signal.welch(x, fs=1.0, nperseg=min(nperseg, x.size), return_onesided=False)
    w = np.mod(2 * np.pi * f, 2 * np.pi)
    order = np.argsort(w)
    return w[order], p[order]


def ztransform_observations(series, z):
    """Partial sum ``O_N = z^{-1} sum_{n >= 0} X_n z^{-n}``, for ``|z| > 1``.

    Raises
    ------
    InsideUnitCircle
    EmptySeries
    """
    x = _series(series)
    z = complex(z)
    if not abs(z) > 1:
        raise InsideUnitCircle(f"|z| = {abs(z)} must exceed one")
    # terms below 1e-300 relative contribute nothing
    keep = min(x.size, int(np.ceil(690.0 / math.log(abs(z)))) + 1)
    n = np.arange(keep)
    return complex(np.sum(x[:keep] * np.exp(-(n + 1) * np.log(z))))


def _circular_peaks(y, periodic):
    if periodic:
        k = y.size
        ext = np.concatenate([y[-1:], y, y[:1]])
        idx, _ = signal.find_peaks(ext)
        idx = idx - 1
        return np.unique(idx[(idx >= 0) & (idx < k)])
    idx, _ = signal.find_peaks(y)
    return idx


def eigenvalue_scan(series, radius, omega_grid, segments=8, support=0.75, match_tol=None,
                    rel_height=1e-3, sharpness=2.0):
    """Candidate eigenvalue angles from peaks of ``|O_N(r e^{iw})|``.

    The z-transform of the observations is evaluated on the circle of the
    given radius for several segment starts spread over the series. A local
    maximum is kept when peaks within `match_tol` of it appear in at least
    a `support` fraction of the segments. Only peak positions are returned;
    magnitudes and pole orders are not fitted.

    Parameters
    ----------
    series : array_like
        At least 1000 samples.
    radius : float
        In ``(1, 2]``.
    omega_grid : array_like
        Sorted angles; treated as periodic when evenly spaced over a full
        turn.
    segments : int
    support : float
    match_tol : float, optional
        Defaults to two grid spacings.
    rel_height : float
        Peaks below this fraction of the segment maximum are ignored.
    sharpness : float
        A pole near the circle gives a peak of width about ``radius - 1``.
        Peaks are kept only when they exceed the values at angular offset
        ``5 (radius - 1)`` on both sides by this factor, which removes broad
        interference maxima between poles.

    Returns
    -------
    list of float
        Angles in ``(-pi, pi]``, ascending.

    Raises
    ------
    SeriesTooShort, InsideUnitCircle
    """
    x = _series(series)
    if x.size < 1000:
        raise SeriesTooShort("eigenvalue scan needs at least 1000 samples")
    if not radius > 1:
        raise InsideUnitCircle("radius must exceed one")
    if radius > 2:
        raise InputError("radius must be at most 2")
    w = np.sort(_grid(omega_grid))
    if w.size < 3:
        raise InputError("grid needs at least three points")
    spacing = float(np.max(np.diff(w)))
    periodic = abs((w[-1] - w[0]) + (w[1] - w[0]) - 2 * np.pi) <= 1e-9 * 2 * np.pi
    tol = 2 * spacing if match_tol is None else float(match_tol)
    length = min(x.size // 2, int(np.ceil(math.log(1e16) / math.log(radius))) + 1)
    segments = max(1, int(segments))
    starts = np.linspace(0, x.size - length, segments).astype(int) if segments > 1 else [0]
    n = np.arange(length)
    decay = radius ** (-(n + 1.0))
    E = np.exp(-1j * np.outer(w, n + 1))
    offset = 5 * (radius - 1)
    found = []
    for s0 in starts:
        y = np.abs(E @ (x[s0:s0 + length] * decay))
        idx = _circular_peaks(y, periodic)
        if idx.size:
            idx = idx[y[idx] >= rel_height * y.max()]
            keep = []
            for i in idx:
                side = []
                for a in (w[i] - offset, w[i] + offset):
                    if not periodic and not w[0] <= a <= w[-1]:
                        continue
                    side.append(y[int(np.argmin(np.abs(np.angle(np.exp(1j * (w - a))))))])
                if all(y[i] >= sharpness * v for v in side):
                    keep.append(i)
            idx = np.array(keep, dtype=int)
        found.append(w[idx])
    need = math.ceil(support * len(found))

    def cdist(a, b):
        return np.abs(np.angle(np.exp(1j * (a - b))))

    cands = []
    for j, peaks in enumerate(found):
        for p in peaks:
            matched = [p]
            for k, other in enumerate(found):
                if k == j or other.size == 0:
                    continue
                d = cdist(other, p)
                if d.min() <= tol:
                    matched.append(other[int(np.argmin(d))])
            if len(matched) >= need:
                cands.append((len(matched), float(np.angle(np.mean(np.exp(1j * np.array(matched)))))))
    cands.sort(key=lambda c: -c[0])
    picked = []
    for _, ang in cands:
        if all(cdist(ang, q) > 2 * tol for q in picked):
            picked.append(ang)
    out = [a if a > -np.pi else np.pi for a in picked]
    return sorted(out)
