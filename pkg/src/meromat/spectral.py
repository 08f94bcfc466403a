"""Spectral decomposition of square matrices.

The central object is the set of eigenprojectors ``A_lam`` and their
companions ``A_{lam,m} = A_lam (A - lam I)^m`` (the nilpotent powers
restricted to each generalized eigenspace). Every other module in the
package is written in terms of these.

Eigenvalue clustering
---------------------
A defective eigenvalue of index ``nu`` is split by rounding into a ring of
``nu`` computed eigenvalues of radius roughly ``(n eps ||A||)^(1/nu)``, so a
fixed distance threshold either fails to merge split eigenvalues or merges
distinct ones. Instead, computed eigenvalues are arranged in a single
linkage dendrogram, and the dendrogram is walked from the root down. A node
is accepted as one eigenvalue when the Schur block restricted to its members
becomes numerically nilpotent (after removing the mean) at some power
``k <= a``, and the observed kernel dimensions form a valid Jordan
structure. Otherwise the node is split into its two children.

Rank decisions use the error model of backward stable Schur reduction: a
singular value of ``M^k`` is treated as zero when it is below
``rank_safety * n * eps * k * ||A|| * ||M||^(k-1)``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
from scipy.cluster.hierarchy import fcluster, linkage
from scipy.spatial.distance import pdist
from scipy.linalg.lapack import ztrsen

from .errors import (
    ChainConstructionFailure,
    ClusterAmbiguity,
    ContourContainsOtherEigenvalue,
    IndexNotOne,
    InputError,
    InvariantViolation,
    NonFinite,
    NonSquare,
    SpectrumHit,
)

__all__ = [
    "EigenvalueRecord",
    "Spectrum",
    "JordanBasis",
    "SpectralDecomposition",
    "as_square_matrix",
    "compute_spectrum",
    "jordan_basis",
    "eigenprojectors",
    "decompose",
    "index_one_projector",
    "resolvent",
    "contour_projector_oracle",
]

log = logging.getLogger(__name__)

EPS = np.finfo(float).eps
DEFAULT_RANK_SAFETY = 100.0
DEFAULT_RESIDUAL_TOL = 1e-6


def _frozen(a):
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


def as_square_matrix(A, name="A"):
    """Validate `A` and return it as a complex ndarray.

    Raises
    ------
    NonSquare
        If `A` is not a non-empty two dimensional square array.
    NonFinite
        If any entry is NaN or infinite.
    """
    try:
        M = np.array(A, dtype=complex)
    except (TypeError, ValueError) as exc:
        raise InputError(f"{name} cannot be read as a complex matrix") from exc
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] == 0:
        raise NonSquare(f"{name} must be a non-empty square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise NonFinite(f"{name} contains NaN or infinite entries")
    return M


# --------------------------------------------------------------------------
# data types


@dataclass(frozen=True)
class EigenvalueRecord:
    """One distinct eigenvalue and its Jordan structure.

    Attributes
    ----------
    value : complex
        The eigenvalue (mean of its numerically split cluster).
    algebraic : int
        Algebraic multiplicity ``a``.
    geometric : int
        Geometric multiplicity ``g`` (number of Jordan blocks).
    index : int
        Size of the largest Jordan block ``nu``.
    nullities : tuple of int
        ``dim ker (A - value I)^k`` for ``k = 1..index``.
    """

    value: complex
    algebraic: int
    geometric: int
    index: int
    nullities: tuple = ()

    def block_sizes(self):
        """Jordan block sizes, largest first, implied by `nullities`."""
        nl = [0, *self.nullities, self.algebraic]
        sizes = []
        for k in range(self.index, 0, -1):
            count = (nl[k] - nl[k - 1]) - (nl[k + 1] - nl[k])
            sizes += [k] * count
        return tuple(sizes)


@dataclass(frozen=True)
class Spectrum:
    """Distinct eigenvalues of a matrix with multiplicities.

    Attributes
    ----------
    records : tuple of EigenvalueRecord
    cluster_tolerance : float
        Effective clustering tolerance. For automatic clustering this is
        the largest merge distance among accepted clusters (0 when no
        eigenvalues were merged).
    rank_safety : float
    scale : float
        Spectral norm of the source matrix.
    """

    records: tuple
    cluster_tolerance: float
    rank_safety: float
    scale: float
    _groups: tuple = field(default=(), repr=False, compare=False)
    _source: np.ndarray = field(default=None, repr=False, compare=False)

    @property
    def dim(self):
        return sum(r.algebraic for r in self.records)

    @property
    def resolution(self):
        """Distance below which two complex numbers are not distinguished."""
        floor = self.rank_safety * self.dim * EPS * max(self.scale, 1.0)
        return max(self.cluster_tolerance, floor)

    @property
    def values(self):
        return np.array([r.value for r in self.records], dtype=complex)

    def locate(self, lam, tol=None):
        """Index of the record whose eigenvalue is nearest to `lam`.

        Parameters
        ----------
        lam : complex
        tol : float, optional
            Maximum admissible distance. Defaults to
            ``max(resolution, 1e-9 * (1 + |lam|))``.

        Raises
        ------
        InputError
            If no eigenvalue lies within `tol`.
        """
        lam = complex(lam)
        if tol is None:
            tol = max(self.resolution, 1e-9 * (1.0 + abs(lam)))
        d = np.abs(self.values - lam)
        i = int(np.argmin(d))
        if d[i] > tol:
            raise InputError(f"{lam} is not an eigenvalue (nearest at distance {d[i]:.3e})")
        return i

    def spectral_radius(self):
        return float(np.max(np.abs(self.values)))


@dataclass(frozen=True)
class JordanBasis:
    """Right Jordan chains ``Y`` and the dual rows ``Yinv``.

    Columns of `Y` are grouped by eigenvalue in the order of
    ``spectrum.records``. Within a record they are grouped by chain, each
    chain ordered from the eigenvector upward, so that
    ``(A - lam I) Y[:, j+1] = sigma Y[:, j]`` inside a chain, where
    ``sigma = scales[i]`` is the norm of the nilpotent part for the record.
    Rescaling the chain this way keeps `Y` well conditioned for long chains;
    ``sigma = 1`` recovers the textbook normalization.

    Attributes
    ----------
    Y, Yinv : ndarray
    chains : tuple of tuple of int
        Chain lengths for each record, in column order.
    spectrum : Spectrum
    scales : tuple of float
    """

    Y: np.ndarray
    Yinv: np.ndarray
    chains: tuple
    spectrum: Spectrum
    scales: tuple = ()

    def columns(self, i):
        """Column slice belonging to record `i`."""
        start = sum(sum(c) for c in self.chains[:i])
        return slice(start, start + sum(self.chains[i]))

    def shift(self, i):
        """Matrix of ``A - lam I`` in the chain coordinates of record `i`."""
        a = sum(self.chains[i])
        sigma = self.scales[i] if self.scales else 1.0
        S = np.zeros((a, a), dtype=complex)
        o = 0
        for length in self.chains[i]:
            for j in range(length - 1):
                S[o + j, o + j + 1] = sigma
            o += length
        return S


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenprojectors and their companions.

    Attributes
    ----------
    source : ndarray
        The decomposed matrix.
    spectrum : Spectrum
    companions : tuple of tuple of ndarray
        ``companions[i][m]`` is ``A_{lam_i, m}`` for ``m < nu_i``.
    residuals : dict
        Frobenius norm residuals of the decomposition invariants.
    basis : JordanBasis or None
        None when the decomposition was built by the projector product route.
    route : str
        ``"jordan"`` or ``"index_one"``.
    """

    source: np.ndarray
    spectrum: Spectrum
    companions: tuple
    residuals: dict
    basis: JordanBasis = None
    route: str = "jordan"

    @property
    def dim(self):
        return self.source.shape[0]

    @property
    def records(self):
        return self.spectrum.records

    def items(self):
        """Iterate over ``(record, companions)`` pairs."""
        return zip(self.spectrum.records, self.companions)

    def projector(self, lam):
        return self.companions[self.spectrum.locate(lam)][0]

    def companion(self, lam, m):
        """``A_{lam, m}``, which is zero for ``m >= nu``."""
        if m < 0:
            raise InputError("companion order must be non-negative")
        c = self.companions[self.spectrum.locate(lam)]
        if m >= len(c):
            return np.zeros_like(c[0])
        return c[m]

    @property
    def D(self):
        """Diagonalizable part of the source matrix."""
        return sum(r.value * c[0] for r, c in self.items())

    @property
    def N(self):
        """Nilpotent part of the source matrix."""
        N = np.zeros((self.dim, self.dim), dtype=complex)
        for _, c in self.items():
            if len(c) > 1:
                N = N + c[1]
        return N


# --------------------------------------------------------------------------
# clustering


def _restricted(T, Z, sel):
    """Reorder the Schur form so that `sel` eigenvalues come first."""
    select = np.zeros(T.shape[0], dtype=np.int32)
    select[list(sel)] = 1
    res = ztrsen(select, T, Z, job="N")
    info = res[-1]
    if info != 0:
        raise ChainConstructionFailure(f"Schur reordering failed (info={info})")
    a = len(sel)
    return res[0][:a, :a], res[1][:, :a]


def _nullity_sequence(M, scale, n, safety, user_tol=0.0):
    """Kernel dimensions of powers of the shifted block `M`.

    Returns the nullity list when `M` is numerically nilpotent with a valid
    Jordan structure, otherwise None. A positive `user_tol` widens the
    threshold for ``M^k`` to at least ``k * user_tol * ||M||^(k-1)``.
    """
    a = M.shape[0]
    norm_m = np.linalg.norm(M, 2)
    denom = max(norm_m, EPS * scale, np.finfo(float).tiny)
    Mt = M / denom
    P = np.eye(a, dtype=complex)
    nl = []
    for k in range(1, a + 1):
        P = P @ Mt
        s = np.linalg.svd(P, compute_uv=False)
        tau = max(safety * n * EPS * scale, user_tol) * k / denom
        nl.append(int(np.sum(s <= tau)))
        if nl[0] == 0:
            return None
        if nl[-1] == a:
            inc = np.diff([0] + nl)
            if np.all(inc[:-1] >= inc[1:]):
                return nl
            return None
        if k > 1 and nl[-1] == nl[-2]:
            return None
    return None


def compute_spectrum(A, cluster_tolerance=0.0, rank_safety=DEFAULT_RANK_SAFETY):
    """Distinct eigenvalues with algebraic, geometric multiplicity and index.

    Parameters
    ----------
    A : array_like, shape (n, n)
    cluster_tolerance : float, default 0
        Zero selects automatic clustering (see module notes). A positive
        value clusters computed eigenvalues closer than this distance.
    rank_safety : float, default 100
        Multiplier on the rounding error model used for rank decisions.

    Returns
    -------
    Spectrum

    Raises
    ------
    NonSquare, NonFinite
        On invalid input.
    ClusterAmbiguity
        If two resulting clusters overlap within the tolerance, or if
        coincident eigenvalues fail the nilpotency test.
    ChainConstructionFailure
        If a user specified cluster does not have a consistent Jordan
        structure.
    """
    A = as_square_matrix(A)
    if not (cluster_tolerance >= 0 and np.isfinite(cluster_tolerance)):
        raise InputError("cluster_tolerance must be a non-negative finite number")
    if not (rank_safety > 0 and np.isfinite(rank_safety)):
        raise InputError("rank_safety must be positive")
    n = A.shape[0]
    T, Z = sla.schur(A, output="complex")
    w = np.diag(T).copy()
    scale = float(np.linalg.norm(A, 2))
    resolution_floor = rank_safety * n * EPS * max(scale, 1.0)

    accepted = []  # (members, nullities)
    if n == 1:
        accepted.append(([0], [1]))
        tol_eff = float(cluster_tolerance)
    else:
        Lk = linkage(pdist(np.c_[w.real, w.imag]), method="single")
        if cluster_tolerance > 0:
            labels = fcluster(Lk, t=cluster_tolerance, criterion="distance")
            for lab in np.unique(labels):
                sel = [int(i) for i in np.flatnonzero(labels == lab)]
                nl = _test_group(T, Z, sel, scale, n, rank_safety, cluster_tolerance)
                if nl is None:
                    raise ChainConstructionFailure(
                        f"cluster of {len(sel)} eigenvalues near {np.mean(w[sel]):.6g} "
                        "has no consistent Jordan structure; try a smaller tolerance"
                    )
                accepted.append((sel, nl))
            tol_eff = float(cluster_tolerance)
        else:
            accepted, tol_eff = _auto_cluster(T, Z, w, Lk, scale, n, rank_safety, resolution_floor)

    groups = []
    records = []
    real_input = bool(np.all(A.imag == 0))
    for sel, nl in accepted:
        M, Q = _restricted(T, Z, sel)
        a = len(sel)
        mu = complex(np.trace(M) / a)
        resolution = max(tol_eff, resolution_floor)
        if abs(mu) <= resolution:
            mu = 0j
        elif real_input and abs(mu.imag) <= resolution:
            mu = complex(mu.real, 0.0)
        records.append(EigenvalueRecord(mu, a, nl[0], len(nl), tuple(nl)))
        groups.append((tuple(sel), Q, M))

    _check_overlap(records, groups, w, tol_eff)

    order = sorted(range(len(records)), key=lambda i: (-records[i].value.real, -records[i].value.imag))
    spec = Spectrum(
        records=tuple(records[i] for i in order),
        cluster_tolerance=tol_eff,
        rank_safety=float(rank_safety),
        scale=scale,
        _groups=tuple(groups[i] for i in order),
        _source=_frozen(A),
    )
    log.debug("spectrum: %d distinct eigenvalues, tolerance %.3e", len(records), tol_eff)
    return spec


def _test_group(T, Z, sel, scale, n, safety, user_tol=0.0):
    a = len(sel)
    if a == 1:
        return [1]
    M, _ = _restricted(T, Z, sel)
    M = M - (np.trace(M) / a) * np.eye(a)
    return _nullity_sequence(M, scale, n, safety, user_tol)


def _auto_cluster(T, Z, w, Lk, scale, n, safety, resolution_floor):
    members = {i: [i] for i in range(n)}
    for j, row in enumerate(Lk):
        members[n + j] = members[int(row[0])] + members[int(row[1])]
    accepted = []
    tol_eff = 0.0
    stack = [2 * n - 2]
    while stack:
        node = stack.pop()
        sel = members[node]
        nl = _test_group(T, Z, sel, scale, n, safety)
        if nl is not None:
            accepted.append((sel, nl))
            if node >= n:
                tol_eff = max(tol_eff, float(Lk[node - n, 2]))
            continue
        j = node - n
        if Lk[j, 2] <= resolution_floor:
            left, right = members[int(Lk[j, 0])], members[int(Lk[j, 1])]
            raise ClusterAmbiguity(
                "numerically coincident eigenvalues do not form a consistent Jordan structure",
                groupings=[[list(w[left]), list(w[right])], [list(w[sel])]],
            )
        stack += [int(Lk[j, 0]), int(Lk[j, 1])]
    return accepted, tol_eff


def _check_overlap(records, groups, w, tol):
    cents = [np.mean(w[list(g[0])]) for g in groups]
    radii = [float(np.max(np.abs(w[list(g[0])] - c))) for g, c in zip(groups, cents)]
    for i in range(len(records)):
        for j in range(i + 1, len(records)):
            if abs(cents[i] - cents[j]) <= radii[i] + radii[j] + tol:
                gi, gj = list(w[list(groups[i][0])]), list(w[list(groups[j][0])])
                raise ClusterAmbiguity(
                    f"eigenvalue clusters near {cents[i]:.6g} and {cents[j]:.6g} "
                    "overlap within the clustering tolerance",
                    groupings=[[gi, gj], [gi + gj]],
                )


# --------------------------------------------------------------------------
# Jordan chains


def _null_basis(X, k):
    if k == 0:
        return np.zeros((X.shape[1], 0), dtype=complex)
    _, _, Vh = np.linalg.svd(X)
    return Vh[-k:].conj().T


def _chains(M, nullities):
    """Jordan chains for a nilpotent block `M` with the given nullities.

    Chains are built from the longest down. At level ``k`` the new chain
    heads are taken from ``ker M^k`` orthogonally to ``ker M^(k-1)`` and to
    the level ``k`` elements of the chains already built.
    """
    a = M.shape[0]
    nu = len(nullities)
    nl = [0, *nullities, a]
    powers = [np.eye(a, dtype=complex)]
    for _ in range(nu):
        powers.append(powers[-1] @ M)
    K = [_null_basis(powers[k], nl[k]) for k in range(nu + 1)]
    heads = []  # (vector, length)
    for k in range(nu, 0, -1):
        count = (nl[k] - nl[k - 1]) - (nl[k + 1] - nl[k])
        if count < 0:
            raise ChainConstructionFailure("inconsistent kernel dimensions")
        if count == 0:
            continue
        existing = [powers[L - k] @ h for h, L in heads]
        S = np.column_stack([K[k - 1], *existing]) if (existing or K[k - 1].shape[1]) else None
        P = K[k]
        if S is not None:
            Qs, _ = np.linalg.qr(S)
            P = P - Qs @ (Qs.conj().T @ P)
        U, s, _ = np.linalg.svd(P, full_matrices=False)
        if len(s) < count or s[count - 1] < 1e-8:
            raise ChainConstructionFailure(f"no independent chain heads at level {k}")
        heads += [(U[:, j], k) for j in range(count)]
    cols = []
    lengths = []
    for h, L in heads:
        cols += [powers[L - 1 - j] @ h for j in range(L)]
        lengths.append(L)
    return np.column_stack(cols), tuple(lengths)


def _check_source(A, spectrum):
    if spectrum._source is None or spectrum._source.shape != A.shape or not np.array_equal(spectrum._source, A):
        raise InputError("spectrum was not computed from this matrix")


def jordan_basis(A, spectrum):
    """Right Jordan chains and dual rows.

    Parameters
    ----------
    A : array_like
    spectrum : Spectrum
        Must have been produced by ``compute_spectrum(A)``.

    Returns
    -------
    JordanBasis

    Raises
    ------
    ChainConstructionFailure
        If chains cannot be formed consistently or the basis is singular.
    """
    A = as_square_matrix(A)
    _check_source(A, spectrum)
    cols = []
    chains = []
    scales = []
    for rec, (sel, Q, M) in zip(spectrum.records, spectrum._groups):
        if rec.algebraic == 1:
            cols.append(Q)
            chains.append((1,))
            scales.append(1.0)
            continue
        B = M - rec.value * np.eye(rec.algebraic)
        sigma = float(np.linalg.norm(B, 2)) if rec.index > 1 else 1.0
        if not sigma > 0:
            sigma = 1.0
        C, lengths = _chains(B / sigma, list(rec.nullities))
        cols.append(Q @ C)
        chains.append(lengths)
        scales.append(sigma)
    Y = np.column_stack(cols)
    cond = np.linalg.cond(Y)
    if not np.isfinite(cond) or cond > 1.0 / (1e3 * EPS):
        raise ChainConstructionFailure(f"Jordan basis is numerically singular (cond {cond:.3e})")
    Yinv = np.linalg.inv(Y)
    return JordanBasis(Y=_frozen(Y), Yinv=_frozen(Yinv), chains=tuple(chains), spectrum=spectrum,
                       scales=tuple(scales))


# --------------------------------------------------------------------------
# projectors


def _residuals(A, values, companions):
    """Frobenius norm residuals of the decomposition invariants."""
    n = A.shape[0]
    eye = np.eye(n)
    res = {}
    res["completeness"] = float(np.linalg.norm(sum(c[0] for c in companions) - eye))
    D = sum(v * c[0] for v, c in zip(values, companions))
    N = sum((c[1] for c in companions if len(c) > 1), np.zeros((n, n), dtype=complex))
    res["dunford"] = float(np.linalg.norm(A - D - N))
    res["commutation"] = float(np.linalg.norm(D @ N - N @ D))
    nil = nil_s = 0.0
    tight = np.inf
    orth = orth_s = 0.0
    norms = [[float(np.linalg.norm(c)) for c in ci] for ci in companions]
    for i, ci in enumerate(companions):
        nu = len(ci)
        if nu > 1:
            r = float(np.linalg.norm(ci[1] @ ci[nu - 1]))
            nil = max(nil, r)
            nil_s = max(nil_s, r / max(1.0, norms[i][1] * norms[i][nu - 1]))
        if nu > 1:
            top = np.linalg.norm(ci[nu - 1], 2)
            base = np.linalg.norm(ci[1], 2) ** (nu - 1)
            tight = min(tight, top / max(base, np.finfo(float).tiny))
        for j, cj in enumerate(companions):
            for m in range(len(ci)):
                for k in range(len(cj)):
                    prod = ci[m] @ cj[k]
                    if i == j and m + k < nu:
                        prod = prod - ci[m + k]
                    r = float(np.linalg.norm(prod))
                    orth = max(orth, r)
                    orth_s = max(orth_s, r / max(1.0, norms[i][m] * norms[j][k]))
    res["nilpotency"] = nil
    res["orthogonality"] = orth
    res["nilpotency_scaled"] = nil_s
    res["orthogonality_scaled"] = orth_s
    res["index_tightness"] = float(min(tight, 1.0))
    return res


def _enforce(res, A, residual_tol):
    scale = max(1.0, float(np.linalg.norm(A)))
    limit = residual_tol * scale
    for key in ("completeness", "dunford", "commutation", "nilpotency_scaled", "orthogonality_scaled"):
        if not res[key] <= limit:
            raise InvariantViolation(key, res[key], limit)
    floor = 1e3 * EPS
    if not res["index_tightness"] > floor:
        raise InvariantViolation("index_tightness", res["index_tightness"], floor)


def eigenprojectors(A, basis, residual_tol=DEFAULT_RESIDUAL_TOL):
    """Eigenprojectors and companions from a Jordan basis.

    ``A_{lam, m} = Y_lam S^m Yinv_lam`` where ``S`` (the basis `shift`)
    moves each chain down by one position. Residuals of completeness, orthogonality, the Dunford
    split, commutation and nilpotency are attached to the result.

    Parameters
    ----------
    A : array_like
    basis : JordanBasis
    residual_tol : float, default 1e-6
        A residual larger than ``residual_tol * max(1, ||A||_F)`` raises.

    Returns
    -------
    SpectralDecomposition

    Raises
    ------
    InvariantViolation
    """
    A = as_square_matrix(A)
    spectrum = basis.spectrum
    _check_source(A, spectrum)
    companions = []
    for i, rec in enumerate(spectrum.records):
        sl = basis.columns(i)
        Yb = basis.Y[:, sl]
        Yib = basis.Yinv[sl, :]
        S = basis.shift(i)
        Sm = np.eye(S.shape[0], dtype=complex)
        comp = []
        for _ in range(rec.index):
            comp.append(_frozen(Yb @ Sm @ Yib))
            Sm = Sm @ S
        companions.append(tuple(comp))
    res = _residuals(A, spectrum.values, companions)
    res["duality"] = float(np.linalg.norm(basis.Yinv @ basis.Y - np.eye(A.shape[0])))
    _enforce(res, A, residual_tol)
    return SpectralDecomposition(
        source=_frozen(A), spectrum=spectrum, companions=tuple(companions),
        residuals=res, basis=basis, route="jordan",
    )


def index_one_projector(A, spectrum, lam):
    """Projector for an eigenvalue of index one as a polynomial in `A`.

    ``A_lam = prod_{zeta != lam} ((A - zeta I) / (lam - zeta))^{nu_zeta}``

    Raises
    ------
    IndexNotOne
        If the index of `lam` exceeds one.
    """
    A = as_square_matrix(A)
    _check_source(A, spectrum)
    i = spectrum.locate(lam)
    rec = spectrum.records[i]
    if rec.index != 1:
        raise IndexNotOne(f"eigenvalue {rec.value} has index {rec.index}")
    n = A.shape[0]
    P = np.eye(n, dtype=complex)
    for j, other in enumerate(spectrum.records):
        if j == i:
            continue
        F = (A - other.value * np.eye(n)) / (rec.value - other.value)
        P = P @ np.linalg.matrix_power(F, other.index)
    return P


def _index_one_route(A, spectrum, residual_tol):
    n = A.shape[0]
    eye = np.eye(n)
    comps = [None] * len(spectrum.records)
    rest = [i for i, r in enumerate(spectrum.records) if r.index > 1]
    if len(rest) > 1:
        raise IndexNotOne("more than one eigenvalue has index above one")
    total = np.zeros((n, n), dtype=complex)
    for i, rec in enumerate(spectrum.records):
        if rec.index == 1 and i not in rest:
            P = index_one_projector(A, spectrum, rec.value)
            comps[i] = (_frozen(P),)
            total = total + P
    for i in rest:
        rec = spectrum.records[i]
        P = eye - total
        B = A - rec.value * eye
        comp = [P]
        for _ in range(1, rec.index):
            comp.append(comp[-1] @ B)
        comps[i] = tuple(_frozen(c) for c in comp)
    res = _residuals(A, spectrum.values, comps)
    _enforce(res, A, residual_tol)
    return SpectralDecomposition(
        source=_frozen(A), spectrum=spectrum, companions=tuple(comps),
        residuals=res, basis=None, route="index_one",
    )


def decompose(A, cluster_tolerance=0.0, rank_safety=DEFAULT_RANK_SAFETY,
              route="auto", residual_tol=DEFAULT_RESIDUAL_TOL):
    """Spectrum, basis and projectors in one call.

    Parameters
    ----------
    A : array_like
    cluster_tolerance, rank_safety
        Passed to `compute_spectrum`.
    route : {"auto", "jordan", "index_one"}
        ``"index_one"`` builds projectors as polynomials in `A` and needs
        every eigenvalue except at most one to have index one. ``"auto"``
        uses it only for matrices of dimension four or less that qualify,
        since the polynomial products lose accuracy as the number of
        factors grows.
    residual_tol : float

    Returns
    -------
    SpectralDecomposition
    """
    A = as_square_matrix(A)
    spectrum = compute_spectrum(A, cluster_tolerance, rank_safety)
    if route not in ("auto", "jordan", "index_one"):
        raise InputError(f"unknown route {route!r}")
    defective = sum(1 for r in spectrum.records if r.index > 1)
    if route == "index_one" or (route == "auto" and A.shape[0] <= 4 and defective <= 1
                                and len(spectrum.records) > 1):
        return _index_one_route(A, spectrum, residual_tol)
    return eigenprojectors(A, jordan_basis(A, spectrum), residual_tol)


def resolvent(decomp, z):
    """Resolvent ``(z I - A)^{-1}`` from the partial fraction expansion.

    ``R(z) = sum_lam sum_{m < nu} A_{lam, m} / (z - lam)^(m + 1)``

    Raises
    ------
    SpectrumHit
        If `z` lies within the spectrum resolution of an eigenvalue.
    """
    z = complex(z)
    d = np.abs(decomp.spectrum.values - z)
    if np.min(d) <= decomp.spectrum.resolution:
        raise SpectrumHit(f"z = {z} is an eigenvalue")
    R = np.zeros((decomp.dim, decomp.dim), dtype=complex)
    for rec, comp in decomp.items():
        inv = 1.0 / (z - rec.value)
        f = inv
        for c in comp:
            R = R + f * c
            f = f * inv
    return R


def contour_projector_oracle(A, lam, radius, n_points=256, m=0):
    """Companion ``A_{lam, m}`` by trapezoidal quadrature of the resolvent.

    Evaluates ``(1 / 2 pi i) oint (z - lam)^m (z I - A)^{-1} dz`` on the
    circle of the given radius, using linear solves only. This is an
    independent check on the decomposition.

    Parameters
    ----------
    A : array_like
    lam : complex
    radius : float
    n_points : int, default 256
        At least 64.
    m : int, default 0

    Raises
    ------
    ContourContainsOtherEigenvalue
        If an eigenvalue other than (the numerically split copies of) `lam`
        lies inside the circle or near it.
    """
    A = as_square_matrix(A)
    if n_points < 64:
        raise InputError("n_points must be at least 64")
    if not radius > 0:
        raise InputError("radius must be positive")
    lam = complex(lam)
    d = np.abs(np.linalg.eigvals(A) - lam)
    bad = (d > 1e-2 * radius) & (d < 1.05 * radius)
    if np.any(bad):
        raise ContourContainsOtherEigenvalue(
            f"an eigenvalue lies at distance {d[bad].min():.3e} from {lam}, inside or near the contour"
        )
    n = A.shape[0]
    eye = np.eye(n)
    acc = np.zeros((n, n), dtype=complex)
    for t in 2 * np.pi * np.arange(n_points) / n_points:
        u = radius * np.exp(1j * t)
        acc += u ** (m + 1) * np.linalg.solve((lam + u) * eye - A, eye)
    return acc / n_points
