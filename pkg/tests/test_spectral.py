import numpy as np
import pytest
from hypothesis import given, strategies as st

from meromat import errors
from meromat.spectral import (
    _check_overlap,
    compute_spectrum,
    contour_projector_oracle,
    decompose,
    eigenprojectors,
    index_one_projector,
    jordan_basis,
    resolvent,
)
from meromat.stoch import poisson_generator
from meromat.testing import jordan_matrix, planted_matrix


def structure(blocks):
    d = {}
    for lam, m in blocks:
        d.setdefault(lam, []).append(m)
    return sorted((sum(v), len(v), max(v)) for v in d.values())


def recovered(decomp):
    return sorted((r.algebraic, r.geometric, r.index) for r in decomp.records)


# -- worked examples ---------------------------------------------------------

def test_jordan_block_2x2():
    d = decompose([[2, 1], [0, 2]])
    (rec,) = d.records
    assert (rec.value, rec.algebraic, rec.geometric, rec.index) == (2, 2, 1, 2)
    np.testing.assert_allclose(d.projector(2), np.eye(2), atol=1e-14)
    np.testing.assert_allclose(d.companion(2, 1), [[0, 1], [0, 0]], atol=1e-14)
    np.testing.assert_array_equal(d.companion(2, 2), np.zeros((2, 2)))


def test_identity_projector_is_identity():
    d = decompose(np.eye(3))
    (rec,) = d.records
    assert (rec.algebraic, rec.geometric, rec.index) == (3, 3, 1)
    np.testing.assert_allclose(d.projector(1), np.eye(3), atol=1e-15)


def test_zero_scalar():
    d = decompose([[0.0]])
    assert d.records[0].value == 0 and d.records[0].index == 1
    np.testing.assert_array_equal(d.projector(0), [[1]])


@pytest.mark.parametrize("N", [3, 16, 64])
def test_poisson_generator_single_eigenvalue(N):
    d = decompose(poisson_generator(N, 1.5))
    (rec,) = d.records
    assert rec.value == pytest.approx(-1.5)
    assert (rec.algebraic, rec.geometric, rec.index) == (N + 1, 1, N + 1)


def test_mixed_blocks_structure():
    blocks = [(1.0, 3), (1.0, 1), (-2.0, 2), (0.5j, 1), (0.0, 2)]
    J = jordan_matrix(blocks)
    rng = np.random.default_rng(0)
    Y = rng.normal(size=J.shape) + 1j * rng.normal(size=J.shape)
    A = Y @ J @ np.linalg.inv(Y)
    d = decompose(A)
    assert recovered(d) == structure(blocks)
    rec = d.records[d.spectrum.locate(1.0)]
    assert rec.block_sizes() == (3, 1)
    assert rec.nullities == (2, 3, 4)


def test_real_matrix_conjugate_pairs(rng):
    A = rng.normal(size=(7, 7))
    d = decompose(A)
    for rec, comp in d.items():
        j = d.spectrum.locate(np.conj(rec.value))
        np.testing.assert_allclose(d.companions[j][0], np.conj(comp[0]), atol=1e-10)


# -- errors ---------------------------------------------------------------

@pytest.mark.parametrize("bad", [np.zeros((2, 3)), np.zeros(3), np.zeros((0, 0))])
def test_non_square(bad):
    with pytest.raises(errors.NonSquare):
        compute_spectrum(bad)


def test_non_finite():
    with pytest.raises(errors.NonFinite):
        compute_spectrum([[1.0, np.nan], [0.0, 1.0]])


def test_user_tolerance_merges_close_eigenvalues():
    spec = compute_spectrum(np.diag([1.0, 1.05]), cluster_tolerance=0.1)
    (rec,) = spec.records
    assert (rec.algebraic, rec.geometric, rec.index) == (2, 2, 1)
    assert rec.value == pytest.approx(1.025)
    assert len(compute_spectrum(np.diag([1.0, 1.05])).records) == 2


def test_user_tolerance_groups_split_block():
    A = jordan_matrix([(1.0, 3)])
    A[2, 0] = 1e-12  # splits the triple eigenvalue into a ring of radius 1e-4
    spec = compute_spectrum(A, cluster_tolerance=1e-2)
    assert [(r.algebraic, r.index) for r in spec.records] == [(3, 3)]
    assert spec.cluster_tolerance == 1e-2


def test_overlap_check_reports_groupings():
    w = np.array([0.0, 0.1, 0.2, 0.15])
    groups = [((0, 1, 2), None, None), ((3,), None, None)]
    with pytest.raises(errors.ClusterAmbiguity) as exc:
        _check_overlap([None, None], groups, w, 0.0)
    assert len(exc.value.groupings) == 2


def test_spectrum_from_other_matrix_rejected():
    spec = compute_spectrum(np.eye(2))
    with pytest.raises(errors.InputError):
        jordan_basis(2 * np.eye(2), spec)


def test_index_one_projector_and_error():
    A = np.diag([1.0, 2.0, 3.0])
    A[1, 2] = 0.5
    spec = compute_spectrum(A)
    P = index_one_projector(A, spec, 2.0)
    np.testing.assert_allclose(P, eigenprojectors(A, jordan_basis(A, spec)).projector(2.0), atol=1e-13)
    B = jordan_matrix([(1.0, 2), (3.0, 1)])
    with pytest.raises(errors.IndexNotOne):
        index_one_projector(B, compute_spectrum(B), 1.0)


def test_routes_agree(rng):
    for _ in range(20):
        A, blocks, _ = planted_matrix(rng, dim=int(rng.integers(2, 5)), max_index=2)
        try:
            a = decompose(A, route="index_one")
        except errors.IndexNotOne:
            continue
        b = decompose(A, route="jordan")
        for rec in b.records:
            for m in range(rec.index):
                np.testing.assert_allclose(a.companion(rec.value, m), b.companion(rec.value, m), atol=1e-8)


def test_resolvent_spectrum_hit():
    d = decompose(np.diag([1.0, 2.0]))
    with pytest.raises(errors.SpectrumHit):
        resolvent(d, 2.0)


def test_contour_rejects_other_eigenvalue():
    A = np.diag([0.0, 0.5])
    with pytest.raises(errors.ContourContainsOtherEigenvalue):
        contour_projector_oracle(A, 0.0, 1.0)
    with pytest.raises(errors.InputError):
        contour_projector_oracle(A, 0.0, 0.2, n_points=16)


def test_contour_oracle_frozen_value():
    # A = [[1, 1], [0, 3]]: A_1 = [[1, -1/2], [0, 0]] by hand
    P = contour_projector_oracle(np.array([[1.0, 1.0], [0.0, 3.0]]), 1.0, 1.0)
    np.testing.assert_allclose(P, [[1, -0.5], [0, 0]], atol=1e-14)


def test_invariant_violation_carries_residual():
    exc = errors.InvariantViolation("dunford", 1.0, 1e-6)
    assert exc.invariant == "dunford" and exc.residual == 1.0
    assert isinstance(exc, errors.NumericalError)


def test_decomposition_is_immutable():
    d = decompose([[2.0, 1.0], [0.0, 3.0]])
    with pytest.raises(ValueError):
        d.companions[0][0][0, 0] = 5


# -- properties ------------------------------------------------------------

@given(st.integers(0, 2**32 - 1))
def test_planted_structure_and_invariants(seed):
    rng = np.random.default_rng(seed)
    A, blocks, _ = planted_matrix(rng)
    d = decompose(A)
    assert recovered(d) == structure(blocks)
    n = A.shape[0]
    assert np.linalg.norm(sum(c[0] for c in d.companions) - np.eye(n)) < 1e-8
    assert np.linalg.norm(A - d.D - d.N) < 1e-8
    assert np.linalg.norm(d.D @ d.N - d.N @ d.D) < 1e-8
    for r in d.residuals.values():
        assert np.isfinite(r)


@given(st.integers(0, 2**32 - 1))
def test_chains_and_duality(seed):
    rng = np.random.default_rng(seed)
    A, _, _ = planted_matrix(rng, dim_max=8)
    spec = compute_spectrum(A)
    basis = jordan_basis(A, spec)
    n = A.shape[0]
    np.testing.assert_allclose(basis.Yinv @ basis.Y, np.eye(n), atol=1e-8)
    col = 0
    for rec, lengths, sigma in zip(spec.records, basis.chains, basis.scales):
        B = A - rec.value * np.eye(n)
        for L in lengths:
            chain = basis.Y[:, col:col + L]
            assert np.linalg.norm(B @ chain[:, 0]) < 1e-6 * max(1, np.linalg.norm(chain[:, 0]))
            for j in range(1, L):
                np.testing.assert_allclose(B @ chain[:, j], sigma * chain[:, j - 1], atol=1e-6)
            col += L


@given(st.integers(0, 2**32 - 1), st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False))
def test_resolvent_matches_solve(seed, z):
    rng = np.random.default_rng(seed)
    A, _, _ = planted_matrix(rng, dim_max=8)
    d = decompose(A)
    if np.min(np.abs(d.spectrum.values - z)) < 0.05:
        return
    R = resolvent(d, z)
    ref = np.linalg.solve(z * np.eye(A.shape[0]) - A, np.eye(A.shape[0]))
    assert np.linalg.norm(R - ref) <= 1e-7 * max(1, np.linalg.norm(ref))
