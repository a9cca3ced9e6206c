import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from adiaprep.linalg import (
    EigenSystem,
    apply,
    as_complex_matrix,
    as_state_vector,
    eig_hermitian,
    expm_minus_i,
    hermiticity_defect,
)

SQRT2 = np.sqrt(2.0)
Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
HAD = (X + Z) / SQRT2


def random_hermitian(rng: np.random.Generator, n: int) -> np.ndarray:
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (a + a.conj().T) / 2.0


def test_eig_diagonal_matrix_is_sorted_identity_basis():
    es = eig_hermitian(np.diag([3.0, -1.0, 2.0]).astype(complex))
    assert np.allclose(es.eigenvalues, [-1.0, 2.0, 3.0])
    expected = np.eye(3)[:, [1, 2, 0]]
    assert np.allclose(es.eigenvectors, expected)


def test_eig_pauli_z():
    es = eig_hermitian(Z)
    assert np.allclose(es.eigenvalues, [-1.0, 1.0])
    # ascending order puts |1> first; phase gauge makes pivots real positive
    assert np.allclose(es.eigenvectors[:, 0], [0.0, 1.0])
    assert np.allclose(es.eigenvectors[:, 1], [1.0, 0.0])


def test_eig_hadamard_ground_state_components():
    # the +1 eigenvector of H is proportional to (1, sqrt(2)-1)
    es = eig_hermitian(HAD)
    assert np.allclose(es.eigenvalues, [-1.0, 1.0], atol=1e-14)
    expected = np.array([1.0, SQRT2 - 1.0]) / np.sqrt(4.0 - 2.0 * SQRT2)
    overlap = abs(np.vdot(expected, es.eigenvectors[:, 1]))
    assert overlap == pytest.approx(1.0, abs=1e-12)


def test_eig_matches_lapack_eigenvalues():
    rng = np.random.default_rng(7)
    for n in (2, 3, 5, 8):
        m = random_hermitian(rng, n)
        es = eig_hermitian(m)
        assert np.allclose(es.eigenvalues, np.linalg.eigvalsh(m), atol=1e-12)


def test_eig_reconstruction_and_unitarity():
    rng = np.random.default_rng(11)
    m = random_hermitian(rng, 6)
    es = eig_hermitian(m)
    v = es.eigenvectors
    assert np.max(np.abs(v.conj().T @ v - np.eye(6))) < 1e-12
    recon = (v * es.eigenvalues) @ v.conj().T
    assert np.max(np.abs(recon - m)) < 1e-10


def test_eig_eigenvalues_ascending():
    rng = np.random.default_rng(13)
    es = eig_hermitian(random_hermitian(rng, 7))
    assert np.all(np.diff(es.eigenvalues) >= -1e-12)


def test_eig_is_deterministic():
    rng = np.random.default_rng(17)
    m = random_hermitian(rng, 5)
    a = eig_hermitian(m)
    b = eig_hermitian(m)
    assert np.array_equal(a.eigenvalues, b.eigenvalues)
    assert np.array_equal(a.eigenvectors, b.eigenvectors)


def test_eig_degenerate_pair_ordered_by_pivot_index():
    # eigenvalue 1 is doubly degenerate; columns must come out ordered by
    # the index of their first large component, phases fixed real positive
    m = np.diag([1.0, 2.0, 1.0]).astype(complex)
    es = eig_hermitian(m)
    assert np.allclose(es.eigenvalues, [1.0, 1.0, 2.0])
    assert abs(es.eigenvectors[0, 0]) > abs(es.eigenvectors[2, 0])
    assert abs(es.eigenvectors[2, 1]) > abs(es.eigenvectors[0, 1])
    for k in range(3):
        col = es.eigenvectors[:, k]
        anchor = col[np.flatnonzero(np.abs(col) > 1e-9)[0]]
        assert anchor.real > 0.0
        assert abs(anchor.imag) < 1e-12


def test_eig_identity_stays_identity():
    es = eig_hermitian(np.eye(4, dtype=complex))
    assert np.array_equal(es.eigenvectors, np.eye(4, dtype=complex))


def test_eig_zero_matrix():
    es = eig_hermitian(np.zeros((3, 3), dtype=complex))
    assert np.array_equal(es.eigenvalues, np.zeros(3))


def test_eig_rejects_non_hermitian_naming_entry():
    m = np.eye(2, dtype=complex)
    m[0, 1] = 1e-3
    with pytest.raises(ValueError, match=r"\(0, 1\)"):
        eig_hermitian(m)


def test_eig_accepts_defect_within_tolerance():
    m = Z.copy()
    m[0, 1] = 1e-13
    es = eig_hermitian(m)
    assert np.allclose(es.eigenvalues, [-1.0, 1.0], atol=1e-12)


def test_eig_phase_gauge_independent_of_input_phase():
    # multiplying an eigenvector's phase into the matrix must not change
    # the returned basis
    rng = np.random.default_rng(23)
    m = random_hermitian(rng, 4)
    es1 = eig_hermitian(m)
    u = np.exp(1j * 0.7) * np.eye(4)
    es2 = eig_hermitian(u @ m @ u.conj().T)  # same matrix after a global gauge
    assert np.allclose(es1.eigenvectors, es2.eigenvectors, atol=1e-10)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 5))
def test_eig_properties_random(seed, n):
    m = random_hermitian(np.random.default_rng(seed), n)
    es = eig_hermitian(m)
    v = es.eigenvectors
    assert np.all(np.diff(es.eigenvalues) >= -1e-12)
    assert np.max(np.abs(v.conj().T @ v - np.eye(n))) < 1e-10
    recon = (v * es.eigenvalues) @ v.conj().T
    assert np.max(np.abs(recon - m)) < 1e-10
    assert np.allclose(es.eigenvalues, np.linalg.eigvalsh(m), atol=1e-10)


def test_expm_zero_time_is_identity():
    rng = np.random.default_rng(29)
    m = random_hermitian(rng, 4)
    assert np.max(np.abs(expm_minus_i(m, 0.0) - np.eye(4))) < 1e-14


def test_expm_pauli_z_quarter_period():
    u = expm_minus_i(Z, np.pi / 2.0)
    assert np.allclose(u, np.diag([np.exp(-1j * np.pi / 2), np.exp(1j * np.pi / 2)]), atol=1e-14)


def test_expm_eigenstate_picks_up_phase():
    # exp(-i(-JX)t)|+> = e^{+iJt}|+>
    plus = np.array([1.0, 1.0], dtype=complex) / SQRT2
    j, t = 0.75, 1.3
    u = expm_minus_i(-j * X, t)
    phase = np.vdot(plus, u @ plus)
    assert phase == pytest.approx(np.exp(1j * j * t), abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(
    seed=st.integers(0, 2**32 - 1),
    s=st.floats(-3.0, 3.0),
    t=st.floats(-3.0, 3.0),
)
def test_expm_group_property_and_unitarity(seed, s, t):
    m = random_hermitian(np.random.default_rng(seed), 3)
    us = expm_minus_i(m, s)
    ut = expm_minus_i(m, t)
    ust = expm_minus_i(m, s + t)
    assert np.max(np.abs(us @ ut - ust)) < 1e-10
    assert np.max(np.abs(us @ us.conj().T - np.eye(3))) < 1e-12


def test_expm_preserves_norm():
    rng = np.random.default_rng(31)
    m = random_hermitian(rng, 5)
    v = rng.normal(size=5) + 1j * rng.normal(size=5)
    v /= np.linalg.norm(v)
    w = expm_minus_i(m, 2.1) @ v
    assert abs(np.linalg.norm(w) - 1.0) < 1e-12


def test_expm_rejects_non_finite_time():
    with pytest.raises(ValueError, match="finite"):
        expm_minus_i(Z, np.inf)


def test_apply_basics():
    v = np.array([1.0, 0.0], dtype=complex)
    assert np.allclose(apply(X, v), [0.0, 1.0])
    assert np.allclose(apply(HAD, v), [1.0 / SQRT2, 1.0 / SQRT2])


def test_apply_rejects_dimension_mismatch():
    with pytest.raises(ValueError, match="mismatch"):
        apply(np.eye(3), np.array([1.0, 0.0]))


def test_as_complex_matrix_rejects_bad_shapes_and_nans():
    with pytest.raises(ValueError, match="square"):
        as_complex_matrix(np.zeros((2, 3)))
    bad = np.eye(2, dtype=complex)
    bad[1, 0] = np.nan
    with pytest.raises(ValueError, match=r"\(1, 0\)"):
        as_complex_matrix(bad)


def test_as_state_vector_norm_check():
    with pytest.raises(ValueError, match="norm"):
        as_state_vector([1.0, 1.0])
    v = as_state_vector([1.0 / SQRT2, 1.0 / SQRT2])
    assert v.dtype == np.complex128


def test_hermiticity_defect_value():
    m = np.array([[0.0, 1.0], [0.5, 0.0]], dtype=complex)
    assert hermiticity_defect(m) == pytest.approx(0.5)


def test_eigensystem_dim():
    es = eig_hermitian(Z)
    assert isinstance(es, EigenSystem)
    assert es.dim == 2
