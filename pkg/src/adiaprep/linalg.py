"""Dense complex linear algebra for small Hermitian systems.

Eigendecomposition uses cyclic Jacobi rotations: slower than LAPACK but fully
deterministic, with a fixed rotation order, a fixed tie-break for degenerate
eigenvalues, and a fixed phase gauge. That determinism is what makes repeated
runs byte-identical, so do not swap in a platform eigensolver here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "EigenSystem",
    "HERMITICITY_TOL",
    "apply",
    "as_complex_matrix",
    "as_state_vector",
    "eig_hermitian",
    "expm_minus_i",
    "hermiticity_defect",
]

HERMITICITY_TOL = 1e-12
# convergence: off-diagonal Frobenius mass relative to the full Frobenius norm
JACOBI_RELATIVE_TOL = 1e-14
# components at or below this modulus are ignored when choosing the pivot
# entry used for eigenvector ordering and phase fixing
PIVOT_MODULUS = 1e-9
_MAX_SWEEPS = 64


def as_complex_matrix(entries) -> np.ndarray:
    """Coerce to a square complex128 matrix, rejecting non-finite entries."""
    m = np.array(entries, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] < 1:
        raise ValueError("matrix must have dimension >= 1")
    bad = np.argwhere(~np.isfinite(m.real) | ~np.isfinite(m.imag))
    if bad.size:
        i, j = bad[0]
        raise ValueError(f"non-finite matrix entry at ({i}, {j}): {m[i, j]}")
    return m


def as_state_vector(amplitudes, *, norm_tol: float = 1e-10) -> np.ndarray:
    """Coerce to a normalized complex128 vector."""
    v = np.array(amplitudes, dtype=np.complex128)
    if v.ndim != 1 or v.size < 1:
        raise ValueError(f"expected a vector, got shape {v.shape}")
    bad = np.argwhere(~np.isfinite(v.real) | ~np.isfinite(v.imag))
    if bad.size:
        raise ValueError(f"non-finite amplitude at index {bad[0][0]}: {v[bad[0][0]]}")
    norm = float(np.linalg.norm(v))
    if abs(norm - 1.0) > norm_tol:
        raise ValueError(f"state vector norm {norm!r} differs from 1 by more than {norm_tol:g}")
    return v


def hermiticity_defect(m: np.ndarray) -> float:
    """Largest entry modulus of m minus its conjugate transpose."""
    return float(np.max(np.abs(m - m.conj().T)))


def _require_hermitian(m: np.ndarray, tol: float) -> None:
    d = np.abs(m - m.conj().T)
    worst = float(np.max(d))
    if worst > tol:
        i, j = np.unravel_index(int(np.argmax(d)), d.shape)
        raise ValueError(
            f"matrix is not Hermitian within {tol:g}: entry ({i}, {j}) = {m[i, j]} "
            f"vs conjugate of ({j}, {i}) = {np.conj(m[j, i])}, defect {worst:.3e}"
        )


@dataclass(frozen=True)
class EigenSystem:
    """Spectral decomposition of a Hermitian matrix.

    eigenvalues are real and ascending; eigenvectors[:, k] belongs to
    eigenvalues[k] and the column set is unitary.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]


def _offdiag_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a - np.diag(np.diagonal(a))))


def _rotate(a: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    """One Jacobi rotation zeroing a[p, q], applied in place to a and v."""
    apq = a[p, q]
    mod = abs(apq)
    if mod == 0.0:
        return
    phase = apq / mod
    tau = (a[q, q].real - a[p, p].real) / (2.0 * mod)
    if tau == 0.0:
        t = 1.0
    else:
        t = np.sign(tau) / (abs(tau) + np.sqrt(1.0 + tau * tau))
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c
    # columns p, q of the rotation: gp = (c, -s*conj(phase)), gq = (s*phase, c)
    gpp, gpq = c, -s * np.conj(phase)
    gqp, gqq = s * phase, c
    colp = a[:, p] * gpp + a[:, q] * gpq
    colq = a[:, p] * gqp + a[:, q] * gqq
    a[:, p] = colp
    a[:, q] = colq
    rowp = np.conj(gpp) * a[p, :] + np.conj(gpq) * a[q, :]
    rowq = np.conj(gqp) * a[p, :] + np.conj(gqq) * a[q, :]
    a[p, :] = rowp
    a[q, :] = rowq
    vcolp = v[:, p] * gpp + v[:, q] * gpq
    vcolq = v[:, p] * gqp + v[:, q] * gqq
    v[:, p] = vcolp
    v[:, q] = vcolq


def _pivot_index(column: np.ndarray) -> int:
    big = np.flatnonzero(np.abs(column) > PIVOT_MODULUS)
    # a unit vector always has a component above any threshold < 1/sqrt(dim);
    # fall back to the largest entry for safety
    return int(big[0]) if big.size else int(np.argmax(np.abs(column)))


def _canonicalize(lam: np.ndarray, v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = lam.shape[0]
    order = np.argsort(lam, kind="stable")
    lam = lam[order]
    v = v[:, order]
    # reorder degenerate groups by the pivot index so column order does not
    # depend on rotation history
    scale = float(np.max(np.abs(lam))) if n else 0.0
    gap = max(1e-12, 1e-12 * scale)
    i = 0
    while i < n:
        j = i + 1
        while j < n and lam[j] - lam[j - 1] <= gap:
            j += 1
        if j - i > 1:
            pivots = [_pivot_index(v[:, k]) for k in range(i, j)]
            sub = i + np.argsort(np.asarray(pivots), kind="stable")
            lam[i:j] = lam[sub]
            v[:, i:j] = v[:, sub]
        i = j
    for k in range(n):
        anchor = v[_pivot_index(v[:, k]), k]
        mod = abs(anchor)
        if mod > 0.0:
            v[:, k] *= np.conj(anchor) / mod
    return lam, v


def eig_hermitian(m, *, hermiticity_tol: float = HERMITICITY_TOL) -> EigenSystem:
    """Full eigensystem of a Hermitian matrix by cyclic Jacobi sweeps."""
    a = as_complex_matrix(m)
    _require_hermitian(a, hermiticity_tol)
    # work on the Hermitian part: an anti-Hermitian residue inside the
    # tolerance would otherwise put a floor under the off-diagonal norm
    a = (a + a.conj().T) / 2.0
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    scale = float(np.linalg.norm(a))
    if scale > 0.0:
        for _ in range(_MAX_SWEEPS):
            if _offdiag_norm(a) <= JACOBI_RELATIVE_TOL * scale:
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    _rotate(a, v, p, q)
        else:
            raise ArithmeticError(
                f"Jacobi iteration did not converge in {_MAX_SWEEPS} sweeps "
                f"(dimension {n}, residual {_offdiag_norm(a):.3e})"
            )
    lam = np.real(np.diagonal(a)).copy()
    lam, v = _canonicalize(lam, v)
    lam.setflags(write=False)
    v.setflags(write=False)
    return EigenSystem(lam, v)


def expm_minus_i(m, t: float, *, hermiticity_tol: float = HERMITICITY_TOL) -> np.ndarray:
    """Unitary exp(-i*m*t) for Hermitian m, via the eigendecomposition."""
    if not np.isfinite(t):
        raise ValueError(f"evolution time must be finite, got {t!r}")
    es = eig_hermitian(m, hermiticity_tol=hermiticity_tol)
    phases = np.exp(-1j * es.eigenvalues * t)
    return (es.eigenvectors * phases) @ es.eigenvectors.conj().T


def apply(m, v) -> np.ndarray:
    """Dimension-checked matrix times vector."""
    m = np.asarray(m, dtype=np.complex128)
    v = np.asarray(v, dtype=np.complex128)
    if m.ndim != 2 or v.ndim != 1 or m.shape[1] != v.shape[0]:
        raise ValueError(f"dimension mismatch: matrix {m.shape} applied to vector {v.shape}")
    return m @ v
