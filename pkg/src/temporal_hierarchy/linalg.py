"""Dense complex linear algebra for small Hilbert spaces (dimensions 2, 4, 8).

Everything operates on plain ``numpy`` complex arrays. Subsystem index 0 is
always the leftmost tensor factor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HERM_TOL = 1e-12
PSD_TOL = 1e-10

ID2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

#: identity plus the three Pauli matrices, indexed 0..3
PAULIS = (ID2, PAULI_X, PAULI_Y, PAULI_Z)


def dagger(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return m.conj().T


def is_hermitian(m: np.ndarray, tol: float = HERM_TOL) -> bool:
    return m.shape[0] == m.shape[1] and np.max(np.abs(m - dagger(m))) <= tol


def kron(*ms: np.ndarray) -> np.ndarray:
    """Tensor product of one or more matrices, leftmost factor first."""
    out = np.asarray(ms[0], dtype=complex)
    for m in ms[1:]:
        out = np.kron(out, m)
    return out


def _check_dims(m: np.ndarray, dims) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    total = int(np.prod(dims))
    if m.shape != (total, total):
        raise ValueError(
            f"matrix shape {m.shape} does not match subsystem dims {dims}"
        )
    return dims


def partial_trace(m: np.ndarray, dims, keep) -> np.ndarray:
    """Trace out every subsystem not listed in ``keep``.

    ``dims`` are the subsystem dimensions, leftmost factor first; ``keep`` is
    an iterable of subsystem indices to retain, returned in ascending order.
    """
    dims = _check_dims(m, dims)
    n = len(dims)
    keep = sorted(int(k) for k in (keep if np.iterable(keep) else [keep]))
    if any(k < 0 or k >= n for k in keep):
        raise ValueError(f"keep indices {keep} out of range for {n} subsystems")
    traced = [i for i in range(n) if i not in keep]

    tensor = m.reshape(dims + dims)
    remaining = list(dims)
    for idx in sorted(traced, reverse=True):
        tensor = np.trace(tensor, axis1=idx, axis2=idx + len(remaining))
        del remaining[idx]
    d = int(np.prod(remaining)) if remaining else 1
    return tensor.reshape(d, d)


def partial_transpose(m: np.ndarray, dims, which: int) -> np.ndarray:
    """Transpose a single subsystem. Involutive and trace preserving."""
    dims = _check_dims(m, dims)
    n = len(dims)
    which = int(which)
    if which < 0 or which >= n:
        raise ValueError(f"subsystem index {which} out of range for {n} subsystems")
    tensor = m.reshape(dims + dims)
    tensor = np.swapaxes(tensor, which, which + n)
    d = int(np.prod(dims))
    return tensor.reshape(d, d)


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues (real, ascending) and eigenvectors (columns) of a Hermitian matrix."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _jacobi_symmetric(a: np.ndarray, sweep_tol: float, max_sweeps: int = 60):
    """Cyclic Jacobi diagonalization of a real symmetric matrix.

    Returns (eigenvalues ascending, eigenvector columns). Pure numpy row and
    column rotations; deterministic for identical input.
    """
    n = a.shape[0]
    A = a.copy()
    V = np.eye(n)
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.triu(A, 1) ** 2))
        if off <= sweep_tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= sweep_tol / (n * n):
                    continue
                theta = 0.5 * np.arctan2(2.0 * apq, A[p, p] - A[q, q])
                c, s = np.cos(theta), np.sin(theta)
                # columns, then rows: A <- R^T A R
                cp_, cq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * cp_ + s * cq
                A[:, q] = -s * cp_ + c * cq
                rp, rq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * rp + s * rq
                A[q, :] = -s * rp + c * rq
                A[p, q] = A[q, p] = 0.0
                vp, vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * vp + s * vq
                V[:, q] = -s * vp + c * vq
    vals = np.diag(A).copy()
    order = np.argsort(vals, kind="stable")
    return vals[order], V[:, order]


def herm_eig(m: np.ndarray) -> Spectrum:
    """Eigendecomposition of a complex Hermitian matrix.

    Runs cyclic Jacobi on the 2n x 2n real symmetric embedding
    ``[[Re, -Im], [Im, Re]]``; each eigenvalue of the embedding appears twice
    and the duplicated eigenvectors are collapsed back to n complex ones.
    Real symmetric input skips the embedding.
    """
    m = np.asarray(m, dtype=complex)
    if not is_hermitian(m):
        raise ValueError("herm_eig requires a Hermitian matrix")
    n = m.shape[0]
    re, im = m.real, m.imag
    scale = max(1.0, float(np.max(np.abs(m))))
    if np.max(np.abs(im)) <= 1e-300:
        vals, vecs = _jacobi_symmetric(re, sweep_tol=1e-15 * scale * n)
        return Spectrum(eigenvalues=vals, eigenvectors=vecs.astype(complex))
    embedded = np.block([[re, -im], [im, re]])
    vals, vecs = _jacobi_symmetric(embedded, sweep_tol=1e-15 * scale * n)

    eigenvalues = np.empty(n)
    eigenvectors = np.empty((n, n), dtype=complex)
    found = 0
    for k in range(2 * n):
        if found == n:
            break
        z = vecs[:n, k] + 1j * vecs[n:, k]
        # remove directions already captured by a paired embedded vector
        for j in range(found):
            z = z - np.vdot(eigenvectors[:, j], z) * eigenvectors[:, j]
        norm = np.linalg.norm(z)
        if norm < 1e-6:
            continue
        z = z / norm
        for j in range(found):  # second pass keeps orthonormality tight
            z = z - np.vdot(eigenvectors[:, j], z) * eigenvectors[:, j]
        z = z / np.linalg.norm(z)
        eigenvalues[found] = vals[k]
        eigenvectors[:, found] = z
        found += 1
    if found != n:
        raise RuntimeError("eigenvector extraction failed to span the space")
    return Spectrum(eigenvalues=eigenvalues, eigenvectors=eigenvectors)


def trace_norm(m: np.ndarray) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    return float(np.sum(np.abs(herm_eig(m).eigenvalues)))


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Half the trace norm of ``a - b``."""
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    return 0.5 * trace_norm(a - b)


def bloch_decompose(m: np.ndarray) -> np.ndarray:
    """Coefficients ``c_k = tr(sigma_k m)`` of a Hermitian 2x2 matrix.

    The matrix is recovered as ``sum_k c_k sigma_k / 2``.
    """
    m = np.asarray(m, dtype=complex)
    if m.shape != (2, 2):
        raise ValueError("bloch_decompose expects a 2x2 matrix")
    return np.array([np.trace(s @ m).real for s in PAULIS])


def bloch_matrix(coeffs) -> np.ndarray:
    """Inverse of :func:`bloch_decompose`."""
    coeffs = np.asarray(coeffs, dtype=float)
    return sum(c * s for c, s in zip(coeffs, PAULIS)) / 2.0


def assert_density_matrix(rho: np.ndarray, name: str = "rho") -> None:
    """Validate hermiticity, unit trace and positivity of a density matrix."""
    if not is_hermitian(rho):
        raise ValueError(f"{name} is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > HERM_TOL * 10:
        raise ValueError(f"{name} does not have unit trace")
    if float(np.min(herm_eig(rho).eigenvalues)) < -PSD_TOL:
        raise ValueError(f"{name} has a negative eigenvalue")


def projector(axis, outcome: int = +1) -> np.ndarray:
    """Rank-1 projector ``(1 + a n.sigma)/2`` onto outcome ``a`` along a Bloch axis."""
    axis = np.asarray(axis, dtype=float)
    if abs(np.linalg.norm(axis) - 1.0) > PSD_TOL:
        raise ValueError("measurement axis must be a unit Bloch vector")
    n_sigma = axis[0] * PAULI_X + axis[1] * PAULI_Y + axis[2] * PAULI_Z
    return (ID2 + outcome * n_sigma) / 2.0
