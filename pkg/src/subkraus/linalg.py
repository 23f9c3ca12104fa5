"""Dense complex-matrix primitives.

Tensor products, partial traces over either factor of a bipartite index,
a cyclic Jacobi eigensolver for Hermitian matrices, and Hamiltonian
evolution unitaries. Everything here is a pure function over immutable
values; inputs are never mutated.

The bipartite index convention is subsystem-1 major: the composite row
index is ``i * d2 + k`` for subsystem-1 index ``i`` and subsystem-2
index ``k``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Structural tolerance guards exact linear-algebra identities; the looser
# model tolerance absorbs cancellation in closed-form channel coefficients.
STRUCTURAL_TOL = 1e-12
MODEL_TOL = 1e-8

# Jacobi sweep control: rotations stop once every off-diagonal entry is below
# this fraction of the input's max-entry norm.
_JACOBI_THRESHOLD = 1e-14
_JACOBI_MAX_SWEEPS = 100


def as_complex_matrix(m, name: str = "matrix") -> np.ndarray:
    """Coerce to a square complex array, rejecting anything else."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ValueError(f"{name} must be a square matrix, got shape {a.shape}")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def max_abs(m: np.ndarray) -> float:
    return float(np.abs(m).max())


def hermiticity_defect(m: np.ndarray) -> float:
    return max_abs(m - dagger(m))


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product; entry ((i*db+k),(j*db+l)) = a[i,j] * b[k,l]."""
    return np.kron(as_complex_matrix(a, "a"), as_complex_matrix(b, "b"))


def partial_trace(m, d1: int, d2: int, keep: int) -> np.ndarray:
    """Trace out one factor of a (d1*d2)-dimensional operator.

    ``keep=1`` returns the d1-dimensional operator with subsystem 2 summed
    out, ``keep=2`` the mirror image.
    """
    a = as_complex_matrix(m)
    if d1 < 1 or d2 < 1:
        raise ValueError(f"subsystem dimensions must be positive, got {d1}, {d2}")
    if a.shape[0] != d1 * d2:
        raise ValueError(
            f"dimension mismatch: matrix is {a.shape[0]}-dimensional, "
            f"but d1*d2 = {d1 * d2}"
        )
    blocks = a.reshape(d1, d2, d1, d2)
    if keep == 1:
        return np.einsum("ikjk->ij", blocks)
    if keep == 2:
        return np.einsum("ikil->kl", blocks)
    raise ValueError(f"keep must be 1 or 2, got {keep}")


@dataclass(frozen=True)
class EigenDecomposition:
    """Ascending eigenvalues with the matching eigenvector columns.

    ``unitary[:, p]`` is the eigenvector for ``eigenvalues[p]``; the phase of
    each column is fixed by making its largest-magnitude component real and
    positive, and exact eigenvalue ties are ordered by the first differing
    eigenvector component, so the output is deterministic.
    """

    eigenvalues: np.ndarray
    unitary: np.ndarray


def hermitian_eig(h, tol: float = STRUCTURAL_TOL) -> EigenDecomposition:
    """Diagonalize a Hermitian matrix with cyclic Jacobi rotations.

    Unconditionally stable at the small dimensions this library targets and
    fully deterministic (fixed rotation order, fixed phase convention).
    """
    a = as_complex_matrix(h, "h")
    defect = hermiticity_defect(a)
    if defect > tol:
        raise ValueError(
            f"matrix is not Hermitian: max |h - h^dagger| = {defect:.3e} > {tol:.1e}"
        )
    a = (a + dagger(a)) / 2
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = max_abs(a)
    if scale == 0.0:
        return EigenDecomposition(np.zeros(n), v)
    threshold = _JACOBI_THRESHOLD * scale

    converged = False
    for _ in range(_JACOBI_MAX_SWEEPS):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= threshold:
                    continue
                rotated = True
                phase = apq / mag
                theta = (a[q, q].real - a[p, p].real) / (2 * mag)
                if theta >= 0.0:
                    t = 1.0 / (theta + np.hypot(theta, 1.0))
                else:
                    t = -1.0 / (-theta + np.hypot(theta, 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * np.conj(phase) * col_q
                a[:, q] = s * phase * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * phase * row_q
                a[q, :] = s * np.conj(phase) * row_p + c * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                vec_p = v[:, p].copy()
                vec_q = v[:, q].copy()
                v[:, p] = c * vec_p - s * np.conj(phase) * vec_q
                v[:, q] = s * phase * vec_p + c * vec_q
        if not rotated:
            converged = True
            break
    if not converged:
        off = a - np.diag(np.diag(a))
        if max_abs(off) > threshold:
            raise ArithmeticError(
                f"Jacobi eigensolver did not converge in {_JACOBI_MAX_SWEEPS} sweeps"
            )

    w = np.diag(a).real.copy()
    for p in range(n):
        col = v[:, p]
        k = int(np.argmax(np.abs(col)))
        pivot = col[k]
        if abs(pivot) > 0.0:
            v[:, p] = col * (np.conj(pivot) / abs(pivot))

    def sort_key(p: int):
        col = v[:, p]
        parts = []
        for comp in col:
            parts.append(float(comp.real))
            parts.append(float(comp.imag))
        return (float(w[p]), *parts)

    order = sorted(range(n), key=sort_key)
    return EigenDecomposition(w[order], v[:, order])


def evolution_unitary(h, t: float, tol: float = STRUCTURAL_TOL) -> np.ndarray:
    """exp(-i*h*t) for Hermitian h (units with hbar = 1)."""
    eig = hermitian_eig(h, tol=tol)
    phases = np.exp(-1j * eig.eigenvalues * float(t))
    return (eig.unitary * phases) @ dagger(eig.unitary)
