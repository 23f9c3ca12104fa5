"""Orthonormal Hermitian operator bases.

The construction is the generalized Gell-Mann family normalized to
``tr(g_i g_j) = delta_ij``, ordered so that coefficient indices are stable:
identity first, then the symmetric off-diagonal pairs, the antisymmetric
pairs, and the traceless diagonal elements. At dimension 2 this is exactly
the Pauli set {I, sigma_x, sigma_y, sigma_z} / sqrt(2), so indices 0..3
carry their usual meaning.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import STRUCTURAL_TOL, as_complex_matrix, hermiticity_defect


@dataclass(frozen=True)
class OperatorBasis:
    """An ordered, orthonormal set of d*d Hermitian operators on dimension d."""

    dim: int
    elements: tuple[np.ndarray, ...]

    def __post_init__(self):
        d = self.dim
        if d < 1:
            raise ValueError(f"dimension must be positive, got {d}")
        if len(self.elements) != d * d:
            raise ValueError(
                f"basis for dimension {d} needs {d * d} elements, got {len(self.elements)}"
            )
        elems = tuple(as_complex_matrix(e, f"elements[{i}]") for i, e in enumerate(self.elements))
        for i, e in enumerate(elems):
            if e.shape[0] != d:
                raise ValueError(f"elements[{i}] has dimension {e.shape[0]}, expected {d}")
            if hermiticity_defect(e) > STRUCTURAL_TOL:
                raise ValueError(f"elements[{i}] is not Hermitian")
        stack = np.stack(elems)
        gram = np.einsum("iab,jba->ij", stack, stack)
        if np.abs(gram - np.eye(d * d)).max() > STRUCTURAL_TOL:
            raise ValueError("basis is not orthonormal under tr(g_i g_j) = delta_ij")
        if np.abs(elems[0] - np.eye(d) / np.sqrt(d)).max() > STRUCTURAL_TOL:
            raise ValueError("element 0 must be identity / sqrt(d)")
        object.__setattr__(self, "elements", elems)

    def stacked(self) -> np.ndarray:
        """All elements as one (d*d, d, d) array."""
        return np.stack(self.elements)


def build_hermitian_basis(d: int) -> OperatorBasis:
    """Generalized Gell-Mann basis for dimension d."""
    if d < 1:
        raise ValueError(f"dimension must be positive, got {d}")
    if d == 1:
        return OperatorBasis(1, (np.ones((1, 1), dtype=complex),))
    elems: list[np.ndarray] = [np.eye(d, dtype=complex) / np.sqrt(d)]
    for j in range(d):
        for k in range(j + 1, d):
            g = np.zeros((d, d), dtype=complex)
            g[j, k] = g[k, j] = 1 / np.sqrt(2)
            elems.append(g)
    for j in range(d):
        for k in range(j + 1, d):
            g = np.zeros((d, d), dtype=complex)
            g[j, k] = -1j / np.sqrt(2)
            g[k, j] = 1j / np.sqrt(2)
            elems.append(g)
    for l in range(1, d):
        diag = np.zeros(d, dtype=complex)
        diag[:l] = 1.0
        diag[l] = -l
        elems.append(np.diag(diag) / np.sqrt(l * (l + 1)))
    return OperatorBasis(d, tuple(elems))


def expand(m, basis: OperatorBasis) -> np.ndarray:
    """Coefficients c_i = tr(m g_i); complex in general, real for Hermitian m."""
    a = as_complex_matrix(m)
    if a.shape[0] != basis.dim:
        raise ValueError(
            f"dimension mismatch: matrix is {a.shape[0]}-dimensional, basis is {basis.dim}"
        )
    return np.einsum("ab,iba->i", a, basis.stacked())


def reconstruct(coefficients, basis: OperatorBasis) -> np.ndarray:
    """Sum c_i g_i; inverse of :func:`expand`."""
    c = np.asarray(coefficients, dtype=complex)
    if c.shape != (basis.dim * basis.dim,):
        raise ValueError(
            f"expected {basis.dim * basis.dim} coefficients, got shape {c.shape}"
        )
    return np.einsum("i,iab->ab", c, basis.stacked())
