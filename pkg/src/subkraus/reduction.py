"""Subsystem Kraus extraction from a composite completely positive map.

Given a trace-preserving CP map on a bipartite system prepared in a product
state, the reduced dynamics of either factor is again CP and trace
preserving, and its Kraus operators can be computed exactly:

1. expand every composite Kraus operator over a product basis of Hermitian
   operators, ``c[k, i, j] = tr(K_k (g_i (x) h_j))``;
2. contract the coefficients with the traced-out factor's initial state into
   the Hermitian positive-semidefinite mixing matrix
   ``b[i, i'] = sum_k tr(D_ki rho D_ki'^dagger)`` with ``D_ki = sum_j c[k,i,j] h_j``;
3. diagonalize ``b``;
4. assemble subsystem operators ``K_p = sqrt(b_p) sum_i u[i, p] g_i``.

The same machinery diagnoses when no state-independent reduced map exists:
branch-wise reductions of separable (but correlated) preparations generally
disagree, an equal-marginal probe exhibits marginal dynamics that depend on
discarded correlations, and a per-operator rank test detects maps whose
operators all factorize into tensor products.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .basis import OperatorBasis, build_hermitian_basis
from .channels import DensityMatrix, KrausMap, channel_distance, apply_matrix
from .linalg import (
    STRUCTURAL_TOL,
    as_complex_matrix,
    hermitian_eig,
    hermiticity_defect,
    max_abs,
    partial_trace,
)

# B eigenvalues below this are treated as a diagnostic failure rather than
# rounding noise; the Jacobi solver leaves residuals around 1e-12 while a
# genuinely inconsistent input produces order-one violations.
B_EIG_DIAGNOSTIC_TOL = 1e-8

DEFAULT_TRUNCATION = 1e-12


class NonPositiveBMatrixError(RuntimeError):
    """The mixing matrix acquired a genuinely negative eigenvalue.

    Signals a non-CP parent map or a traced-out factor that is not a valid
    state; with valid inputs the matrix is positive semidefinite by
    construction.
    """

    def __init__(self, min_eigenvalue: float):
        self.min_eigenvalue = float(min_eigenvalue)
        super().__init__(
            f"mixing matrix has negative eigenvalue {self.min_eigenvalue:.6e}"
        )


@dataclass(frozen=True)
class Bipartition:
    """Dimensions of the two tensor factors, subsystem-1 major."""

    d1: int
    d2: int

    def __post_init__(self):
        if self.d1 < 1 or self.d2 < 1:
            raise ValueError(f"subsystem dimensions must be positive, got {self.d1}, {self.d2}")

    @property
    def dim(self) -> int:
        return self.d1 * self.d2


@dataclass(frozen=True)
class CoefficientTensor:
    """Product-basis coefficients of a Kraus list, indexed [k][i][j]."""

    values: np.ndarray
    d1: int
    d2: int

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex).copy()
        expected = (self.d1 * self.d1, self.d2 * self.d2)
        if v.ndim != 3 or v.shape[1:] != expected:
            raise ValueError(
                f"coefficient tensor must have shape (k, {expected[0]}, {expected[1]}), "
                f"got {v.shape}"
            )
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def operator_count(self) -> int:
        return self.values.shape[0]

    def swapped(self) -> "CoefficientTensor":
        """Same coefficients with the subsystem roles exchanged."""
        return CoefficientTensor(self.values.transpose(0, 2, 1), self.d2, self.d1)


@dataclass(frozen=True)
class BMatrix:
    """Hermitian mixing matrix b[i, i'] for one traced-out state."""

    values: np.ndarray
    time_label: Optional[float] = None

    def __post_init__(self):
        v = as_complex_matrix(self.values, "B matrix").copy()
        defect = hermiticity_defect(v)
        if defect > STRUCTURAL_TOL:
            raise ValueError(f"B matrix is not Hermitian (defect {defect:.3e})")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def size(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class ReductionResult:
    """Everything produced by one subsystem reduction.

    ``eigenvalues`` are all of b's eigenvalues, descending and clamped at
    zero, with ``mixing[:, p]`` the matching eigenvectors; ``subsystem_map``
    keeps only the operators whose eigenvalue survived truncation. For
    ``keep=2`` reductions the stored coefficients are reordered so that the
    kept subsystem's basis index always comes first.
    """

    coefficients: CoefficientTensor
    b: BMatrix
    eigenvalues: np.ndarray
    mixing: np.ndarray
    subsystem_map: KrausMap

    @property
    def truncated_count(self) -> int:
        return len(self.eigenvalues) - len(self.subsystem_map.operators)


@dataclass(frozen=True)
class SeparableEnsemble:
    """Convex mixture of product states, sum_m p_m s1_m (x) s2_m."""

    weights: tuple[float, ...]
    pairs: tuple[tuple[DensityMatrix, DensityMatrix], ...]

    def __post_init__(self):
        w = tuple(float(x) for x in self.weights)
        if len(w) == 0 or len(w) != len(self.pairs):
            raise ValueError("need one weight per product pair")
        if any(x < 0 for x in w):
            raise ValueError("weights must be nonnegative")
        if abs(sum(w) - 1.0) > STRUCTURAL_TOL:
            raise ValueError(f"weights sum to {sum(w)}, expected 1")
        d1 = self.pairs[0][0].dim
        d2 = self.pairs[0][1].dim
        for m, (s1, s2) in enumerate(self.pairs):
            if s1.dim != d1 or s2.dim != d2:
                raise ValueError(f"pair {m} has inconsistent dimensions")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "pairs", tuple(self.pairs))


@dataclass(frozen=True)
class DomainVerdict:
    """Whether branch reductions agree as superoperators."""

    uniform: bool
    max_pairwise_distance: float
    common_map: Optional[KrausMap]


@dataclass(frozen=True)
class OperatorFactorization:
    """Per-operator tensor-product verdict from the coefficient rank test."""

    is_product: bool
    is_zero: bool
    singular_ratio: float


def c_coefficients(
    kmap: KrausMap,
    split: Bipartition,
    basis1: OperatorBasis,
    basis2: OperatorBasis,
) -> CoefficientTensor:
    """c[k, i, j] = tr(K_k (g_i (x) h_j)) for each composite operator."""
    if kmap.dim != split.dim:
        raise ValueError(
            f"dimension mismatch: map is {kmap.dim}-dimensional, split gives {split.dim}"
        )
    if basis1.dim != split.d1 or basis2.dim != split.d2:
        raise ValueError(
            f"basis dimensions ({basis1.dim}, {basis2.dim}) do not match the "
            f"bipartition ({split.d1}, {split.d2})"
        )
    d1, d2 = split.d1, split.d2
    stack = np.stack(kmap.operators).reshape(len(kmap.operators), d1, d2, d1, d2)
    values = np.einsum(
        "kabcd,ica,jdb->kij", stack, basis1.stacked(), basis2.stacked()
    )
    return CoefficientTensor(values, d1, d2)


def b_matrix(
    coeffs: CoefficientTensor,
    rho2: DensityMatrix,
    basis2: OperatorBasis,
    time_label: Optional[float] = None,
) -> BMatrix:
    """Contract coefficients with the traced-out state.

    Uses the operator intermediates D_ki = sum_j c[k,i,j] h_j, so that
    b[i, i'] = sum_k tr(D_ki rho2 D_ki'^dagger).
    """
    if basis2.dim != coeffs.d2:
        raise ValueError(
            f"basis dimension {basis2.dim} does not match coefficient d2 = {coeffs.d2}"
        )
    if rho2.dim != coeffs.d2:
        raise ValueError(
            f"state dimension {rho2.dim} does not match coefficient d2 = {coeffs.d2}"
        )
    d_ops = np.einsum("kij,jab->kiab", coeffs.values, basis2.stacked())
    values = np.einsum("kiab,bc,kjac->ij", d_ops, rho2.matrix, d_ops.conj())
    return BMatrix(values, time_label)


def reduce_subsystem(
    kmap: KrausMap,
    split: Bipartition,
    rho_other: DensityMatrix,
    keep: int = 1,
    truncation: float = DEFAULT_TRUNCATION,
) -> ReductionResult:
    """Kraus operators of the reduced dynamics of one subsystem.

    ``rho_other`` is the initial state of the factor being traced out; the
    composite preparation is the product of it with an arbitrary state of the
    kept factor. Eigenvalues of b below ``truncation`` times the largest are
    dropped together with their (numerically zero) operators. ``keep=2`` runs
    the mirrored computation by swapping the coefficient indices.
    """
    if keep not in (1, 2):
        raise ValueError(f"keep must be 1 or 2, got {keep}")
    if truncation < 0:
        raise ValueError("truncation must be nonnegative")
    basis1 = build_hermitian_basis(split.d1)
    basis2 = build_hermitian_basis(split.d2)
    coeffs = c_coefficients(kmap, split, basis1, basis2)
    if keep == 1:
        own_basis, traced_basis = basis1, basis2
    else:
        coeffs = coeffs.swapped()
        own_basis, traced_basis = basis2, basis1
    if rho_other.dim != traced_basis.dim:
        raise ValueError(
            f"rho_other has dimension {rho_other.dim}, expected {traced_basis.dim}"
        )
    b = b_matrix(coeffs, rho_other, traced_basis)
    eig = hermitian_eig(b.values)
    if eig.eigenvalues[0] < -B_EIG_DIAGNOSTIC_TOL:
        raise NonPositiveBMatrixError(eig.eigenvalues[0])
    order = np.arange(len(eig.eigenvalues))[::-1]
    eigenvalues = np.clip(eig.eigenvalues[order], 0.0, None)
    mixing = eig.unitary[:, order]
    largest = eigenvalues[0]
    if largest == 0.0:
        raise ValueError("mixing matrix is zero; the parent map has no action")
    kept = eigenvalues >= truncation * largest
    stack = own_basis.stacked()
    operators = tuple(
        np.sqrt(eigenvalues[p]) * np.einsum("i,iab->ab", mixing[:, p], stack)
        for p in range(len(eigenvalues))
        if kept[p]
    )
    subsystem_map = KrausMap(
        own_basis.dim, operators, trace_preserving=kmap.trace_preserving
    )
    return ReductionResult(coeffs, b, eigenvalues, mixing, subsystem_map)


def reduce_separable_ensemble(
    kmap: KrausMap,
    split: Bipartition,
    ensemble: SeparableEnsemble,
    truncation: float = DEFAULT_TRUNCATION,
) -> list[ReductionResult]:
    """One subsystem-1 reduction per ensemble branch (traced factor s2_m)."""
    if ensemble.pairs[0][0].dim != split.d1 or ensemble.pairs[0][1].dim != split.d2:
        raise ValueError("ensemble dimensions do not match the bipartition")
    return [
        reduce_subsystem(kmap, split, sigma2, keep=1, truncation=truncation)
        for (_, sigma2) in ensemble.pairs
    ]


def reduced_domain_verdict(
    branches: list[ReductionResult], tol: float = 1e-10
) -> DomainVerdict:
    """Do all branch maps agree as superoperators?

    When they do, a single Kraus form is valid on every mixture of the branch
    preparations, i.e. the dynamics is CP on that reduced domain; when they
    do not, no state-independent Kraus form exists there.
    """
    if len(branches) == 0:
        raise ValueError("need at least one branch")
    dims = {br.subsystem_map.dim for br in branches}
    if len(dims) != 1:
        raise ValueError(f"branches have mixed dimensions {sorted(dims)}")
    worst = 0.0
    for i in range(len(branches)):
        for j in range(i + 1, len(branches)):
            worst = max(
                worst,
                channel_distance(branches[i].subsystem_map, branches[j].subsystem_map),
            )
    uniform = worst <= tol
    return DomainVerdict(uniform, worst, branches[0].subsystem_map if uniform else None)


def correlated_probe(
    kmap: KrausMap,
    split: Bipartition,
    state_a: DensityMatrix,
    state_b: DensityMatrix,
) -> float:
    """Marginal-dynamics discrepancy between two equal-marginal preparations.

    The two composite states must have identical subsystem-1 marginals. A
    strictly positive return shows that the evolved marginal depends on the
    discarded part of the preparation, so no state-independent subsystem map
    can cover a domain containing both.
    """
    if state_a.dim != split.dim or state_b.dim != split.dim:
        raise ValueError("probe states must live on the composite dimension")
    if kmap.dim != split.dim:
        raise ValueError("map dimension does not match the bipartition")
    marg_a = partial_trace(state_a.matrix, split.d1, split.d2, keep=1)
    marg_b = partial_trace(state_b.matrix, split.d1, split.d2, keep=1)
    gap = max_abs(marg_a - marg_b)
    if gap > STRUCTURAL_TOL:
        raise ValueError(
            f"probe states must have equal subsystem-1 marginals "
            f"(difference {gap:.3e}); the comparison is meaningless otherwise"
        )
    out_a = partial_trace(apply_matrix(kmap, state_a.matrix), split.d1, split.d2, keep=1)
    out_b = partial_trace(apply_matrix(kmap, state_b.matrix), split.d1, split.d2, keep=1)
    return max_abs(out_a - out_b)


def factorization_check(
    coeffs: CoefficientTensor, tol: float = 1e-10
) -> tuple[OperatorFactorization, ...]:
    """Tensor-product test: operator k factorizes iff c[k] has rank one.

    Rank is judged by the ratio of the second to the largest singular value;
    an all-zero operator is reported as a product with ``is_zero`` set.
    """
    out = []
    for k in range(coeffs.operator_count):
        s = np.linalg.svd(coeffs.values[k], compute_uv=False)
        if s[0] == 0.0:
            out.append(OperatorFactorization(True, True, 0.0))
            continue
        ratio = float(s[1] / s[0]) if len(s) > 1 else 0.0
        out.append(OperatorFactorization(ratio <= tol, False, ratio))
    return tuple(out)
