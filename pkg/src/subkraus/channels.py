"""Quantum states and Kraus-represented dynamical maps.

A map is stored as an explicit operator list; trace preservation is an
asserted construction flag rather than an inferred property, so
non-trace-preserving operator lists can still be carried around during
diagnostics. Complete positivity is witnessed through the (unnormalized)
Choi matrix, and maps are compared as superoperators through their Choi
matrices, which makes the comparison blind to the unitary mixing freedom
of Kraus decompositions.

This module also owns the JSON wire formats for operator files. Floats are
serialized with 17 significant digits so that write / read / write round
trips are byte identical.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .linalg import (
    MODEL_TOL,
    STRUCTURAL_TOL,
    as_complex_matrix,
    dagger,
    hermitian_eig,
    hermiticity_defect,
    max_abs,
)

# Choi eigenvalues above this (negative) floor count as nonnegative.
CP_EIG_TOL = 1e-10
_CHOI_TRACE_TOL = 1e-10


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite state."""

    matrix: np.ndarray

    def __post_init__(self):
        m = as_complex_matrix(self.matrix, "density matrix").copy()
        defect = hermiticity_defect(m)
        if defect > STRUCTURAL_TOL:
            raise ValueError(f"density matrix is not Hermitian (defect {defect:.3e})")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > STRUCTURAL_TOL:
            raise ValueError(f"density matrix trace is {tr}, expected 1")
        w = hermitian_eig(m).eigenvalues
        if w[0] < -STRUCTURAL_TOL:
            raise ValueError(f"density matrix has negative eigenvalue {w[0]:.3e}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def pure_state(amplitudes) -> DensityMatrix:
    """Projector onto the given state vector (normalized if necessary)."""
    v = np.asarray(amplitudes, dtype=complex).reshape(-1)
    norm = np.sqrt(float(np.vdot(v, v).real))
    if norm == 0.0:
        raise ValueError("state vector must be nonzero")
    v = v / norm
    return DensityMatrix(np.outer(v, v.conj()))


def maximally_mixed(d: int) -> DensityMatrix:
    return DensityMatrix(np.eye(d, dtype=complex) / d)


@dataclass(frozen=True)
class KrausMap:
    """An ordered list of same-dimension Kraus operators.

    When ``trace_preserving`` is asserted, the completeness condition
    ``sum_k K_k^dagger K_k = I`` is checked at model tolerance (1e-8).
    """

    dim: int
    operators: tuple[np.ndarray, ...]
    trace_preserving: bool = True

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"dimension must be positive, got {self.dim}")
        if len(self.operators) == 0:
            raise ValueError("a Kraus map needs at least one operator")
        ops = []
        for i, op in enumerate(self.operators):
            a = as_complex_matrix(op, f"operators[{i}]").copy()
            if a.shape[0] != self.dim:
                raise ValueError(
                    f"operators[{i}] has dimension {a.shape[0]}, expected {self.dim}"
                )
            a.setflags(write=False)
            ops.append(a)
        object.__setattr__(self, "operators", tuple(ops))
        if self.trace_preserving:
            defect = completeness_defect(self)
            if defect > MODEL_TOL:
                raise ValueError(
                    f"operators violate the completeness condition "
                    f"(defect {defect:.3e} > {MODEL_TOL:.1e}); "
                    f"construct with trace_preserving=False to keep them anyway"
                )

    @classmethod
    def from_operators(cls, operators, trace_preserving: bool = True) -> "KrausMap":
        first = as_complex_matrix(operators[0], "operators[0]")
        return cls(first.shape[0], tuple(operators), trace_preserving)


def completeness_defect(kmap: KrausMap) -> float:
    """Max-entry norm of sum_k K_k^dagger K_k - I."""
    s = np.zeros((kmap.dim, kmap.dim), dtype=complex)
    for op in kmap.operators:
        s += dagger(op) @ op
    return max_abs(s - np.eye(kmap.dim))


def apply_matrix(kmap: KrausMap, m) -> np.ndarray:
    """Linear action sum_k K_k m K_k^dagger on an arbitrary matrix."""
    a = as_complex_matrix(m)
    if a.shape[0] != kmap.dim:
        raise ValueError(
            f"dimension mismatch: matrix is {a.shape[0]}-dimensional, map is {kmap.dim}"
        )
    out = np.zeros_like(a)
    for op in kmap.operators:
        out += op @ a @ dagger(op)
    return out


def apply_map(kmap: KrausMap, rho: DensityMatrix) -> DensityMatrix:
    """Evolve a state; the output is validated as a state, which requires the
    map to be trace preserving and completely positive."""
    return DensityMatrix(apply_matrix(kmap, rho.matrix))


@dataclass(frozen=True)
class ChoiMatrix:
    """Unnormalized Choi matrix of a channel on dimension ``dim``.

    Built as sum_{a,b} |a><b| (x) Phi(|a><b|); a trace-preserving channel
    gives trace equal to ``dim``.
    """

    matrix: np.ndarray
    dim: int

    def __post_init__(self):
        m = as_complex_matrix(self.matrix, "Choi matrix").copy()
        if m.shape[0] != self.dim * self.dim:
            raise ValueError(
                f"Choi matrix for dimension {self.dim} must be "
                f"{self.dim * self.dim}x{self.dim * self.dim}, got {m.shape[0]}"
            )
        defect = hermiticity_defect(m)
        if defect > STRUCTURAL_TOL:
            raise ValueError(f"Choi matrix is not Hermitian (defect {defect:.3e})")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)


def choi_matrix(kmap: KrausMap) -> ChoiMatrix:
    d = kmap.dim
    m = np.zeros((d * d, d * d), dtype=complex)
    for op in kmap.operators:
        v = op.flatten(order="F")
        m += np.outer(v, v.conj())
    choi = ChoiMatrix(m, d)
    if kmap.trace_preserving:
        tr = float(np.trace(m).real)
        if abs(tr - d) > _CHOI_TRACE_TOL:
            raise ValueError(
                f"Choi trace of a trace-preserving map must be {d}, got {tr}"
            )
    return choi


class CpVerdict(NamedTuple):
    is_cp: bool
    min_eigenvalue: float


def cp_verdict(choi: ChoiMatrix, tol: float = CP_EIG_TOL) -> CpVerdict:
    """Complete positivity holds iff the Choi matrix is positive semidefinite."""
    w = hermitian_eig(choi.matrix).eigenvalues
    lo = float(w[0])
    return CpVerdict(lo >= -tol, lo)


def channel_distance(a: KrausMap, b: KrausMap) -> float:
    """Frobenius distance between Choi matrices.

    Zero exactly when the two maps act identically on every input, whatever
    Kraus lists represent them.
    """
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    diff = choi_of_any(a) - choi_of_any(b)
    return float(np.sqrt((np.abs(diff) ** 2).sum()))


def choi_of_any(kmap: KrausMap) -> np.ndarray:
    """Choi matrix entries without the trace-preservation sanity check."""
    d = kmap.dim
    m = np.zeros((d * d, d * d), dtype=complex)
    for op in kmap.operators:
        v = op.flatten(order="F")
        m += np.outer(v, v.conj())
    return m


# ---------------------------------------------------------------------------
# JSON wire formats
# ---------------------------------------------------------------------------

def _fmt17(x: float) -> str:
    return format(float(x), ".17g")


def _entry(z: complex) -> str:
    return f"[{_fmt17(z.real)},{_fmt17(z.imag)}]"


def _matrix_json(m: np.ndarray) -> str:
    rows = []
    for row in m:
        rows.append("[" + ",".join(_entry(z) for z in row) + "]")
    return "[" + ",".join(rows) + "]"


def dump_map_json(kmap: KrausMap, label: Optional[str] = None) -> str:
    """Canonical single-line MapFile text.

    Schema: ``{"dim": d, "label": "...", "kraus": [[[[re,im], ...], ...], ...]}``
    with the label omitted when not set.
    """
    parts = [f'"dim":{kmap.dim}']
    if label is not None:
        parts.append(f'"label":{json.dumps(label)}')
    ops = ",".join(_matrix_json(op) for op in kmap.operators)
    parts.append(f'"kraus":[{ops}]')
    return "{" + ",".join(parts) + "}\n"


def _parse_matrix(rows, dim: int, where: str) -> np.ndarray:
    if not isinstance(rows, list) or len(rows) != dim:
        raise ValueError(f"{where}: expected {dim} rows")
    out = np.zeros((dim, dim), dtype=complex)
    for r, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != dim:
            raise ValueError(f"{where}[{r}]: expected {dim} entries")
        for c, entry in enumerate(row):
            if (
                not isinstance(entry, list)
                or len(entry) != 2
                or not all(isinstance(x, (int, float)) for x in entry)
            ):
                raise ValueError(f"{where}[{r}][{c}]: expected a [re, im] pair")
            out[r, c] = complex(entry[0], entry[1])
    return out


def load_map_json(text: str) -> KrausMap:
    """Parse a MapFile; the result carries ``trace_preserving=False`` so that
    completeness can be diagnosed rather than assumed."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ValueError("top level: expected an object")
    dim = doc.get("dim")
    if not isinstance(dim, int) or dim < 1:
        raise ValueError("dim: expected a positive integer")
    label = doc.get("label")
    if label is not None and not isinstance(label, str):
        raise ValueError("label: expected a string")
    kraus = doc.get("kraus")
    if not isinstance(kraus, list) or len(kraus) == 0:
        raise ValueError("kraus: expected a nonempty list of matrices")
    ops = tuple(
        _parse_matrix(rows, dim, f"kraus[{k}]") for k, rows in enumerate(kraus)
    )
    return KrausMap(dim, ops, trace_preserving=False)


def dump_density_json(rho: DensityMatrix) -> str:
    """Schema: ``{"dim": d, "rho": [[[re,im], ...], ...]}``."""
    return f'{{"dim":{rho.dim},"rho":{_matrix_json(rho.matrix)}}}\n'


def load_density_json(text: str) -> DensityMatrix:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ValueError("top level: expected an object")
    dim = doc.get("dim")
    if not isinstance(dim, int) or dim < 1:
        raise ValueError("dim: expected a positive integer")
    if "rho" not in doc:
        raise ValueError("rho: missing")
    return DensityMatrix(_parse_matrix(doc["rho"], dim, "rho"))
