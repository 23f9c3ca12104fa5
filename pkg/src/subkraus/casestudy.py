"""Two interacting qubits with one qubit weakly coupled to a thermal bath.

The model: qubit frequencies ``omega``, an Ising-type coupling ``beta`` along
z, and an Ohmic environment monitoring qubit 1 only. In the interaction
picture the composite dynamics is an eight-operator Kraus map on the qubit
pair whose time dependence enters solely through two damping rates. The
closed-form reduction of qubit 1 is a Pauli channel whose weights depend on
the initial state of qubit 2 through a single population parameter ``a``.

The six flip / dephasing operators are written down directly. The two
diagonal operators carry the populations and coherences of the diagonal
sector; their textbook closed form (normalization constants with competing
exponentials up to e^(64 tau)) cancels catastrophically in floating point,
so they are evaluated here through the spectral factorization of the
2x2 coherence Gram matrix

    M = [[(1 + x1)^2 / 4,  e],
         [e,               (1 + x2)^2 / 4]],

with x_p = exp(-16 gamma_p t) and e = exp(-8 (gamma1 + gamma2) t). This is
algebraically identical to the closed form, manifestly positive
semidefinite, and finite for arbitrarily large times.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import DensityMatrix, KrausMap
from .linalg import evolution_unitary, tensor_product

_SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
_SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

# Discriminant floor for the coherence Gram matrix; with valid rates it is
# nonnegative up to rounding, so anything below this signals broken inputs.
_DISCRIMINANT_TOL = 1e-6


class ModelInconsistencyError(RuntimeError):
    """The diagonal-sector compatibility condition failed beyond rounding."""


@dataclass(frozen=True)
class ModelParams:
    """Hamiltonian and bath parameters (units with hbar = 1).

    ``nu_max`` is the bath-mode integration cutoff; it is recorded for
    provenance but does not enter the closed-form rates, which only involve
    the spectral-density cutoff ``nu_c``.
    """

    omega: float
    beta: float
    temperature: float
    alpha: float
    nu_c: float
    nu_max: float = math.inf

    def __post_init__(self):
        if self.temperature <= 0:
            raise ValueError(f"temperature must be positive, got {self.temperature}")
        if self.nu_c <= 0:
            raise ValueError(f"spectral cutoff must be positive, got {self.nu_c}")
        if self.omega + self.beta / 2 <= 0 or self.omega - self.beta / 2 <= 0:
            raise ValueError(
                f"rates are evaluated at omega +/- beta/2 = "
                f"{self.omega + self.beta / 2}, {self.omega - self.beta / 2}; "
                f"both must be positive"
            )


@dataclass(frozen=True)
class DampingRates:
    """The two decay constants governing all time dependence."""

    gamma1: float
    gamma2: float

    def __post_init__(self):
        if self.gamma1 < 0 or self.gamma2 < 0:
            raise ValueError(
                f"damping rates must be nonnegative, got {self.gamma1}, {self.gamma2}"
            )

    def tau(self, t: float) -> float:
        """Dimensionless time (gamma1 + gamma2) * t."""
        return (self.gamma1 + self.gamma2) * t

    @property
    def asymmetry(self) -> float:
        """(gamma1 - gamma2) / (gamma1 + gamma2), in [-1, 1]."""
        total = self.gamma1 + self.gamma2
        if total == 0:
            raise ValueError("asymmetry is undefined for gamma1 + gamma2 = 0")
        return (self.gamma1 - self.gamma2) / total


def bose_occupation(nu: float, temperature: float, convention: str = "standard") -> float:
    """Mean thermal occupation at frequency nu.

    ``standard`` is 1 / (exp(nu/T) - 1). The ``printed`` alternative flips
    the sign in the exponent, 1 / (exp(-nu/T) - 1), and is strictly negative
    for positive frequency and temperature; it exists only so the consequence
    can be inspected, never as a default.
    """
    if nu <= 0:
        raise ValueError(f"frequency must be positive, got {nu}")
    if temperature <= 0:
        raise ValueError(f"temperature must be positive, got {temperature}")
    x = nu / temperature
    if convention == "standard":
        # below exp overflow the exact form is fine; past it the occupation
        # is exp(-x) to double precision anyway
        return 1.0 / math.expm1(x) if x < 700.0 else math.exp(-x)
    if convention == "printed":
        return 1.0 / math.expm1(-x)
    raise ValueError(f"unknown convention {convention!r}; use 'standard' or 'printed'")


def ohmic_spectral_density(nu: float, alpha: float, nu_c: float) -> float:
    """J(nu) = alpha * nu * exp(-nu / nu_c)."""
    if nu_c <= 0:
        raise ValueError(f"spectral cutoff must be positive, got {nu_c}")
    return alpha * nu * math.exp(-nu / nu_c)


def damping_rates(params: ModelParams, convention: str = "standard") -> DampingRates:
    """gamma_p = 4 pi J(omega +/- beta/2) nbar(omega +/- beta/2).

    With the ``printed`` occupation sign both rates come out negative and are
    rejected, since every downstream formula requires nonnegative rates.
    """
    rates = []
    for nu in (params.omega + params.beta / 2, params.omega - params.beta / 2):
        j = ohmic_spectral_density(nu, params.alpha, params.nu_c)
        n = bose_occupation(nu, params.temperature, convention)
        rates.append(4 * math.pi * j * n)
    if rates[0] < 0 or rates[1] < 0:
        raise ValueError(
            f"convention {convention!r} yields negative rates {rates[0]:.6g}, "
            f"{rates[1]:.6g}; only the 'standard' occupation produces a valid model"
        )
    return DampingRates(rates[0], rates[1])


def qubit_state(a: float) -> DensityMatrix:
    """Pure qubit state sqrt(a)|+> + sqrt(1-a)|->, with |+> the upper
    z eigenstate (first basis vector)."""
    if not 0.0 <= a <= 1.0:
        raise ValueError(f"population parameter must lie in [0, 1], got {a}")
    v = np.array([math.sqrt(a), math.sqrt(1.0 - a)], dtype=complex)
    return DensityMatrix(np.outer(v, v))


def _diagonal_sector(x1: float, x2: float, eps: float, t: float, rates: DampingRates):
    """Spectral factorization of the coherence Gram matrix.

    Returns the diagonal entries (on positions 1 and 2 of each 4x4 diagonal,
    repeated on 3 and 4) of the two diagonal Kraus operators.
    """
    m11 = (1.0 + x1) ** 2 / 4.0
    m22 = (1.0 + x2) ** 2 / 4.0
    m12 = eps
    delta = m11 - m22
    big_r = math.hypot(delta, 2.0 * m12)
    total = m11 + m22
    lam_plus = (total + big_r) / 2.0
    lam_minus = (total - big_r) / 2.0
    if lam_minus < -_DISCRIMINANT_TOL * max(lam_plus, 1.0):
        raise ModelInconsistencyError(
            f"coherence sector lost positivity at t={t} "
            f"(gamma1={rates.gamma1}, gamma2={rates.gamma2}): "
            f"eigenvalue {lam_minus:.6e}"
        )
    lam_minus = max(lam_minus, 0.0)
    if big_r == 0.0:
        # fully decohered limit: the Gram matrix is a multiple of identity
        return (0.0, math.sqrt(lam_minus)), (-math.sqrt(lam_plus), 0.0)
    norm_minus = math.sqrt(m12 * m12 + (big_r + delta) ** 2 / 4.0)
    norm_plus = math.sqrt(m12 * m12 + (big_r - delta) ** 2 / 4.0)
    k7 = (
        math.sqrt(lam_minus) * m12 / norm_minus,
        -math.sqrt(lam_minus) * (big_r + delta) / (2.0 * norm_minus),
    )
    k8 = (
        -math.sqrt(lam_plus) * m12 / norm_plus,
        -math.sqrt(lam_plus) * (big_r - delta) / (2.0 * norm_plus),
    )
    return k7, k8


def composite_kraus(t: float, rates: DampingRates) -> KrausMap:
    """The eight interaction-picture Kraus operators of the qubit pair.

    Basis order |00>, |01>, |10>, |11>. At t = 0 the first seven operators
    vanish and the eighth is -I, the identity channel; with both rates zero
    the map is frozen there for all times. All operators are Hermitian.
    """
    if t < 0:
        raise ValueError(f"time must be nonnegative, got {t}")
    x1 = math.exp(-16.0 * rates.gamma1 * t)
    x2 = math.exp(-16.0 * rates.gamma2 * t)
    eps = math.exp(-8.0 * (rates.gamma1 + rates.gamma2) * t)
    q1 = math.sqrt(max(1.0 - x1 * x1, 0.0)) / 2.0
    q2 = math.sqrt(max(1.0 - x2 * x2, 0.0)) / 2.0
    p1 = (1.0 - x1) / 2.0
    p2 = (1.0 - x2) / 2.0

    k1 = np.zeros((4, 4), dtype=complex)
    k1[1, 3] = 1j * q2
    k1[3, 1] = -1j * q2
    k2 = np.zeros((4, 4), dtype=complex)
    k2[1, 3] = -q2
    k2[3, 1] = -q2
    k3 = np.zeros((4, 4), dtype=complex)
    k3[0, 2] = q1
    k3[2, 0] = q1
    k4 = np.zeros((4, 4), dtype=complex)
    k4[0, 2] = -1j * q1
    k4[2, 0] = 1j * q1
    k5 = np.diag([0.0, -p2, 0.0, p2]).astype(complex)
    k6 = np.diag([p1, 0.0, -p1, 0.0]).astype(complex)

    (k7a, k7b), (k8a, k8b) = _diagonal_sector(x1, x2, eps, t, rates)
    k7 = np.diag([k7a, k7b, k7a, k7b]).astype(complex)
    k8 = np.diag([k8a, k8b, k8a, k8b]).astype(complex)

    return KrausMap(4, (k1, k2, k3, k4, k5, k6, k7, k8), trace_preserving=True)


def closed_form_b(t: float, rates: DampingRates, a: float) -> tuple[float, float, float, float]:
    """Explicit mixing-matrix diagonal for the qubit-1 reduction.

    ``a`` parameterizes the initial state of qubit 2. The four values sum to
    2 identically, which is the trace-preservation condition of the reduced
    Pauli channel.
    """
    if t < 0:
        raise ValueError(f"time must be nonnegative, got {t}")
    if not 0.0 <= a <= 1.0:
        raise ValueError(f"population parameter must lie in [0, 1], got {a}")
    x1 = math.exp(-16.0 * rates.gamma1 * t)
    x2 = math.exp(-16.0 * rates.gamma2 * t)
    b0 = 0.5 + (1.0 - a) / 2.0 * x2 * x2 + a / 2.0 * x1 * x1 + (1.0 - a) * x2 + a * x1
    b1 = 0.5 - (1.0 - a) / 2.0 * x2 * x2 - a / 2.0 * x1 * x1
    b3 = (1.0 - a) / 2.0 * (1.0 - x2) ** 2 + a / 2.0 * (1.0 - x1) ** 2
    return b0, b1, b1, b3


def closed_form_subsystem_map(t: float, rates: DampingRates, a: float) -> KrausMap:
    """The reduced qubit-1 channel in closed form: a Pauli channel with
    operators sqrt(b_i / 2) {I, sigma_x, sigma_y, sigma_z}."""
    b0, b1, b2, b3 = closed_form_b(t, rates, a)
    ops = (
        math.sqrt(b0 / 2.0) * np.eye(2, dtype=complex),
        math.sqrt(b1 / 2.0) * _SIGMA_X,
        math.sqrt(b2 / 2.0) * _SIGMA_Y,
        math.sqrt(b3 / 2.0) * _SIGMA_Z,
    )
    return KrausMap(2, ops, trace_preserving=True)


def composite_hamiltonian(omega: float, beta: float) -> np.ndarray:
    """Free two-qubit Hamiltonian (omega/2)(sz1 + sz2) + (beta/4) sz1 sz2.

    Diagonal with entries omega + beta/4, -beta/4, -beta/4, -omega + beta/4.
    """
    eye = np.eye(2, dtype=complex)
    return (
        omega / 2.0 * (tensor_product(_SIGMA_Z, eye) + tensor_product(eye, _SIGMA_Z))
        + beta / 4.0 * tensor_product(_SIGMA_Z, _SIGMA_Z)
    )


def to_schrodinger(
    kmap: KrausMap,
    t: float,
    omega: float,
    beta: float,
    subsystem: str = "composite",
) -> KrausMap:
    """Left-multiply every operator by the free evolution exp(-i H t).

    ``composite`` uses the two-qubit Hamiltonian; ``qubit1`` uses the
    single-qubit one and is only meaningful for non-interacting qubits, so
    it requires beta = 0. Completeness is unchanged either way.
    """
    if subsystem == "composite":
        if kmap.dim != 4:
            raise ValueError(f"composite transform needs a 4-dimensional map, got {kmap.dim}")
        h = composite_hamiltonian(omega, beta)
    elif subsystem == "qubit1":
        if beta != 0.0:
            raise ValueError(
                "the single-qubit picture transform is only valid for "
                "non-interacting qubits (beta = 0)"
            )
        if kmap.dim != 2:
            raise ValueError(f"qubit transform needs a 2-dimensional map, got {kmap.dim}")
        h = omega / 2.0 * _SIGMA_Z
    else:
        raise ValueError(f"unknown subsystem {subsystem!r}; use 'composite' or 'qubit1'")
    u = evolution_unitary(h, t)
    return KrausMap(
        kmap.dim,
        tuple(u @ op for op in kmap.operators),
        trace_preserving=kmap.trace_preserving,
    )
