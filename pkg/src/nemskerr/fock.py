"""Truncated Fock spaces, bosonic/qubit operators, canonical states, and the
normal-mode (beam-splitter) transformation between two resonator modes.

Conventions used throughout the package:

* subsystem order is (mode a, mode b, ..., qubit), row-major tensor indexing,
  so the composite basis index is ``(((n_a * N_b) + n_b) * 2) + q`` when a
  qubit is present;
* the qubit basis is ordered (|up>, |down>) with sigma_z = diag(+1, -1);
* hbar = 1, all frequencies angular, all matrices dense complex128;
* operators and states are immutable after construction (their arrays are
  marked read-only), so they can be shared freely across parallel workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.linalg import expm
from scipy.special import gammainc, gammaln

__all__ = [
    "HilbertSpace",
    "Operator",
    "QuantumState",
    "make_space",
    "annihilation",
    "creation",
    "number_op",
    "identity",
    "embed",
    "qubit_operator",
    "qubit_vector",
    "coherent_amplitudes",
    "coherent_state",
    "basis_state",
    "product_state",
    "beam_splitter_unitary",
    "beam_splitter_map",
    "default_truncation",
    "coherent_tail",
    "commutator",
    "expectation",
]

# Default numerical contracts for constructed objects.
NORM_TOL = 1e-9
POSITIVITY_TOL = 1e-8
HERMITICITY_RTOL = 1e-12
COHERENT_TAIL_BOUND = 1e-8

_QUBIT_LABELS = {
    "+z": np.array([1.0, 0.0]),
    "-z": np.array([0.0, 1.0]),
    "+x": np.array([1.0, 1.0]) / math.sqrt(2),
    "-x": np.array([1.0, -1.0]) / math.sqrt(2),
    "+y": np.array([1.0, 1.0j]) / math.sqrt(2),
    "-y": np.array([1.0, -1.0j]) / math.sqrt(2),
}


@dataclass(frozen=True)
class HilbertSpace:
    """Descriptor of a composite truncated space: bosonic modes and an
    optional qubit. ``mode_dims[k]`` is the Fock truncation of mode k
    (levels 0 .. mode_dims[k]-1)."""

    mode_dims: tuple[int, ...]
    has_qubit: bool = False

    def __post_init__(self):
        dims = tuple(int(d) for d in self.mode_dims)
        object.__setattr__(self, "mode_dims", dims)
        for d in dims:
            if d < 2:
                raise ValueError(f"every mode dimension must be >= 2, got {d}")

    @property
    def dims(self) -> tuple[int, ...]:
        """Per-subsystem dimensions, modes first, qubit last."""
        return self.mode_dims + ((2,) if self.has_qubit else ())

    @property
    def n_modes(self) -> int:
        return len(self.mode_dims)

    @property
    def n_subsystems(self) -> int:
        return len(self.dims)

    @property
    def total_dim(self) -> int:
        return int(np.prod(self.dims, dtype=np.int64))

    @property
    def qubit_index(self) -> int:
        if not self.has_qubit:
            raise ValueError("space has no qubit")
        return self.n_modes


def make_space(n_a: int, n_b: int, with_qubit: bool) -> HilbertSpace:
    """Two resonator modes (truncations n_a, n_b) plus an optional qubit."""
    return HilbertSpace(mode_dims=(n_a, n_b), has_qubit=with_qubit)


@dataclass(frozen=True, eq=False)
class Operator:
    """Dense complex matrix acting on a HilbertSpace."""

    space: HilbertSpace
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        d = self.space.total_dim
        if m.shape != (d, d):
            raise ValueError(f"matrix shape {m.shape} does not match space dim {d}")
        m = np.ascontiguousarray(m)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def dag(self) -> "Operator":
        return Operator(self.space, self.matrix.conj().T)

    def is_hermitian(self, rtol: float = HERMITICITY_RTOL) -> bool:
        scale = max(1.0, float(np.abs(self.matrix).max()))
        return float(np.abs(self.matrix - self.matrix.conj().T).max()) <= rtol * scale

    def _check_space(self, other: "Operator"):
        if self.space != other.space:
            raise ValueError("operators act on different spaces")

    def __add__(self, other: "Operator") -> "Operator":
        self._check_space(other)
        return Operator(self.space, self.matrix + other.matrix)

    def __sub__(self, other: "Operator") -> "Operator":
        self._check_space(other)
        return Operator(self.space, self.matrix - other.matrix)

    def __neg__(self) -> "Operator":
        return Operator(self.space, -self.matrix)

    def __mul__(self, scalar) -> "Operator":
        return Operator(self.space, self.matrix * complex(scalar))

    __rmul__ = __mul__

    def __matmul__(self, other: "Operator") -> "Operator":
        self._check_space(other)
        return Operator(self.space, self.matrix @ other.matrix)


@dataclass(frozen=True, eq=False)
class QuantumState:
    """Pure state vector or density matrix over a HilbertSpace."""

    space: HilbertSpace
    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=complex)
        d = self.space.total_dim
        if arr.ndim == 1:
            if arr.shape != (d,):
                raise ValueError(f"vector length {arr.shape} does not match space dim {d}")
        elif arr.ndim == 2:
            if arr.shape != (d, d):
                raise ValueError(f"matrix shape {arr.shape} does not match space dim {d}")
        else:
            raise ValueError("state data must be a vector or a square matrix")
        arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def kind(self) -> str:
        return "pure" if self.data.ndim == 1 else "mixed"

    @property
    def is_pure(self) -> bool:
        return self.data.ndim == 1

    def norm(self) -> float:
        if self.is_pure:
            return float(np.linalg.norm(self.data))
        return float(abs(np.trace(self.data)))

    def to_density_matrix(self) -> "QuantumState":
        if self.is_pure:
            return QuantumState(self.space, np.outer(self.data, self.data.conj()))
        return self

    def validate(self, tol_norm: float = NORM_TOL, tol_pos: float = POSITIVITY_TOL):
        """Raise if the state violates its physicality contract."""
        if self.is_pure:
            if abs(np.vdot(self.data, self.data).real - 1.0) >= tol_norm:
                raise ValueError("pure state is not normalized")
        else:
            rho = self.data
            if abs(np.trace(rho) - 1.0) >= tol_norm:
                raise ValueError("density matrix trace differs from 1")
            if np.abs(rho - rho.conj().T).max() >= tol_norm:
                raise ValueError("density matrix is not Hermitian")
            if np.linalg.eigvalsh(rho).min() < -tol_pos:
                raise ValueError("density matrix has a negative eigenvalue")
        return self


def _destroy_matrix(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1).astype(complex)


_PAULI = {
    "z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
    "x": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    "plus": np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex),
    "minus": np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex),
}


def embed(space: HilbertSpace, subsystem: int, local: np.ndarray) -> Operator:
    """Embed a single-subsystem matrix into the full space with identity
    factors on every other subsystem."""
    dims = space.dims
    if not 0 <= subsystem < len(dims):
        raise ValueError(f"subsystem index {subsystem} out of range for {len(dims)} subsystems")
    local = np.asarray(local, dtype=complex)
    if local.shape != (dims[subsystem], dims[subsystem]):
        raise ValueError("local matrix shape does not match subsystem dimension")
    full = np.array([[1.0 + 0.0j]])
    for k, d in enumerate(dims):
        factor = local if k == subsystem else np.eye(d, dtype=complex)
        full = np.kron(full, factor)
    return Operator(space, full)


def identity(space: HilbertSpace) -> Operator:
    return Operator(space, np.eye(space.total_dim, dtype=complex))


def annihilation(space: HilbertSpace, subsystem: int) -> Operator:
    """Bosonic lowering operator of one mode, a|n> = sqrt(n)|n-1> within the
    truncation, embedded in the full space."""
    if not 0 <= subsystem < space.n_modes:
        raise ValueError(f"subsystem {subsystem} is not a bosonic mode")
    return embed(space, subsystem, _destroy_matrix(space.mode_dims[subsystem]))


def creation(space: HilbertSpace, subsystem: int) -> Operator:
    return annihilation(space, subsystem).dag()


def number_op(space: HilbertSpace, subsystem: int) -> Operator:
    a = annihilation(space, subsystem)
    return a.dag() @ a


def qubit_operator(space: HilbertSpace, which: str) -> Operator:
    """Pauli or ladder operator on the qubit factor.

    ``which`` is one of "z", "x", "y", "plus"/"+", "minus"/"-";
    sigma_+- = (sigma_x +- i sigma_y)/2.
    """
    if not space.has_qubit:
        raise ValueError("space has no qubit")
    key = {"+": "plus", "-": "minus"}.get(which, which)
    if key not in _PAULI:
        raise ValueError(f"unknown qubit operator {which!r}")
    return embed(space, space.qubit_index, _PAULI[key])


def qubit_vector(label: str) -> np.ndarray:
    """Two-component qubit eigenstate, e.g. "+x" for the sigma_x +1 state."""
    if label not in _QUBIT_LABELS:
        raise ValueError(f"unknown qubit label {label!r}")
    return _QUBIT_LABELS[label].astype(complex)


def default_truncation(alpha_max: complex) -> int:
    """Fock truncation keeping the Poisson tail of |alpha_max> below ~1e-8."""
    a = abs(alpha_max)
    return int(math.ceil(a * a + 6.0 * a + 10.0))


def coherent_tail(alpha: complex, dim: int) -> float:
    """Poisson weight of |alpha> leaked above the truncation, sum_{n>=dim} p_n."""
    x = abs(alpha) ** 2
    if x == 0.0:
        return 0.0
    return float(gammainc(dim, x))


def coherent_amplitudes(alpha: complex, dim: int, renormalize: bool = True) -> np.ndarray:
    """Truncated coherent-state coefficients exp(-|a|^2/2) a^n / sqrt(n!).

    Rejects truncations whose leaked Poisson weight exceeds the package
    tail bound. Renormalized after truncation by default so downstream
    norm invariants hold exactly.
    """
    tail = coherent_tail(alpha, dim)
    if tail >= COHERENT_TAIL_BOUND:
        raise ValueError(
            f"truncation {dim} too small for |alpha|={abs(alpha):g}: "
            f"leaked weight {tail:.3e} >= {COHERENT_TAIL_BOUND:g}"
        )
    if alpha == 0:
        vec = np.zeros(dim, dtype=complex)
        vec[0] = 1.0
        return vec
    n = np.arange(dim)
    log_mag = -abs(alpha) ** 2 / 2 + n * math.log(abs(alpha)) - 0.5 * gammaln(n + 1)
    phase = np.exp(1j * n * np.angle(alpha))
    vec = np.exp(log_mag) * phase
    if renormalize:
        vec = vec / np.linalg.norm(vec)
    return vec


def product_state(space: HilbertSpace, factors: Sequence[np.ndarray | str]) -> QuantumState:
    """Pure product state from one factor per subsystem (modes first, qubit
    last). Mode factors are coefficient vectors; the qubit factor may be a
    label like "+x" or a 2-vector. The result is normalized."""
    dims = space.dims
    if len(factors) != len(dims):
        raise ValueError(f"expected {len(dims)} factors, got {len(factors)}")
    vec = np.array([1.0 + 0.0j])
    for k, f in enumerate(factors):
        part = qubit_vector(f) if isinstance(f, str) else np.asarray(f, dtype=complex)
        if part.shape != (dims[k],):
            raise ValueError(f"factor {k} has length {part.shape}, expected {dims[k]}")
        vec = np.kron(vec, part)
    vec = vec / np.linalg.norm(vec)
    return QuantumState(space, vec)


def basis_state(space: HilbertSpace, occupations: Sequence[int], qubit: str = "+z") -> QuantumState:
    """Fock product state |n_0, n_1, ...> with the qubit in a labeled state."""
    factors: list[np.ndarray | str] = []
    for k, n in enumerate(occupations):
        v = np.zeros(space.mode_dims[k], dtype=complex)
        v[n] = 1.0
        factors.append(v)
    if space.has_qubit:
        factors.append(qubit)
    return product_state(space, factors)


def coherent_state(space: HilbertSpace, subsystem: int, alpha: complex) -> QuantumState:
    """Coherent state |alpha> in one mode, every other mode in vacuum and the
    qubit (if any) in the sigma_z = +1 basis state."""
    if not 0 <= subsystem < space.n_modes:
        raise ValueError(f"subsystem {subsystem} is not a bosonic mode")
    factors: list[np.ndarray | str] = []
    for k in range(space.n_modes):
        if k == subsystem:
            factors.append(coherent_amplitudes(alpha, space.mode_dims[k]))
        else:
            v = np.zeros(space.mode_dims[k], dtype=complex)
            v[0] = 1.0
            factors.append(v)
    if space.has_qubit:
        factors.append("+z")
    return product_state(space, factors)


def beam_splitter_unitary(space: HilbertSpace) -> Operator:
    """Unitary re-expressing states of modes (a, b) in the normal-mode basis
    a1 = (a+b)/sqrt(2), a2 = (a-b)/sqrt(2).

    Built as exp[(pi/4)(a^dag b - a b^dag)] followed by a pi phase on the
    second mode, which realizes the Hadamard-type mode mixing
    (alpha, beta) -> ((alpha+beta)/sqrt2, (alpha-beta)/sqrt2); the rotation
    alone has determinant +1 and lands the second amplitude with the
    opposite sign. Unitary by construction (matrix exponential of a
    skew-Hermitian generator).
    """
    if space.n_modes != 2:
        raise ValueError("beam splitter needs exactly two bosonic modes")
    if space.mode_dims[0] != space.mode_dims[1]:
        raise ValueError("beam splitter requires equal mode dimensions")
    a = annihilation(space, 0).matrix
    b = annihilation(space, 1).matrix
    gen = (np.pi / 4.0) * (a.conj().T @ b - a @ b.conj().T)
    u_mix = expm(gen)
    n_b = np.diag(b.conj().T @ b).real
    phase_flip = np.diag(np.exp(1j * np.pi * n_b))
    return Operator(space, phase_flip @ u_mix)


def beam_splitter_map(space: HilbertSpace, state: QuantumState) -> QuantumState:
    """Apply the 50/50 mode-mixing unitary, so |alpha>_a |alpha>_b maps to
    |sqrt(2) alpha>_1 |0>_2 (and |alpha>_a |-alpha>_b to |0>_1 |sqrt(2) alpha>_2)."""
    if state.space != space:
        raise ValueError("state does not live on the given space")
    u = beam_splitter_unitary(space).matrix
    if state.is_pure:
        return QuantumState(space, u @ state.data)
    return QuantumState(space, u @ state.data @ u.conj().T)


def commutator(op_a: Operator, op_b: Operator) -> Operator:
    return op_a @ op_b - op_b @ op_a


def expectation(op: Operator, state: QuantumState) -> complex:
    """<psi|O|psi> for pure states, Tr(O rho) for mixed ones."""
    if op.space != state.space:
        raise ValueError("operator and state live on different spaces")
    if state.is_pure:
        return complex(np.vdot(state.data, op.matrix @ state.data))
    return complex(np.trace(op.matrix @ state.data))
