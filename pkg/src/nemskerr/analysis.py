"""Target states and scalar figures of merit: Yurke-Stoler superpositions,
fidelity against a pure target, purity, overlaps, partial traces."""

from __future__ import annotations

from typing import Iterable

import numpy as np

from .fock import HilbertSpace, QuantumState, coherent_amplitudes

__all__ = [
    "yurke_stoler",
    "fidelity",
    "purity",
    "overlap",
    "trace_distance",
    "reduce_subsystem",
]

CLAMP_TOL = 1e-9


def yurke_stoler(alpha1: complex, n_max: int) -> QuantumState:
    """Single-mode Yurke-Stoler state (|a> + i|-a>)/sqrt(2), the equal
    superposition of two coherent states 180 degrees out of phase produced
    by Kerr evolution at a quarter revival.

    The 1/sqrt(2) normalization is exact before truncation because the
    cross terms i<a|-a> - i<-a|a> cancel (the overlap e^{-2|a|^2} is real);
    after truncation the vector is renormalized.
    """
    space = HilbertSpace(mode_dims=(int(n_max),), has_qubit=False)
    n = np.arange(int(n_max))
    coeffs = coherent_amplitudes(alpha1, int(n_max)) * (1.0 + 1j * (-1.0) ** n) / np.sqrt(2.0)
    return QuantumState(space, coeffs / np.linalg.norm(coeffs))


def _clamp_unit(value: float, what: str) -> float:
    if value < -CLAMP_TOL:
        raise ValueError(f"{what} = {value:.3e} is negative beyond roundoff")
    return min(max(value, 0.0), 1.0)


def fidelity(rho: QuantumState, target: QuantumState) -> float:
    """<target|rho|target> for a pure target (|<target|psi>|^2 when rho is
    pure). Tiny negative roundoff is clamped to 0; anything worse raises."""
    if not target.is_pure:
        raise ValueError("fidelity is defined against a pure target state")
    if rho.space != target.space:
        raise ValueError("states live on different spaces")
    if rho.is_pure:
        val = abs(np.vdot(target.data, rho.data)) ** 2
    else:
        raw = complex(target.data.conj() @ rho.data @ target.data)
        if abs(raw.imag) > 1e-10:
            raise ValueError(f"fidelity has a non-real value ({raw.imag:.3e} imaginary part)")
        val = raw.real
    return _clamp_unit(float(val), "fidelity")


def purity(rho: QuantumState) -> float:
    """Tr(rho^2); equals 1 for pure states."""
    if rho.is_pure:
        return _clamp_unit(float(np.vdot(rho.data, rho.data).real ** 2), "purity")
    return _clamp_unit(float(np.trace(rho.data @ rho.data).real), "purity")


def overlap(psi: QuantumState, phi: QuantumState) -> complex:
    """<psi|phi> for pure states."""
    if not (psi.is_pure and phi.is_pure):
        raise ValueError("overlap is defined for pure states")
    if psi.space != phi.space:
        raise ValueError("states live on different spaces")
    return complex(np.vdot(psi.data, phi.data))


def trace_distance(rho: QuantumState, sigma: QuantumState) -> float:
    """(1/2)||rho - sigma||_1 via the eigenvalues of the difference."""
    if rho.space != sigma.space:
        raise ValueError("states live on different spaces")
    diff = rho.to_density_matrix().data - sigma.to_density_matrix().data
    return float(0.5 * np.abs(np.linalg.eigvalsh(0.5 * (diff + diff.conj().T))).sum())


def reduce_subsystem(state: QuantumState, keep: Iterable[int]) -> QuantumState:
    """Partial trace onto the subsystems in ``keep`` (indices into the
    (modes..., qubit) ordering). Returns a density matrix unless everything
    is kept."""
    keep_set = sorted(set(int(k) for k in keep))
    dims = state.space.dims
    if not keep_set:
        raise ValueError("keep set must not be empty")
    if any(k < 0 or k >= len(dims) for k in keep_set):
        raise ValueError("keep indices out of range")
    if len(keep_set) == len(dims):
        return state

    rho = state.to_density_matrix().data.reshape(dims + dims)
    n = len(dims)
    traced = [k for k in range(n) if k not in keep_set]
    # einsum over paired (ket, bra) axes of every traced subsystem
    ket_axes = list(range(n))
    bra_axes = list(range(n, 2 * n))
    for k in traced:
        bra_axes[k] = ket_axes[k]
    out_axes = [ket_axes[k] for k in keep_set] + [bra_axes[k] for k in keep_set]
    reduced = np.einsum(rho, ket_axes + bra_axes, out_axes)
    d_keep = int(np.prod([dims[k] for k in keep_set]))
    reduced = reduced.reshape(d_keep, d_keep)

    new_modes = tuple(dims[k] for k in keep_set if k < state.space.n_modes)
    new_qubit = state.space.has_qubit and (state.space.qubit_index in keep_set)
    new_space = HilbertSpace(mode_dims=new_modes, has_qubit=new_qubit)
    return QuantumState(new_space, reduced)
