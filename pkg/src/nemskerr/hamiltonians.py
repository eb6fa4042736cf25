"""Hamiltonian builders for a driven charge qubit capacitively coupled to two
resonant nanomechanical modes, down the approximation chain:

  lab frame -> rotated qubit basis / rotating frame (RWA) -> dispersive
  -> normal modes -> effective Kerr.

Parameter conventions (hbar = 1, angular frequencies):

  omega0    = -4 E_c (1 - 2 n_g)                 qubit charging frequency
  delta_bar = -2 E_J cos(pi phi/phi0)            Josephson term
  lambda_i  = e V_g C_gi / (C_sigma d_i) * sqrt(1/(2 m omega))
  cos(theta) = omega0/omega_bar, sin(theta) = delta_bar/omega_bar,
  omega_bar = sqrt(omega0^2 + delta_bar^2),      delta = omega - omega_e

Dispersive constants (valid for |delta| >> lambda_1, lambda_2, g):

  Omega = -(lambda1^2/delta) sin^2(theta)        a-mode shift
  chi   = -(lambda2^2/delta) sin^2(theta)        b-mode shift
  Delta = (g lambda1/delta) sin(theta)           drive-induced sigma_x term
  r     = -(lambda1 lambda2/delta) sin^2(theta)  mode exchange
  zeta  = -(2 lambda1^2/delta) sin^2(theta)      normal-mode shift (= 2 Omega)
  mu    = zeta^2 / (2 Delta)                     Kerr strength
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .fock import (
    HERMITICITY_RTOL,
    HilbertSpace,
    Operator,
    annihilation,
    identity,
    qubit_operator,
)

__all__ = [
    "PhysicalParams",
    "ModelParams",
    "DispersiveParams",
    "RegimeWarning",
    "derive_qubit_params",
    "build_full_lab",
    "build_rwa",
    "build_rwa_static",
    "build_dispersive",
    "build_normal_mode",
    "build_kerr_effective",
]


class RegimeWarning(UserWarning):
    """A builder was called outside the regime its approximation assumes."""


def _require_hermitian(matrix: np.ndarray, what: str) -> np.ndarray:
    scale = max(1.0, float(np.abs(matrix).max()))
    dev = float(np.abs(matrix - matrix.conj().T).max())
    if dev > HERMITICITY_RTOL * scale:
        raise AssertionError(f"{what} is not Hermitian (max deviation {dev:.3e})")
    return matrix


@dataclass(frozen=True)
class PhysicalParams:
    """Device-level constants: charging/Josephson energies, gate charge and
    flux, gate geometry, and the resonator mass and frequency. Reduced units
    with hbar = 1; the electron charge enters the couplings through
    ``derive_qubit_params``."""

    e_c: float
    e_j: float
    n_g: float
    phi_over_phi0: float
    v_g: float
    c_g1: float
    c_g2: float
    c_sigma: float
    d_1: float
    d_2: float
    m: float
    omega: float

    def __post_init__(self):
        for name in ("c_g1", "c_g2", "c_sigma", "d_1", "d_2", "m", "omega"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be strictly positive")


@dataclass(frozen=True)
class ModelParams:
    """Frequencies and couplings of the rotated-frame model. The mixing angle
    theta, qubit gap omega_bar and detuning delta are derived on construction."""

    omega: float
    omega0: float
    delta_bar: float
    lambda1: float
    lambda2: float
    g: float
    omega_e: float
    theta: float = field(init=False)
    omega_bar: float = field(init=False)
    delta: float = field(init=False)

    def __post_init__(self):
        omega_bar = math.hypot(self.omega0, self.delta_bar)
        if omega_bar == 0.0:
            raise ValueError("degenerate qubit: omega0 and delta_bar both vanish")
        object.__setattr__(self, "omega_bar", omega_bar)
        object.__setattr__(self, "theta", math.atan2(self.delta_bar, self.omega0))
        object.__setattr__(self, "delta", self.omega - self.omega_e)

    @property
    def cos_theta(self) -> float:
        return self.omega0 / self.omega_bar

    @property
    def sin_theta(self) -> float:
        return self.delta_bar / self.omega_bar


def derive_qubit_params(
    p: PhysicalParams,
    g: float = 0.0,
    omega_e: float | None = None,
    electron_charge: float = 1.0,
) -> ModelParams:
    """Map device constants to model parameters. The drive amplitude g and
    frequency omega_e are external knobs; omega_e defaults to the qubit gap
    (the resonant operating point)."""
    omega0 = -4.0 * p.e_c * (1.0 - 2.0 * p.n_g)
    delta_bar = -2.0 * p.e_j * math.cos(math.pi * p.phi_over_phi0)
    zpf = math.sqrt(1.0 / (2.0 * p.m * p.omega))
    lambda1 = electron_charge * p.v_g * p.c_g1 / (p.c_sigma * p.d_1) * zpf
    lambda2 = electron_charge * p.v_g * p.c_g2 / (p.c_sigma * p.d_2) * zpf
    if omega_e is None:
        omega_e = math.hypot(omega0, delta_bar)
    return ModelParams(
        omega=p.omega,
        omega0=omega0,
        delta_bar=delta_bar,
        lambda1=lambda1,
        lambda2=lambda2,
        g=g,
        omega_e=omega_e,
    )


def _two_modes_and_qubit(s: HilbertSpace):
    if s.n_modes != 2 or not s.has_qubit:
        raise ValueError("this builder needs a space with two modes and a qubit")


def build_full_lab(mp: ModelParams, s: HilbertSpace) -> Callable[[float], Operator]:
    """Lab-frame Hamiltonian with the original (unrotated) qubit basis:

      H(t) = omega a'a + omega b'b + (omega0/2) sz + (delta_bar/2) sx
             + lambda1 (a+a') sz + lambda2 (b+b') sz
             + g (a e^{i omega_e t} + a' e^{-i omega_e t})
    """
    _two_modes_and_qubit(s)
    a = annihilation(s, 0).matrix
    b = annihilation(s, 1).matrix
    sz = qubit_operator(s, "z").matrix
    sx = qubit_operator(s, "x").matrix
    static = (
        mp.omega * (a.conj().T @ a + b.conj().T @ b)
        + 0.5 * mp.omega0 * sz
        + 0.5 * mp.delta_bar * sx
        + mp.lambda1 * (a + a.conj().T) @ sz
        + mp.lambda2 * (b + b.conj().T) @ sz
    )

    def hamiltonian(t: float) -> Operator:
        drive = mp.g * np.exp(1j * mp.omega_e * t) * a
        h = static + drive + drive.conj().T
        return Operator(s, _require_hermitian(h, "lab-frame Hamiltonian"))

    return hamiltonian


_RESONANCE_RTOL = 1e-9


def build_rwa(mp: ModelParams, s: HilbertSpace) -> Callable[[float], Operator]:
    """Rotating-wave interaction Hamiltonian in the frame rotating at the
    drive frequency (requires the resonance condition omega_bar = omega_e):

      H(t) = g (a e^{-i delta t} + h.c.)
             - lambda1 sin(theta) (a s+ e^{-i delta t} + h.c.)
             - lambda2 sin(theta) (b s+ e^{-i delta t} + h.c.)

    Warns (does not reject) when lambda_i are not small against omega,
    omega_bar and g.
    """
    _two_modes_and_qubit(s)
    if abs(mp.omega_bar - mp.omega_e) > _RESONANCE_RTOL * max(1.0, abs(mp.omega_bar)):
        raise ValueError(
            f"rotating-frame assumption violated: omega_bar={mp.omega_bar:g} != omega_e={mp.omega_e:g}"
        )
    lam_max = max(abs(mp.lambda1), abs(mp.lambda2))
    if lam_max > 0.1 * min(abs(mp.omega), mp.omega_bar, abs(mp.g) or np.inf):
        warnings.warn(
            "couplings lambda_i are not small against omega, omega_bar, g; "
            "the rotating-wave form may be inaccurate",
            RegimeWarning,
            stacklevel=2,
        )
    a = annihilation(s, 0).matrix
    b = annihilation(s, 1).matrix
    sp = qubit_operator(s, "plus").matrix
    sin_t = mp.sin_theta
    # coefficient of e^{-i delta t}; its dagger carries e^{+i delta t}
    lower = mp.g * a - mp.lambda1 * sin_t * (a @ sp) - mp.lambda2 * sin_t * (b @ sp)

    def hamiltonian(t: float) -> Operator:
        m = lower * np.exp(-1j * mp.delta * t)
        h = m + m.conj().T
        return Operator(s, _require_hermitian(h, "RWA Hamiltonian"))

    return hamiltonian


def build_rwa_static(mp: ModelParams, s: HilbertSpace) -> tuple[Operator, Operator]:
    """Static generator of the RWA dynamics and the frame operator.

    The rotating-wave Hamiltonian is the interaction picture, with respect to
    delta*(a'a + b'b), of the time-independent

      H0 = delta (a'a + b'b) + g (a + a')
           - lambda1 sin(theta) (a s+ + a' s-) - lambda2 sin(theta) (b s+ + b' s-),

    so psi(t) = exp(+i delta t (a'a+b'b)) exp(-i H0 t) psi(0), which allows
    exact long-horizon propagation by spectral decomposition. Returns
    (H0, a'a + b'b).
    """
    _two_modes_and_qubit(s)
    if abs(mp.omega_bar - mp.omega_e) > _RESONANCE_RTOL * max(1.0, abs(mp.omega_bar)):
        raise ValueError(
            f"rotating-frame assumption violated: omega_bar={mp.omega_bar:g} != omega_e={mp.omega_e:g}"
        )
    a = annihilation(s, 0).matrix
    b = annihilation(s, 1).matrix
    sp = qubit_operator(s, "plus").matrix
    sm = sp.conj().T
    n_modes = a.conj().T @ a + b.conj().T @ b
    sin_t = mp.sin_theta
    h0 = (
        mp.delta * n_modes
        + mp.g * (a + a.conj().T)
        - mp.lambda1 * sin_t * (a @ sp + a.conj().T @ sm)
        - mp.lambda2 * sin_t * (b @ sp + b.conj().T @ sm)
    )
    return (
        Operator(s, _require_hermitian(h0, "static RWA generator")),
        Operator(s, n_modes),
    )


@dataclass(frozen=True)
class DispersiveParams:
    """Derived coupling constants of the dispersive Hamiltonian."""

    Omega: float
    chi: float
    Delta: float
    r: float
    zeta: float

    @property
    def mu(self) -> float:
        """Kerr strength zeta^2/(2 Delta); undefined at Delta = 0."""
        if self.Delta == 0.0:
            raise ValueError("Kerr strength undefined for Delta = 0")
        return self.zeta**2 / (2.0 * self.Delta)

    @classmethod
    def from_model(cls, mp: ModelParams) -> "DispersiveParams":
        if mp.delta == 0.0:
            raise ValueError("dispersive constants undefined at zero detuning")
        s2 = mp.sin_theta**2
        return cls(
            Omega=-(mp.lambda1**2 / mp.delta) * s2,
            chi=-(mp.lambda2**2 / mp.delta) * s2,
            Delta=(mp.g * mp.lambda1 / mp.delta) * mp.sin_theta,
            r=-(mp.lambda1 * mp.lambda2 / mp.delta) * s2,
            zeta=-(2.0 * mp.lambda1**2 / mp.delta) * s2,
        )


def build_dispersive(mp: ModelParams, s: HilbertSpace) -> tuple[Operator, DispersiveParams]:
    """Dispersive Hamiltonian (|delta| >> lambda_1, lambda_2, g):

      H = Omega a'a sz + chi b'b sz + Delta sx + r (a'b + ab') sz
    """
    _two_modes_and_qubit(s)
    dp = DispersiveParams.from_model(mp)
    lam_max = max(abs(mp.lambda1), abs(mp.lambda2), abs(mp.g))
    if abs(mp.delta) < 5.0 * lam_max:
        warnings.warn(
            "detuning is not large against lambda_1, lambda_2, g; "
            "dispersive constants may be inaccurate",
            RegimeWarning,
            stacklevel=2,
        )
    a = annihilation(s, 0).matrix
    b = annihilation(s, 1).matrix
    sz = qubit_operator(s, "z").matrix
    sx = qubit_operator(s, "x").matrix
    h = (
        dp.Omega * (a.conj().T @ a) @ sz
        + dp.chi * (b.conj().T @ b) @ sz
        + dp.Delta * sx
        + dp.r * (a.conj().T @ b + a @ b.conj().T) @ sz
    )
    return Operator(s, _require_hermitian(h, "dispersive Hamiltonian")), dp


_EQUAL_SHIFT_RTOL = 1e-12


def _mode_number_matrix(s: HilbertSpace, which: str) -> np.ndarray:
    """Number operator of the selected normal mode, (a+-b)/sqrt(2), expressed
    on the given space. On a relabeled (post-beam-splitter) space these are
    simply the per-mode number operators."""
    if which not in ("plus", "minus"):
        raise ValueError('which must be "plus" or "minus"')
    if which == "minus" and s.n_modes < 2:
        raise ValueError("minus-mode builder needs two bosonic modes")
    idx = 0 if which == "plus" else 1
    a = annihilation(s, idx).matrix
    return a.conj().T @ a


def build_normal_mode(dp: DispersiveParams, s: HilbertSpace, which: str = "plus") -> Operator:
    """Dispersive Hamiltonian in the normal-mode basis, zeta n_{1(2)} sz + Delta sx.

    Valid only when the two mode shifts coincide (lambda1 = +-lambda2
    upstream); mode indices refer to post-beam-splitter labels.
    """
    if not s.has_qubit:
        raise ValueError("normal-mode Hamiltonian needs a qubit")
    scale = max(abs(dp.Omega), abs(dp.chi), 1e-300)
    if abs(dp.Omega - dp.chi) > _EQUAL_SHIFT_RTOL * scale:
        raise ValueError("normal-mode form requires Omega = chi (lambda1 = +-lambda2)")
    n = _mode_number_matrix(s, which)
    sz = qubit_operator(s, "z").matrix
    sx = qubit_operator(s, "x").matrix
    h = dp.zeta * n @ sz + dp.Delta * sx
    return Operator(s, _require_hermitian(h, "normal-mode Hamiltonian"))


def build_kerr_effective(dp: DispersiveParams, s: HilbertSpace, which: str = "plus") -> Operator:
    """Effective Kerr Hamiltonian mu (n_1)^2 sx with mu = zeta^2/(2 Delta),
    diagonal in the Fock (x) sigma_x basis.

    Requires Delta > 0; warns when Delta < 10 |zeta| (averaging regime).
    ``which="minus"`` builds the mode-2 variant used when lambda1 = -lambda2.
    """
    if not s.has_qubit:
        raise ValueError("Kerr effective Hamiltonian needs a qubit")
    if dp.Delta <= 0.0:
        raise ValueError("Kerr reduction assumes Delta > 0")
    if dp.Delta < 10.0 * abs(dp.zeta):
        warnings.warn(
            "Delta is not large against |zeta|; the Kerr reduction may be inaccurate "
            "(factor >= 10 recommended)",
            RegimeWarning,
            stacklevel=2,
        )
    n = _mode_number_matrix(s, which)
    sx = qubit_operator(s, "x").matrix
    h = dp.mu * (n @ n) @ sx
    return Operator(s, _require_hermitian(h, "Kerr effective Hamiltonian"))
