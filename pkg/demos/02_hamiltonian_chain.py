"""From device constants to the effective Kerr strength.

Follows the approximation chain: device parameters -> rotated-qubit model
-> rotating-wave form -> dispersive constants -> normal-mode form ->
effective Kerr Hamiltonian mu (n_1)^2 sigma_x.
"""

import numpy as np

from nemskerr import (
    DispersiveParams,
    ModelParams,
    PhysicalParams,
    build_dispersive,
    build_kerr_effective,
    build_normal_mode,
    build_rwa,
    derive_qubit_params,
    make_space,
)

# reduced units: energies/frequencies in units of a reference angular
# frequency, hbar = 1
phys = PhysicalParams(
    e_c=1.2, e_j=0.4, n_g=0.5, phi_over_phi0=0.6,
    v_g=2.0, c_g1=0.05, c_g2=0.05, c_sigma=1.0, d_1=1.0, d_2=1.0,
    m=1.0, omega=6.0,
)
mp0 = derive_qubit_params(phys, g=0.0)
print("derived qubit parameters:")
print(f"  omega0 = {mp0.omega0:.4f}, delta_bar = {mp0.delta_bar:.4f}, "
      f"omega_bar = {mp0.omega_bar:.4f}")
print(f"  mixing angle theta = {mp0.theta:.4f} rad (sin = {mp0.sin_theta:.4f}), "
      f"couplings lambda = ({mp0.lambda1:.4f}, {mp0.lambda2:.4f})")

# a cleaner operating point for the rest of the chain: charge degeneracy
# (sin theta = 1), strong resonant drive, large detuning
mp = ModelParams(omega=1001.0, omega0=0.0, delta_bar=1.0,
                 lambda1=1.0, lambda2=1.0, g=100.0, omega_e=1.0)
print(f"\noperating point: delta = {mp.delta}, g = {mp.g}, lambda = 1")

space = make_space(8, 8, True)
h_rwa = build_rwa(mp, space)
print(f"rotating-wave Hamiltonian at t = 0.3: Hermitian to "
      f"{np.abs(h_rwa(0.3).matrix - h_rwa(0.3).matrix.conj().T).max():.1e}")

h_disp, dp = build_dispersive(mp, space)
print("\ndispersive constants:")
print(f"  Omega = {dp.Omega:.6f}, chi = {dp.chi:.6f}, Delta = {dp.Delta:.6f}, "
      f"r = {dp.r:.6f}")
print(f"  zeta = {dp.zeta:.6f} (= 2*Omega), mu = zeta^2/(2 Delta) = {dp.mu:.3e}")
print(f"  hierarchy: delta/lambda = {mp.delta:.0f}, Delta/|zeta| = {dp.Delta/abs(dp.zeta):.0f}")

h_plus = build_normal_mode(dp, space, which="plus")
h_kerr = build_kerr_effective(dp, space)
print(f"\nnormal-mode and Kerr builders return {h_plus.matrix.shape} matrices;")
print(f"cat time mu*t = pi/2 corresponds to t_I = {np.pi/(2*dp.mu):.1f} "
      f"(in 1/lambda units)")

# the Kerr form is diagonal on Fock x sigma_x products: check one eigenvalue
from nemskerr.fock import product_state

occ = np.zeros(8, complex)
occ[3] = 1.0
vac = np.zeros(8, complex)
vac[0] = 1.0
st = product_state(space, [occ, vac, "+x"])
val = np.vdot(st.data, h_kerr.matrix @ st.data).real
print(f"<3, 0, +x| H_kerr |3, 0, +x> = {val:.6e}  (expect mu*9 = {9*dp.mu:.6e})")
