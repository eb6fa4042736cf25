"""Closed-form damped-Kerr solution against the fixed-step integrator.

Integrates the single-mode master equation with the RK4 solver and compares
each stored state with the analytic jump-series solution, then shows the two
degenerate limits: no damping (pure Kerr phases) and no Kerr (coherent-state
decay).
"""

import math

import numpy as np

from nemskerr import (
    LindbladModel,
    evolve_lindblad,
    kerr_analytic_pure,
    kerr_lindblad_analytic,
    trace_distance,
)
from nemskerr.evolution import choose_k_max
from nemskerr.fock import HilbertSpace, QuantumState, annihilation, coherent_amplitudes, number_op

alpha1 = math.sqrt(2.0)
n = 21
mu, gamma = 1.0, 1e-2
kappa = gamma * mu
t_i = math.pi / (2 * mu)

space = HilbertSpace((n,))
num = number_op(space, 0)
model = LindbladModel(hamiltonian=mu * (num @ num), collapse_ops=((annihilation(space, 0), kappa),))
vec = coherent_amplitudes(alpha1, n)
rho0 = np.outer(vec, vec.conj())

times = np.linspace(0.0, t_i, 6)
res = evolve_lindblad(model, QuantumState(space, rho0), times)
print(f"integrated {res.metadata['steps']} fixed steps of dt = {res.metadata['dt']:.3e}")

k_max = choose_k_max(n, kappa, t_i)
print(f"{'mu*t':>8s} {'trace dist':>12s} {'trace':>10s} {'min eig':>11s}")
for i, (t, state) in enumerate(zip(res.times, res.states)):
    ana = kerr_lindblad_analytic(rho0, mu, kappa, float(t), (n, k_max))
    d = trace_distance(state, ana)
    print(f"{mu*float(t):8.4f} {d:12.3e} {res.observables['trace'][i]:10.7f} "
          f"{res.observables['min_eig'][i]:11.2e}")

# kappa -> 0: only the k = 0 term of the jump series survives
ana0 = kerr_lindblad_analytic(rho0, mu, 0.0, t_i, (n, 0))
pure = kerr_analytic_pure(alpha1, mu, t_i, n).to_density_matrix()
print(f"\nkappa = 0 series vs unitary Kerr state: {trace_distance(ana0, pure):.2e}")

# mu -> 0: amplitude decays as exp(-kappa t), the state stays coherent
t = 1.0
ana_damp = kerr_lindblad_analytic(rho0, 0.0, 0.5, t, (n, choose_k_max(n, 0.5, t)))
decayed = coherent_amplitudes(alpha1 * math.exp(-0.5 * t), n)
target = QuantumState(space, np.outer(decayed, decayed.conj()))
print(f"mu = 0 damping vs coherent decay:        {trace_distance(ana_damp, target):.2e}")
