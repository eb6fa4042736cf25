"""Truncated Fock spaces, coherent states, and the normal-mode beam splitter.

Walks through the basic objects: a two-mode-plus-qubit space, ladder
operators, coherent states with the truncation rule, and the 50/50 mode
mixing that concentrates two equal coherent amplitudes into one normal mode.
"""

import numpy as np

from nemskerr import (
    annihilation,
    beam_splitter_map,
    beam_splitter_unitary,
    coherent_state,
    default_truncation,
    make_space,
    number_op,
    product_state,
)
from nemskerr.fock import HilbertSpace, coherent_amplitudes, expectation

alpha = 1.0
n = default_truncation(np.sqrt(2) * alpha)
print(f"amplitude alpha = {alpha}, truncation rule gives N = {n} per mode")

space = make_space(n, n, True)
print(f"composite space: modes {space.mode_dims}, qubit = {space.has_qubit}, "
      f"total dimension {space.total_dim}")

# ladder algebra holds below the truncation edge
sp1 = HilbertSpace((n,))
a = annihilation(sp1, 0)
comm = (a @ a.dag() - a.dag() @ a).matrix
print(f"[a, a'] deviates from 1 only on the top level: "
      f"max deviation below it = {np.abs(comm[:n-1, :n-1] - np.eye(n-1)).max():.2e}")

st = coherent_state(sp1, 0, alpha)
print(f"<n> of |alpha={alpha}> = {expectation(number_op(sp1, 0), st).real:.12f}  (expect {alpha**2})")

# both resonators in |alpha>: the beam splitter moves everything to mode 1
both = product_state(space, [coherent_amplitudes(alpha, n), coherent_amplitudes(alpha, n), "+x"])
mixed = beam_splitter_map(space, both)
target = product_state(
    space, [coherent_amplitudes(np.sqrt(2) * alpha, n), np.eye(n)[0], "+x"]
)
print(f"overlap of mixed state with |sqrt2*alpha, 0, +x>: "
      f"{abs(np.vdot(target.data, mixed.data)):.12f}")
print(f"leftover occupation in mode 2: "
      f"{expectation(number_op(space, 1), mixed).real:.2e}")

u = beam_splitter_unitary(space).matrix
print(f"splitter unitarity ||U'U - I||_max = {np.abs(u.conj().T @ u - np.eye(space.total_dim)).max():.2e}")
