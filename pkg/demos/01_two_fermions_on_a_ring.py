# coding: utf-8

# # Two fermions on a ring
#
# A periodic chain of N sites holds two spinless fermions that hop with
# amplitude J and feel an interaction U when they sit on neighbouring
# sites.  Every eigenstate is a plane-wave pair, so the whole spectrum
# comes from the roots of one polynomial per total-momentum class.

import numpy as np

from bethe_mps import ChainParams, enumerate_spectrum, ground_state
from bethe_mps import oracle

# ## The full spectrum
#
# Attractive interaction, nine sites.  There are N(N-1)/2 = 36 states.

params = ChainParams(N=9, U=-2.0)
states = enumerate_spectrum(params)
print(len(states), "states")

# Each state carries its momenta and a label: scattering states have real
# momenta, bound states a complex-conjugate pair.

for s in sorted(states, key=lambda s: s.E)[:5]:
    print(f"E={s.E:+.6f}  k1={s.k1:.4f}  k2={s.k2:.4f}  {s.kind}")

# Dense diagonalisation of the 36x36 Hamiltonian gives the same numbers.

E = np.sort([s.E for s in states])
ref = np.linalg.eigvalsh(oracle.dense_hamiltonian(params))
print("largest deviation from dense diagonalisation:", np.max(np.abs(E - ref)))

# ## The ground state
#
# For odd N the ground state is real and non-degenerate.  At U = -2 it
# is a bound pair.

g = ground_state(params)
print(f"ground energy {g.E:.12f}, kind {g.kind}")

# Sweeping U shows the bound state peeling off below the scattering band.

for U in (-4.0, -2.0, -1.0, 0.0, 1.0, 10.0):
    g = ground_state(ChainParams(9, U))
    print(f"U={U:+5.1f}  E0={g.E:+.6f}  {g.kind}")
