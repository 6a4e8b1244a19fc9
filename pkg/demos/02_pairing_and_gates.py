# coding: utf-8

# # From amplitudes to gates
#
# The amplitudes psi(m, n) of a two-fermion state form an antisymmetric
# matrix A.  Writing A = Q Lambda Q^T with 2x2 blocks in Lambda puts the
# state into paired form: a ladder of adjacent pairs with weights alpha_j,
# rotated by the orthogonal mode matrix Q.

import numpy as np

from bethe_mps import ChainParams
from bethe_mps.circuits import apply_pairs_to_ladder, dump_schedule
from bethe_mps.pipeline import decompose

dec = decompose(ChainParams(N=7, U=-2.0))
np.set_printoptions(precision=4, suppress=True)

print("A =")
print(dec.A.A)

# ## Pairing spectrum
#
# The weights are normalised, sum alpha^2 = 1.  A single nonzero weight
# would mean the state is a Slater determinant.

print("alphas:", dec.alphas)
print("sum of squares:", np.sum(dec.alphas**2))
print("two-body entropy (as written, squared variant):", dec.two_body())

# ## Folding
#
# Nearest-neighbour mode rotations reduce Q to a signed identity.  Run
# backwards, the same gates build the eigenstate from the ladder.

print(len(dec.folding), "givens gates; first few:")
print("".join(dump_schedule(dec.folding).splitlines(keepends=True)[:6]))
print("residual diagonal:", dec.diagonal)

# ## Pair cascade
#
# Rotations between neighbouring pair patterns move all ladder weight onto
# the last pair, leaving a single Fock state.

print("ladder coefficients:", dec.ladder)
for r in dec.cascade:
    print(f"rotate pairs {r.l} -> {r.l + 1} by phi = {r.phi:+.6f}")
print("after the cascade:", apply_pairs_to_ladder(dec.cascade, dec.ladder))

# Without interaction the state is already a single pair and no cascade
# is needed.

free = decompose(ChainParams(N=7, U=0.0))
print("U=0 alphas:", free.alphas, " cascade length:", len(free.cascade))
