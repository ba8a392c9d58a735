"""
Modular conjugation from a single vector
========================================

The j-maps of psi, twisted together, give an antiunitary J on A (x) B
that swaps Schmidt partners.  With Delta = rho_A (x) rho_B^{-1} the
operator S = J sqrt(Delta) maps psi to itself.
"""
import numpy as np

from eprkit import PureState, states
from eprkit.modular import (
    modular_conjugation,
    modular_operator,
    s_operator,
    square,
    verify_ds_relations,
)

np.set_printoptions(precision=4, suppress=True)

skewed = PureState([np.sqrt(0.9), 0, 0, np.sqrt(0.1)], (2, 2))

###############################################################################
# Delta is diagonal in the Schmidt product basis.
print("Delta:\n", modular_operator(skewed).real)

###############################################################################
# J swaps |01> and |10> and fixes |00> and |11>.
j = modular_conjugation(skewed)
print("J kmatrix:\n", j.kmatrix.real)
print("J^2 = 1:", np.allclose(square(j), np.eye(4)))

###############################################################################
# S fixes psi.
s = s_operator(skewed)
print("S psi - psi:", np.abs(s(skewed.vector) - skewed.vector).max())

###############################################################################
# sqrt(Delta) (j~s) equals s~j, and S (1 (x) sqrt rho_B) equals j~s.
# Replacing j~s by s~j in the second relation only works when both
# reduced states are multiples of the identity, as the last column shows.
for psi in [states.bell_state(0), skewed, states.random_pure((3, 3), 5)]:
    r = verify_ds_relations(psi)
    print(f"{r.delta_js:.1e}  {r.s_sqrt_rho_b_js:.1e}  {r.s_sqrt_rho_b:.1e}")
