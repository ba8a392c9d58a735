"""
Bipartite vectors as antilinear maps
====================================

Every vector psi in A (x) B carries an antilinear map s from A to B.
Measuring A along phi leaves B in the state s(phi), up to normalization.
"""
import numpy as np

from eprkit import PureState, bell_state
from eprkit.smap import (
    entanglement_class,
    measure_update_vector,
    polar_jmaps,
    schmidt,
    smap_from_vector,
)

np.set_printoptions(precision=4, suppress=True)

###############################################################################
# The Bell vector (|00> + |11>)/sqrt 2 gives s = conj / sqrt 2.
bell = bell_state(0)
s = smap_from_vector(bell)
print("Bell s-map kmatrix:\n", s.kmatrix)

# Antilinear: phases on the input come out conjugated.
phi = np.array([1, 1j]) / np.sqrt(2)
print("s(phi)     =", s(phi))
print("s(i * phi) =", s(1j * phi))

###############################################################################
# Measuring A along phi leaves phi (x) s(phi); its squared norm is the
# outcome probability.
prob, prepared = measure_update_vector(bell, phi)
print("probability:", prob)
print("prepared vector:", prepared.vector)

###############################################################################
# A less entangled vector.  Its Schmidt weights and class:
skewed = PureState([np.sqrt(0.9), 0, 0, np.sqrt(0.1)], (2, 2))
dec = schmidt(skewed)
print("Schmidt weights:", dec.coefficients)
print("class:", entanglement_class(skewed).value)

# The polar part j of s is antiunitary whenever psi has full Schmidt rank.
j_ba, j_ab = polar_jmaps(skewed)
print("j kmatrix:\n", j_ba.kmatrix)
