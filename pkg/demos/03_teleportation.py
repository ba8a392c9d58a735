"""
Teleportation as a composition of two antilinear maps
=====================================================

Alice holds phi on A and shares psi_BC with Bob.  A measurement on A (x) B
with outcome psi_i hands Bob t_i phi, where t_i is the product of the
s-maps of psi_BC and psi_i.
"""
import numpy as np

from eprkit import states
from eprkit.teleport import (
    MeasurementBasis,
    ancilla_marginal_b,
    basis_marginal_b,
    bell_corrections,
    run_protocol,
    teleport_map,
    teleport_quality,
)

np.set_printoptions(precision=4, suppress=True)
g = states.rng(3)
basis = states.bell_basis()
bell = states.bell_state(0)

###############################################################################
# With a Bell ancilla every t_i is half a unitary.
for label, psi_i in zip(states.BELL_LABELS, basis):
    print(label, "\n", 2 * teleport_map(bell, psi_i))

###############################################################################
# Undoing those unitaries recovers the input for every outcome.
phi = states.random_vector(2, g)
rep = run_protocol(phi, bell, basis, bell_corrections(), samples=1000, seed=3)
for o in rep.outcomes:
    print(f"outcome {o.index}: p = {o.probability:.4f}  fidelity = {o.fidelity:.12f}")
print("sampled counts:", rep.counts)

###############################################################################
# For a generic ancilla the trace norm of t_i measures how well the
# outcome transmits; it equals the square root of the fidelity of the
# two B marginals.  A random measurement basis makes the outcomes differ.
anc = states.random_pure((2, 2), g)
for psi_i in MeasurementBasis.from_columns(states.haar_unitary(4, g), (2, 2)):
    tn, fs = teleport_quality(teleport_map(anc, psi_i), basis_marginal_b(psi_i), ancilla_marginal_b(anc))
    print(f"||t||_1 = {tn:.12f}   sqrt F = {fs:.12f}")
