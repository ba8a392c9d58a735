"""
Channels from mixed bipartite states
====================================

A density operator rho on A (x) B defines a map from operators on A to
operators on B.  Projecting A onto pi leaves B in Phi(pi), and no
particular decomposition of rho is singled out.
"""
import numpy as np

from eprkit import states
from eprkit.channel import (
    apply_channel,
    channel_decomposition_independence,
    channel_from_density,
    dual_channel,
    lueders_update,
    star_choi,
)
from eprkit.linalg import partial_trace, projector

np.set_printoptions(precision=4, suppress=True)
g = states.rng(2)

###############################################################################
# A random rank-2 state on a qubit and a qutrit.
rho = states.random_density(6, rank=2, seed=g)
ch = channel_from_density(rho, (2, 3))
print("number of Kraus maps:", len(ch.kraus))

###############################################################################
# The Lueders update factorizes as pi (x) Phi(pi).
phi = states.random_vector(2, g)
prob, post = lueders_update(rho, phi, (2, 3))
pi = projector(phi)
print("factorization error:", np.abs(post - np.kron(pi, apply_channel(ch, pi))).max())
print("probability:", prob, "=", np.trace(apply_channel(ch, pi)).real)

###############################################################################
# Any other decomposition of rho gives the same channel.  Mix the
# eigenvectors with an isometry to get one.
w, v = np.linalg.eigh(rho)
vecs = [np.sqrt(w[i]) * v[:, i] for i in range(6) if w[i] > 1e-9]
iso = states.haar_unitary(4, g)[:, :2]
alt = [iso[i, 0] * vecs[0] + iso[i, 1] * vecs[1] for i in range(4)]
print("channel difference:", channel_decomposition_independence(rho, alt, (2, 3)).channel_error)

###############################################################################
# Observables travel the other way.  The dual of the identity is rho_A.
print("dual(1) - rho_A:", np.abs(dual_channel(ch, np.eye(3)) - partial_trace(rho, 0, (2, 3))).max())

###############################################################################
# Phi conjugates its input, so it is not completely positive.  Composing
# with complex conjugation first gives a completely positive map.
print("min eigenvalue of the conjugated Choi matrix:", np.linalg.eigvalsh(star_choi(ch)).min())
