"""
Teleporting through noisy ancillas
==================================

A Werner ancilla p |Phi+><Phi+| + (1 - p) 1/4 mixes the perfect channel
with full depolarization.  With Pauli corrections the average fidelity
interpolates linearly from 1/2 to 1.
"""
import numpy as np

from eprkit.teleport import werner_sweep

ps = np.linspace(0, 1, 11)
rows = werner_sweep(ps, seed=4)

print(f"{'p':>5}  {'avg fidelity':>12}")
for p in ps:
    sel = [r for r in rows if r["p"] == p]
    avg = sum(r["probability"] * r["corrected_fidelity"] for r in sel)
    print(f"{p:5.2f}  {avg:12.6f}")

# The classical bound for a qubit is 2/3; it is passed once p > 1/3.
