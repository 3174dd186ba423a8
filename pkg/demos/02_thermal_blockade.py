"""
Thermal photons in one fiber
============================

Three qubits start in |GGG>.  Only the first fiber holds thermal photons
(n1 > 0, n2 = 0).  Qubits 2 and 3 get entangled briefly and then lose it
for good, while qubit 1 never becomes entangled with either.  Their
discord survives the loss of entanglement.
"""
import numpy as np

from fiberarray import BathSpec, EvolutionConfig, evolve, partial_trace
from fiberarray import basis_state, concurrence, density_from_pure, discord

rho0 = density_from_pure(basis_state("GGG"))
config = EvolutionConfig(dt=1e-3, t_max=20.0, record_stride=250)

for n1 in (0.2, 1.0):
    rows = []

    def observe(t, rho):
        c = [concurrence(partial_trace(rho, list(p))) for p in ((1, 2), (1, 3), (2, 3))]
        rows.append((t, *c, discord(partial_trace(rho, [2, 3])).discord))

    evolve(rho0, BathSpec.uniform([n1, 0.0]), config, [observe], keep_states=False)
    rows = np.array(rows)
    print(f"\nn1 = {n1}")
    print("    t      C12      C13      C23      D23")
    for r in rows[::4]:
        print(f"{r[0]:6.2f}  {r[1]:.5f}  {r[2]:.5f}  {r[3]:.5f}  {r[4]:.5f}")
    dead = rows[(rows[:, 0] > rows[np.argmax(rows[:, 3]), 0]) & (rows[:, 3] == 0), 0]
    print(f"peak C23 = {rows[:, 3].max():.5f}, gone from t = {dead[0]:g}, D23 at t = {rows[-1, 0]:g}: {rows[-1, 4]:.5f}")
