"""
Five qubits, one warm fiber
===========================

Thermal photons only in the fiber between qubits 2 and 3.  The steady state
keeps entanglement on the far pair (4, 5), while the pair sitting on the warm
fiber has the most discord and no entanglement at all.
"""
import itertools

from fiberarray import BathSpec, basis_state, concurrence, density_from_pure, discord, partial_trace, steady_state

bath = BathSpec.uniform([0.0, 0.2, 0.0, 0.0])
ss = steady_state(density_from_pure(basis_state("GGGGG")), bath)
print(f"steady after t = {ss.time:.1f} (||L[rho]|| = {ss.residual:.1e})\n")
print("pair      C         D(meas B)  D(meas A)")
for p in itertools.combinations(range(1, 6), 2):
    pair = partial_trace(ss.rho, list(p))
    print(f"{p}  {concurrence(pair):.6f}  {discord(pair, 'B').discord:.6f}   {discord(pair, 'A').discord:.6f}")
