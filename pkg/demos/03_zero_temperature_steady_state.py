"""
Zero temperature: entanglement born from decay
==============================================

From |EEE> with empty fibers the excitations leak out, yet a fraction stays
trapped in dark states.  The far pair (1, 3) becomes entangled only after a
finite delay, and all three pairs end on the same plateau.
"""
import itertools

import numpy as np

from fiberarray import BathSpec, EvolutionConfig, evolve, partial_trace, steady_state
from fiberarray import basis_state, concurrence, density_from_pure, discord
from fiberarray.oracle import dense_liouvillian, steady_projection

bath = BathSpec.uniform([0.0, 0.0])
rho0 = density_from_pure(basis_state("EEE"))
pairs = list(itertools.combinations((1, 2, 3), 2))

samples = []
evolve(rho0, bath, EvolutionConfig(dt=1e-3, t_max=5.0, record_stride=50),
       [lambda t, rho: samples.append([t] + [concurrence(partial_trace(rho, list(p))) for p in pairs])],
       keep_states=False)
samples = np.array(samples)
for k, p in enumerate(pairs):
    on = samples[samples[:, k + 1] > 0, 0]
    print(f"C{p[0]}{p[1]} first nonzero at t = {on[0]:g}" if len(on) else f"C{p[0]}{p[1]} stays zero")

# the steady state depends on where we start, so it is reached by integration
ss = steady_state(rho0, bath)
print(f"\nsteady state at t = {ss.time:.2f}, ||L[rho]|| = {ss.residual:.1e}")
for p in pairs:
    pair = partial_trace(ss.rho, list(p))
    print(f"  pair {p}: C = {concurrence(pair):.6f}  D = {discord(pair).discord:.6f}")

# the dense oracle predicts the same limit from the kernel of the generator
exact = steady_projection(dense_liouvillian(bath), rho0)
print("max |integrated - spectral projection| =", np.abs(ss.rho - exact).max())
print("C plateau vs 22/135:", concurrence(partial_trace(exact, [1, 2])), 22 / 135)
