"""
Collective spin squeezing
=========================

xi^2 < 1 signals reduced collective spin noise perpendicular to the mean
spin.  |GGG> is a coherent spin state and stays at 1; a partially excited
register such as |EEG> becomes squeezed as it decays.
"""
import numpy as np

from fiberarray import BathSpec, EvolutionConfig, basis_state, density_from_pure, evolve
from fiberarray.squeezing import SqueezingUndefined, collective_moments, spin_squeezing

bath = BathSpec.uniform([0.0, 0.0])
config = EvolutionConfig(dt=1e-3, t_max=10.0, record_stride=500)

for label in ("GGG", "EEE", "EEG"):
    out = []

    def observe(t, rho):
        try:
            out.append((t, spin_squeezing(rho).xi_squared))
        except SqueezingUndefined:
            out.append((t, np.nan))

    evolve(density_from_pure(basis_state(label)), bath, config, [observe], keep_states=False)
    print(label, " ".join("   nan" if np.isnan(x) else f"{x:6.3f}" for _, x in out))

# the mean spin of a GHZ state vanishes, so there is no perpendicular plane
ghz = density_from_pure((basis_state("GGG") + basis_state("EEE")) / np.sqrt(2))
print("\nGHZ mean spin:", collective_moments(ghz).mean)
try:
    spin_squeezing(ghz)
except SqueezingUndefined as e:
    print("GHZ:", e)
