"""
Two-qubit states and their correlations
=======================================

Basis labels, reduced states and the pairwise measures used everywhere else.
"""
import numpy as np

from fiberarray import basis_state, density_from_pure, partial_trace
from fiberarray import concurrence, discord, mutual_information, von_neumann_entropy

# site 1 is the leftmost letter and the most significant bit
print("index of |GEG>:", int(np.argmax(basis_state("GEG"))))

bell = density_from_pure((basis_state("GG") + basis_state("EE")) / np.sqrt(2))
print("Bell marginal on site 1:\n", partial_trace(bell, [1]).real)

# a Werner state interpolates between the singlet and white noise;
# it is entangled only above p = 1/3 but carries discord for every p > 0
singlet = density_from_pure((basis_state("GE") - basis_state("EG")) / np.sqrt(2))
print("\n   p     C       D(meas B)   I")
for p in (0.0, 0.2, 1 / 3, 0.5, 0.8, 1.0):
    w = p * singlet + (1 - p) / 4 * np.eye(4)
    print(f"{p:5.3f}  {concurrence(w):.4f}  {discord(w).discord:.6f}  {mutual_information(w):.4f}")

# a classical mixture: one bit of correlation, no quantum part
mix = (density_from_pure(basis_state("GG")) + density_from_pure(basis_state("EE"))) / 2
rep = discord(mix)
print("\nclassical mixture: I =", round(rep.mutual_information, 6), " J =", round(rep.classical_correlation, 6),
      " D =", round(rep.discord, 8), " best basis theta =", round(rep.optimal_basis.theta, 4))

print("S(diag(0.25, 0.75)) =", von_neumann_entropy(np.diag([0.25, 0.75])))
