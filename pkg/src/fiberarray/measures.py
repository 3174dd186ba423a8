"""Two-qubit correlation measures: entropy, mutual information, concurrence, discord.

All entropies are in bits.  Pair states are 4x4 density matrices ordered
``|GG>, |GE>, |EG>, |EE>`` (first qubit most significant), as returned by
``partial_trace(rho, [i, j])``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize

from .hilbert import POSITIVITY_TOL, partial_trace

SIGMA_Y = np.array([[0, -1j], [1j, 0]])
YY = np.kron(SIGMA_Y, SIGMA_Y)

# coarse grid for the measurement-basis search, refined by Nelder-Mead
GRID_THETA = 24
GRID_PHI = 48
SIMPLEX_TOL = 1e-6
# outcomes rarer than this are dropped from the conditional entropy
MIN_PROBABILITY = 1e-12

SIDES = ("A", "B")


class MeasurementBasis(NamedTuple):
    """Rank-1 projective qubit measurement; theta in [0, pi], phi in [0, 2 pi)."""

    theta: float
    phi: float

    def vector(self) -> np.ndarray:
        """|b> = cos(theta/2)|E> + e^{i phi} sin(theta/2)|G> as (G, E) amplitudes."""
        return np.array([np.exp(1j * self.phi) * np.sin(self.theta / 2), np.cos(self.theta / 2)])

    @classmethod
    def normalized(cls, theta: float, phi: float) -> MeasurementBasis:
        # b(2 pi - theta, phi) is b(theta, phi + pi) up to a global phase
        theta = float(theta) % (2 * np.pi)
        phi = float(phi)
        if theta > np.pi:
            theta = 2 * np.pi - theta
            phi += np.pi
        phi %= 2 * np.pi
        # a tiny negative phi rounds up to exactly 2 pi
        return cls(theta, 0.0 if phi >= 2 * np.pi else phi)


@dataclass
class DiscordReport:
    mutual_information: float
    classical_correlation: float
    discord: float
    optimal_basis: MeasurementBasis
    measured_side: str


def _check_pair(rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"pair state must be 4x4, got {rho.shape}")
    return rho


def _check_side(side: str) -> str:
    if side not in SIDES:
        raise ValueError(f"measured_side must be 'A' or 'B', got {side!r}")
    return side


def _entropy_from_eigs(lam: np.ndarray) -> float:
    if lam.min() < -POSITIVITY_TOL:
        raise ValueError(f"state not positive (eigenvalue {lam.min():.3e})")
    lam = lam[lam > 0]
    return float(max(0.0, -(lam * np.log2(lam)).sum()))


def von_neumann_entropy(rho: np.ndarray) -> float:
    """-sum lambda log2 lambda, with eigenvalues in [-1e-8, 0) treated as 0."""
    return _entropy_from_eigs(np.linalg.eigvalsh(np.asarray(rho, dtype=complex)))


def mutual_information(rho: np.ndarray) -> float:
    rho = _check_pair(rho)
    return (von_neumann_entropy(partial_trace(rho, [1])) + von_neumann_entropy(partial_trace(rho, [2]))
            - von_neumann_entropy(rho))


def concurrence(rho: np.ndarray) -> float:
    """Wootters concurrence from the spectrum of rho (sy x sy) rho* (sy x sy)."""
    rho = _check_pair(rho)
    r = rho @ YY @ rho.conj() @ YY
    lam = np.linalg.eigvals(r)
    if np.abs(lam.imag).max() >= 1e-8 or lam.real.min() < -1e-8:
        raise ValueError(f"invalid spin-flip spectrum: {lam}")
    s = np.sort(np.sqrt(np.clip(lam.real, 0.0, None)))[::-1]
    return float(max(0.0, s[0] - s[1] - s[2] - s[3]))


def measurement_projectors(basis: MeasurementBasis) -> tuple[np.ndarray, np.ndarray]:
    b = basis.vector()
    p1 = np.outer(b, b.conj())
    return p1, np.eye(2) - p1


def conditional_entropy(rho: np.ndarray, basis: MeasurementBasis, measured_side: str = "B") -> float:
    """sum_i p_i S(rho_i) after measuring ``measured_side`` in ``basis``."""
    return projective_conditional_entropy(rho, measurement_projectors(basis), measured_side)


def projective_conditional_entropy(rho: np.ndarray, projectors, measured_side: str = "B") -> float:
    """Same as ``conditional_entropy`` for an explicit list of one-qubit projectors."""
    rho = _check_pair(rho)
    _check_side(measured_side)
    total = 0.0
    for proj in projectors:
        k = np.kron(np.eye(2), proj) if measured_side == "B" else np.kron(proj, np.eye(2))
        post = k @ rho @ k
        p = np.trace(post).real
        if p < MIN_PROBABILITY:
            continue
        total += p * von_neumann_entropy(post / p)
    return total


class _ConditionalEntropy:
    """Conditional entropy as a function of the measurement angles.

    Measuring one qubit with outcome |b> leaves the other in the unnormalized
    2x2 state <b|rho|b>; the complementary outcome leaves the reduced state
    minus that.  Entropies come from the closed-form 2x2 spectrum.  ``grid``
    is vectorized; calling the object evaluates one point in plain Python,
    which is what the simplex refinement needs.
    """

    def __init__(self, rho: np.ndarray, measured_side: str):
        t = rho.reshape(2, 2, 2, 2)  # (a, b, a', b')
        if measured_side == "A":
            t = t.transpose(1, 0, 3, 2)
        # blocks[b][b'] is the 2x2 matrix rho[:, b, :, b'] of the unmeasured qubit
        self.blocks = t.transpose(1, 3, 0, 2)
        self.reduced = self.blocks[0, 0] + self.blocks[1, 1]
        self._flat = [complex(x) for x in self.blocks.ravel()]

    def grid(self, theta, phi) -> np.ndarray:
        theta, phi = np.broadcast_arrays(np.asarray(theta, float), np.asarray(phi, float))
        s2 = np.sin(theta / 2) ** 2
        c2 = np.cos(theta / 2) ** 2
        sc_e = (0.5 * np.sin(theta) * np.exp(-1j * phi))[..., None, None]
        bl = self.blocks
        m1 = (s2[..., None, None] * bl[0, 0] + c2[..., None, None] * bl[1, 1]
              + sc_e * bl[0, 1] + sc_e.conj() * bl[1, 0])
        return _weighted_entropy(m1) + _weighted_entropy(self.reduced - m1)

    def __call__(self, theta: float, phi: float) -> float:
        s2 = math.sin(theta / 2) ** 2
        c2 = 1.0 - s2
        e = 0.5 * math.sin(theta) * cmath.exp(-1j * phi)
        ec = e.conjugate()
        f = self._flat  # b, b', a, a' order
        m = [s2 * f[k] + c2 * f[12 + k] + e * f[4 + k] + ec * f[8 + k] for k in range(4)]
        r = [f[k] + f[12 + k] for k in range(4)]
        return (_weighted_entropy_scalar(m[0].real, m[3].real, abs(m[1]))
                + _weighted_entropy_scalar(r[0].real - m[0].real, r[3].real - m[3].real, abs(r[1] - m[1])))


def _weighted_entropy_scalar(a: float, d: float, c: float) -> float:
    p = a + d
    if p <= MIN_PROBABILITY:
        return 0.0
    gap = math.sqrt((a - d) ** 2 + 4 * c * c)
    out = p * math.log2(p)
    for mu in (0.5 * (p + gap), 0.5 * (p - gap)):
        if mu > 0:
            out -= mu * math.log2(mu)
    return max(out, 0.0)


def _weighted_entropy(m: np.ndarray) -> np.ndarray:
    """p S(m/p) for unnormalized 2x2 Hermitian m (batched), p = Tr m."""
    a, d = m[..., 0, 0].real, m[..., 1, 1].real
    p = a + d
    gap = np.sqrt((a - d) ** 2 + 4 * np.abs(m[..., 0, 1]) ** 2)
    out = np.zeros(p.shape)
    for mu in (0.5 * (p + gap), 0.5 * (p - gap)):
        mu = np.clip(mu, 0.0, None)
        with np.errstate(divide="ignore", invalid="ignore"):
            out -= np.where(mu > 0, mu * np.log2(np.where(mu > 0, mu, 1.0)), 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        out += np.where(p > MIN_PROBABILITY, p * np.log2(np.where(p > 0, p, 1.0)), 0.0)
    return np.where(p > MIN_PROBABILITY, np.clip(out, 0.0, None), 0.0)


def _min_conditional_entropy(rho: np.ndarray, measured_side: str) -> tuple[float, MeasurementBasis]:
    f = _ConditionalEntropy(rho, measured_side)
    thetas = np.linspace(0.0, np.pi, GRID_THETA)
    phis = np.arange(GRID_PHI) * (2 * np.pi / GRID_PHI)
    grid = f.grid(thetas[:, None], phis[None, :])
    i, k = np.unravel_index(np.argmin(grid), grid.shape)
    x0 = np.array([thetas[i], phis[k]])
    h = np.array([np.pi / (GRID_THETA - 1), 2 * np.pi / GRID_PHI])
    res = minimize(
        lambda x: f(x[0], x[1]),
        x0,
        method="Nelder-Mead",
        options={
            "initial_simplex": np.array([x0, x0 + [h[0], 0.0], x0 + [0.0, h[1]]]),
            "xatol": SIMPLEX_TOL / 2,
            "fatol": 1e-15,
            "maxiter": 4000,
        },
    )
    best, x = (float(res.fun), res.x) if res.fun <= grid[i, k] else (float(grid[i, k]), x0)
    return best, MeasurementBasis.normalized(*x)


def classical_correlation(rho: np.ndarray, measured_side: str = "B") -> tuple[float, MeasurementBasis]:
    """J = S(unmeasured marginal) - min over bases of the conditional entropy."""
    rho = _check_pair(rho)
    _check_side(measured_side)
    other = partial_trace(rho, [1] if measured_side == "B" else [2])
    h_min, basis = _min_conditional_entropy(rho, measured_side)
    return von_neumann_entropy(other) - h_min, basis


def discord(rho: np.ndarray, measured_side: str = "B") -> DiscordReport:
    rho = _check_pair(rho)
    info = mutual_information(rho)
    j, basis = classical_correlation(rho, measured_side)
    d = info - j
    if d < -1e-8:
        raise ValueError(f"optimizer failed to reach sup: discord {d:.3e} < 0")
    d = max(d, 0.0)
    return DiscordReport(info, j, d, basis, measured_side)
