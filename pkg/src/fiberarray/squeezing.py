"""Collective spin moments and the Kitagawa-Ueda squeezing parameter.

``J_k = 1/2 sum_j sigma_j^k`` with ``sigma^x = s+ + s-``, ``sigma^y = -i (s+ - s-)``
and ``sigma^z = |E><E| - |G><G|``.  The squeezing parameter is

    xi^2 = 4 min_perp Var(J_perp) / N

minimized over directions perpendicular to the mean spin.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hilbert import apply_observable, expectation, n_sites_of

AXES = ("x", "y", "z")


class SqueezingUndefined(ValueError):
    """The mean spin vanishes, so there is no perpendicular plane."""


@dataclass
class CollectiveMoments:
    n_sites: int
    mean: np.ndarray  # <J_x>, <J_y>, <J_z>
    second: np.ndarray  # <(J_a J_b + J_b J_a)/2>

    @property
    def covariance(self) -> np.ndarray:
        return self.second - np.outer(self.mean, self.mean)


@dataclass
class SqueezingResult:
    xi_squared: float
    theta: float
    phi: float
    optimal_direction: np.ndarray


def collective_operator(axis: str, n_sites: int) -> list:
    """J_axis as an observable (list of ladder terms)."""
    if axis == "x":
        return [(0.5, [(op, j)]) for j in range(1, n_sites + 1) for op in ("plus", "minus")]
    if axis == "y":
        return [(c, [(op, j)]) for j in range(1, n_sites + 1) for c, op in ((-0.5j, "plus"), (0.5j, "minus"))]
    if axis == "z":
        return [(0.5, [("z", j)]) for j in range(1, n_sites + 1)]
    raise ValueError(f"unknown axis {axis!r}")


def collective_moments(rho: np.ndarray) -> CollectiveMoments:
    rho = np.asarray(rho, dtype=complex)
    n = n_sites_of(rho)
    ops = [collective_operator(a, n) for a in AXES]
    mean = np.array([expectation(rho, op) for op in ops])
    # Tr(J_a J_b rho) from the matrices J_b rho
    jb_rho = [apply_observable(op, rho) for op in ops]
    corr = np.array([[np.trace(apply_observable(ops[a], jb_rho[b])) for b in range(3)] for a in range(3)])
    second = 0.5 * (corr + corr.T)
    residue = max(np.abs(mean.imag).max(), np.abs(second.imag).max())
    if residue > 1e-10:
        raise ValueError(f"collective moments have imaginary residue {residue:.3e}; is rho Hermitian?")
    return CollectiveMoments(n, mean.real, second.real)


def mean_spin_angles(moments: CollectiveMoments) -> tuple[float, float]:
    """Polar angles of the mean spin, with phi = 0 when it points along +-z."""
    jx, jy, jz = moments.mean
    norm = float(np.linalg.norm(moments.mean))
    if norm <= 1e-12 * moments.n_sites:
        raise SqueezingUndefined("mean spin vanishes; squeezing undefined")
    theta = float(np.arccos(np.clip(jz / norm, -1.0, 1.0)))
    s = np.sin(theta)
    if s < 1e-12:
        return theta, 0.0
    phi = float(np.arccos(np.clip(jx / (norm * s), -1.0, 1.0)))
    if jy <= 0:
        phi = 2 * np.pi - phi
    return theta, phi % (2 * np.pi)


def perpendicular_frame(theta: float, phi: float) -> tuple[np.ndarray, np.ndarray]:
    n1 = np.array([-np.sin(phi), np.cos(phi), 0.0])
    n2 = np.array([np.cos(theta) * np.cos(phi), np.cos(theta) * np.sin(phi), -np.sin(theta)])
    return n1, n2


def perpendicular_covariance(moments: CollectiveMoments) -> tuple[np.ndarray, tuple[np.ndarray, np.ndarray]]:
    theta, phi = mean_spin_angles(moments)
    frame = perpendicular_frame(theta, phi)
    basis = np.stack(frame)
    return basis @ moments.covariance @ basis.T, frame


def spin_squeezing(rho: np.ndarray) -> SqueezingResult:
    moments = collective_moments(rho)
    theta, phi = mean_spin_angles(moments)
    gamma, (n1, n2) = perpendicular_covariance(moments)
    lam, vec = np.linalg.eigh(gamma)
    if lam[0] < -1e-9:
        raise ValueError(f"perpendicular covariance is not positive semidefinite (eigenvalue {lam[0]:.3e})")
    direction = vec[0, 0] * n1 + vec[1, 0] * n2
    return SqueezingResult(4.0 * max(float(lam[0]), 0.0) / moments.n_sites, theta, phi, direction)


def squeezing_closed_form(moments: CollectiveMoments) -> float:
    """xi^2 = (2/N)[<J1^2 + J2^2> - sqrt(<J1^2 - J2^2>^2 + 4 cov(J1, J2)^2)]."""
    n1, n2 = perpendicular_frame(*mean_spin_angles(moments))
    a = n1 @ moments.second @ n1
    b = n2 @ moments.second @ n2
    c = n1 @ moments.covariance @ n2
    return float(2.0 / moments.n_sites * (a + b - np.sqrt((a - b) ** 2 + 4 * c * c)))
