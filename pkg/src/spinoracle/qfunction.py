"""Spherical Q-function evaluation on a (theta, phi) grid.

The quasi-probability at (theta, phi) is the squared magnitude of the
coherent-state overlap sum

    Q(theta, phi) = | sum_k C(2s,k)^(1/2) sin(theta/2)^k cos(theta/2)^(2s-k)
                      a_k e^(i k phi) |^2

with a_k the qudit amplitudes.  The modulus square makes Q a non-negative
visualization density; with the measure sin(theta) dtheta dphi it integrates
to 4 pi / (2s+1) for any normalized state.

Grid layout: theta in [0, pi] inclusive, phi in [0, 2 pi) exclusive,
row-major over theta then phi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, InvariantError
from .spin_core import SpinSystem, StateVector, _half_log_binomials


@dataclass(frozen=True)
class SphericalGrid:
    """Non-negative Q values sampled on the standard spherical grid."""

    dim: int
    thetas: np.ndarray
    phis: np.ndarray
    values: np.ndarray  # shape (len(thetas), len(phis))

    def __post_init__(self):
        for name in ("thetas", "phis", "values"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        if self.values.shape != (len(self.thetas), len(self.phis)):
            raise InvariantError("grid shape mismatch")
        if float(self.values.min()) < 0:
            raise InvariantError("Q-function values must be non-negative")

    def rows(self):
        """Yield (theta, phi, q) triples in row-major order."""
        for t, theta in enumerate(self.thetas):
            for p, phi in enumerate(self.phis):
                yield float(theta), float(phi), float(self.values[t, p])

    def quadrature_total(self) -> float:
        """(2s+1)/(4 pi) x integral of Q over the sphere; ~1 for any state.

        Trapezoid in theta (the sin(theta) weight vanishes at both poles),
        rectangle rule in phi, which is exact for trigonometric polynomials
        once len(phis) exceeds the state's bandwidth.
        """
        d_theta = float(self.thetas[1] - self.thetas[0])
        d_phi = 2 * math.pi / len(self.phis)
        w_theta = np.full(len(self.thetas), d_theta)
        w_theta[0] = w_theta[-1] = d_theta / 2
        integral = float((w_theta * np.sin(self.thetas)) @ self.values.sum(axis=1) * d_phi)
        return integral * self.dim / (4 * math.pi)


def q_values_at(state: StateVector, sys: SpinSystem, thetas, phis) -> np.ndarray:
    """Evaluate Q on the outer product of the given angle arrays."""
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    phis = np.atleast_1d(np.asarray(phis, dtype=float))
    two_s = sys.two_s
    k = np.arange(sys.dim)
    half_log_binom = _half_log_binomials(two_s)
    phase = np.exp(1j * np.outer(phis, k))  # (P, N)
    out = np.empty((len(thetas), len(phis)))
    for t, theta in enumerate(thetas):
        sin_h, cos_h = math.sin(theta / 2), math.cos(theta / 2)
        if sin_h == 0.0 or cos_h == 0.0:
            coeff = np.zeros(sys.dim)
            coeff[0 if sin_h == 0.0 else two_s] = 1.0
        else:
            coeff = np.exp(
                half_log_binom + k * math.log(sin_h) + (two_s - k) * math.log(cos_h)
            )
        out[t] = np.abs(phase @ (coeff * state.amps)) ** 2
    return out


def q_function(
    state: StateVector, sys: SpinSystem, theta_steps: int, phi_steps: int
) -> SphericalGrid:
    """Sample the Q-function of ``state`` on a theta_steps x phi_steps grid."""
    if theta_steps < 8 or phi_steps < 8:
        raise ConfigError(f"grid must be at least 8x8, got {theta_steps}x{phi_steps}")
    if state.dim != sys.dim:
        raise ConfigError(f"state dim {state.dim} does not match system dim {sys.dim}")
    thetas = np.linspace(0.0, math.pi, theta_steps)
    phis = np.arange(phi_steps) * (2 * math.pi / phi_steps)
    return SphericalGrid(
        dim=sys.dim,
        thetas=thetas,
        phis=phis,
        values=q_values_at(state, sys, thetas, phis),
    )
