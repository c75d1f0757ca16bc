"""Spin systems, collective spin operators, and coherent spin states.

A system of 2s elementary 1/2-spins with fixed total spin s spans an
N = 2s + 1 dimensional Hilbert space.  We only use N = 2^n so that length-N
bit strings index the basis, which makes 2s odd and s a half-integer.

Index convention (used by every module in this package):

    qudit index i = 0 .. N-1   <->   spin projection m = i - s

so ``i = 0`` is the ground state ``|-s>`` and ``i = N-1`` is ``|s>``.
The coherent-state expansion below runs over ``|s-k>``, i.e. k = N-1-i.

Operators are dense complex matrices with verified structure flags.  States
are unit-norm complex vectors.  Everything is immutable after construction
and all functions are pure, so concurrent use is safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConfigError, InvariantError, NumericsError

NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-12
UNITARY_TOL = 1e-10

_MIN_EXPONENT = 2
_MAX_EXPONENT = 14  # dense ops stay desk-scale; transforms alone go further


@dataclass(frozen=True)
class SpinSystem:
    """Problem dimensions: exponent n, dimension N = 2^n, spin s = (N-1)/2."""

    n: int
    dim: int

    def __post_init__(self):
        if self.dim != 2 ** self.n or self.dim < 4:
            raise InvariantError(f"inconsistent spin system (n={self.n}, dim={self.dim})")

    @property
    def two_s(self) -> int:
        return self.dim - 1

    @property
    def s(self) -> float:
        # half-integer, exact in binary floating point
        return (self.dim - 1) / 2

    def m_values(self) -> np.ndarray:
        """Spin projections m = i - s for qudit indices i = 0..N-1."""
        return np.arange(self.dim) - self.s


def make_spin_system(n: int) -> SpinSystem:
    """Build the spin system for N = 2^n basis states.

    The exponent is capped at 14 as a resource guard: dense N x N work is
    only ever needed up to N = 1024, fast transforms remain cheap beyond.
    """
    if not isinstance(n, (int, np.integer)):
        raise ConfigError(f"exponent must be an integer, got {n!r}")
    if not _MIN_EXPONENT <= n <= _MAX_EXPONENT:
        raise ConfigError(
            f"exponent n={n} outside supported range [{_MIN_EXPONENT}, {_MAX_EXPONENT}]"
        )
    return SpinSystem(n=int(n), dim=2 ** int(n))


def _frozen_array(a: np.ndarray) -> np.ndarray:
    out = np.ascontiguousarray(a)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class StateVector:
    """Unit-norm complex amplitude vector over the qudit basis."""

    amps: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=complex)
        object.__setattr__(self, "amps", _frozen_array(amps))
        norm_sq = float(np.sum(np.abs(self.amps) ** 2))
        if abs(norm_sq - 1.0) > NORM_TOL:
            raise InvariantError(f"state not normalized: sum |amp|^2 = {norm_sq!r}")

    @property
    def dim(self) -> int:
        return self.amps.shape[0]

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    @staticmethod
    def basis(dim: int, index: int) -> "StateVector":
        amps = np.zeros(dim, dtype=complex)
        amps[index] = 1.0
        return StateVector(amps)

    def overlap(self, other: "StateVector") -> complex:
        return complex(np.vdot(self.amps, other.amps))


def state_to_pairs(state: StateVector) -> list:
    """JSON-friendly serialization: list of [re, im] pairs."""
    return [[float(a.real), float(a.imag)] for a in state.amps]


def state_from_pairs(pairs) -> StateVector:
    return StateVector(np.array([complex(re, im) for re, im in pairs]))


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense N x N complex matrix with verified structure flags."""

    entries: np.ndarray
    hermitian: bool = False
    unitary: bool = False
    diagonal: bool = False

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvariantError(f"operator must be square, got shape {m.shape}")
        object.__setattr__(self, "entries", _frozen_array(m))
        if self.hermitian:
            dev = float(np.max(np.abs(m - m.conj().T)))
            if dev >= HERMITIAN_TOL:
                raise InvariantError(f"hermitian flag violated: max|M - M^dag| = {dev:.3e}")
        if self.unitary:
            eye = np.eye(m.shape[0])
            dev = float(np.max(np.abs(m.conj().T @ m - eye)))
            if dev >= UNITARY_TOL:
                raise InvariantError(f"unitary flag violated: max|M^dag M - I| = {dev:.3e}")
        if self.diagonal:
            off = m - np.diag(np.diag(m))
            if np.any(off != 0):
                raise InvariantError("diagonal flag violated: nonzero off-diagonal entries")

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def apply(self, state: StateVector) -> StateVector:
        return StateVector(self.entries @ state.amps)


@dataclass(frozen=True)
class SpinOperators:
    sx: OperatorMatrix
    sy: OperatorMatrix
    sz: OperatorMatrix
    splus: OperatorMatrix
    sminus: OperatorMatrix
    s_squared: OperatorMatrix


def _symmetrized(m: np.ndarray) -> np.ndarray:
    # enforce exact hermiticity lost to matmul round-off
    return (m + m.conj().T) / 2


@lru_cache(maxsize=None)
def spin_operators(sys: SpinSystem) -> SpinOperators:
    """Collective spin operators in the qudit basis.

    Sz is diagonal with entries m = -s..s; the ladder operators have the
    standard matrix elements sqrt(s(s+1) - m(m+-1)); Sx = (S+ + S-)/2 and
    Sy = (S+ - S-)/(2i).  The su(2) relations [Sx,Sy] = iSz (and cyclic) and
    S^2 = s(s+1) I hold to round-off.
    """
    s = sys.s
    m = sys.m_values()
    sz = np.diag(m.astype(complex))
    splus = np.zeros((sys.dim, sys.dim), dtype=complex)
    # S+|m> = sqrt(s(s+1) - m(m+1)) |m+1>, i.e. entry (i+1, i)
    coeff = np.sqrt(s * (s + 1) - m[:-1] * (m[:-1] + 1))
    splus[np.arange(1, sys.dim), np.arange(sys.dim - 1)] = coeff
    sminus = splus.conj().T
    sx = (splus + sminus) / 2
    sy = (splus - sminus) / 2j
    s2 = _symmetrized(sx @ sx + sy @ sy + sz @ sz)
    return SpinOperators(
        sx=OperatorMatrix(sx, hermitian=True),
        sy=OperatorMatrix(sy, hermitian=True),
        sz=OperatorMatrix(sz, hermitian=True, diagonal=True),
        splus=OperatorMatrix(splus),
        sminus=OperatorMatrix(sminus),
        s_squared=OperatorMatrix(s2, hermitian=True),
    )


def expi_hermitian(h: np.ndarray, t: float) -> np.ndarray:
    """exp(i t H) for Hermitian H via eigendecomposition.

    Exactly unitary up to round-off; no series truncation involved.
    """
    try:
        w, v = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        scale = float(np.max(np.abs(h))) if h.size else 0.0
        raise NumericsError(
            f"eigendecomposition failed: dim={h.shape[0]}, max|H|={scale:.3e}: {exc}"
        ) from exc
    return (v * np.exp(1j * t * w)) @ v.conj().T


def _half_log_binomials(m: int) -> np.ndarray:
    """0.5 * ln C(m, k) for k = 0..m, stable for large m."""
    lg = math.lgamma(m + 1)
    return np.array(
        [0.5 * (lg - math.lgamma(k + 1) - math.lgamma(m - k + 1)) for k in range(m + 1)]
    )


def coherent_state(sys: SpinSystem, theta: float, phi: float) -> StateVector:
    """Coherent spin state |theta, phi>.

    Amplitude on |s-k> is C(2s,k)^(1/2) cos(theta/2)^(2s-k) sin(theta/2)^k
    e^(i k phi), the product form of the normalized tan expansion; it is
    finite for every theta including the poles.  Note the expansion places
    theta = 0 on |s>, the top of the ladder rather than the |-s> ground
    state; the equatorial states used downstream are symmetric between the
    poles, so nothing depends on that labeling.  Evaluated in log space so
    the binomial weights stay representable up to N = 16384, then
    renormalized (relative correction ~1e-13).
    """
    if not 0.0 <= theta <= math.pi:
        raise ConfigError(f"theta={theta} outside [0, pi]")
    if not 0.0 <= phi < 2 * math.pi:
        raise ConfigError(f"phi={phi} outside [0, 2*pi)")
    two_s = sys.two_s
    half = theta / 2
    sin_h, cos_h = math.sin(half), math.cos(half)
    amps = np.zeros(sys.dim, dtype=complex)
    if sin_h == 0.0:
        amps[sys.dim - 1] = 1.0  # k = 0 only: |s>
        return StateVector(amps)
    if cos_h == 0.0:
        amps[0] = 1.0  # k = 2s only: |-s>
        return StateVector(amps)
    k = np.arange(two_s + 1)
    log_mag = _half_log_binomials(two_s) + k * math.log(sin_h) + (two_s - k) * math.log(cos_h)
    mags = np.exp(log_mag)
    # |s-k> lives at qudit index N-1-k
    amps[sys.dim - 1 - k] = mags * np.exp(1j * phi * k)
    amps /= math.sqrt(float(np.sum(np.abs(amps) ** 2)))
    return StateVector(amps)


def expectation(op: OperatorMatrix, state: StateVector) -> float:
    """<state| op |state> for Hermitian op (real part returned)."""
    return float(np.vdot(state.amps, op.entries @ state.amps).real)


def variance(op: OperatorMatrix, state: StateVector) -> float:
    mean = expectation(op, state)
    applied = op.entries @ state.amps
    second = float(np.vdot(applied, applied).real) if op.hermitian else float(
        np.vdot(state.amps, op.entries @ applied).real
    )
    return second - mean * mean


def uncertainty_triplet(
    state: StateVector,
    op_i: OperatorMatrix,
    op_j: OperatorMatrix,
    op_k: OperatorMatrix,
) -> tuple[float, float, float]:
    """(Var Si, Var Sj, <Sk>) for any orthogonal operator triple.

    Callers may assert the uncertainty relation
    Var Si * Var Sj >= <Sk>^2 / 4.
    """
    return variance(op_i, state), variance(op_j, state), expectation(op_k, state)
