"""Transform-oracle-transform pipeline over the two-component input state.

The circuit prepares (|N/2-1> + |N/2>)/sqrt(2), conjugates a diagonal phase
oracle U_z with a self-dual transform pair (Walsh-Hadamard, or DFT and its
inverse), merges the designated two-component superposition onto a single
basis state, and measures it.

With the Hadamard transform and z = W_j the output is exactly
(|N/2-1-j> + |N/2+j>)/sqrt(2); restricted errors cancel identically, while
l unrestricted in-phase errors shrink the principal amplitude to
(1 - 4l/N)/sqrt(2) and raise the largest off component to 4l/(sqrt(2) N).
With the DFT and z = T_j the output is the adjacent pair
(|N/2-1+j> + |N/2+j>)/sqrt(2) with indices mod N.

Decision rules measure the merged basis state: index N-1 (symmetric merge)
for the Hadamard variants, index N-2 (adjacent merge) for the Fourier one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from .codewords import (
    FOURIER,
    RESTRICTED,
    UNRESTRICTED,
    ErrorSyndrome,
    ProblemInstance,
    fourier_codeword,
)
from .errors import ConfigError, InvariantError
from .spin_core import SpinSystem, StateVector

PHASE_UNIT_TOL = 1e-15
PER_OUTCOME_DIM_LIMIT = 64  # serialized reports embed the spectrum only up to here

TRANSFORMS = ("hadamard", "fourier")
PAIRINGS = ("symmetric", "adjacent")


class PhaseOracle:
    """Diagonal phase oracle e^(i pi z_x) with a per-application query counter.

    Bit-valued words produce exact +-1 phases; fractional words produce unit
    complex phases.  The counter is confined to one instance and is the only
    mutable state in this module.
    """

    def __init__(self, word):
        vals = list(word)
        if all(isinstance(v, (int, np.integer)) and v in (0, 1) for v in vals):
            phases = 1.0 - 2.0 * np.array(vals, dtype=float)
        else:
            phases = np.exp(1j * math.pi * np.array([float(Fraction(v)) for v in vals]))
        phases = phases.astype(complex)
        dev = float(np.max(np.abs(np.abs(phases) - 1.0)))
        if dev > PHASE_UNIT_TOL:
            raise InvariantError(f"oracle phases not unit modulus: dev={dev:.3e}")
        self.phases = phases
        self.queries = 0

    @property
    def dim(self) -> int:
        return len(self.phases)

    def apply(self, amps: np.ndarray) -> np.ndarray:
        self.queries += 1
        return amps * self.phases


def input_state(sys: SpinSystem) -> StateVector:
    """(|N/2-1> + |N/2>)/sqrt(2), the spin |+-1/2> superposition."""
    return StateVector(_input_amps(sys.dim))


def _input_amps(dim: int) -> np.ndarray:
    amps = np.zeros(dim, dtype=complex)
    amps[dim // 2 - 1] = amps[dim // 2] = 1 / math.sqrt(2)
    return amps


def _fwht(amps: np.ndarray) -> np.ndarray:
    """Normalized fast Walsh-Hadamard transform, O(N log N) butterflies."""
    out = amps.astype(complex).copy()
    h = 1
    while h < len(out):
        v = out.reshape(-1, 2, h)
        top = v[:, 0, :].copy()
        bot = v[:, 1, :].copy()
        v[:, 0, :] = top + bot
        v[:, 1, :] = top - bot
        h *= 2
    return out.reshape(-1) / math.sqrt(len(out))


def walsh_hadamard(state: StateVector) -> StateVector:
    """Apply H^(tensor n); involutive, requires a power-of-two dimension."""
    if state.dim & (state.dim - 1):
        raise ConfigError(f"Walsh-Hadamard needs a power-of-two dim, got {state.dim}")
    return StateVector(_fwht(state.amps))


def dft(state: StateVector, inverse: bool = False) -> StateVector:
    """Unitary DFT with kernel e^(2 pi i jk/N)/sqrt(N) (conjugated if inverse)."""
    if inverse:
        return StateVector(np.fft.fft(state.amps, norm="ortho"))
    return StateVector(np.fft.ifft(state.amps, norm="ortho"))


def run_pipeline(oracle, transform: str = "hadamard") -> StateVector:
    """R^dag U_z R applied to the two-component input state.

    ``oracle`` may be a PhaseOracle (whose query counter increments once) or
    a raw word, which is wrapped on the fly.
    """
    if transform not in TRANSFORMS:
        raise ConfigError(f"unknown transform {transform!r}")
    if not isinstance(oracle, PhaseOracle):
        oracle = PhaseOracle(oracle)
    amps = _input_amps(oracle.dim)
    if transform == "hadamard":
        amps = _fwht(amps)
        amps = oracle.apply(amps)
        amps = _fwht(amps)
    else:
        amps = np.fft.ifft(amps, norm="ortho")
        amps = oracle.apply(amps)
        amps = np.fft.fft(amps, norm="ortho")
    return StateVector(amps)


def merge_two_to_one(state: StateVector, pairing: str = "symmetric") -> StateVector:
    """Block unitary collapsing a designated two-component pair onto one state.

    symmetric: on each mirror pair (N/2-1-j, N/2+j) map
        (|N/2-1-j> + |N/2+j>)/sqrt(2) -> |N/2+j>,
    adjacent: on each disjoint pair (2k, 2k+1) map
        (|2k> + |2k+1>)/sqrt(2) -> |2k>.
    The orthogonal (antisymmetric) combination lands on the partner index,
    completing each 2x2 block to a Hadamard rotation.
    """
    if pairing not in PAIRINGS:
        raise ConfigError(f"unknown pairing {pairing!r}")
    amps = state.amps
    n = state.dim
    out = np.empty_like(amps)
    root = math.sqrt(2)
    if pairing == "symmetric":
        half = n // 2
        a = amps[half - 1 :: -1]  # index N/2-1-j for j = 0..N/2-1
        b = amps[half:]  # index N/2+j
        out[half:] = (a + b) / root
        out[half - 1 :: -1] = (a - b) / root
    else:
        a = amps[0::2]
        b = amps[1::2]
        out[0::2] = (a + b) / root
        out[1::2] = (a - b) / root
    return StateVector(out)


@dataclass(frozen=True)
class DecisionReport:
    """Outcome of one decision run, with the exact outcome spectrum."""

    decision: str
    pr_top: float
    queries: int
    repetitions: int
    per_outcome: np.ndarray | None = None

    def __post_init__(self):
        if not 0.0 <= self.pr_top <= 1.0 + 1e-12:
            raise InvariantError(f"pr_top outside [0,1]: {self.pr_top!r}")
        if self.per_outcome is not None:
            p = np.asarray(self.per_outcome, dtype=float)
            p.flags.writeable = False
            object.__setattr__(self, "per_outcome", p)
            if abs(float(p.sum()) - 1.0) > 1e-12:
                raise InvariantError("per-outcome probabilities do not sum to 1")

    def to_dict(self, variant: str, dim: int, hidden_j: int) -> dict:
        """Wire format; the outcome spectrum is embedded only for N <= 64."""
        doc = {
            "variant": variant,
            "N": dim,
            "hiddenJ": hidden_j,
            "decision": self.decision,
            "prTop": self.pr_top,
            "queries": self.queries,
            "repetitions": self.repetitions,
        }
        if self.per_outcome is not None and dim <= PER_OUTCOME_DIM_LIMIT:
            doc["perOutcome"] = [float(x) for x in self.per_outcome]
        return doc


def measure_designated(
    state: StateVector, index: int, rng: np.random.Generator | None = None
) -> DecisionReport:
    """Projective measurement report for the designated outcome index.

    Exact mode (rng None) decides from the amplitude directly; sampling mode
    draws one outcome from the full distribution using the provided stream.
    """
    if not 0 <= index < state.dim:
        raise ConfigError(f"outcome index {index} outside Z_{state.dim}")
    probs = state.probabilities()
    probs = probs / probs.sum()  # exact-unit total for the sampler
    pr_top = float(probs[index])
    if rng is None:
        decision = "A" if pr_top > 0.5 else "B"
    else:
        outcome = int(rng.choice(state.dim, p=probs))
        decision = "A" if outcome == index else "B"
    return DecisionReport(
        decision=decision, pr_top=pr_top, queries=0, repetitions=1, per_outcome=probs
    )


def decide_restricted(instance: ProblemInstance) -> DecisionReport:
    """Single-query exact decision; correct with certainty on restricted instances."""
    if instance.variant != RESTRICTED:
        raise ConfigError(f"expected a restricted instance, got {instance.variant!r}")
    oracle = PhaseOracle(instance.z)
    out = run_pipeline(oracle, "hadamard")
    merged = merge_two_to_one(out, "symmetric")
    report = measure_designated(merged, instance.dim - 1)
    return replace(report, queries=oracle.queries)


def decide_unrestricted(
    instance: ProblemInstance,
    repetitions: int = 1,
    rng: np.random.Generator | None = None,
) -> DecisionReport:
    """Repeat the pipeline q times and majority-vote the designated outcome.

    Answers A when the designated outcome shows up in more than q/2 rounds.
    The per-round success probability for A instances is at least 9/16 in
    the worst case, so the vote error decays exponentially in q.
    """
    if instance.variant != UNRESTRICTED:
        raise ConfigError(f"expected an unrestricted instance, got {instance.variant!r}")
    if repetitions < 1:
        raise ConfigError(f"repetitions must be >= 1, got {repetitions}")
    if rng is None and repetitions > 1:
        raise ConfigError("majority voting needs a seeded Generator")
    oracle = PhaseOracle(instance.z)
    designated = instance.dim - 1
    hits = 0
    last = None
    for _ in range(repetitions):
        merged = merge_two_to_one(run_pipeline(oracle, "hadamard"), "symmetric")
        last = measure_designated(merged, designated, rng)
        hits += last.decision == "A"
    decision = "A" if hits > repetitions / 2 else "B"
    return replace(last, decision=decision, queries=oracle.queries, repetitions=repetitions)


def decide_fourier(instance: ProblemInstance) -> DecisionReport:
    """DFT pipeline, adjacent merge, exact measurement of index N-2."""
    if instance.variant != FOURIER:
        raise ConfigError(f"expected a fourier instance, got {instance.variant!r}")
    oracle = PhaseOracle(instance.z)
    out = run_pipeline(oracle, "fourier")
    merged = merge_two_to_one(out, "adjacent")
    report = measure_designated(merged, instance.dim - 2)
    return replace(report, queries=oracle.queries)


def fourier_probability_table(dim: int) -> np.ndarray:
    """Exact Pr[N-2] after the Fourier pipeline for every codeword index j.

    The table is 1 at j = N/2-1 and 0 elsewhere except for the two even
    neighbours j = N/2-2 and N/2, which retain probability 1/4, so adjacent
    indices are not distinguished with certainty by this measurement.
    """
    table = np.empty(dim)
    for j in range(dim):
        word = fourier_codeword(dim, j)
        merged = merge_two_to_one(run_pipeline(word.vals, "fourier"), "adjacent")
        table[j] = merged.probabilities()[dim - 2]
    return table


def worst_case_error_mask(dim: int, weight: int) -> ErrorSyndrome:
    """In-phase non-restricted errors that meet the degradation bound exactly.

    Flips bits only at even-parity positions (where W_(N-1) is zero, so
    nothing cancels) that share a Hadamard character value, making every
    error contribute coherently to the same off component.
    """
    candidates = [x for x in range(0, dim, 2) if x.bit_count() % 2 == 0]
    if weight > len(candidates):
        raise ConfigError(f"cannot place {weight} in-phase errors in dim {dim}")
    mask = [0] * dim
    for x in candidates[:weight]:
        mask[x] = 1
    return ErrorSyndrome(mask=tuple(mask), weight=weight, restricted=False)
