"""Hadamard and Fourier codewords, error syndromes, and problem instances.

Hadamard codewords are the rows of the base-(-1) logarithm of the scaled
N = 2^n Walsh-Hadamard matrix in Sylvester order: bit x of W_j is the parity
of j AND x.  All rows except W_0 are balanced and any two rows differ in
exactly N/2 positions.  The rows form a group under XOR with
W_j ^ W_k = W_(j XOR k), in particular W_j ^ W_(N-1-j) = W_(N-1).

Fourier codewords are the analogous rows for the discrete Fourier matrix
with kernel omega = e^(2 pi i / N): entry k of T_j is the exact rational
2jk/N reduced modulo 2 into (-1, 1].  They form the additive cyclic group
of order N with T_j + T_(N-j) = T_0 and T_j + T_(N/2-j) = T_(N/2).

Error syndromes are weight-d masks; "restricted" masks may only touch the
N/2 positions where W_(N-1) has a one (the odd-parity positions), which is
exactly the error pattern the quantum pipeline cancels.

All arithmetic in this module is exact (ints and Fractions); sampling uses
an explicitly passed numpy Generator, never global state.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .errors import ConfigError, DegenerateInstanceError, ResourceLimitError

VARIANTS = ("restricted", "unrestricted", "fourier")
_ENUMERATION_LIMIT = 10 ** 6

RESTRICTED = "restricted"
UNRESTRICTED = "unrestricted"
FOURIER = "fourier"


def _check_dim(dim: int) -> int:
    if not isinstance(dim, (int, np.integer)) or dim < 4 or dim & (dim - 1):
        raise ConfigError(f"codeword length must be a power of two >= 4, got {dim!r}")
    return int(dim)


def designated_index(dim: int) -> int:
    """The fixed codeword index j* = N/2 - 1 whose membership defines label A.

    Any index would do; this one matches the measurement design, so it is a
    constant rather than a parameter.
    """
    return dim // 2 - 1


@dataclass(frozen=True)
class Codeword:
    """One Hadamard codeword: length-N bits plus its row index."""

    bits: tuple[int, ...]
    index: int

    def __str__(self) -> str:
        return "".join(str(b) for b in self.bits)


@dataclass(frozen=True)
class FractionalWord:
    """One Fourier codeword: length-N exact rationals in (-1, 1]."""

    vals: tuple[Fraction, ...]
    index: int

    def __str__(self) -> str:
        return ",".join(str(v) for v in self.vals)


@dataclass(frozen=True)
class ErrorSyndrome:
    """Weight-d error mask; restricted masks are dominated by W_(N-1)."""

    mask: tuple[int, ...]
    weight: int
    restricted: bool

    def __post_init__(self):
        if sum(self.mask) != self.weight:
            raise ConfigError(f"mask weight {sum(self.mask)} != declared {self.weight}")
        if self.restricted:
            guard = hadamard_codeword(len(self.mask), len(self.mask) - 1).bits
            if any(m and not g for m, g in zip(self.mask, guard)):
                raise ConfigError("restricted mask not dominated by W_(N-1)")


def hadamard_codeword(dim: int, j: int) -> Codeword:
    """Row j of the Hadamard codeword matrix: bit x = popcount(j AND x) mod 2."""
    dim = _check_dim(dim)
    if not 0 <= j < dim:
        raise ConfigError(f"codeword index {j} outside Z_{dim}")
    return Codeword(bits=tuple((j & x).bit_count() & 1 for x in range(dim)), index=j)


def _reduce_signed(v: Fraction) -> Fraction:
    """Reduce modulo 2 into the half-open interval (-1, 1]."""
    r = v % 2
    return r - 2 if r > 1 else r


def fourier_codeword(dim: int, j: int) -> FractionalWord:
    """Row j of the Fourier codeword matrix: entry k = 2jk/N mod 2 in (-1, 1]."""
    dim = _check_dim(dim)
    if not 0 <= j < dim:
        raise ConfigError(f"codeword index {j} outside Z_{dim}")
    vals = tuple(_reduce_signed(Fraction(2 * j * k, dim)) for k in range(dim))
    return FractionalWord(vals=vals, index=j)


def hamming_distance(a: Sequence[int], b: Sequence[int]) -> int:
    if len(a) != len(b):
        raise ConfigError(f"length mismatch: {len(a)} vs {len(b)}")
    return sum(x != y for x, y in zip(a, b))


def apply_mask(bits: Sequence[int], mask: Sequence[int]) -> tuple[int, ...]:
    """Componentwise XOR of a bit string with an error mask."""
    if len(bits) != len(mask):
        raise ConfigError(f"length mismatch: {len(bits)} vs {len(mask)}")
    return tuple(b ^ m for b, m in zip(bits, mask))


def _error_positions(dim: int, restricted: bool) -> tuple[int, ...]:
    if restricted:
        guard = hadamard_codeword(dim, dim - 1).bits
        return tuple(x for x in range(dim) if guard[x])
    return tuple(range(dim))


def syndrome_count(dim: int, d: int, restricted: bool) -> int:
    """C(N/2, d) for restricted masks, C(N, d) otherwise."""
    dim = _check_dim(dim)
    pool = dim // 2 if restricted else dim
    if not 0 <= d <= pool:
        raise ConfigError(f"error weight {d} outside [0, {pool}]")
    return math.comb(pool, d)


def syndromes(dim: int, d: int, restricted: bool) -> Iterator[ErrorSyndrome]:
    """Enumerate every weight-d mask (restricted ones only touch odd-parity bits).

    Enumeration is refused above 10^6 masks; use sample_syndrome there.
    """
    count = syndrome_count(dim, d, restricted)
    if count > _ENUMERATION_LIMIT:
        raise ResourceLimitError(
            f"{count} syndromes exceed the enumeration limit; sample instead"
        )
    positions = _error_positions(dim, restricted)
    for combo in itertools.combinations(positions, d):
        mask = [0] * dim
        for x in combo:
            mask[x] = 1
        yield ErrorSyndrome(mask=tuple(mask), weight=d, restricted=restricted)


def sample_syndrome(
    dim: int, d: int, restricted: bool, rng: np.random.Generator
) -> ErrorSyndrome:
    """Uniform weight-d mask without enumeration: a uniform d-subset of positions."""
    syndrome_count(dim, d, restricted)  # validates range
    positions = _error_positions(dim, restricted)
    chosen = rng.choice(len(positions), size=d, replace=False) if d else []
    mask = [0] * dim
    for i in chosen:
        mask[positions[int(i)]] = 1
    return ErrorSyndrome(mask=tuple(mask), weight=d, restricted=restricted)


def restricted_set_size(dim: int) -> int:
    """Number of strings within restricted distance < N/4 of one codeword.

    Equals sum_(m < N/4) C(N/2, m) = (2^(N/2) - C(N/2, N/4)) / 2, which is
    exponential in N.
    """
    dim = _check_dim(dim)
    if dim < 8:
        raise ConfigError(f"restricted set size needs N >= 8, got {dim}")
    return sum(math.comb(dim // 2, m) for m in range(dim // 4))


@dataclass(frozen=True)
class GroupLawReport:
    """Outcome of the codeword group-structure verification."""

    dim: int
    laws_checked: tuple[str, ...]
    failures: tuple[tuple[str, int, int], ...]

    @property
    def passed(self) -> bool:
        return not self.failures


def group_properties_check(dim: int) -> GroupLawReport:
    """Verify the XOR group laws of W and the additive mod-2 laws of T.

    Checks, for all j (and all pairs where applicable):
      W self-inverse   W_j ^ W_j = W_0
      W mirror sum     W_j ^ W_(N-1-j) = W_(N-1)
      W closure        W_j ^ W_k = W_(j XOR k)
      T inverse        T_j + T_(N-j) = T_0
      T mirror sum     T_j + T_(N/2-j) = T_(N/2)
    """
    dim = _check_dim(dim)
    w = [hadamard_codeword(dim, j).bits for j in range(dim)]
    t = [fourier_codeword(dim, j).vals for j in range(dim)]
    failures = []
    for j in range(dim):
        if apply_mask(w[j], w[j]) != w[0]:
            failures.append(("W self-inverse", j, j))
        if apply_mask(w[j], w[dim - 1 - j]) != w[dim - 1]:
            failures.append(("W mirror sum", j, dim - 1 - j))
        for k in range(dim):
            if apply_mask(w[j], w[k]) != w[j ^ k]:
                failures.append(("W closure", j, k))
        if _add_reduced(t[j], t[(dim - j) % dim]) != t[0]:
            failures.append(("T inverse", j, (dim - j) % dim))
        if _add_reduced(t[j], t[(dim // 2 - j) % dim]) != t[dim // 2]:
            failures.append(("T mirror sum", j, (dim // 2 - j) % dim))
    laws = ("W self-inverse", "W mirror sum", "W closure", "T inverse", "T mirror sum")
    return GroupLawReport(dim=dim, laws_checked=laws, failures=tuple(failures))


def _add_reduced(a: Sequence[Fraction], b: Sequence[Fraction]) -> tuple[Fraction, ...]:
    return tuple(_reduce_signed(x + y) for x, y in zip(a, b))


@dataclass(frozen=True)
class ProblemInstance:
    """A sampled oracle string with its hidden ground truth."""

    variant: str
    z: tuple
    hidden_j: int
    syndrome: ErrorSyndrome | None
    label: str

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ConfigError(f"unknown variant {self.variant!r}")
        dim = len(self.z)
        _check_dim(dim)
        expected = "A" if self.hidden_j == designated_index(dim) else "B"
        if self.label != expected:
            raise ConfigError(f"label {self.label!r} inconsistent with j={self.hidden_j}")
        if self.variant == FOURIER:
            if self.syndrome is not None:
                raise ConfigError("fourier instances carry no error syndrome")
            if self.z != fourier_codeword(dim, self.hidden_j).vals:
                raise ConfigError("fourier instance string does not match its index")
            return
        if self.syndrome is None or len(self.syndrome.mask) != dim:
            raise ConfigError("syndrome missing or of wrong length")
        bound = dim // 4 if self.variant == RESTRICTED else dim / 16
        if not self.syndrome.weight < bound:
            raise ConfigError(
                f"{self.variant} weight {self.syndrome.weight} not below {bound}"
            )
        if self.variant == RESTRICTED and not self.syndrome.restricted:
            raise ConfigError("restricted instance with unrestricted syndrome")
        base = hadamard_codeword(dim, self.hidden_j).bits
        if self.z != apply_mask(base, self.syndrome.mask):
            raise ConfigError("instance string does not equal codeword XOR mask")

    @property
    def dim(self) -> int:
        return len(self.z)


def _valid_weights(variant: str, dim: int) -> list[int]:
    bound = dim // 4 if variant == RESTRICTED else dim / 16
    return [m for m in range(dim) if m < bound]


def _resolve_weights(variant: str, dim: int, d) -> list[int]:
    valid = _valid_weights(variant, dim)
    if d is None:
        requested = valid
    elif isinstance(d, (int, np.integer)):
        requested = [int(d)]
    else:
        requested = sorted(int(x) for x in d)
    chosen = [m for m in requested if m in valid]
    if not chosen:
        raise DegenerateInstanceError(
            f"{variant} instance class empty for N={dim}, d={d!r} "
            f"(valid weights: {valid})"
        )
    return chosen


def sample_instance(
    variant: str, dim: int, d=None, rng: np.random.Generator | None = None
) -> ProblemInstance:
    """Draw one instance uniformly from the stated problem set.

    ``d`` selects the error weight: an int, an iterable of ints, or None for
    the full valid range.  Uniformity over a union of weight classes follows
    from weighting each class by its syndrome count.  Fourier instances are
    error-free codewords with j uniform over Z_N.
    """
    dim = _check_dim(dim)
    if variant not in VARIANTS:
        raise ConfigError(f"unknown variant {variant!r}")
    if rng is None:
        raise ConfigError("sample_instance requires an explicit seeded Generator")
    if variant == FOURIER:
        if d not in (None, 0):
            raise ConfigError("fourier instances are error-free (d must be 0)")
        j = int(rng.integers(0, dim))
        word = fourier_codeword(dim, j)
        label = "A" if j == designated_index(dim) else "B"
        return ProblemInstance(
            variant=variant, z=word.vals, hidden_j=j, syndrome=None, label=label
        )
    weights = _resolve_weights(variant, dim, d)
    counts = np.array([syndrome_count(dim, m, variant == RESTRICTED) for m in weights])
    probs = counts / counts.sum()
    d_sel = int(rng.choice(len(weights), p=probs))
    syndrome = sample_syndrome(dim, weights[d_sel], variant == RESTRICTED, rng)
    j = int(rng.integers(0, dim // 2))
    z = apply_mask(hadamard_codeword(dim, j).bits, syndrome.mask)
    label = "A" if j == designated_index(dim) else "B"
    return ProblemInstance(variant=variant, z=z, hidden_j=j, syndrome=syndrome, label=label)


def instance_from_parts(
    variant: str, dim: int, j: int, syndrome: ErrorSyndrome
) -> ProblemInstance:
    """Build a validated instance from an explicit codeword index and mask."""
    base = hadamard_codeword(dim, j)
    label = "A" if j == designated_index(dim) else "B"
    return ProblemInstance(
        variant=variant,
        z=apply_mask(base.bits, syndrome.mask),
        hidden_j=j,
        syndrome=syndrome,
        label=label,
    )


def enumerate_instances(variant: str, dim: int, d=None) -> Iterator[ProblemInstance]:
    """Every instance of the variant, all codeword indices x all valid masks."""
    dim = _check_dim(dim)
    if variant == FOURIER:
        for j in range(dim):
            word = fourier_codeword(dim, j)
            label = "A" if j == designated_index(dim) else "B"
            yield ProblemInstance(
                variant=variant, z=word.vals, hidden_j=j, syndrome=None, label=label
            )
        return
    weights = _resolve_weights(variant, dim, d)
    for j in range(dim // 2):
        for m in weights:
            for syndrome in syndromes(dim, m, variant == RESTRICTED):
                yield instance_from_parts(variant, dim, j, syndrome)
