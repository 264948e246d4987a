"""Seeded randomness and the agreement protocol for Monte Carlo counts.

All genericity in the package flows through :class:`SeedStream`, a
splitmix-style 64-bit generator chosen for trivial cross-language
reproducibility.  State update and output for a stream with state ``s``:

    s        <- (s + 0x9E3779B97F4A7C15) mod 2**64
    z        <- s
    z        <- (z xor (z >> 30)) * 0xBF58476D1CE4E5B9 mod 2**64
    z        <- (z xor (z >> 27)) * 0x94D049BB133111EB mod 2**64
    output   <- z xor (z >> 31)

Counts obtained from random data are only reported once they agree across
every (seed, prime) pair demanded by an :class:`AgreementPolicy`; a
disagreement after the configured retries raises :class:`Instability`
carrying everything observed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15

DEFAULT_PRIMES = (2147483647, 2147483629)

# Random integer coefficients live in [1, 2**30): below both default
# characteristics, so one draw denotes the same field element modulo every
# configured prime and cross-prime runs recount the same geometric data.
COEFF_BOUND = 1 << 30


def _mix(z: int) -> int:
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def derive_seed(seed: int, index: int) -> int:
    """Disjoint child seed for trial ``index``; stable across runs."""
    return _mix((seed & _MASK) ^ _mix(index + 1))


class SeedStream:
    """Deterministic stream of 64-bit words and derived small draws."""

    __slots__ = ("_state",)

    def __init__(self, seed: int) -> None:
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK
        return _mix(self._state)

    def integer(self, low: int = 1, high: int = COEFF_BOUND) -> int:
        """Uniform-ish integer in ``[low, high)`` by rejection sampling."""
        span = high - low
        if span <= 0:
            raise ValueError("empty range")
        limit = (1 << 64) - ((1 << 64) % span)
        while True:
            word = self.next_u64()
            if word < limit:
                return low + word % span

    def residue(self, p: int) -> int:
        """Field residue in ``[0, p)``."""
        return self.integer(0, p)

    def nonzero_residue(self, p: int) -> int:
        return self.integer(1, p)

    def coefficients(self, count: int) -> list[int]:
        """Nonzero integer coefficients shared meaningfully by all primes."""
        return [self.integer() for _ in range(count)]


class Instability(RuntimeError):
    """Randomized recounts failed to agree within the retry budget."""

    def __init__(self, context: str, observations: dict[tuple[int, int], int]) -> None:
        detail = ", ".join(
            f"(seed={s}, prime={p}) -> {v}" for (s, p), v in sorted(observations.items())
        )
        super().__init__(f"{context}: no agreement across trials: {detail}")
        self.context = context
        self.observations = observations


@dataclass(frozen=True)
class AgreementPolicy:
    """How many independent recounts must agree before a value is reported."""

    seeds_per_trial: int = 2
    primes: tuple[int, ...] = DEFAULT_PRIMES
    max_retries: int = 3

    def __post_init__(self) -> None:
        if self.seeds_per_trial < 1 or not self.primes or self.max_retries < 0:
            raise ValueError("degenerate agreement policy")


DEFAULT_POLICY = AgreementPolicy()


def agreed_value(
    computation: Callable[[int, int], int],
    seed: int,
    policy: AgreementPolicy = DEFAULT_POLICY,
    context: str = "randomized count",
) -> int:
    """Run ``computation(seed, prime)`` over the policy grid until agreement.

    Every attempt uses fresh derived seeds; values must match exactly.  The
    callable may raise ``NotZeroDimensional`` or ``DegenerateSlice`` for an
    unlucky draw -- those are treated as a failed trial and retried.
    """
    from .conormal import DegenerateSlice
    from .groebner import NotZeroDimensional

    last_observations: dict[tuple[int, int], int] = {}
    for attempt in range(policy.max_retries + 1):
        observations: dict[tuple[int, int], int] = {}
        degenerate = False
        for s_index in range(policy.seeds_per_trial):
            child = derive_seed(seed, attempt * policy.seeds_per_trial + s_index)
            for prime in policy.primes:
                try:
                    observations[(child, prime)] = computation(child, prime)
                except (NotZeroDimensional, DegenerateSlice):
                    degenerate = True
                    break
            if degenerate:
                break
        if not degenerate:
            values = set(observations.values())
            if len(values) == 1:
                return values.pop()
        last_observations = observations or last_observations
    raise Instability(context, last_observations)


def random_affine_form(
    stream: SeedStream, nvars: int
) -> tuple[list[int], int]:
    """Coefficients and constant of an affine form with all entries nonzero."""
    return stream.coefficients(nvars), stream.integer()


def random_covector(stream: SeedStream, nvars: int) -> list[int]:
    """A generic objective direction; every entry nonzero."""
    return stream.coefficients(nvars)
