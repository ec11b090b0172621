"""Exact simulation of recurrence systems over sliding bit windows.

Two independent evaluation routes:

  compiled   weights are scaled by the lcm D of their denominators so the
             affine form becomes an integer; taps with equal scaled weight
             are fused into one bitmask, so a step is a handful of
             big-int AND / popcount operations on the packed window.
  oracle     a deliberately naive evaluator that walks the full dense weight
             vector with Fraction arithmetic every step.  No scaling, no
             sparsity.  It exists to cross-check the compiled route bit for
             bit and for nothing else.

Window packing convention: bit (j - 1) of the word holds x(n - j), so the
newest output sits at bit 0 and a step is (word << 1 | out) masked back to
memory bits.  Sign is preserved exactly: sum(D * a_j * x(n-j)) >= D * theta
iff the rational affine form is >= theta, because D > 0.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Callable, Sequence

from .construction import RecurrenceSystem
from .errors import ShapeMismatch

__all__ = [
    "BitState",
    "CompiledSystem",
    "compile_system",
    "make_stepper",
    "step",
    "advance_word",
    "affine_sum_scaled",
    "run",
    "dense_oracle_run",
    "word_from_bits",
    "bits_from_word",
]


def word_from_bits(bits: Sequence[int]) -> int:
    """Pack x(t-memory)..x(t-1) into an int; bits[0] is the oldest."""
    w = 0
    for b in bits:
        w = (w << 1) | (b & 1)
    return w


def bits_from_word(word: int, memory: int) -> tuple[int, ...]:
    """Unpack to the same oldest-first order word_from_bits consumes."""
    return tuple((word >> (memory - 1 - q)) & 1 for q in range(memory))


@dataclass
class BitState:
    """Sliding window of the memory most recent outputs.

    word bit (j - 1) holds x(time - j); time starts at memory so the init
    window is x(0)..x(memory - 1).
    """

    memory: int
    word: int
    time: int

    @classmethod
    def from_init(cls, init: Sequence[int]) -> "BitState":
        return cls(memory=len(init), word=word_from_bits(init), time=len(init))

    @property
    def bits(self) -> tuple[int, ...]:
        return bits_from_word(self.word, self.memory)


@dataclass(frozen=True)
class CompiledSystem:
    """Scaled-integer form of a RecurrenceSystem.

    taps lists (offset j, scaled weight) for the nonzero weights only;
    groups fuses taps of equal scaled weight into (weight, or-mask) pairs;
    denominator is the common scale D (8 * Tot(d) for z-systems, 1 for the
    integer-weight families).
    """

    memory: int
    taps: tuple[tuple[int, int], ...]
    scaled_threshold: int
    denominator: int
    groups: tuple[tuple[int, int], ...]
    mask: int


def _scaled(value, d: int) -> int:
    f = Fraction(value)
    return f.numerator * (d // f.denominator)


def compile_system(system: RecurrenceSystem) -> CompiledSystem:
    """Clear denominators and fuse equal-weight taps into bitmasks."""
    denoms = [Fraction(w).denominator for w in system.weights if w != 0]
    denoms.append(Fraction(system.threshold).denominator)
    d = lcm(*denoms) if denoms else 1
    taps = tuple(
        (j, _scaled(w, d))
        for j, w in enumerate(system.weights, start=1)
        if w != 0
    )
    by_weight: dict[int, int] = {}
    for j, w in taps:
        by_weight[w] = by_weight.get(w, 0) | (1 << (j - 1))
    groups = tuple(sorted(by_weight.items()))
    return CompiledSystem(
        memory=system.memory,
        taps=taps,
        scaled_threshold=_scaled(system.threshold, d),
        denominator=d,
        groups=groups,
        mask=(1 << system.memory) - 1,
    )


def make_stepper(cs: CompiledSystem) -> Callable[[int], int]:
    """Return word -> next word with the hot constants bound as locals."""
    groups = cs.groups
    theta = cs.scaled_threshold
    mask = cs.mask

    def step1(word: int) -> int:
        s = 0
        for w, gm in groups:
            hit = word & gm
            if hit:
                s += w * hit.bit_count()
        return ((word << 1) | (1 if s >= theta else 0)) & mask

    return step1


def affine_sum_scaled(cs: CompiledSystem, word: int) -> int:
    """D * (sum_j a_j x(n-j)) for the window packed in word."""
    s = 0
    for w, gm in cs.groups:
        hit = word & gm
        if hit:
            s += w * hit.bit_count()
    return s


def step(cs: CompiledSystem, state: BitState) -> int:
    """Advance one step in place and return the emitted bit."""
    if state.memory != cs.memory:
        raise ShapeMismatch(f"state memory {state.memory} != system memory {cs.memory}")
    s = affine_sum_scaled(cs, state.word)
    out = 1 if s >= cs.scaled_threshold else 0
    state.word = ((state.word << 1) | out) & cs.mask
    state.time += 1
    return out


def advance_word(cs: CompiledSystem, word: int, steps: int) -> int:
    """Slide the window forward without recording a trace."""
    groups = cs.groups
    theta = cs.scaled_threshold
    mask = cs.mask
    for _ in range(steps):
        s = 0
        for w, gm in groups:
            hit = word & gm
            if hit:
                s += w * hit.bit_count()
        word = ((word << 1) | (1 if s >= theta else 0)) & mask
    return word


def run(cs: CompiledSystem, init: Sequence[int], steps: int) -> list[int]:
    """Full trace x(0)..x(memory+steps-1); the prefix is the init itself."""
    if len(init) != cs.memory:
        raise ShapeMismatch(f"init length {len(init)} != system memory {cs.memory}")
    trace = list(init)
    groups = cs.groups
    theta = cs.scaled_threshold
    mask = cs.mask
    word = word_from_bits(init)
    append = trace.append
    for _ in range(steps):
        s = 0
        for w, gm in groups:
            hit = word & gm
            if hit:
                s += w * hit.bit_count()
        out = 1 if s >= theta else 0
        append(out)
        word = ((word << 1) | out) & mask
    return trace


def dense_oracle_run(system: RecurrenceSystem, init: Sequence[int], steps: int) -> list[int]:
    """Reference trace via a full-length rational dot product every step.

    Kept intentionally slow and direct: it touches every weight each step
    and compares against the threshold in Fraction arithmetic.
    """
    if len(init) != system.memory:
        raise ShapeMismatch(f"init length {len(init)} != system memory {system.memory}")
    trace = list(init)
    window = deque(init, maxlen=system.memory)
    weights = system.weights
    theta = Fraction(system.threshold)
    for _ in range(steps):
        s = Fraction(0)
        for a, bit in zip(weights, reversed(window)):
            if bit:
                s = s + a
        out = 1 if s >= theta else 0
        trace.append(out)
        window.append(out)
    return trace
