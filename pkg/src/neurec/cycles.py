"""Minimal transient and period measurement over packed window states.

The state sequence is S_0, S_1, ... where S_n is the window after n slides
(S_0 is the init itself) and the dynamics are deterministic, so it is
eventually periodic with a unique minimal transient T and period P.

detect_cycle finds (T, P) with a constant-memory search: a teleporting
anchor pass recovers the exact minimal period, then two offset pointers
recover the transient.  Every detection is certified afterwards by the same
probe set verify_predicted uses, so a reported pair is never an artifact of
the search itself.

verify_predicted confirms a theoretically predicted pair in one forward pass
of exactly T + P steps, checking

    S_{T+P}    == S_T         (P is a period at T)
    S_{T+P/q}  != S_T         for every prime q | P  (P is minimal)
    S_{T-1+P}  != S_{T-1}     when T > 0            (T is minimal)

which suffices: on a deterministic orbit any period is a multiple of the
minimal one, so a smaller period would survive into some P/q probe.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .engine import CompiledSystem, advance_word, make_stepper, word_from_bits
from .errors import BudgetExceeded, PredictionFailed, ShapeMismatch

__all__ = ["CycleReport", "detect_cycle", "verify_predicted", "prime_factors"]


@dataclass(frozen=True)
class CycleReport:
    """Outcome of one cycle measurement or verification."""

    measured_transient: int
    measured_period: int
    predicted_transient: int | None = None
    predicted_period: int | None = None
    transient_match: bool | None = None
    period_match: bool | None = None
    steps_executed: int = 0

    @property
    def matches(self) -> bool | None:
        """Both match flags, or None when no prediction was supplied."""
        if self.transient_match is None or self.period_match is None:
            return None
        return self.transient_match and self.period_match


def prime_factors(n: int) -> tuple[int, ...]:
    """Distinct prime factors, ascending.  Trial division; n stays desk-sized."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out.append(n)
    return tuple(out)


def _check_init(cs: CompiledSystem, init: Sequence[int]) -> int:
    if len(init) != cs.memory:
        raise ShapeMismatch(f"init length {len(init)} != system memory {cs.memory}")
    return word_from_bits(init)


def _probe_pass(cs: CompiledSystem, word0: int, transient: int, period: int) -> int:
    """Run the certification probes in one forward pass; return steps used."""
    checkpoints: set[int] = {transient, transient + period}
    checkpoints.update(transient + period // q for q in prime_factors(period))
    if transient > 0:
        checkpoints.update((transient - 1, transient - 1 + period))
    snap: dict[int, int] = {}
    word = word0
    n = 0
    for target in sorted(checkpoints):
        word = advance_word(cs, word, target - n)
        n = target
        snap[target] = word
    if snap[transient + period] != snap[transient]:
        raise PredictionFailed(
            "period", {"transient": transient, "period": period, "reason": "window does not recur"}
        )
    for q in prime_factors(period):
        if snap[transient + period // q] == snap[transient]:
            raise PredictionFailed(
                "period_minimality",
                {"transient": transient, "period": period, "smaller_period": period // q},
            )
    if transient > 0 and snap[transient - 1 + period] == snap[transient - 1]:
        raise PredictionFailed(
            "transient_minimality",
            {"transient": transient, "period": period},
        )
    return n


def detect_cycle(
    cs: CompiledSystem,
    init: Sequence[int],
    step_budget: int,
    predicted: tuple[int, int] | None = None,
    certify: bool = True,
) -> CycleReport:
    """Measure the minimal (transient, period) of the orbit from init.

    Raises BudgetExceeded if the anchor search has not met a repeat within
    step_budget slides.  With certify (the default) the measured pair is
    re-proved by the probe pass, so a buggy search cannot return quietly.
    """
    word0 = _check_init(cs, init)
    step1 = make_stepper(cs)
    steps = 0

    # Anchor pass: teleport the anchor to the probe at powers of two; the
    # first probe state equal to the anchor is exactly one minimal period
    # ahead of it.
    power = 1
    lam = 1
    anchor = word0
    probe = step1(word0)
    steps += 1
    while anchor != probe:
        if power == lam:
            anchor = probe
            power *= 2
            lam = 0
        probe = step1(probe)
        steps += 1
        lam += 1
        if steps > step_budget:
            raise BudgetExceeded(steps, step_budget)

    # Transient pass: two pointers lam apart meet first at S_T.
    lead = advance_word(cs, word0, lam)
    steps += lam
    trail = word0
    mu = 0
    while trail != lead:
        trail = step1(trail)
        lead = step1(lead)
        steps += 2
        mu += 1
        if steps > step_budget:
            raise BudgetExceeded(steps, step_budget)

    steps += _probe_pass(cs, word0, mu, lam) if certify else 0

    report = CycleReport(
        measured_transient=mu,
        measured_period=lam,
        steps_executed=steps,
    )
    if predicted is not None:
        report = CycleReport(
            measured_transient=mu,
            measured_period=lam,
            predicted_transient=predicted[0],
            predicted_period=predicted[1],
            transient_match=mu == predicted[0],
            period_match=lam == predicted[1],
            steps_executed=steps,
        )
    return report


def verify_predicted(
    cs: CompiledSystem,
    init: Sequence[int],
    predicted_transient: int,
    predicted_period: int,
) -> CycleReport:
    """Prove a predicted (T, P) minimal in one pass of T + P slides.

    Raises PredictionFailed naming the first violated probe.  On success the
    measured fields simply echo the now-proved prediction.
    """
    if predicted_transient < 0 or predicted_period < 1:
        raise ValueError(
            f"need T >= 0 and P >= 1, got ({predicted_transient}, {predicted_period})"
        )
    word0 = _check_init(cs, init)
    steps = _probe_pass(cs, word0, predicted_transient, predicted_period)
    return CycleReport(
        measured_transient=predicted_transient,
        measured_period=predicted_period,
        predicted_transient=predicted_transient,
        predicted_period=predicted_period,
        transient_match=True,
        period_match=True,
        steps_executed=steps,
    )
