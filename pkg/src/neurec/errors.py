"""Exception types shared across the package."""

from __future__ import annotations


class NeurecError(Exception):
    """Base class for every package-specific error."""


class RhoTooSmall(NeurecError):
    """Fewer than two primes lie strictly between 2m and 3m."""

    def __init__(self, m: int, rho: int) -> None:
        self.m = m
        self.rho = rho
        super().__init__(f"m={m} yields rho={rho}; the construction needs rho >= 2")


class IndexOutOfRange(NeurecError):
    """A subsequence index i or a bifurcation step d is outside its valid range."""


class MixedShapes(NeurecError):
    """Shuffle composition requires equal memories, thresholds and weight profiles."""


class ShapeMismatch(NeurecError):
    """A bit window does not match the memory length of the system it feeds."""


class BudgetExceeded(NeurecError):
    """Cycle search exhausted its step budget before the window recurred."""

    def __init__(self, steps: int, budget: int) -> None:
        self.steps = steps
        self.budget = budget
        super().__init__(f"no recurrence within {budget} steps ({steps} executed)")


class PredictionFailed(NeurecError):
    """A predicted (transient, period) pair failed one of its probe checks."""

    def __init__(self, check: str, detail: dict) -> None:
        self.check = check
        self.detail = detail
        super().__init__(f"prediction check failed: {check} {detail}")


class HypothesisUnmet(NeurecError):
    """Basin check invoked with d >= beta(m, alpha_e); the free-prefix claim does not apply."""


class PlanInvariantViolated(NeurecError):
    """Shifted copies of the perturbation index set would leave the memory window."""
