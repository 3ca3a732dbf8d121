"""Element-count optimization: minimize closed-form outage over N.

The admissible counts are the perfect squares up to the installed
maximum.  The profile is not convex in general (side-lobe structure), and
with at most ~50 candidate counts of an O(atoms) formula each, exhaustive
evaluation is the cheapest correct strategy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import UsageError
from .scenario import METHODS, Scenario

__all__ = ["OptimizationResult", "optimal_elements"]


@dataclass(frozen=True)
class OptimizationResult:
    """Minimizer, its outage, and the full (N, outage) profile."""

    n_opt: int
    op_min: float
    profile: tuple

    def outage_at(self, n_elements: int) -> float:
        for n, op in self.profile:
            if n == n_elements:
                return op
        raise UsageError(f"{n_elements} is not in the evaluated profile")


def optimal_elements(
    scenario: Scenario,
    n_max: int,
    method: str | None = None,
    tail_mode: str = "paper-exact",
) -> OptimizationResult:
    """Exhaustive search over square element counts up to ``n_max``.

    Ties break towards the smaller count.  ``tail_mode`` defaults to
    'paper-exact' so the objective matches the plain atom sum; the
    conservative mode would add a tail penalty that grows with N.
    """
    if n_max < 1:
        raise UsageError("n_max must be at least 1")
    method = method or scenario.default_method()
    if method not in METHODS:
        raise UsageError(f"method must be one of {METHODS}, got {method!r}")
    profile = []
    best_n, best_op = None, math.inf
    for n_side in range(1, math.isqrt(n_max) + 1):
        candidate = scenario.with_elements(n_side)
        op = candidate.closed_form_outage(method, tail_mode).probability
        n = n_side * n_side
        profile.append((n, op))
        if op < best_op:
            best_n, best_op = n, op
    return OptimizationResult(n_opt=best_n, op_min=best_op, profile=tuple(profile))
