"""Optimal-coding reduction machinery.

Code lengths are integers (symbol counts); the ideal fractional length
-log2 p is exposed as a diagnostic only.  Contextual tables extend plain
type tables with a preceding context block, and the Kendall tau condition
tau(p, l) <= 0 characterizes optimal assignments in both settings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.stats import kendalltau

from .errors import AllTied, UnknownTarget, ZeroProbability, ZeroTargetMass
from .distributions import MASS_TOLERANCE


@dataclass(frozen=True)
class TypeTable:
    """Per-type probability and integer code length."""

    probabilities: tuple[float, ...]
    lengths: tuple[int, ...]
    allow_full_reduction: bool = False

    def __post_init__(self):
        object.__setattr__(self, "probabilities", tuple(self.probabilities))
        object.__setattr__(self, "lengths", tuple(self.lengths))
        if len(self.probabilities) != len(self.lengths):
            raise ValueError("probabilities and lengths must align")
        if abs(math.fsum(self.probabilities) - 1.0) > MASS_TOLERANCE:
            raise ValueError("type probabilities must sum to 1")
        floor = 0 if self.allow_full_reduction else 1
        if any(l < floor for l in self.lengths):
            raise ValueError(f"lengths must be >= {floor}")


@dataclass(frozen=True)
class ContextTable:
    """Per-(context block, target) probability and length.

    ``entries`` maps (context tuple, target) to (probability, length).
    Unseen context/target combinations carry zero mass and are omitted.
    """

    entries: dict[tuple[tuple, str], tuple[float, int]]
    context_order: int

    def __post_init__(self):
        for (context, _), _ in self.entries.items():
            if len(context) != self.context_order:
                raise ValueError("context arity mismatch")
        if abs(math.fsum(p for p, _ in self.entries.values()) - 1.0) > MASS_TOLERANCE:
            raise ValueError("context table mass must sum to 1")

    def targets(self):
        return sorted({y for (_, y) in self.entries})

    def target_mass(self, y):
        return math.fsum(p for (_, t), (p, _) in self.entries.items() if t == y)


def ideal_lengths(probabilities):
    """Fractional -log2 p diagnostic column."""
    return tuple(-math.log2(p) for p in probabilities)


def optimal_lengths(probabilities, allow_full_reduction=False):
    """Uniquely decipherable optimum: l = ceil(-log2 p) per type.

    Without the full-reduction flag, lengths are floored at 1
    (non-singular coding).
    """
    lengths = []
    for p in probabilities:
        if p <= 0:
            raise ZeroProbability("all probabilities must be positive")
        ideal = -math.log2(p)
        # guard against float noise pushing an exact integer over the ceiling
        length = math.ceil(ideal - 1e-9)
        if not allow_full_reduction:
            length = max(1, length)
        lengths.append(max(0, length))
    return tuple(lengths)


def mean_length(table):
    """L = sum p_i l_i."""
    return math.fsum(p * l for p, l in zip(table.probabilities, table.lengths))


def contextual_mean_length(table):
    """L_n = sum over (context, y) of p * l; reduces to L when n = 0."""
    return math.fsum(p * l for p, l in table.entries.values())


def per_target_length(table, y):
    """L_n(y): the y-slice of the contextual mean length."""
    if y not in {t for (_, t) in table.entries}:
        raise UnknownTarget(f"target {y!r} not present in the table")
    return math.fsum(
        p * l for (_, t), (p, l) in table.entries.items() if t == y
    )


def renormalized_length(table, y):
    """M_n(y) = L_n(y) / p(y), the mean length of y across its contexts."""
    mass = table.target_mass(y)
    if mass <= 0:
        raise ZeroTargetMass(f"target {y!r} has zero total mass")
    return per_target_length(table, y) / mass


def kendall_tau(pairs):
    """Tie-corrected Kendall tau-b over (probability, length) pairs."""
    pairs = list(pairs)
    if len(pairs) < 2:
        raise ValueError("need at least 2 pairs")
    xs = [p for p, _ in pairs]
    ys = [l for _, l in pairs]
    if len(set(xs)) == 1 or len(set(ys)) == 1:
        raise AllTied("correlation undefined: one of the variables is constant")
    tau = kendalltau(xs, ys).statistic
    if math.isnan(tau):
        raise AllTied("correlation undefined: all pairs tied")
    return float(tau)


@dataclass(frozen=True)
class AbbreviationVerdict:
    holds: bool
    tau: float | None
    all_tied: bool


def abbreviation_check(table):
    """Zipf's law of abbreviation at optimal coding: tau(p, l) <= 0.

    An all-tied table has no defined correlation; the verdict then holds
    vacuously.
    """
    if isinstance(table, ContextTable):
        pairs = [(p, l) for p, l in table.entries.values()]
    else:
        pairs = list(zip(table.probabilities, table.lengths))
    try:
        tau = kendall_tau(pairs)
    except AllTied:
        return AbbreviationVerdict(True, None, True)
    return AbbreviationVerdict(tau <= 1e-12, tau, False)


def kraft_sum(lengths):
    """sum 2^-l; <= 1 for any uniquely decipherable code."""
    return math.fsum(2.0 ** -l for l in lengths)
