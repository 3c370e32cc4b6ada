"""Per-position conditional entropy estimation and entropy-rate diagnostics.

Estimates use the plug-in (maximum likelihood) estimator on sliding-window
block counts: H(X_i | X_1..X_{i-1}) = H_block(i) - H_block(i-1).  On top of
the estimated profiles sit the constant-entropy-rate check, the uniform
information density classifier, power-law decay fitting and the peak-cost
functional.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np
from scipy.optimize import nnls

from .errors import (
    DegenerateProfile,
    EmptySequence,
    InsufficientData,
    UnsupportedModelSize,
)
from .infotheory import EntropyProfile, entropy

GAMMA_GRID = np.arange(0.05, 1.5 + 1e-9, 0.005)


@dataclass(frozen=True)
class NGramTable:
    """Sliding-window block counts for orders 1..max_order."""

    max_order: int
    counts: dict[int, Counter]        # order -> Counter of token tuples
    total_positions: dict[int, int]   # order -> number of windows counted
    cyclic: bool = False


def ngram_counts(sequence, max_order, cyclic=False):
    """Count blocks of every order 1..max_order.

    With ``cyclic=True`` windows wrap around the end of the sequence, which
    makes the counts of a perfectly periodic sequence exact rather than
    edge-biased.
    """
    tokens = list(sequence)
    if not tokens:
        raise EmptySequence("cannot count n-grams of an empty sequence")
    if max_order < 1:
        raise ValueError("max_order must be >= 1")
    n = len(tokens)
    counts = {}
    totals = {}
    for order in range(1, max_order + 1):
        counter = Counter()
        if cyclic:
            for start in range(n):
                counter[tuple(tokens[(start + k) % n] for k in range(order))] += 1
            totals[order] = n
        else:
            if n >= order:
                for start in range(n - order + 1):
                    counter[tuple(tokens[start:start + order])] += 1
            totals[order] = max(0, n - order + 1)
        counts[order] = counter
    return NGramTable(max_order, counts, totals, cyclic)


def block_entropy(table, order):
    """Plug-in entropy (bits) of blocks of the given order."""
    total = table.total_positions[order]
    if total == 0:
        raise InsufficientData(f"no windows of order {order}")
    return -math.fsum(
        (c / total) * math.log2(c / total) for c in table.counts[order].values()
    )


def conditional_entropy_profile(table, min_windows=1, coverage_cap=0.2):
    """Estimated H(X_i | X_1..X_{i-1}) for i = 1..k.

    The profile is truncated once distinct blocks exceed ``coverage_cap``
    of the window count (pass None to disable): beyond that point plug-in
    estimates collapse towards zero.  Raises InsufficientData when not even
    the unigram estimate clears ``min_windows``.
    """
    values = []
    previous = 0.0
    for order in range(1, table.max_order + 1):
        total = table.total_positions[order]
        if total < min_windows:
            break
        if (
            coverage_cap is not None
            and order > 1
            and len(table.counts[order]) > coverage_cap * total
        ):
            break
        h_block = block_entropy(table, order)
        values.append(h_block - previous)
        previous = h_block
    if not values:
        raise InsufficientData("sequence too short for any conditional estimate")
    return EntropyProfile(values, "rate", strict=False)


def exact_periodic_profile(period, depth, reading="relaxed"):
    """Exact per-position profile of a perfect periodic source with T types.

    relaxed reading (arbitrary subsequence, uniformly chosen phase):
    [log2 T, 0, 0, ...].  full-history reading (position 1 is always the
    block start): all zeros.
    """
    if period < 1:
        raise ValueError("period must be >= 1")
    if reading == "full":
        return EntropyProfile([0.0] * depth, "rate", strict=False)
    if reading != "relaxed":
        raise ValueError(f"unknown reading {reading!r}")
    values = [math.log2(period)] + [0.0] * (depth - 1)
    return EntropyProfile(values, "rate", strict=False)


# ---------------------------------------------------------------------------
# Diagnostics


@dataclass(frozen=True)
class CerVerdict:
    flat: bool
    spread: float
    max_drop: float
    max_drop_position: int | None  # i such that the drop is values[i-1] -> values[i]


def cer_diagnostic(profile, tolerance):
    """Is the conditional entropy rate constant along the profile?"""
    values = list(profile.values)
    if not values:
        raise EmptySequence("empty profile")
    spread = max(values) - min(values)
    max_drop = 0.0
    position = None
    for i in range(1, len(values)):
        drop = values[i - 1] - values[i]
        if drop > max_drop:
            max_drop = drop
            position = i + 1  # 1-based index of the later profile entry
    return CerVerdict(spread <= tolerance, spread, max_drop, position)


@dataclass(frozen=True)
class UidClassification:
    verdict: str                     # full_uid | strong_uid | neither
    worst_spread: float              # max per-sequence spread over the support
    offending_sequence: tuple | None


def _chain_conditionals(model, sequence):
    probs = []
    for i in range(len(model.roles)):
        prefix_roles = model.roles[: i + 1]
        joint = model.marginal(prefix_roles).get(tuple(sequence[: i + 1]), 0.0)
        if i == 0:
            probs.append(joint)
        else:
            prev = model.marginal(model.roles[:i]).get(tuple(sequence[:i]), 0.0)
            probs.append(joint / prev if prev > 0 else 0.0)
    return probs


def uid_classify(model, tolerance=1e-9, enumeration_cap=200_000):
    """Classify a joint model as full_uid / strong_uid / neither.

    strong: every supported sequence has constant conditional probabilities
    along its positions.  full: strong, and the support is the whole
    Cartesian product of the per-position alphabets.
    """
    cardinality = math.prod(len(model.alphabets[r]) for r in model.roles)
    if cardinality > enumeration_cap:
        raise UnsupportedModelSize(
            f"support enumeration over {cardinality} tuples exceeds the cap"
        )
    worst = 0.0
    offender = None
    for sequence in model.support():
        probs = _chain_conditionals(model, sequence)
        spread = max(probs) - min(probs)
        if spread > worst:
            worst = spread
            offender = sequence
    if worst > tolerance:
        return UidClassification("neither", worst, offender)
    full_support = len(model.table) == cardinality
    return UidClassification("full_uid" if full_support else "strong_uid", worst, None)


def uid_spread(sequence, model):
    """Max - min of the conditional probabilities of one concrete sequence."""
    if len(sequence) != len(model.roles):
        raise ValueError("sequence length must match the model's role count")
    probs = _chain_conditionals(model, sequence)
    return max(probs) - min(probs)


# ---------------------------------------------------------------------------
# Hilberg fitting and peak cost


@dataclass(frozen=True)
class HilbergFit:
    a: float
    gamma: float
    b: float
    variant: str          # pure (b = 0) | relaxed
    rms_residual: float


def hilberg_fit(profile, variant="relaxed"):
    """Least-squares fit of a * i^-gamma (+ b) by gamma grid search.

    For each gamma on the grid the best nonnegative (a, b) follow from a
    closed-form linear solve; the gamma with the smallest RMS residual wins.
    """
    if variant not in ("pure", "relaxed"):
        raise ValueError(f"unknown variant {variant!r}")
    y = np.asarray(profile.values, dtype=float)
    if len(y) < 3:
        raise InsufficientData("need a profile of length >= 3 to fit")
    if y.max() - y.min() <= 1e-12:
        raise DegenerateProfile("constant profile: gamma is unidentifiable")
    i = np.arange(1, len(y) + 1, dtype=float)
    best = None
    for gamma in GAMMA_GRID:
        f = i ** -gamma
        if variant == "pure":
            a = max(0.0, float(f @ y) / float(f @ f))
            b = 0.0
        else:
            design = np.column_stack([f, np.ones_like(f)])
            coef, _, _, _ = np.linalg.lstsq(design, y, rcond=None)
            a, b = float(coef[0]), float(coef[1])
            if a < 0 or b < 0:
                coef, _ = nnls(design, y)
                a, b = float(coef[0]), float(coef[1])
        residual = y - (a * f + b)
        rms = float(np.sqrt(np.mean(residual**2)))
        if best is None or rms < best.rms_residual:
            best = HilbergFit(a, float(gamma), b, variant, rms)
    return best


def peak_cost(profile):
    """Maximum profile value and the first (1-based) index attaining it."""
    values = list(profile.values)
    if not values:
        raise EmptySequence("empty profile")
    peak = max(values)
    return peak, values.index(peak) + 1


# ---------------------------------------------------------------------------
# Cross-module oracle: profile of an exact enumerable model


def model_rate_profile(model):
    """Exact H(X_i | X_1..X_{i-1}) from a joint model's true probabilities."""
    values = []
    previous = 0.0
    for i in range(1, len(model.roles) + 1):
        h_block = entropy(model, model.roles[:i])
        values.append(h_block - previous)
        previous = h_block
    return EntropyProfile(values, "rate", strict=False)
