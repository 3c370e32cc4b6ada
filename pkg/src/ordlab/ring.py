"""The six S/V/O orders as a permutation ring, plus evolution machinery.

Two orders are adjacent when one is reached from the other by swapping two
adjacent constituents; on three constituents that relation is exactly a
6-cycle.  Transition kernels put a decaying weight on ring distance,
optionally reshaped by multiplicative word-order filters, and drive a
seeded ensemble simulator whose output can be compared against the
reference frequency dataset embedded below.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from ._rng import substream
from .errors import DegenerateRow, UnsupportedSource


class WordOrder(enum.Enum):
    SOV = "SOV"
    SVO = "SVO"
    VSO = "VSO"
    VOS = "VOS"
    OVS = "OVS"
    OSV = "OSV"

    def __str__(self):
        return self.value


# canonical listing (most to least frequent in the reference dataset)
ORDERS = (
    WordOrder.SOV,
    WordOrder.SVO,
    WordOrder.VSO,
    WordOrder.VOS,
    WordOrder.OVS,
    WordOrder.OSV,
)

# the ring: consecutive entries differ by one adjacent swap, and the list
# wraps around
RING_CYCLE = (
    WordOrder.SOV,
    WordOrder.SVO,
    WordOrder.VSO,
    WordOrder.VOS,
    WordOrder.OVS,
    WordOrder.OSV,
)

_RING_INDEX = {order: i for i, order in enumerate(RING_CYCLE)}


def as_order(value):
    if isinstance(value, WordOrder):
        return value
    return WordOrder(str(value).upper())


def ring_distance(a, b):
    """Minimum number of adjacent swaps turning one order into the other (0..3)."""
    i, j = _RING_INDEX[as_order(a)], _RING_INDEX[as_order(b)]
    d = abs(i - j)
    return min(d, 6 - d)


def neighbors(order):
    """The two ring-adjacent orders."""
    i = _RING_INDEX[as_order(order)]
    return frozenset({RING_CYCLE[(i - 1) % 6], RING_CYCLE[(i + 1) % 6]})


def triple_optimal_orders(target):
    """The two orders placing the given constituent last (uncertainty-optimal)."""
    last_letter = {"verb": "V", "object": "O", "subject": "S"}
    try:
        letter = last_letter[target]
    except KeyError:
        raise ValueError(f"target must be verb/object/subject, got {target!r}") from None
    return frozenset(o for o in ORDERS if o.value.endswith(letter))


# word-order filters: each names the set of destination orders it favours
FILTER_SETS = {
    "dlm": frozenset({WordOrder.SVO, WordOrder.OVS}),              # central verb
    "verb_uncertainty": frozenset({WordOrder.SOV, WordOrder.OSV}),  # verb last
    "nominal_uncertainty": frozenset({WordOrder.VSO, WordOrder.VOS}),  # verb first
    "agent_first": frozenset({WordOrder.SOV, WordOrder.SVO}),       # subject first
}


def predicted_destinations(source, use_ring, use_filter=None):
    """Most likely transition destinations from SOV or SVO.

    ring-only: nearest ring neighbours.  filter-only: the filter's optimal
    set.  both: the intersection.  Only the two documented sources are
    supported.
    """
    source = as_order(source)
    if source not in (WordOrder.SOV, WordOrder.SVO):
        raise UnsupportedSource(f"no documented predictions for source {source}")
    if not use_ring and use_filter is None:
        raise ValueError("need the ring, a filter, or both")
    if use_filter is not None and use_filter not in FILTER_SETS:
        raise ValueError(f"unknown filter {use_filter!r}")
    candidates = set(ORDERS)
    if use_ring:
        candidates &= neighbors(source)
    if use_filter is not None:
        candidates &= FILTER_SETS[use_filter]
    return tuple(o for o in ORDERS if o in candidates)


# ---------------------------------------------------------------------------
# Transition kernels and evolution


@dataclass(frozen=True)
class RingKernel:
    """Transition weights: decay(ring distance) times active filter boosts.

    decay kinds: exponential (e^{-beta d}), inverse_power (d^{-alpha}),
    tabulated ({1: w1, 2: w2, 3: w3}).  ``filters`` maps filter names to
    multiplicative weights applied to the orders each filter favours.
    """

    decay_kind: str = "exponential"
    decay_param: float | dict = 1.0
    filters: dict = field(default_factory=dict)
    self_weight: float = 0.0

    def __post_init__(self):
        if self.decay_kind not in ("exponential", "inverse_power", "tabulated"):
            raise ValueError(f"unknown decay kind {self.decay_kind!r}")
        if self.self_weight < 0:
            raise ValueError("self_weight must be >= 0")
        for name in self.filters:
            if name not in FILTER_SETS:
                raise ValueError(f"unknown filter {name!r}")

    def decay(self, distance):
        if self.decay_kind == "exponential":
            return float(np.exp(-self.decay_param * distance))
        if self.decay_kind == "inverse_power":
            return float(distance) ** -self.decay_param
        return float(self.decay_param[distance])

    def destination_multiplier(self, order):
        mult = 1.0
        for name, weight in self.filters.items():
            if order in FILTER_SETS[name]:
                mult *= weight
        return mult


def transition_matrix(kernel):
    """Row-stochastic 6x6 matrix over ORDERS."""
    matrix = np.zeros((6, 6))
    for i, src in enumerate(ORDERS):
        for j, dst in enumerate(ORDERS):
            if i == j:
                matrix[i, j] = kernel.self_weight
            else:
                matrix[i, j] = kernel.decay(
                    ring_distance(src, dst)
                ) * kernel.destination_multiplier(dst)
        total = matrix[i].sum()
        if total <= 0.0:
            raise DegenerateRow(f"all transition weights from {src} are zero")
        matrix[i] /= total
    return matrix


@dataclass(frozen=True)
class Trajectory:
    """Per-step empirical distribution over ORDERS for an evolved ensemble."""

    orders: tuple[WordOrder, ...]
    frequencies: np.ndarray  # shape (steps + 1, 6), rows sum to 1

    def distribution(self, step):
        return dict(zip(self.orders, self.frequencies[step]))


def evolve(kernel, start, steps, ensemble_size, seed):
    """Run an ensemble of independent chains; deterministic per seed."""
    if steps < 0 or ensemble_size < 1:
        raise ValueError("steps must be >= 0 and ensemble_size >= 1")
    start_idx = ORDERS.index(as_order(start))
    matrix = transition_matrix(kernel)
    rng = substream(seed, "ring", "evolve")
    states = np.full(ensemble_size, start_idx, dtype=np.int64)
    freqs = np.zeros((steps + 1, 6))
    freqs[0] = np.bincount(states, minlength=6) / ensemble_size
    for step in range(1, steps + 1):
        new_states = np.empty_like(states)
        for s in range(6):
            mask = states == s
            count = int(mask.sum())
            if count:
                new_states[mask] = rng.choice(6, size=count, p=matrix[s])
        states = new_states
        freqs[step] = np.bincount(states, minlength=6) / ensemble_size
    return Trajectory(ORDERS, freqs)


# ---------------------------------------------------------------------------
# Reference frequency dataset (dominant word orders in world languages,
# counts per language and per family, with the percentages as printed)


@dataclass(frozen=True)
class ReferenceRow:
    language_count: int
    language_pct: float   # as printed (rounded to one decimal)
    family_count: int
    family_pct: float
    misprint_language_pct: bool = False


REFERENCE = {
    WordOrder.SOV: ReferenceRow(2275, 43.3, 239, 65.3),
    WordOrder.SVO: ReferenceRow(2117, 40.3, 55, 15.0),
    WordOrder.VSO: ReferenceRow(503, 9.6, 27, 7.4),
    WordOrder.VOS: ReferenceRow(174, 3.3, 15, 4.1),
    WordOrder.OVS: ReferenceRow(40, 0.8, 3, 0.8),
    WordOrder.OSV: ReferenceRow(19, 0.4, 1, 0.3),
}

NO_DOMINANT = ReferenceRow(124, 2.4, 26, 7.1)

# grouped rows by verb placement; the printed 13.9 for verb-initial
# languages disagrees with its own counts (677/5252 = 12.9) and with the
# table's column sum, hence the misprint flag
GROUPED = {
    "**V": ReferenceRow(2294, 43.7, 240, 65.6),
    "*V*": ReferenceRow(2157, 41.1, 58, 15.8),
    "V**": ReferenceRow(677, 13.9, 42, 11.5, misprint_language_pct=True),
}

TOTAL_LANGUAGES = 5252
TOTAL_FAMILIES = 366


def dominant_language_total():
    return sum(row.language_count for row in REFERENCE.values())


def reference_distribution():
    """Table counts renormalized over the six dominant orders."""
    total = dominant_language_total()
    return {o: REFERENCE[o].language_count / total for o in ORDERS}


def compare_to_reference(distribution):
    """Total variation distance to the reference plus per-pair rank agreement.

    ``distribution`` maps the six orders to probabilities.  Rank agreement
    is reported for every ordered pair (a, b) with a more frequent than b
    in the reference: True when the given distribution also has a > b.
    """
    dist = {as_order(o): p for o, p in distribution.items()}
    ref = reference_distribution()
    tv = 0.5 * sum(abs(dist.get(o, 0.0) - ref[o]) for o in ORDERS)
    agreements = []
    for i, a in enumerate(ORDERS):
        for b in ORDERS[i + 1:]:
            agreements.append(((a, b), dist.get(a, 0.0) > dist.get(b, 0.0)))
    return tv, agreements
