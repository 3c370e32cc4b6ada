"""Exact finite probabilistic sequence models.

A :class:`JointSequenceModel` is a sparse probability table over a tuple of
named roles (typically one target plus n context roles).  Everything the
information-theoretic machinery consumes is built from these tables, so
construction validates mass and arity strictly and renormalizes exactly.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass

import numpy as np

from ._rng import substream
from .errors import (
    ArityMismatch,
    EmptySequence,
    MassOutOfTolerance,
    NegativeProbability,
    NonStochasticRow,
    UnknownRole,
)

MASS_TOLERANCE = 1e-12


@dataclass(frozen=True)
class Alphabet:
    """Ordered list of distinct symbols; order defines canonical indices."""

    symbols: tuple[str, ...]

    def __post_init__(self):
        if not self.symbols:
            raise ValueError("alphabet must be non-empty")
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError("alphabet symbols must be distinct")
        object.__setattr__(self, "symbols", tuple(self.symbols))

    def __len__(self):
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def index(self, symbol):
        return self.symbols.index(symbol)


@dataclass(frozen=True)
class JointSequenceModel:
    """Sparse exact joint table over named roles.

    ``table`` maps full symbol tuples (one symbol per role, in role order)
    to probabilities.  Zero-probability tuples are omitted.  Immutable after
    construction; safe for concurrent reads.
    """

    roles: tuple[str, ...]
    alphabets: dict[str, Alphabet]
    table: dict[tuple[str, ...], float]
    target_role: str | None = None

    def role_index(self, role):
        try:
            return self.roles.index(role)
        except ValueError:
            raise UnknownRole(f"unknown role {role!r}") from None

    def marginal(self, roles):
        """Summed-out table keeping only ``roles`` (in the given order)."""
        idx = [self.role_index(r) for r in roles]
        out: dict[tuple[str, ...], float] = {}
        for key, p in self.table.items():
            sub = tuple(key[i] for i in idx)
            out[sub] = out.get(sub, 0.0) + p
        return out

    def support(self):
        return self.table.keys()


def _validate_and_normalize(roles, alphabets, table, target_role):
    roles = tuple(roles)
    if len(set(roles)) != len(roles):
        raise ValueError("duplicate role labels")
    for key, p in table.items():
        if len(key) != len(roles):
            raise ArityMismatch(
                f"tuple {key!r} has arity {len(key)}, expected {len(roles)}"
            )
        if p < 0:
            raise NegativeProbability(f"P{key!r} = {p}")
        for role, symbol in zip(roles, key):
            if symbol not in alphabets[role].symbols:
                raise UnknownRole(
                    f"symbol {symbol!r} not in alphabet of role {role!r}"
                )
    mass = math.fsum(table.values())
    if abs(mass - 1.0) > MASS_TOLERANCE:
        raise MassOutOfTolerance(f"total mass {mass!r} not within 1e-12 of 1")
    clean = {k: p for k, p in table.items() if p > 0.0}
    if mass != 1.0:
        clean = {k: p / mass for k, p in clean.items()}
        # nudge the heaviest entry so the fsum is exactly 1.0; this makes
        # normalization idempotent and the file format round-trip bit-exact
        largest = max(clean, key=clean.get)
        for _ in range(16):
            residual = 1.0 - math.fsum(clean.values())
            if residual == 0.0:
                break
            clean[largest] += residual
    return JointSequenceModel(roles, dict(alphabets), clean, target_role)


def make_joint(roles, table, alphabets=None, target_role=None):
    """Build a validated model from an explicit probability table.

    When ``alphabets`` is omitted, each role's alphabet is inferred from the
    symbols observed in the table keys, in first-appearance order.
    """
    roles = tuple(roles)
    if alphabets is None:
        seen: dict[str, list[str]] = {r: [] for r in roles}
        for key in table:
            if len(key) != len(roles):
                raise ArityMismatch(
                    f"tuple {key!r} has arity {len(key)}, expected {len(roles)}"
                )
            for role, symbol in zip(roles, key):
                if symbol not in seen[role]:
                    seen[role].append(symbol)
        alphabets = {r: Alphabet(tuple(sorted(seen[r]))) for r in roles}
    return _validate_and_normalize(roles, alphabets, table, target_role)


def make_iid(marginal, n_roles, roles=None, target_role=None):
    """Product model of ``n_roles`` independent copies of ``marginal``."""
    if roles is None:
        roles = tuple(f"x{i}" for i in range(1, n_roles + 1))
    roles = tuple(roles)
    if len(roles) != n_roles:
        raise ValueError("roles length must equal n_roles")
    mass = sum(marginal.values())
    if abs(mass - 1.0) > MASS_TOLERANCE:
        raise MassOutOfTolerance(f"marginal mass {mass!r} not within 1e-12 of 1")
    symbols = tuple(marginal)
    alphabet = Alphabet(symbols)
    table = {}
    for combo in itertools.product(symbols, repeat=n_roles):
        p = math.prod(marginal[s] for s in combo)
        if p > 0:
            table[combo] = p
    alphabets = {r: alphabet for r in roles}
    return _validate_and_normalize(roles, alphabets, table, target_role)


def make_markov(initial, transition, length, roles=None, target_role=None):
    """Joint table of a Markov chain: P(x_1..x_m) = pi(x_1) prod A(x_{k-1},x_k)."""
    if length < 1:
        raise ValueError("length must be >= 1")
    states = tuple(initial)
    mass = sum(initial.values())
    if abs(mass - 1.0) > MASS_TOLERANCE:
        raise MassOutOfTolerance(f"initial mass {mass!r} not within 1e-12 of 1")
    for state, row in transition.items():
        row_mass = sum(row.values())
        if abs(row_mass - 1.0) > MASS_TOLERANCE:
            raise NonStochasticRow(
                f"transition row for {state!r} sums to {row_mass!r}"
            )
    if roles is None:
        roles = tuple(f"x{i}" for i in range(1, length + 1))
    roles = tuple(roles)
    all_states = sorted(set(states) | set(transition))
    alphabet = Alphabet(tuple(all_states))
    table = {}

    def extend(prefix, p):
        if p == 0.0:
            return
        if len(prefix) == length:
            table[prefix] = table.get(prefix, 0.0) + p
            return
        row = transition[prefix[-1]]
        for nxt, q in row.items():
            extend(prefix + (nxt,), p * q)

    for state, p0 in initial.items():
        if length == 1:
            if p0 > 0:
                table[(state,)] = table.get((state,), 0.0) + p0
        else:
            extend((state,), p0)
    alphabets = {r: alphabet for r in roles}
    return _validate_and_normalize(roles, alphabets, table, target_role)


def marginalize(model, kept_roles):
    """Model over ``kept_roles`` only; mass is preserved exactly."""
    kept = tuple(kept_roles)
    if not kept:
        raise UnknownRole("kept_roles must be non-empty")
    table = model.marginal(kept)
    alphabets = {r: model.alphabets[r] for r in kept}
    target = model.target_role if model.target_role in kept else None
    return JointSequenceModel(kept, alphabets, table, target)


# ---------------------------------------------------------------------------
# Sequence sources


@dataclass(frozen=True)
class SequenceSource:
    """Generator spec for token sequences (iid/markov/periodic/homogeneous/empirical)."""

    kind: str
    marginal: dict | None = None
    initial: dict | None = None
    transition: dict | None = None
    block: tuple = ()
    symbol: str | None = None
    tokens: tuple = ()
    seed: int = 0

    KINDS = ("iid", "markov", "periodic", "homogeneous", "empirical")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown source kind {self.kind!r}")
        if self.kind == "markov":
            for state, row in self.transition.items():
                if abs(sum(row.values()) - 1.0) > MASS_TOLERANCE:
                    raise NonStochasticRow(f"row for {state!r} does not sum to 1")
        if self.kind == "periodic" and len(self.block) < 1:
            raise ValueError("periodic block must have length >= 1")
        object.__setattr__(self, "block", tuple(self.block))
        object.__setattr__(self, "tokens", tuple(self.tokens))


def generate(source, length, seed=None):
    """Emit ``length`` tokens from ``source``; pure function of (source, seed)."""
    if length < 0:
        raise ValueError("length must be >= 0")
    if seed is None:
        seed = source.seed
    rng = substream(seed, "generate", source.kind)
    if length == 0:
        return []
    if source.kind == "homogeneous":
        return [source.symbol] * length
    if source.kind == "periodic":
        block = source.block
        offset = int(rng.integers(len(block)))
        return [block[(offset + i) % len(block)] for i in range(length)]
    if source.kind == "empirical":
        toks = source.tokens
        if not toks:
            raise EmptySequence("empirical source has no tokens")
        return [toks[i % len(toks)] for i in range(length)]
    if source.kind == "iid":
        symbols = list(source.marginal)
        probs = [source.marginal[s] for s in symbols]
        idx = rng.choice(len(symbols), size=length, p=probs)
        return [symbols[i] for i in idx]
    # markov: precomputed cumulative rows + one batch of uniforms
    states = list(source.initial)
    p0 = [source.initial[s] for s in states]
    out = [states[rng.choice(len(states), p=p0)]]
    rows = {
        s: (list(row), np.cumsum([row[t] for t in row]))
        for s, row in source.transition.items()
    }
    uniforms = rng.random(length - 1)
    for u in uniforms:
        nxt_states, cumulative = rows[out[-1]]
        out.append(nxt_states[int(np.searchsorted(cumulative, u, side="right"))])
    return out


def scramble(sequence, seed):
    """Uniform random permutation of the tokens; multiset is preserved."""
    rng = substream(seed, "scramble")
    seq = list(sequence)
    perm = rng.permutation(len(seq))
    return [seq[i] for i in perm]


# ---------------------------------------------------------------------------
# Model file format (JSON), read/written bit-exactly on round trip


def model_to_json(model):
    entries = [
        {"tuple": list(key), "p": p}
        for key, p in sorted(
            model.table.items(),
            key=lambda kv: tuple(
                model.alphabets[r].index(s) for r, s in zip(model.roles, kv[0])
            ),
        )
    ]
    doc = {
        "roles": list(model.roles),
        "alphabets": {r: list(model.alphabets[r].symbols) for r in model.roles},
        "entries": entries,
    }
    if model.target_role is not None:
        doc["target"] = model.target_role
    return json.dumps(doc, indent=2) + "\n"


def model_from_json(text):
    doc = json.loads(text)
    roles = tuple(doc["roles"])
    alphabets = {r: Alphabet(tuple(doc["alphabets"][r])) for r in roles}
    table = {tuple(e["tuple"]): e["p"] for e in doc["entries"]}
    return _validate_and_normalize(roles, alphabets, table, doc.get("target"))


def save_model(model, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(model_to_json(model))


def load_model(path):
    with open(path, encoding="utf-8") as fh:
        return model_from_json(fh.read())
