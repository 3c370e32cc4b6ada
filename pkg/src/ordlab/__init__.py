"""Information-theoretic word order laboratory.

Modules:

- distributions: exact finite joint sequence models and seeded generators
- infotheory: entropy, mutual information, optimal target placement
- deplen: dependency-length cost landscapes for a single head
- conflict: uncertainty minimization vs dependency length minimization
- ring: the S/V/O permutation ring, transition kernels, evolution
- rate: entropy-rate estimation, CER/UID diagnostics, power-law decay fits
- coding: optimal code lengths, contextual mean lengths, tau conditions
- cli: the ``ordlab`` command-line entry point
"""

from . import coding, conflict, deplen, distributions, infotheory, rate, ring
from .errors import OrdlabError

__all__ = [
    "coding",
    "conflict",
    "deplen",
    "distributions",
    "infotheory",
    "rate",
    "ring",
    "OrdlabError",
]

__version__ = "0.1.0"
