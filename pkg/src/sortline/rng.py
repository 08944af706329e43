"""Named, independently seeded random streams.

Every source of randomness in a run (input generation, sorting noise,
observation noise, agent exploration) draws from its own stream, so adding
draws to one stream never shifts the values produced by another.  Streams
are derived from a single 64-bit root seed:

    stream_seed(root, label) = first 8 bytes, big-endian, of
                               SHA-256(b"<root mod 2**64>:<label>")

and each stream is a std-lib ``random.Random`` seeded with that value.

This derivation and the per-step draw order of every component are frozen;
``tests/test_rng.py`` pins both.  Sequences are reproducible within this
implementation, not across unrelated reimplementations.
"""

from __future__ import annotations

import hashlib
import random

INPUT_STREAM = "input"
SORTING_STREAM = "sorting"
OBSERVATION_STREAM = "observation"
AGENT_STREAM = "agent"

_MASK64 = (1 << 64) - 1


def stream_seed(root_seed: int, label: str) -> int:
    """Seed for the named stream, derived from the 64-bit root seed."""
    digest = hashlib.sha256(f"{root_seed & _MASK64}:{label}".encode("ascii")).digest()
    return int.from_bytes(digest[:8], "big")


def make_stream(root_seed: int, label: str) -> random.Random:
    """A fresh generator for the named stream."""
    return random.Random(stream_seed(root_seed, label))
