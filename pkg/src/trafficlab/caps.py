"""Size caps shared across the library.

Everything here is a tunable guard against combinatorial blow-up: partition
sums grow like Bell numbers, canonical forms like factorials, and cycle
pruning like 2^n.  The defaults cover every built-in computation; the
TRAFFIC_CALC_CAP environment variable (or an explicit Caps instance) raises
them for adventurous callers.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

PARTITION_CAP_DEFAULT = 10
PARTITION_CAP_HARD = 12
CANONICAL_CAP_DEFAULT = 12
CYCLE_CAP_DEFAULT = 10
WORD_CAP_DEFAULT = 10


class CapExceeded(ValueError):
    """A computation was refused because an input exceeds its size cap."""


@dataclass(frozen=True)
class Caps:
    partition: int = PARTITION_CAP_DEFAULT
    canonical: int = CANONICAL_CAP_DEFAULT
    cycle: int = CYCLE_CAP_DEFAULT
    word: int = WORD_CAP_DEFAULT

    def check_partition(self, n: int, what: str = "vertex set") -> None:
        limit = min(max(self.partition, 0), PARTITION_CAP_HARD)
        if n > limit:
            raise CapExceeded(f"{what} of size {n} exceeds partition cap {limit}")

    def check_canonical(self, n: int) -> None:
        if n > self.canonical:
            raise CapExceeded(f"graph with {n} vertices exceeds canonical-form cap {self.canonical}")

    def check_cycle(self, n: int) -> None:
        if n > self.cycle:
            raise CapExceeded(f"cycle with {n} free vertices exceeds pruning cap {self.cycle}")

    def check_word(self, n: int) -> None:
        if n > self.word:
            raise CapExceeded(f"word of length {n} exceeds cumulant cap {self.word}")


def default_caps() -> Caps:
    """Caps honoring the TRAFFIC_CALC_CAP environment override."""
    raw = os.environ.get("TRAFFIC_CALC_CAP")
    if raw is None:
        return Caps()
    try:
        value = int(raw)
    except ValueError:
        return Caps()
    return Caps(partition=value, canonical=max(value, CANONICAL_CAP_DEFAULT),
                cycle=value, word=value)
