"""Set partitions, the partition lattice, non-crossing partitions on a cyclic
ground set, Kreweras complements, and pair partitions.

Enumeration streams restricted-growth strings so callers never hold all
Bell(n) partitions at once.  Moebius values against the minimal partition use
the closed product formula; the generic zeta-inversion lives in the test
suite as an oracle.
"""

from __future__ import annotations

import math
from typing import Iterator, Sequence

from .caps import Caps, default_caps

__all__ = [
    "SetPartition",
    "enumerate_partitions",
    "partition_block_maps",
    "mobius_zero",
    "is_noncrossing",
    "noncrossing",
    "kreweras",
    "pair_partitions",
    "bell_number",
    "catalan",
]


class SetPartition:
    """Partition of an ordered finite ground set, stored in canonical form:
    blocks sorted by their minimum (in ground order), elements in ground order."""

    __slots__ = ("ground", "blocks")

    def __init__(self, ground: Sequence, blocks):
        self.ground = tuple(ground)
        order = {x: i for i, x in enumerate(self.ground)}
        if len(order) != len(self.ground):
            raise ValueError("ground set has duplicates")
        seen = set()
        canon = []
        for block in blocks:
            bl = sorted(block, key=order.__getitem__)
            if not bl:
                raise ValueError("empty block")
            for x in bl:
                if x not in order:
                    raise ValueError(f"block element {x!r} not in ground set")
                if x in seen:
                    raise ValueError(f"element {x!r} in two blocks")
                seen.add(x)
            canon.append(tuple(bl))
        if len(seen) != len(self.ground):
            raise ValueError("blocks do not cover the ground set")
        canon.sort(key=lambda b: order[b[0]])
        self.blocks = tuple(canon)

    @classmethod
    def minimal(cls, ground: Sequence) -> "SetPartition":
        return cls(ground, [[x] for x in ground])

    @classmethod
    def maximal(cls, ground: Sequence) -> "SetPartition":
        return cls(ground, [list(ground)])

    @classmethod
    def from_rgs(cls, ground: Sequence, rgs: Sequence[int]) -> "SetPartition":
        blocks: dict[int, list] = {}
        for x, b in zip(ground, rgs):
            blocks.setdefault(b, []).append(x)
        return cls(ground, blocks.values())

    def block_of(self, x):
        for b in self.blocks:
            if x in b:
                return b
        raise KeyError(x)

    def as_map(self) -> dict:
        out = {}
        for i, b in enumerate(self.blocks):
            for x in b:
                out[x] = i
        return out

    def n_blocks(self) -> int:
        return len(self.blocks)

    def refines(self, other: "SetPartition") -> bool:
        omap = other.as_map()
        return all(len({omap[x] for x in b}) == 1 for b in self.blocks)

    def __eq__(self, other) -> bool:
        return (isinstance(other, SetPartition)
                and self.ground == other.ground and self.blocks == other.blocks)

    def __hash__(self) -> int:
        return hash((self.ground, self.blocks))

    def __repr__(self) -> str:
        inner = "/".join(",".join(map(str, b)) for b in self.blocks)
        return f"{{{inner}}}"


def _rgs_stream(n: int) -> Iterator[list[int]]:
    """Restricted growth strings of length n, lexicographic."""
    if n == 0:
        yield []
        return
    a = [0] * n
    maxima = [0] * n
    while True:
        yield a
        i = n - 1
        while i > 0 and a[i] == maxima[i - 1] + 1:
            i -= 1
        if i == 0:
            return
        a[i] += 1
        maxima[i] = max(maxima[i - 1], a[i])
        for j in range(i + 1, n):
            a[j] = 0
            maxima[j] = maxima[i]


def enumerate_partitions(ground: Sequence, caps: Caps | None = None) -> Iterator[SetPartition]:
    """All partitions of the ground set, streamed, Bell(n) of them."""
    ground = tuple(ground)
    (caps or default_caps()).check_partition(len(ground))
    for rgs in _rgs_stream(len(ground)):
        yield SetPartition.from_rgs(ground, rgs)


def partition_block_maps(n: int, caps: Caps | None = None) -> Iterator[list[int]]:
    """Stream of block-index arrays (RGS) for partitions of range(n).

    The yielded list is reused between iterations; copy if you keep it.
    """
    (caps or default_caps()).check_partition(n)
    return _rgs_stream(n)


def mobius_zero(partition: SetPartition) -> int:
    """Moebius value mu(0, pi) on the partition lattice: the product over
    blocks of (-1)^(|B|-1) (|B|-1)!."""
    out = 1
    for b in partition.blocks:
        k = len(b) - 1
        out *= (-1) ** k * math.factorial(k)
    return out


def mobius_zero_of_sizes(sizes) -> int:
    out = 1
    for s in sizes:
        out *= (-1) ** (s - 1) * math.factorial(s - 1)
    return out


# ---------------------------------------------------------------------------
# non-crossing partitions
# ---------------------------------------------------------------------------

def is_noncrossing(partition: SetPartition) -> bool:
    """Crossing test in the cyclic order induced by the ground ordering."""
    pos = {x: i for i, x in enumerate(partition.ground)}
    blocks = [sorted(pos[x] for x in b) for b in partition.blocks]
    for i, b1 in enumerate(blocks):
        for b2 in blocks[i + 1:]:
            # b1, b2 cross iff some a < x < b < y with a,b in b1, x,y in b2
            for a_i in range(len(b1) - 1):
                lo, hi = b1[a_i], b1[a_i + 1]
                inside = any(lo < x < hi for x in b2)
                outside = any(x < lo or x > hi for x in b2)
                if inside and outside:
                    return False
    return True


def noncrossing(ground: Sequence, caps: Caps | None = None) -> Iterator[SetPartition]:
    """Exactly the non-crossing partitions, Catalan(n) of them."""
    ground = tuple(ground)
    (caps or default_caps()).check_partition(len(ground))
    n = len(ground)

    def rec(items: tuple[int, ...]):
        # the block of the first element cuts the rest into independent gaps
        if not items:
            yield []
            return
        first, rest = items[0], items[1:]
        m = len(rest)
        for subset_mask in range(1 << m):
            block = [first]
            gaps: list[list[int]] = [[]]
            for j in range(m):
                if subset_mask & (1 << j):
                    block.append(rest[j])
                    gaps.append([])
                else:
                    gaps[-1].append(rest[j])

            def expand(idx: int, acc: list[list[int]]):
                if idx == len(gaps):
                    yield acc
                    return
                for sub in rec(tuple(gaps[idx])):
                    yield from expand(idx + 1, acc + sub)

            for rest_blocks in expand(0, []):
                yield [block] + rest_blocks

    for blocks in rec(tuple(range(n))):
        yield SetPartition(ground, [[ground[i] for i in b] for b in blocks])


def kreweras(partition: SetPartition, barred_ground: Sequence | None = None) -> SetPartition:
    """Kreweras complement of a non-crossing partition.

    Element i of the ground set corresponds to the interleaved point between
    i and i+1 (cyclically) of the complement's ground set; by default the
    complement is returned on the same ground labels.  Computed as the cycles
    of p^{-1} c, where p maps each element to the next one in its block
    (cyclically, ground order) and c is the full forward rotation.
    """
    if not is_noncrossing(partition):
        raise ValueError("Kreweras complement needs a non-crossing partition")
    n = len(partition.ground)
    pos = {x: i for i, x in enumerate(partition.ground)}
    nxt = list(range(n))
    for b in partition.blocks:
        idxs = sorted(pos[x] for x in b)
        for k, i in enumerate(idxs):
            nxt[i] = idxs[(k + 1) % len(idxs)]
    inv = [0] * n
    for i in range(n):
        inv[nxt[i]] = i
    perm = [inv[(i + 1) % n] for i in range(n)]  # p^{-1} circ c
    ground = tuple(barred_ground) if barred_ground is not None else partition.ground
    if len(ground) != n:
        raise ValueError("barred ground size mismatch")
    seen = [False] * n
    blocks = []
    for i in range(n):
        if seen[i]:
            continue
        cyc = []
        j = i
        while not seen[j]:
            seen[j] = True
            cyc.append(ground[j])
            j = perm[j]
        blocks.append(cyc)
    return SetPartition(ground, blocks)


def pair_partitions(ground: Sequence) -> Iterator[SetPartition]:
    """All pairings of the ground set; empty stream when |ground| is odd."""
    ground = tuple(ground)
    n = len(ground)
    if n % 2 == 1:
        return
    idxs = tuple(range(n))

    def rec(remaining: tuple[int, ...]):
        if not remaining:
            yield []
            return
        first = remaining[0]
        for k in range(1, len(remaining)):
            partner = remaining[k]
            rest = remaining[1:k] + remaining[k + 1:]
            for tail in rec(rest):
                yield [[first, partner]] + tail

    for blocks in rec(idxs):
        yield SetPartition(ground, [[ground[i] for i in b] for b in blocks])


def bell_number(n: int) -> int:
    """Bell numbers via the triangle recurrence."""
    row = [1]
    for _ in range(n):
        new = [row[-1]]
        for x in row:
            new.append(new[-1] + x)
        row = new
    return row[0]


def catalan(n: int) -> int:
    return math.comb(2 * n, n) // (n + 1)
