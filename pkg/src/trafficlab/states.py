"""Traffic states: injective evaluation on cacti, partition sums, traces.

The injective state of a test graph factors over the pads of its cactus (and
vanishes off cacti); the full state is recovered by summing the injective
state over all vertex-partition quotients.  Pad weights are pluggable: the
universal-enveloping mode feeds free cumulants of a moment oracle, while the
table modes hard-code the limiting pad weights of the standard matrix
ensembles.

Pad words are read by traversing a pad and recording (label, along) pairs,
``along`` meaning the traversal agrees with the edge direction.  Every
weight specification is invariant under rotating the word and under
reversing the traversal (reverse the order, flip every flag).  In UE mode a
directed pad traversed along its arrows contributes the cumulant of its
labels in reverse traversal order; this convention is pinned by the
requirement that the induced trace on word monomials reproduce the oracle's
moments.
"""

from __future__ import annotations

from weakref import WeakKeyDictionary

from .caps import Caps, default_caps
from .canonical import canonical_form
from .connectivity import cactus_pads_flat, three_connected_pairs
from .cumulants import CumulantSpec, MomentOracle, catalan, moment_cumulants
from .graphs import (EdgeAtom, GraphMonomial, GraphPolynomial, TestGraph,
                     quotient, tilde_delta)
from .operad import monomial_product
from .partitions import (SetPartition, enumerate_partitions, mobius_zero,
                         partition_block_maps)

__all__ = [
    "CycleWeightSpec",
    "UESpec",
    "WignerTableSpec",
    "GinibreTableSpec",
    "HaarUnitaryTableSpec",
    "HaarOrthogonalTableSpec",
    "ue_spec",
    "pad_weight",
    "injective_state",
    "traffic_state",
    "traffic_state_visited",
    "trace_psi",
    "injective_transform",
    "mixed_free_cumulant",
]

CycleWord = tuple  # of (EdgeAtom, along: bool) pairs


class CycleWeightSpec:
    """Assigns a complex weight to each pad, read as a cycle word."""

    #: when True, pads that are not directed cycles always get weight zero,
    #: enabling the degree-balance prefilter in partition sums
    directed_only = False

    def pad_value(self, cycle: CycleWord) -> complex:
        raise NotImplementedError


class UESpec(CycleWeightSpec):
    """Universal-enveloping weights: kappa_n on directed pads, zero otherwise."""

    directed_only = True

    def __init__(self, cumulants: CumulantSpec):
        self.cumulants = cumulants

    def pad_value(self, cycle: CycleWord) -> complex:
        if all(along for (_, along) in cycle):
            labels = tuple(a for (a, _) in cycle)
            return self.cumulants.kappa(labels[::-1])
        if all(not along for (_, along) in cycle):
            return self.cumulants.kappa(tuple(a for (a, _) in cycle))
        return 0.0 + 0.0j


def ue_spec(oracle_or_spec) -> UESpec:
    """UE weights from a MomentOracle or directly from a CumulantSpec."""
    if isinstance(oracle_or_spec, MomentOracle):
        return UESpec(moment_cumulants(oracle_or_spec))
    if isinstance(oracle_or_spec, CumulantSpec):
        return UESpec(oracle_or_spec)
    raise TypeError("expected a MomentOracle or CumulantSpec")


class WignerTableSpec(CycleWeightSpec):
    """Limiting pad weights of independent Wigner matrices: a pad contributes
    only at length two with matching labels; weight 1 when its two edges
    oppose (a directed 2-cycle), beta when they are parallel."""

    def __init__(self, beta=0.0, generators=("x",)):
        if isinstance(beta, dict):
            self.betas = {g: complex(b) for g, b in beta.items()}
        else:
            self.betas = {g: complex(beta) for g in generators}

    def pad_value(self, cycle: CycleWord) -> complex:
        if len(cycle) != 2:
            return 0.0 + 0.0j
        (a1, f1), (a2, f2) = cycle
        if a1.generator != a2.generator:
            return 0.0 + 0.0j
        if a1.generator not in self.betas:
            raise ValueError(f"unknown generator {a1.generator!r}")
        if f1 == f2:
            return 1.0 + 0.0j
        return self.betas[a1.generator]


class GinibreTableSpec(CycleWeightSpec):
    """Limiting pad weights of independent Ginibre matrices."""

    def __init__(self, zeta=0.0, generators=("x",)):
        if isinstance(zeta, dict):
            self.zetas = {g: complex(z) for g, z in zeta.items()}
        else:
            self.zetas = {g: complex(zeta) for g in generators}

    def pad_value(self, cycle: CycleWord) -> complex:
        if len(cycle) != 2:
            return 0.0 + 0.0j
        (a1, f1), (a2, f2) = cycle
        if a1.generator != a2.generator:
            return 0.0 + 0.0j
        if a1.generator not in self.zetas:
            raise ValueError(f"unknown generator {a1.generator!r}")
        if f1 == f2:
            # directed 2-cycle: needs one starred and one plain label
            return 1.0 + 0.0j if a1.star != a2.star else 0.0 + 0.0j
        if a1.star != a2.star:
            return 0.0 + 0.0j
        z = self.zetas[a1.generator]
        return z.conjugate() if a1.star else z


class HaarUnitaryTableSpec(CycleWeightSpec):
    """Limiting pad weights of independent Haar unitaries: directed pads with
    cyclically alternating star labels of one generator; a pad of length 2k
    weighs (-1)^(k-1) Cat(k-1)."""

    directed_only = True

    def __init__(self, generators=("u",)):
        self.generators = frozenset(generators)

    def _value(self, stars: tuple[bool, ...]) -> complex:
        n = len(stars)
        if n % 2 == 1 or any(stars[i] == stars[(i + 1) % n] for i in range(n)):
            return 0.0 + 0.0j
        k = n // 2
        return complex((-1) ** (k - 1) * catalan(k - 1))

    def pad_value(self, cycle: CycleWord) -> complex:
        gens = {a.generator for (a, _) in cycle}
        if len(gens) != 1:
            return 0.0 + 0.0j
        if not gens <= self.generators:
            raise ValueError(f"unknown generator {gens.pop()!r}")
        flags = [along for (_, along) in cycle]
        if all(flags) or not any(flags):
            return self._value(tuple(a.star for (a, _) in cycle))
        return 0.0 + 0.0j


class HaarOrthogonalTableSpec(CycleWeightSpec):
    """Haar orthogonal variant: the pad value depends on the word only up to
    reversing any single edge while toggling its star, so each edge is first
    normalized to the traversal direction by folding its orientation into the
    star label."""

    def __init__(self, generators=("o",)):
        self.generators = frozenset(generators)

    def pad_value(self, cycle: CycleWord) -> complex:
        gens = {a.generator for (a, _) in cycle}
        if len(gens) != 1:
            return 0.0 + 0.0j
        if not gens <= self.generators:
            raise ValueError(f"unknown generator {gens.pop()!r}")
        stars = tuple(a.star ^ (not along) for (a, along) in cycle)
        n = len(stars)
        if n % 2 == 1 or any(stars[i] == stars[(i + 1) % n] for i in range(n)):
            return 0.0 + 0.0j
        k = n // 2
        return complex((-1) ** (k - 1) * catalan(k - 1))


def pad_weight(cycle: CycleWord, spec: CycleWeightSpec) -> complex:
    if not cycle:
        raise ValueError("empty pad")
    return spec.pad_value(tuple(cycle))


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

class _Flat:
    __slots__ = ("n", "ends", "labels", "imbalance")

    def __init__(self, T: TestGraph):
        g = T.graph
        vidx = {v: i for i, v in enumerate(g.vertices)}
        self.n = len(g.vertices)
        self.ends = []
        self.labels = []
        self.imbalance = [0] * self.n
        for e, (s, d) in g.edges.items():
            si, di = vidx[s], vidx[d]
            self.ends.append((si, di))
            self.labels.append(T.labels[e])
            self.imbalance[si] += 1
            self.imbalance[di] -= 1


def _flat_injective(flat: _Flat, blk: list[int] | None, spec: CycleWeightSpec) -> complex:
    if blk is None:
        k, ends = flat.n, flat.ends
    else:
        k = max(blk) + 1
        ends = [(blk[s], blk[d]) for (s, d) in flat.ends]
    pads = cactus_pads_flat(k, ends)
    if pads is None:
        return 0.0 + 0.0j
    value = 1.0 + 0.0j
    for pad in pads:
        value *= spec.pad_value(tuple((flat.labels[pos], fwd) for (pos, fwd) in pad))
        if value == 0:
            return value
    return value


def injective_state(T: TestGraph, spec: CycleWeightSpec) -> complex:
    """Product of pad weights if T is a cactus, else 0; the bare vertex gives 1."""
    return _flat_injective(_Flat(T), None, spec)


def _premerge(T: TestGraph) -> TestGraph:
    """Identify every 3-edge-connected vertex pair, iterating to closure.

    Any partition separating such a pair has injective weight zero, so the
    partition sum over the merged graph is exact.
    """
    while T.n_vertices() > 1:
        pairs = three_connected_pairs(T)
        if not pairs:
            return T
        T = quotient(T, _pair_closure(pairs))
    return T


def _pair_closure(pairs):
    parent: dict = {}

    def find(x):
        parent.setdefault(x, x)
        if parent[x] != x:
            parent[x] = find(parent[x])
        return parent[x]

    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra
    groups: dict = {}
    for x in parent:
        groups.setdefault(find(x), []).append(x)
    return list(groups.values())


def traffic_state_visited(T: TestGraph, spec: CycleWeightSpec,
                          caps: Caps | None = None, prune: bool = True):
    """Traffic state with the count of partitions actually evaluated."""
    caps = caps or default_caps()
    if prune:
        T = _premerge(T)
    flat = _Flat(T)
    caps.check_partition(flat.n)
    total = 0.0 + 0.0j
    visited = 0
    directed_only = spec.directed_only
    imb = flat.imbalance
    n = flat.n
    for blk in partition_block_maps(n, caps):
        visited += 1
        if directed_only:
            k = max(blk) + 1
            sums = [0] * k
            ok = True
            for v in range(n):
                sums[blk[v]] += imb[v]
            for s in sums:
                if s:
                    ok = False
                    break
            if not ok:
                continue
        total += _flat_injective(flat, blk, spec)
    return total, visited


_TRACE_MEMO: "WeakKeyDictionary[CycleWeightSpec, dict]" = WeakKeyDictionary()


def traffic_state(T: TestGraph, spec: CycleWeightSpec,
                  caps: Caps | None = None, prune: bool = True) -> complex:
    """Sum of the injective state over all vertex-partition quotients."""
    memo = None
    key = None
    if T.n_vertices() <= 10:
        memo = _TRACE_MEMO.setdefault(spec, {})
        key = canonical_form(T)
        hit = memo.get(key)
        if hit is not None:
            return hit
    value, _ = traffic_state_visited(T, spec, caps, prune)
    if memo is not None:
        memo[key] = value
    return value


def trace_psi(x, spec: CycleWeightSpec, caps: Caps | None = None) -> complex:
    """Induced trace: evaluate the root-merged test graph of each monomial."""
    if isinstance(x, GraphMonomial):
        return traffic_state(tilde_delta(x), spec, caps)
    if isinstance(x, GraphPolynomial):
        total = 0.0 + 0.0j
        for mono, coeff in x.items():
            total += coeff * traffic_state(tilde_delta(mono), spec, caps)
        return total
    raise TypeError("trace_psi expects a GraphMonomial or GraphPolynomial")


def injective_transform(state, T: TestGraph, caps: Caps | None = None) -> complex:
    """Moebius transform of an arbitrary state over the partition lattice."""
    caps = caps or default_caps()
    caps.check_partition(T.n_vertices())
    total = 0.0 + 0.0j
    for part in enumerate_partitions(T.graph.vertices, caps):
        total += mobius_zero(part) * complex(state(quotient(T, part)))
    return total


def mixed_free_cumulant(spec: CycleWeightSpec, monomials, n: int | None = None,
                        caps: Caps | None = None) -> complex:
    """Free cumulant of the listed monomials under the induced trace.

    Moments of sub-products are traced through the state, so this computes
    kappa_n in the enveloping space for arbitrary graph-monomial arguments.
    """
    monomials = list(monomials)
    if n is not None and n != len(monomials):
        raise ValueError("n must match the number of monomials")
    atoms = tuple(EdgeAtom(f"#{i}") for i in range(len(monomials)))

    def evaluator(word):
        prod = None
        for a in word:
            t = monomials[int(a.generator[1:])]
            prod = t if prod is None else monomial_product(prod, t)
        return trace_psi(prod, spec, caps)

    oracle = MomentOracle(evaluator, tracial=True)
    return moment_cumulants(oracle, caps).kappa(atoms)
