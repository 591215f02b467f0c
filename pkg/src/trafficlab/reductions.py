"""Structural reduction algorithms on graph monomials.

Every routine here rewrites a monomial into something equivalent against all
trace probes: 3-connected vertex pairs can be identified outright, bridgeless
components hanging at a single vertex split off as scalar factors, the
block-cut path factorization yields a homomorphic conditional expectation
onto words, transposed words, and diagonals, and the cycle pruning rule
rewrites a flower (cycle with diagonal petals) as a polynomial in its petals.
Chaining these turns any monomial into a polynomial of tree monomials.  The
inclusion-exclusion transform over vertex quotients produces the centered
variables whose mixed traces obey a pair-partition (Wick) formula.
"""

from __future__ import annotations

from dataclasses import dataclass

from .caps import Caps, default_caps
from .canonical import anti_isomorphic, canonical_form
from .connectivity import (BcdTree, bcd_tree, biconnected_blocks,
                           three_connected_pairs)
from .graphs import (GraphMonomial, GraphPolynomial, MultiDigraph, TestGraph,
                     quotient)
from .operad import monomial_adjoint, monomial_product, unit_monomial
from .partitions import enumerate_partitions, mobius_zero, pair_partitions
from .states import CycleWeightSpec, _Flat, _flat_injective, trace_psi, traffic_state

__all__ = [
    "simplify_three_connections",
    "prune_tec",
    "conditional_expectation",
    "block_factorize",
    "FlowerDecomposition",
    "flower_decomposition",
    "prune_cycle",
    "tree_reduce",
    "is_in_D",
    "q_transform",
    "q_moments",
    "q_covariance_matrices",
    "wick_check",
    "psi_probe_residual",
]


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


def simplify_three_connections(t: GraphMonomial) -> GraphMonomial:
    """Identify 3-edge-connected vertex pairs until none remain.

    The result is a quasi-cactus: every remaining pair has connectivity 1 or 2.
    """
    while t.n_vertices() > 1:
        pairs = three_connected_pairs(t)
        if not pairs:
            break
        t = quotient(t, _pair_closure(pairs))
    return t


# ---------------------------------------------------------------------------
# pruning two-edge-connected hangers
# ---------------------------------------------------------------------------

def _is_tec(n: int, ends: list[tuple[int, int]]) -> bool:
    """Bridgeless check for a connected multigraph given by endpoint pairs."""
    nonloop = [(u, v) for (u, v) in ends if u != v]
    blocks, _ = biconnected_blocks(n, nonloop)
    return all(len(b) > 1 for b in blocks)


def _sub_test_graph(t: GraphMonomial, edge_ids, vertices) -> TestGraph:
    vs = [v for v in t.graph.vertices if v in vertices]
    edges = {e: t.graph.edges[e] for e in edge_ids}
    labels = {e: t.labels[e] for e in edge_ids}
    return TestGraph(MultiDigraph(vs, edges), labels, _trusted=True)


def _drop_edges(t: GraphMonomial, edge_ids, dead_vertices) -> GraphMonomial:
    keep_edges = {e: sd for e, sd in t.graph.edges.items() if e not in edge_ids}
    keep_labels = {e: a for e, a in t.labels.items() if e not in edge_ids}
    vs = [v for v in t.graph.vertices if v not in dead_vertices]
    return GraphMonomial(MultiDigraph(vs, keep_edges), keep_labels,
                         t.input, t.output, _trusted=True)


def prune_tec(t: GraphMonomial, spec: CycleWeightSpec,
              caps: Caps | None = None):
    """Excise bridgeless hanging components that contain no root.

    Each excised component, attached to the rest at a single vertex, factors
    out of every trace as the traffic state of the component alone.  Returns
    (scalar, pruned monomial); loops are the base case.
    """
    caps = caps or default_caps()
    scalar = 1.0 + 0.0j
    roots = {t.input, t.output}
    changed = True
    while changed:
        changed = False
        # loops first: a loop is bridgeless and hangs at its base vertex
        for e, (s, d) in list(t.graph.edges.items()):
            if s == d:
                scalar *= traffic_state(_sub_test_graph(t, [e], {s}), spec, caps)
                t = _drop_edges(t, {e}, set())
                changed = True
        if changed:
            continue
        g = t.graph
        vs = list(g.vertices)
        for v in vs:
            # components of the graph with v removed
            adj: dict = {u: [] for u in vs}
            for (a, b) in g.edges.values():
                if a != b:
                    adj[a].append(b)
                    adj[b].append(a)
            seen = {v}
            for u in vs:
                if u in seen:
                    continue
                comp = {u}
                stack = [u]
                while stack:
                    x = stack.pop()
                    for y in adj[x]:
                        if y not in seen and y not in comp:
                            comp.add(y)
                            stack.append(y)
                seen |= comp
                if comp & roots:
                    continue
                closure = comp | {v}
                edge_ids = [e for e, (a, b) in g.edges.items()
                            if a in closure and b in closure and not (a == v and b == v)]
                if not edge_ids:
                    continue
                vidx = {x: i for i, x in enumerate(closure)}
                ends = [(vidx[g.edges[e][0]], vidx[g.edges[e][1]]) for e in edge_ids]
                if not _is_tec(len(closure), ends):
                    continue
                scalar *= traffic_state(_sub_test_graph(t, edge_ids, closure), spec, caps)
                t = _drop_edges(t, set(edge_ids), comp)
                changed = True
                break
            if changed:
                break
    return scalar, t


# ---------------------------------------------------------------------------
# block-cut path factorization and the conditional expectation
# ---------------------------------------------------------------------------

def _component_monomial(t: GraphMonomial, tree: BcdTree, node, root_in, root_out) -> GraphMonomial:
    edge_ids = tree.hanging_component(node)
    vertices = {root_in, root_out}
    for e in edge_ids:
        s, d = t.graph.edges[e]
        vertices.add(s)
        vertices.add(d)
    vs = [v for v in t.graph.vertices if v in vertices]
    edges = {e: t.graph.edges[e] for e in edge_ids}
    labels = {e: t.labels[e] for e in edge_ids}
    return GraphMonomial(MultiDigraph(vs, edges), labels, root_in, root_out,
                         _trusted=True)


def block_factorize(t: GraphMonomial):
    """Alternating factors [d1, m1, d2, ..., dn] along the block-cut path.

    The product d_n m_{n-1} ... m_1 d_1 (input side rightmost) rebuilds t.
    """
    tree = bcd_tree(t)
    path = tree.path
    factors = []
    circles = [n for n in path if n in tree.circles]
    for k, node in enumerate(path):
        if node in tree.circles:
            v = tree.circles[node]
            factors.append(_component_monomial(t, tree, node, v, v))
        else:
            v_in = tree.circles[path[k - 1]]
            v_out = tree.circles[path[k + 1]]
            factors.append(_component_monomial(t, tree, node, v_in, v_out))
    assert len(circles) * 2 - 1 == len(factors) or len(factors) == 1
    return factors


def conditional_expectation(t: GraphMonomial) -> GraphMonomial:
    """Project onto words, transposed words, and diagonals along the path.

    Each block on the input-output path that is not a single bridge edge has
    a cycle through its two path vertices, so those vertices can be
    identified without changing any trace; the result is a product of single
    edges and diagonal factors.
    """
    tree = bcd_tree(t)
    path = tree.path
    merges = []
    for k, node in enumerate(path):
        if node in tree.squares and tree.squares[node][0] != "bridge":
            merges.append((tree.circles[path[k - 1]], tree.circles[path[k + 1]]))
    if not merges:
        return t
    return quotient(t, _pair_closure(merges))


# ---------------------------------------------------------------------------
# cycle pruning
# ---------------------------------------------------------------------------

@dataclass
class FlowerDecomposition:
    """A pad with the diagonal monomials hanging at each of its vertices.

    ``cycle_vertices`` lists the pad's vertices starting from the stem vertex
    (the one whose petal holds the monomial's root); ``cycle_edges`` the pad
    edges in matching cyclic order with their orientation along the
    traversal; ``petals[k]`` the diagonal monomial rooted at vertex k.
    """

    cycle_vertices: list
    cycle_edges: list
    petals: list


def flower_decomposition(t: GraphMonomial, cycle_edges) -> FlowerDecomposition:
    if t.input != t.output:
        raise ValueError("cycle pruning needs a diagonal monomial")
    g = t.graph
    cyc = list(cycle_edges)
    cset = set(cyc)
    # order the cycle by walking it
    if len(cyc) == 1:
        e = cyc[0]
        s, d = g.edges[e]
        order = [(e, True)]
        verts = [s]
        if s != d:
            raise ValueError("single cycle edge must be a loop")
    else:
        incident: dict = {}
        for e in cyc:
            s, d = g.edges[e]
            incident.setdefault(s, []).append(e)
            incident.setdefault(d, []).append(e)
        if any(len(es) != 2 for es in incident.values()):
            raise ValueError("edge set is not a simple cycle")
        start = g.edges[cyc[0]][0]
        order = []
        verts = []
        cur = start
        used = set()
        while len(order) < len(cyc):
            verts.append(cur)
            nxt = None
            for e in incident[cur]:
                if e not in used:
                    nxt = e
                    break
            s, d = g.edges[nxt]
            fwd = s == cur
            used.add(nxt)
            order.append((nxt, fwd))
            cur = d if fwd else s
        if cur != start:
            raise ValueError("edge set is not a closed cycle")
    # petals: components after deleting the cycle edges
    adj: dict = {v: [] for v in g.vertices}
    for e, (s, d) in g.edges.items():
        if e in cset:
            continue
        adj[s].append((d, e))
        adj[d].append((s, e))
    comp_of: dict = {}
    petal_edges: dict = {}
    for v0 in verts:
        if v0 in comp_of:
            raise ValueError("cycle is not a pad of a quasi-cactus")
        comp_of[v0] = v0
        petal_edges[v0] = set()
        stack = [v0]
        while stack:
            x = stack.pop()
            for (y, e) in adj[x]:
                petal_edges[v0].add(e)
                if y not in comp_of:
                    comp_of[y] = v0
                    stack.append(y)
    root = t.input
    stem = comp_of.get(root)
    if stem is None:
        raise ValueError("root is separated from the cycle")
    k0 = verts.index(stem)
    verts = verts[k0:] + verts[:k0]
    order = order[k0:] + order[:k0]
    petals = []
    for k, v in enumerate(verts):
        edge_ids = sorted(petal_edges[v], key=repr)
        vertices = {x for x in g.vertices if comp_of.get(x) == v}
        vs = [x for x in g.vertices if x in vertices]
        sub = GraphMonomial(MultiDigraph(vs, {e: g.edges[e] for e in edge_ids}),
                            {e: t.labels[e] for e in edge_ids},
                            root if k == 0 else v,
                            root if k == 0 else v, _trusted=True)
        petals.append(sub)
    return FlowerDecomposition(verts, order, petals)


def _wedge_monomial(t: GraphMonomial, keep_vertices, keep_edges, merge_set, root):
    """Subgraph of t on the kept pieces with ``merge_set`` identified."""
    vs = [v for v in t.graph.vertices if v in keep_vertices]
    edges = {e: t.graph.edges[e] for e in keep_edges}
    labels = {e: t.labels[e] for e in keep_edges}
    sub = GraphMonomial(MultiDigraph(vs, edges), labels, root, root, _trusted=True)
    if len(merge_set) > 1:
        sub = quotient(sub, [list(merge_set)])
    return sub


def prune_cycle(t: GraphMonomial, cycle_edges, spec: CycleWeightSpec,
                caps: Caps | None = None) -> GraphPolynomial:
    """Rewrite a flower as a polynomial in its petals.

    The petal holding the root is the stem and survives in every term; each
    term keeps a subset of the other petals, wedged at the stem vertex, and
    its coefficient is an inclusion-exclusion of traces of the complementary
    arcs.  Every output monomial is free of the given cycle.  Cost grows as
    3^n in the cycle length, bounded by the cycle cap.
    """
    caps = caps or default_caps()
    flower = flower_decomposition(t, cycle_edges)
    verts = flower.cycle_vertices
    n = len(verts) - 1
    caps.check_cycle(n)
    g = t.graph
    comp_vertices = {}
    comp_edges = {}
    for k, v in enumerate(verts):
        comp_vertices[k] = set(flower.petals[k].graph.vertices)
        comp_edges[k] = set(flower.petals[k].graph.edges)
    cycle_ids = [e for (e, _) in flower.cycle_edges]
    root = t.input

    out = GraphPolynomial()
    indices = list(range(1, n + 1))
    for a_mask in range(1 << n):
        A = [indices[i] for i in range(n) if a_mask & (1 << i)]
        # the kept petals, wedged at the stem vertex
        keep_idx = [0] + A
        kv = set()
        ke = set()
        for k in keep_idx:
            kv |= comp_vertices[k]
            ke |= comp_edges[k]
        merge = {verts[k] for k in keep_idx}
        d_hat = _wedge_monomial(t, kv, ke, merge, root)
        # coefficient: inclusion-exclusion over supersets B of A
        coeff = 0.0 + 0.0j
        rest = [i for i in indices if i not in A]
        for b_mask in range(1 << len(rest)):
            extra = [rest[i] for i in range(len(rest)) if b_mask & (1 << i)]
            B = sorted(A + extra)
            keep = [k for k in indices if k not in A]  # petals absent from w: 0 and A
            wv = set()
            we = set(cycle_ids)
            for k in keep:
                wv |= comp_vertices[k]
                we |= comp_edges[k]
            wv |= {verts[k] for k in range(n + 1)}
            merge_w = {verts[0]} | {verts[k] for k in B}
            w = _wedge_monomial(t, wv, we, merge_w, verts[0])
            coeff += (-1) ** len(extra) * trace_psi(w, spec, caps)
        out = out + GraphPolynomial.from_monomial(d_hat, coeff)
    return out


def _is_tree_graph(g: MultiDigraph) -> bool:
    return g.n_edges() == g.n_vertices() - 1 and g.is_connected()


def _cycle_blocks(t: GraphMonomial):
    g = t.graph
    vidx = {v: i for i, v in enumerate(g.vertices)}
    eids = [e for e, (s, d) in g.edges.items() if s != d]
    ends = [(vidx[g.edges[e][0]], vidx[g.edges[e][1]]) for e in eids]
    blocks, _ = biconnected_blocks(len(g.vertices), ends)
    loops = [e for e, (s, d) in g.edges.items() if s == d]
    pads = [[e] for e in loops]
    for block in blocks:
        if len(block) > 1:
            pads.append([eids[i] for i in block])
    return pads


def _reduce_diagonal(d: GraphMonomial, spec: CycleWeightSpec, caps: Caps) -> GraphPolynomial:
    d = simplify_three_connections(d)
    scalar, d = prune_tec(d, spec, caps)
    if scalar == 0:
        return GraphPolynomial.zero()
    if _is_tree_graph(d.graph):
        return GraphPolynomial.from_monomial(d, scalar)
    pads = _cycle_blocks(d)
    poly = prune_cycle(d, pads[0], spec, caps)
    out = GraphPolynomial()
    for mono, coeff in poly.items():
        out = out + _reduce_diagonal(mono, spec, caps).scale(scalar * coeff)
    return out


def tree_reduce(t: GraphMonomial, spec: CycleWeightSpec,
                caps: Caps | None = None) -> GraphPolynomial:
    """Equivalent polynomial of tree monomials.

    Pipeline: conditional expectation, then per diagonal factor a quasi-cactus
    simplification, hanger pruning, and repeated cycle pruning; the processed
    factors are multiplied back together along the path.
    """
    caps = caps or default_caps()
    t1 = conditional_expectation(t)
    factors = block_factorize(t1)
    result = None
    # product order: input-side factor is applied first (rightmost)
    for k, f in enumerate(factors):
        if k % 2 == 0:
            piece = _reduce_diagonal(f, spec, caps)
        else:
            piece = GraphPolynomial.from_monomial(f)
        result = piece if result is None else piece * result
    return result


# ---------------------------------------------------------------------------
# the centering transform and its Wick calculus
# ---------------------------------------------------------------------------

def is_in_D(t: GraphMonomial) -> bool:
    """Domain of the centering transform: diagonal tree monomials whose root
    is a leaf and with no flow-through vertex (indegree = outdegree = 1).
    The unit monomial is admitted as the trivial case."""
    if t.input != t.output:
        return False
    g = t.graph
    if g.n_vertices() == 1 and g.n_edges() == 0:
        return True
    if not _is_tree_graph(g):
        return False
    deg = {v: 0 for v in g.vertices}
    indeg = {v: 0 for v in g.vertices}
    outdeg = {v: 0 for v in g.vertices}
    for (s, d) in g.edges.values():
        deg[s] += 1
        deg[d] += 1
        outdeg[s] += 1
        indeg[d] += 1
    if deg[t.input] != 1:
        return False
    return all(not (indeg[v] == 1 and outdeg[v] == 1) for v in g.vertices)


def q_transform(t: GraphMonomial, caps: Caps | None = None) -> GraphPolynomial:
    """Moebius-weighted sum of vertex-identification quotients of t.

    Defined on the domain checked by is_in_D; the result is centered under
    every trace.
    """
    caps = caps or default_caps()
    if not is_in_D(t):
        raise ValueError("argument outside the centering transform's domain")
    caps.check_partition(t.n_vertices())
    out = GraphPolynomial()
    for part in enumerate_partitions(t.graph.vertices, caps):
        out = out + GraphPolynomial.from_monomial(quotient(t, part), mobius_zero(part))
    return out


def _solid_partitions(groups: list[list[int]]):
    """Partitions of the union with at most one element per group per block.

    Yields block-index arrays over the flattened element list.
    """
    owner = []
    for gi, grp in enumerate(groups):
        owner.extend([gi] * len(grp))
    m = len(owner)
    blk = [0] * m
    block_groups: list[set] = []

    def rec(i: int):
        if i == m:
            yield list(blk)
            return
        for b in range(len(block_groups)):
            if owner[i] not in block_groups[b]:
                block_groups[b].add(owner[i])
                blk[i] = b
                yield from rec(i + 1)
                block_groups[b].remove(owner[i])
        block_groups.append({owner[i]})
        blk[i] = len(block_groups) - 1
        yield from rec(i + 1)
        block_groups.pop()

    yield from rec(0)


def q_moments(ts, spec: CycleWeightSpec, caps: Caps | None = None) -> complex:
    """Trace of the product of centered transforms, computed directly.

    Rather than expanding each factor's quotient sum, the Moebius weights
    collapse the full partition sum onto the partitions that keep every
    factor's vertex set solid (no identifications inside a factor, roots
    pre-merged); the injective state is summed over exactly that class.
    """
    caps = caps or default_caps()
    ts = list(ts)
    for t in ts:
        if not is_in_D(t):
            raise ValueError("argument outside the centering transform's domain")
    # assemble the root-merged product graph with group tags
    vertices = [0]
    groups: list[list[int]] = []
    edges = {}
    labels = {}
    eid = 0
    vid = 1
    for t in ts:
        vmap = {t.input: 0}
        grp = []
        for v in t.graph.vertices:
            if v == t.input:
                continue
            vmap[v] = vid
            grp.append(vid)
            vertices.append(vid)
            vid += 1
        for e, (s, d) in t.graph.edges.items():
            edges[eid] = (vmap[s], vmap[d])
            labels[eid] = t.labels[e]
            eid += 1
        groups.append(grp)
    T = TestGraph(MultiDigraph(vertices, edges), labels, _trusted=True)
    flat = _Flat(T)
    total = 0.0 + 0.0j
    for blk_tail in _solid_partitions(groups):
        blk = [0] + [b + 1 for b in blk_tail]
        total += _flat_injective(flat, blk, spec)
    return total


def q_covariance_matrices(ts, spec: CycleWeightSpec, caps: Caps | None = None):
    """Covariance and pseudo-covariance of the centered variables.

    Entry (i, j) of the first matrix is the trace of Q(t_i) Q(t_j)^*, of the
    second the trace of Q(t_i) Q(t_j).
    """
    ts = list(ts)
    n = len(ts)
    adj = [monomial_adjoint(t) for t in ts]
    gamma = [[q_moments([ts[i], adj[j]], spec, caps) for j in range(n)] for i in range(n)]
    pseudo = [[q_moments([ts[i], ts[j]], spec, caps) for j in range(n)] for i in range(n)]
    return gamma, pseudo


def wick_check(ts, spec: CycleWeightSpec, caps: Caps | None = None) -> dict:
    """Compare the direct trace of a product of centered variables against
    its pair-partition expansion."""
    ts = list(ts)
    direct = q_moments(ts, spec, caps)
    paired = 0.0 + 0.0j
    for pp in pair_partitions(range(len(ts))):
        term = 1.0 + 0.0j
        for (i, j) in pp.blocks:
            term *= q_moments([ts[i], ts[j]], spec, caps)
        paired += term
    return {
        "direct": direct,
        "pairing_sum": paired,
        "difference": abs(direct - paired),
        "n": len(ts),
    }


# ---------------------------------------------------------------------------
# probe discipline
# ---------------------------------------------------------------------------

def psi_probe_residual(x, y, probes, spec: CycleWeightSpec,
                       caps: Caps | None = None) -> float:
    """max_s |psi(x s) - psi(y s)| over the probe monomials."""

    def against(obj, s):
        if isinstance(obj, GraphMonomial):
            return trace_psi(monomial_product(obj, s), spec, caps)
        total = 0.0 + 0.0j
        for mono, coeff in obj.items():
            total += coeff * trace_psi(monomial_product(mono, s), spec, caps)
        return total

    worst = 0.0
    for s in probes:
        worst = max(worst, abs(against(x, s) - against(y, s)))
    return worst
