"""Graph operations and their action on labeled monomials and test graphs.

A graph operation is a connected bi-rooted multidigraph with an ordering of
its edges; composition substitutes an operation into each edge, and the same
gluing applied to labeled monomials realizes the multilinear action.  All
constructors return freshly normalized graphs (integer vertex and edge ids).
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .graphs import EdgeAtom, GraphMonomial, MultiDigraph, TestGraph, quotient

__all__ = [
    "GraphOperation",
    "compose",
    "permute",
    "block_permutation",
    "transpose_op",
    "flip_op",
    "apply_operation",
    "substitute_edge",
    "embed_word",
    "named_operation",
    "unit_monomial",
    "gen_monomial",
    "word_monomial",
    "monomial_product",
    "monomial_hadamard",
    "monomial_delta",
    "monomial_transpose",
    "monomial_flip",
    "monomial_adjoint",
    "rdeg",
    "cdeg",
]


class GraphOperation:
    """Connected bi-rooted multidigraph with edges ordered 1..K."""

    __slots__ = ("graph", "input", "output", "order")

    def __init__(self, graph: MultiDigraph, input, output, order: Sequence):
        if not graph.has_vertex(input) or not graph.has_vertex(output):
            raise ValueError("roots must be declared vertices")
        if not graph.is_connected():
            raise ValueError("graph operation must be connected")
        self.graph = graph
        self.input = input
        self.output = output
        self.order = tuple(order)
        if sorted(map(repr, self.order)) != sorted(map(repr, graph.edges)):
            raise ValueError("ordering must be a bijection onto the edge set")

    @property
    def arity(self) -> int:
        return len(self.order)

    def position(self, eid) -> int:
        """1-based argument position of an edge."""
        return self.order.index(eid) + 1

    def __repr__(self) -> str:
        return f"GraphOperation(K={self.arity}, {self.graph.n_vertices()}v)"


# ---------------------------------------------------------------------------
# gluing core
# ---------------------------------------------------------------------------

class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        p = self.parent.setdefault(x, x)
        if p != x:
            p = self.find(p)
            self.parent[x] = p
        return p

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def _glue(base: GraphOperation, pieces: list):
    """Replace each base edge by a copy of the corresponding piece.

    ``pieces[k]`` (for the edge at position k+1) is any object with
    ``graph``, ``input``, ``output``.  Returns (vertex class map, edge list)
    where the class map sends (part index, vertex) to a fresh integer, part
    index 0 being the base, and the edge list holds (part index, edge id,
    src class, dst class) for every piece edge.
    """
    uf = _UnionFind()
    for v in base.graph.vertices:
        uf.find((0, v))
    for k, piece in enumerate(pieces):
        eid = base.order[k]
        s, d = base.graph.edges[eid]
        for v in piece.graph.vertices:
            uf.find((k + 1, v))
        uf.union((0, s), (k + 1, piece.input))
        uf.union((0, d), (k + 1, piece.output))
    # deterministic class numbering: base vertices first, then pieces in order
    slots = [(0, v) for v in base.graph.vertices]
    for k, piece in enumerate(pieces):
        slots.extend((k + 1, v) for v in piece.graph.vertices)
    class_id: dict = {}
    for slot in slots:
        root = uf.find(slot)
        if root not in class_id:
            class_id[root] = len(class_id)
    vmap = {slot: class_id[uf.find(slot)] for slot in slots}
    edges = []
    for k, piece in enumerate(pieces):
        for e, (s, d) in piece.graph.edges.items():
            edges.append((k + 1, e, vmap[(k + 1, s)], vmap[(k + 1, d)]))
    return vmap, edges


def compose(g: GraphOperation, parts: Sequence[GraphOperation]) -> GraphOperation:
    """Composite operation; part edges inherit the ordering blockwise."""
    if len(parts) != g.arity:
        raise ValueError(f"expected {g.arity} parts, got {len(parts)}")
    vmap, edges = _glue(g, list(parts))
    new_edges = {}
    order = []
    eid = 0
    for k, part in enumerate(parts):
        placed = {}
        for (pk, e, s, d) in edges:
            if pk == k + 1:
                placed[e] = (s, d)
        for e in part.order:
            new_edges[eid] = placed[e]
            order.append(eid)
            eid += 1
    graph = MultiDigraph(range(max(vmap.values()) + 1), new_edges)
    return GraphOperation(graph, vmap[(0, g.input)], vmap[(0, g.output)], order)


def permute(g: GraphOperation, sigma: Sequence[int]) -> GraphOperation:
    """Reorder arguments: the edge at position p moves to position sigma[p-1]."""
    k = g.arity
    if sorted(sigma) != list(range(1, k + 1)):
        raise ValueError("sigma must be a bijection of 1..K")
    new_order = [None] * k
    for p, eid in enumerate(g.order, start=1):
        new_order[sigma[p - 1] - 1] = eid
    return GraphOperation(g.graph, g.input, g.output, new_order)


def block_permutation(sigma: Sequence[int], arities: Sequence[int]) -> list[int]:
    """Permutation aligning the two sides of composition equivariance.

    Composing the sigma-permuted operation with parts (g_1..g_K) matches the
    plain composite of (g_sigma(1)..g_sigma(K)) after its edge blocks are
    relocated: the block for part i moves from the position it holds on the
    permuted side to offset sum(arities[:i-1]).  Returns the image list
    (1-based): result[p-1] is where global position p goes.
    """
    k = len(sigma)
    inv = [0] * k
    for i, s in enumerate(sigma, start=1):
        inv[s - 1] = i
    total = sum(arities)
    image = [0] * total
    for i in range(1, k + 1):
        src_off = sum(arities[sigma[j] - 1] for j in range(inv[i - 1] - 1))
        dst_off = sum(arities[: i - 1])
        for r in range(arities[i - 1]):
            image[src_off + r] = dst_off + r + 1
    return image


def transpose_op(g: GraphOperation) -> GraphOperation:
    return GraphOperation(g.graph, g.output, g.input, g.order)


def flip_op(g: GraphOperation) -> GraphOperation:
    flipped = MultiDigraph(g.graph.vertices,
                           {e: (d, s) for e, (s, d) in g.graph.edges.items()})
    return GraphOperation(flipped, g.input, g.output, g.order)


def apply_operation(g: GraphOperation, args: Sequence[GraphMonomial]) -> GraphMonomial:
    """Multilinear action on monomials: each edge is replaced by its argument."""
    if len(args) != g.arity:
        raise ValueError(f"expected {g.arity} arguments, got {len(args)}")
    vmap, edges = _glue(g, list(args))
    new_edges = {}
    labels = {}
    for eid, (k, e, s, d) in enumerate(edges):
        new_edges[eid] = (s, d)
        labels[eid] = args[k - 1].labels[e]
    n_classes = max(vmap.values()) + 1
    graph = MultiDigraph(range(n_classes), new_edges)
    return GraphMonomial(graph, labels, vmap[(0, g.input)], vmap[(0, g.output)])


def substitute_edge(T: TestGraph, eid, t: GraphMonomial) -> TestGraph:
    """Replace edge ``eid`` by a copy of ``t``: source to input, target to output."""
    if eid not in T.graph.edges:
        raise ValueError(f"unknown edge {eid!r}")
    s, d = T.graph.edges[eid]
    uf = _UnionFind()
    for v in T.graph.vertices:
        uf.find((0, v))
    for v in t.graph.vertices:
        uf.find((1, v))
    uf.union((0, s), (1, t.input))
    uf.union((0, d), (1, t.output))
    slots = [(0, v) for v in T.graph.vertices] + [(1, v) for v in t.graph.vertices]
    class_id: dict = {}
    for slot in slots:
        root = uf.find(slot)
        if root not in class_id:
            class_id[root] = len(class_id)
    vmap = {slot: class_id[uf.find(slot)] for slot in slots}
    new_edges = {}
    labels = {}
    k = 0
    for e, (a, b) in T.graph.edges.items():
        if e == eid:
            continue
        new_edges[k] = (vmap[(0, a)], vmap[(0, b)])
        labels[k] = T.labels[e]
        k += 1
    for e, (a, b) in t.graph.edges.items():
        new_edges[k] = (vmap[(1, a)], vmap[(1, b)])
        labels[k] = t.labels[e]
        k += 1
    graph = MultiDigraph(range(len(class_id)), new_edges)
    return TestGraph(graph, labels)


# ---------------------------------------------------------------------------
# monomial builders
# ---------------------------------------------------------------------------

def unit_monomial() -> GraphMonomial:
    g = MultiDigraph([0], {})
    return GraphMonomial(g, {}, 0, 0)


def gen_monomial(a: EdgeAtom | str) -> GraphMonomial:
    if isinstance(a, str):
        from .graphs import atom
        a = atom(a)
    g = MultiDigraph([0, 1], {0: (1, 0)})  # edge from input toward output
    return GraphMonomial(g, {0: a}, 1, 0)


def embed_word(word: Iterable[EdgeAtom]) -> GraphMonomial:
    """Word as a directed path; the empty word gives the unit monomial."""
    word = tuple(word)
    n = len(word)
    if n == 0:
        return unit_monomial()
    edges = {i: (i + 1, i) for i in range(n)}  # vertex 0 = output, n = input
    labels = {i: word[i] for i in range(n)}
    g = MultiDigraph(range(n + 1), edges)
    return GraphMonomial(g, labels, n, 0)


def word_monomial(text: str) -> GraphMonomial:
    from .graphs import parse_word
    return embed_word(parse_word(text))


def monomial_product(t1: GraphMonomial, t2: GraphMonomial) -> GraphMonomial:
    """t1 . t2: input of t1 glued to output of t2 (matrix-product order)."""
    uf = _UnionFind()
    for v in t1.graph.vertices:
        uf.find((1, v))
    for v in t2.graph.vertices:
        uf.find((2, v))
    uf.union((1, t1.input), (2, t2.output))
    slots = [(1, v) for v in t1.graph.vertices] + [(2, v) for v in t2.graph.vertices]
    class_id: dict = {}
    for slot in slots:
        root = uf.find(slot)
        if root not in class_id:
            class_id[root] = len(class_id)
    vmap = {slot: class_id[uf.find(slot)] for slot in slots}
    new_edges = {}
    labels = {}
    k = 0
    for tag, t in ((1, t1), (2, t2)):
        for e, (a, b) in t.graph.edges.items():
            new_edges[k] = (vmap[(tag, a)], vmap[(tag, b)])
            labels[k] = t.labels[e]
            k += 1
    graph = MultiDigraph(range(len(class_id)), new_edges)
    return GraphMonomial(graph, labels, vmap[(2, t2.input)], vmap[(1, t1.output)])


def monomial_hadamard(t1: GraphMonomial, t2: GraphMonomial) -> GraphMonomial:
    return apply_operation(named_operation("hadamard"), [t1, t2])


def monomial_delta(t: GraphMonomial) -> GraphMonomial:
    if t.input == t.output:
        return t
    return quotient(t, [[t.input, t.output]])


def monomial_transpose(t: GraphMonomial) -> GraphMonomial:
    return GraphMonomial(t.graph, dict(t.labels), t.output, t.input, _trusted=True)


def monomial_flip(t: GraphMonomial) -> GraphMonomial:
    g = MultiDigraph(t.graph.vertices, {e: (d, s) for e, (s, d) in t.graph.edges.items()})
    return GraphMonomial(g, dict(t.labels), t.input, t.output, _trusted=True)


def monomial_adjoint(t: GraphMonomial) -> GraphMonomial:
    """Reverse every edge, toggle every star label, swap the roots."""
    g = MultiDigraph(t.graph.vertices, {e: (d, s) for e, (s, d) in t.graph.edges.items()})
    labels = {e: a.conjugate() for e, a in t.labels.items()}
    return GraphMonomial(g, labels, t.output, t.input, _trusted=True)


def rdeg(a: EdgeAtom | str) -> GraphMonomial:
    """Diagonal of row sums: root with one incoming pendant edge."""
    return apply_operation(named_operation("rdeg"), [gen_monomial(a) if isinstance(a, (EdgeAtom, str)) else a])


def cdeg(a: EdgeAtom | str) -> GraphMonomial:
    """Diagonal of column sums: root with one outgoing pendant edge."""
    return apply_operation(named_operation("cdeg"), [gen_monomial(a) if isinstance(a, (EdgeAtom, str)) else a])


# ---------------------------------------------------------------------------
# built-in named operations
# ---------------------------------------------------------------------------

def named_operation(name: str) -> GraphOperation:
    """id, product, hadamard, delta, rdeg, cdeg, transpose."""
    if name == "id":
        g = MultiDigraph([0, 1], {0: (1, 0)})
        return GraphOperation(g, 1, 0, [0])
    if name == "product":
        # argument 1 sits next to the output
        g = MultiDigraph([0, 1, 2], {0: (1, 0), 1: (2, 1)})
        return GraphOperation(g, 2, 0, [0, 1])
    if name == "hadamard":
        g = MultiDigraph([0, 1], {0: (1, 0), 1: (1, 0)})
        return GraphOperation(g, 1, 0, [0, 1])
    if name == "delta":
        g = MultiDigraph([0], {0: (0, 0)})
        return GraphOperation(g, 0, 0, [0])
    if name == "rdeg":
        g = MultiDigraph([0, 1], {0: (1, 0)})
        return GraphOperation(g, 0, 0, [0])
    if name == "cdeg":
        g = MultiDigraph([0, 1], {0: (0, 1)})
        return GraphOperation(g, 0, 0, [0])
    if name == "transpose":
        g = MultiDigraph([0, 1], {0: (0, 1)})
        return GraphOperation(g, 1, 0, [0])
    raise ValueError(f"unknown operation name {name!r}")
