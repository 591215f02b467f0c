"""Edge-labeled multidigraphs: test graphs, bi-rooted monomials, polynomials.

The data model is deliberately plain: a graph is a vertex tuple plus
``edge id -> (source, target)`` maps, labels live in a parallel
``edge id -> EdgeAtom`` map, and everything is treated as immutable after
construction.  Vertex and edge ids are arbitrary hashables in the public
API; freshly built graphs use consecutive integers.  Edge ids survive
quotients unchanged, so labels never need to be re-derived.
"""

from __future__ import annotations

from typing import Iterable, Mapping

__all__ = [
    "EdgeAtom",
    "atom",
    "parse_word",
    "word_str",
    "MultiDigraph",
    "TestGraph",
    "GraphMonomial",
    "GraphPolynomial",
    "quotient",
    "tilde_delta",
    "merge_vertices",
]


class EdgeAtom(tuple):
    """A generator symbol with an optional star, e.g. ``a`` or ``a*``."""

    __slots__ = ()

    def __new__(cls, generator: str, star: bool = False):
        return tuple.__new__(cls, (str(generator), bool(star)))

    @property
    def generator(self) -> str:
        return self[0]

    @property
    def star(self) -> bool:
        return self[1]

    def conjugate(self) -> "EdgeAtom":
        return EdgeAtom(self[0], not self[1])

    def __repr__(self) -> str:
        return self[0] + ("*" if self[1] else "")


def atom(text: str) -> EdgeAtom:
    """Parse ``"a"`` or ``"a*"`` into an EdgeAtom."""
    text = text.strip()
    if text.endswith("*"):
        return EdgeAtom(text[:-1], True)
    return EdgeAtom(text, False)


def parse_word(text: str) -> tuple[EdgeAtom, ...]:
    """Parse a whitespace-separated word such as ``"a b* a"``."""
    return tuple(atom(part) for part in text.split())


def word_str(word: Iterable[EdgeAtom]) -> str:
    return " ".join(repr(a) for a in word)


class MultiDigraph:
    """Finite multidigraph with loops and parallel edges allowed."""

    __slots__ = ("vertices", "edges", "_vset")

    def __init__(self, vertices: Iterable, edges: Mapping):
        self.vertices = tuple(vertices)
        if not self.vertices:
            raise ValueError("graph needs at least one vertex")
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex ids")
        self._vset = frozenset(self.vertices)
        es = {}
        for eid, (src, dst) in dict(edges).items():
            if src not in self._vset or dst not in self._vset:
                raise ValueError(f"edge {eid!r} endpoint not a declared vertex")
            es[eid] = (src, dst)
        self.edges = es

    def n_vertices(self) -> int:
        return len(self.vertices)

    def n_edges(self) -> int:
        return len(self.edges)

    def src(self, eid):
        return self.edges[eid][0]

    def dst(self, eid):
        return self.edges[eid][1]

    def has_vertex(self, v) -> bool:
        return v in self._vset

    def is_connected(self) -> bool:
        if len(self.vertices) == 1:
            return True
        adj: dict = {v: [] for v in self.vertices}
        for (s, d) in self.edges.values():
            adj[s].append(d)
            adj[d].append(s)
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)

    def __repr__(self) -> str:
        return f"MultiDigraph({len(self.vertices)} vertices, {len(self.edges)} edges)"


def _check_labels(graph: MultiDigraph, labels: Mapping) -> dict:
    out = {}
    for eid in graph.edges:
        if eid not in labels:
            raise ValueError(f"edge {eid!r} has no label")
        lab = labels[eid]
        if not isinstance(lab, EdgeAtom):
            raise TypeError(f"label of edge {eid!r} is not an EdgeAtom")
        out[eid] = lab
    return out


class TestGraph:
    """Connected multidigraph with atom-labeled edges; argument of a traffic state."""

    __slots__ = ("graph", "labels")

    def __init__(self, graph: MultiDigraph, labels: Mapping, _trusted: bool = False):
        if not _trusted and not graph.is_connected():
            raise ValueError("test graph must be connected")
        self.graph = graph
        self.labels = labels if _trusted else _check_labels(graph, labels)

    def n_vertices(self) -> int:
        return self.graph.n_vertices()

    def n_edges(self) -> int:
        return self.graph.n_edges()

    def relabel_atoms(self, mapping: Mapping[EdgeAtom, EdgeAtom]) -> "TestGraph":
        labs = {e: mapping.get(a, a) for e, a in self.labels.items()}
        return TestGraph(self.graph, labs, _trusted=True)

    def __repr__(self) -> str:
        return f"TestGraph({self.n_vertices()}v, {self.n_edges()}e)"


class GraphMonomial:
    """Bi-rooted connected labeled multidigraph (input and output may coincide)."""

    __slots__ = ("graph", "labels", "input", "output")

    def __init__(self, graph: MultiDigraph, labels: Mapping, input, output,
                 _trusted: bool = False):
        if not _trusted:
            if not graph.has_vertex(input) or not graph.has_vertex(output):
                raise ValueError("roots must be declared vertices")
            if not graph.is_connected():
                raise ValueError("graph monomial must be connected")
        self.graph = graph
        self.labels = labels if _trusted else _check_labels(graph, labels)
        self.input = input
        self.output = output

    def n_vertices(self) -> int:
        return self.graph.n_vertices()

    def n_edges(self) -> int:
        return self.graph.n_edges()

    def is_diagonal(self) -> bool:
        return self.input == self.output

    def as_test_graph(self) -> TestGraph:
        """Forget the roots (graph unchanged)."""
        return TestGraph(self.graph, self.labels, _trusted=True)

    def __repr__(self) -> str:
        r = "diag" if self.is_diagonal() else "birooted"
        return f"GraphMonomial({self.n_vertices()}v, {self.n_edges()}e, {r})"


def normalize(obj):
    """Copy with vertices renamed 0..n-1 and edges 0..m-1 (structure preserved)."""
    g = obj.graph
    vmap = {v: i for i, v in enumerate(g.vertices)}
    emap = {e: i for i, e in enumerate(sorted(g.edges, key=repr))}
    edges = {emap[e]: (vmap[s], vmap[d]) for e, (s, d) in g.edges.items()}
    ng = MultiDigraph(range(len(g.vertices)), edges)
    if isinstance(obj, GraphMonomial):
        labs = {emap[e]: a for e, a in obj.labels.items()}
        return GraphMonomial(ng, labs, vmap[obj.input], vmap[obj.output], _trusted=True)
    if isinstance(obj, TestGraph):
        labs = {emap[e]: a for e, a in obj.labels.items()}
        return TestGraph(ng, labs, _trusted=True)
    return ng


def _block_map(vertices: tuple, blocks: Iterable[Iterable]) -> dict:
    """vertex -> representative, where each block is represented by its
    earliest member in the graph's vertex order."""
    order = {v: i for i, v in enumerate(vertices)}
    mapping = {v: v for v in vertices}
    seen = set()
    for block in blocks:
        bl = list(block)
        for v in bl:
            if v not in order:
                raise ValueError(f"partition mentions unknown vertex {v!r}")
            if v in seen:
                raise ValueError(f"partition repeats vertex {v!r}")
            seen.add(v)
        rep = min(bl, key=order.__getitem__)
        for v in bl:
            mapping[v] = rep
    return mapping


def quotient(obj, partition):
    """Identify the vertices within each block of ``partition``.

    ``partition`` is any iterable of blocks (iterables of vertex ids); vertices
    not mentioned stay as singletons, but every mentioned vertex must exist.
    Edge ids are preserved.
    """
    blocks = partition.blocks if hasattr(partition, "blocks") else partition
    g = obj.graph if not isinstance(obj, MultiDigraph) else obj
    mapping = _block_map(g.vertices, blocks)
    new_vertices = []
    seen = set()
    for v in g.vertices:
        r = mapping[v]
        if r not in seen:
            seen.add(r)
            new_vertices.append(r)
    edges = {e: (mapping[s], mapping[d]) for e, (s, d) in g.edges.items()}
    ng = MultiDigraph(new_vertices, edges)
    if isinstance(obj, MultiDigraph):
        return ng
    if isinstance(obj, TestGraph):
        return TestGraph(ng, dict(obj.labels), _trusted=True)
    return GraphMonomial(ng, dict(obj.labels), mapping[obj.input], mapping[obj.output],
                         _trusted=True)


def merge_vertices(obj, v, w):
    """Quotient identifying exactly the pair v, w."""
    return quotient(obj, [[v, w]])


def tilde_delta(t: GraphMonomial) -> TestGraph:
    """Identify input with output and forget the roots."""
    if t.input == t.output:
        return t.as_test_graph()
    merged = quotient(t, [[t.input, t.output]])
    return merged.as_test_graph()


class GraphPolynomial:
    """Formal complex-linear combination of graph monomials.

    Terms are keyed by canonical form, so isomorphic monomials share one
    coefficient and zero coefficients are dropped.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | None = None):
        # key -> (monomial, coeff)
        self.terms = dict(terms) if terms else {}

    @classmethod
    def from_monomial(cls, mono: GraphMonomial, coeff: complex = 1.0) -> "GraphPolynomial":
        p = cls()
        p._add(mono, coeff)
        return p

    @classmethod
    def zero(cls) -> "GraphPolynomial":
        return cls()

    def _add(self, mono: GraphMonomial, coeff: complex) -> None:
        from .canonical import canonical_form
        if coeff == 0:
            return
        key = canonical_form(mono)
        if key in self.terms:
            old_m, old_c = self.terms[key]
            c = old_c + coeff
            if abs(c) < 1e-15:
                del self.terms[key]
            else:
                self.terms[key] = (old_m, c)
        else:
            self.terms[key] = (mono, coeff)

    def items(self):
        return [(m, c) for (m, c) in self.terms.values()]

    def __len__(self) -> int:
        return len(self.terms)

    def __add__(self, other: "GraphPolynomial") -> "GraphPolynomial":
        out = GraphPolynomial(self.terms)
        for m, c in other.items():
            out._add(m, c)
        return out

    def __sub__(self, other: "GraphPolynomial") -> "GraphPolynomial":
        return self + other.scale(-1)

    def scale(self, z: complex) -> "GraphPolynomial":
        out = GraphPolynomial()
        if z == 0:
            return out
        for m, c in self.items():
            out._add(m, c * z)
        return out

    def __mul__(self, other: "GraphPolynomial") -> "GraphPolynomial":
        from .operad import monomial_product
        out = GraphPolynomial()
        for m1, c1 in self.items():
            for m2, c2 in other.items():
                out._add(monomial_product(m1, m2), c1 * c2)
        return out

    def power(self, k: int) -> "GraphPolynomial":
        from .operad import unit_monomial
        out = GraphPolynomial.from_monomial(unit_monomial())
        for _ in range(k):
            out = out * self
        return out

    def adjoint(self) -> "GraphPolynomial":
        from .operad import monomial_adjoint
        out = GraphPolynomial()
        for m, c in self.items():
            out._add(monomial_adjoint(m), c.conjugate() if isinstance(c, complex) else complex(c).conjugate())
        return out

    def map_monomials(self, fn) -> "GraphPolynomial":
        """Apply ``fn: monomial -> GraphPolynomial`` linearly."""
        out = GraphPolynomial()
        for m, c in self.items():
            sub = fn(m)
            for m2, c2 in sub.items():
                out._add(m2, c * c2)
        return out

    def __repr__(self) -> str:
        return f"GraphPolynomial({len(self.terms)} terms)"
