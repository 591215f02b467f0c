"""Canonical forms for labeled multidigraphs, monomials, and operations.

Two inputs get equal keys exactly when a root-, label-, and
direction-preserving isomorphism exists.  Tree monomials use an AHU-style
encoding (linear time, no size cap); everything else goes through an
individualization-refinement search for the minimal certificate, capped at
CANONICAL_CAP vertices.  An ``anti`` key (labels ignored, edges reversed)
supports testing whether two rooted digraphs are anti-isomorphic.
"""

from __future__ import annotations

from .caps import Caps, default_caps
from .graphs import GraphMonomial, MultiDigraph, TestGraph

__all__ = [
    "canonical_form",
    "structural_form",
    "anti_isomorphic",
    "is_isomorphic",
    "operation_form",
]


def _edge_triples(graph: MultiDigraph, labels, vidx, use_labels: bool):
    out = []
    for e, (s, d) in graph.edges.items():
        lab = None
        if use_labels and labels is not None:
            a = labels[e]
            lab = (a.generator, a.star)
        out.append((vidx[s], vidx[d], lab))
    return out


def _is_tree(graph: MultiDigraph) -> bool:
    if graph.n_edges() != graph.n_vertices() - 1:
        return False
    return graph.is_connected()


# ---------------------------------------------------------------------------
# AHU encoding for tree monomials
# ---------------------------------------------------------------------------

def _ahu_tree_key(mono: GraphMonomial, use_labels: bool):
    g = mono.graph
    vidx = {v: i for i, v in enumerate(g.vertices)}
    n = len(g.vertices)
    inc: list[list[tuple[int, int, tuple | None]]] = [[] for _ in range(n)]
    for (s, d, lab) in _edge_triples(g, mono.labels, vidx, use_labels):
        inc[s].append((d, 0, lab))   # 0: edge points away from s
        inc[d].append((s, 1, lab))   # 1: edge points into d
    root = vidx[mono.input]
    out_v = vidx[mono.output]

    def encode(v: int, parent: int):
        children = sorted(
            (direction, lab, encode(w, v))
            for (w, direction, lab) in inc[v] if w != parent
        )
        return (v == out_v, tuple(children))

    return ("tree", n, encode(root, -1))


# ---------------------------------------------------------------------------
# individualization-refinement canonical search
# ---------------------------------------------------------------------------

def _rank(values):
    order = {t: i for i, t in enumerate(sorted(set(values)))}
    return [order[t] for t in values]


def _ir_minimal_certificate(n: int, triples, init_colors, root_idx):
    """Lexicographically minimal certificate over numberings compatible with
    iterated color refinement.  ``root_idx`` is (input, output) vertex indices
    or None; their positions are appended to the certificate."""
    out_inc: list[list[tuple]] = [[] for _ in range(n)]
    in_inc: list[list[tuple]] = [[] for _ in range(n)]
    for (s, d, lab) in triples:
        key = lab if lab is not None else ("",)
        out_inc[s].append((key, d))
        in_inc[d].append((key, s))

    def refine(colors):
        while True:
            sigs = []
            for v in range(n):
                sigs.append((
                    colors[v],
                    tuple(sorted((k, colors[w]) for (k, w) in out_inc[v])),
                    tuple(sorted((k, colors[w]) for (k, w) in in_inc[v])),
                ))
            new = _rank(sigs)
            if new == colors:
                return colors
            colors = new

    best: list = [None]

    def certificate(pos):
        edges = tuple(sorted((pos[s], pos[d], lab if lab is not None else ("",))
                             for (s, d, lab) in triples))
        if root_idx is None:
            return edges
        return (edges, pos[root_idx[0]], pos[root_idx[1]])

    def search(colors):
        colors = refine(colors)
        cells: dict[int, list[int]] = {}
        for v, c in enumerate(colors):
            cells.setdefault(c, []).append(v)
        target = None
        for c in sorted(cells):
            if len(cells[c]) > 1:
                target = c
                break
        if target is None:
            cert = certificate(colors)
            if best[0] is None or cert < best[0]:
                best[0] = cert
            return
        for v in cells[target]:
            branched = [(c, 1) for c in colors]
            branched[v] = (colors[v], 0)
            search(_rank(branched))

    search(list(init_colors))
    return best[0]


def _general_key(graph: MultiDigraph, labels, roots, use_labels: bool,
                 caps: Caps | None):
    (caps or default_caps()).check_canonical(graph.n_vertices())
    vidx = {v: i for i, v in enumerate(graph.vertices)}
    n = graph.n_vertices()
    triples = _edge_triples(graph, labels, vidx, use_labels)
    marks = [0] * n
    root_idx = None
    if roots is not None:
        r_in, r_out = roots
        marks[vidx[r_in]] += 1
        marks[vidx[r_out]] += 2
        root_idx = (vidx[r_in], vidx[r_out])
    init = _rank([(marks[v],) for v in range(n)])
    cert = _ir_minimal_certificate(n, triples, init, root_idx)
    return ("gen", n, roots is not None, cert)


# ---------------------------------------------------------------------------
# public API
# ---------------------------------------------------------------------------

def canonical_form(obj, mode: str = "iso", caps: Caps | None = None):
    """Canonical key of a monomial, test graph, or bare multidigraph.

    mode "iso": labels, roots, and edge directions all preserved.
    mode "structural": as "iso" but labels ignored.
    mode "anti": structural key of the edge-reversed graph; compare against a
    "structural" key to test for a direction-reversing isomorphism.
    """
    if mode not in ("iso", "structural", "anti"):
        raise ValueError(f"unknown canonical mode {mode!r}")
    use_labels = mode == "iso"
    if isinstance(obj, GraphMonomial):
        graph, labels, roots = obj.graph, obj.labels, (obj.input, obj.output)
    elif isinstance(obj, TestGraph):
        graph, labels, roots = obj.graph, obj.labels, None
    else:
        graph, labels, roots = obj, None, None
        use_labels = False
    if mode == "anti":
        rev = MultiDigraph(graph.vertices, {e: (d, s) for e, (s, d) in graph.edges.items()})
        return _general_key(rev, None, roots, False, caps)
    if mode == "iso" and roots is not None and _is_tree(graph):
        return _ahu_tree_key(obj, use_labels)
    return _general_key(graph, labels, roots, use_labels, caps)


def structural_form(obj, caps: Caps | None = None):
    return canonical_form(obj, "structural", caps)


def anti_isomorphic(a, b, caps: Caps | None = None) -> bool:
    """True iff a direction-reversing, root-preserving bijection maps a to b
    (labels ignored)."""
    return canonical_form(a, "anti", caps) == canonical_form(b, "structural", caps)


def is_isomorphic(a, b, caps: Caps | None = None) -> bool:
    return canonical_form(a, caps=caps) == canonical_form(b, caps=caps)


def operation_form(op, caps: Caps | None = None):
    """Canonical key of a graph operation (edge ordering preserved)."""
    from .graphs import EdgeAtom
    labels = {e: EdgeAtom(str(op.position(e))) for e in op.graph.edges}
    mono = GraphMonomial(op.graph, labels, op.input, op.output, _trusted=True)
    return canonical_form(mono, "iso", caps)
