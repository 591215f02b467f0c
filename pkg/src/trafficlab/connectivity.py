"""Connectivity analysis: blocks, cactus classification, edge connectivity,
and the modified block-cut tree of a bi-rooted monomial.

Cactus detection is block-wise and O(V+E): a connected multigraph is a cactus
iff every biconnected block is a single loop or a simple cycle (a bridge block
disqualifies it, since a bridge lies on no cycle).  Allowing bridge blocks as
well yields the quasi-cactus test.  The max-flow edge-connectivity routine
exists mainly as an independent oracle for these classifications.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .graphs import GraphMonomial, MultiDigraph, TestGraph

__all__ = [
    "biconnected_blocks",
    "CactusInfo",
    "cactus_classify",
    "is_quasi_cactus",
    "edge_connectivity",
    "three_connected_pairs",
    "BcdTree",
    "bcd_tree",
]


def _underlying(obj) -> MultiDigraph:
    return obj if isinstance(obj, MultiDigraph) else obj.graph


# ---------------------------------------------------------------------------
# biconnected components (index-based core)
# ---------------------------------------------------------------------------

def biconnected_blocks(n: int, ends: list[tuple[int, int]]):
    """Blocks and cut vertices of the loop-free multigraph (recursive Tarjan).

    Small-graph implementation: recursion depth is bounded by |V|, which the
    library caps well below Python's limit.
    """
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for i, (u, v) in enumerate(ends):
        adj[u].append((v, i))
        adj[v].append((u, i))

    disc = [-1] * n
    low = [0] * n
    blocks: list[list[int]] = []
    cuts: set[int] = set()
    counter = [0]
    estack: list[int] = []

    def dfs(v: int, in_ei: int) -> None:
        disc[v] = low[v] = counter[0]
        counter[0] += 1
        used_arrival = False
        children = 0
        for (w, ei) in adj[v]:
            if ei == in_ei and not used_arrival:
                used_arrival = True
                continue
            if disc[w] == -1:
                estack.append(ei)
                children += 1
                dfs(w, ei)
                if low[w] < low[v]:
                    low[v] = low[w]
                if low[w] >= disc[v]:
                    block = []
                    while True:
                        e2 = estack.pop()
                        block.append(e2)
                        if e2 == ei:
                            break
                    blocks.append(block)
                    if in_ei != -1:
                        cuts.add(v)
            elif disc[w] < disc[v]:
                estack.append(ei)
                if disc[w] < low[v]:
                    low[v] = disc[w]
        if in_ei == -1 and children > 1:
            cuts.add(v)

    for s in range(n):
        if disc[s] == -1:
            dfs(s, -1)
    return blocks, cuts


# ---------------------------------------------------------------------------
# cactus classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CactusInfo:
    """Outcome of cactus classification.

    ``pads`` lists each pad as a tuple of (edge id, forward) pairs in cyclic
    traversal order; ``forward`` records whether the traversal direction
    agrees with the edge's own direction.  Only meaningful when ``is_cactus``.
    """

    is_cactus: bool
    is_oriented: bool
    pads: tuple = ()

    @property
    def kind(self) -> str:
        if not self.is_cactus:
            return "not_cactus"
        return "oriented_cactus" if self.is_oriented else "cactus"


def _pad_cycle(block: list[int], ends: list[tuple[int, int]]):
    """Cyclic traversal of a simple-cycle block: [(edge pos, forward), ...]."""
    if len(block) == 1:
        return [(block[0], True)]
    incident: dict[int, list[int]] = {}
    for ei in block:
        u, v = ends[ei]
        incident.setdefault(u, []).append(ei)
        incident.setdefault(v, []).append(ei)
    start = ends[block[0]][0]
    walk = []
    used = set()
    cur = start
    while len(walk) < len(block):
        nxt_edge = None
        for ei in incident[cur]:
            if ei not in used:
                nxt_edge = ei
                break
        u, v = ends[nxt_edge]
        forward = (u == cur)
        used.add(nxt_edge)
        walk.append((nxt_edge, forward))
        cur = v if forward else u
    return walk


def cactus_pads_flat(n: int, ends: list[tuple[int, int]]):
    """Pads of the connected multigraph, or None if it is not a cactus.

    ``ends`` may contain loops.  Returned pads use edge positions.
    """
    nonloop = []
    pos_of = []
    pads = []
    for i, (u, v) in enumerate(ends):
        if u == v:
            pads.append(((i, True),))
        else:
            nonloop.append((u, v))
            pos_of.append(i)
    if nonloop:
        blocks, _ = biconnected_blocks(n, nonloop)
        covered = 0
        for block in blocks:
            verts = set()
            for ei in block:
                verts.update(nonloop[ei])
            if len(block) != len(verts):
                return None  # bridge (|E| = |V|-1) or denser block
            walk = _pad_cycle(block, nonloop)
            pads.append(tuple((pos_of[ei], fwd) for (ei, fwd) in walk))
            covered += len(block)
        if covered != len(nonloop):
            return None
    return pads


def cactus_classify(obj) -> CactusInfo:
    """Classify a connected multigraph as oriented cactus, cactus, or neither."""
    g = _underlying(obj)
    if not g.is_connected():
        raise ValueError("cactus classification requires a connected graph")
    vidx = {v: i for i, v in enumerate(g.vertices)}
    eids = list(g.edges)
    ends = [(vidx[g.edges[e][0]], vidx[g.edges[e][1]]) for e in eids]
    pads = cactus_pads_flat(len(g.vertices), ends)
    if pads is None:
        return CactusInfo(False, False)
    named = tuple(tuple((eids[pos], fwd) for (pos, fwd) in pad) for pad in pads)
    oriented = all(all(fwd for (_, fwd) in pad) or all(not fwd for (_, fwd) in pad)
                   for pad in named)
    return CactusInfo(True, oriented, named)


def is_quasi_cactus(obj) -> bool:
    """True iff every edge lies on at most one simple cycle."""
    g = _underlying(obj)
    if not g.is_connected():
        raise ValueError("quasi-cactus test requires a connected graph")
    vidx = {v: i for i, v in enumerate(g.vertices)}
    nonloop = [(vidx[s], vidx[d]) for (s, d) in g.edges.values() if s != d]
    blocks, _ = biconnected_blocks(len(g.vertices), nonloop)
    for block in blocks:
        if len(block) == 1:
            continue  # bridge
        verts = set()
        for ei in block:
            verts.update(nonloop[ei])
        if len(block) != len(verts):
            return False
    return True


# ---------------------------------------------------------------------------
# edge connectivity (Menger oracle)
# ---------------------------------------------------------------------------

def edge_connectivity(obj, v, w, limit: int | None = None) -> int:
    """Maximum number of pairwise edge-disjoint undirected paths from v to w.

    Unit-capacity max flow on the doubled arc model; loops are ignored (they
    join no distinct pair).  ``limit`` truncates the search once that many
    augmenting paths are found.
    """
    g = _underlying(obj)
    if v == w:
        raise ValueError("edge connectivity needs two distinct vertices")
    if not g.has_vertex(v) or not g.has_vertex(w):
        raise ValueError("unknown vertex")
    vidx = {x: i for i, x in enumerate(g.vertices)}
    n = len(g.vertices)
    cap: list[dict[int, int]] = [dict() for _ in range(n)]
    for (s, d) in g.edges.values():
        if s == d:
            continue
        a, b = vidx[s], vidx[d]
        cap[a][b] = cap[a].get(b, 0) + 1
        cap[b][a] = cap[b].get(a, 0) + 1
    source, sink = vidx[v], vidx[w]
    flow = 0
    while limit is None or flow < limit:
        parent = [-1] * n
        parent[source] = source
        q = deque([source])
        while q and parent[sink] == -1:
            x = q.popleft()
            for y, c in cap[x].items():
                if c > 0 and parent[y] == -1:
                    parent[y] = x
                    q.append(y)
        if parent[sink] == -1:
            break
        y = sink
        while y != source:
            x = parent[y]
            cap[x][y] -= 1
            cap[y][x] = cap[y].get(x, 0) + 1
            y = x
        flow += 1
    return flow


def three_connected_pairs(obj):
    """All vertex pairs with edge connectivity at least 3."""
    g = _underlying(obj)
    vs = g.vertices
    out = []
    for i in range(len(vs)):
        for j in range(i + 1, len(vs)):
            if edge_connectivity(g, vs[i], vs[j], limit=3) >= 3:
                out.append((vs[i], vs[j]))
    return out


# ---------------------------------------------------------------------------
# modified block-cut tree
# ---------------------------------------------------------------------------

class BcdTree:
    """Block-cut tree of a graph monomial, modified to carry loops and roots.

    Circle nodes are graph vertices (cut vertices, the two roots, and loop
    base vertices); square nodes are blocks.  A square is classified as
    ``"bridge"`` (single non-loop edge), ``"loops"`` (all loops at one
    vertex), or ``"block"`` (anything denser).  ``path`` is the unique
    alternating circle/square path from the input node to the output node.
    """

    def __init__(self, monomial: GraphMonomial):
        self.monomial = monomial
        g = monomial.graph
        vidx = {v: i for i, v in enumerate(g.vertices)}
        eids = list(g.edges)
        loops_at: dict[int, list] = {}
        nonloop = []
        nonloop_ids = []
        for e in eids:
            s, d = g.edges[e]
            if s == d:
                loops_at.setdefault(vidx[s], []).append(e)
            else:
                nonloop.append((vidx[s], vidx[d]))
                nonloop_ids.append(e)
        blocks, cuts = biconnected_blocks(len(g.vertices), nonloop)

        circle_vs = set(cuts)
        circle_vs.add(vidx[monomial.input])
        circle_vs.add(vidx[monomial.output])
        circle_vs.update(loops_at)

        self.circles = {("v", i): g.vertices[i] for i in circle_vs}
        self.squares = {}
        self.adj: dict = {c: [] for c in self.circles}
        sq = 0
        for block in blocks:
            edges = tuple(nonloop_ids[ei] for ei in block)
            verts = set()
            for ei in block:
                verts.update(nonloop[ei])
            kind = "bridge" if len(block) == 1 else "block"
            node = ("b", sq)
            sq += 1
            self.squares[node] = (kind, edges, tuple(g.vertices[i] for i in sorted(verts)))
            self.adj[node] = []
            for i in verts & circle_vs:
                self._link(node, ("v", i))
        for i, loop_edges in loops_at.items():
            node = ("b", sq)
            sq += 1
            self.squares[node] = ("loops", tuple(loop_edges), (g.vertices[i],))
            self.adj[node] = []
            self._link(node, ("v", i))

        self.in_node = ("v", vidx[monomial.input])
        self.out_node = ("v", vidx[monomial.output])
        n_nodes = len(self.circles) + len(self.squares)
        n_links = sum(len(a) for a in self.adj.values()) // 2
        if n_links != n_nodes - 1:
            raise AssertionError("block-cut structure is not a tree")
        self.path = self._find_path()

    def _link(self, a, b) -> None:
        self.adj[a].append(b)
        self.adj[b].append(a)

    def _find_path(self):
        if self.in_node == self.out_node:
            return (self.in_node,)
        prev = {self.in_node: None}
        q = deque([self.in_node])
        while q:
            x = q.popleft()
            if x == self.out_node:
                break
            for y in self.adj[x]:
                if y not in prev:
                    prev[y] = x
                    q.append(y)
        path = []
        x = self.out_node
        while x is not None:
            path.append(x)
            x = prev[x]
        return tuple(reversed(path))

    def path_vertices(self):
        return tuple(self.circles[n] for n in self.path if n in self.circles)

    def path_squares(self):
        return tuple(n for n in self.path if n in self.squares)

    def hanging_component(self, node):
        """Edge ids of the squares reachable from a path node off the path."""
        blocked = set()
        k = self.path.index(node)
        if k > 0:
            blocked.add((self.path[k - 1], node))
            blocked.add((node, self.path[k - 1]))
        if k + 1 < len(self.path):
            blocked.add((node, self.path[k + 1]))
            blocked.add((self.path[k + 1], node))
        seen = {node}
        stack = [node]
        edges: list = []
        while stack:
            x = stack.pop()
            if x in self.squares:
                edges.extend(self.squares[x][1])
            for y in self.adj[x]:
                if (x, y) in blocked or y in seen:
                    continue
                seen.add(y)
                stack.append(y)
        return tuple(edges)

    def reconstructs(self) -> bool:
        """Every edge of the monomial appears in exactly one square."""
        seen: list = []
        for (_, edges, _) in self.squares.values():
            seen.extend(edges)
        return sorted(map(repr, seen)) == sorted(map(repr, self.monomial.graph.edges))


def bcd_tree(t: GraphMonomial) -> BcdTree:
    return BcdTree(t)
