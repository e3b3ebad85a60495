"""Resolution dual graphs: trees of rational curves with self-intersection
data, plus the builders for the classical chain, fork and star shapes and
for custom star trees.

Degree vectors everywhere in the package are tuples indexed by the sorted
node list of the graph at hand. The extended degree matrix turns a graph
into a Grading: one column per attached section variable (unit vector at
its node) followed by one column per curve variable (the matching column
of the intersection matrix).
"""

from . import linalg
from .errors import ParameterError
from .rings import Grading


class ResolutionGraph:
    __slots__ = ("nodes", "edges", "self_intersection", "leaf_variables", "label", "_adj")

    def __init__(self, nodes, edges, self_intersection=None, leaf_variables=(), label=None):
        ns = tuple(sorted(set(int(x) for x in nodes)))
        if not ns:
            raise ParameterError("graph needs at least one node")
        if len(ns) != len(tuple(nodes)):
            raise ParameterError("duplicate node ids")
        es = []
        seen = set()
        for a, b in edges:
            a, b = int(a), int(b)
            if a == b:
                raise ParameterError("loop edge at node %d" % a)
            if a not in ns or b not in ns:
                raise ParameterError("edge (%d, %d) uses an unknown node" % (a, b))
            key = (min(a, b), max(a, b))
            if key in seen:
                raise ParameterError("duplicate edge (%d, %d)" % key)
            seen.add(key)
            es.append(key)
        es = tuple(sorted(es))
        adj = {n: [] for n in ns}
        for a, b in es:
            adj[a].append(b)
            adj[b].append(a)
        adj = {n: tuple(sorted(v)) for n, v in adj.items()}
        # must be a tree
        if len(es) != len(ns) - 1:
            raise ParameterError("graph is not a tree")
        reached = {ns[0]}
        frontier = [ns[0]]
        while frontier:
            n = frontier.pop()
            for m in adj[n]:
                if m not in reached:
                    reached.add(m)
                    frontier.append(m)
        if len(reached) != len(ns):
            raise ParameterError("graph is not connected")
        si = {n: -2 for n in ns}
        if self_intersection:
            for n, v in self_intersection.items():
                n = int(n)
                if n not in si:
                    raise ParameterError("self-intersection given for unknown node %d" % n)
                si[n] = int(v)
        lv = []
        names = set()
        for name, node in leaf_variables:
            name = str(name)
            node = int(node)
            if node not in si:
                raise ParameterError("variable %s attached to unknown node %d" % (name, node))
            if name in names:
                raise ParameterError("duplicate variable name %s" % name)
            names.add(name)
            lv.append((name, node))
        self.nodes = ns
        self.edges = es
        self.self_intersection = si
        self.leaf_variables = tuple(lv)
        self.label = label
        self._adj = adj

    # --- basic queries -------------------------------------------------

    def neighbors(self, node):
        return self._adj[node]

    def valence(self, node):
        return len(self._adj[node])

    def leaves(self):
        return tuple(n for n in self.nodes if self.valence(n) <= 1)

    def node_index(self, node):
        return self.nodes.index(node)

    def center(self):
        """The unique node of valence >= 3, or None."""
        hubs = [n for n in self.nodes if self.valence(n) >= 3]
        return hubs[0] if len(hubs) == 1 else None

    def branches(self):
        """Chains hanging off the center, center-outward, sorted by their
        first node id."""
        c = self.center()
        if c is None:
            raise ParameterError("graph has no unique center")
        out = []
        for start in self.neighbors(c):
            chain = [start]
            prev, cur = c, start
            while True:
                nxt = [m for m in self._adj[cur] if m != prev]
                if not nxt:
                    break
                if len(nxt) > 1:
                    raise ParameterError("branch through node %d forks" % cur)
                prev, cur = cur, nxt[0]
                chain.append(cur)
            out.append(tuple(chain))
        out.sort(key=lambda ch: ch[0])
        return tuple(out)

    def branch_ends(self):
        return tuple(ch[-1] for ch in self.branches())

    def branch_of(self, node):
        for ch in self.branches():
            if node in ch:
                return ch
        raise ParameterError("node %d is not on a branch" % node)

    def path(self, a, b):
        """The unique path from a to b, inclusive."""
        if a not in self._adj or b not in self._adj:
            raise ParameterError("path endpoints must be nodes")
        parent = {a: None}
        frontier = [a]
        while frontier:
            n = frontier.pop()
            if n == b:
                break
            for m in self._adj[n]:
                if m not in parent:
                    parent[m] = n
                    frontier.append(m)
        out = [b]
        while parent[out[-1]] is not None:
            out.append(parent[out[-1]])
        out.reverse()
        return tuple(out)

    def distance(self, a, b):
        return len(self.path(a, b)) - 1

    def curve_order(self):
        """Curve processing order: branches ascending by (length, first
        node id), center-outward, with the center inserted right before
        the last branch. Chains use plain node order."""
        c = self.center()
        if c is None:
            return self.nodes
        bs = sorted(self.branches(), key=lambda ch: (len(ch), ch[0]))
        order = []
        for i, ch in enumerate(bs):
            if i == len(bs) - 1:
                order.append(c)
            order.extend(ch)
        return tuple(order)

    # --- linear data ---------------------------------------------------

    def intersection_matrix(self):
        n = len(self.nodes)
        idx = {v: i for i, v in enumerate(self.nodes)}
        m = [[0] * n for _ in range(n)]
        for v in self.nodes:
            m[idx[v]][idx[v]] = self.self_intersection[v]
        for a, b in self.edges:
            m[idx[a]][idx[b]] = 1
            m[idx[b]][idx[a]] = 1
        return m

    def is_negative_definite(self):
        return linalg.is_negative_definite(self.intersection_matrix())

    def unit_degree(self, node):
        return tuple(1 if v == node else 0 for v in self.nodes)

    def zero_degree(self):
        return (0,) * len(self.nodes)

    def curve_variable(self, node):
        if node not in self._adj:
            raise ParameterError("unknown node %d" % node)
        return "y%d" % node

    def grading(self):
        """Extended degree matrix as a Grading: section variables first
        (unit column at the attachment node), then curve variables (the
        intersection matrix columns)."""
        inter = self.intersection_matrix()
        names = [name for name, _ in self.leaf_variables]
        names += [self.curve_variable(v) for v in self.nodes]
        rows = []
        for r, node_r in enumerate(self.nodes):
            row = [1 if node == node_r else 0 for _, node in self.leaf_variables]
            row += [inter[r][c] for c in range(len(self.nodes))]
            rows.append(tuple(row))
        return Grading(tuple(names), tuple(rows))

    # --- serialization -------------------------------------------------

    def to_dict(self):
        return {
            "label": self.label,
            "nodes": list(self.nodes),
            "edges": [list(e) for e in self.edges],
            "self_intersection": {str(n): v for n, v in self.self_intersection.items()},
            "leaf_variables": [[name, node] for name, node in self.leaf_variables],
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            data["nodes"],
            [tuple(e) for e in data["edges"]],
            {int(k): v for k, v in data.get("self_intersection", {}).items()},
            [tuple(p) for p in data.get("leaf_variables", [])],
            data.get("label"),
        )

    def __eq__(self, other):
        return (
            isinstance(other, ResolutionGraph)
            and self.nodes == other.nodes
            and self.edges == other.edges
            and self.self_intersection == other.self_intersection
            and self.leaf_variables == other.leaf_variables
        )

    def __repr__(self):
        return "ResolutionGraph(label=%r, nodes=%d)" % (self.label, len(self.nodes))


def build_singularity(family, n):
    """Standard rational double point graphs: chains ('A', n >= 1), forks
    ('D', n >= 4) and the three exceptional star shapes ('E', n in 6..8)."""
    family = str(family).upper()
    n = int(n)
    if family == "A":
        if n < 1:
            raise ParameterError("chain graphs need n >= 1")
        nodes = range(1, n + 1)
        edges = [(i, i + 1) for i in range(1, n)]
        if n == 1:
            lv = [("x1", 1), ("x1p", 1)]
        else:
            lv = [("x1", 1), ("x%d" % n, n)]
        return ResolutionGraph(nodes, edges, None, lv, "A%d" % n)
    if family == "D":
        if n < 4:
            raise ParameterError("fork graphs need n >= 4")
        nodes = range(n)
        edges = [(0, 1), (0, 2), (0, 3)]
        edges += [(i, i + 1) for i in range(3, n - 1)]
        lv = [("x1", 1), ("x2", 2), ("x%d" % (n - 1), n - 1)]
        return ResolutionGraph(nodes, edges, None, lv, "D%d" % n)
    if family == "E":
        if n not in (6, 7, 8):
            raise ParameterError("exceptional graphs need n in {6, 7, 8}")
        nodes = range(n)
        edges = [(0, 1), (0, 2), (2, 3), (0, 4)]
        edges += [(i, i + 1) for i in range(4, n - 1)]
        lv = [("x1", 1), ("x3", 3), ("x%d" % (n - 1), n - 1)]
        return ResolutionGraph(nodes, edges, None, lv, "E%d" % n)
    raise ParameterError("unknown family %r; use A, D or E" % family)


def build_custom_tree(lengths):
    """Star tree with the given branch lengths: node 0 at the center,
    branches numbered consecutively, one section variable per branch end."""
    lens = [int(x) for x in lengths]
    if len(lens) < 3:
        raise ParameterError("a star tree needs at least 3 branches")
    if any(x < 1 for x in lens):
        raise ParameterError("branch lengths must be >= 1")
    nodes = [0]
    edges = []
    lv = []
    nxt = 1
    for length in lens:
        prev = 0
        for _ in range(length):
            nodes.append(nxt)
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
        lv.append(("x%d" % prev, prev))
    label = "custom:" + ",".join(str(x) for x in lens)
    return ResolutionGraph(nodes, edges, None, lv, label)


def build_from_string(text):
    """Parse a case name: 'A3', 'D5', 'E7' or 'custom:2,2,3'."""
    text = str(text).strip()
    if text.lower().startswith("custom:"):
        spec_part = text[len("custom:"):]
        try:
            lengths = [int(x) for x in spec_part.split(",") if x.strip()]
        except ValueError:
            raise ParameterError("bad branch lengths in %r" % text) from None
        return build_custom_tree(lengths)
    if len(text) >= 2 and text[0].upper() in ("A", "D", "E"):
        try:
            n = int(text[1:])
        except ValueError:
            raise ParameterError("bad case name %r" % text) from None
        return build_singularity(text[0], n)
    raise ParameterError("bad case name %r; use A<n>, D<n>, E<n> or custom:l1,l2,..." % text)
