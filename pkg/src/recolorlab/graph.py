"""Core graph, coloring, and conflict-tracking primitives.

Vertices are dense integers 0..n-1, colors are integers starting at 1.
Everything here is deterministic; randomness always comes from a generator
passed in by the caller.

The incremental structures (ConflictSet, ColorOccurrenceVector) exist so
that one local recoloring costs O(deg) bookkeeping instead of a full
recount. Their compact-array layout gives O(1) uniform sampling of a
conflicting vertex.
"""


class GraphError(ValueError):
    """Base class for structural graph errors."""


class SelfLoopError(GraphError):
    pass


class DuplicateEdgeError(GraphError):
    pass


class VertexRangeError(GraphError):
    pass


class IncompatibleSizeError(ValueError):
    pass


class EmptyConflictSetError(LookupError):
    pass


class Graph:
    """Mutable undirected simple graph with O(1) edge membership tests."""

    __slots__ = ("n", "adj", "max_degree", "edge_count", "_edges")

    def __init__(self, n: int):
        if n <= 0:
            raise VertexRangeError(f"vertex count must be positive, got {n}")
        self.n = n
        self.adj: list[list[int]] = [[] for _ in range(n)]
        self.max_degree = 0
        self.edge_count = 0
        self._edges: set[tuple[int, int]] = set()

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def _check_vertex(self, v: int) -> None:
        if not isinstance(v, int) or not 0 <= v < self.n:
            raise VertexRangeError(f"vertex {v!r} outside 0..{self.n - 1}")

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self._edges

    def insert_edge(self, u: int, v: int) -> None:
        """Add the undirected edge {u, v}; rejects loops and duplicates."""
        self._check_vertex(u)
        self._check_vertex(v)
        if u == v:
            raise SelfLoopError(f"self loop at vertex {u}")
        key = (u, v) if u < v else (v, u)
        if key in self._edges:
            raise DuplicateEdgeError(f"edge {key} already present")
        self._edges.add(key)
        self.adj[u].append(v)
        self.adj[v].append(u)
        self.edge_count += 1
        d = len(self.adj[u])
        if d > self.max_degree:
            self.max_degree = d
        d = len(self.adj[v])
        if d > self.max_degree:
            self.max_degree = d

    def edges(self) -> list[tuple[int, int]]:
        """All edges as (min, max) pairs in sorted order."""
        return sorted(self._edges)

    def copy(self) -> "Graph":
        g = Graph(self.n)
        for u, v in self._edges:
            g.insert_edge(u, v)
        return g


def build_graph(n: int, edges) -> Graph:
    g = Graph(n)
    for u, v in edges:
        g.insert_edge(u, v)
    return g


class Coloring:
    """A vertex -> color assignment, optionally restricted to palette 1..k.

    ``palette=None`` means the palette is unbounded (any positive color up
    to n is admissible).
    """

    __slots__ = ("colors", "palette")

    def __init__(self, colors: list[int], palette: int | None = None):
        self.colors = list(colors)
        self.palette = palette

    def copy(self) -> "Coloring":
        return Coloring(self.colors, self.palette)

    def max_color(self) -> int:
        return max(self.colors)

    def validate(self, g: Graph) -> None:
        if len(self.colors) != g.n:
            raise IncompatibleSizeError(
                f"coloring has {len(self.colors)} entries for {g.n} vertices"
            )
        hi = self.palette if self.palette is not None else g.n
        for v, c in enumerate(self.colors):
            if not 1 <= c <= hi:
                raise ValueError(f"color {c} of vertex {v} outside 1..{hi}")

    def __eq__(self, other):
        return (
            isinstance(other, Coloring)
            and self.colors == other.colors
            and self.palette == other.palette
        )

    def __repr__(self):
        return f"Coloring({self.colors!r}, palette={self.palette!r})"


def _color_list(c) -> list[int]:
    return c.colors if isinstance(c, Coloring) else c


def count_conflicts(g: Graph, c) -> int:
    """Number of edges whose endpoints share a color. From-scratch scan."""
    colors = _color_list(c)
    if len(colors) != g.n:
        raise IncompatibleSizeError(
            f"coloring has {len(colors)} entries for {g.n} vertices"
        )
    total = 0
    adj = g.adj
    for u in range(g.n):
        cu = colors[u]
        for v in adj[u]:
            if v > u and colors[v] == cu:
                total += 1
    return total


class ConflictSet:
    """Tracks the vertices that currently have a same-colored neighbor.

    counts[v] is the number of neighbors sharing v's color; v is a member
    exactly while counts[v] > 0. Members live in the prefix members[0:size]
    with their index kept in pos[v], so removal swaps with the last member
    and sampling one uniformly is O(1). edge_count is the number of
    conflicting edges.
    """

    __slots__ = ("counts", "members", "pos", "size", "edge_count")

    def __init__(self, g: Graph, c):
        self.counts = [0] * g.n
        self.members = [0] * g.n
        self.pos = [-1] * g.n
        self.size = 0
        self.edge_count = 0
        self.rebuild(g, c)

    def rebuild(self, g: Graph, c) -> None:
        colors = _color_list(c)
        counts = self.counts
        for v in range(g.n):
            counts[v] = 0
        self.size = 0
        self.edge_count = 0
        pos = self.pos
        adj = g.adj
        for u in range(g.n):
            cu = colors[u]
            k = 0
            for v in adj[u]:
                if colors[v] == cu:
                    k += 1
                    if v > u:
                        self.edge_count += 1
            counts[u] = k
            pos[u] = -1
        members = self.members
        for v in range(g.n):
            if counts[v] > 0:
                pos[v] = self.size
                members[self.size] = v
                self.size += 1

    def is_conflicting(self, v: int) -> bool:
        return self.counts[v] > 0

    def sample(self, rng) -> int:
        """Uniform random conflicting vertex."""
        if self.size == 0:
            raise EmptyConflictSetError("no conflicting vertices")
        return self.members[rng.randrange(self.size)]

    def _activate(self, v: int) -> None:
        self.pos[v] = self.size
        self.members[self.size] = v
        self.size += 1

    def _deactivate(self, v: int) -> None:
        p = self.pos[v]
        last = self.size - 1
        w = self.members[last]
        self.members[p] = w
        self.pos[w] = p
        self.size = last
        self.pos[v] = -1

    def update_after_recolor(self, g: Graph, colors: list[int], v: int, old: int) -> None:
        """Refresh bookkeeping after colors[v] changed from ``old``.

        colors must already hold v's new color. O(deg(v)).
        """
        new = colors[v]
        if new == old:
            return
        counts = self.counts
        lost = 0
        gained = 0
        for u in g.adj[v]:
            cu = colors[u]
            if cu == old:
                lost += 1
                k = counts[u] - 1
                counts[u] = k
                if k == 0:
                    self._deactivate(u)
            elif cu == new:
                gained += 1
                k = counts[u]
                counts[u] = k + 1
                if k == 0:
                    self._activate(u)
        had = counts[v] > 0
        counts[v] = gained
        if gained > 0 and not had:
            self._activate(v)
        elif gained == 0 and had:
            self._deactivate(v)
        self.edge_count += gained - lost

    def member_list(self) -> list[int]:
        return self.members[: self.size]


class ColorOccurrenceVector:
    """counts[i] = number of vertices colored i; tracks the max used color."""

    __slots__ = ("counts", "max_color")

    def __init__(self, colors: list[int]):
        m = max(colors) if colors else 0
        self.counts = [0] * (m + 1)
        for c in colors:
            self.counts[c] += 1
        self.max_color = m

    def count(self, i: int) -> int:
        return self.counts[i] if 0 < i < len(self.counts) else 0

    def recolor(self, old: int, new: int) -> None:
        counts = self.counts
        counts[old] -= 1
        if new >= len(counts):
            counts.extend([0] * (new + 1 - len(counts)))
        counts[new] += 1
        if new > self.max_color:
            self.max_color = new
        elif old == self.max_color and counts[old] == 0:
            m = self.max_color
            while m > 0 and counts[m] == 0:
                m -= 1
            self.max_color = m

    def as_tuple(self) -> tuple:
        """Occurrence counts for colors 1..max_color."""
        return tuple(self.counts[1 : self.max_color + 1])


def compare(x, y) -> int:
    """Order two (conflict count, occurrence vector) fitness pairs.

    Returns a negative value when x is strictly better, positive when y is,
    and 0 when the pairs are equivalent. Fewer conflicting edges win; on a
    tie the vectors are compared at the largest color where they differ,
    fewer vertices of that color winning. This is a total preorder: any two
    pairs are comparable, and only identical pairs are equivalent.
    """
    cx, ox = x
    cy, oy = y
    if cx != cy:
        return -1 if cx < cy else 1
    m = ox.max_color if ox.max_color > oy.max_color else oy.max_color
    for i in range(m, 0, -1):
        nx = ox.count(i)
        ny = oy.count(i)
        if nx != ny:
            return -1 if nx < ny else 1
    return 0


def write_edge_list(g: Graph, path: str) -> None:
    """Write the graph in the text format: 'n m' then one 'u v' line per edge."""
    with open(path, "w") as fh:
        fh.write(f"{g.n} {g.edge_count}\n")
        for u, v in g.edges():
            fh.write(f"{u} {v}\n")


def write_instance(g: Graph, c, path: str) -> None:
    """Edge-list format plus a final color line 'c c_1 ... c_n'."""
    colors = _color_list(c)
    with open(path, "w") as fh:
        fh.write(f"{g.n} {g.edge_count}\n")
        for u, v in g.edges():
            fh.write(f"{u} {v}\n")
        fh.write("c " + " ".join(str(x) for x in colors) + "\n")


def _parse_header(line: str) -> tuple[int, int]:
    parts = line.split()
    if len(parts) != 2:
        raise GraphError(f"bad header line {line!r}, expected 'n m'")
    try:
        n, m = int(parts[0]), int(parts[1])
    except ValueError:
        raise GraphError(f"bad header line {line!r}, expected integers") from None
    return n, m


def read_edge_list(path: str) -> Graph:
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines:
        raise GraphError("empty edge-list file")
    n, m = _parse_header(lines[0])
    g = Graph(n)
    body = [ln for ln in lines[1:] if not ln.startswith("c ")]
    if len(body) != m:
        raise GraphError(f"header promises {m} edges, file has {len(body)}")
    for ln in body:
        parts = ln.split()
        if len(parts) != 2:
            raise GraphError(f"bad edge line {ln!r}")
        g.insert_edge(int(parts[0]), int(parts[1]))
    return g


def read_instance(path: str) -> tuple[Graph, Coloring]:
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines:
        raise GraphError("empty instance file")
    if not lines[-1].startswith("c "):
        raise GraphError("instance file is missing the color line")
    g = read_edge_list(path)
    colors = [int(x) for x in lines[-1].split()[1:]]
    c = Coloring(colors)
    c.validate(g)
    return g, c
