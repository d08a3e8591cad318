"""Dynamic-change scenarios: a colored base instance plus a scripted batch
of edge insertions.

Each scenario builds a pre-change (Graph, Coloring) whose coloring is
proper, together with up to T edges to insert. Inserting the batch breaks
properness in a controlled way; the search algorithms are then measured on
how long they take to repair it. Scripted scenarios create exactly T
conflicting edges; the random-preserving scenarios create at most T and
keep their graph class (bipartite / planar-with-max-degree-6).
"""

from dataclasses import dataclass, field

from .graph import (
    Coloring,
    DuplicateEdgeError,
    Graph,
    SelfLoopError,
    VertexRangeError,
    build_graph,
    count_conflicts,
)
from .instances import (
    ConfigInvalidError,
    GenerationFailedError,
    InstanceSpec,
    generate,
    greedy_coloring,
    grid_edges,
    path_edges,
    star_layout,
    _grid_shape,
    _heap_depth,
    _random_bipartite_graph,
)


class InsufficientComponentsError(RuntimeError):
    pass


@dataclass
class ScenarioSpec:
    kind: str
    n: int
    T: int = 1
    edge_prob: float = 0.1
    rows: int | None = None
    cols: int | None = None
    edges: list | None = None  # explicit batch
    base: InstanceSpec | None = None  # explicit base instance


@dataclass
class PreparedScenario:
    spec: ScenarioSpec
    graph: Graph
    coloring: Coloring
    batch: list[tuple[int, int]] = field(default_factory=list)


# palette size for bounded runs / color target for unbounded runs, per kind
SCENARIO_TARGETS = {
    "path_join": 2,
    "tree_root_edge": 2,
    "star_root": 2,
    "star_leaf": 2,
    "bipartite_random": 2,
    "bipartite_batch": 2,
    "planar_grid": 5,
}


def apply_batch(g: Graph, c: Coloring, batch) -> int:
    """Insert every edge of the batch; returns conflicts it created.

    Atomic: the whole batch is validated first (vertex range, loops,
    duplicates against the graph and inside the batch), and the graph is
    untouched when anything is rejected.
    """
    seen = set()
    for u, v in batch:
        if not (isinstance(u, int) and isinstance(v, int)):
            raise VertexRangeError(f"non-integer endpoint in {(u, v)!r}")
        if not (0 <= u < g.n and 0 <= v < g.n):
            raise VertexRangeError(f"edge {(u, v)} outside 0..{g.n - 1}")
        if u == v:
            raise SelfLoopError(f"self loop at vertex {u}")
        key = (u, v) if u < v else (v, u)
        if g.has_edge(u, v) or key in seen:
            raise DuplicateEdgeError(f"edge {key} already present")
        seen.add(key)
    created = 0
    colors = c.colors
    for u, v in batch:
        g.insert_edge(u, v)
        if colors[u] == colors[v]:
            created += 1
    return created


def _two_color_components(g: Graph, rng) -> list[int]:
    """Proper 2-coloring, each component's orientation chosen by coin flip.

    The graph must be bipartite; raises GenerationFailedError otherwise.
    """
    colors = [0] * g.n
    for start in range(g.n):
        if colors[start]:
            continue
        first = 1 if rng.random() < 0.5 else 2
        colors[start] = first
        queue = [start]
        head = 0
        while head < len(queue):
            u = queue[head]
            head += 1
            for v in g.adj[u]:
                if colors[v] == 0:
                    colors[v] = 3 - colors[u]
                    queue.append(v)
                elif colors[v] == colors[u]:
                    raise GenerationFailedError("base graph is not bipartite")
    return colors


class _ParityUnionFind:
    """Union-find that tracks each vertex's side of a global bipartition."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.parity = [0] * n  # side relative to parent

    def find(self, v: int) -> tuple[int, int]:
        path = []
        root = v
        while self.parent[root] != root:
            path.append(root)
            root = self.parent[root]
        # compress, rewriting each parity as side-relative-to-root;
        # nodes closer to the root are rewritten first
        for node in reversed(path):
            par = self.parent[node]
            p = self.parity[node] if par == root else self.parity[node] ^ self.parity[par]
            self.parent[node] = root
            self.parity[node] = p
        return root, (self.parity[v] if v != root else 0)

    def opposite_sides_possible(self, u: int, v: int) -> bool:
        ru, pu = self.find(u)
        rv, pv = self.find(v)
        if ru != rv:
            return True
        return pu != pv

    def join_opposite(self, u: int, v: int) -> None:
        ru, pu = self.find(u)
        rv, pv = self.find(v)
        if ru == rv:
            if pu == pv:
                raise GenerationFailedError("edge would close an odd cycle")
            return
        # make v's side opposite to u's
        self.parent[rv] = ru
        self.parity[rv] = pu ^ pv ^ 1


def build_bipartite_conflict_batch(g: Graph, c: Coloring, t: int, rng) -> list[tuple[int, int]]:
    """T new edges, each conflicting under c, keeping the graph bipartite.

    Needs a base whose 2-coloring disagrees across components (e.g. padded
    with isolated inversely-colored edges); raises
    InsufficientComponentsError when no candidate edge exists.
    """
    uf = _ParityUnionFind(g.n)
    for u, v in g.edges():
        uf.join_opposite(u, v)
    colors = c.colors
    batch: list[tuple[int, int]] = []
    chosen = set()

    def admissible(u, v):
        if u == v or colors[u] != colors[v]:
            return False
        key = (u, v) if u < v else (v, u)
        if key in chosen or g.has_edge(u, v):
            return False
        return uf.opposite_sides_possible(u, v)

    for _ in range(t):
        picked = None
        for _attempt in range(200):
            u = rng.randrange(g.n)
            v = rng.randrange(g.n)
            if admissible(u, v):
                picked = (u, v)
                break
        if picked is None:
            # deterministic sweep before giving up
            for u in range(g.n):
                for v in range(u + 1, g.n):
                    if admissible(u, v):
                        picked = (u, v)
                        break
                if picked:
                    break
        if picked is None:
            raise InsufficientComponentsError(
                f"no conflicting bipartite-preserving edge available "
                f"after {len(batch)} of {t}"
            )
        uf.join_opposite(*picked)
        chosen.add((min(picked), max(picked)))
        batch.append(picked)
    return batch


def _prepare_path_join(spec: ScenarioSpec) -> PreparedScenario:
    n = spec.n
    if n < 4 or n % 2 != 0:
        raise ConfigInvalidError(f"path join needs even n >= 4, got {n}")
    mid = n // 2
    edges = [e for e in path_edges(n) if e != (mid - 1, mid)]
    g = build_graph(n, edges)
    # left half alternates from 1; right half inverted so the junction clashes
    colors = [1 + (i % 2) if i < mid else 1 + ((i + 1) % 2) for i in range(n)]
    return PreparedScenario(spec, g, Coloring(colors), [(mid - 1, mid)])


def _prepare_tree_root_edge(spec: ScenarioSpec) -> PreparedScenario:
    n = spec.n
    if n < 7 or n != (1 << n.bit_length()) - 1:
        raise ConfigInvalidError(f"tree completion needs n = 2^h - 1 >= 7, got {n}")
    edges = []
    for i in range(n):
        for ch in (2 * i + 1, 2 * i + 2):
            if ch < n:
                edges.append((i, ch))
    withheld = (0, 2)
    g = build_graph(n, [e for e in edges if e != withheld])
    colors = [1 + (_heap_depth(v) % 2) for v in range(n)]
    # flip the detached subtree so the completing edge conflicts at the root
    stack = [2]
    while stack:
        v = stack.pop()
        colors[v] = 3 - colors[v]
        for ch in (2 * v + 1, 2 * v + 2):
            if ch < n:
                stack.append(ch)
    return PreparedScenario(spec, g, Coloring(colors), [withheld])


def _prepare_star(spec: ScenarioSpec, mode: str) -> PreparedScenario:
    base = InstanceSpec(
        family="star_forest", n=spec.n, detached=spec.T, detach_mode=mode
    )
    g, c = generate(base, None)
    center, middles, leaves = star_layout(spec.n)
    if mode == "root":
        batch = [(center, middles[i]) for i in range(spec.T)]
    else:
        batch = [(middles[i], leaves[i]) for i in range(spec.T)]
    return PreparedScenario(spec, g, c, batch)


def _prepare_bipartite_random(spec: ScenarioSpec, rng) -> PreparedScenario:
    full = _random_bipartite_graph(
        InstanceSpec("random_bipartite", spec.n, edge_prob=spec.edge_prob), rng
    )
    all_edges = full.edges()
    if len(all_edges) < spec.T:
        raise GenerationFailedError(
            f"base has {len(all_edges)} edges, cannot withhold {spec.T}"
        )
    batch = sorted(rng.sample(all_edges, spec.T))
    withheld = set(batch)
    g = build_graph(spec.n, [e for e in all_edges if e not in withheld])
    colors = _two_color_components(g, rng)
    return PreparedScenario(spec, g, Coloring(colors), batch)


def _prepare_bipartite_batch(spec: ScenarioSpec, rng) -> PreparedScenario:
    # base: isolated edges with coin-flipped orientations, plus spare room
    n = spec.n
    if n < 2 * (spec.T + 1):
        raise ConfigInvalidError(
            f"batch of {spec.T} conflicts needs n >= {2 * (spec.T + 1)}"
        )
    pairs = [(2 * i, 2 * i + 1) for i in range(n // 2)]
    g = build_graph(n, pairs)
    colors = []
    for v in range(n):
        base = 1 + (v % 2)
        colors.append(base)
    # random per-edge inversion
    for a, b in pairs:
        if rng.random() < 0.5:
            colors[a], colors[b] = colors[b], colors[a]
    if n % 2 == 1:
        colors[n - 1] = 1
    c = Coloring(colors)
    batch = build_bipartite_conflict_batch(g, c, spec.T, rng)
    return PreparedScenario(spec, g, c, batch)


def _prepare_planar_grid(spec: ScenarioSpec, rng) -> PreparedScenario:
    n = spec.n
    if n == 0 and spec.rows is not None and spec.cols is not None:
        n = spec.rows * spec.cols  # rows/cols alone pin the size
    rows, cols = _grid_shape(InstanceSpec("grid", n, rows=spec.rows, cols=spec.cols))
    all_edges = grid_edges(rows, cols)
    if len(all_edges) < spec.T:
        raise GenerationFailedError(
            f"grid has {len(all_edges)} edges, cannot withhold {spec.T}"
        )
    batch = sorted(rng.sample(all_edges, spec.T))
    withheld = set(batch)
    g = build_graph(n, [e for e in all_edges if e not in withheld])
    colors = greedy_coloring(g)
    if max(colors) > 5:
        raise GenerationFailedError("greedy coloring exceeded 5 colors on a grid")
    return PreparedScenario(spec, g, Coloring(colors), batch)


def _prepare_explicit(spec: ScenarioSpec, rng) -> PreparedScenario:
    if spec.base is None or spec.edges is None:
        raise ConfigInvalidError("explicit scenario needs a base instance and edges")
    g, c = generate(spec.base, rng)
    return PreparedScenario(spec, g, c, [tuple(e) for e in spec.edges])


def prepare_scenario(spec: ScenarioSpec, rng) -> PreparedScenario:
    """Build the pre-change instance and its insertion batch (not applied)."""
    kind = spec.kind
    if spec.T < 0:
        raise ConfigInvalidError(f"negative batch size {spec.T}")
    if kind == "path_join":
        return _prepare_path_join(spec)
    if kind == "tree_root_edge":
        return _prepare_tree_root_edge(spec)
    if kind == "star_root":
        return _prepare_star(spec, "root")
    if kind == "star_leaf":
        return _prepare_star(spec, "leaf")
    if kind == "bipartite_random":
        return _prepare_bipartite_random(spec, rng)
    if kind == "bipartite_batch":
        return _prepare_bipartite_batch(spec, rng)
    if kind == "planar_grid":
        return _prepare_planar_grid(spec, rng)
    if kind == "explicit":
        return _prepare_explicit(spec, rng)
    raise ConfigInvalidError(f"unknown scenario kind {kind!r}")


def apply_scenario(spec: ScenarioSpec, rng) -> tuple[PreparedScenario, int]:
    """Prepare a scenario and apply its batch; returns (scenario, conflicts)."""
    prep = prepare_scenario(spec, rng)
    pre = count_conflicts(prep.graph, prep.coloring)
    if pre != 0:
        raise GenerationFailedError(f"{spec.kind} pre-change coloring has conflicts")
    created = apply_batch(prep.graph, prep.coloring, prep.batch)
    return prep, created
