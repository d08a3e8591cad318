"""Static instance families and their reference colorings.

Each family builds a (Graph, Coloring) pair. Coloring modes:

- "proper": the family's canonical proper coloring
- "inverted": the canonical coloring with colors 1 and 2 swapped
  (2-colorable families only)
- "random": colors drawn uniformly from the palette
"""

from dataclasses import dataclass

from .graph import Coloring, Graph, build_graph, count_conflicts


class ConfigInvalidError(ValueError):
    pass


class GenerationFailedError(RuntimeError):
    pass


@dataclass
class InstanceSpec:
    family: str
    n: int
    coloring: str = "proper"
    palette: int | None = None
    # family-specific knobs
    rows: int | None = None  # grid
    cols: int | None = None  # grid
    edge_prob: float = 0.1  # random bipartite
    detached: int = 1  # star forest: number of withheld paths
    detach_mode: str = "root"  # star forest: "root" or "leaf" edges withheld


def _heap_depth(v: int) -> int:
    return (v + 1).bit_length() - 1


def path_edges(n: int) -> list[tuple[int, int]]:
    return [(i, i + 1) for i in range(n - 1)]


def star_layout(n: int) -> tuple[int, list[int], list[int]]:
    """Depth-2 star vertex layout: (center, middles, leaves).

    Center 0; middle i is vertex i (1..half); its leaf is half+i.
    """
    if n % 2 != 1 or n < 5:
        raise ConfigInvalidError(f"depth-2 star needs odd n >= 5, got {n}")
    half = (n - 1) // 2
    return 0, list(range(1, half + 1)), list(range(half + 1, n))


def grid_edges(rows: int, cols: int, diagonal: str = "/") -> list[tuple[int, int]]:
    """Triangulated grid: axis edges plus one diagonal per cell.

    "/" puts the diagonal between (r, c+1) and (r+1, c); "\\" between
    (r, c) and (r+1, c+1). Max degree is 6 either way.
    """

    def vid(r, c):
        return r * cols + c

    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((vid(r, c), vid(r, c + 1)))
            if r + 1 < rows:
                edges.append((vid(r, c), vid(r + 1, c)))
            if r + 1 < rows and c + 1 < cols:
                if diagonal == "/":
                    edges.append((vid(r, c + 1), vid(r + 1, c)))
                else:
                    edges.append((vid(r, c), vid(r + 1, c + 1)))
    return edges


def greedy_coloring(g: Graph, order=None) -> list[int]:
    """First-fit coloring in the given vertex order (ascending id default)."""
    colors = [0] * g.n
    for v in order if order is not None else range(g.n):
        used = {colors[u] for u in g.adj[v] if colors[u]}
        c = 1
        while c in used:
            c += 1
        colors[v] = c
    return colors


def _path_proper(n: int) -> list[int]:
    return [1 + (i % 2) for i in range(n)]


def _tree_proper(n: int) -> list[int]:
    return [1 + (_heap_depth(v) % 2) for v in range(n)]


def _generate_graph(spec: InstanceSpec, rng) -> Graph:
    fam, n = spec.family, spec.n
    if fam == "path":
        if n < 2:
            raise ConfigInvalidError("path needs n >= 2")
        return build_graph(n, path_edges(n))
    if fam == "cycle":
        if n < 3:
            raise ConfigInvalidError("cycle needs n >= 3")
        return build_graph(n, path_edges(n) + [(0, n - 1)])
    if fam == "complete_binary_tree":
        if n < 3 or n != (1 << n.bit_length()) - 1:
            raise ConfigInvalidError(f"complete binary tree needs n = 2^h - 1, got {n}")
        edges = []
        for i in range(n):
            for ch in (2 * i + 1, 2 * i + 2):
                if ch < n:
                    edges.append((i, ch))
        return build_graph(n, edges)
    if fam == "depth2_star":
        center, middles, leaves = star_layout(n)
        edges = [(center, m) for m in middles]
        edges += [(m, l) for m, l in zip(middles, leaves)]
        return build_graph(n, edges)
    if fam == "star_forest":
        return _star_forest_graph(spec)
    if fam == "random_bipartite":
        return _random_bipartite_graph(spec, rng)
    if fam == "grid":
        rows, cols = _grid_shape(spec)
        return build_graph(n, grid_edges(rows, cols))
    raise ConfigInvalidError(f"unknown instance family {fam!r}")


def _grid_shape(spec: InstanceSpec) -> tuple[int, int]:
    rows, cols = spec.rows, spec.cols
    if rows is None or cols is None:
        side = int(round(spec.n ** 0.5))
        if side * side != spec.n:
            raise ConfigInvalidError(
                f"grid needs rows/cols or a square n, got n={spec.n}"
            )
        rows = cols = side
    if rows < 2 or cols < 2:
        raise ConfigInvalidError("grid needs rows, cols >= 2")
    if rows * cols != spec.n:
        raise ConfigInvalidError(f"rows*cols = {rows * cols} but n = {spec.n}")
    return rows, cols


def _star_forest_graph(spec: InstanceSpec) -> Graph:
    """Depth-2 star with ``detached`` paths cut loose.

    Root mode removes center-middle edges, leaving two-vertex paths beside
    the star; leaf mode removes middle-leaf edges, leaving isolated leaves.
    """
    n, t = spec.n, spec.detached
    if spec.detach_mode == "root" and n % 4 != 1:
        raise ConfigInvalidError(f"star forest (root mode) needs n = 4k + 1, got {n}")
    center, middles, leaves = star_layout(n)
    if not 1 <= t < len(middles):
        raise ConfigInvalidError(
            f"detached paths must be in 1..{len(middles) - 1}, got {t}"
        )
    edges = []
    for i, (m, l) in enumerate(zip(middles, leaves)):
        cut = i < t
        if not (cut and spec.detach_mode == "root"):
            edges.append((center, m))
        if not (cut and spec.detach_mode == "leaf"):
            edges.append((m, l))
    return build_graph(n, edges)


def _random_bipartite_graph(spec: InstanceSpec, rng) -> Graph:
    n = spec.n
    if n < 4:
        raise ConfigInvalidError("random bipartite needs n >= 4")
    left = n // 2
    g = Graph(n)
    for u in range(left):
        for v in range(left, n):
            if rng.random() < spec.edge_prob:
                g.insert_edge(u, v)
    return g


def _proper_coloring(spec: InstanceSpec, g: Graph) -> list[int]:
    fam, n = spec.family, spec.n
    if fam == "path":
        return _path_proper(n)
    if fam == "cycle":
        if n % 2 != 0:
            raise ConfigInvalidError("only even cycles have a proper 2-coloring here")
        return _path_proper(n)
    if fam == "complete_binary_tree":
        return _tree_proper(n)
    if fam == "depth2_star":
        # center 2, middles 1, leaves 2
        _, middles, _ = star_layout(n)
        half = len(middles)
        return [2] + [1] * half + [2] * half
    if fam == "star_forest":
        return _star_forest_proper(spec)
    if fam == "random_bipartite":
        # sides give the canonical 2-coloring
        return [1 if v < n // 2 else 2 for v in range(n)]
    if fam == "grid":
        colors = greedy_coloring(g)
        if max(colors) > 5:
            raise GenerationFailedError(
                "greedy coloring exceeded 5 colors on a triangulated grid"
            )
        return colors
    raise ConfigInvalidError(f"unknown instance family {fam!r}")


def _star_forest_proper(spec: InstanceSpec) -> list[int]:
    """Detached parts are colored so that reinserting an edge conflicts.

    Root mode: detached middles take the center's color 2, their leaves 1.
    Leaf mode: detached leaves take their middle's color 1.
    """
    n, t = spec.n, spec.detached
    _, middles, leaves = star_layout(n)
    colors = [0] * n
    colors[0] = 2
    for i, (m, l) in enumerate(zip(middles, leaves)):
        if i < t and spec.detach_mode == "root":
            colors[m], colors[l] = 2, 1
        elif i < t and spec.detach_mode == "leaf":
            colors[m], colors[l] = 1, 1
        else:
            colors[m], colors[l] = 1, 2
    return colors


def generate(spec: InstanceSpec, rng) -> tuple[Graph, Coloring]:
    """Build the family's graph and the requested coloring mode."""
    if spec.family == "grid" and spec.coloring == "proper":
        # if first-fit ever needed more than 5 colors, retry the other
        # triangulation before failing loudly
        rows, cols = _grid_shape(spec)
        last = None
        for diagonal in ("/", "\\"):
            g = build_graph(spec.n, grid_edges(rows, cols, diagonal))
            colors = greedy_coloring(g)
            last = (g, colors)
            if max(colors) <= 5:
                break
        else:
            raise GenerationFailedError(
                "greedy coloring exceeded 5 colors on both grid triangulations"
            )
        g, colors = last
        c = Coloring(colors, spec.palette)
        c.validate(g)
        return g, c
    g = _generate_graph(spec, rng)
    mode = spec.coloring
    if mode == "proper":
        colors = _proper_coloring(spec, g)
    elif mode == "inverted":
        colors = _proper_coloring(spec, g)
        if max(colors) > 2:
            raise ConfigInvalidError("inverted mode needs a 2-colorable family")
        colors = [3 - c for c in colors]
    elif mode == "random":
        hi = spec.palette if spec.palette is not None else max(2, g.max_degree + 1)
        colors = [rng.randint(1, hi) for _ in range(g.n)]
    else:
        raise ConfigInvalidError(f"unknown coloring mode {mode!r}")
    c = Coloring(colors, spec.palette)
    c.validate(g)
    if mode in ("proper", "inverted") and count_conflicts(g, c) != 0:
        raise GenerationFailedError(f"{spec.family} proper coloring has conflicts")
    return g, c
