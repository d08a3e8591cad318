"""Palette-free search: Grundy local search, Kempe chains, color
elimination, and the iterated local search (ILS) built from them.

Two layers:

- pure functions (grundy_local_search, kempe_chain, color_elimination)
  that return fresh colorings; simple, used directly in tests
- a mutable UnboundedState with incremental bookkeeping (conflict set,
  occurrence vector, per-color buckets, an undo log) driving the fast
  ILS loop; differential tests pin it to the pure layer

One ILS iteration = mutate, repair with Grundy local search, then keep
the offspring iff it is at least as good (fewer conflicting edges, or
equal conflicts and an occurrence vector no worse at the largest
differing color). The repair that opens a run precedes iteration 1.

Grundy local search policy: FIFO queue seeded in ascending vertex id;
every recolor re-enqueues the vertex's neighbors. The in-run repair seeds
only the vertices touched by the mutation plus their neighbors.
"""

import math
from collections import deque

from .common import RunResult, StopRule
from .graph import Coloring, ColorOccurrenceVector, ConflictSet, Graph, _color_list


class NoMaxColorVertexError(LookupError):
    pass


def max_color_after_insertions_bound(t: int) -> int:
    """Largest color the post-batch repair can introduce: floor(sqrt(2T)) + 3."""
    if t < 0:
        raise ValueError(f"negative batch size {t}")
    return math.isqrt(2 * t) + 3


# ---------------------------------------------------------------------------
# pure layer


def grundy_local_search(g: Graph, c, policy: str = "fifo") -> tuple[Coloring, int]:
    """Recolor non-Grundy vertices to their minimum free color until none
    remain. Returns the new coloring and the number of recolor events.

    policy "fifo" seeds ascending vertex ids, "fifo_desc" descending; both
    re-enqueue neighbors after every recolor and reach a Grundy coloring.
    """
    colors = list(_color_list(c))
    n = g.n
    if policy == "fifo":
        seeds = range(n)
    elif policy == "fifo_desc":
        seeds = range(n - 1, -1, -1)
    else:
        raise ValueError(f"unknown policy {policy!r}")
    queue = deque(seeds)
    queued = [True] * n
    adj = g.adj
    recolored = 0
    while queue:
        v = queue.popleft()
        queued[v] = False
        used = {colors[u] for u in adj[v]}
        mfc = 1
        while mfc in used:
            mfc += 1
        if colors[v] != mfc:
            colors[v] = mfc
            recolored += 1
            for u in adj[v]:
                if not queued[u]:
                    queued[u] = True
                    queue.append(u)
    return Coloring(colors), recolored


def _component_over(g: Graph, colors: list[int], start: int, i: int, j: int) -> list[int]:
    """Connected component of ``start`` in the subgraph of colors {i, j}."""
    comp = [start]
    seen = {start}
    head = 0
    while head < len(comp):
        u = comp[head]
        head += 1
        for w in g.adj[u]:
            if w not in seen and (colors[w] == i or colors[w] == j):
                seen.add(w)
                comp.append(w)
    return comp


def kempe_chain(g: Graph, c, v: int, j: int) -> tuple[Coloring, tuple]:
    """Swap colors i=c(v) and j on v's component of the {i, j} subgraph.

    j must lie in 1..deg(v)+1; j = c(v) is a no-op. Returns the new
    coloring and ((i, j), component) as the feasibility witness.
    """
    colors = list(_color_list(c))
    if not 0 <= v < g.n:
        raise ValueError(f"vertex {v} out of range")
    if not 1 <= j <= len(g.adj[v]) + 1:
        raise ValueError(f"color {j} outside 1..deg(v)+1")
    i = colors[v]
    if j == i:
        return Coloring(colors), ((i, j), ())
    comp = _component_over(g, colors, v, i, j)
    for u in comp:
        colors[u] = j if colors[u] == i else i
    return Coloring(colors), ((i, j), tuple(comp))


def color_elimination(g: Graph, c, v: int, i: int, j: int) -> Coloring:
    """Swap i<->j on every component holding an i-colored neighbor of v.

    Guarded: when c(v) < 3 the operation is a no-op by definition. i and j
    must be distinct colors below c(v). Components are deduplicated with
    visit markers, so overlapping neighbors swap once.
    """
    colors = list(_color_list(c))
    cv = colors[v]
    if cv < 3:
        return Coloring(colors)
    if i == j or not (1 <= i < cv) or not (1 <= j < cv):
        raise ValueError(f"need distinct i, j in 1..{cv - 1}, got {i}, {j}")
    targets = [u for u in g.adj[v] if colors[u] == i]
    visited: set[int] = set()
    for u in targets:
        if u in visited:
            continue
        comp = _component_over(g, colors, u, i, j)
        visited.update(comp)
        for w in comp:
            colors[w] = j if colors[w] == i else i
    return Coloring(colors)


# ---------------------------------------------------------------------------
# incremental state


class UnboundedState:
    """Run state with incremental bookkeeping and an undo log.

    The undo log records (vertex, previous color) for every recolor since
    the last acceptance point, letting a rejected iteration roll back in
    time proportional to the change.
    """

    __slots__ = (
        "graph",
        "colors",
        "conflicts",
        "occ",
        "buckets",
        "bucket_pos",
        "rng",
        "iteration",
        "log",
        "touched",
        "scanned",
        "_marks",
        "_stamp",
        "_queued",
        "_qstamp",
        "_queue",
    )

    def __init__(self, graph: Graph, coloring: Coloring, rng):
        c = Coloring(coloring.colors, None)
        c.validate(graph)
        n = graph.n
        self.graph = graph
        self.colors = list(c.colors)
        self.conflicts = ConflictSet(graph, self.colors)
        self.occ = ColorOccurrenceVector(self.colors)
        self.buckets: list[list[int]] = [[] for _ in range(self.occ.max_color + 2)]
        self.bucket_pos = [0] * n
        for v, col in enumerate(self.colors):
            b = self.buckets[col]
            self.bucket_pos[v] = len(b)
            b.append(v)
        self.rng = rng
        self.iteration = 0
        self.log: list[tuple[int, int]] = []
        self.touched = 0
        self.scanned = 0
        self._marks = [0] * (n + 2)
        self._stamp = 0
        self._queued = [0] * n
        self._qstamp = 0
        self._queue: list[int] = []

    def coloring(self) -> Coloring:
        return Coloring(self.colors)

    def max_color_vertices(self) -> list[int]:
        return list(self.buckets[self.occ.max_color])


def _bucket_move(state: UnboundedState, v: int, old: int, new: int) -> None:
    b = state.buckets[old]
    p = state.bucket_pos[v]
    last = b[-1]
    b[p] = last
    state.bucket_pos[last] = p
    b.pop()
    buckets = state.buckets
    if new >= len(buckets):
        buckets.extend([] for _ in range(new + 1 - len(buckets)))
    nb = buckets[new]
    state.bucket_pos[v] = len(nb)
    nb.append(v)


def _recolor_nolog(state: UnboundedState, v: int, new: int) -> None:
    colors = state.colors
    old = colors[v]
    colors[v] = new
    state.conflicts.update_after_recolor(state.graph, colors, v, old)
    state.occ.recolor(old, new)
    _bucket_move(state, v, old, new)
    state.touched += 1
    state.scanned += len(state.graph.adj[v])


def _recolor(state: UnboundedState, v: int, new: int) -> None:
    state.log.append((v, state.colors[v]))
    _recolor_nolog(state, v, new)


def _rollback(state: UnboundedState) -> None:
    for v, old in reversed(state.log):
        _recolor_nolog(state, v, old)
    state.log.clear()


def _min_free(state: UnboundedState, v: int) -> int:
    marks = state._marks
    stamp = state._stamp + 1
    state._stamp = stamp
    colors = state.colors
    for u in state.graph.adj[v]:
        marks[colors[u]] = stamp
    state.scanned += len(state.graph.adj[v])
    c = 1
    while marks[c] == stamp:
        c += 1
    return c


def _grundy_repair(state: UnboundedState, seeds) -> None:
    """FIFO repair: seeds in the given order, neighbors re-enqueued."""
    queue = state._queue
    queue.clear()
    queued = state._queued
    stamp = state._qstamp + 1
    state._qstamp = stamp
    for v in seeds:
        queued[v] = stamp
        queue.append(v)
    head = 0
    colors = state.colors
    adj = state.graph.adj
    while head < len(queue):
        v = queue[head]
        head += 1
        queued[v] = 0
        mfc = _min_free(state, v)
        if colors[v] != mfc:
            _recolor(state, v, mfc)
            for u in adj[v]:
                if queued[u] != stamp:
                    queued[u] = stamp
                    queue.append(u)


def _repair_after_mutation(state: UnboundedState) -> None:
    """Drop colors freed up by the mutation.

    A swap can leave a vertex beside the swapped region with a smaller free
    color; recoloring it downward is what lets an operator shrink the
    palette.  Only vertices colored 3 or higher take part: colors 1 and 2
    are the ground layer, and rewriting them here would let a single swap
    at a high-degree vertex collapse whole two-colored subtrees, silently
    solving instances that the selection rule is supposed to keep hard.
    Mutations preserve properness, so every move is a decrease.
    """
    touched = {v for v, _ in state.log}
    seeds = set(touched)
    adj = state.graph.adj
    for v in touched:
        seeds.update(adj[v])
    queue = state._queue
    queue.clear()
    queued = state._queued
    stamp = state._qstamp + 1
    state._qstamp = stamp
    for v in sorted(seeds):
        queued[v] = stamp
        queue.append(v)
    head = 0
    colors = state.colors
    while head < len(queue):
        v = queue[head]
        head += 1
        queued[v] = 0
        if colors[v] < 3:
            continue
        mfc = _min_free(state, v)
        if mfc < colors[v]:
            _recolor(state, v, mfc)
            for u in adj[v]:
                if queued[u] != stamp:
                    queued[u] = stamp
                    queue.append(u)


def _apply_kempe(state: UnboundedState, v: int, j: int) -> None:
    colors = state.colors
    i = colors[v]
    if j == i:
        return
    comp = _component_over(state.graph, colors, v, i, j)
    state.scanned += len(comp)
    for u in comp:
        _recolor(state, u, j if colors[u] == i else i)


def _apply_elimination(state: UnboundedState, v: int, i: int, j: int) -> None:
    colors = state.colors
    g = state.graph
    targets = [u for u in g.adj[v] if colors[u] == i]
    state.scanned += len(g.adj[v])
    visited = state._marks  # reuse the stamp array over vertex ids
    stamp = state._stamp + 1
    state._stamp = stamp
    for u in targets:
        if visited[u] == stamp:
            continue
        comp = _component_over(g, colors, u, i, j)
        state.scanned += len(comp)
        for w in comp:
            visited[w] = stamp
            _recolor(state, w, j if colors[w] == i else i)


def _ordered_distinct_pair(rng, hi: int) -> tuple[int, int]:
    """Uniform ordered pair of distinct colors from 1..hi (hi >= 2)."""
    i = rng.randrange(1, hi + 1)
    j = rng.randrange(1, hi)
    if j >= i:
        j += 1
    return i, j


def _selection_sign(state: UnboundedState, conflicts_before: int) -> int:
    """compare(offspring, parent): negative = better, 0 = equivalent."""
    after = state.conflicts.edge_count
    if after != conflicts_before:
        return -1 if after < conflicts_before else 1
    first_old: dict[int, int] = {}
    for v, old in state.log:
        if v not in first_old:
            first_old[v] = old
    top = 0
    sign = 0
    colors = state.colors
    delta: dict[int, int] = {}
    for v, old in first_old.items():
        nc = colors[v]
        if nc != old:
            delta[old] = delta.get(old, 0) - 1
            delta[nc] = delta.get(nc, 0) + 1
    for color, d in delta.items():
        if d != 0 and color > top:
            top = color
            sign = -1 if d < 0 else 1
    return sign


def ils_step(
    state: UnboundedState,
    operator: str = "kempe",
    targeted: bool = False,
    accept_rule: str = "greedy",
) -> bool:
    """One mutate/repair/select cycle; returns True when accepted.

    accept_rule "greedy" keeps better-or-equivalent offspring (the real
    algorithm); "inverted" keeps worse-or-equivalent offspring and exists
    only as a fault-injection hook for the invariant suites.
    """
    rng = state.rng
    adj = state.graph.adj
    conflicts_before = state.conflicts.edge_count
    state.touched += 1
    if targeted:
        bucket = state.buckets[state.occ.max_color]
        if not bucket:
            raise NoMaxColorVertexError("no vertex carries the maximum color")
        w = bucket[rng.randrange(len(bucket))]
        if operator == "kempe":
            deg_w = len(adj[w])
            if deg_w:
                u = adj[w][rng.randrange(deg_w)]
                j = rng.randrange(1, len(adj[u]) + 2)
                _apply_kempe(state, u, j)
        elif operator == "elim":
            cw = state.colors[w]
            if cw >= 3:
                i, j = _ordered_distinct_pair(rng, cw - 1)
                _apply_elimination(state, w, i, j)
        else:
            raise ValueError(f"unknown operator {operator!r}")
    else:
        v = rng.randrange(state.graph.n)
        if operator == "kempe":
            j = rng.randrange(1, len(adj[v]) + 2)
            _apply_kempe(state, v, j)
        elif operator == "elim":
            cv = state.colors[v]
            if cv >= 3:
                i, j = _ordered_distinct_pair(rng, cv - 1)
                _apply_elimination(state, v, i, j)
        else:
            raise ValueError(f"unknown operator {operator!r}")
    if not state.log:
        state.iteration += 1
        return True  # no-op mutation: offspring equals parent
    _repair_after_mutation(state)
    sign = _selection_sign(state, conflicts_before)
    accepted = sign <= 0 if accept_rule == "greedy" else sign >= 0
    if accepted:
        state.log.clear()
    else:
        _rollback(state)
    state.iteration += 1
    return accepted


UNBOUNDED_ALGORITHMS = {
    "ils_kempe": ("kempe", False),
    "ils_elim": ("elim", False),
    "ils_kempe_targeted": ("kempe", True),
    "ils_elim_targeted": ("elim", True),
}


def run_unbounded(
    algorithm: str,
    graph: Graph,
    coloring: Coloring,
    stop: StopRule,
    rng,
    checkpoint=None,
    checkpoint_every: int = 100_000,
    accept_rule: str = "greedy",
    on_iteration=None,
) -> RunResult:
    """Run ILS until proper-and-within-target or the budget runs out.

    The mandatory Grundy repair precedes iteration 1 and is not counted.
    Success needs at most target_conflicts conflicting edges and, when
    target_colors is set, max color <= target_colors; it is evaluated
    before the first iteration.
    """
    try:
        operator, targeted = UNBOUNDED_ALGORITHMS[algorithm]
    except KeyError:
        raise ValueError(f"unknown unbounded algorithm {algorithm!r}") from None
    state = UnboundedState(graph, coloring, rng)
    _grundy_repair(state, range(graph.n))
    state.log.clear()
    target_conf = stop.target_conflicts
    target_col = stop.target_colors
    budget = stop.budget
    cs = state.conflicts
    occ = state.occ
    work_max = 0

    def solved():
        return cs.edge_count <= target_conf and (
            target_col is None or occ.max_color <= target_col
        )

    while not solved() and state.iteration < budget:
        before = state.touched + state.scanned
        ils_step(state, operator, targeted, accept_rule)
        w = state.touched + state.scanned - before
        if w > work_max:
            work_max = w
        if on_iteration is not None:
            on_iteration(state)
        if checkpoint is not None and state.iteration % checkpoint_every == 0:
            checkpoint(state)
    return RunResult(
        iterations=state.iteration,
        censored=not solved(),
        final_conflicts=cs.edge_count,
        final_max_color=occ.max_color,
        touched=state.touched,
        scanned=state.scanned,
        iter_work_max=work_max,
        colors=list(state.colors),
    )
