"""Search heuristics over a fixed palette 1..k, driven by conflict counts.

Four steppers share one state object:

- rls_step: recolor one uniform vertex with a uniform different color
- ea_step: standard-bit-mutation analogue; every vertex independently
  mutates with probability 1/n
- targeted_rls_step: the mutated vertex is a uniform conflicting vertex
  with probability 1/2, otherwise uniform over all vertices
- targeted_ea_step: conflicting vertices mutate with probability 1/2
  each, the others with probability 1/n

A step is accepted when it does not increase the number of conflicting
edges. Every step counts as one iteration, accepted or not.
"""

from .common import RunResult, StopRule
from .graph import Coloring, ConflictSet, Graph


class BoundedState:
    """Mutable run state: coloring, conflict bookkeeping, work counters."""

    __slots__ = (
        "graph",
        "colors",
        "k",
        "conflicts",
        "rng",
        "iteration",
        "touched",
        "scanned",
        "_binom_cdf",
    )

    def __init__(self, graph: Graph, coloring: Coloring, k: int, rng):
        if k < 2:
            raise ValueError(f"palette must have at least 2 colors, got {k}")
        coloring = Coloring(coloring.colors, k)
        coloring.validate(graph)
        self.graph = graph
        self.colors = list(coloring.colors)
        self.k = k
        self.conflicts = ConflictSet(graph, self.colors)
        self.rng = rng
        self.iteration = 0
        self.touched = 0
        self.scanned = 0
        self._binom_cdf: list[float] | None = None

    def coloring(self) -> Coloring:
        return Coloring(self.colors, self.k)


def _binomial_cdf_table(n: int) -> list[float]:
    """Cumulative Binomial(n, 1/n) probabilities, truncated near mass 1."""
    p = 1.0 / n
    prob = (1.0 - p) ** n
    cdf = [prob]
    m = 0
    while cdf[-1] < 1.0 - 1e-15 and m < n:
        prob *= (n - m) / ((m + 1) * (n - 1)) if n > 1 else 0.0
        m += 1
        cdf.append(cdf[-1] + prob)
    cdf[-1] = 1.0  # absorb truncated tail
    return cdf


def sample_mutation_count(state: BoundedState) -> int:
    """Draw how many vertices mutate: Binomial(n, 1/n) by inverse CDF."""
    if state._binom_cdf is None:
        state._binom_cdf = _binomial_cdf_table(state.graph.n)
    u = state.rng.random()
    for m, acc in enumerate(state._binom_cdf):
        if u <= acc:
            return m
    return len(state._binom_cdf) - 1


def _different_color(rng, current: int, k: int) -> int:
    if k == 2:
        return 3 - current
    c = rng.randrange(1, k)
    return c if c < current else c + 1


def _recolor(state: BoundedState, v: int, new: int) -> None:
    colors = state.colors
    old = colors[v]
    colors[v] = new
    state.conflicts.update_after_recolor(state.graph, colors, v, old)
    state.touched += 1
    state.scanned += len(state.graph.adj[v])


def _single_flip_delta(state: BoundedState, v: int, new: int) -> int:
    """Conflict-edge change if v were recolored to ``new``."""
    colors = state.colors
    old = colors[v]
    delta = 0
    for u in state.graph.adj[v]:
        cu = colors[u]
        if cu == old:
            delta -= 1
        elif cu == new:
            delta += 1
    state.scanned += len(state.graph.adj[v])
    return delta


def _try_single_flip(state: BoundedState, v: int) -> bool:
    state.touched += 1
    new = _different_color(state.rng, state.colors[v], state.k)
    if _single_flip_delta(state, v, new) <= 0:
        _recolor(state, v, new)
        state.iteration += 1
        return True
    state.iteration += 1
    return False


def rls_step(state: BoundedState) -> bool:
    """One local step: uniform vertex, uniform different color."""
    return _try_single_flip(state, state.rng.randrange(state.graph.n))


def targeted_rls_step(state: BoundedState) -> bool:
    """Half the time the vertex is a uniform conflicting vertex.

    With an empty conflict set both branches collapse to the uniform
    choice over all vertices.
    """
    rng = state.rng
    cs = state.conflicts
    if cs.size > 0 and rng.random() < 0.5:
        v = cs.members[rng.randrange(cs.size)]
    else:
        v = rng.randrange(state.graph.n)
    return _try_single_flip(state, v)


def _offspring_delta(state: BoundedState, news: dict) -> int:
    """Conflict-edge change for a simultaneous multi-vertex recoloring."""
    colors = state.colors
    adj = state.graph.adj
    delta = 0
    scanned = 0
    for v, nv in news.items():
        cv = colors[v]
        scanned += len(adj[v])
        for u in adj[v]:
            cu = colors[u]
            nu = news.get(u)
            if nu is not None:
                if u < v:
                    continue  # each mutated-mutated edge counted once
                delta += (nv == nu) - (cv == cu)
            else:
                delta += (nv == cu) - (cv == cu)
    state.scanned += scanned
    return delta


def _apply_offspring(state: BoundedState, news: dict) -> None:
    for v, nv in news.items():
        _recolor(state, v, nv)


def ea_step(state: BoundedState) -> bool:
    """Every vertex mutates independently with probability 1/n.

    Realized as a Binomial(n, 1/n) count plus a uniform distinct sample,
    which induces exactly the product-Bernoulli law.
    """
    rng = state.rng
    m = sample_mutation_count(state)
    if m == 0:
        state.iteration += 1
        return True  # offspring equals parent, trivially accepted
    n = state.graph.n
    verts = rng.sample(range(n), m)
    state.touched += m
    colors = state.colors
    k = state.k
    news = {v: _different_color(rng, colors[v], k) for v in verts}
    if _offspring_delta(state, news) <= 0:
        _apply_offspring(state, news)
        state.iteration += 1
        return True
    state.iteration += 1
    return False


def targeted_ea_step(state: BoundedState) -> bool:
    """Conflicting vertices mutate with probability 1/2, others with 1/n.

    The 1/n phase reuses the binomial scheme over all vertices and drops
    picks that hit conflicting vertices (they already had their coin),
    leaving the exact product law.
    """
    rng = state.rng
    cs = state.conflicts
    colors = state.colors
    k = state.k
    news = {}
    for i in range(cs.size):
        if rng.random() < 0.5:
            v = cs.members[i]
            news[v] = _different_color(rng, colors[v], k)
    m = sample_mutation_count(state)
    if m:
        counts = cs.counts
        for v in rng.sample(range(state.graph.n), m):
            if counts[v] == 0:
                news[v] = _different_color(rng, colors[v], k)
    if not news:
        state.iteration += 1
        return True
    state.touched += len(news)
    if _offspring_delta(state, news) <= 0:
        _apply_offspring(state, news)
        state.iteration += 1
        return True
    state.iteration += 1
    return False


BOUNDED_ALGORITHMS = {
    "rls": rls_step,
    "ea": ea_step,
    "rls_targeted": targeted_rls_step,
    "ea_targeted": targeted_ea_step,
}


def run_bounded(
    algorithm: str,
    graph: Graph,
    coloring: Coloring,
    k: int,
    stop: StopRule,
    rng,
    checkpoint=None,
    checkpoint_every: int = 100_000,
) -> RunResult:
    """Run a bounded-palette stepper until the stop rule fires.

    Success means at most ``stop.target_conflicts`` conflicting edges; it
    is checked before the first iteration, so a solved instance costs 0.
    ``checkpoint(state)`` is invoked every ``checkpoint_every`` iterations.
    """
    try:
        step = BOUNDED_ALGORITHMS[algorithm]
    except KeyError:
        raise ValueError(f"unknown bounded algorithm {algorithm!r}") from None
    state = BoundedState(graph, coloring, k, rng)
    target = stop.target_conflicts
    budget = stop.budget
    cs = state.conflicts
    work_max = 0
    while cs.edge_count > target and state.iteration < budget:
        before = state.touched + state.scanned
        step(state)
        w = state.touched + state.scanned - before
        if w > work_max:
            work_max = w
        if checkpoint is not None and state.iteration % checkpoint_every == 0:
            checkpoint(state)
    return RunResult(
        iterations=state.iteration,
        censored=cs.edge_count > target,
        final_conflicts=cs.edge_count,
        final_max_color=max(state.colors),
        touched=state.touched,
        scanned=state.scanned,
        iter_work_max=work_max,
        colors=list(state.colors),
    )
