"""Machine-checked invariant suites with injected-fault twins.

Each suite runs `budget` cases of one structural property and reports
violations with the first counterexample serialized. The *-fault suites
run the same property against a deliberately broken twin (corrupted
selection, operator, or repair) and are expected to produce violations;
they exist to prove the real suites can catch a broken implementation.

Properties checked:

- conflict-tracking / occurrence-tracking: incremental bookkeeping
  equals a from-scratch recount after arbitrary step sequences
- operator-max-color-step: on a Grundy coloring with max degree D, one
  Kempe chain or color elimination adds at most one D-colored vertex
- top-color-monotone: an ILS iteration never increases the number of
  vertices colored D or D+1
- repair-recolor-budget: repairing after a T-edge batch moves at most T
  vertices to a higher color
- grundy-postcondition: repair output is a Grundy coloring (any policy)
- operator-feasibility: operators keep proper colorings proper
"""

import random
from dataclasses import dataclass

from .graph import Coloring, ColorOccurrenceVector, ConflictSet, Graph, build_graph, count_conflicts
from .instances import greedy_coloring
from .oracles import is_grundy, recount_all
from .scenarios import ScenarioSpec, prepare_scenario, apply_batch
from .unbounded import (
    UnboundedState,
    _grundy_repair,
    color_elimination,
    grundy_local_search,
    ils_step,
    kempe_chain,
)

DEFAULT_BUDGETS = {
    "conflict-tracking": 2000,
    "occurrence-tracking": 2000,
    "operator-max-color-step": 5000,
    "operator-max-color-step-fault": 200,
    "top-color-monotone": 4000,
    "top-color-monotone-fault": 2000,
    "repair-recolor-budget": 300,
    "repair-recolor-budget-fault": 50,
    "grundy-postcondition": 1000,
    "operator-feasibility": 200,
}


class UnknownSuiteError(LookupError):
    pass


@dataclass
class SuiteReport:
    suite: str
    cases: int
    violations: int
    first_counterexample: str | None
    expects_violation: bool

    @property
    def vacuous(self) -> bool:
        return self.cases == 0

    @property
    def passed(self) -> bool:
        if self.vacuous:
            return True
        if self.expects_violation:
            return self.violations >= 1
        return self.violations == 0

    def describe(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        note = " (0 cases executed — vacuous)" if self.vacuous else ""
        expected = " (violations expected)" if self.expects_violation else ""
        return (
            f"{status} {self.suite}: {self.violations} violations "
            f"over {self.cases} cases{expected}{note}"
        )


def _dump_case(g: Graph, colors, note: str) -> str:
    edges = " ".join(f"{u}-{v}" for u, v in g.edges())
    return f"{note} | n={g.n} edges=[{edges}] colors={list(colors)}"


def _random_graph(rng, n, p=0.35) -> Graph:
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return build_graph(n, edges)


class _Tally:
    """Case/violation accumulator that keeps the first counterexample."""

    def __init__(self, budget: int):
        self.budget = budget
        self.cases = 0
        self.violations = 0
        self.first = None

    def exhausted(self) -> bool:
        return self.cases >= self.budget

    def record(self, ok: bool, counterexample) -> None:
        self.cases += 1
        if not ok:
            self.violations += 1
            if self.first is None:
                self.first = counterexample() if callable(counterexample) else counterexample


# ---------------------------------------------------------------------------
# bookkeeping suites


def _suite_conflict_tracking(tally: _Tally, rng) -> None:
    while not tally.exhausted():
        g = _random_graph(rng, rng.randrange(3, 14))
        colors = [rng.randint(1, 4) for _ in range(g.n)]
        cs = ConflictSet(g, colors)
        for _ in range(min(40, tally.budget - tally.cases)):
            v = rng.randrange(g.n)
            old = colors[v]
            colors[v] = rng.randint(1, 4)
            cs.update_after_recolor(g, colors, v, old)
            conf, _, _ = recount_all(g, colors)
            members = set(cs.member_list())
            expect = {
                u
                for u in range(g.n)
                if any(colors[w] == colors[u] for w in g.adj[u])
            }
            ok = cs.edge_count == conf and members == expect
            tally.record(ok, lambda: _dump_case(g, colors, "conflict bookkeeping"))
            if tally.exhausted():
                return


def _suite_occurrence_tracking(tally: _Tally, rng) -> None:
    while not tally.exhausted():
        g = _random_graph(rng, rng.randrange(3, 14))
        state = UnboundedState(g, Coloring(greedy_coloring(g)), rng)
        for _ in range(min(60, tally.budget - tally.cases)):
            op = "kempe" if rng.random() < 0.5 else "elim"
            ils_step(state, operator=op, targeted=rng.random() < 0.5)
            conf, occ, _ = recount_all(g, state.colors)
            ok = (
                state.conflicts.edge_count == conf
                and all(state.occ.count(c) == k for c, k in occ.items())
                and state.occ.max_color == max(state.colors)
                and all(
                    state.colors[v] == c
                    for c, bucket in enumerate(state.buckets)
                    for v in bucket
                )
            )
            tally.record(ok, lambda: _dump_case(g, state.colors, "occurrence bookkeeping"))
            if tally.exhausted():
                return


# ---------------------------------------------------------------------------
# single-operation max-color suites


def _grundy_instance(rng, lo=3, hi=12):
    g = _random_graph(rng, rng.randrange(lo, hi))
    base, _ = grundy_local_search(g, [rng.randint(1, g.n) for _ in range(g.n)])
    return g, base


def _suite_operator_max_color(tally: _Tally, rng) -> None:
    while not tally.exhausted():
        g, base = _grundy_instance(rng)
        delta = g.max_degree
        before = sum(1 for c in base.colors if c == delta)
        for v in range(g.n):
            for j in range(1, len(g.adj[v]) + 2):
                after, _ = kempe_chain(g, base, v, j)
                gained = sum(1 for c in after.colors if c == delta) - before
                tally.record(
                    gained <= 1,
                    lambda: _dump_case(g, base.colors, f"kempe v={v} j={j} gained {gained}"),
                )
                if tally.exhausted():
                    return
            cv = base.colors[v]
            for i in range(1, cv):
                for j in range(1, cv):
                    if i == j:
                        continue
                    after = color_elimination(g, base, v, i, j)
                    gained = sum(1 for c in after.colors if c == delta) - before
                    tally.record(
                        gained <= 1,
                        lambda: _dump_case(
                            g, base.colors, f"elimination v={v} i={i} j={j} gained {gained}"
                        ),
                    )
                    if tally.exhausted():
                        return


def _swap_everywhere(colors, i, j):
    """Corrupted operator: swaps i and j globally instead of within one
    connected component."""
    return [j if c == i else i if c == j else c for c in colors]


def _suite_operator_max_color_fault(tally: _Tally, rng) -> None:
    # two disjoint 3-paths colored 1,2,1: the global swap turns four
    # 1-colored vertices into 2s at once, exceeding the +1 bound
    g = build_graph(6, [(0, 1), (1, 2), (3, 4), (4, 5)])
    base = [1, 2, 1, 1, 2, 1]
    delta = g.max_degree
    while not tally.exhausted():
        before = sum(1 for c in base if c == delta)
        after = _swap_everywhere(base, 1, 2)
        gained = sum(1 for c in after if c == delta) - before
        tally.record(
            gained <= 1, lambda: _dump_case(g, base, f"global swap gained {gained}")
        )


# ---------------------------------------------------------------------------
# ILS monotonicity suites


def _monotone_instances(rng):
    specs = [
        ScenarioSpec("bipartite_random", n=24, T=3, edge_prob=0.12),
        ScenarioSpec("tree_root_edge", n=31),
        ScenarioSpec("star_leaf", n=21, T=4),
        ScenarioSpec("planar_grid", n=25, T=3),
    ]
    out = []
    for spec in specs:
        prep = prepare_scenario(spec, rng)
        apply_batch(prep.graph, prep.coloring, prep.batch)
        out.append((prep.graph, prep.coloring))
    return out


def _run_monotone(tally: _Tally, rng, accept_rule: str) -> None:
    instances = _monotone_instances(rng)
    algorithms = [("kempe", False), ("elim", False), ("kempe", True), ("elim", True)]
    while not tally.exhausted():
        for g, coloring in instances:
            for operator, targeted in algorithms:
                state = UnboundedState(g, coloring, rng)
                _grundy_repair(state, range(g.n))
                state.log.clear()
                delta = g.max_degree
                span = min(120, tally.budget - tally.cases)
                top = state.occ.count(delta) + state.occ.count(delta + 1)
                for _ in range(span):
                    ils_step(state, operator=operator, targeted=targeted, accept_rule=accept_rule)
                    now = state.occ.count(delta) + state.occ.count(delta + 1)
                    tally.record(
                        now <= top,
                        lambda: _dump_case(
                            g,
                            state.colors,
                            f"{operator} targeted={targeted} top-colored {top} -> {now}",
                        ),
                    )
                    top = now
                    if tally.exhausted():
                        return


def _suite_top_color_monotone(tally: _Tally, rng) -> None:
    _run_monotone(tally, rng, "greedy")


def _suite_top_color_monotone_fault(tally: _Tally, rng) -> None:
    # corrupted selection prefers worse-or-equal offspring; on an odd
    # alternating path any whole-path Kempe swap adds a top-colored vertex
    # and the corrupted rule accepts it
    while not tally.exhausted():
        n = 9
        g = build_graph(n, [(i, i + 1) for i in range(n - 1)])
        state = UnboundedState(g, Coloring([1 + i % 2 for i in range(n)]), rng)
        delta = g.max_degree
        top = state.occ.count(delta) + state.occ.count(delta + 1)
        # short episodes: the corrupted walk saturates the top colors fast,
        # so fresh starts keep it in the violating regime
        for _ in range(min(20, tally.budget - tally.cases)):
            ils_step(state, operator="kempe", accept_rule="inverted")
            now = state.occ.count(delta) + state.occ.count(delta + 1)
            tally.record(
                now <= top,
                lambda: _dump_case(g, state.colors, f"top-colored {top} -> {now}"),
            )
            top = now
            if tally.exhausted():
                return


# ---------------------------------------------------------------------------
# repair suites


def _repair_scenarios(rng):
    return [
        ScenarioSpec("bipartite_random", n=26, T=1 + rng.randrange(4), edge_prob=0.1),
        ScenarioSpec("bipartite_batch", n=30, T=1 + rng.randrange(5)),
        ScenarioSpec("star_leaf", n=17, T=1 + rng.randrange(3)),
        ScenarioSpec("path_join", n=20),
        ScenarioSpec("tree_root_edge", n=15),
    ]


def _suite_repair_recolor_budget(tally: _Tally, rng) -> None:
    while not tally.exhausted():
        for spec in _repair_scenarios(rng):
            prep = prepare_scenario(spec, rng)
            g, coloring = prep.graph, prep.coloring
            base, _ = grundy_local_search(g, coloring)  # normalize singletons
            apply_batch(g, Coloring(list(base.colors)), prep.batch)
            after, _ = grundy_local_search(g, base.colors)
            ups = sum(a > b for b, a in zip(base.colors, after.colors))
            tally.record(
                ups <= len(prep.batch),
                lambda: _dump_case(
                    g, base.colors, f"{spec.kind}: {ups} raised colors for T={len(prep.batch)}"
                ),
            )
            if tally.exhausted():
                return


def _bumped_repair(g: Graph, colors):
    """Corrupted repair: single pass assigning min-free-color + 1."""
    out = list(colors)
    for v in range(g.n):
        used = {out[u] for u in g.adj[v]}
        mfc = 1
        while mfc in used:
            mfc += 1
        out[v] = mfc + 1
    return out


def _suite_repair_recolor_budget_fault(tally: _Tally, rng) -> None:
    while not tally.exhausted():
        spec = ScenarioSpec("path_join", n=12)
        prep = prepare_scenario(spec, rng)
        g, coloring = prep.graph, prep.coloring
        base, _ = grundy_local_search(g, coloring)
        apply_batch(g, Coloring(list(base.colors)), prep.batch)
        after = _bumped_repair(g, base.colors)
        ups = sum(a > b for b, a in zip(base.colors, after))
        tally.record(
            ups <= len(prep.batch),
            lambda: _dump_case(g, base.colors, f"bumped repair raised {ups} colors"),
        )


def _suite_grundy_postcondition(tally: _Tally, rng) -> None:
    while not tally.exhausted():
        g = _random_graph(rng, rng.randrange(2, 16))
        colors = [rng.randint(1, g.n) for _ in range(g.n)]
        policy = "fifo" if rng.random() < 0.5 else "fifo_desc"
        after, _ = grundy_local_search(g, colors, policy=policy)
        ok = count_conflicts(g, after) == 0 and is_grundy(g, after.colors)
        tally.record(ok, lambda: _dump_case(g, after.colors, f"policy={policy}"))


def _suite_operator_feasibility(tally: _Tally, rng) -> None:
    while not tally.exhausted():
        g = _random_graph(rng, rng.randrange(2, 13), p=0.4)
        order = list(range(g.n))
        rng.shuffle(order)
        base = Coloring(greedy_coloring(g, order=order))
        ok = True
        note = "feasible"
        for v in range(g.n):
            for j in range(1, len(g.adj[v]) + 2):
                after, _ = kempe_chain(g, base, v, j)
                if count_conflicts(g, after) != 0:
                    ok, note = False, f"kempe v={v} j={j} broke properness"
                    break
            cv = base.colors[v]
            for i in range(1, cv):
                for j in range(1, cv):
                    if i != j and count_conflicts(g, color_elimination(g, base, v, i, j)):
                        ok, note = False, f"elimination v={v} {i}->{j} broke properness"
            if not ok:
                break
        tally.record(ok, lambda: _dump_case(g, base.colors, note))


SUITES = {
    "conflict-tracking": (_suite_conflict_tracking, False),
    "occurrence-tracking": (_suite_occurrence_tracking, False),
    "operator-max-color-step": (_suite_operator_max_color, False),
    "operator-max-color-step-fault": (_suite_operator_max_color_fault, True),
    "top-color-monotone": (_suite_top_color_monotone, False),
    "top-color-monotone-fault": (_suite_top_color_monotone_fault, True),
    "repair-recolor-budget": (_suite_repair_recolor_budget, False),
    "repair-recolor-budget-fault": (_suite_repair_recolor_budget_fault, True),
    "grundy-postcondition": (_suite_grundy_postcondition, False),
    "operator-feasibility": (_suite_operator_feasibility, False),
}


def run_suite(suite: str, budget: int | None = None, seed: int = 0) -> SuiteReport:
    """Execute one registered suite for `budget` cases."""
    try:
        fn, expects = SUITES[suite]
    except KeyError:
        raise UnknownSuiteError(
            f"unknown suite {suite!r}; known: {', '.join(sorted(SUITES))}"
        ) from None
    if budget is None:
        budget = DEFAULT_BUDGETS[suite]
    if budget < 0:
        raise ValueError(f"negative budget {budget}")
    tally = _Tally(budget)
    if budget > 0:
        fn(tally, random.Random(seed))
    return SuiteReport(
        suite=suite,
        cases=tally.cases,
        violations=tally.violations,
        first_counterexample=tally.first,
        expects_violation=expects,
    )
