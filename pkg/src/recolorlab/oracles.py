"""Independent reference checks used to validate the fast implementations.

Everything here favors obviousness over speed: from-scratch recounts,
exhaustive enumeration with hard size caps, and exact rational arithmetic
for the urn-model hitting times.
"""

from dataclasses import dataclass
from fractions import Fraction

from .graph import Graph, IncompatibleSizeError, _color_list


class TooLargeError(ValueError):
    pass


class NotTreeInstanceError(ValueError):
    pass


class SingularSystemError(ValueError):
    pass


def recount_all(g: Graph, c) -> tuple[int, dict[int, int], bool]:
    """From-scratch (conflict count, color occurrence map, is-Grundy flag).

    A coloring is Grundy when it is proper and every vertex carries the
    minimum color absent from its neighborhood.
    """
    colors = _color_list(c)
    if len(colors) != g.n:
        raise IncompatibleSizeError(
            f"coloring has {len(colors)} entries for {g.n} vertices"
        )
    conflicts = 0
    occurrence: dict[int, int] = {}
    grundy = True
    for u in range(g.n):
        cu = colors[u]
        occurrence[cu] = occurrence.get(cu, 0) + 1
        seen = set()
        for v in g.adj[u]:
            cv = colors[v]
            if cv == cu and v > u:
                conflicts += 1
            seen.add(cv)
        mfc = 1
        while mfc in seen:
            mfc += 1
        if cu != mfc:
            grundy = False
    return conflicts, occurrence, grundy


def is_grundy(g: Graph, c) -> bool:
    return recount_all(g, c)[2]


@dataclass
class BipartiteCheck:
    ok: bool
    coloring: list[int] | None  # 2-coloring with colors 1/2 when ok
    odd_cycle: list[int] | None  # vertex cycle witness when not ok


def is_bipartite(g: Graph) -> BipartiteCheck:
    """BFS 2-coloring in ascending start order, or an odd-cycle witness."""
    side = [0] * g.n  # 0 unvisited, else 1/2
    parent = [-1] * g.n
    for start in range(g.n):
        if side[start]:
            continue
        side[start] = 1
        queue = [start]
        head = 0
        while head < len(queue):
            u = queue[head]
            head += 1
            for v in g.adj[u]:
                if side[v] == 0:
                    side[v] = 3 - side[u]
                    parent[v] = u
                    queue.append(v)
                elif side[v] == side[u]:
                    # walk both endpoints up to their common ancestor
                    pu, pv = [u], [v]
                    seen = {u: 0}
                    x = u
                    while parent[x] != -1:
                        x = parent[x]
                        seen[x] = len(pu)
                        pu.append(x)
                    x = v
                    while x not in seen:
                        x = parent[x]
                        pv.append(x)
                    cycle = pu[: seen[pv[-1]]] + list(reversed(pv))
                    return BipartiteCheck(False, None, cycle)
    return BipartiteCheck(True, side, None)


def grundy_number_bruteforce(g: Graph, limit: int = 12) -> int:
    """Largest color used by any greedy (first-fit) coloring of g.

    Enumerates insertion orders depth-first, deduplicating on the partial
    color assignment so identical greedy prefixes are explored once.
    Exponential; refuses graphs larger than ``limit`` vertices.
    """
    n = g.n
    if n > limit:
        raise TooLargeError(f"{n} vertices exceeds the brute-force limit {limit}")
    adj = g.adj
    best = 0
    seen: set[frozenset] = set()
    colors: dict[int, int] = {}

    def rec(depth: int, current_max: int) -> None:
        nonlocal best
        key = frozenset(colors.items())
        if key in seen:
            return
        seen.add(key)
        if depth == n:
            if current_max > best:
                best = current_max
            return
        for v in range(n):
            if v not in colors:
                used = {colors[u] for u in adj[v] if u in colors}
                c = 1
                while c in used:
                    c += 1
                colors[v] = c
                rec(depth + 1, current_max if current_max >= c else c)
                del colors[v]

    rec(0, 0)
    return best


def _heap_depth(v: int) -> int:
    return (v + 1).bit_length() - 1


def check_complete_binary_tree(g: Graph) -> int:
    """Verify g is a complete binary tree in heap layout; return its height.

    Heap layout: root 0, children of i are 2i+1 and 2i+2.
    """
    n = g.n
    h = n.bit_length()
    if n != (1 << h) - 1 or n < 3:
        raise NotTreeInstanceError(f"{n} vertices is not 2^h - 1 with h >= 2")
    expected = set()
    for i in range(n):
        if 2 * i + 1 < n:
            expected.add((i, 2 * i + 1))
        if 2 * i + 2 < n:
            expected.add((i, 2 * i + 2))
    if set(g.edges()) != expected:
        raise NotTreeInstanceError("edges do not form the heap-layout tree")
    return h


def classify_tree_conflict(g: Graph, c) -> tuple[str, int | None]:
    """Classify a 2-coloring of a complete binary tree by its conflicts.

    Returns ("proper", None) for a proper coloring, ("conflict", d) when
    exactly one edge is conflicting and d is the depth of its parent
    endpoint, and ("other", None) for two or more conflicts.
    """
    check_complete_binary_tree(g)
    colors = _color_list(c)
    conflicts = [
        (u, v) for u, v in g.edges() if colors[u] == colors[v]
    ]
    if not conflicts:
        return ("proper", None)
    if len(conflicts) == 1:
        parent = conflicts[0][0]  # edges are (min, max); parent has smaller id
        return ("conflict", _heap_depth(parent))
    return ("other", None)


def _solve_exact(a: list[list[Fraction]], b: list[Fraction]) -> list[Fraction]:
    """Gaussian elimination over Fractions with partial (nonzero) pivoting."""
    m = len(a)
    aug = [row[:] + [b[i]] for i, row in enumerate(a)]
    for col in range(m):
        piv = next((r for r in range(col, m) if aug[r][col] != 0), None)
        if piv is None:
            raise SingularSystemError("singular hitting-time system")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = Fraction(1) / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(m):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [aug[r][m] for r in range(m)]


def _ehrenfest_check(n_balls: int, state: int) -> None:
    if n_balls < 2:
        raise ValueError(f"need at least 2 balls, got {n_balls}")
    if not 0 <= state <= n_balls:
        raise ValueError(f"state {state} outside 0..{n_balls}")


def ehrenfest_first_passage(n_balls: int, start: int, targets) -> Fraction:
    """Exact expected steps for the urn walk from ``start`` into ``targets``.

    The walk on {0..N} moves X -> X+1 with probability (N-X)/N and
    X -> X-1 with probability X/N (one of N balls picked uniformly swaps
    urns). Solved exactly over the rationals.
    """
    _ehrenfest_check(n_balls, start)
    target_set = set(targets)
    for t in target_set:
        _ehrenfest_check(n_balls, t)
    if start in target_set:
        return Fraction(0)
    transient = [s for s in range(n_balls + 1) if s not in target_set]
    index = {s: i for i, s in enumerate(transient)}
    m = len(transient)
    a = [[Fraction(0)] * m for _ in range(m)]
    b = [Fraction(1)] * m
    for i, s in enumerate(transient):
        a[i][i] = Fraction(1)
        up = Fraction(n_balls - s, n_balls)
        down = Fraction(s, n_balls)
        if up and (s + 1) not in target_set:
            a[i][index[s + 1]] -= up
        if down and (s - 1) not in target_set:
            a[i][index[s - 1]] -= down
    h = _solve_exact(a, b)
    return h[index[start]]


def ehrenfest_return_time(n_balls: int, state: int) -> Fraction:
    """Exact expected return time to ``state`` (first revisit after leaving).

    Convention: return = 1 + sum over neighbors s' of P(state, s') * h(s'),
    where h is the expected hitting time of ``state``.
    """
    _ehrenfest_check(n_balls, state)
    total = Fraction(1)
    up = Fraction(n_balls - state, n_balls)
    down = Fraction(state, n_balls)
    if up:
        total += up * ehrenfest_first_passage(n_balls, state + 1, (state,))
    if down:
        total += down * ehrenfest_first_passage(n_balls, state - 1, (state,))
    return total


def ehrenfest_conditioned_return(n_balls: int) -> Fraction:
    """Exact return time from state 1 to {1, N-1} through the interior.

    Conditions the first step on avoiding the boundary {0, N}: from state 1
    that forces the step into state 2 (cost 1), after which the walk runs
    unconditioned until it hits {1, N-1}; interior states cannot reach the
    boundary without passing a target first.
    """
    if n_balls < 4:
        raise ValueError(f"need at least 4 balls for an interior, got {n_balls}")
    return Fraction(1) + ehrenfest_first_passage(n_balls, 2, (1, n_balls - 1))
