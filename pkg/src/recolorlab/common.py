"""Shared run plumbing: stop rules and per-run results."""

from dataclasses import dataclass


@dataclass(frozen=True)
class StopRule:
    """When a run ends.

    budget: hard iteration cap (the run is censored when it is exhausted).
    target_conflicts: success needs at most this many conflicting edges.
    target_colors: unbounded runs additionally need max color <= this;
        None disables the color requirement (bounded runs ignore it).
    """

    budget: int
    target_conflicts: int = 0
    target_colors: int | None = None

    def __post_init__(self):
        if self.budget < 0:
            raise ValueError(f"negative budget {self.budget}")
        if self.target_conflicts < 0:
            raise ValueError(f"negative conflict target {self.target_conflicts}")


@dataclass
class RunResult:
    """Outcome of one run: iterations to success, or a censored budget run.

    iterations counts completed mutation+selection cycles; when censored
    it equals the budget. Work counters: touched is vertices sampled or
    recolored, scanned is adjacency entries read; iter_work_max is the
    largest touched+scanned total spent inside a single iteration.
    """

    iterations: int
    censored: bool
    final_conflicts: int
    final_max_color: int
    touched: int = 0
    scanned: int = 0
    iter_work_max: int = 0
    colors: list[int] | None = None  # final coloring, for re-validation

    @property
    def succeeded(self) -> bool:
        return not self.censored
