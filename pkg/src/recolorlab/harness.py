"""Experiment harness: config parsing, seeded runs, CSV, medians, fits.

Determinism contract: a config plus a master seed fully determines the
CSV bytes. Each run gets its own generator seeded by the first 8 bytes
(big-endian) of sha256("{master}|{scenario}|{algorithm}|{n}|{T}|{trial}"),
so runs are reproducible in isolation and independent of execution
order; parallel workers return records that are emitted in the fixed
(scenario, n, T, algorithm, trial) order.

Wall-clock time is recorded only when timing is requested; it defaults
to 0 so that repeated runs produce byte-identical CSV files.
"""

import configparser
import csv
import hashlib
import math
import random
import statistics
import time
from dataclasses import dataclass

from .bounded import BOUNDED_ALGORITHMS, run_bounded
from .common import StopRule
from .graph import Coloring
from .instances import ConfigInvalidError
from .oracles import recount_all
from .scenarios import SCENARIO_TARGETS, ScenarioSpec, apply_scenario
from .unbounded import UNBOUNDED_ALGORITHMS, run_unbounded

CSV_HEADER = (
    "scenario,algorithm,n,T,seed,iterations,censored,wall_ns,"
    "final_conflicts,final_max_color"
)

RNG_NAME = "mt19937"  # random.Random; recorded for provenance, not in the CSV


class DegenerateInputError(ValueError):
    pass


class ValidationFailedError(RuntimeError):
    """A run reported success but the final coloring failed the recount."""


@dataclass
class RunRecord:
    scenario: str
    algorithm: str
    n: int
    T: int
    seed: int
    iterations: int
    censored: bool
    wall_ns: int
    final_conflicts: int
    final_max_color: int
    # extra provenance, not part of the pinned CSV schema
    touched: int = 0
    scanned: int = 0
    iter_work_max: int = 0
    rng_name: str = RNG_NAME

    def csv_row(self) -> str:
        return (
            f"{self.scenario},{self.algorithm},{self.n},{self.T},{self.seed},"
            f"{self.iterations},{int(self.censored)},{self.wall_ns},"
            f"{self.final_conflicts},{self.final_max_color}"
        )


def derive_seed(master: int, scenario: str, algorithm: str, n: int, t: int, trial: int) -> int:
    key = f"{master}|{scenario}|{algorithm}|{n}|{t}|{trial}".encode()
    return int.from_bytes(hashlib.sha256(key).digest()[:8], "big")


def default_budget(algorithm: str, n: int) -> int:
    if algorithm in BOUNDED_ALGORITHMS:
        return min(10**9 // max(n, 1), 10**8)
    return 10**7  # open palette scenarios can be exponential; censor


@dataclass
class ExperimentConfig:
    name: str
    master_seed: int
    kind: str
    n_values: list[int]
    t_values: list[int]
    algorithms: list[str]
    trials: int
    budget: int | None = None
    palette: int | None = None
    target_colors: int | None = None
    edge_prob: float = 0.1
    rows: int | None = None
    cols: int | None = None
    timing: bool = False

    def __post_init__(self):
        if self.trials < 0:
            raise ConfigInvalidError(f"negative trials {self.trials}")
        known = set(BOUNDED_ALGORITHMS) | set(UNBOUNDED_ALGORITHMS)
        for a in self.algorithms:
            if a not in known:
                raise ConfigInvalidError(f"unknown algorithm {a!r}")
        if self.kind not in SCENARIO_TARGETS:
            raise ConfigInvalidError(f"unknown scenario {self.kind!r}")
        if not self.n_values or not self.t_values:
            raise ConfigInvalidError("need at least one n and one T value")


def _parse_int_list(raw: str) -> list[int]:
    return [int(tok) for tok in raw.replace(",", " ").split()]


def load_config(path: str) -> ExperimentConfig:
    """Read an experiment config from an INI file.

    Sections: [experiment] name, seed; [scenario] kind, n, T, and the
    optional edge_prob/rows/cols knobs; [run] algorithms, trials, and the
    optional budget/palette/target_colors/timing overrides.
    """
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ConfigInvalidError(f"cannot read config {path!r}")
    try:
        exp = parser["experiment"]
        scen = parser["scenario"]
        run = parser["run"]
    except KeyError as missing:
        raise ConfigInvalidError(f"missing config section {missing}") from None
    try:
        return ExperimentConfig(
            name=exp.get("name", "experiment"),
            master_seed=exp.getint("seed", 0),
            kind=scen["kind"],
            n_values=_parse_int_list(scen.get("n", "0")),
            t_values=_parse_int_list(scen.get("T", "1")),
            algorithms=run["algorithms"].replace(",", " ").split(),
            trials=run.getint("trials"),
            budget=run.getint("budget", fallback=None),
            palette=run.getint("palette", fallback=None),
            target_colors=run.getint("target_colors", fallback=None),
            edge_prob=scen.getfloat("edge_prob", 0.1),
            rows=scen.getint("rows", fallback=None),
            cols=scen.getint("cols", fallback=None),
            timing=run.getboolean("timing", False),
        )
    except (KeyError, ValueError) as bad:
        raise ConfigInvalidError(f"bad config value: {bad}") from None


def _run_descriptors(config: ExperimentConfig):
    for n in config.n_values:
        for t in config.t_values:
            for algorithm in config.algorithms:
                for trial in range(config.trials):
                    yield (config, n, t, algorithm, trial)


def execute_run(args) -> RunRecord:
    """One seeded scenario + algorithm run; a top-level picklable worker."""
    config, n, t, algorithm, trial = args
    seed = derive_seed(config.master_seed, config.kind, algorithm, n, t, trial)
    rng = random.Random(seed)
    spec = ScenarioSpec(
        config.kind,
        n=n,
        T=t,
        edge_prob=config.edge_prob,
        rows=config.rows,
        cols=config.cols,
    )
    prep, _ = apply_scenario(spec, rng)
    g, coloring = prep.graph, prep.coloring
    target = (
        config.target_colors
        if config.target_colors is not None
        else SCENARIO_TARGETS[config.kind]
    )
    budget = config.budget if config.budget is not None else default_budget(algorithm, g.n)
    started = time.perf_counter_ns() if config.timing else 0
    if algorithm in BOUNDED_ALGORITHMS:
        k = config.palette if config.palette is not None else target
        res = run_bounded(algorithm, g, Coloring(coloring.colors, k), k, StopRule(budget), rng)
    else:
        res = run_unbounded(
            algorithm, g, coloring, StopRule(budget, target_colors=target), rng
        )
    wall = time.perf_counter_ns() - started if config.timing else 0
    if not res.censored:
        conflicts, _, _ = recount_all(g, res.colors)
        colors_ok = algorithm in BOUNDED_ALGORITHMS or max(res.colors) <= target
        if conflicts != 0 or not colors_ok:
            raise ValidationFailedError(
                f"{config.kind}/{algorithm} n={g.n} seed={seed}: "
                f"success recount gave {conflicts} conflicts, "
                f"max color {max(res.colors)}"
            )
    return RunRecord(
        scenario=config.kind,
        algorithm=algorithm,
        n=g.n,
        T=t,
        seed=seed,
        iterations=res.iterations,
        censored=res.censored,
        wall_ns=wall,
        final_conflicts=res.final_conflicts,
        final_max_color=res.final_max_color,
        touched=res.touched,
        scanned=res.scanned,
        iter_work_max=res.iter_work_max,
    )


def run_experiment(
    config: ExperimentConfig, out_path: str | None = None, parallel: int = 1
) -> list[RunRecord]:
    """Run every (n, T, algorithm, trial) combination in a fixed order.

    Records stream to ``out_path`` as they arrive. Workers only change
    who computes a record, never its content or position, so parallel
    and serial runs emit identical files.
    """
    descriptors = list(_run_descriptors(config))
    out = open(out_path, "w") if out_path else None
    records = []
    try:
        if out:
            out.write(CSV_HEADER + "\n")
        if parallel > 1 and descriptors:
            from multiprocessing import Pool

            with Pool(parallel) as pool:
                for rec in pool.imap(execute_run, descriptors, chunksize=1):
                    records.append(rec)
                    if out:
                        out.write(rec.csv_row() + "\n")
        else:
            for args in descriptors:
                rec = execute_run(args)
                records.append(rec)
                if out:
                    out.write(rec.csv_row() + "\n")
    finally:
        if out:
            out.close()
    return records


# ---------------------------------------------------------------------------
# statistics


@dataclass
class GroupSummary:
    scenario: str
    algorithm: str
    n: int
    T: int
    runs: int
    censored: int
    median_iterations: float  # censored runs enter at their budget value
    mean_iterations: float


@dataclass
class ScalingFit:
    points: list[tuple[float, float]]
    exponent: float
    r2: float


def summarize(records: list[RunRecord]) -> list[GroupSummary]:
    """Per-(scenario, algorithm, n, T) medians, means, censoring counts.

    Censored runs participate at their budget value rather than being
    dropped, so heavy-tailed groups stay visibly heavy.
    """
    groups: dict[tuple, list[RunRecord]] = {}
    for rec in records:
        groups.setdefault((rec.scenario, rec.algorithm, rec.n, rec.T), []).append(rec)
    out = []
    for (scenario, algorithm, n, t), recs in sorted(groups.items()):
        iters = [r.iterations for r in recs]
        out.append(
            GroupSummary(
                scenario=scenario,
                algorithm=algorithm,
                n=n,
                T=t,
                runs=len(recs),
                censored=sum(r.censored for r in recs),
                median_iterations=statistics.median(iters),
                mean_iterations=statistics.fmean(iters),
            )
        )
    return out


def fit_exponent(points) -> ScalingFit:
    """Least-squares slope of log(median) against log(x).

    Needs at least 3 points with positive coordinates. When the y-values
    are all identical the fit is exact and r2 is reported as 1.0.
    """
    pts = [(float(x), float(y)) for x, y in points]
    if len(pts) < 3:
        raise DegenerateInputError(f"need >= 3 points, got {len(pts)}")
    if any(x <= 0 or y <= 0 for x, y in pts):
        raise DegenerateInputError("log-log fit needs positive values")
    xs = [math.log(x) for x, _ in pts]
    ys = [math.log(y) for _, y in pts]
    mx = sum(xs) / len(xs)
    my = sum(ys) / len(ys)
    sxx = sum((x - mx) ** 2 for x in xs)
    if sxx == 0:
        raise DegenerateInputError("all x values identical")
    slope = sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sxx
    intercept = my - slope * mx
    ss_res = sum((y - (slope * x + intercept)) ** 2 for x, y in zip(xs, ys))
    ss_tot = sum((y - my) ** 2 for y in ys)
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return ScalingFit(points=pts, exponent=slope, r2=r2)


def fit_from_records(records: list[RunRecord], x_axis: str) -> dict[tuple, ScalingFit]:
    """One fit per (scenario, algorithm): median iterations against n or T."""
    if x_axis not in ("n", "T"):
        raise DegenerateInputError(f"x axis must be 'n' or 'T', got {x_axis!r}")
    fits = {}
    summaries = summarize(records)
    groups: dict[tuple, list[GroupSummary]] = {}
    for s in summaries:
        groups.setdefault((s.scenario, s.algorithm), []).append(s)
    for key, rows in sorted(groups.items()):
        pts = [
            (row.n if x_axis == "n" else row.T, row.median_iterations) for row in rows
        ]
        fits[key] = fit_exponent(pts)
    return fits


def read_records_csv(path: str) -> list[RunRecord]:
    """Load a harness CSV (schema-checked) back into records."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != CSV_HEADER.split(","):
            raise ConfigInvalidError(f"unexpected CSV header {header!r}")
        records = []
        for row in reader:
            records.append(
                RunRecord(
                    scenario=row[0],
                    algorithm=row[1],
                    n=int(row[2]),
                    T=int(row[3]),
                    seed=int(row[4]),
                    iterations=int(row[5]),
                    censored=bool(int(row[6])),
                    wall_ns=int(row[7]),
                    final_conflicts=int(row[8]),
                    final_max_color=int(row[9]),
                )
            )
    return records
