"""Harness: seeding, CSV schema, determinism, summaries, fits, CLI."""

import random

import pytest

from recolorlab.cli import main
from recolorlab.harness import (
    CSV_HEADER,
    DegenerateInputError,
    ExperimentConfig,
    RunRecord,
    default_budget,
    derive_seed,
    fit_exponent,
    fit_from_records,
    load_config,
    read_records_csv,
    run_experiment,
    summarize,
)
from recolorlab.instances import ConfigInvalidError
from recolorlab.verify import run_suite


def small_config(**overrides):
    base = dict(
        name="smoke",
        master_seed=7,
        kind="path_join",
        n_values=[8, 16],
        t_values=[1],
        algorithms=["rls"],
        trials=3,
    )
    base.update(overrides)
    return ExperimentConfig(**base)


def write_config(tmp_path, body):
    path = tmp_path / "exp.ini"
    path.write_text(body)
    return str(path)


SMOKE_INI = """
[experiment]
name = smoke
seed = 99

[scenario]
kind = path_join
n = 8 16

[run]
algorithms = rls
trials = 2
"""


class TestSeeding:
    def test_derived_seed_is_stable(self):
        # pinned: changing this value silently breaks reproducibility of
        # published CSVs
        assert derive_seed(0, "path_join", "rls", 16, 1, 0) == 7727298898434669872

    def test_distinct_across_every_field(self):
        base = derive_seed(5, "path_join", "rls", 16, 1, 0)
        assert derive_seed(6, "path_join", "rls", 16, 1, 0) != base
        assert derive_seed(5, "star_root", "rls", 16, 1, 0) != base
        assert derive_seed(5, "path_join", "ea", 16, 1, 0) != base
        assert derive_seed(5, "path_join", "rls", 32, 1, 0) != base
        assert derive_seed(5, "path_join", "rls", 16, 2, 0) != base
        assert derive_seed(5, "path_join", "rls", 16, 1, 1) != base


class TestCsvSchema:
    def test_header_is_pinned(self):
        assert CSV_HEADER == (
            "scenario,algorithm,n,T,seed,iterations,censored,wall_ns,"
            "final_conflicts,final_max_color"
        )

    def test_row_fields_align_with_header(self):
        rec = RunRecord(
            scenario="path_join",
            algorithm="rls",
            n=16,
            T=1,
            seed=42,
            iterations=100,
            censored=False,
            wall_ns=0,
            final_conflicts=0,
            final_max_color=2,
        )
        assert rec.csv_row() == "path_join,rls,16,1,42,100,0,0,0,2"
        assert len(rec.csv_row().split(",")) == len(CSV_HEADER.split(","))

    def test_roundtrip_through_file(self, tmp_path):
        config = small_config()
        out = tmp_path / "runs.csv"
        records = run_experiment(config, out_path=str(out))
        loaded = read_records_csv(str(out))
        assert [(r.scenario, r.n, r.seed, r.iterations) for r in loaded] == [
            (r.scenario, r.n, r.seed, r.iterations) for r in records
        ]

    def test_rejects_foreign_header(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("a,b,c\n1,2,3\n")
        with pytest.raises(ConfigInvalidError):
            read_records_csv(str(bad))


class TestRunExperiment:
    def test_zero_trials_gives_empty_list(self):
        assert run_experiment(small_config(trials=0)) == []

    def test_deterministic_csv_bytes(self, tmp_path):
        config = small_config()
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        run_experiment(config, out_path=str(a))
        run_experiment(small_config(), out_path=str(b))
        assert a.read_bytes() == b.read_bytes()

    def test_parallel_matches_serial(self, tmp_path):
        a, b = tmp_path / "serial.csv", tmp_path / "par.csv"
        run_experiment(small_config(), out_path=str(a), parallel=1)
        run_experiment(small_config(), out_path=str(b), parallel=2)
        assert a.read_bytes() == b.read_bytes()

    def test_wall_ns_zero_unless_timing_requested(self):
        records = run_experiment(small_config())
        assert all(r.wall_ns == 0 for r in records)
        timed = run_experiment(small_config(timing=True))
        assert any(r.wall_ns > 0 for r in timed)

    def test_success_runs_finish_proper(self):
        for rec in run_experiment(small_config()):
            if not rec.censored:
                assert rec.final_conflicts == 0

    def test_censoring_pins_iterations_to_budget(self):
        # one color cannot be reached on a graph with edges: every run
        # must exhaust the budget
        config = small_config(
            kind="star_root",
            n_values=[13],
            algorithms=["ils_kempe"],
            budget=25,
            trials=4,
            target_colors=1,
        )
        records = run_experiment(config)
        assert all(r.censored and r.iterations == 25 for r in records)

    def test_unknown_algorithm_rejected(self):
        with pytest.raises(ConfigInvalidError):
            small_config(algorithms=["tabu"])

    def test_unknown_scenario_rejected(self):
        with pytest.raises(ConfigInvalidError):
            small_config(kind="torus")

    def test_default_budgets(self):
        assert default_budget("rls", 100) == 10**7
        assert default_budget("rls", 5) == 10**8
        assert default_budget("ils_kempe", 100) == 10**7


class TestConfigFile:
    def test_load_smoke_config(self, tmp_path):
        config = load_config(write_config(tmp_path, SMOKE_INI))
        assert config.name == "smoke"
        assert config.master_seed == 99
        assert config.kind == "path_join"
        assert config.n_values == [8, 16]
        assert config.t_values == [1]
        assert config.algorithms == ["rls"]
        assert config.trials == 2
        assert config.budget is None and config.timing is False

    def test_missing_section(self, tmp_path):
        with pytest.raises(ConfigInvalidError):
            load_config(write_config(tmp_path, "[experiment]\nname = x\n"))

    def test_missing_file(self):
        with pytest.raises(ConfigInvalidError):
            load_config("/nonexistent/exp.ini")

    def test_comma_separated_lists(self, tmp_path):
        body = SMOKE_INI.replace("n = 8 16", "n = 8, 16").replace(
            "algorithms = rls", "algorithms = rls, ea"
        )
        config = load_config(write_config(tmp_path, body))
        assert config.n_values == [8, 16]
        assert config.algorithms == ["rls", "ea"]


class TestSummaries:
    def make(self, iterations, censored=False, **kw):
        fields = dict(
            scenario="s",
            algorithm="a",
            n=8,
            T=1,
            seed=0,
            iterations=iterations,
            censored=censored,
            wall_ns=0,
            final_conflicts=0,
            final_max_color=2,
        )
        fields.update(kw)
        return RunRecord(**fields)

    def test_median_and_mean(self):
        records = [self.make(x) for x in (10, 30, 20)]
        (s,) = summarize(records)
        assert s.median_iterations == 20
        assert s.mean_iterations == 20
        assert s.runs == 3 and s.censored == 0

    def test_censored_runs_enter_at_budget(self):
        records = [self.make(10), self.make(100, censored=True), self.make(20)]
        (s,) = summarize(records)
        assert s.median_iterations == 20
        assert s.censored == 1

    def test_groups_split_by_n(self):
        records = [self.make(10), self.make(10, n=16)]
        assert len(summarize(records)) == 2


class TestFits:
    def test_square_law(self):
        fit = fit_exponent([(2, 4), (4, 16), (8, 64)])
        assert fit.exponent == pytest.approx(2.0, abs=1e-12)
        assert fit.r2 == pytest.approx(1.0, abs=1e-12)

    def test_linear_law(self):
        fit = fit_exponent([(2, 2), (4, 4), (8, 8)])
        assert fit.exponent == pytest.approx(1.0, abs=1e-12)

    def test_constant_medians(self):
        fit = fit_exponent([(2, 5), (4, 5), (8, 5)])
        assert fit.exponent == pytest.approx(0.0, abs=1e-12)
        assert fit.r2 == 1.0  # exact fit of a flat line

    def test_too_few_points(self):
        with pytest.raises(DegenerateInputError):
            fit_exponent([(2, 4), (4, 16)])

    def test_non_positive_values(self):
        with pytest.raises(DegenerateInputError):
            fit_exponent([(2, 0), (4, 16), (8, 64)])

    def test_identical_x(self):
        with pytest.raises(DegenerateInputError):
            fit_exponent([(2, 4), (2, 5), (2, 6)])

    def test_fit_from_records_grouping(self):
        rng = random.Random(0)
        records = []
        for n in (8, 16, 32):
            for _ in range(5):
                records.append(
                    RunRecord(
                        scenario="s",
                        algorithm="a",
                        n=n,
                        T=1,
                        seed=rng.getrandbits(32),
                        iterations=n * n,
                        censored=False,
                        wall_ns=0,
                        final_conflicts=0,
                        final_max_color=2,
                    )
                )
        fits = fit_from_records(records, "n")
        assert fits[("s", "a")].exponent == pytest.approx(2.0, abs=1e-9)

    def test_fit_axis_validated(self):
        with pytest.raises(DegenerateInputError):
            fit_from_records([], "k")


class TestVerifyReports:
    def test_zero_budget_is_vacuous(self):
        report = run_suite("operator-feasibility", budget=0)
        assert report.vacuous and report.passed
        assert "0 cases" in report.describe()

    def test_unknown_suite(self):
        from recolorlab.verify import UnknownSuiteError

        with pytest.raises(UnknownSuiteError):
            run_suite("nonexistent")

    def test_fault_suite_passes_by_violating(self):
        report = run_suite("top-color-monotone-fault", budget=60)
        assert report.expects_violation
        assert report.violations >= 1
        assert report.passed
        assert report.first_counterexample is not None


class TestCli:
    def test_run_and_fit(self, tmp_path, capsys):
        config = write_config(tmp_path, SMOKE_INI)
        out = tmp_path / "cli.csv"
        assert main(["run", config, "--out", str(out)]) == 0
        text = out.read_text().splitlines()
        assert text[0] == CSV_HEADER
        assert len(text) == 1 + 2 * 2  # header + n-sweep * trials
        capsys.readouterr()
        # a 2-point sweep cannot be fitted; extend via a second run file
        records = read_records_csv(str(out))
        assert all(not r.censored for r in records)

    def test_fit_command_output(self, tmp_path, capsys):
        out = tmp_path / "fit.csv"
        run_experiment(
            small_config(n_values=[8, 16, 32], trials=3), out_path=str(out)
        )
        assert main(["fit", str(out), "--x", "n"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "scenario,algorithm,exponent,r2,points"
        scenario, algorithm, exponent, r2, pts = lines[1].split(",")
        assert (scenario, algorithm, pts) == ("path_join", "rls", "3")
        assert 1.0 < float(exponent) < 5.0

    def test_verify_exit_codes(self, capsys):
        assert main(["verify", "operator-feasibility", "--budget", "5"]) == 0
        capsys.readouterr()

    def test_oracle_ehrenfest(self, capsys):
        assert main(["oracle", "ehrenfest", "--N", "8"]) == 0
        out = capsys.readouterr().out
        assert "return_time_state_1=32" in out

    def test_oracle_rejects_odd(self, capsys):
        assert main(["oracle", "ehrenfest", "--N", "7"]) == 2

    def test_seed_override_changes_output(self, tmp_path):
        config = write_config(tmp_path, SMOKE_INI)
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        main(["run", config, "--out", str(a)])
        main(["run", config, "--out", str(b), "--seed", "123"])
        assert a.read_text() != b.read_text()
