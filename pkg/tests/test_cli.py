import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ellqa.cli import evaluate, main
from ellqa.config import ConfigError, SuiteConfig, load_config, parse_config_text
from ellqa.report import CheckReport, rng_for
from ellqa.runner import emit_report, load_reports, registry, render_json, run_suites


class TestConfig:
    def test_flags_only(self):
        cfg = load_config(None, {"q": 0.5, "r": 4.0, "c": 1.0})
        assert cfg.tol is None and cfg.n_samples == 50 and cfg.selected[0] == "qseries"

    def test_q_out_of_range(self):
        with pytest.raises(ConfigError, match="q: must lie in"):
            load_config(None, {"q": 1.2})

    def test_file_then_flag(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("# sample\nq = 0.4\ntol = 1e-6\nsuites = qseries, rmatrix\n")
        cfg = load_config(path, {"tol": 1e-8})
        assert cfg.q == 0.4 and cfg.tol == 1e-8
        assert cfg.selected == ("qseries", "rmatrix")
        assert cfg.to_dict()["tol"] == 1e-8

    def test_bad_line_reports_location(self):
        with pytest.raises(ConfigError, match="<config>:2"):
            parse_config_text("q = 0.5\nnonsense\n")

    def test_unknown_key(self):
        with pytest.raises(ConfigError, match="unknown key"):
            parse_config_text("qq = 0.5")

    def test_r_must_exceed_c(self):
        with pytest.raises(ConfigError):
            SuiteConfig(r=1.0, c=1.0)

    def test_unknown_suite(self):
        with pytest.raises(ConfigError):
            SuiteConfig(suites=("bogus",))


class TestRunner:
    def test_registry_unique(self):
        names = [c.name for c in registry()]
        assert len(names) == len(set(names)) == 81

    def test_qseries_only(self):
        reps = run_suites(SuiteConfig(suites=("qseries",), n_samples=10))
        assert {r.name.split(":")[0] for r in reps} == {"qseries"}
        assert len(reps) == 3

    def test_seed_changes_residuals_not_flags(self):
        names = ["rmatrix.2x2_blocks", "identities:riemann", "qseries:bracket_laws"]
        a = run_suites(SuiteConfig(seed=0, n_samples=10), names)
        b = run_suites(SuiteConfig(seed=7, n_samples=10), names)
        assert [r.passed for r in a] == [r.passed for r in b]
        assert any(x.max_residual != y.max_residual for x, y in zip(a, b))

    def test_empty_json(self):
        body = json.loads(render_json(SuiteConfig(), []))
        assert body["reports"] == []

    def test_roundtrip(self):
        reps = run_suites(SuiteConfig(n_samples=5), ["rmatrix.2x2_blocks", "relation:elliptic:E-E"])
        back = load_reports(render_json(SuiteConfig(n_samples=5), reps))
        assert [r.to_dict() for r in back] == [r.to_dict() for r in reps]

    def test_emit_to_file(self, tmp_path):
        reps = run_suites(SuiteConfig(n_samples=5), ["rmatrix.rbar_permutation"])
        out = tmp_path / "r.txt"
        emit_report(SuiteConfig(), reps, "text", out)
        assert out.read_text().startswith("PASS rmatrix.rbar_permutation")

    def test_global_tol_override(self):
        (rep,) = run_suites(SuiteConfig(tol=1e-30, n_samples=5), ["rmatrix.2x2_blocks"])
        assert rep.tolerance == 1e-30 and not rep.passed

    def test_errored_check_marked(self, monkeypatch):
        from ellqa import runner

        def boom(*a, **k):
            raise ValueError("bad")

        monkeypatch.setattr(runner.rmatrix, "check_rbar_permutation", boom)
        (rep,) = run_suites(SuiteConfig(), ["rmatrix.rbar_permutation"])
        assert rep.errored and not rep.passed and "bad" in rep.notes["error"]


class TestReport:
    def test_nonfinite_fails(self):
        assert not CheckReport("x", "a", {}, 1, float("nan"), 1.0).passed

    @given(st.integers(0, 2**31), st.text(min_size=1, max_size=20))
    @settings(max_examples=30, deadline=None)
    def test_rng_deterministic(self, seed, name):
        assert rng_for(seed, name).random() == rng_for(seed, name).random()


class TestMain:
    def test_list(self, capsys):
        assert main(["list", "--suite", "qseries"]) == 0
        assert capsys.readouterr().out.count("\n") == 3

    def test_run_pass(self, capsys):
        code = main(["run", "--check", "rmatrix.rbar_permutation", "--quiet"])
        assert code == 0
        assert capsys.readouterr().out.startswith("PASS")

    def test_run_fail_exit(self, capsys):
        code = main(["run", "--check", "qseries:bracket_laws", "--format", "json", "--quiet"])
        body = json.loads(capsys.readouterr().out)
        assert code == 1 and body["reports"][0]["passed"] is False

    def test_bad_parameter(self, capsys):
        assert main(["run", "--q", "1.2"]) == 2
        assert "q: must lie in" in capsys.readouterr().err

    def test_eval(self, capsys):
        assert main(["eval", "--fn", "chi", "--u", "0"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert abs(out["value"][0] + 1) < 1e-14

    def test_evaluate_bracket_from_z(self, ctx):
        from ellqa.context import BracketKind
        from ellqa.qseries import bracket

        assert abs(evaluate("bracket", ctx, z=0.5**0.6) - bracket(0.3, BracketKind.PLAIN, ctx)) < 1e-14

    def test_eval_needs_argument(self, capsys):
        assert main(["eval", "--fn", "rho"]) == 2

    def test_json_bytes_identical(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        args = ["run", "--suite", "rmatrix", "--samples", "5", "--format", "json", "--quiet", "--out"]
        main(args + [str(a)])
        main(args + [str(b)])
        assert a.read_bytes() == b.read_bytes()
