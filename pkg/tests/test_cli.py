import json

from thuekit.cli import main, run
from thuekit.schemas.cli import ExitCode
from thuekit.schemas.paper import Lemma, SuiteResult
from thuekit.services.verification import VerificationService


def test_version(runner):
    result = runner.invoke(main, ["--version"])
    assert result.exit_code == 0
    assert "0.1.0" in result.output


def test_nf(runner):
    result = runner.invoke(main, ["nf", "--system", "S", "bbc"])
    assert result.exit_code == 0
    assert result.output.splitlines() == ["a^3 c a^2", "steps 3"]


def test_reduce_prints_steps(runner):
    result = runner.invoke(main, ["reduce", "--system", "S", "bbc"])
    lines = result.output.splitlines()
    assert result.exit_code == 0
    assert lines[0] == "b^2 c"
    assert lines[-1] == "steps 3"
    assert lines[-2].endswith("-> a^3 c a^2")


def test_nf_json(runner):
    result = runner.invoke(main, ["--json", "nf", "--system", "S", "bbc"])
    payload = json.loads(result.output)
    assert payload["schema"] == 1
    assert payload["normal_form"] == "a^3 c a^2"
    assert payload["steps"] == 3


def test_bad_symbol_is_usage_error(runner):
    result = runner.invoke(main, ["nf", "--system", "S", "xyz"])
    assert result.exit_code == ExitCode.USAGE


def test_step_budget_is_failure(runner):
    result = runner.invoke(main, ["reduce", "--system", "S", "--max-steps", "1", "bbc"])
    assert result.exit_code == ExitCode.FAILED


def test_equal(runner):
    assert runner.invoke(main, ["equal", "a^3 c a c", "0"]).output.strip() == "equal"
    result = runner.invoke(main, ["equal", "a", "b"])
    assert result.output.strip() == "not-equal"
    assert result.exit_code == ExitCode.FAILED


def test_redexes(runner):
    result = runner.invoke(main, ["redexes", "--system", "S", "bbc"])
    assert result.exit_code == 0
    assert result.output.splitlines() == ["BC@1 forward -> b a c a"]


def test_critical_pairs(runner):
    result = runner.invoke(main, ["critical-pairs", "--system", "U", "--max-param", "2"])
    assert result.exit_code == 0
    assert result.output.splitlines()[-1].endswith(", 0 unresolved")

    result = runner.invoke(main, ["critical-pairs", "--system", "R", "--max-param", "0"])
    assert result.exit_code == ExitCode.FAILED
    assert "UNRESOLVED" in result.output


def test_dehn_distance(runner):
    result = runner.invoke(main, ["dehn-distance", "--system", "R", "acc", "0"])
    assert result.exit_code == 0
    assert result.output.splitlines() == ["1 exact"]


def test_dehn_distance_not_found(runner):
    result = runner.invoke(main, ["dehn-distance", "--length-cap", "4", "--dist-cap", "3", "a", "b"])
    assert result.exit_code == ExitCode.FAILED
    assert result.output.startswith("- ")


def test_dehn_profile_csv(runner, tmp_path):
    path = tmp_path / "profile.csv"
    result = runner.invoke(main, ["dehn-profile", "--system", "T", "--max-n", "3", "--csv", str(path)])
    assert result.exit_code == 0
    assert result.output.splitlines()[0] == "0 0 exact"
    assert path.read_text(encoding="utf-8").startswith("n,D(n)")


def test_verify_paper(runner):
    result = runner.invoke(main, ["--seed", "0", "verify-paper", "--lemma", "f"])
    assert result.exit_code == 0
    assert result.output.startswith("PASS f")


def test_verify_paper_needs_a_lemma(runner):
    result = runner.invoke(main, ["verify-paper"])
    assert result.exit_code == ExitCode.USAGE


def test_derive(runner):
    result = runner.invoke(main, ["derive", "acac", "1"])
    assert result.exit_code == 0
    lines = result.output.splitlines()
    assert lines[0] == "a^3 c a c"
    assert lines[-1] == "steps 4"

    assert runner.invoke(main, ["derive", "bac", "x"]).exit_code == ExitCode.USAGE


def test_f(runner):
    result = runner.invoke(main, ["f", "1", "1"])
    assert result.output.strip() == "9"
    assert runner.invoke(main, ["f", "--", "-1"]).exit_code == ExitCode.USAGE


def test_xsection_check_refutes_r_irreducibles(runner, r_irreducibles_file):
    result = runner.invoke(main, ["xsection", "check", str(r_irreducibles_file), "--horizon", "6"])
    assert result.exit_code == ExitCode.FAILED
    assert result.output.startswith("refuted")
    assert "duplicate: 0 ~ a^3 c a c" in result.output


def test_xsection_pump(runner, r_irreducibles_file):
    result = runner.invoke(main, ["xsection", "pump", str(r_irreducibles_file), "--Q", "1"])
    assert result.exit_code == ExitCode.FAILED
    assert result.output.startswith("violation: a^7 c a^2 c a c ~ a^8 c a^2 c a c")


def test_system_file(runner, tmp_path):
    path = tmp_path / "swap.txt"
    path.write_text("alphabet: a b\nSWAP: ab -> ba\n", encoding="utf-8")
    result = runner.invoke(main, ["nf", "--system-file", str(path), "abab"])
    assert result.output.splitlines()[0] == "b^2 a^2"


def test_run_captures_output():
    result = run(["nf", "--system", "S", "bbc"])
    assert result.exit_code == ExitCode.OK
    assert result.stdout == ["a^3 c a^2", "steps 3"]


def test_run_reports_failures():
    assert run(["equal", "a", "b"]).exit_code == ExitCode.FAILED
    assert run(["verify-paper"]).exit_code == ExitCode.USAGE


def test_run_records_csv_path(tmp_path):
    path = tmp_path / "p.csv"
    result = run(["dehn-profile", "--system", "T", "--max-n", "2", "--csv", str(path)])
    assert result.csv_path == str(path)


def test_random_reduce_is_seeded():
    argv = ["--seed", "5", "reduce", "--system", "S", "--strategy", "random", "bbbcc"]
    assert run(argv).stdout == run(argv).stdout


def test_verify_paper_all_runs_every_suite(runner, monkeypatch):
    seen = []

    def fake_suite(lemma, seed=None, full=False):
        seen.append((lemma, seed, full))
        return SuiteResult(lemma=lemma, passed=True, checked=1)

    monkeypatch.setattr(VerificationService, "run_suite", staticmethod(fake_suite))
    result = runner.invoke(main, ["verify-paper", "--all", "--full", "--seed", "42"])
    assert result.exit_code == 0
    assert [lemma for lemma, _, _ in seen] == list(Lemma)
    assert all(seed == 42 and full for _, seed, full in seen)
    assert "PASS monotonicity checked=1" in result.output.splitlines()


def test_command_seed_matches_global_seed():
    argv = ["reduce", "--system", "S", "--strategy", "random", "bbbcc"]
    assert run([*argv, "--seed", "5"]).stdout == run(["--seed", "5", *argv]).stdout


def test_verify_paper_help_names_acceptance_run(runner):
    result = runner.invoke(main, ["verify-paper", "--help"])
    assert "verify-paper --all --full --seed 42" in result.output
