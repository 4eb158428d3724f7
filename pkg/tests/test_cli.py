"""Command harness: grids, suite runner, report format, determinism, eval."""

import json
import math
import subprocess
import sys
from fractions import Fraction

import pytest

from holobreak.cli import (
    ConfigError,
    SuiteConfig,
    main,
    parse_value,
    read_config_file,
    run_suite,
)
from holobreak.rc_transform import RCParams, c_ell
from holobreak.term_algebra import evaluate
from holobreak.rc_transform import psi_ktype_closed_form


def small_config(suite, **overrides):
    base = dict(
        suite=suite,
        lam1=(Fraction(2),),
        lam2=(Fraction(2),),
        lam=(Fraction(3),),
        n=(3,),
        ell_max=1,
        tol=1e-7,
        exact=False,
    )
    base.update(overrides)
    return SuiteConfig(**base)


def run_lines(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    lines = [json.loads(line) for line in out.splitlines() if line.strip()]
    return code, lines


# ---------------------------------------------------------------------------
# parameter parsing and configuration


def test_parse_value_tiers():
    assert parse_value("7/2") == Fraction(7, 2)
    assert isinstance(parse_value("7/2"), Fraction)
    assert parse_value("2") == Fraction(2)
    assert isinstance(parse_value("2"), Fraction)
    assert parse_value("2.5") == 2.5
    assert isinstance(parse_value("2.5"), float)
    assert parse_value("1e-3") == 1e-3


def test_parse_value_rejects_garbage():
    for bad in ("", "x", "1/0", "2..5"):
        with pytest.raises(ConfigError):
            parse_value(bad)


def test_suite_config_validation():
    with pytest.raises(ConfigError):
        small_config("no-such-suite")
    with pytest.raises(ConfigError):
        small_config("ortho-poly", tol=0.0)
    with pytest.raises(ConfigError):
        small_config("ortho-poly", ell_max=-1)
    with pytest.raises(ConfigError):
        small_config("ortho-poly", radius=-1.0)


def test_config_file_parsing(tmp_path):
    path = tmp_path / "cfg.txt"
    path.write_text("lambda1 = 2,5/2\nell-max = 3  # inline comment\n\ntol=1e-6\n")
    vals = read_config_file(str(path))
    assert vals == {"lambda1": "2,5/2", "ell_max": "3", "tol": "1e-6"}


def test_config_file_rejects_unknown_key(tmp_path):
    path = tmp_path / "cfg.txt"
    path.write_text("wavelength = 7\n")
    with pytest.raises(ConfigError):
        read_config_file(str(path))


# ---------------------------------------------------------------------------
# suite runner


def test_ortho_poly_suite_passes():
    cfg = small_config(
        "ortho-poly",
        lam1=(Fraction(1), Fraction(2)),
        lam2=(Fraction(3, 2),),
        ell_max=3,
        tol=1e-10,
    )
    report = run_suite(cfg)
    assert report.failed_count == 0
    assert all(r["pass"] for r in report.records)


def test_records_sorted_by_case_key():
    cfg = small_config("ortho-poly", ell_max=2)
    report = run_suite(cfg)
    keys = [r["case"] for r in report.records]
    assert keys == sorted(keys)
    assert len(set(keys)) == len(keys)


def test_record_fields_complete():
    cfg = small_config("ortho-poly", ell_max=0)
    report = run_suite(cfg)
    for r in report.records:
        for key in ("suite", "case", "params", "computed", "reference",
                    "abs_err", "rel_err", "pass", "ms"):
            assert key in r
        assert r["suite"] == "ortho-poly"


def test_summary_counts_consistent():
    cfg = small_config("kernels", lam1=(Fraction(2),), lam2=(Fraction(2),), ell_max=1)
    report = run_suite(cfg)
    summary = report.summary()
    assert summary["cases"] == len(report.records)
    assert summary["passed"] + summary["failed"] == summary["cases"]
    assert summary["passed"] == sum(1 for r in report.records if r["pass"])


def test_rc_identities_exact_suite():
    cfg = small_config("rc-identities", exact=True, ell_max=2)
    report = run_suite(cfg)
    assert report.mode == "exact"
    assert report.failed_count == 0


def test_rc_identities_float_suite():
    cfg = small_config(
        "rc-identities", lam1=(2.2,), lam2=(2.0,), ell_max=2, tol=1e-9
    )
    report = run_suite(cfg)
    assert report.mode == "float"
    assert report.failed_count == 0


def test_rc_plancherel_matches_constant():
    cfg = small_config("rc-plancherel", ell_max=1)
    report = run_suite(cfg)
    assert report.failed_count == 0
    by_ell = {r["params"]["ell"]: r for r in report.records}
    assert abs(by_ell[0]["computed"] - float(c_ell(2, 2, 0))) < 1e-7


def test_bernstein_sato_suite_exact():
    cfg = small_config(
        "bernstein-sato", n=(3, 4), lam=(Fraction(7, 2),), ell_max=3, exact=True
    )
    report = run_suite(cfg)
    assert report.failed_count == 0
    assert all(r["rel_err"] is None for r in report.records)
    assert all(r["abs_err"] == 0.0 for r in report.records)


def test_bernstein_sato_rejects_decimal_weights():
    cfg = small_config("bernstein-sato", lam=(3.5,))
    with pytest.raises(ConfigError):
        run_suite(cfg)


def test_juhl_suite_reports_outside_unitary_range():
    cfg = small_config("juhl-plancherel", lam=(Fraction(2),), ell_max=0)
    report = run_suite(cfg)
    assert report.failed_count == 0
    notes = [r.get("note", "") for r in report.records if "cone-isometry" in r["case"]]
    assert any("unitary range" in note for note in notes)


def test_juhl_suite_checks_isometry_in_range():
    cfg = small_config("juhl-plancherel", lam=(Fraction(3),), ell_max=1)
    report = run_suite(cfg)
    assert report.failed_count == 0
    checked = [
        r for r in report.records
        if "cone-isometry" in r["case"] and r["rel_err"] is not None
    ]
    assert checked
    assert all(r["rel_err"] < 1e-7 for r in checked)


def test_kernels_pole_collisions_reported_not_asserted():
    cfg = small_config("kernels", lam1=(Fraction(-1),), lam2=(Fraction(0),), ell_max=0)
    report = run_suite(cfg)
    assert report.failed_count == 0
    zero_class = [r for r in report.records if "zero-class" in r["case"]]
    assert zero_class
    assert all("reported only" in r.get("note", "") for r in zero_class)


def test_broken_case_becomes_failed_record():
    cfg = small_config("ortho-poly", lam1=(Fraction(-2),), lam2=(Fraction(1),), ell_max=0)
    report = run_suite(cfg)
    bad = [r for r in report.records if not r["pass"]]
    assert bad
    assert all("note" in r for r in bad)


# ---------------------------------------------------------------------------
# determinism


def test_repeat_runs_hash_identically():
    cfg = small_config("rc-identities", ell_max=1, lam1=(2.0,), lam2=(2.5,))
    first = run_suite(cfg)
    second = run_suite(cfg)
    strip = lambda rs: [{k: v for k, v in r.items() if k != "ms"} for r in rs]
    assert strip(first.records) == strip(second.records)
    assert first.content_hash() == second.content_hash()


def test_hash_ignores_wall_time():
    cfg = small_config("ortho-poly", ell_max=0)
    report = run_suite(cfg)
    before = report.content_hash()
    for r in report.records:
        r["ms"] = 424242.0
    assert report.content_hash() == before


# ---------------------------------------------------------------------------
# verify command: exit codes, files


def test_verify_bernstein_example_all_pass(capsys):
    code, lines = run_lines(
        capsys,
        ["verify", "bernstein-sato", "--n", "3", "--ell-max", "4",
         "--lambda", "7/2", "--exact"],
    )
    assert code == 0
    summary = lines[-1]
    assert summary["failed"] == 0
    assert summary["mode"] == "exact"
    assert summary["cases"] == 5


def test_verify_rc_identities_example_all_pass(capsys):
    code, lines = run_lines(
        capsys,
        ["verify", "rc-identities", "--lambda1", "2", "--lambda2", "2",
         "--ell-max", "4"],
    )
    assert code == 0
    assert lines[-1]["failed"] == 0


def test_verify_exit_one_on_failure(capsys):
    code, lines = run_lines(
        capsys,
        ["verify", "l2-plancherel", "--lambda", "3", "--ell-max", "0",
         "--tol", "1e-15"],
    )
    assert code == 1
    assert lines[-1]["failed"] >= 1


def test_verify_empty_grid_is_config_error(capsys):
    code = main(["verify", "ortho-poly", "--lambda1", ""])
    assert code == 2
    assert "empty parameter grid" in capsys.readouterr().err


def test_verify_unknown_suite_rejected():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "no-such-suite"])
    assert exc.value.code == 2


def test_slash_parameters_trigger_exact_mode(capsys):
    code, lines = run_lines(
        capsys,
        ["verify", "rc-identities", "--lambda1", "5/2", "--lambda2", "2",
         "--ell-max", "1"],
    )
    assert code == 0
    assert lines[-1]["mode"] == "exact"


def test_exact_flag_rejects_decimals(capsys):
    code = main(["verify", "rc-identities", "--exact", "--lambda1", "2.5"])
    assert code == 2
    assert "rational" in capsys.readouterr().err


def test_config_file_merge_and_override(tmp_path, capsys):
    path = tmp_path / "run.cfg"
    path.write_text("lambda1 = 2\nlambda2 = 2\nell-max = 0\nseed = 99\n")
    code, lines = run_lines(
        capsys,
        ["verify", "rc-identities", "--config", str(path), "--ell-max", "1"],
    )
    assert code == 0
    summary = lines[-1]
    assert summary["seed"] == 99
    ells = {r["params"]["ell"] for r in lines[:-1]}
    assert ells == {0, 1}


def test_report_and_csv_files(tmp_path, capsys):
    report_path = tmp_path / "out" / "kernels.jsonl"
    code = main(
        ["verify", "kernels", "--lambda1", "2", "--lambda2", "2", "--ell-max", "0",
         "--report", str(report_path), "--csv"]
    )
    capsys.readouterr()
    assert code == 0
    stored = [json.loads(line) for line in report_path.read_text().splitlines()]
    assert stored[-1].get("summary") is True
    assert len(stored) == stored[-1]["cases"] + 1
    csv_path = report_path.with_suffix(".csv")
    rows = csv_path.read_text().splitlines()
    assert rows[0].startswith("suite,case,params")
    assert len(rows) == stored[-1]["cases"] + 1


def test_csv_without_report_is_config_error(capsys):
    code = main(["verify", "kernels", "--csv", "--ell-max", "0"])
    assert code == 2
    assert "--report" in capsys.readouterr().err


def test_stdout_matches_report_file(tmp_path, capsys):
    report_path = tmp_path / "r.jsonl"
    code = main(
        ["verify", "ortho-poly", "--lambda1", "2", "--lambda2", "2",
         "--ell-max", "0", "--report", str(report_path)]
    )
    assert code == 0
    assert capsys.readouterr().out == report_path.read_text()


# ---------------------------------------------------------------------------
# eval command


def test_eval_named_constant(capsys):
    assert main(["eval", "c_ell", "2", "2", "0"]) == 0
    out = capsys.readouterr().out.strip()
    assert out.startswith("0.1666666")
    assert out.endswith("= 1/6")


def test_eval_constant_integer(capsys):
    assert main(["eval", "constant", "1"]) == 0
    assert capsys.readouterr().out.strip() == "1"


def test_eval_b_alias(capsys):
    assert main(["eval", "b", "3"]) == 0
    first = capsys.readouterr().out
    assert main(["eval", "b_const", "3"]) == 0
    assert capsys.readouterr().out == first
    assert abs(float(first) - math.pi / 2) < 1e-12


def test_eval_q_constant(capsys):
    assert main(["eval", "q_constant", "3", "1", "2"]) == 0
    assert capsys.readouterr().out.strip() == "8"


def test_eval_json_output(capsys):
    assert main(["eval", "c_ell", "2", "2", "0", "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert abs(payload["value_re"] - 1 / 6) < 1e-12
    assert payload["value_im"] == 0.0


def test_eval_textual_sum(capsys):
    text = "(sum 1 (term 2 (mono 1)))"
    assert main(["eval", text, "--at", "0.5+1j"]) == 0
    value = complex(capsys.readouterr().out.strip())
    assert abs(value - (1 + 2j)) < 1e-12


def test_eval_psi_ktype_matches_library(capsys):
    assert main(["eval", "psi_ktype", "2", "2", "1", "--at", "0.3+1.2j 0.1+0.9j"]) == 0
    got = complex(capsys.readouterr().out.strip())
    want = evaluate(
        psi_ktype_closed_form(RCParams(2, 2, 1)), (0.3 + 1.2j, 0.1 + 0.9j)
    )
    assert abs(got - want) < 1e-12


def test_eval_parse_error_reports_position(capsys):
    code = main(["eval", "(sum 1 (term x (mono 1)))", "--at", "1j"])
    assert code == 2
    err = capsys.readouterr().err
    assert "parse error at character 13" in err


def test_eval_pole_surfaces_verbatim(capsys):
    code = main(["eval", "c_ell", "-1", "2", "0"])
    assert code == 2
    assert "pole" in capsys.readouterr().err


def test_eval_point_arity_mismatch(capsys):
    code = main(["eval", "(sum 2 (term 1 (mono 1 0)))", "--at", "1j"])
    assert code == 2
    assert "arity" in capsys.readouterr().err


def test_eval_unknown_form_lists_choices(capsys):
    code = main(["eval", "frobnicate", "1"])
    assert code == 2
    assert "c_ell" in capsys.readouterr().err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "holobreak.cli", "eval", "constant", "2"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.strip() == "2"
