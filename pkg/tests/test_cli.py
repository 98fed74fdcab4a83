"""Command line interface: exit codes, formats, config merging, determinism."""

import json

import pytest

from e2sieve.cli import build_parser, main


def run_cli(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def test_verify_text_positive(capsys):
    code, out, _ = run_cli(capsys, ["verify", "--theorem", "thm1.3"])
    assert code == 0
    assert "leading coefficient is positive" in out
    assert "0.0287919" in out          # reference digits echoed


def test_verify_json_payload(capsys):
    code, out, _ = run_cli(capsys, ["verify", "--theorem", "1.3", "--format", "json"])
    assert code == 0
    payload = json.loads(out)
    assert payload["target"] == "thm1.3"
    assert payload["verdict"] == "positive"
    assert payload["values"]["I"]["computed"].startswith("0.028791887")
    assert payload["I_exact"] == "653/22680"


def test_verify_csv_has_header(capsys):
    code, out, _ = run_cli(capsys, ["verify", "--theorem", "thm1.3", "--format", "csv"])
    assert code == 0
    assert out.splitlines()[0] == "quantity,computed,reference"


def test_verify_override_can_flip_the_verdict(capsys):
    code, out, _ = run_cli(capsys, ["verify", "--theorem", "thm1.3", "--rho", "50"])
    assert code == 1
    assert "not positive" in out


def test_verify_unknown_target_exits_2(capsys):
    code, _, err = run_cli(capsys, ["verify", "--theorem", "thm9.9"])
    assert code == 2 and "error" in err


def test_verify_mc_rows(capsys):
    code, out, _ = run_cli(capsys, ["verify", "--theorem", "thm1.3",
                                    "--mc-samples", "20000", "--seed", "3"])
    assert code == 0
    assert "mc_I" in out and "mc_J" in out


# ---------------------------------------------------------------------------
# functional
# ---------------------------------------------------------------------------


def test_functional_custom_expression(capsys):
    code, out, _ = run_cli(capsys, [
        "functional", "--F", "(1-u1)*(1-u2)", "--k", "2",
        "--theta", "1/2", "--eta", "1/100",
    ])
    assert code == 0
    payload = json.loads(out)
    assert payload["I"]["exact"] == "19/180"
    assert payload["J"]["m=1"]["exact"] == "29/420"
    assert payload["J"]["m=2"] == payload["J"]["m=1"]
    assert payload["leading_coefficient"]["float"] > 0


def test_functional_builtin_name_inherits_parameters(capsys):
    code, out, _ = run_cli(capsys, ["functional", "--F", "thm1.3"])
    assert code == 0
    payload = json.loads(out)
    assert payload["k"] == 3 and payload["rho"] == 2 and payload["theta"] == "1"
    assert payload["variant"] == "Sprime"


def test_functional_parse_error_exits_2(capsys):
    code, _, err = run_cli(capsys, ["functional", "--F", "u1 + (", "--k", "2"])
    assert code == 2 and "error" in err


def test_functional_validates_before_computing(capsys):
    # k = 1 violates the parameter contract -> usage error, not a crash
    code, _, err = run_cli(capsys, ["functional", "--F", "1 - u1", "--k", "1"])
    assert code == 2 and "error" in err


def test_functional_text_and_csv(capsys):
    base = ["functional", "--F", "(1-u1)*(1-u2)", "--k", "2", "--theta", "1/2", "--eta", "1/100"]
    code, out, _ = run_cli(capsys, base + ["--format", "text"])
    assert code == 0 and "I = 19/180" in out
    code, out, _ = run_cli(capsys, base + ["--format", "csv"])
    assert code == 0 and out.splitlines()[0] == "quantity,m,exact_or_closed,float"


# ---------------------------------------------------------------------------
# scan
# ---------------------------------------------------------------------------


def test_scan_gaps(capsys):
    code, out, _ = run_cli(capsys, ["scan", "--mode", "gaps", "--limit", "1000",
                                    "--universe", "E2"])
    assert code == 0
    payload = json.loads(out)
    assert payload["min_gap"] == 1 and payload["argmin"] == [14, 15]


def test_scan_hits(capsys):
    code, out, _ = run_cli(capsys, ["scan", "--mode", "hits", "--limit", "500",
                                    "--universe", "P2", "--H", "0,2,6", "--threshold", "3"])
    assert code == 0
    payload = json.loads(out)
    assert 5 in payload["witnesses"]


def test_scan_hits_needs_H(capsys):
    code, _, err = run_cli(capsys, ["scan", "--mode", "hits", "--limit", "500"])
    assert code == 2 and "error" in err


def test_scan_bv(capsys):
    code, out, _ = run_cli(capsys, ["scan", "--mode", "bv", "--limit", "1000",
                                    "--theta", "1/3", "--universe", "primes"])
    assert code == 0
    payload = json.loads(out)
    assert payload["rows"]["1"] == "0"


def test_scan_needs_limit(capsys):
    code, _, err = run_cli(capsys, ["scan", "--mode", "gaps"])
    assert code == 2 and "error" in err


def test_scan_bad_universe_exits_2(capsys):
    code, _, err = run_cli(capsys, ["scan", "--mode", "gaps", "--limit", "1000",
                                    "--universe", "martians"])
    assert code == 2 and "error" in err


# ---------------------------------------------------------------------------
# theorem11
# ---------------------------------------------------------------------------


def test_theorem11(capsys):
    code, out, _ = run_cli(capsys, ["theorem11", "--rho", "5"])
    assert code == 0
    payload = json.loads(out)
    assert payload["k"] == 78 and payload["eta_ratio"] == "1/156"
    assert payload["rhs83_exceeds_rho"] is False


def test_theorem11_rejects_small_rho(capsys):
    code, _, err = run_cli(capsys, ["theorem11", "--rho", "2"])
    assert code == 2 and "error" in err


# ---------------------------------------------------------------------------
# argument handling
# ---------------------------------------------------------------------------


def test_missing_subcommand_is_a_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_bad_fraction_is_a_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["functional", "--F", "1", "--k", "2", "--theta", "half"])
    assert exc.value.code == 2


def test_digits_below_15_rejected(capsys):
    code, _, err = run_cli(capsys, ["verify", "--theorem", "thm1.3", "--digits", "10"])
    assert code == 2 and "digits" in err


def test_parser_lists_all_subcommands():
    text = build_parser().format_help()
    for name in ("verify", "functional", "scan", "theorem11"):
        assert name in text


# ---------------------------------------------------------------------------
# config files
# ---------------------------------------------------------------------------


def test_config_file_supplies_defaults(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("theorem = thm1.3\nformat = json\n# comment line\n")
    code, out, _ = run_cli(capsys, ["verify", "--config", str(cfg)])
    assert code == 0
    assert json.loads(out)["target"] == "thm1.3"


def test_flags_override_config(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("theorem = thm1.3\nformat = json\n")
    code, out, _ = run_cli(capsys, ["verify", "--config", str(cfg), "--format", "text"])
    assert code == 0
    assert "leading coefficient is positive" in out  # text, not json


def test_unknown_config_key_exits_2(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("frobnicate = 1\n")
    code, _, err = run_cli(capsys, ["verify", "--config", str(cfg)])
    assert code == 2 and "frobnicate" in err


def test_missing_config_file_exits_2(capsys):
    code, _, err = run_cli(capsys, ["verify", "--config", "/nonexistent.cfg"])
    assert code == 2 and "error" in err


def test_malformed_config_line_exits_2(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("this line has no equals sign\n")
    code, _, err = run_cli(capsys, ["verify", "--config", str(cfg)])
    assert code == 2


# ---------------------------------------------------------------------------
# determinism (full sweep lives in the acceptance suite)
# ---------------------------------------------------------------------------


def test_repeat_runs_are_byte_identical(capsys):
    argv = ["scan", "--mode", "gaps", "--limit", "2000", "--universe", "P2"]
    _, first, _ = run_cli(capsys, argv)
    _, second, _ = run_cli(capsys, argv)
    assert first == second
