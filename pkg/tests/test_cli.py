"""Command-line surface: subcommands, exit codes, reports, config, cache."""

import contextlib
import io
import json
import os

import pytest

from burnmat.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, Config, main


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        rc = main(argv)
    return rc, out.getvalue(), err.getvalue()


def test_ring_valuation_and_augmentation():
    rc, out, _ = run(["ring", "(1-x)*(1-y)"])
    assert rc == EXIT_OK and "sigma-valuation: 2" in out
    rc, out, _ = run(["ring", "1+x+x^2"])
    assert rc == EXIT_OK and "augmentation: 3" in out
    rc, out, _ = run(["ring", "x^-1-1"])
    assert rc == EXIT_OK and "sigma-valuation: 1" in out
    rc, out, _ = run(["ring", "t*x - 1"])
    assert rc == EXIT_OK and "n/a" in out


def test_ring_parse_error_is_usage_error():
    rc, _, err = run(["ring", "1 + * x"])
    assert rc == EXIT_USAGE
    assert "parse error" in err and "position" in err


def test_ideal_membership_verdicts():
    rc, out, _ = run(["ideal", "--q", "3", "(1-x)^2"])
    assert rc == EXIT_OK and "member of I(3): True" in out
    rc, out, _ = run(["ideal", "--q", "3", "1-x"])
    assert rc == EXIT_OK and "member of I(3): False" in out
    rc, out, _ = run(["ideal", "--q", "2", "2*(1-x)"])
    assert rc == EXIT_OK and "member of I(2)Sigma: True" in out


def test_ideal_rejects_non_prime_power():
    rc, _, err = run(["ideal", "--q", "6", "1-x"])
    assert rc == EXIT_USAGE
    assert "prime power" in err


def test_order_reports():
    rc, out, _ = run(["order", "--q", "3", "a"])
    assert rc == EXIT_OK and "= 3" in out
    rc, out, _ = run(["order", "--q", "3", "b"])
    assert rc == EXIT_OK and "Infinite" in out and "determinant t^" in out
    rc, out, _ = run(["order", "--q", "3", "abAB"])
    assert rc == EXIT_OK and "= 3" in out


def test_order_rejects_bad_letters():
    rc, _, err = run(["order", "--q", "3", "axq"])
    assert rc == EXIT_USAGE and "invalid letters" in err


def test_order_violation_is_reported_not_fatal_for_composite_exponent():
    rc, out, _ = run(["order", "--q", "4", "abaB"])
    assert rc == EXIT_OK
    assert "violated" in out and "probed order: 8" in out


def test_verify_unknown_suite():
    rc, _, err = run(["verify", "nosuchsuite"])
    assert rc == EXIT_USAGE and "unknown suite" in err


def test_verify_text_output():
    rc, out, _ = run(["--samples", "5", "verify", "powers"])
    assert rc == EXIT_OK
    assert out.startswith("[PASS] powers:")


def test_verify_experimental_status_keeps_exit_zero():
    rc, out, _ = run(["--samples", "6", "--infinite-samples", "2",
                      "verify", "orders", "--q", "4"])
    assert rc == EXIT_OK
    assert "[EXP ]" in out


def test_structured_reports_are_byte_identical():
    argv = ["--samples", "4", "--output", "structured", "verify", "square", "--q", "2"]
    rc1, out1, _ = run(argv)
    rc2, out2, _ = run(argv)
    assert rc1 == rc2 == EXIT_OK
    assert out1 == out2
    record = json.loads(out1)
    assert record["suite"] == "square" and record["config_hash"]


def test_structured_reports_ignore_worker_count():
    base = ["--samples", "4", "--output", "structured"]
    _, out1, _ = run(base + ["--jobs", "1", "verify", "square", "--q", "2"])
    _, out2, _ = run(base + ["--jobs", "2", "verify", "square", "--q", "2"])
    assert out1 == out2


def test_report_solvability_table():
    rc, out, _ = run(["--witness-budget", "10", "report", "--q", "2"])
    assert rc == EXIT_OK
    assert "all -> I" in out and "abAB" in out


def test_config_round_trip(tmp_path):
    cfg = Config(qs=(2, 3), seed=7, samples=12, witness_budget=30)
    path = os.path.join(tmp_path, "run.cfg")
    cfg.save(path)
    assert Config.from_file(path) == cfg


def test_config_hash_skips_execution_knobs():
    a = Config(qs=(2, 3), seed=1, jobs=1, output="text", cache_dir="")
    b = Config(qs=(2, 3), seed=1, jobs=8, output="structured", cache_dir="/x")
    assert a.hash() == b.hash()
    c = Config(qs=(2, 3), seed=2)
    assert c.hash() != a.hash()


def test_config_file_feeds_cli(tmp_path):
    path = os.path.join(tmp_path, "run.cfg")
    Config(qs=(2,), samples=4).save(path)
    rc, out, _ = run(["--config", path, "--output", "structured",
                      "verify", "square"])
    assert rc == EXIT_OK
    record = json.loads(out)
    assert record["q"] == 2 and record["parameters"]["samples"] == 4


def test_cache_build_status_clear(tmp_path):
    d = str(tmp_path)
    rc, out, _ = run(["--cache-dir", d, "cache", "build", "--q", "2"])
    assert rc == EXIT_OK and "built" in out
    assert len(os.listdir(d)) == 2
    rc, out, _ = run(["--cache-dir", d, "cache", "status", "--q", "2"])
    assert rc == EXIT_OK and out.count("ok") == 2
    rc, out, _ = run(["--cache-dir", d, "cache", "build", "--q", "2"])
    assert "hit" in out
    rc, out, _ = run(["--cache-dir", d, "cache", "clear"])
    assert rc == EXIT_OK
    assert os.listdir(d) == []


def test_corrupt_cache_triggers_rebuild(tmp_path):
    d = str(tmp_path)
    run(["--cache-dir", d, "cache", "build", "--q", "2"])
    victim = sorted(os.listdir(d))[0]
    with open(os.path.join(d, victim), "w") as fh:
        fh.write("garbage header\n")
    rc, out, _ = run(["--cache-dir", d, "cache", "build", "--q", "2"])
    assert rc == EXIT_OK and "rebuilt" in out


def test_cache_dir_env_fallback(tmp_path, monkeypatch):
    d = str(tmp_path)
    monkeypatch.setenv("BURNMAT_CACHE", d)
    rc, out, _ = run(["cache", "build", "--q", "2"])
    assert rc == EXIT_OK
    assert len(os.listdir(d)) == 2
