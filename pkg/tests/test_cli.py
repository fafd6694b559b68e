import io
import subprocess
import sys

import pytest

from motionmap.cli import main
from motionmap.report import parse_reports
from motionmap.traces import parse_trace


def gen_args(path, seed=4):
    return ["gen", "--kind", "random_walk", "--param", "n=25", "--seed", str(seed),
            "--out", str(path)]


def test_gen_then_run_pipeline(tmp_path, capsys):
    trace_file = tmp_path / "device.trace"
    out_file = tmp_path / "object.trace"
    assert main(gen_args(trace_file)) == 0
    assert main([
        "run", "--trace", str(trace_file), "--mapping", "relative",
        "--gain-t", "constant:1.5", "--out", str(out_file),
    ]) == 0
    err = capsys.readouterr().err
    assert "steps=25" in err
    assert "clutches=0" in err
    out = parse_trace(out_file.read_text())
    assert len(out.samples) == 26


def test_run_output_is_deterministic(tmp_path):
    trace_file = tmp_path / "device.trace"
    a = tmp_path / "a.trace"
    b = tmp_path / "b.trace"
    main(gen_args(trace_file))
    for out in (a, b):
        assert main([
            "run", "--trace", str(trace_file), "--mapping", "rate",
            "--gain-t", "deadband:0.05", "--gain-r", "constant:2", "--out", str(out),
        ]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_gen_is_deterministic_and_seeded(tmp_path):
    a = tmp_path / "a.trace"
    b = tmp_path / "b.trace"
    c = tmp_path / "c.trace"
    main(gen_args(a, seed=4))
    main(gen_args(b, seed=4))
    main(gen_args(c, seed=5))
    assert a.read_bytes() == b.read_bytes()
    assert a.read_bytes() != c.read_bytes()


def test_gen_param_forms(tmp_path, capsys):
    assert main([
        "gen", "--kind", "line", "--param", "n=5", "--param", "d=0.5,0,0",
    ]) == 0
    trace = parse_trace(capsys.readouterr().out)
    assert len(trace.samples) == 6
    assert trace.samples[-1].pose.p.x == pytest.approx(0.5, abs=1e-15)


def test_run_reads_stdin_writes_stdout(tmp_path, capsys, monkeypatch):
    trace_file = tmp_path / "device.trace"
    main(gen_args(trace_file))
    monkeypatch.setattr(sys, "stdin", io.StringIO(trace_file.read_text()))
    assert main(["run", "--trace", "-", "--mapping", "absolute", "--out", "-"]) == 0
    out = capsys.readouterr().out
    assert parse_trace(out).samples


def test_check_command(tmp_path, capsys):
    trace_file = tmp_path / "device.trace"
    report_file = tmp_path / "report.txt"
    main(gen_args(trace_file))
    assert main([
        "check", "--trace", str(trace_file), "--mapping", "relative",
        "--out", str(report_file),
    ]) == 0
    assert "noncompliant_t=0" in capsys.readouterr().err
    assert "mode check" in report_file.read_text()


def test_classify_command(tmp_path, capsys):
    report_file = tmp_path / "report.txt"
    assert main([
        "classify", "--trials", "20", "--seed", "7", "--out", str(report_file),
    ]) == 0
    err = capsys.readouterr().err
    for mapping in ("absolute", "relative", "rate"):
        assert f"{mapping}: " in err
    reports = parse_reports(report_file.read_text())
    assert len(reports) == 3
    assert all(rep.trials == 20 for rep in reports)


def test_exit_code_parse_errors(tmp_path, capsys):
    assert main(["run", "--trace", str(tmp_path / "missing"), "--mapping", "rate"]) == 1
    bad = tmp_path / "bad.trace"
    bad.write_text("0 zero 0 0 1 0 0 0 0.016 1\n")
    assert main(["run", "--trace", str(bad), "--mapping", "rate"]) == 1
    assert "error (parse)" in capsys.readouterr().err


def test_exit_code_config_errors(tmp_path, capsys):
    trace_file = tmp_path / "device.trace"
    main(gen_args(trace_file))
    assert main([
        "run", "--trace", str(trace_file), "--mapping", "rate", "--gain-t", "warp:1",
    ]) == 2
    assert main([
        "run", "--trace", str(trace_file), "--mapping", "sideways",
    ]) == 2
    assert main([
        "check", "--trace", str(trace_file), "--mapping", "rate", "--tol", "0",
    ]) == 2
    assert main(["gen", "--kind", "nonsense"]) == 2
    assert main(["gen", "--kind", "line", "--param", "n5"]) == 2
    assert main(["classify", "--trials", "0"]) == 2
    assert "error (config)" in capsys.readouterr().err


def test_exit_code_engine_for_unreachable_service(tmp_path, capsys):
    trace_file = tmp_path / "device.trace"
    main(gen_args(trace_file))
    code = main([
        "run", "--trace", str(trace_file), "--mapping", "rate",
        "--url", "http://127.0.0.1:9",
    ])
    assert code == 3
    assert "error (engine)" in capsys.readouterr().err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "motionmap.cli", "gen", "--kind", "line", "--param", "n=3"],
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode == 0
    assert len(parse_trace(proc.stdout).samples) == 4
