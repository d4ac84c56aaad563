import json

import pytest

from pachange.cli import EXIT_OK, EXIT_PARAMS, EXIT_PATH, EXIT_SCHEMA, main
from pachange.graphio import load_binary, load_jsonl


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_generate_initial_graph(tmp_path, capsys):
    out = tmp_path / "g.pacg"
    code, stdout, _ = run_cli(
        capsys, "generate", "--n", "2", "--m", "3", "--delta", "0.5",
        "--seed", "4", "--out", str(out),
    )
    assert code == EXIT_OK
    summary = json.loads(stdout.strip().splitlines()[-1])
    assert summary["records"] == 0
    g = load_binary(out)
    assert g.n == 2 and g.m == 3
    manifest = json.loads((tmp_path / "g.pacg.manifest.json").read_text())
    assert manifest["command"] == "generate"
    assert str(out) in manifest["outputs"]


def test_generate_jsonl_with_gamma(tmp_path, capsys):
    out = tmp_path / "g.jsonl"
    code, stdout, _ = run_cli(
        capsys, "generate", "--n", "100", "--m", "1", "--delta", "0.0",
        "--delta-prime", "2.0", "--gamma", "0.5", "--seed", "1",
        "--out", str(out), "--format", "jsonl",
    )
    assert code == EXIT_OK
    g = load_jsonl(out)
    assert g.schedule.tau == 90  # n - ceil(n**0.5)


def test_generate_rejects_bad_params(tmp_path, capsys):
    code, _, err = run_cli(
        capsys, "generate", "--n", "1", "--m", "1", "--delta", "0.0",
        "--out", str(tmp_path / "x"),
    )
    assert code == EXIT_PARAMS and "n must be" in err


def test_gamma_and_tau_mutually_exclusive(tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["generate", "--n", "10", "--m", "1", "--delta", "0", "--tau", "5",
              "--gamma", "0.5", "--out", str(tmp_path / "x")])
    assert exc.value.code == 2


def test_verify_encoding_quick(capsys):
    code, stdout, _ = run_cli(capsys, "verify-encoding", "--max-t", "4", "--max-m", "2")
    assert code == EXIT_OK
    summary = json.loads(stdout.strip().splitlines()[-1])
    assert summary["mismatches"] == 0 and summary["checked"] > 0


def test_verify_lr_quick(capsys):
    code, stdout, _ = run_cli(capsys, "verify-lr", "--max-n", "4", "--max-m", "1")
    assert code == EXIT_OK
    assert json.loads(stdout.strip().splitlines()[-1])["mismatches"] == 0


def test_sweep_power_deterministic_and_threaded(tmp_path, capsys):
    args = ["sweep-power", "--n", "300", "--gamma", "0.5,0.8", "--m", "1",
            "--delta", "0.0", "--delta-prime", "2.0", "--alpha", "0.1",
            "--reps", "120", "--seed", "5"]
    outs = []
    for name, threads in (("a.csv", "1"), ("b.csv", "1"), ("c.csv", "4")):
        out = tmp_path / name
        code, *_ = run_cli(capsys, *args, "--threads", threads, "--out", str(out))
        assert code == EXIT_OK
        outs.append(out.read_bytes())
    assert outs[0] == outs[1] == outs[2]
    header = outs[0].decode().splitlines()[0]
    assert header == "n,m,delta,delta_prime,gamma,Delta,alpha,reps,power,ci_lo,ci_hi"


def test_calibrate_then_estimate_round_trip(tmp_path, capsys):
    curve_path = tmp_path / "calibration.csv"
    code, *_ = run_cli(
        capsys, "calibrate", "--n", "400", "--m", "1", "--delta", "0.0",
        "--delta-prime", "2.0", "--grid", "0.4,0.6,0.8,1.0", "--reps", "150",
        "--seed", "2", "--out", str(curve_path),
    )
    assert code == EXIT_OK
    est_path = tmp_path / "estimator.csv"
    code, stdout, _ = run_cli(
        capsys, "estimate", "--curve", str(curve_path), "--n", "400", "--m", "1",
        "--delta", "0.0", "--delta-prime", "2.0", "--tau", "200", "--reps", "10",
        "--seed", "3", "--out", str(est_path),
    )
    assert code == EXIT_OK
    lines = est_path.read_text().splitlines()
    assert lines[0] == "n,tau,tau_hat,abs_err"
    assert len(lines) == 11
    for line in lines[1:]:
        n, tau, tau_hat, abs_err = line.split(",")
        assert n == "400" and tau == "200"
        assert abs(int(tau_hat) - 200) == int(abs_err)


def test_estimate_missing_curve_exits_4(tmp_path, capsys):
    code, _, err = run_cli(
        capsys, "estimate", "--curve", str(tmp_path / "nope.csv"), "--n", "10",
        "--m", "1", "--delta", "0", "--delta-prime", "1", "--tau", "5",
        "--out", str(tmp_path / "e.csv"),
    )
    assert code == EXIT_PATH


def test_estimate_bad_schema_exits_6(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b\n1,2\n")
    code, _, err = run_cli(
        capsys, "estimate", "--curve", str(bad), "--n", "10", "--m", "1",
        "--delta", "0", "--delta-prime", "1", "--tau", "5",
        "--out", str(tmp_path / "e.csv"),
    )
    assert code == EXIT_SCHEMA and "calibration columns" in err


def test_config_file_defaults_with_flag_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("n=2\nm=3\ndelta=0.5\nseed=4\n# comment\nout=IGNORED\n")
    out = tmp_path / "from_cfg.pacg"
    code, *_ = run_cli(capsys, "generate", "--config", str(cfg), "--out", str(out))
    assert code == EXIT_OK
    assert load_binary(out).m == 3

    code, _, _ = run_cli(capsys, "generate", "--config", str(cfg), "--m", "2",
                         "--out", str(out))
    assert code == EXIT_OK
    assert load_binary(out).m == 2  # explicit flag wins


def test_config_missing_exits_4(tmp_path, capsys):
    code, _, _ = run_cli(capsys, "generate", "--config", str(tmp_path / "nope.cfg"),
                         "--n", "2", "--m", "1", "--delta", "0", "--out", "x")
    assert code == EXIT_PATH


def test_bounded_diff_summary(capsys):
    code, stdout, _ = run_cli(
        capsys, "bounded-diff", "--n", "300", "--N", "30", "--m", "1",
        "--delta", "0.0", "--delta-prime", "1.0", "--reps", "50", "--seed", "1",
    )
    assert code == EXIT_OK
    summary = json.loads(stdout.strip().splitlines()[-1])
    assert summary["ok"] is True
    assert summary["max_normalized_diff"] <= summary["bound"] == 2.0 * 2.0


def test_var_s_and_dominance_csv(tmp_path, capsys):
    out = tmp_path / "varS.csv"
    code, *_ = run_cli(
        capsys, "var-s", "--n", "300", "--N", "20,40", "--m", "1", "--delta", "0.0",
        "--delta-prime", "1.0", "--prefixes", "2", "--continuations", "60",
        "--seed", "3", "--out", str(out),
    )
    assert code == EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0] == "n,N,prefix_id,var_S,cont_reps"
    assert len(lines) == 1 + 2 * 2

    dom = tmp_path / "dominance.csv"
    code, *_ = run_cli(
        capsys, "dominance", "--n", "2000", "--N", "50", "--m", "1", "--delta", "0.0",
        "--reps", "2000", "--seed", "4", "--out", str(dom),
    )
    assert code == EXIT_OK
    lines = dom.read_text().splitlines()
    assert lines[0] == "k,ccdf_component,ccdf_tree,bound,se_component,se_tree"
    first = lines[1].split(",")
    assert first[0] == "1" and float(first[1]) == 1.0 and float(first[2]) == 1.0

    threaded = tmp_path / "dominance_t3.csv"
    code, *_ = run_cli(
        capsys, "dominance", "--n", "2000", "--N", "50", "--m", "1", "--delta", "0.0",
        "--reps", "2000", "--seed", "4", "--threads", "3", "--out", str(threaded),
    )
    assert code == EXIT_OK
    assert threaded.read_bytes() == dom.read_bytes()


def test_reveal_time_flag_equivalent_to_suffix_length(tmp_path, capsys):
    base = ["dominance", "--n", "1000", "--m", "1", "--delta", "0.0",
            "--reps", "300", "--seed", "8"]
    out_n = tmp_path / "n.csv"
    out_m = tmp_path / "m.csv"
    assert run_cli(capsys, *base, "--N", "40", "--out", str(out_n))[0] == EXIT_OK
    assert run_cli(capsys, *base, "--M", "960", "--out", str(out_m))[0] == EXIT_OK
    assert out_n.read_bytes() == out_m.read_bytes()
    with pytest.raises(SystemExit) as exc:
        main(base + ["--N", "40", "--M", "960", "--out", str(out_n)])
    assert exc.value.code == 2


def test_unknown_command_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
