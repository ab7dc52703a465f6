import json
import subprocess
import sys

import numpy as np
import pytest

from smiwarp.cli import main
from smiwarp.io import load_json, read_jsonl, read_path_json, read_sequence_csv, write_path_json, write_sequence_csv
from smiwarp.seqcore import AlignmentPath, Sequence, validate_path


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_synth_multimodal(tmp_path, capsys):
    code, out, _ = run(["synth", "--kind", "multimodal", "--nx", 200, "--ny", 100, "--seed", 1,
                        "--out-dir", tmp_path], capsys)
    assert code == 0 and len(out.split()) == 3
    x = read_sequence_csv(tmp_path / "x.csv")
    truth = read_path_json(tmp_path / "truth.json")
    assert x.n == 200 and validate_path(truth, 200, 100)


def test_synth_deterministic(tmp_path, capsys):
    for d in ("a", "b"):
        assert run(["synth", "--kind", "nongaussian", "--eta", 2.4, "--seed", 7, "--out-dir", tmp_path / d],
                   capsys)[0] == 0
    for f in ("x.csv", "y.csv", "truth.json"):
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()


def test_synth_negative_eta(capsys):
    code, _, err = run(["synth", "--kind", "nongaussian", "--eta", -1], capsys)
    assert code == 1 and "eta" in err


def test_usage_errors(capsys):
    assert run(["frobnicate"], capsys)[0] == 1
    assert run(["align", "--method", "nope", "a", "b"], capsys)[0] == 1
    assert run(["bench", "--suite", "multimodal", "--methods", "dtw,foo"], capsys)[0] == 1


def test_align_dtw_self(tmp_path, capsys):
    write_sequence_csv(Sequence(np.arange(6.0).reshape(3, 2)), tmp_path / "x.csv")
    code, out, _ = run(["align", "--method", "dtw", tmp_path / "x.csv", tmp_path / "x.csv"], capsys)
    rec = json.loads(out)
    assert code == 0 and rec["cost"] == 0.0 and rec["path"]["pi_x"] == rec["path"]["pi_y"] == [1, 2, 3]
    assert rec["wall_ms"] >= 0


def test_align_dtw_dimension_mismatch(tmp_path, capsys):
    write_sequence_csv(Sequence(np.zeros((3, 2))), tmp_path / "x.csv")
    write_sequence_csv(Sequence(np.zeros((3, 1))), tmp_path / "y.csv")
    code, _, err = run(["align", "--method", "dtw", tmp_path / "x.csv", tmp_path / "y.csv"], capsys)
    assert code == 2 and "dimensionality" in err


def test_align_malformed_csv(tmp_path, capsys):
    (tmp_path / "x.csv").write_text("1,2\n3,x\n")
    code, _, err = run(["align", "--method", "dtw", tmp_path / "x.csv", tmp_path / "x.csv"], capsys)
    assert code == 2 and "line 2" in err


def test_align_lsdtw_and_eval(tmp_path, capsys):
    run(["synth", "--kind", "multimodal", "--nx", 60, "--ny", 30, "--out-dir", tmp_path], capsys)
    out_file = tmp_path / "est.json"
    code, _, _ = run(["align", "--method", "lsdtw", "--max-iter", 20, tmp_path / "x.csv", tmp_path / "y.csv",
                      "--output", out_file], capsys)
    rec = load_json(out_file)
    tr = rec["smi_trace"]
    assert code == 0 and all(b >= a for a, b in zip(tr, tr[1:])) and rec["iterations_run"] <= 20
    code, out, _ = run(["eval", tmp_path / "truth.json", out_file], capsys)
    assert code == 0 and float(out) >= 0 and len(out.strip().split(".")[1]) == 6


def test_align_ctw_csv_format(tmp_path, capsys):
    run(["synth", "--kind", "nongaussian", "--nx", 30, "--ny", 25, "--out-dir", tmp_path], capsys)
    code, out, _ = run(["align", "--method", "ctw", "--format", "csv", tmp_path / "x.csv", tmp_path / "y.csv"],
                       capsys)
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "pi_x,pi_y" and lines[-1] == "30,25"


def test_eval_examples(tmp_path, capsys):
    write_path_json(AlignmentPath([1, 2, 3], [1, 2, 3]), tmp_path / "t.json")
    write_path_json(AlignmentPath.from_pairs([(1, 1), (2, 1), (2, 2), (3, 2), (3, 3)]), tmp_path / "e.json")
    assert run(["eval", tmp_path / "t.json", tmp_path / "t.json"], capsys)[1].strip() == "0.000000"
    assert run(["eval", tmp_path / "t.json", tmp_path / "e.json"], capsys)[1].strip() == "0.250000"
    (tmp_path / "bad.json").write_text('{"pi_x": [1,')
    assert run(["eval", tmp_path / "t.json", tmp_path / "bad.json"], capsys)[0] == 2
    write_path_json(AlignmentPath([1, 2], [1, 2]), tmp_path / "s.json")
    assert run(["eval", tmp_path / "t.json", tmp_path / "s.json"], capsys)[0] == 2


def test_smi(tmp_path, capsys):
    run(["synth", "--kind", "multimodal", "--nx", 60, "--ny", 30, "--out-dir", tmp_path], capsys)
    code, out, _ = run(["smi", tmp_path / "x.csv", tmp_path / "y.csv", "--path", tmp_path / "truth.json"], capsys)
    rec = json.loads(out)
    assert code == 0 and rec["smi"] > 0 and len(rec["cv"]["grid"]) == 20


def test_numerical_exit_code(tmp_path, capsys):
    x = np.random.default_rng(0).standard_normal((10, 2))
    write_sequence_csv(Sequence(x), tmp_path / "x.csv")
    write_sequence_csv(Sequence(np.column_stack([x[:, 0], x[:, 0]])), tmp_path / "y.csv")
    code, _, err = run(["align", "--method", "ctw", "--epsilon", 0, tmp_path / "x.csv", tmp_path / "y.csv"],
                       capsys)
    assert code == 3 and "y-side" in err


def test_bench_sweep_shape(tmp_path, capsys):
    code, _, _ = run(["bench", "--suite", "nongaussian-sweep", "--runs", 2, "--eta", "0:0.6:3.0",
                      "--methods", "dtw,ctw", "--nx", 30, "--ny", 30, "--out-dir", tmp_path, "-q"], capsys)
    assert code == 0
    rows = (tmp_path / "summary.csv").read_text().splitlines()
    assert len(rows) == 1 + 6 * 2
    assert len(read_jsonl(tmp_path / "runs.jsonl")) == 6 * 2 * 2


def test_bench_multimodal_smoke(tmp_path, capsys):
    code, out, _ = run(["bench", "--suite", "multimodal", "--runs", 1, "--ny", 30, "--out-dir", tmp_path], capsys)
    assert code == 0 and "lsdtw" in out
    vals = [r["value"] for r in read_jsonl(tmp_path / "runs.jsonl") if r["method"] == "lsdtw"]
    assert all(np.isfinite(vals))


def test_bench_retrieval_range(tmp_path, capsys):
    code, _, _ = run(["bench", "--suite", "retrieval", "--runs", 1, "--N", 1, "--methods", "dtw",
                      "--out-dir", tmp_path, "-q"], capsys)
    (row,) = read_jsonl(tmp_path / "runs.jsonl")
    assert code == 0 and row["metric"] == "accuracy" and 0 <= row["value"] <= 1


def test_module_entry_point(tmp_path):
    r = subprocess.run([sys.executable, "-m", "smiwarp", "synth", "--kind", "nongaussian", "--nx", "20",
                        "--ny", "20", "--out-dir", str(tmp_path), "--quiet"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout == "" and (tmp_path / "truth.json").exists()
