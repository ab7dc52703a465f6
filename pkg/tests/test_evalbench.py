import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from smiwarp.errors import DataError
from smiwarp.evalbench.metrics import alignment_error
from smiwarp.evalbench.retrieval import accuracy_at, path_distance, retrieval_benchmark
from smiwarp.evalbench.runs import (
    BenchRun,
    nongaussian_sweep,
    parse_grid,
    summarize,
    write_outputs,
)
from smiwarp.evalbench.synth import (
    SynthSpec,
    compose_nongaussian,
    compose_truth,
    gen_class_dataset,
    gen_multimodal,
    gen_nongaussian,
    latent_trajectory,
    random_monotone_path,
    shifted_exponential,
    warp_matrix,
)
from smiwarp.io import read_jsonl
from smiwarp.seqcore import AlignmentPath, Sequence, diagonal_path, validate_path

from oracles import naive_alignment_error, random_valid_path


class TestAlignmentError:
    def test_identical(self):
        p = AlignmentPath([1, 2, 2, 3], [1, 1, 2, 3])
        assert alignment_error(p, p) == 0.0

    def test_staircase(self):
        est = AlignmentPath.from_pairs([(1, 1), (2, 1), (2, 2), (3, 2), (3, 3)])
        assert alignment_error(diagonal_path(3), est) == 0.25
        assert naive_alignment_error(diagonal_path(3), est) == 0.25

    def test_shape_mismatch(self):
        with pytest.raises(DataError):
            alignment_error(diagonal_path(3), diagonal_path(4))

    @settings(max_examples=50, deadline=None)
    @given(st.integers(1, 15), st.integers(1, 15), st.integers(0, 2 ** 32 - 1))
    def test_symmetric_and_matches_brute_force(self, n_x, n_y, seed):
        rng = np.random.default_rng(seed)
        p, q = random_valid_path(rng, n_x, n_y), random_valid_path(rng, n_x, n_y)
        e = alignment_error(p, q)
        assert e == pytest.approx(alignment_error(q, p), abs=1e-12)
        assert e == pytest.approx(naive_alignment_error(p, q), abs=1e-12)
        assert alignment_error(p, p) == 0.0


class TestMultimodal:
    def test_first_sample(self):
        x, y, truth = gen_multimodal(SynthSpec("multimodal", 1000, 500))
        assert x.samples[0, 0] == pytest.approx(0.001 + 0.4 * math.sin(2 * math.pi * 0.001), abs=1e-15)
        assert y.samples[0, 0] == pytest.approx(0.001, abs=1e-15)

    def test_shapes_and_truth(self):
        x, y, truth = gen_multimodal(SynthSpec("multimodal", 200, 100))
        assert (x.n, x.d, y.n, y.d) == (200, 1, 100, 1)
        assert (truth.pi_x[0], truth.pi_y[0]) == (1, 1)
        assert truth.shape == (200, 100)
        assert validate_path(truth, 200, 100)

    def test_truth_pairs_source_indices(self):
        x, y, truth = gen_multimodal(SynthSpec("multimodal", 20, 10))
        pts = set(zip(truth.pi_x.tolist(), truth.pi_y.tolist()))
        assert all((2 * j - 1, j) in pts for j in range(1, 11))

    def test_requires_double_length(self):
        with pytest.raises(DataError):
            SynthSpec("multimodal", 200, 90)


class TestNongaussian:
    def test_degenerate_configuration(self):
        rng = np.random.default_rng(0)
        z = latent_trajectory(rng, 30)
        ident = diagonal_path(30)
        e = rng.standard_normal((2, 30))
        xs, ys = compose_nongaussian(z, np.eye(2), np.eye(2), ident, ident, e, e, 0.0)
        np.testing.assert_array_equal(xs, ys)
        assert compose_truth(ident, ident) == ident

    def test_noise_mean(self):
        e = shifted_exponential(np.random.default_rng(123), 10 ** 4)
        assert abs(e.mean()) < 0.05

    def test_bit_reproducible(self):
        a = gen_nongaussian(SynthSpec("nongaussian", 80, 70, eta=2.4, seed=7))
        b = gen_nongaussian(SynthSpec("nongaussian", 80, 70, eta=2.4, seed=7))
        assert np.array_equal(a[0].samples, b[0].samples) and np.array_equal(a[1].samples, b[1].samples)
        assert a[2] == b[2]

    @settings(max_examples=40, deadline=None)
    @given(st.integers(2, 60), st.integers(2, 60), st.one_of(st.none(), st.integers(2, 60)),
           st.floats(0, 3), st.integers(0, 2 ** 32 - 1))
    def test_truth_always_valid(self, n_x, n_y, m, eta, seed):
        x, y, truth = gen_nongaussian(SynthSpec("nongaussian", n_x, n_y, eta, m, seed))
        assert validate_path(truth, n_x, n_y)
        assert (x.n, y.n, x.d, y.d) == (n_x, n_y, 2, 2)

    def test_latent_scale(self):
        z = latent_trajectory(np.random.default_rng(0), 200, 3.0)
        np.testing.assert_allclose(z.std(axis=1), 3.0, rtol=1e-12)
        np.testing.assert_allclose(z.mean(axis=1), 0.0, atol=1e-12)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(1, 40), st.integers(1, 40), st.integers(0, 2 ** 32 - 1))
    def test_warp_matrix_row_stochastic(self, n, m, seed):
        w = random_monotone_path(np.random.default_rng(seed), n, m)
        assert validate_path(w, n, m)
        M = warp_matrix(w, n, m)
        np.testing.assert_allclose(M.sum(axis=1), 1.0, atol=1e-12)

    def test_negative_eta_rejected(self):
        with pytest.raises(DataError):
            SynthSpec("nongaussian", eta=-0.1)


class TestRetrieval:
    def test_exact_copies(self):
        db = gen_class_dataset(per_class=3, length=15, seed=1)
        assert retrieval_benchmark(db, db, "dtw", N=1) == 1.0

    def test_shuffled_labels_full_n(self):
        db = gen_class_dataset(per_class=3, length=15, seed=2)
        q = gen_class_dataset(per_class=3, length=15, seed=2, split=1)
        rng = np.random.default_rng(0)
        ids = [d.id for d in db]
        rng.shuffle(ids)
        db = [Sequence(d.samples, id=i) for d, i in zip(db, ids)]
        assert retrieval_benchmark(q, db, "dtw", N=len(db)) == 1.0

    def test_accuracy_monotone_in_n(self):
        rng = np.random.default_rng(3)
        D = rng.uniform(size=(9, 12))
        ql = [f"c{i % 3}" for i in range(9)]
        dl = [f"c{i % 3}" for i in range(12)]
        acc = [accuracy_at(D, ql, dl, N) for N in range(1, 13)]
        assert all(b >= a for a, b in zip(acc, acc[1:])) and acc[-1] == 1.0

    def test_failure_becomes_inf(self, caplog):
        q = [Sequence(np.zeros((5, 2)), id="a")]  # constant: CTW refuses it
        db = [Sequence(np.random.default_rng(0).standard_normal((5, 2)), id="a")]
        assert retrieval_benchmark(q, db, "ctw", N=1) == 1.0
        assert "failed" in caplog.text

    def test_path_distance_per_step_normalization(self):
        x, y = np.array([[0.0], [3.0]]), np.array([[0.0], [4.0]])
        assert path_distance(x, y, diagonal_path(2)) == 0.5
        # repeating a step changes the value only through the per-m mean
        p = AlignmentPath([1, 2, 2], [1, 1, 2])
        assert path_distance(x, y, p) == pytest.approx((0 + 3 + 1) / 3)

    def test_class_dataset_shape(self):
        ds = gen_class_dataset()
        assert len(ds) == 30 and {d.id for d in ds} == {"class0", "class1", "class2"}
        assert all(24 <= d.n <= 36 and d.d == 2 for d in ds)


class TestRuns:
    def test_parse_grid(self):
        assert parse_grid("0:0.6:3.0") == [0.0, 0.6, 1.2, 1.8, 2.4, 3.0]
        assert parse_grid("0.5,1") == [0.5, 1.0]
        with pytest.raises(DataError):
            parse_grid("1:0:2")

    def test_sweep_outputs(self, tmp_path):
        runs = nongaussian_sweep([0.0, 1.2], 2, ["dtw", "ctw"], 30, 30, seed=1)
        assert len(runs) == 8 and all(r.status == "ok" for r in runs)
        files = write_outputs(runs, tmp_path)
        rows = read_jsonl(files["runs_jsonl"])
        assert len(rows) == 8 and {r["setting"] for r in rows} == {"0.0", "1.2"}
        summary = (tmp_path / "summary.csv").read_text().splitlines()
        assert len(summary) == 1 + 4

    def test_summary_excludes_failures(self):
        runs = [BenchRun("dtw", "0.0", 0, 1.0, 1.0), BenchRun("dtw", "0.0", 1, None, 1.0, "failed", "x"),
                BenchRun("dtw", "0.0", 2, 3.0, 1.0)]
        (row,) = summarize(runs)
        assert (row.n_ok, row.n_failed, row.mean) == (2, 1, 2.0)

    def test_sweep_deterministic(self):
        a = nongaussian_sweep([0.6], 2, ["dtw"], 25, 25, seed=3)
        b = nongaussian_sweep([0.6], 2, ["dtw"], 25, 25, seed=3)
        assert [r.value for r in a] == [r.value for r in b]
