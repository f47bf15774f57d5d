"""Acceptance criteria, one test each.

Every test prints a single status line (``PASS``, ``FAIL`` or ``SKIP``) with
its runtime, visible even when pytest captures output.
"""
import time
from contextlib import contextmanager

import numpy as np
import pytest
from _pytest.outcomes import Skipped

from conftest import FIXTURE_TSV, FIXTURES, separable_svm_set, wnut_dir
from oracles import brute_best_split, dense_tfidf, search_confusion
from test_text_cnn import max_relative_error, random_instance
from tweetsift.classifier import train_model
from tweetsift.data_io import (
    class_counts,
    load_model,
    load_tsv,
    model_to_bytes,
    save_model,
    write_predictions,
    write_tsv,
)
from tweetsift.evaluation import ConfusionMatrix, compute_metrics, confusion_matrix, score_prediction_file
from tweetsift.linear_svm import decision_function, train_svm
from tweetsift.porter import porter_stem
from tweetsift.random_forest import best_split, predict_forest_many, train_forest
from tweetsift.sparse import SparseVector, to_csr
from tweetsift.text_cnn import CnnConfig
from tweetsift.text_pipeline import stem_token

TEST_SET = {"f1": "89.14", "accuracy": "89.35", "recall": "92.58", "precision": "85.94"}


@contextmanager
def criterion(capsys, number, title, limit=None):
    start = time.perf_counter()
    status = "FAIL"
    try:
        yield
        elapsed = time.perf_counter() - start
        if limit is not None:
            assert elapsed < limit, f"took {elapsed:.2f}s, limit {limit}s"
        status = "PASS"
    except Skipped:
        status = "SKIP"
        raise
    finally:
        elapsed = time.perf_counter() - start
        with capsys.disabled():
            print(f"\n{status} criterion {number}: {title} ({elapsed:.2f}s)")


def test_criterion_01_metric_reproduction(capsys):
    with criterion(capsys, 1, "test-set metrics from tp=874 fp=143 fn=70 tn=913", limit=1.0):
        report = compute_metrics(ConfusionMatrix(874, 143, 70, 913))
        assert report.percentages() == TEST_SET
        assert not report.undefined


def test_criterion_02_matrix_reconstruction_is_unique(capsys):
    with criterion(capsys, 2, "exhaustive search finds exactly one matrix on 944/1056", limit=5.0):
        hits = search_confusion(944, 1056, *(float(TEST_SET[k]) for k in ("f1", "accuracy", "recall", "precision")))
        assert hits == [(874, 143, 70, 913)]


def test_criterion_03_stemmer(capsys):
    with criterion(capsys, 3, "stemmer examples and published vector agreement >= 99.9%", limit=5.0):
        assert stem_token("waiting") == "wait"
        assert stem_token("waited") == "wait"
        voc = (FIXTURES / "porter_vocabulary.txt").read_text(encoding="utf-8").split()
        out = (FIXTURES / "porter_output.txt").read_text(encoding="utf-8").split()
        assert len(voc) == len(out) > 23000
        agree = sum(porter_stem(w) == s for w, s in zip(voc, out)) / len(voc)
        assert agree >= 0.999


def test_criterion_04_tfidf_matches_dense_oracle(capsys):
    with criterion(capsys, 4, "sparse tf-idf equals dense oracle on 100 corpora within 1e-12"):
        from tweetsift.features import fit_tfidf, transform_tfidf

        rng = np.random.default_rng(2024)
        alphabet = np.array(["a", "b", "c", "d", "e", "covid", "case", "death"])
        worst = 0.0
        for _ in range(100):
            corpus = [list(rng.choice(alphabet, size=rng.integers(0, 9))) for _ in range(rng.integers(1, 11))]
            nmax = int(rng.integers(1, 4))
            for doc in corpus + [list(rng.choice(alphabet, size=rng.integers(0, 9)))]:
                model = fit_tfidf(corpus, 1, nmax, 1, 2)
                expected, terms = dense_tfidf(corpus, doc, 1, nmax, 1, 2)
                assert model.vocab.terms == terms
                got = transform_tfidf(doc, model).to_dense()
                worst = max(worst, float(np.max(np.abs(got - expected), initial=0.0)))
        assert worst <= 1e-12


def test_criterion_05_cnn_gradient_check(capsys):
    with criterion(capsys, 5, "cnn analytic vs central-difference gradients on 20 tiny models < 1e-4", limit=60.0):
        worst = max(max_relative_error(*random_instance(seed)) for seed in range(20))
        assert worst < 1e-4


def test_criterion_06_svm_convergence(capsys):
    with criterion(capsys, 6, "svm 100% training accuracy on margin-0.5 set within 50 epochs, deterministic"):
        A, y = separable_svm_set()
        X = [SparseVector.from_dense(r) for r in A]
        epoch_acc = []

        def track(epoch, w, b):
            epoch_acc.append(float(np.mean(np.where(A @ w + b >= 0, 1, -1) == y)))

        m = train_svm(X, y, epochs=50, seed=42, callback=track)
        assert len(epoch_acc) == 50 and max(epoch_acc) == 1.0
        assert all(np.sign(decision_function(m, x) or 1.0) == t for x, t in zip(X, y))
        again = train_svm(X, y, epochs=50, seed=42)
        assert m.weights.tobytes() == again.weights.tobytes()
        assert np.float64(m.bias).tobytes() == np.float64(again.bias).tobytes()


def test_criterion_07_forest_properties(capsys):
    with criterion(capsys, 7, "forest depth <= 26, best_split exhaustive on 200 sets, xor with 50 trees"):
        rng = np.random.default_rng(7)
        Xn = rng.random((300, 10))
        yn = np.where(rng.random(300) < 0.5, 1, -1)
        deep = train_forest(Xn, yn, n_trees=10, seed=1)
        assert max(t.depth() for t in deep.trees) <= 26

        values = np.array([0.0, 0.0, 1.0, 2.0, 2.5, 4.0])
        for _ in range(200):
            n, d = int(rng.integers(2, 31)), int(rng.integers(1, 6))
            Xd = rng.choice(values, size=(n, d))
            signs = rng.choice([-1, 1], size=n)
            samples = rng.integers(0, n, size=int(rng.integers(2, 2 * n + 1))).tolist()
            feats = sorted(rng.choice(d, size=int(rng.integers(1, d + 1)), replace=False).tolist())
            min_leaf = int(rng.integers(1, 4))
            got = best_split(samples, to_csr([SparseVector.from_dense(r) for r in Xd], d), signs, feats, min_leaf)
            want = brute_best_split(Xd, (signs == -1).astype(int), samples, feats, min_leaf)
            assert (got is None) == (want is None)
            if got is not None:
                assert got[:2] == want[:2] and abs(got[2] - want[2]) <= 1e-12

        pts = np.array([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]] * 25)
        ys = np.array([-1, 1, 1, -1] * 25)
        xor = train_forest(pts, ys, n_trees=50, seed=42)
        assert [p.sign for p in predict_forest_many(xor, pts)] == ys.tolist()


def test_criterion_08_round_trips(capsys, tmp_path):
    with criterion(capsys, 8, "model files byte-canonical for svm/rf/cnn, prediction tsv exact, fixture identity"):
        split = load_tsv(FIXTURE_TSV)
        battery = split.texts + ["", "unseen words only", "HTTPURL @USER 12 new cases"]
        small_cnn = CnnConfig(embed_dim=8, filters_per_width=4, max_len=40, epochs=3)
        for kind in ("svm", "rf", "cnn"):
            tm = train_model(kind, split.texts, split.labels, n_trees=25, cnn_config=small_cnn)
            path = tmp_path / f"{kind}.twsf"
            save_model(path, tm)
            back = load_model(path)
            assert model_to_bytes(back) == path.read_bytes()
            assert back.predict(battery) == tm.predict(battery)

        preds = tmp_path / "pred.tsv"
        write_predictions(preds, [(r.id, r.label) for r in split.rows[:2]])
        want = "Id\tLabel\n" + "".join(f"{r.id}\t{r.label.value}\n" for r in split.rows[:2])
        assert preds.read_bytes() == want.encode("utf-8")

        copy = tmp_path / "fixture.tsv"
        write_tsv(copy, split)
        assert copy.read_bytes() == FIXTURE_TSV.read_bytes()
        assert load_tsv(copy).rows == split.rows


def test_criterion_09_end_to_end(capsys, tmp_path):
    from tweetsift.cli import main

    with criterion(capsys, 9, "train/predict/evaluate on the 60-row fixture >= 90% for svm and rf", limit=30.0):
        for kind in ("svm", "rf"):
            model, pred = tmp_path / f"{kind}.twsf", tmp_path / f"{kind}.tsv"
            assert main(["train", "--model", kind, "--train", str(FIXTURE_TSV), "--out", str(model)]) == 0
            assert main(["predict", "--model", str(model), "--input", str(FIXTURE_TSV), "--out", str(pred)]) == 0
            _, report, _ = score_prediction_file(FIXTURE_TSV, pred)
            assert report.accuracy >= 0.90, (kind, report.accuracy)
        capsys.readouterr()


def test_criterion_10_out_of_scope_transformer_rows(capsys):
    with capsys.disabled():
        print("\nNOT REPRODUCIBLE criterion 10: transformer (BERT/RoBERTa) scores need pretrained weights; "
              "their arithmetic is covered by criteria 1-2")


@pytest.mark.skipif(wnut_dir() is None, reason="official shared-task files not present (see data/FETCH.md)")
def test_criterion_10_official_data(capsys):
    with criterion(capsys, 10, "official data counts and svm/rf validation F1 within 3.0 points"):
        d = wnut_dir()
        train, valid = load_tsv(d / "train.tsv"), load_tsv(d / "valid.tsv")
        assert class_counts(train) == (3303, 3697, 0)
        assert class_counts(valid) == (472, 528, 0)
        for kind, target in (("svm", 82.71), ("rf", 81.59)):
            tm = train_model(kind, train.texts, train.labels, threads=4)
            f1 = 100 * compute_metrics(confusion_matrix(valid.labels, tm.predict(valid.texts))).f1
            with capsys.disabled():
                print(f"\n  {kind} validation F1 {f1:.2f} (target {target})")
            assert abs(f1 - target) <= 3.0


def test_criterion_10_official_data_absent_notice(capsys):
    if wnut_dir() is None:
        with capsys.disabled():
            print("\nSKIP criterion 10 (conditional part): official shared-task files not present")
