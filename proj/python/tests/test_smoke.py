import json
import pathlib

import pytest

import emoxai

DATA = pathlib.Path(__file__).resolve().parents[2] / "tests" / "data"
TOY = DATA / "toy.ini"


def test_emotions_in_canonical_order():
    assert emoxai.EMOTIONS == ["love", "joy", "surprise", "anger", "sadness", "fear"]


def test_preprocess_drops_punctuation_and_collapses_space():
    assert emoxai.preprocess("  আমি   খুশি।  ") == "আমি খুশি"
    assert emoxai.preprocess("কি!?") == "কি"


def test_split_sentences():
    assert emoxai.split_sentences("ভালো। খুব ভালো!") == ["ভালো", "খুব ভালো"]


def test_stats_counts_toy_corpus(tmp_path):
    doc = emoxai.stats(TOY, tmp_path)
    assert doc["record_count"] == 400
    assert (tmp_path / "stats.json").exists()
    assert doc["provenance"]["seed"] == 11


def test_split_partitions_every_record(tmp_path):
    doc = emoxai.split(TOY, tmp_path)
    ids = doc["train_ids"] + doc["test_ids"] + doc["validation_ids"]
    assert len(ids) == 400
    assert len(set(ids)) == 400


def single_point_config(tmp_path):
    text = TOY.read_text(encoding="utf-8")
    text = text.replace("path = toy_corpus.csv", f"path = {DATA / 'toy_corpus.csv'}")
    text = text.replace("lambda = 1e-3, 1e-4", "lambda = 1e-3")
    cfg = tmp_path / "single.ini"
    cfg.write_text(text, encoding="utf-8")
    return cfg


def test_train_predict_evaluate_explain(tmp_path):
    cfg = single_point_config(tmp_path)
    path = emoxai.train(cfg, tmp_path, family="linear_svm", ngrams="1-1", pca=False)
    model = emoxai.Model.load(path)
    scores = model.scores("আমি আজ খুব আনন্দিত")
    assert list(scores) == emoxai.EMOTIONS
    assert set(model.predict("আমি আজ খুব আনন্দিত")) <= set(emoxai.EMOTIONS)

    metrics = emoxai.evaluate(cfg, path, tmp_path, subset="validation")
    assert 0.0 <= metrics["macro"]["f1"] <= 1.0

    first = emoxai.explain(path, "আমি আজ খুব আনন্দিত", "joy", tmp_path / "a", samples=200)
    second = emoxai.explain(path, "আমি আজ খুব আনন্দিত", "joy", tmp_path / "b", samples=200)
    assert first == second
    assert len(first["features"]) <= 10


def test_train_is_deterministic(tmp_path):
    a = emoxai.train(TOY, tmp_path / "a", family="knn", pca=False)
    b = emoxai.train(TOY, tmp_path / "b", family="knn", pca=False)
    assert pathlib.Path(a).read_bytes() == pathlib.Path(b).read_bytes()


def test_errors_map_to_exception_types(tmp_path):
    with pytest.raises(emoxai.ConfigError):
        emoxai.train(TOY, tmp_path, family="perceptron")
    with pytest.raises(ValueError):
        emoxai.explain(tmp_path / "missing.json", "x", "hunger", tmp_path)
    bad = tmp_path / "bad.ini"
    bad.write_text("[dataset]\npath = nowhere.csv\n")
    with pytest.raises(emoxai.DataError):
        emoxai.stats(bad, tmp_path)
