"""Bangla multi-label emotion classification with TF-IDF, PCA, classical
models and LIME explanations.

Command functions mirror the ``emoxai`` CLI verbs. Each writes its artifacts
under ``out`` and returns the parsed JSON document it produced.
"""

import json
import os

from ._core import (
    EMOTIONS,
    ConfigError,
    DataError,
    Model,
    config_hash,
    preprocess,
    split_sentences,
)
from . import _core

__version__ = "0.1.0"

__all__ = [
    "EMOTIONS",
    "ConfigError",
    "DataError",
    "Model",
    "config_hash",
    "evaluate",
    "explain",
    "preprocess",
    "split",
    "split_sentences",
    "stats",
    "sweep",
    "train",
]


def _load(path):
    with open(path, encoding="utf-8") as f:
        return json.load(f)


def stats(config, out, *, data=None, seed=None, strict=False):
    return _load(_core.stats(config, out, data=data, seed=seed, strict=strict))


def split(config, out, *, seed=None, strict=False):
    return _load(_core.split(config, out, seed=seed, strict=strict))


def train(config, out, *, family=None, ngrams=None, pca=None, seed=None, strict=False):
    """Trains one model and returns the path of model.json."""
    return os.fspath(
        _core.train(config, out, family=family, ngrams=ngrams, pca=pca, seed=seed, strict=strict)
    )


def evaluate(config, model, out, *, subset="test", split=None, seed=None, strict=False):
    return _load(
        _core.evaluate(config, model, out, subset=subset, split=split, seed=seed, strict=strict)
    )


def explain(model, text, label, out, *, config=None, samples=None, features=None,
            kernel_width=None, seed=None):
    return _load(
        _core.explain(model, text, label, out, config=config, samples=samples,
                      features=features, kernel_width=kernel_width, seed=seed)
    )


def sweep(config, out, *, jobs=None, seed=None, strict=False, verbose=False):
    return _load(
        _core.sweep(config, out, jobs=jobs, seed=seed, strict=strict, verbose=verbose)
    )
