"""Versioned, self-describing JSON model files with exact float round-trip."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
from sklearn.pipeline import Pipeline
from sklearn.preprocessing import MinMaxScaler

from .bayes import GaussianNB
from .forest import DecisionTree, RandomForest
from .linear import LinearDiscriminant, LinearSVM, LogisticRegressionGD
from .neighbors import KNearestNeighbors
from .neural import NeuralRegressor

FORMAT = "pupilload-model"
VERSION = 1

_REGISTRY = {cls.__name__: cls for cls in (
    DecisionTree, RandomForest, GaussianNB, LogisticRegressionGD, LinearSVM,
    LinearDiscriminant, KNearestNeighbors, NeuralRegressor, MinMaxScaler)}


def _encode(value):
    if isinstance(value, np.ndarray):
        return {"__ndarray__": value.tolist(), "dtype": value.dtype.str, "shape": list(value.shape)}
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, Pipeline):
        return {"__pipeline__": [[name, _encode(step)] for name, step in value.steps]}
    if type(value).__name__ in _REGISTRY and hasattr(value, "get_params"):
        state = {k: _encode(v) for k, v in vars(value).items()
                 if k.endswith("_") and not k.startswith("_")}
        return {"__estimator__": type(value).__name__,
                "params": {k: _encode(v) for k, v in value.get_params(deep=False).items()},
                "state": state}
    if isinstance(value, (list, tuple)):
        return [_encode(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _encode(v) for k, v in value.items()}
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    raise TypeError(f"cannot serialize {type(value).__name__}")


def _decode(value):
    if isinstance(value, list):
        return [_decode(v) for v in value]
    if not isinstance(value, dict):
        return value
    if "__ndarray__" in value:
        return np.array(value["__ndarray__"], dtype=np.dtype(value["dtype"])).reshape(value["shape"])
    if "__pipeline__" in value:
        return Pipeline([(name, _decode(step)) for name, step in value["__pipeline__"]])
    if "__estimator__" in value:
        cls = _REGISTRY.get(value["__estimator__"])
        if cls is None:
            raise ValueError(f"unknown estimator class {value['__estimator__']!r}")
        est = cls(**{k: _decode(v) for k, v in value["params"].items()})
        for k, v in value["state"].items():
            setattr(est, k, _decode(v))
        return est
    return {k: _decode(v) for k, v in value.items()}


def _final(model):
    return model.steps[-1][1] if isinstance(model, Pipeline) else model


def dumps_model(model) -> str:
    est = _final(model)
    header = {
        "format": FORMAT,
        "version": VERSION,
        "kind": getattr(est, "kind", type(est).__name__),
        "feature_dim": int(getattr(model, "n_features_in_", getattr(est, "n_features_in_", 0))),
    }
    if hasattr(est, "classes_"):
        header["n_classes"] = len(est.classes_)
    header["model"] = _encode(model)
    return json.dumps(header, indent=1)


def loads_model(text: str):
    doc = json.loads(text)
    if doc.get("format") != FORMAT:
        raise ValueError("not a pupilload model file")
    if doc.get("version") != VERSION:
        raise ValueError(f"unsupported model file version {doc.get('version')!r}")
    return _decode(doc["model"])


def save_model(model, path) -> None:
    Path(path).write_text(dumps_model(model), encoding="utf-8")


def load_model(path):
    return loads_model(Path(path).read_text(encoding="utf-8"))
