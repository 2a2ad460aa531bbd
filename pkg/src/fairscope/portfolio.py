"""Portfolio data model, file ingestion, and fairness-performance plane scaling.

Two on-disk formats are supported:

* structured-object (JSON): top-level keys ``schema_version`` (must be 1),
  ``dataset``, ``method``, ``performance_metric``, ``fairness_metric``,
  ``feature_names``, ``models``; unknown keys are rejected.
* delimited-table (CSV): header row with ``model_id``, ``performance``,
  ``fairness``, optional ``trade_off_param``, and importance columns prefixed
  ``imp:``; comma separator, "." decimal point, UTF-8. Portfolio-level
  metadata is not representable in this format and round-trips as defaults;
  unknown columns are rejected.
"""

from __future__ import annotations

import csv
import hashlib
import json
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import FormatError, ValidationError

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

_JSON_TOP_KEYS = {
    "schema_version",
    "dataset",
    "method",
    "performance_metric",
    "fairness_metric",
    "feature_names",
    "models",
}
_JSON_MODEL_KEYS = {
    "id",
    "trade_off_param",
    "performance",
    "fairness",
    "importances",
    "hyperparameters",
}


@dataclass(frozen=True)
class ModelRecord:
    """One candidate model: trade-off setting, outcome metrics, attributions."""

    id: str
    trade_off_param: float | None
    performance: float
    fairness: float
    importances: tuple[float, ...]
    hyperparameters: dict[str, str] | None = None

    def validate(self, n_features: int) -> None:
        if not self.id:
            raise ValidationError("model with empty id")
        if len(self.importances) != n_features:
            raise ValidationError(
                f"model '{self.id}': importances has {len(self.importances)} "
                f"entries, expected {n_features}"
            )
        for name, value in (("performance", self.performance), ("fairness", self.fairness)):
            if not np.isfinite(value) or not (0.0 <= value <= 1.0):
                raise ValidationError(f"model '{self.id}': {name} {value!r} outside [0, 1]")
        if self.trade_off_param is not None and not np.isfinite(self.trade_off_param):
            raise ValidationError(f"model '{self.id}': trade_off_param is not finite")
        if not all(np.isfinite(v) for v in self.importances):
            raise ValidationError(f"model '{self.id}': importances contain non-finite values")


@dataclass(frozen=True)
class Portfolio:
    """A validated collection of candidate models over a shared feature set."""

    feature_names: tuple[str, ...]
    models: tuple[ModelRecord, ...]
    dataset_name: str = ""
    method_name: str = ""
    performance_metric_name: str = "performance"
    fairness_metric_name: str = "fairness"
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self) -> None:
        if len(self.models) < 2:
            raise ValidationError(f"portfolio needs at least 2 models, got {len(self.models)}")
        if len(self.feature_names) < 1:
            raise ValidationError("portfolio needs at least 1 feature")
        if len(set(self.feature_names)) != len(self.feature_names):
            raise ValidationError("feature_names are not unique")
        seen: set[str] = set()
        for m in self.models:
            m.validate(len(self.feature_names))
            if m.id in seen:
                raise ValidationError(f"duplicate model id '{m.id}'")
            seen.add(m.id)

    @property
    def n_models(self) -> int:
        return len(self.models)

    @property
    def n_features(self) -> int:
        return len(self.feature_names)

    def importance_matrix(self) -> np.ndarray:
        """Raw importance vectors as an (n_models, n_features) float array."""
        return np.array([m.importances for m in self.models], dtype=np.float64)

    def plane_values(self) -> np.ndarray:
        """(n_models, 2) array of raw (performance, fairness) values."""
        return np.array(
            [(m.performance, m.fairness) for m in self.models], dtype=np.float64
        )

    def model_ids(self) -> list[str]:
        return [m.id for m in self.models]

    def to_dict(self) -> dict:
        """File-schema dict (structured-object key names)."""
        return {
            "schema_version": self.schema_version,
            "dataset": self.dataset_name,
            "method": self.method_name,
            "performance_metric": self.performance_metric_name,
            "fairness_metric": self.fairness_metric_name,
            "feature_names": list(self.feature_names),
            "models": [
                {
                    "id": m.id,
                    "trade_off_param": m.trade_off_param,
                    "performance": m.performance,
                    "fairness": m.fairness,
                    "importances": list(m.importances),
                    "hyperparameters": dict(m.hyperparameters) if m.hyperparameters else None,
                }
                for m in self.models
            ],
        }

    def fingerprint(self) -> str:
        """SHA-256 over the canonical JSON rendering of the portfolio."""
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _as_float(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise FormatError(f"{where}: expected a number, got {value!r}")
    return float(value)


def _model_from_obj(obj: dict, index: int) -> ModelRecord:
    where = f"models[{index}]"
    if not isinstance(obj, dict):
        raise FormatError(f"{where}: expected an object")
    unknown = set(obj) - _JSON_MODEL_KEYS
    if unknown:
        raise FormatError(f"{where}: unknown keys {sorted(unknown)}")
    for key in ("id", "performance", "fairness", "importances"):
        if key not in obj:
            raise FormatError(f"{where}: missing key '{key}'")
    if not isinstance(obj["id"], str):
        raise FormatError(f"{where}.id: expected a string")
    theta = obj.get("trade_off_param")
    if theta is not None:
        theta = _as_float(theta, f"{where}.trade_off_param")
    imps = obj["importances"]
    if not isinstance(imps, list):
        raise FormatError(f"{where}.importances: expected an array")
    hyper = obj.get("hyperparameters")
    if hyper is not None:
        if not isinstance(hyper, dict) or not all(
            isinstance(k, str) and isinstance(v, str) for k, v in hyper.items()
        ):
            raise FormatError(f"{where}.hyperparameters: expected a string-to-string object")
    return ModelRecord(
        id=obj["id"],
        trade_off_param=theta,
        performance=_as_float(obj["performance"], f"{where}.performance"),
        fairness=_as_float(obj["fairness"], f"{where}.fairness"),
        importances=tuple(
            _as_float(v, f"{where}.importances[{i}]") for i, v in enumerate(imps)
        ),
        hyperparameters=dict(hyper) if hyper else None,
    )


def portfolio_from_obj(data, where: str = "<object>") -> Portfolio:
    """Build a validated Portfolio from a structured-object dict."""
    if not isinstance(data, dict):
        raise FormatError(f"{where}: top level must be an object")
    unknown = set(data) - _JSON_TOP_KEYS
    if unknown:
        raise FormatError(f"{where}: unknown keys {sorted(unknown)}")
    for key in ("schema_version", "feature_names", "models"):
        if key not in data:
            raise FormatError(f"{where}: missing key '{key}'")
    if data["schema_version"] != SCHEMA_VERSION:
        raise FormatError(
            f"{where}: schema_version must be {SCHEMA_VERSION}, got {data['schema_version']!r}"
        )
    names = data["feature_names"]
    if not isinstance(names, list) or not all(isinstance(s, str) for s in names):
        raise FormatError(f"{where}: feature_names must be an array of strings")
    if not isinstance(data["models"], list):
        raise FormatError(f"{where}: models must be an array")
    models = tuple(_model_from_obj(obj, i) for i, obj in enumerate(data["models"]))
    return Portfolio(
        feature_names=tuple(names),
        models=models,
        dataset_name=str(data.get("dataset", "")),
        method_name=str(data.get("method", "")),
        performance_metric_name=str(data.get("performance_metric", "performance")),
        fairness_metric_name=str(data.get("fairness_metric", "fairness")),
    )


def _load_json(path: Path) -> Portfolio:
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return portfolio_from_obj(data, where=str(path))


_CSV_FIXED_COLUMNS = ("model_id", "trade_off_param", "performance", "fairness")


def _load_csv(path: Path) -> Portfolio:
    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise FormatError(f"{path}: empty file") from None
        for required in ("model_id", "performance", "fairness"):
            if required not in header:
                raise FormatError(f"{path}: line 1: missing required column '{required}'")
        feature_names = []
        for col in header:
            if col.startswith("imp:"):
                feature_names.append(col[len("imp:"):])
            elif col not in _CSV_FIXED_COLUMNS:
                raise FormatError(f"{path}: line 1: unknown column '{col}'")
        col_of = {name: header.index(name) for name in header}
        models = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise FormatError(
                    f"{path}: line {lineno}: expected {len(header)} fields, got {len(row)}"
                )

            def parse(col: str, text: str) -> float:
                try:
                    return float(text)
                except ValueError:
                    raise FormatError(
                        f"{path}: line {lineno}, column '{col}': not a number: {text!r}"
                    ) from None

            theta = None
            if "trade_off_param" in col_of:
                raw = row[col_of["trade_off_param"]].strip()
                theta = parse("trade_off_param", raw) if raw else None
            models.append(
                ModelRecord(
                    id=row[col_of["model_id"]],
                    trade_off_param=theta,
                    performance=parse("performance", row[col_of["performance"]]),
                    fairness=parse("fairness", row[col_of["fairness"]]),
                    importances=tuple(
                        parse(f"imp:{name}", row[col_of[f"imp:{name}"]])
                        for name in feature_names
                    ),
                )
            )
    return Portfolio(feature_names=tuple(feature_names), models=tuple(models))


def load_portfolio(path: str | Path, format: str = "auto") -> Portfolio:
    """Load and validate a portfolio file.

    ``format`` is "structured-object", "delimited-table", or "auto"
    (suffix-based: .csv means delimited-table, anything else structured-object).
    """
    path = Path(path)
    if not path.exists():
        raise FormatError(f"{path}: file not found")
    if format == "auto":
        format = "delimited-table" if path.suffix.lower() == ".csv" else "structured-object"
    if format == "structured-object":
        return _load_json(path)
    if format == "delimited-table":
        return _load_csv(path)
    raise FormatError(f"unknown portfolio format '{format}'")


def save_portfolio(p: Portfolio, path: str | Path, format: str = "auto") -> None:
    """Write a portfolio in either file format (suffix-based when "auto")."""
    path = Path(path)
    if format == "auto":
        format = "delimited-table" if path.suffix.lower() == ".csv" else "structured-object"
    if format == "structured-object":
        path.write_text(json.dumps(p.to_dict(), indent=2) + "\n", encoding="utf-8")
    elif format == "delimited-table":
        with path.open("w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            writer.writerow(
                ["model_id", "trade_off_param", "performance", "fairness"]
                + [f"imp:{name}" for name in p.feature_names]
            )
            for m in p.models:
                theta = "" if m.trade_off_param is None else repr(m.trade_off_param)
                writer.writerow(
                    [m.id, theta, repr(m.performance), repr(m.fairness)]
                    + [repr(v) for v in m.importances]
                )
    else:
        raise FormatError(f"unknown portfolio format '{format}'")


@dataclass(frozen=True)
class PlaneBounds:
    """Fixed min-max bounds for plane normalization (what-if stability)."""

    perf_min: float
    perf_max: float
    fair_min: float
    fair_max: float


def normalize_plane(p: Portfolio, bounds: PlaneBounds | None = None) -> np.ndarray:
    """Min-max scale (performance, fairness) per axis; (n_models, 2) array.

    A constant axis maps to 0 for every model. When ``bounds`` is given the
    scaling uses those fixed extremes instead of the portfolio's own, which
    decouples the result from portfolio composition (values are not clipped).
    """
    values = p.plane_values()
    if bounds is None:
        lo = values.min(axis=0)
        hi = values.max(axis=0)
    else:
        lo = np.array([bounds.perf_min, bounds.fair_min])
        hi = np.array([bounds.perf_max, bounds.fair_max])
    span = hi - lo
    out = np.zeros_like(values)
    for axis in range(2):
        if span[axis] > 0:
            out[:, axis] = (values[:, axis] - lo[axis]) / span[axis]
        else:
            logger.warning(
                "plane axis %d is constant; normalized values set to 0",
                axis,
            )
    return out
