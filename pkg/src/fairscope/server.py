"""HTTP service exposing the pipeline to the explorer UI.

One in-memory portfolio, an append-only in-memory run store, and a single
pipeline worker: runs execute serially in submission order under a lock,
portfolio replacement waits for the active run, and stored results are
immutable. Payloads mirror the results-file schema.
"""

from __future__ import annotations

import json
import logging
import threading
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .constraints import ConstraintConfig
from .errors import (
    FairscopeError,
    FormatError,
    NumericalError,
    PipelineStageError,
    ValidationError,
)
from .metric import ItmlConfig
from .pipeline import (
    DEFAULT_K_GRID,
    PipelineConfig,
    _feature_dict,
    _portfolio_summary,
    run as run_pipeline,
)
from .portfolio import Portfolio, normalize_plane, portfolio_from_obj
from .profiles import feature_summaries

logger = logging.getLogger(__name__)


class _ApiError(Exception):
    def __init__(self, status: int, detail):
        self.status = status
        self.detail = detail
        super().__init__(str(detail))


def _parse_run_config(body: dict) -> PipelineConfig:
    if not isinstance(body, dict):
        raise _ApiError(400, "request body must be a JSON object")
    known = {
        "sim_threshold", "dissim_threshold", "max_pairs_per_class",
        "k_grid", "k_min", "k_max", "k_override", "baseline_mode", "seed",
        "itml",
    }
    unknown = set(body) - known
    if unknown:
        raise _ApiError(400, f"unknown config keys: {sorted(unknown)}")
    try:
        constraint = ConstraintConfig(
            sim_threshold=float(body.get("sim_threshold", 0.05)),
            dissim_threshold=float(body.get("dissim_threshold", 0.2)),
            max_pairs_per_class=body.get("max_pairs_per_class"),
        )
        itml_body = body.get("itml") or {}
        itml = ItmlConfig(
            gamma=float(itml_body.get("gamma", 1.0)),
            max_iter=int(itml_body.get("max_iter", 600)),
            convergence_tol=float(itml_body.get("convergence_tol", 1e-3)),
            bound_u=itml_body.get("bound_u"),
            bound_l=itml_body.get("bound_l"),
        )
        if "k_grid" in body:
            k_grid = tuple(int(k) for k in body["k_grid"])
        else:
            k_min = int(body.get("k_min", DEFAULT_K_GRID[0]))
            k_max = int(body.get("k_max", DEFAULT_K_GRID[-1]))
            k_grid = tuple(range(k_min, k_max + 1))
        k_override = body.get("k_override")
        return PipelineConfig(
            constraint=constraint,
            itml=itml,
            k_grid=k_grid,
            k_override=int(k_override) if k_override is not None else None,
            baseline_mode=bool(body.get("baseline_mode", False)),
            seed=int(body.get("seed", 42)),
        )
    except (TypeError, ValueError) as exc:
        raise _ApiError(400, f"malformed config value: {exc}") from exc


class _State:
    def __init__(self, persist_dir: str | None = None):
        self.lock = threading.Lock()      # serializes runs and portfolio swaps
        self.portfolio: Portfolio | None = None
        self.runs: dict[str, dict] = {}   # run_id -> immutable results dict
        self.run_order: list[str] = []
        self.counter = 0
        self.persist_dir = Path(persist_dir) if persist_dir else None


def create_app(
    initial_portfolio: Portfolio | None = None,
    cors_origin: str | None = None,
    persist_dir: str | None = None,
) -> FastAPI:
    app = FastAPI(title="fairscope", version="0.1.0")
    state = _State(persist_dir=persist_dir)
    state.portfolio = initial_portfolio

    if cors_origin:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware,
            allow_origins=[cors_origin],
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.exception_handler(_ApiError)
    async def handle_api_error(request: Request, exc: _ApiError):
        return JSONResponse(status_code=exc.status, content={"detail": exc.detail})

    async def read_json(request: Request) -> dict:
        try:
            return json.loads(await request.body())
        except json.JSONDecodeError as exc:
            raise _ApiError(400, f"malformed JSON body: {exc}") from exc

    @app.get("/api/health")
    def health():
        return {"status": "ok", "portfolio_loaded": state.portfolio is not None}

    @app.post("/api/portfolio")
    async def upload_portfolio(request: Request):
        body = await read_json(request)
        try:
            portfolio = portfolio_from_obj(body, where="<body>")
        except (FormatError, ValidationError) as exc:
            raise _ApiError(400, str(exc)) from exc
        with state.lock:  # blocks until any active run completes
            state.portfolio = portfolio
        return {
            "fingerprint": portfolio.fingerprint(),
            "n_models": portfolio.n_models,
            "n_features": portfolio.n_features,
            "dataset": portfolio.dataset_name,
            "method": portfolio.method_name,
        }

    @app.get("/api/portfolio")
    def get_portfolio():
        p = state.portfolio
        if p is None:
            raise _ApiError(404, "no portfolio loaded")
        summary = _portfolio_summary(p)
        summary["fingerprint"] = p.fingerprint()
        summary["plane"] = [
            [float(perf), float(fair)] for perf, fair in normalize_plane(p)
        ]
        return summary

    def execute_run(cfg: PipelineConfig) -> dict:
        with state.lock:
            if state.portfolio is None:
                raise _ApiError(409, "no portfolio loaded")
            try:
                result = run_pipeline(state.portfolio, cfg)
            except PipelineStageError as exc:
                if isinstance(exc.cause, NumericalError):
                    raise _ApiError(500, {"stage": exc.stage, "message": str(exc.cause)})
                raise _ApiError(422, {"stage": exc.stage, "message": str(exc.cause)})
            except NumericalError as exc:
                raise _ApiError(500, {"stage": "pipeline", "message": str(exc)})
            except FairscopeError as exc:
                raise _ApiError(422, {"stage": "pipeline", "message": str(exc)})
            state.counter += 1
            run_id = f"run-{state.counter:04d}"
            payload = result.to_dict(include_timings=True)
            payload["run_id"] = run_id
            state.runs[run_id] = payload
            state.run_order.append(run_id)
            logger.info("stored %s (chosen k=%d)", run_id, payload["chosen_k"])
            if state.persist_dir is not None:
                state.persist_dir.mkdir(parents=True, exist_ok=True)
                out = result.to_json(include_timings=False)
                (state.persist_dir / f"{run_id}.json").write_text(out, encoding="utf-8")
            return {"run_id": run_id, "chosen_k": payload["chosen_k"],
                    "k_star": payload["validation"]["k_star"]}

    @app.post("/api/run")
    async def post_run(request: Request):
        body = await read_json(request)
        cfg = _parse_run_config(body)
        from starlette.concurrency import run_in_threadpool

        return await run_in_threadpool(execute_run, cfg)

    def get_run_or_404(run_id: str) -> dict:
        payload = state.runs.get(run_id)
        if payload is None:
            raise _ApiError(404, f"unknown run '{run_id}'")
        return payload

    @app.get("/api/runs/{run_id}")
    def get_run(run_id: str):
        return get_run_or_404(run_id)

    @app.get("/api/runs/{run_id}/validation")
    def get_run_validation(run_id: str):
        return get_run_or_404(run_id)["validation"]

    @app.get("/api/runs/{run_id}/clusters")
    def get_run_clusters(run_id: str):
        payload = get_run_or_404(run_id)
        return {
            "chosen_k": payload["chosen_k"],
            "assignments": payload["clustering"]["assignments"],
            "model_ids": [m["id"] for m in payload["portfolio"]["models"]],
        }

    @app.get("/api/runs/{run_id}/profiles")
    def get_run_profiles(run_id: str):
        return get_run_or_404(run_id)["clusters"]

    @app.get("/api/runs/{run_id}/features")
    def get_run_features(run_id: str, top_n: int | None = None):
        payload = get_run_or_404(run_id)
        if top_n is None:
            return payload["features"]
        p = state.portfolio
        if p is None or p.fingerprint() != payload["portfolio_fingerprint"]:
            raise _ApiError(409, "active portfolio no longer matches this run")
        try:
            summaries = feature_summaries(
                p, payload["clustering"]["assignments"], top_n=top_n
            )
        except FairscopeError as exc:
            raise _ApiError(422, str(exc)) from exc
        return [_feature_dict(f) for f in summaries]

    @app.get("/api/runs/{run_id}/heatmap")
    def get_run_heatmap(run_id: str):
        return get_run_or_404(run_id)["heatmap"]

    @app.get("/api/models/{model_id}")
    def get_model(model_id: str):
        p = state.portfolio
        if p is None:
            raise _ApiError(404, "no portfolio loaded")
        for idx, m in enumerate(p.models):
            if m.id == model_id:
                record = {
                    "id": m.id,
                    "trade_off_param": m.trade_off_param,
                    "performance": m.performance,
                    "fairness": m.fairness,
                    "importances": list(m.importances),
                    "hyperparameters": dict(m.hyperparameters) if m.hyperparameters else None,
                }
                cluster = None
                latest = state.run_order[-1] if state.run_order else None
                if latest is not None:
                    payload = state.runs[latest]
                    if payload["portfolio_fingerprint"] == p.fingerprint():
                        cluster = payload["clustering"]["assignments"][idx]
                return {"model": record, "latest_run_id": latest, "cluster": cluster}
        raise _ApiError(404, f"unknown model '{model_id}'")

    return app
