"""HTTP/JSON surface over the scanner.

Endpoints:
    GET  /health                     liveness + loaded model id
    GET  /search?q=&limit=           ranked fuzzy title matches
    GET  /article/{title}/metadata   fetched article metadata
    POST /scan {"title": ...}        full verdict (same JSON as the CLI)
    GET  /model                      model id, feature config, training summary

Client mistakes return 4xx; upstream metadata failures return 502 with a
retry hint. All inference is read-only over the immutable model and index.
"""

from __future__ import annotations

import threading

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from .errors import DataError, FetchError
from .scanner import Scanner, ScannerConfig, build_scanner


class ScanRequest(BaseModel):
    title: str


def create_app(config: ScannerConfig) -> FastAPI:
    """Build the service; refuses to start when the model cannot load."""
    scanner: Scanner = build_scanner(config)
    fetch_gate = threading.Semaphore(config.fetch_concurrency)
    app = FastAPI(title="wiki template-translation scanner")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.get("/health")
    def health():
        return {"status": "ok", "model_id": scanner.model.model_id}

    @app.get("/search")
    def search(q: str = "", limit: int = 10):
        if not q:
            raise HTTPException(status_code=400, detail="query parameter q is required")
        if limit < 1:
            raise HTTPException(status_code=400, detail="limit must be >= 1")
        try:
            matches = scanner.search(q, limit)
        except DataError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return {"query": q, "results": [
            {"title": title, "score": score} for title, score in matches
        ]}

    @app.get("/article/{title}/metadata")
    def article_metadata(title: str):
        with fetch_gate:
            try:
                meta = scanner.fetch_metadata(title)
            except FetchError as exc:
                raise HTTPException(status_code=502,
                                    detail=f"{exc} (retry may succeed)") from exc
            except DataError as exc:
                raise HTTPException(status_code=400, detail=str(exc)) from exc
        return {"title": title, "metadata": meta.to_json_dict()}

    @app.post("/scan")
    def scan(request: ScanRequest):
        if not request.title:
            raise HTTPException(status_code=400, detail="title must be non-empty")
        with fetch_gate:
            try:
                verdict = scanner.scan(request.title)
            except FetchError as exc:
                raise HTTPException(status_code=502,
                                    detail=f"{exc} (retry may succeed)") from exc
            except DataError as exc:
                raise HTTPException(status_code=400, detail=str(exc)) from exc
        return verdict.to_json_dict()

    @app.get("/model")
    def model_info():
        model = scanner.model
        return {
            "model_id": model.model_id,
            "model_type": model.model_type,
            "feature_config": model.feature_config.to_json_dict(),
            "training_summary": model.training_summary,
        }

    return app


def serve(config: ScannerConfig, host: str = "127.0.0.1") -> None:
    """Run the service with uvicorn (blocking)."""
    import uvicorn

    app = create_app(config)
    uvicorn.run(app, host=host, port=config.port, log_level="info")
