"""FastAPI application serving the embedding wire protocol."""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .config import SidecarConfig
from .models import EmbeddingModel, EmptyTextError, load_model


class EmbedRequest(BaseModel):
    texts: list[str]


def _check_determinism(model: EmbeddingModel) -> None:
    probe = ["determinism probe sentence for service start"]
    first = model.embed(probe)
    second = model.embed(probe)
    if not np.allclose(first, second, atol=1e-6):
        raise RuntimeError(f"model {model.name} is not deterministic")


def create_app(config: SidecarConfig | None = None, model: EmbeddingModel | None = None) -> FastAPI:
    config = config or SidecarConfig.from_env()
    if model is None:
        model = load_model(config.model_name, device=config.device)
    _check_determinism(model)

    app = FastAPI(title="embed-sidecar")
    app.state.model = model
    app.state.config = config

    @app.get("/health")
    def health():
        return {"status": "ok", "model": model.name, "dim": model.dim}

    @app.post("/embed")
    def embed(request: EmbedRequest):
        if len(request.texts) > config.max_batch:
            raise HTTPException(
                status_code=413,
                detail=f"batch of {len(request.texts)} exceeds max_batch {config.max_batch}",
            )
        try:
            vectors = model.embed(request.texts)
        except EmptyTextError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        except Exception as exc:
            return JSONResponse(status_code=500, content={"error": f"model failure: {exc}"})
        return {"model": model.name, "dim": model.dim, "embeddings": vectors.tolist()}

    return app
