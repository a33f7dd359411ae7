"""Minimal HTTP service serving sentence embeddings.

Wire protocol:
  POST /embed  {"texts": [...]}  ->  {"model": str, "dim": int, "embeddings": [[...], ...]}
  GET  /health                   ->  {"status": "ok", "model": str, "dim": int}
"""

__version__ = "0.1.0"

from .app import create_app
from .config import SidecarConfig
from .models import HashedTokenModel, load_model

__all__ = ["SidecarConfig", "HashedTokenModel", "create_app", "load_model", "__version__"]
