"""Service configuration from environment variables."""

from __future__ import annotations

import os
from dataclasses import dataclass


@dataclass(frozen=True)
class SidecarConfig:
    """MODEL_NAME selects the embedding backend:

    - ``hash`` or ``hash:<dim>``: offline deterministic hashed-token model
      (the default; needs no downloaded weights).
    - ``st:<name>``: a sentence-transformers model, when its weights are
      available locally or downloadable.
    """

    model_name: str = "hash:384"
    port: int = 8901
    max_batch: int = 64
    device: str = "cpu"

    def __post_init__(self):
        if self.max_batch < 1:
            raise ValueError(f"MAX_BATCH must be >= 1, got {self.max_batch}")
        if not 0 < self.port < 65536:
            raise ValueError(f"PORT out of range: {self.port}")
        if self.device not in ("cpu", "accelerator"):
            raise ValueError(f"DEVICE must be cpu or accelerator, got {self.device!r}")

    @classmethod
    def from_env(cls, environ=None) -> "SidecarConfig":
        environ = os.environ if environ is None else environ
        return cls(
            model_name=environ.get("MODEL_NAME", cls.model_name),
            port=int(environ.get("PORT", cls.port)),
            max_batch=int(environ.get("MAX_BATCH", cls.max_batch)),
            device=environ.get("DEVICE", cls.device),
        )
