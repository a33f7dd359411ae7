"""Run the sidecar: ``python -m embed_sidecar`` or ``embed-sidecar``."""

import uvicorn

from .app import create_app
from .config import SidecarConfig


def main() -> None:
    config = SidecarConfig.from_env()
    uvicorn.run(create_app(config), host="0.0.0.0", port=config.port, log_level="info")


if __name__ == "__main__":
    main()
