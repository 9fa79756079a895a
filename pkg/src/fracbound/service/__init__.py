"""HTTP service layer: pydantic request/response models, transport-agnostic
handlers, and the FastAPI application wiring."""

from .app import create_app

__all__ = ["create_app"]
