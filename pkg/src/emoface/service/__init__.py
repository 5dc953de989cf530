"""HTTP service and persistence for the demo blog application."""

from .config import ServiceConfig, build_models, load_config
from .core import (
    BlogService,
    PipelineModels,
    PostRecord,
    UserRecord,
    transfer_emotion,
)
from .http import create_app, serve
from .store import ContentStore

__all__ = [
    "BlogService",
    "ContentStore",
    "PipelineModels",
    "PostRecord",
    "ServiceConfig",
    "UserRecord",
    "build_models",
    "create_app",
    "load_config",
    "serve",
    "transfer_emotion",
]
