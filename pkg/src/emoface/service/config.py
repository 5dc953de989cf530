"""Service configuration: TOML file plus environment overrides."""

from __future__ import annotations

import os
import sys
from dataclasses import dataclass, field

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from ..faceprep.cascade import default_cascade_path


@dataclass
class ServiceConfig:
    port: int = 8765
    host: str = "127.0.0.1"
    store_root: str = "emoface_store"
    static_dir: str | None = None
    classifier_path: str | None = None
    gan_path: str | None = None
    cascade_path: str = field(default_factory=default_cascade_path)
    confidence_threshold: float = 0.25
    emotion_map: dict[str, str] | None = None


def load_config(path: str | None = None, env: dict | None = None) -> ServiceConfig:
    """Read TOML config (optional) and apply EMOFACE_* env overrides."""
    env = os.environ if env is None else env
    cfg = ServiceConfig()
    if path:
        with open(path, "rb") as fh:
            doc = tomllib.load(fh)
        service = doc.get("service", {})
        cfg.port = int(service.get("port", cfg.port))
        cfg.host = str(service.get("host", cfg.host))
        cfg.store_root = str(service.get("store_root", cfg.store_root))
        if "static_dir" in service:
            cfg.static_dir = str(service["static_dir"])
        models = doc.get("models", {})
        if "classifier" in models:
            cfg.classifier_path = str(models["classifier"])
        if "gan" in models:
            cfg.gan_path = str(models["gan"])
        if "cascade" in models:
            cfg.cascade_path = str(models["cascade"])
        pipeline = doc.get("pipeline", {})
        if "confidence_threshold" in pipeline:
            cfg.confidence_threshold = float(pipeline["confidence_threshold"])
        if "emotion_map" in doc:
            cfg.emotion_map = {str(k): str(v) for k, v in doc["emotion_map"].items()}
    if "EMOFACE_PORT" in env:
        cfg.port = int(env["EMOFACE_PORT"])
    if "EMOFACE_HOST" in env:
        cfg.host = env["EMOFACE_HOST"]
    if "EMOFACE_STORE_ROOT" in env:
        cfg.store_root = env["EMOFACE_STORE_ROOT"]
    if "EMOFACE_STATIC_DIR" in env:
        cfg.static_dir = env["EMOFACE_STATIC_DIR"]
    if "EMOFACE_CLASSIFIER" in env:
        cfg.classifier_path = env["EMOFACE_CLASSIFIER"]
    if "EMOFACE_GAN" in env:
        cfg.gan_path = env["EMOFACE_GAN"]
    if "EMOFACE_CASCADE" in env:
        cfg.cascade_path = env["EMOFACE_CASCADE"]
    if "EMOFACE_CONFIDENCE" in env:
        cfg.confidence_threshold = float(env["EMOFACE_CONFIDENCE"])
    return cfg


def build_models(cfg: ServiceConfig):
    """Load whatever model files the config points at."""
    from ..classifier import load_model
    from ..faceprep import load_cascade
    from ..gan import load_checkpoint
    from ..mapping import load_mapping
    from .core import PipelineModels

    models = PipelineModels(confidence_threshold=cfg.confidence_threshold)
    if cfg.classifier_path:
        models.classifier = load_model(cfg.classifier_path)
    if cfg.gan_path:
        models.gan = load_checkpoint(cfg.gan_path)
    if cfg.cascade_path:
        models.cascade = load_cascade(cfg.cascade_path)
    if cfg.emotion_map is not None:
        models.mapping = load_mapping(cfg.emotion_map)
    return models
