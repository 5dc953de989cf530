"""HTTP layer: JSON API over the blog service plus static frontend files."""

from __future__ import annotations

from fastapi import FastAPI, Request, UploadFile
from fastapi.responses import JSONResponse, Response
from pydantic import BaseModel

from ..errors import (
    EmofaceError,
    EmptyName,
    ModelNotLoaded,
    NoFaceDetected,
    NoPhotoOnProfile,
    UndecodableImage,
    UnknownUser,
)
from .core import BlogService

_ERROR_MAP: list[tuple[type, int, str]] = [
    (NoFaceDetected, 422, "no_face"),
    (UndecodableImage, 400, "undecodable"),
    (NoPhotoOnProfile, 409, "no_photo"),
    (UnknownUser, 404, "unknown_user"),
    (EmptyName, 400, "empty_name"),
    (ModelNotLoaded, 503, "model_not_loaded"),
]


class CreateUserBody(BaseModel):
    name: str


class CreatePostBody(BaseModel):
    text: str


def create_app(service: BlogService, static_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="emoface", docs_url=None, redoc_url=None)

    @app.exception_handler(EmofaceError)
    async def emoface_error_handler(request: Request, exc: EmofaceError):
        for cls, status, code in _ERROR_MAP:
            if isinstance(exc, cls):
                return JSONResponse(
                    status_code=status,
                    content={"error": code, "message": str(exc)},
                )
        return JSONResponse(
            status_code=500, content={"error": exc.code, "message": str(exc)}
        )

    @app.post("/api/users", status_code=201)
    def create_user(body: CreateUserBody):
        return {"user": service.create_user(body.name).to_dict()}

    @app.put("/api/users/{user_id}/photo")
    async def set_photo(user_id: str, file: UploadFile):
        data = await file.read()
        return {"user": service.set_photo(user_id, data).to_dict()}

    @app.post("/api/users/{user_id}/posts", status_code=201)
    def create_post(user_id: str, body: CreatePostBody):
        post, user = service.create_post(user_id, body.text)
        return {"post": post.to_dict(), "user": user.to_dict()}

    @app.get("/api/users/{user_id}")
    def get_user(user_id: str):
        return {"user": service.get_profile(user_id).to_dict()}

    @app.get("/api/users/{user_id}/posts")
    def list_posts(user_id: str):
        return {"posts": [p.to_dict() for p in service.list_posts(user_id)]}

    @app.get("/api/images/{digest}")
    def get_image(digest: str):
        try:
            data = service.get_image(digest)
        except KeyError:
            return JSONResponse(
                status_code=404,
                content={"error": "unknown_image", "message": digest},
            )
        return Response(
            content=data,
            media_type="image/png",
            headers={"Cache-Control": "public, max-age=31536000, immutable"},
        )

    @app.get("/api/health")
    def health():
        return service.health()

    if static_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="static")
    return app


def serve(config_path: str | None = None) -> None:
    """Build everything from config and run uvicorn (blocking)."""
    import uvicorn

    from .config import build_models, load_config
    from .store import ContentStore

    cfg = load_config(config_path)
    service = BlogService(ContentStore(cfg.store_root), build_models(cfg))
    app = create_app(service, static_dir=cfg.static_dir)
    uvicorn.run(app, host=cfg.host, port=cfg.port, log_level="warning")
