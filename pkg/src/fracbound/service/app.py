"""FastAPI application exposing the verification operations.

Endpoints mirror the CLI subcommands one-to-one; malformed specs and
out-of-domain parameters map to 422 so clients can distinguish configuration
errors from verification outcomes (which are always 200 with a status field).
"""

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import ConfigError, DomainError
from . import handlers, models


def create_app() -> FastAPI:
    app = FastAPI(
        title="fracbound",
        version=__version__,
        description=(
            "Verification service for Ostrowski-type bounds over "
            "Riemann-Liouville fractional integrals of h-convex functions"
        ),
    )

    @app.exception_handler(ConfigError)
    @app.exception_handler(DomainError)
    async def _bad_request(request: Request, exc: Exception) -> JSONResponse:
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "version": __version__}

    @app.get("/registry", response_model=models.RegistryResponse)
    def registry():
        return handlers.handle_registry()

    @app.post("/check-props", response_model=models.CheckPropsResponse)
    def check_props(req: models.CheckPropsRequest):
        return handlers.handle_check_props(req)

    @app.post("/identity", response_model=models.IdentityResponse)
    def identity(req: models.IdentityRequest):
        return handlers.handle_identity(req)

    @app.post("/sweep", response_model=models.SweepResponse)
    def sweep(req: models.SweepRequest):
        return handlers.handle_sweep(req)

    @app.post("/tightness", response_model=models.TightnessResponse)
    def tightness(req: models.TightnessRequest):
        return handlers.handle_tightness(req)

    @app.post("/compare-classical", response_model=models.CompareClassicalResponse)
    def compare_classical(req: models.CompareClassicalRequest):
        return handlers.handle_compare_classical(req)

    @app.post("/corollary", response_model=models.CorollaryResponse)
    def corollary(req: models.CorollaryRequest):
        return handlers.handle_corollary(req)

    return app


app = create_app()
