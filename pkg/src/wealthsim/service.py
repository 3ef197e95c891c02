"""HTTP facade over an immutable dataset snapshot.

The dataset is loaded and corrected once, before the server starts; request
handlers only read it, so concurrent simulations need no locking and return
exactly what a batch run on the same snapshot produces.
"""

from __future__ import annotations

import time

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from .report import Snapshot
from .tax import PRESET_DESIGNS, TaxDesign, design_diagnostics


class DesignPayload(BaseModel):
    base: str
    exemption_percentile: int
    rates: list[float]
    label: str = ""


class SimulateOptions(BaseModel):
    freeze_thresholds: bool = False


class SimulateRequest(BaseModel):
    design: DesignPayload
    options: SimulateOptions = Field(default_factory=SimulateOptions)


def _require_snapshot(app: FastAPI) -> Snapshot:
    snapshot = getattr(app.state, "snapshot", None)
    if snapshot is None:
        raise HTTPException(status_code=503, detail="snapshot not ready")
    return snapshot


def create_app(snapshot: Snapshot | None = None) -> FastAPI:
    app = FastAPI(title="wealthsim", version="0.1.0")
    app.state.snapshot = snapshot
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.get("/api/health")
    def health():
        return {"status": "ok", "ready": getattr(app.state, "snapshot", None) is not None}

    @app.get("/api/summary")
    def summary():
        snap = _require_snapshot(app)
        return {
            "reference_year": snap.reference_year,
            "implicates": len(snap.corrected.implicates),
            "records_per_implicate": snap.corrected.n_records,
            "bases": snap.base_summary,
        }

    @app.get("/api/presets")
    def presets():
        return [design.to_dict() for design in PRESET_DESIGNS]

    @app.post("/api/simulate")
    def simulate(request: SimulateRequest):
        snap = _require_snapshot(app)
        payload = request.design
        problems = design_diagnostics(
            payload.base, payload.exemption_percentile, payload.rates
        )
        if problems:
            raise HTTPException(
                status_code=422,
                detail={
                    "message": "invalid design",
                    "diagnostics": [
                        {"level": "error", "path": f"design.{path}", "message": msg}
                        for path, msg in problems
                    ],
                },
            )
        design = TaxDesign.from_dict(payload.model_dump())
        started = time.perf_counter()
        result = snap.evaluate(
            design, freeze_thresholds=request.options.freeze_thresholds
        )
        elapsed_ms = 1000.0 * (time.perf_counter() - started)
        return {
            **result.report.to_dict(),
            "label": design.label,
            "thresholds": {
                "t90": result.thresholds[0],
                "t95": result.thresholds[1],
                "t99": result.thresholds[2],
            },
            "timing_ms": elapsed_ms,
        }

    return app
