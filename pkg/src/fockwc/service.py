"""HTTP front end: the classification pipeline behind a small FastAPI app.

POST /run    one JobConfig -> Report
POST /sweep  {"jobs": [JobConfig, ...]} -> SweepSummary (reports inline)
GET  /healthz

Validation errors surface as 422 responses; per-job failures inside a sweep
land in the summary rows instead of failing the request.
"""

from __future__ import annotations

from fastapi import FastAPI

from . import pipeline
from .schemas import JobConfig, Report, SweepRequest, SweepSummary

app = FastAPI(
    title="fockwc",
    description="Classification and numeric verification of weighted composition operators on Fock spaces",
    version="0.1.0",
)


@app.get("/healthz")
def healthz():
    return {"status": "ok"}


@app.post("/run", response_model=Report, response_model_exclude_none=True)
def run_job(config: JobConfig) -> Report:
    return pipeline.run(config)


@app.post("/sweep", response_model=SweepSummary, response_model_exclude_none=True)
def run_sweep(request: SweepRequest) -> SweepSummary:
    return pipeline.sweep(request.jobs)


def serve(host: str = "127.0.0.1", port: int = 8000) -> None:
    import uvicorn

    uvicorn.run(app, host=host, port=port)
