"""HTTP front end over the operation layer.

Every endpoint is a POST taking one of the request schemas and
returning the matching response schema.  Domain errors carry their own
status codes: malformed mathematical input maps to 422 and budget or
precision exhaustion to 503, so a retriable failure never looks like a
bad request.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import api, schemas
from .errors import InvalidInputError, RetriableError

app = FastAPI(title="tameweil", version="1.0.0")


@app.exception_handler(InvalidInputError)
async def _invalid_input(request: Request, exc: InvalidInputError):
    return JSONResponse(status_code=422, content={"detail": str(exc)})


@app.exception_handler(RetriableError)
async def _retriable(request: Request, exc: RetriableError):
    return JSONResponse(status_code=503, content={"detail": str(exc)})


@app.get("/healthz")
def healthz():
    return {"status": "ok"}


@app.post("/classify", response_model=schemas.CertificateOut)
def classify_endpoint(req: schemas.ClassifyRequest):
    return api.run_classify(req)


@app.post("/check-poly", response_model=schemas.CheckPolyResponse)
def check_poly_endpoint(req: schemas.CheckPolyRequest):
    return api.run_check_poly(req)


@app.post("/honda-tate", response_model=schemas.HondaTateResponse)
def honda_tate_endpoint(req: schemas.HondaTateRequest):
    return api.run_honda_tate(req)


@app.post("/decompose", response_model=schemas.DecomposeResponse)
def decompose_endpoint(req: schemas.DecomposeRequest):
    return api.run_decompose(req)


@app.post("/corpus", response_model=schemas.CorpusResponse)
def corpus_endpoint(req: schemas.CorpusRequest):
    return api.run_corpus(req)
