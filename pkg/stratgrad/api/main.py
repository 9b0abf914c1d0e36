"""
@file stratgrad/api/main.py

Small HTTP surface over the persistence backend: barcodes and diagram
distances. Run with ``uvicorn stratgrad.api.main:app``.
"""

from typing import List

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from stratgrad import __version__
from stratgrad.errors import StratgradError
from stratgrad.models import Barcode, Interval
from stratgrad.topology.complex import check_filter, validate_complex
from stratgrad.topology.metrics import wq_distance
from stratgrad.topology.persistence import persistence_extended, persistence_ordinary
from stratgrad.utils.logger import logger

app = FastAPI(title="stratgrad API", version=__version__)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_methods=["GET", "POST", "OPTIONS"],
    allow_headers=["*"],
)


class ComplexPayload(BaseModel):
    n_vertices: int = Field(gt=0)
    simplices: List[List[int]]


class PhRequest(BaseModel):
    complex: ComplexPayload
    filter: List[float]
    extended: bool = True
    max_degree: int = Field(default=0, ge=0)


class DistRequest(BaseModel):
    a: List[Interval]
    b: List[Interval]
    q: float = Field(default=2.0, ge=1)


@app.get("/health")
async def health_check():
    logger.info("Health check endpoint was called")
    return {"status": "healthy", "version": __version__}


@app.post("/ph")
async def ph(request: PhRequest):
    logger.info(f"PH request on {request.complex.n_vertices} vertices, extended={request.extended}")
    try:
        K = validate_complex(request.complex.simplices, request.complex.n_vertices)
        x = check_filter(K, request.filter)
        compute = persistence_extended if request.extended else persistence_ordinary
        return {"intervals": compute(K, x, request.max_degree).model_dump(mode="json")["intervals"]}
    except StratgradError as e:
        logger.warning(f"rejected PH request: {type(e).__name__}: {e}")
        raise HTTPException(status_code=400, detail=f"{type(e).__name__}: {e}")
    except Exception as e:
        logger.exception("An unexpected error occurred during PH computation")
        raise HTTPException(status_code=500, detail=f"An internal server error occurred: {str(e)}")


@app.post("/dist")
async def dist(request: DistRequest):
    try:
        value, matching = wq_distance(Barcode(intervals=request.a), Barcode(intervals=request.b), request.q)
        return {"value": value, "matched": matching.matched,
                "unmatched_left": matching.unmatched_left, "unmatched_right": matching.unmatched_right}
    except StratgradError as e:
        logger.warning(f"rejected distance request: {type(e).__name__}: {e}")
        raise HTTPException(status_code=400, detail=f"{type(e).__name__}: {e}")
    except Exception as e:
        logger.exception("An unexpected error occurred during distance computation")
        raise HTTPException(status_code=500, detail=f"An internal server error occurred: {str(e)}")
