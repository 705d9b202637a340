"""Endpoints for the exact distribution mu^(r) and the cylinder towers."""

from typing import Optional

from fastapi import APIRouter, Query, Request

from src.api import run_blocking
from src.config import config
from src.models import (
    MuDistributionModel,
    MuMassResponse,
    MuMomentResponse,
    TowerDumpModel,
    distribution_model,
    golden,
    tower_model,
)
from src.services.mudist import get_distribution, mass_window, moment, mu_mass, tower_dump


router = APIRouter()

MAX_R = 1_000_000


def _distribution_window(r: int, lo: Optional[int], hi: Optional[int]) -> MuDistributionModel:
    return distribution_model(get_distribution(r), lo, hi)


def _single_mass(r: int, d: int) -> MuMassResponse:
    dist = get_distribution(r)
    mass_window(dist, d, d)
    return MuMassResponse(r=r, d=d, mass=golden(mu_mass(dist, d)))


@router.get(
    "/mu",
    response_model=MuDistributionModel,
    summary="Distribution",
    description="mu^(r) on [lo, hi] (default: the finite window) with the tail ratio below the threshold"
)
async def mu_endpoint(
    request: Request,
    r: int = Query(..., ge=0, le=MAX_R),
    lo: Optional[int] = Query(default=None),
    hi: Optional[int] = Query(default=None),
):
    return await run_blocking(request, _distribution_window, r, lo, hi)


@router.get(
    "/mu/mass",
    response_model=MuMassResponse,
    summary="Single mass",
    description="mu^(r)(d)"
)
async def mu_mass_endpoint(request: Request, r: int = Query(..., ge=0, le=MAX_R), d: int = Query(...)):
    return await run_blocking(request, _single_mass, r, d)


@router.get(
    "/mu/moment",
    response_model=MuMomentResponse,
    summary="Moment",
    description="Exact p-th moment of mu^(r)"
)
async def mu_moment_endpoint(
    request: Request,
    r: int = Query(..., ge=0, le=MAX_R),
    p: int = Query(..., ge=0, le=16),
):
    dist = await run_blocking(request, get_distribution, r)
    return MuMomentResponse(r=r, p=p, moment=golden(moment(dist, p)))


@router.get(
    "/towers",
    response_model=TowerDumpModel,
    summary="Towers",
    description="Large and small towers of order k, optionally annotated with the NIZ levels of r"
)
async def towers_endpoint(
    request: Request,
    k: int = Query(..., ge=2, le=config.TOWER_MAX_ORDER),
    r: Optional[int] = Query(default=None, ge=0),
):
    dump = await run_blocking(request, tower_dump, k, r)
    return tower_model(dump)
