"""Zeckendorf numeration endpoints: encoding, odometer addition, blocks."""

from typing import List

from fastapi import APIRouter, Query, Request

from src.api import run_blocking
from src.core.adic import AdicPrefix, add_fib, classify_add_fib, delta_int
from src.core.fibzeck import decode, digit_sum, encode
from src.models import (
    AddResponse,
    BlocksResponse,
    DecodeResponse,
    DeltaResponse,
    EncodeResponse,
    blocks_model,
)
from src.services.blocks import decompose


router = APIRouter()


def _add(n: int, r: int) -> AddResponse:
    x = AdicPrefix.from_int(n, r)
    cases: List[str] = []
    for q in encode(r).ones():
        cases.append(classify_add_fib(x, q).value)
        x = add_fib(x, q)
    return AddResponse(n=n, r=r, word=str(x.word.canonical()), value=x.value, cases=cases)


@router.get(
    "/encode",
    response_model=EncodeResponse,
    summary="Encode",
    description="Greedy Zeckendorf word of n, most significant digit first"
)
async def encode_endpoint(n: int = Query(..., ge=0)):
    word = encode(n)
    return EncodeResponse(n=n, word=str(word), digit_sum=digit_sum(word))


@router.get(
    "/decode",
    response_model=DecodeResponse,
    summary="Decode",
    description="Integer value of a 0/1 word; adjacent ones are rejected"
)
async def decode_endpoint(word: str = Query(..., max_length=10_000)):
    return DecodeResponse(word=word, n=decode(word))


@router.get(
    "/add",
    response_model=AddResponse,
    summary="Add",
    description="n + r through the carry engine, with the addition-table case of every summand"
)
async def add_endpoint(request: Request, n: int = Query(..., ge=0), r: int = Query(..., ge=0)):
    return await run_blocking(request, _add, n, r)


@router.get(
    "/delta",
    response_model=DeltaResponse,
    summary="Digit-sum variation",
    description="s(n + r) - s(n)"
)
async def delta_endpoint(request: Request, n: int = Query(..., ge=0), r: int = Query(..., ge=0)):
    value = await run_blocking(request, delta_int, n, r)
    return DeltaResponse(n=n, r=r, delta=value)


@router.get(
    "/blocks",
    response_model=BlocksResponse,
    summary="Blocks",
    description="Block decomposition of r with partial sums and Adm windows"
)
async def blocks_endpoint(r: int = Query(..., ge=0)):
    return blocks_model(decompose(r))
