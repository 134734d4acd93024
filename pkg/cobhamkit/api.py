from typing import Dict, List, Optional

import uvicorn
from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .approx import approx_powers, dependence_exponents, format_fraction, parse_fraction
from .cobham import extract, format_certificate, parse_certificate, verify_certificate
from .config import SearchConfig, load_settings
from .dfao import parse_dfao, prefix
from .errors import CobhamError

app = FastAPI(title="Cobham Kit", description="Eventual-periodicity certificates for automatic sequences", version="0.1.0")

settings = load_settings()


class EvaluateRequest(BaseModel):
    dfao: str
    x: int = Field(ge=0)


class PrefixRequest(BaseModel):
    dfao: str
    count: int = Field(ge=0, le=100_000)


class IndependenceRequest(BaseModel):
    a: int = Field(ge=2)
    b: int = Field(ge=2)


class ApproxRequest(BaseModel):
    a: int = Field(ge=2)
    b: int = Field(ge=2)
    eps: str  # "p/q"


class ExtractRequest(BaseModel):
    dfao_a: str
    dfao_b: str
    witness_cap: Optional[int] = Field(default=None, gt=0)


class VerifyRequest(BaseModel):
    dfao: str
    certificate: str
    window: Optional[int] = Field(default=None, ge=0)
    samples: Optional[int] = Field(default=None, ge=0)
    seed: Optional[int] = None


class ApproxResponse(BaseModel):
    m: int
    n: int
    difference: str
    eps: str


class ExtractResponse(BaseModel):
    threshold: str
    period: str
    xi: int
    approx: ApproxResponse
    periods: Dict[int, str]
    certificate: str


class VerifyResponse(BaseModel):
    passed: bool
    window_checked: int
    samples_checked: int
    counterexample: Optional[str] = None
    values: Optional[List[str]] = None


def _domain_call(func, *args):
    try:
        return func(*args)
    except CobhamError as e:
        raise HTTPException(status_code=400, detail=str(e))


@app.get("/health")
async def health_check():
    return {"status": "healthy", "service": "cobham-kit"}


@app.post("/evaluate")
async def evaluate_sequence(request: EvaluateRequest):
    dfao = _domain_call(parse_dfao, request.dfao)
    return {"x": request.x, "value": dfao.evaluate(request.x)}


@app.post("/prefix")
async def sequence_prefix(request: PrefixRequest):
    dfao = _domain_call(parse_dfao, request.dfao)
    return {"values": prefix(dfao, request.count)}


@app.post("/independence")
async def independence(request: IndependenceRequest):
    exponents = _domain_call(dependence_exponents, request.a, request.b)
    if exponents is None:
        return {"independent": True, "m": None, "n": None}
    return {"independent": False, "m": exponents[0], "n": exponents[1]}


@app.post("/approx", response_model=ApproxResponse)
async def approximate_powers(request: ApproxRequest):
    eps = _domain_call(parse_fraction, request.eps)
    pair = _domain_call(approx_powers, request.a, request.b, eps, settings.search.approx_iteration_cap)
    return ApproxResponse(m=pair.m, n=pair.n, difference=str(pair.difference), eps=format_fraction(pair.eps))


@app.post("/extract", response_model=ExtractResponse)
def extract_certificate(request: ExtractRequest):
    # Sync handler: extraction is CPU-bound and runs in the threadpool.
    dfao_a = _domain_call(parse_dfao, request.dfao_a)
    dfao_b = _domain_call(parse_dfao, request.dfao_b)
    search: SearchConfig = settings.search
    if request.witness_cap is not None:
        search = search.model_copy(update={"witness_cap": request.witness_cap})
    cert = _domain_call(extract, dfao_a, dfao_b, search)
    trace = cert.trace
    return ExtractResponse(
        threshold=str(cert.threshold),
        period=str(cert.period),
        xi=trace.xi,
        approx=ApproxResponse(
            m=trace.approx.m,
            n=trace.approx.n,
            difference=str(trace.approx.difference),
            eps=format_fraction(trace.eps),
        ),
        periods={s: str(p) for s, p in trace.periods.items()},
        certificate=format_certificate(cert),
    )


@app.post("/verify", response_model=VerifyResponse)
def verify(request: VerifyRequest):
    dfao = _domain_call(parse_dfao, request.dfao)
    cert = _domain_call(parse_certificate, request.certificate)
    report = _domain_call(
        verify_certificate,
        dfao,
        cert,
        settings.verify_window if request.window is None else request.window,
        settings.verify_samples if request.samples is None else request.samples,
        settings.seed if request.seed is None else request.seed,
    )
    return VerifyResponse(
        passed=report.passed,
        window_checked=report.window_checked,
        samples_checked=report.samples_checked,
        counterexample=None if report.counterexample is None else str(report.counterexample),
        values=None if report.counterexample_values is None else list(report.counterexample_values),
    )


if __name__ == "__main__":
    uvicorn.run(app, host="0.0.0.0", port=8000)
