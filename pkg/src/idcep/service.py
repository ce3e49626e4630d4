"""HTTP compute service for the interactive truth-CEP explorer.

Stateless JSON endpoints:

    GET  /api/health      liveness probe
    GET  /api/scenarios   the eight benchmark scenario presets
    POST /api/truth-cep   truth-CEP cloud + line for explicit arm parameters

Invalid request bodies return 400 with field-level messages; a syntactically
valid but non-positive-semi-definite correlation matrix returns 422. The
response cloud is deterministically thinned to at most 2000 points; the line
is always fitted on the full cloud before thinning. When a built frontend
bundle is present it is served from the same app.
"""

from __future__ import annotations

import os
from typing import Literal, Optional

from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field, model_validator

from .cep import CepConfig, truth_cep
from .models import (EQUAL_13_23, FULL_SIX, INDEPENDENT_THREE, ArmModel,
                     DomainError, FrailtyConfig, NotPositiveSemiDefinite,
                     build_six_corr)
from .simulate import CONTROL_SCALES, SCENARIO_LABELS, SCENARIO_TREATED_SCALES


class ArmSpec(BaseModel):
    gamma12: float = Field(gt=0, description="1->2 Weibull scale")
    gamma13: float = Field(ge=0, description="1->3 Weibull scale")
    gamma23: float = Field(ge=0, description="2->3 Weibull scale")
    alpha12: float = Field(default=1.0, gt=0)
    alpha13: float = Field(default=1.0, gt=0)
    alpha23: float = Field(default=1.0, gt=0)
    theta23: float = 0.0

    def to_model(self):
        return ArmModel.from_scales(self.gamma12, self.gamma13, self.gamma23,
                                    a12=self.alpha12, a13=self.alpha13, a23=self.alpha23,
                                    theta=self.theta23)


class FrailtySpec(BaseModel):
    structure: Literal[EQUAL_13_23, INDEPENDENT_THREE, FULL_SIX] = EQUAL_13_23
    sigma_omega: float = Field(default=0.4, gt=0)
    rho_s: float = Field(default=0.5, ge=-1, le=1)
    rho_t: float = Field(default=0.5, ge=-1, le=1)
    rho_st: Optional[float] = Field(default=None, ge=-1, le=1)
    rho_t1: float = Field(default=0.95, ge=-1, le=1)
    rho_t4: float = Field(default=0.95, ge=-1, le=1)
    full_corr: Optional[list[list[float]]] = None

    def to_config(self):
        kwargs = dict(structure=self.structure, sigma_omega=self.sigma_omega,
                      rho_s=self.rho_s, rho_t=self.rho_t, rho_st=self.rho_st)
        if self.structure == FULL_SIX:
            if self.full_corr is not None:
                kwargs["full_corr"] = self.full_corr
            else:
                kwargs["full_corr"] = build_six_corr(
                    rho_s=self.rho_s, rho_t=self.rho_t, rho_t1=self.rho_t1,
                    rho_t4=self.rho_t4, rho_t2=self.rho_t, rho_t3=self.rho_t,
                    rho_st=self.rho_st if self.rho_st is not None else self.rho_t)
        return FrailtyConfig(**kwargs)


class TruthCepRequest(BaseModel):
    control: ArmSpec
    treated: ArmSpec
    frailty: FrailtySpec = FrailtySpec()
    tau_s: float = Field(default=1.0, gt=0)
    tau_t: float = Field(default=5.0, gt=0)
    n_draws: int = Field(default=20_000, ge=1000, le=500_000)
    seed: int = 0
    max_points: int = Field(default=2000, ge=10, le=2000)

    @model_validator(mode="after")
    def _check_taus(self):
        if not self.tau_s < self.tau_t:
            raise ValueError("tau_s must be smaller than tau_t")
        return self


def scenario_presets():
    presets = []
    for sid in sorted(SCENARIO_TREATED_SCALES):
        g0, g1 = CONTROL_SCALES, SCENARIO_TREATED_SCALES[sid]
        presets.append({
            "id": sid, "label": SCENARIO_LABELS[sid],
            "control": {"gamma12": g0[0], "gamma13": g0[1], "gamma23": g0[2],
                        "alpha12": 1.0, "alpha13": 1.0, "alpha23": 1.0, "theta23": 0.0},
            "treated": {"gamma12": g1[0], "gamma13": g1[1], "gamma23": g1[2],
                        "alpha12": 1.0, "alpha13": 1.0, "alpha23": 1.0, "theta23": 0.0},
        })
    return presets


def create_app():
    app = FastAPI(title="idcep explorer service", version="0.1.0")

    @app.exception_handler(RequestValidationError)
    async def on_validation_error(request: Request, exc: RequestValidationError):
        detail = [{"loc": [str(p) for p in e["loc"]], "msg": e["msg"]} for e in exc.errors()]
        return JSONResponse(status_code=400, content={"detail": detail})

    @app.get("/api/health")
    def health():
        return {"status": "ok", "service": "idcep", "version": "0.1.0"}

    @app.get("/api/scenarios")
    def scenarios():
        return scenario_presets()

    @app.post("/api/truth-cep")
    def compute_truth_cep(req: TruthCepRequest):
        try:
            frailty = req.frailty.to_config()
            config = CepConfig(tau_s=req.tau_s, tau_t=req.tau_t,
                               rho_s=req.frailty.rho_s, rho_t=req.frailty.rho_t,
                               sigma_omega=req.frailty.sigma_omega)
            result = truth_cep(req.control.to_model(), req.treated.to_model(), config,
                               n_draws=req.n_draws, seed=req.seed, frailty=frailty)
        except NotPositiveSemiDefinite as e:
            raise HTTPException(status_code=422, detail=str(e))
        except DomainError as e:
            raise HTTPException(status_code=400, detail=str(e))
        return result.to_dict(max_points=req.max_points)

    bundle = os.environ.get("IDCEP_FRONTEND", os.path.join("frontend", "dist"))
    if os.path.isdir(bundle):
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=bundle, html=True), name="frontend")
    return app


app = create_app()
