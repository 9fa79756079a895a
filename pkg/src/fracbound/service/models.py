"""Request and response models of the verification service.

These are the wire schema: the CLI builds the request models, the handlers
return the response models, and reports serialize them as JSON.  Responses
carry no timestamps or environment data, so identical requests serialize to
identical bytes.
"""

from typing import Literal, Optional

from pydantic import BaseModel, Field

Variant = Literal["first", "second", "both"]

DEFAULT_ALPHAS = [0.5, 1.0, 1.5, 2.0]


class QuadratureOverrides(BaseModel):
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_subdivisions: int = 200


class CheckPropsRequest(BaseModel):
    h: Optional[str] = None
    f: Optional[str] = None
    q: float = 1.0
    grid_n: int = 101


class PropertyReportModel(BaseModel):
    holds: bool
    worst_violation: float
    witness: list[float]


class CheckPropsResponse(BaseModel):
    target: str
    kind: Literal["h", "f"]
    claims: dict[str, bool]
    checks: dict[str, PropertyReportModel]
    consistent: bool
    status: Literal["pass", "fail"]


class IdentityRequest(BaseModel):
    f: list[str] = Field(min_length=1)
    alphas: list[float] = DEFAULT_ALPHAS
    x_count: int = 21
    quadrature: QuadratureOverrides = QuadratureOverrides()


class IdentityRow(BaseModel):
    f: str
    alpha: float
    x: float
    residual: float


class IdentityResponse(BaseModel):
    rows: list[IdentityRow]
    max_residual: float
    tolerance: float
    status: Literal["pass", "fail"]


class SweepRequest(BaseModel):
    f: str
    h: str
    theorem: Literal[1, 2, 3]
    variant: Variant = "first"
    alphas: list[float] = DEFAULT_ALPHAS
    x_count: int = 101
    ps: list[float] = []
    qs: list[float] = []
    grid_n: int = 101
    quadrature: QuadratureOverrides = QuadratureOverrides()


class BoundReportModel(BaseModel):
    x: float
    alpha: float
    s: Optional[float] = None
    p: Optional[float] = None
    q: Optional[float] = None
    lhs: float
    bound_first: Optional[float] = None
    slack_first: Optional[float] = None
    bound_second: Optional[float] = None
    slack_second: Optional[float] = None
    certified: bool
    extrapolated: bool


class SweepResponse(BaseModel):
    function_name: str
    h_name: str
    theorem: int
    variant: Variant
    alphas: list[float]
    x_count: int
    ps: list[float]
    qs: list[float]
    hypothesis_flags: dict[str, bool]
    status: Literal["pass", "fail", "divergent", "uncertified"]
    violations: int
    min_slack: Optional[float] = None
    argmin_x: Optional[float] = None
    error: Optional[str] = None
    reports: list[BoundReportModel] = []


class TightnessRequest(BaseModel):
    f: str
    h: str
    theorem: Literal[1, 2, 3]
    variant: Variant = "first"
    alpha: float = 1.0
    p: Optional[float] = None
    q: Optional[float] = None
    quadrature: QuadratureOverrides = QuadratureOverrides()


class TightnessResponse(BaseModel):
    function_name: str
    h_name: str
    theorem: int
    variant: Variant
    alpha: float
    p: Optional[float] = None
    q: Optional[float] = None
    x_star: float
    min_slack: float
    coarse_min_slack: float
    evaluations: int
    status: Literal["pass", "fail"]


class CompareClassicalRequest(BaseModel):
    h: str
    p: Optional[float] = None
    quadrature: QuadratureOverrides = QuadratureOverrides()


class CompareClassicalResponse(BaseModel):
    h_name: str
    thm1_factor: float
    thm1_better: bool
    p: Optional[float] = None
    thm2_lhs_factor: Optional[float] = None
    thm2_threshold: Optional[float] = None
    thm2_better: Optional[bool] = None
    status: Literal["pass"] = "pass"


class CorollaryRequest(BaseModel):
    theorems: list[Literal[1, 2, 3]] = [1, 2, 3]
    s_values: list[float] = [0.25, 0.5, 0.75, 1.0]
    alphas: list[float] = [0.5, 1.0, 2.0]
    p: float = 2.0
    q: float = 2.0
    M: float = 1.0
    a: float = 0.0
    b: float = 1.0
    x: float = 0.5
    quadrature: QuadratureOverrides = QuadratureOverrides()


class CorollaryRow(BaseModel):
    theorem: int
    variant: Literal["first", "second"]
    s: float
    alpha: float
    p: Optional[float] = None
    q: Optional[float] = None
    closed_form: float
    quadrature: float
    rel_err: float
    ok: bool


class CorollaryResponse(BaseModel):
    rows: list[CorollaryRow]
    max_rel_err: float
    tolerance: float
    status: Literal["pass", "fail"]


class RegistryEntry(BaseModel):
    name: str
    parameters: list[str]
    description: str
    claims: dict[str, bool] = {}


class RegistryResponse(BaseModel):
    h_functions: list[RegistryEntry]
    f_functions: list[RegistryEntry]
