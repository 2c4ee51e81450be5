from enum import auto

try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        """Backport of enum.StrEnum: auto() yields the lower-cased member name."""

        @staticmethod
        def _generate_next_value_(name, start, count, last_values):
            return name.lower()

        def __str__(self):
            return str.__str__(self)

        def __format__(self, format_spec):
            return str.__format__(str(self), format_spec)
from typing import NamedTuple, Optional

from pydantic import BaseModel, Field, field_validator, model_validator


class IntegrandKind(StrEnum):
    PLANEWAVE = auto()
    QUADRATIC = auto()
    RADIAL = auto()
    HELMHOLTZ = auto()


class TransfiniteBlend(StrEnum):
    PROJECTION = auto()
    DISPLACEMENT = auto()


class DomainName(StrEnum):
    REFTRI = auto()
    UNITSQUARE = auto()
    RESONANCE = auto()


class CommandType(StrEnum):
    INTEGRATE = "integrate"
    SWEEP = "sweep"
    ORACLE = "oracle"
    GEN_DOMAIN = "gen-domain"
    SELFTEST = "selftest"


class Levin1dConfig(BaseModel):
    n_points: int = Field(16, ge=4, le=64)
    eps_svd: float = Field(1e-13, gt=0.0, lt=1.0)
    tol: float = Field(1e-12, gt=0.0, lt=1.0)
    max_depth: int = Field(40, ge=1)

    model_config = dict(frozen=True)


class Levin2dConfig(BaseModel):
    k: int = Field(8, ge=1)
    ell: int = Field(10, ge=2)
    eps_svd: float = Field(1e-13, gt=0.0, lt=1.0)
    residual_tol: float = Field(1e-10, gt=0.0, lt=1.0)
    max_depth: int = Field(12, ge=0)
    cfg1d: Levin1dConfig = Field(default_factory=Levin1dConfig)

    model_config = dict(frozen=True)

    @model_validator(mode="after")
    def _check_degrees(self) -> "Levin2dConfig":
        if self.ell <= self.k:
            raise ValueError(f"collocation degree ell={self.ell} must exceed basis degree k={self.k}")
        return self


class OracleConfig(BaseModel):
    gl_points: int = Field(30, ge=2, le=128)
    tol: float = Field(1e-12, gt=0.0, lt=1.0)
    max_depth: int = Field(30, ge=1)
    max_omega_2d: float = Field(1e3, gt=0.0)

    model_config = dict(frozen=True)


class RunSettings(BaseModel):
    levin: Levin2dConfig = Field(default_factory=Levin2dConfig)
    oracle: OracleConfig = Field(default_factory=OracleConfig)
    threads: int = Field(1, ge=1)

    model_config = dict(frozen=True)


class IntegrandSpec(BaseModel):
    kind: IntegrandKind
    omega: float = Field(0.0, ge=0.0)
    direction: tuple[float, float] = (1.0, 0.0)
    center: tuple[float, float] = (0.0, 0.0)

    model_config = dict(frozen=True)

    @field_validator("direction")
    @classmethod
    def _normalize_direction(cls, value: tuple[float, float]) -> tuple[float, float]:
        norm = (value[0] ** 2 + value[1] ** 2) ** 0.5
        if norm == 0.0:
            raise ValueError("direction must be nonzero")
        return (value[0] / norm, value[1] / norm)


class QuadratureResult(NamedTuple):
    value: complex
    error_estimate: float
    n_leaves: int
    n_boundary_segments: int
    svd_calls: int


class SweepRow(BaseModel):
    omega: float
    value_re: Optional[float] = None
    value_im: Optional[float] = None
    ref_re: Optional[float] = None
    ref_im: Optional[float] = None
    abs_err: Optional[float] = None
    time_ms: Optional[float] = None
    n_leaves: Optional[int] = None
    n_boundary_segments: Optional[int] = None
    svd_calls: Optional[int] = None
    status: str = "ok"


class IntegrateRow(BaseModel):
    value_re: float
    value_im: float
    err_est: float
    n_leaves: int
    n_boundary_segments: int
    svd_calls: int
    time_ms: Optional[float] = None


class OracleRow(BaseModel):
    method: str
    ref_re: float
    ref_im: float
    time_ms: Optional[float] = None


class SelftestRow(BaseModel):
    check: str
    status: str
    detail: str
