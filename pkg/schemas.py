from fractions import Fraction
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ball import BallReal
from config import Config


class CliConfig(BaseModel):
  model_config = ConfigDict(extra="forbid")

  precision: int = Field(default=Config.DEFAULT_PRECISION, description="Working precision in bits")
  cache_path: Optional[str] = Field(default=Config.CACHE_PATH, description="PL cache file")
  output_format: Literal["text", "records"] = Field(default="text")
  r: int = Field(default=Config.DEFAULT_R, description="Truncation order of the asymptotic")
  store: bool = Field(default=False, description="Persist runs in the results store")
  published_constants: bool = Field(default=False, description="Use the fallback C_2, D_2 table")
  verbose: bool = False

  @field_validator("output_format", mode="before")
  @classmethod
  def normalize_format(cls, value):
    if value is None:
      return "text"
    return str(value).strip().lower()

  @field_validator("precision")
  @classmethod
  def validate_precision(cls, value: int) -> int:
    if value < Config.MIN_PRECISION:
      raise ValueError(f"precision must be at least {Config.MIN_PRECISION} bits")
    if value > Config.MAX_PRECISION:
      raise ValueError(f"precision must be at most {Config.MAX_PRECISION} bits")
    return value

  @field_validator("r")
  @classmethod
  def validate_r(cls, value: int) -> int:
    if value < 1:
      raise ValueError("r must be at least 1")
    return value


class ConstantSet(BaseModel):
  """Every constant the effective asymptotic consumes, at one precision."""
  model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

  r: int
  precision: int
  A: BallReal
  c: BallReal
  alpha: List[BallReal] = Field(description="alpha_1 .. alpha_{r+2}")
  alpha_exact: List[Fraction]
  beta: List[BallReal] = Field(description="beta_0 .. beta_{r+1}")
  beta_exact: List[Fraction]
  b: List[List[BallReal]] = Field(description="b[s][m] for 0 <= s, m <= r+1")
  C_r: BallReal
  D_r: BallReal
  n_r: int
  ell_r: int
  remainder_source: Literal["computed", "published", "stored"] = "computed"
  d_r_certified: bool = True

  @model_validator(mode="after")
  def check_shapes(self):
    if len(self.alpha) != self.r + 2 or len(self.beta) != self.r + 2:
      raise ValueError("alpha and beta must hold r + 2 entries")
    if self.beta_exact[0] != 1:
      raise ValueError("beta_0 must be exactly 1")
    if len(self.b) != self.r + 2 or any(len(row) != self.r + 2 for row in self.b):
      raise ValueError("b must be an (r+2) x (r+2) matrix")
    return self

  def alpha_s(self, s: int) -> BallReal:
    return self.alpha[s - 1]

  @property
  def validity_floor(self) -> int:
    return max(self.n_r, self.ell_r, 87)


class ErrorLedger(BaseModel):
  model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

  X_r: BallReal
  Y_r: BallReal
  Z_r: BallReal
  total: BallReal = Field(description="(X + Y) e^{2AN^2} / (N pi) + |Z|")


class Enclosure(BaseModel):
  model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

  n: int
  r: int
  N_n: BallReal
  main: BallReal
  major_radius: BallReal
  minor_radius: BallReal
  valid: bool
  floor: int
  ledger: ErrorLedger

  @property
  def radius(self) -> BallReal:
    return self.major_radius + self.minor_radius

  @property
  def lower(self):
    return (self.main - self.radius).lower

  @property
  def upper(self):
    return (self.main + self.radius).upper

  def contains(self, value: int) -> bool:
    return self.lower <= value <= self.upper


class ClosedForm(BaseModel):
  model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

  n: int
  r: int
  main: BallReal
  envelope: BallReal

  @property
  def lower(self):
    return (self.main - self.envelope).lower

  @property
  def upper(self):
    return (self.main + self.envelope).upper

  def contains(self, value: int) -> bool:
    return self.lower <= value <= self.upper


class NRecord(BaseModel):
  model_config = ConfigDict(extra="forbid")

  n: int
  method: Literal["exact", "analytic"]
  verdict: bool


class CertReport(BaseModel):
  model_config = ConfigDict(extra="forbid")

  claim: Literal["logconcave", "turan"]
  degree: Optional[int] = None
  shift: int = -1
  n_min: int
  n_max: int
  analytic_threshold: Optional[int] = None
  certified_from: Optional[int] = None
  failures: List[int] = Field(default_factory=list)
  records: List[NRecord] = Field(default_factory=list)
  status: Literal["certified", "refuted", "inconclusive"]
  precision: Optional[int] = None

  @model_validator(mode="after")
  def check_failures(self):
    if self.status == "certified":
      start = self.certified_from if self.certified_from is not None else self.n_min
      if any(start <= n <= self.n_max for n in self.failures):
        raise ValueError("a certified report cannot list failures inside its certified range")
    return self

  @property
  def claim_label(self) -> str:
    return f"turan({self.degree})" if self.claim == "turan" else self.claim

  def summary(self) -> Dict[str, object]:
    return {
      "claim": self.claim_label,
      "range": f"{self.n_min}..{self.n_max}",
      "threshold": self.analytic_threshold,
      "certified_from": self.certified_from,
      "failures": self.failures,
      "status": self.status,
    }


class RenormData(BaseModel):
  model_config = ConfigDict(extra="forbid")

  d: int
  n: int
  A_n: float
  delta_n: float
  renormalized_coeffs: List[float]
  hermite_distance: float

  @field_validator("delta_n")
  @classmethod
  def delta_positive(cls, value: float) -> float:
    if value <= 0:
      raise ValueError("delta_n must be positive")
    return value


class StoreOutcome(BaseModel):
  """Result of one results-store operation; store errors come back here instead of raising."""
  model_config = ConfigDict(extra="forbid")

  ok: bool
  data: Optional[Dict[str, Any]] = None
  error: Optional[str] = None
