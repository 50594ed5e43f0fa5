from sqlmodel import SQLModel, Field
from typing import Optional, List
from datetime import datetime
from pydantic import ConfigDict
from sqlalchemy import UniqueConstraint, Column, JSON


class CertificationRun(SQLModel, table=True):
    """One certification run (log-concavity or a Turan degree) over an index range"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    id: Optional[int] = Field(default=None, primary_key=True)
    claim: str = Field(max_length=20, index=True, description="logconcave or turan")
    degree: Optional[int] = Field(default=None, description="Jensen degree for turan runs")
    shift: int = Field(default=-1, description="Jensen shift convention used for turan runs")
    n_min: int = Field(description="First index checked")
    n_max: int = Field(description="Last index checked")
    analytic_threshold: Optional[int] = Field(default=None, description="Least n certified analytically onward")
    certified_from: Optional[int] = Field(default=None, description="Least n from which the claim holds")
    failures: List[int] = Field(
        default_factory=list,
        sa_column=Column(JSON, nullable=False),
        description="Indices where the claim fails",
    )
    status: str = Field(max_length=20, description="certified, refuted or inconclusive")
    precision: Optional[int] = Field(default=None, description="Working precision in bits")
    created_at: datetime = Field(default_factory=datetime.utcnow)


class ConstantRecord(SQLModel, table=True):
    """Memoised remainder constant, stored as exact rational endpoint strings"""
    model_config = ConfigDict(arbitrary_types_allowed=True)
    __table_args__ = (
        UniqueConstraint("r", "name", "parameters", name="uq_constant_r_name_parameters"),
    )

    id: Optional[int] = Field(default=None, primary_key=True)
    r: int = Field(index=True)
    name: str = Field(max_length=20, description="Constant name, e.g. D_r")
    parameters: str = Field(max_length=200, description="Computation parameters the value depends on")
    lower: str = Field(description="Lower endpoint")
    upper: str = Field(description="Upper endpoint")
    certified: bool = Field(default=True)
    created_at: datetime = Field(default_factory=datetime.utcnow)
