"""
Centralized data operations for the plcert results store
This module contains every read and write against the optional results database
"""

import logging
from typing import List, Optional

from sqlalchemy import select

from database import SessionLocal
from database_utils import get_constant_record, handle_db_errors
from models import CertificationRun, ConstantRecord
from schemas import CertReport, StoreOutcome
from utils import log_operation

logger = logging.getLogger(__name__)


# ============================================================================
# CERTIFICATION RUN OPERATIONS
# ============================================================================

@handle_db_errors
def record_certification_run(report: CertReport) -> StoreOutcome:
    """Persist the summary of a certification run."""
    session = SessionLocal()
    try:
        run = CertificationRun(
            claim=report.claim,
            degree=report.degree,
            shift=report.shift,
            n_min=report.n_min,
            n_max=report.n_max,
            analytic_threshold=report.analytic_threshold,
            certified_from=report.certified_from,
            failures=list(report.failures),
            status=report.status,
            precision=report.precision,
        )
        session.add(run)
        session.commit()
        session.refresh(run)
        log_operation("record_certification_run", f"run {run.id}: {report.claim_label} {run.status}", logger=logger)
        return StoreOutcome(ok=True, data={"id": run.id})
    except Exception:
        session.rollback()
        raise
    finally:
        session.close()


def list_certification_runs(claim: Optional[str] = None, limit: int = 20) -> List[CertificationRun]:
    """Return the most recent runs, newest first."""
    session = SessionLocal()
    try:
        query = select(CertificationRun)
        if claim:
            query = query.where(CertificationRun.claim == claim)
        query = query.order_by(CertificationRun.created_at.desc(), CertificationRun.id.desc()).limit(limit)
        return session.execute(query).scalars().all()
    except Exception as e:
        log_operation("list_certification_runs", f"error loading runs: {e}", level="ERROR", logger=logger)
        return []
    finally:
        session.close()


# ============================================================================
# CONSTANT OPERATIONS
# ============================================================================

@handle_db_errors
def get_stored_constant(r: int, name: str, parameters: str) -> StoreOutcome:
    """Look up a memoised constant; data is None when nothing is stored."""
    session = SessionLocal()
    try:
        record = get_constant_record(session, r, name, parameters)
        if record is None:
            return StoreOutcome(ok=True)
        return StoreOutcome(ok=True, data={
            "lower": record.lower,
            "upper": record.upper,
            "certified": record.certified,
            "created_at": record.created_at.isoformat(),
        })
    finally:
        session.close()


@handle_db_errors
def store_constant(r: int, name: str, parameters: str, lower: str, upper: str, certified: bool) -> StoreOutcome:
    """Insert or replace a memoised constant."""
    session = SessionLocal()
    try:
        record = get_constant_record(session, r, name, parameters)
        if record is None:
            record = ConstantRecord(r=r, name=name, parameters=parameters, lower=lower, upper=upper, certified=certified)
            session.add(record)
        else:
            record.lower = lower
            record.upper = upper
            record.certified = certified
        session.commit()
        log_operation("store_constant", f"{name} for r={r} ({parameters})", level="DEBUG", logger=logger)
        return StoreOutcome(ok=True)
    except Exception:
        session.rollback()
        raise
    finally:
        session.close()
