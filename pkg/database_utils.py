"""
Database utilities for consistent session management and error handling.
"""
import logging
from functools import wraps
from typing import Callable, Optional
from sqlmodel import Session, select
from sqlalchemy.exc import SQLAlchemyError

from models import ConstantRecord
from schemas import StoreOutcome
from utils import log_operation

logger = logging.getLogger(__name__)


def handle_db_errors(func: Callable[..., StoreOutcome]) -> Callable[..., StoreOutcome]:
    """Decorator for consistent error handling in database operations."""
    @wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except SQLAlchemyError as e:
            log_operation(func.__name__, f"database error: {e}", level="ERROR", logger=logger)
            return StoreOutcome(ok=False, error=f"Database error: {e}")
        except Exception as e:
            log_operation(func.__name__, f"unexpected error: {e}", level="ERROR", logger=logger)
            return StoreOutcome(ok=False, error=f"Unexpected error: {e}")
    return wrapper


# Common query patterns
def get_constant_record(session: Session, r: int, name: str, parameters: str) -> Optional[ConstantRecord]:
    """Get the stored constant for (r, name, parameters), if any."""
    return session.execute(
        select(ConstantRecord).where(
            ConstantRecord.r == r,
            ConstantRecord.name == name,
            ConstantRecord.parameters == parameters,
        )
    ).scalars().first()
