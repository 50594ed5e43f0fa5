"""
Utility functions for plcert
This module contains the error types and formatting helpers shared by every module
"""

import logging
from typing import Any, Dict, Iterable, Optional


class PlcertError(Exception):
    """Base class for every error raised by plcert"""

    exit_code: int = 2


class InvalidArgumentError(PlcertError):
    """An argument lies outside the domain of the operation"""


class CacheRangeError(PlcertError):
    """The exact-value cache does not reach far enough"""

    def __init__(self, message: str, required_limit: int):
        super().__init__(message)
        self.required_limit = required_limit


class DomainError(PlcertError):
    """A bound is requested below the index where it is proven"""

    def __init__(self, message: str, floor: int):
        super().__init__(message)
        self.floor = floor


class CacheFormatError(PlcertError):
    """A cache file failed to parse"""

    def __init__(self, message: str, line_number: int):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class InconclusiveError(PlcertError):
    """A ball comparison stayed undecided at the highest allowed precision"""

    exit_code = 1


class QuadratureError(PlcertError):
    """Adaptive quadrature ran out of panels before reaching its tolerance"""

    exit_code = 1


def error_fields(error: PlcertError) -> Dict[str, Any]:
    """Record fields for a command that stopped on a plcert error"""
    return {
        "status": "error",
        "exit_code": error.exit_code,
        "kind": type(error).__name__,
        "error": str(error),
    }


def _record_value(value: Any) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (list, tuple)):
        return ",".join(_record_value(v) for v in value)
    return str(value).replace(" ", "")


def format_record(fields: Dict[str, Any]) -> str:
    """One line of `key=value` pairs, keys in insertion order"""
    return " ".join(f"{key}={_record_value(value)}" for key, value in fields.items())


def format_records(rows: Iterable[Dict[str, Any]]) -> str:
    return "\n".join(format_record(row) for row in rows)


def log_operation(operation: str, details: str = "", level: str = "INFO",
                  logger: Optional[logging.Logger] = None) -> None:
    """Log operations with consistent formatting"""
    logger = logger or logging.getLogger(__name__)

    message = f"[{level}] {operation}"
    if details:
        message += f" - {details}"

    if level == "ERROR":
        logger.error(message)
    elif level == "WARNING":
        logger.warning(message)
    elif level == "DEBUG":
        logger.debug(message)
    else:
        logger.info(message)
