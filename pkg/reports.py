"""
Text rendering for plcert reports.

Every human-readable report is a Jinja2 template under ./templates; the records
format bypasses templates and goes through utils.format_record.
"""

from pathlib import Path
from typing import Any

from jinja2 import Environment, FileSystemLoader, StrictUndefined
from mpmath import mp

TEMPLATE_DIR = Path(__file__).resolve().parent / "templates"

templates = Environment(
    loader=FileSystemLoader(str(TEMPLATE_DIR)),
    undefined=StrictUndefined,
    keep_trailing_newline=False,
    trim_blocks=True,
    lstrip_blocks=True,
    autoescape=False,
)


def zip_filter(a, b):
    """Jinja filter to zip two sequences."""
    return zip(a, b)


def ball_filter(value: Any, digits: int = 12) -> str:
    """Render a BallReal as `midpoint ± radius`; anything else through str."""
    if hasattr(value, "format") and hasattr(value, "iv"):
        return value.format(digits)
    return str(value)


def sci_filter(value: Any, digits: int = 4) -> str:
    """Scientific notation with a fixed number of significant digits."""
    if value is None:
        return "none"
    if hasattr(value, "midpoint"):
        value = value.midpoint
    return mp.nstr(mp.mpf(value), digits, min_fixed=1, max_fixed=0)


templates.filters["zip"] = zip_filter
templates.filters["ball"] = ball_filter
templates.filters["sci"] = sci_filter


def render_template(name: str, **context: Any) -> str:
    return templates.get_template(name).render(**context).rstrip("\n")
