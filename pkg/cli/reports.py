"""Report rendering for the command-line front end.

Text reports are Jinja2 templates under `templates/`; JSON mirrors the same
content through the pydantic models; CSV is reserved for tabular output.
"""

from __future__ import annotations

from pathlib import Path
from typing import Any, Dict, Iterable, List, Sequence

from jinja2 import Environment, FileSystemLoader, StrictUndefined

from channel.schemas import BoundResult, SweepRow
from channel.utils import fmt6

# -----------------------------
# Constants
# -----------------------------
TEMPLATE_DIR = Path(__file__).resolve().parent.parent / "templates"

SWEEP_HEADER: List[str] = [
    "r0",
    "p",
    "lower",
    "upper",
    "cutset",
    "capacity_known",
    "capacity",
    "rho_lower",
    "rho_upper",
]
CURVES_HEADER: List[str] = ["rho", "f1", "f2", "f3", "objective"]


def _f4(x: Any) -> str:
    if x is None:
        return "-"
    return f"{float(x):.4f}"


def _f6(x: Any) -> str:
    return fmt6(x) or "-"


def _yesno(x: Any) -> str:
    if x is None:
        return "n/a"
    return "yes" if x else "no"


def _environment() -> Environment:
    env = Environment(
        loader=FileSystemLoader(str(TEMPLATE_DIR)),
        undefined=StrictUndefined,
        keep_trailing_newline=True,
        trim_blocks=True,
        lstrip_blocks=True,
        autoescape=False,
    )
    env.filters["f4"] = _f4
    env.filters["f6"] = _f6
    env.filters["yesno"] = _yesno
    return env


def render_text(template: str, **context: Any) -> str:
    """Render `templates/<template>` with `context`."""
    env = globals().get("_ENV")
    if env is None:
        env = _environment()
        globals()["_ENV"] = env
    return env.get_template(template).render(**context)


# -----------------------------
# JSON payloads
# -----------------------------
def bound_payload(result: BoundResult) -> Dict[str, Any]:
    return result.model_dump(mode="json")


def sweep_csv_rows(rows: Iterable[SweepRow]) -> List[List[str]]:
    out: List[List[str]] = []
    for r in rows:
        out.append(
            [
                fmt6(r.r0),
                fmt6(r.p),
                fmt6(r.lower),
                fmt6(r.upper),
                fmt6(r.cutset),
                fmt6(r.capacity_known),
                fmt6(r.capacity),
                fmt6(r.rho_lower),
                fmt6(r.rho_upper),
            ]
        )
    return out


def numeric_csv_rows(rows: Iterable[Sequence[float]]) -> List[List[str]]:
    return [[fmt6(v) for v in row] for row in rows]


__all__ = [
    "TEMPLATE_DIR",
    "SWEEP_HEADER",
    "CURVES_HEADER",
    "render_text",
    "bound_payload",
    "sweep_csv_rows",
    "numeric_csv_rows",
]
