"""Run-time caps shared by the computational layers.

Values live in a context variable so concurrent callers can scope their own
limits with :func:`limits`.
"""

from __future__ import annotations

import contextlib
import contextvars
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Limits:
    degree_cap: int | None = None
    max_iterations: int = 64
    minor_cap: int = 20000
    radical_depth: int = 64
    selection: str = "auto"
    interreduce_inputs: bool = True


_current = contextvars.ContextVar("affnorm_limits", default=Limits())


def current() -> Limits:
    return _current.get()


@contextlib.contextmanager
def limits(**overrides):
    token = _current.set(replace(_current.get(), **overrides))
    try:
        yield _current.get()
    finally:
        _current.reset(token)
