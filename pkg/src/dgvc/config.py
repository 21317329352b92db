"""Resource caps and default truncation levels.

Values can be overridden through the environment:

``DGVC_MAX_DEGREE``      maximal total degree of a Groebner basis element
``DGVC_MAX_BASIS``       maximal number of Groebner basis elements
``DGVC_MAX_MATRIX``      maximal row or column count of a presentation matrix
``DGVC_TRUNCATE``        default truncation degree for infinite graded objects
``DGVC_ALPHA_BOUND``     default partition-size bound for cobordism certificates
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    return int(raw)


@dataclass(frozen=True)
class Limits:
    max_degree: int = 40
    max_basis: int = 10_000
    max_matrix: int = 2_000
    truncate: int = 20
    alpha_bound: int = 5

    def with_(self, **kw) -> "Limits":
        return replace(self, **kw)


def limits_from_env() -> Limits:
    return Limits(
        max_degree=_env_int("DGVC_MAX_DEGREE", 40),
        max_basis=_env_int("DGVC_MAX_BASIS", 10_000),
        max_matrix=_env_int("DGVC_MAX_MATRIX", 2_000),
        truncate=_env_int("DGVC_TRUNCATE", 20),
        alpha_bound=_env_int("DGVC_ALPHA_BOUND", 5),
    )


LIMITS = limits_from_env()
