"""Numeric policy and truncated-series results."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Any, Optional, Tuple

import numpy as np


@dataclass(frozen=True)
class NumericPolicy:
    """Tolerances and caps shared by series and quadrature routines.

    Series are summed by total-degree shells starting at ``start_degree``
    and doubling up to ``max_degree``. Quadrature rules start at
    ``quad_nodes`` points per axis and double until the relative change is
    below ``quad_tol`` or ``max_quad_nodes`` is reached.
    """

    tol: float = 1e-13
    start_degree: int = 24
    max_degree: int = 160
    quad_nodes: int = 24
    max_quad_nodes: int = 192
    quad_tol: float = 1e-10

    def __post_init__(self):
        if self.tol <= 0 or self.quad_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.start_degree < 1 or self.max_degree < self.start_degree:
            raise ValueError("need 1 <= start_degree <= max_degree")
        if self.quad_nodes < 2 or self.max_quad_nodes < self.quad_nodes:
            raise ValueError("need 2 <= quad_nodes <= max_quad_nodes")

    def with_(self, **kw) -> "NumericPolicy":
        return replace(self, **kw)

    def to_json(self) -> dict:
        return {
            "tol": self.tol,
            "start_degree": self.start_degree,
            "max_degree": self.max_degree,
            "quad_nodes": self.quad_nodes,
            "max_quad_nodes": self.max_quad_nodes,
            "quad_tol": self.quad_tol,
        }


DEFAULT_POLICY = NumericPolicy()


@dataclass(frozen=True)
class SeriesResult:
    """A numerical value with its truncation bookkeeping.

    ``value`` is a scalar or, for vectorized internal calls, an ndarray.
    ``nodes`` is the quadrature node count per axis (0 for pure series).
    """

    value: Any
    tail_estimate: float
    degree_used: int
    policy: NumericPolicy = DEFAULT_POLICY
    nodes: int = 0
    path: str = "series"
    residual: Optional[float] = None
    notes: Tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if not math.isfinite(self.tail_estimate):
            raise ValueError("tail estimate must be finite")

    @property
    def scalar(self):
        v = self.value
        if isinstance(v, np.ndarray):
            v = v.item() if v.size == 1 else v
        if isinstance(v, (complex, np.complexfloating)) and v.imag == 0:
            return float(v.real)
        if isinstance(v, np.floating):
            return float(v)
        return v

    def to_json(self) -> dict:
        from .io import json_scalar

        out = {
            "value": json_scalar(self.scalar),
            "tail_estimate": json_scalar(float(self.tail_estimate)),
            "degree_used": self.degree_used,
            "nodes": self.nodes,
            "path": self.path,
        }
        if self.residual is not None:
            out["residual"] = json_scalar(float(self.residual))
        if self.notes:
            out["notes"] = list(self.notes)
        return out
