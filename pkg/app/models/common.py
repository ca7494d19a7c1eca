"""
Common types and base models shared across the domain models
"""
import math
from typing import Annotated, Tuple

from pydantic import BaseModel, ConfigDict, Field

# Dense node index in [0, n)
NodeId = Annotated[int, Field(ge=0)]

# Unordered node pair stored canonically as (i, j) with i < j
NodePair = Tuple[int, int]

# Real in [0, 1]
UnitInterval = Annotated[float, Field(ge=0.0, le=1.0)]


class FrozenModel(BaseModel):
    """Immutable model; safe to share across concurrent workers"""
    model_config = ConfigDict(frozen=True)


class ArrayModel(BaseModel):
    """Immutable model that carries numpy arrays"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)


def canonical_pair(u: int, v: int) -> NodePair:
    """Order an undirected pair so that the smaller index comes first"""
    return (u, v) if u < v else (v, u)


def pair_count(n: int) -> int:
    """C(n, 2)"""
    return n * (n - 1) // 2


def round_half_up(x: float) -> int:
    """round() with halves going up, used for every edge-count target"""
    return int(math.floor(x + 0.5))
