"""Small shared helpers."""

from __future__ import annotations

import json
import math
from typing import Iterable, Sequence


def linear_quantile(values: Sequence[float], q: float) -> float:
    """Quantile of `values` using linear interpolation on the sorted data.

    With n points, the quantile sits at fractional position (n-1)*q between
    the two neighbouring order statistics.
    """
    if not values:
        raise ValueError("quantile of empty sequence")
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"quantile level must be in [0, 1], got {q}")
    xs = sorted(float(v) for v in values)
    pos = (len(xs) - 1) * q
    lo = math.floor(pos)
    hi = math.ceil(pos)
    if lo == hi:
        return xs[lo]
    frac = pos - lo
    return xs[lo] + frac * (xs[hi] - xs[lo])


def stable_json_dumps(obj) -> str:
    """Deterministic JSON encoding: sorted keys, compact separators."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def mean(values: Iterable[float]) -> float:
    xs = list(values)
    if not xs:
        raise ValueError("mean of empty sequence")
    return sum(xs) / len(xs)
