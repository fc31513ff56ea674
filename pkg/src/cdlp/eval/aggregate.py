from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from cdlp.errors import InputError


@dataclass(frozen=True)
class Aggregate:
    mean: float
    std: float
    count: int


def aggregate(values: Iterable[float]) -> Aggregate:
    """Arithmetic mean and sample (ddof=1) standard deviation; a lone value has std 0."""
    arr = np.asarray(list(values), dtype=float)
    if arr.size == 0:
        raise InputError("cannot aggregate an empty list")
    std = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
    return Aggregate(mean=float(arr.mean()), std=std, count=int(arr.size))
