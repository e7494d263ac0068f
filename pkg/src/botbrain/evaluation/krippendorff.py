"""Krippendorff's alpha via the coincidence matrix, with nominal and
ordinal difference metrics and pairable-values handling of missing data."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SCALES = ("nominal01", "ordinal1to5")
_ALLOWED_VALUES = {"nominal01": {0, 1}, "ordinal1to5": {1, 2, 3, 4, 5}}


class NoVariationError(ValueError):
    """Expected disagreement is zero; alpha is undefined."""


@dataclass
class RatingMatrix:
    """scores[rater][item], ``None`` marking a missing rating."""

    scores: list[list]
    scale: str

    def __post_init__(self):
        if self.scale not in SCALES:
            raise ValueError(f"scale must be one of {SCALES}")
        if len(self.scores) < 2:
            raise ValueError("need at least two raters")
        widths = {len(row) for row in self.scores}
        if len(widths) != 1:
            raise ValueError("ragged rating matrix")
        allowed = _ALLOWED_VALUES[self.scale]
        for row in self.scores:
            for value in row:
                if value is not None and value not in allowed:
                    raise ValueError(f"score {value!r} outside scale {self.scale}")

    @property
    def n_items(self) -> int:
        return len(self.scores[0])

    def unit_values(self) -> list[list]:
        """Per item: the list of present ratings."""
        return [
            [row[i] for row in self.scores if row[i] is not None] for i in range(self.n_items)
        ]


def _coincidence_matrix(units, values):
    index = {v: i for i, v in enumerate(values)}
    k = len(values)
    o = np.zeros((k, k))
    for unit in units:
        m = len(unit)
        if m < 2:
            continue
        for i, a in enumerate(unit):
            for j, b in enumerate(unit):
                if i != j:
                    o[index[a], index[b]] += 1.0 / (m - 1)
    return o


def _delta_sq(values, n_v, scale: str) -> np.ndarray:
    k = len(values)
    delta = np.zeros((k, k))
    if scale == "nominal01":
        delta = 1.0 - np.eye(k)
        return delta
    # ordinal: squared sum of coincidence frequencies between the two ranks,
    # the endpoints counted half
    for i in range(k):
        for j in range(k):
            if i == j:
                continue
            lo, hi = min(i, j), max(i, j)
            between = n_v[lo : hi + 1].sum() - (n_v[lo] + n_v[hi]) / 2.0
            delta[i, j] = between**2
    return delta


def krippendorff_alpha(matrix: RatingMatrix) -> float:
    """alpha = 1 - D_o / D_e over pairable values."""
    units = [u for u in matrix.unit_values() if len(u) >= 2]
    if not units:
        raise ValueError("no item carries two or more ratings")
    values = sorted({v for unit in units for v in unit})
    o = _coincidence_matrix(units, values)
    n_v = o.sum(axis=1)
    n = n_v.sum()
    delta = _delta_sq(values, n_v, matrix.scale)
    d_o = (o * delta).sum() / n
    d_e = (np.outer(n_v, n_v) * delta).sum() / (n * (n - 1.0))
    if d_e == 0.0:
        raise NoVariationError("all pairable ratings identical; alpha undefined")
    return float(1.0 - d_o / d_e)
