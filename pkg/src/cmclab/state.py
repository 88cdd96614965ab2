"""One CMC Cauchy-slice snapshot."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonPositiveLapse, NonPositiveMetric
from .grid import GridSpec, ScalarField, SymTensorField, metric_determinant

__all__ = ["SliceState"]


@dataclass(frozen=True, eq=False)
class SliceState:
    """Slice data (t, g, K, N) in CMC gauge with zero shift.

    The time label t is the (spatially constant) mean curvature of the
    slice, so t < 0 throughout the expanding regime this package works
    in.  How far tr K may drift from t before a step is rejected is owned
    by the evolution loop, not by this container.  States are immutable
    snapshots: operations return new instances and never mutate fields.
    """

    t: float
    g: SymTensorField
    K: SymTensorField
    N: ScalarField

    def __post_init__(self):
        if not np.isfinite(self.t) or self.t >= 0.0:
            raise ValueError(f"CMC time must be a negative real, got {self.t!r}")
        grid = self.g.grid
        if self.K.grid != grid or self.N.grid != grid:
            raise ValueError("state fields must share one grid")
        det = metric_determinant(self.g)
        if np.any(det <= 0.0):
            raise NonPositiveMetric(f"metric determinant has min {det.min():.3e} <= 0")
        if np.any(self.N.values <= 0.0):
            raise NonPositiveLapse(f"lapse has min {self.N.values.min():.3e} <= 0")

    @property
    def grid(self) -> GridSpec:
        return self.g.grid
