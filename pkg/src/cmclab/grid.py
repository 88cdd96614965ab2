"""Periodic 3-torus grids, field containers, derivatives and integration.

All geometric objects live on a uniform periodic grid covering the flat
3-torus [0, L1) x [0, L2) x [0, L3).  Scalars are stored as (n1, n2, n3)
arrays, covectors as (n1, n2, n3, 3), and symmetric 2-tensors as
(n1, n2, n3, 6) with the lower-index component order

    (xx, xy, xz, yy, yz, zz).

Spatial derivatives use 4th-order centered stencils with periodic wrap;
integration against a metric volume element is a plain Riemann sum, which
is spectrally accurate for smooth periodic integrands.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonPositiveMetric

__all__ = [
    "GridSpec",
    "ScalarField",
    "VectorField",
    "SymTensorField",
    "SYM_PAIRS",
    "sym_index",
    "partial_derivative",
    "diff_array",
    "integrate",
    "sup_norm",
    "metric_determinant",
    "inverse_metric",
    "sym_to_matrix",
    "matrix_to_sym",
]

# Lower-index pairs backing the 6-component symmetric storage.
SYM_PAIRS = ((0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2))

_PAIR_TO_SLOT = {}
for _slot, (_a, _b) in enumerate(SYM_PAIRS):
    _PAIR_TO_SLOT[(_a, _b)] = _slot
    _PAIR_TO_SLOT[(_b, _a)] = _slot


def sym_index(a: int, b: int) -> int:
    """Slot of component (a, b) in the 6-component symmetric storage."""
    return _PAIR_TO_SLOT[(a, b)]


MIN_POINTS_PER_AXIS = 8  # 4th-order stencil needs a 5-point halo clearance


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic grid on the 3-torus.

    shape : points per axis (each >= 8, the stencil-width floor)
    periods : coordinate period per axis, strictly positive
    """

    shape: tuple[int, int, int]
    periods: tuple[float, float, float] = (1.0, 1.0, 1.0)

    def __post_init__(self):
        shape = tuple(int(n) for n in self.shape)
        periods = tuple(float(p) for p in self.periods)
        if len(shape) != 3 or len(periods) != 3:
            raise ValueError("GridSpec needs exactly three axes")
        if any(n < MIN_POINTS_PER_AXIS for n in shape):
            raise ValueError(f"grid needs >= {MIN_POINTS_PER_AXIS} points per axis, got {shape}")
        if any(p <= 0.0 for p in periods):
            raise ValueError(f"periods must be strictly positive, got {periods}")
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "periods", periods)

    @classmethod
    def cubic(cls, n: int, period: float = 1.0) -> "GridSpec":
        return cls((n, n, n), (period, period, period))

    @property
    def spacings(self) -> tuple[float, float, float]:
        return tuple(p / n for p, n in zip(self.periods, self.shape))

    @property
    def cell_volume(self) -> float:
        hx, hy, hz = self.spacings
        return hx * hy * hz

    @property
    def num_points(self) -> int:
        nx, ny, nz = self.shape
        return nx * ny * nz

    def axis_coordinates(self, axis: int) -> np.ndarray:
        """Grid coordinates along one axis (no duplicated endpoint)."""
        n = self.shape[axis]
        return np.arange(n) * (self.periods[axis] / n)

    def meshes(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Full coordinate meshes (x, y, z), each of shape `shape`."""
        return np.meshgrid(*(self.axis_coordinates(a) for a in range(3)), indexing="ij")


def _check_values(grid: GridSpec, values: np.ndarray, comps: tuple[int, ...]) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    expected = grid.shape + comps
    if values.shape != expected:
        raise ValueError(f"field values shaped {values.shape}, expected {expected}")
    if not np.all(np.isfinite(values)):
        raise ValueError("field values must be finite")
    return values


@dataclass(frozen=True, eq=False)
class ScalarField:
    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _check_values(self.grid, self.values, ()))

    @classmethod
    def constant(cls, grid: GridSpec, value: float) -> "ScalarField":
        return cls(grid, np.full(grid.shape, float(value)))


@dataclass(frozen=True, eq=False)
class VectorField:
    grid: GridSpec
    values: np.ndarray  # lower-index components, shape (*grid.shape, 3)

    def __post_init__(self):
        object.__setattr__(self, "values", _check_values(self.grid, self.values, (3,)))

    @classmethod
    def zeros(cls, grid: GridSpec) -> "VectorField":
        return cls(grid, np.zeros(grid.shape + (3,)))


@dataclass(frozen=True, eq=False)
class SymTensorField:
    grid: GridSpec
    values: np.ndarray  # lower-index components in SYM_PAIRS order, shape (*grid.shape, 6)

    def __post_init__(self):
        object.__setattr__(self, "values", _check_values(self.grid, self.values, (6,)))

    @classmethod
    def zeros(cls, grid: GridSpec) -> "SymTensorField":
        return cls(grid, np.zeros(grid.shape + (6,)))

    @classmethod
    def identity(cls, grid: GridSpec) -> "SymTensorField":
        return cls.diagonal_constant(grid, (1.0, 1.0, 1.0))

    @classmethod
    def diagonal_constant(cls, grid: GridSpec, diag: tuple[float, float, float]) -> "SymTensorField":
        values = np.zeros(grid.shape + (6,))
        values[..., sym_index(0, 0)] = diag[0]
        values[..., sym_index(1, 1)] = diag[1]
        values[..., sym_index(2, 2)] = diag[2]
        return cls(grid, values)

    def component(self, a: int, b: int) -> np.ndarray:
        return self.values[..., sym_index(a, b)]


def sym_to_matrix(values: np.ndarray) -> np.ndarray:
    """Expand 6-component symmetric storage (..., 6) to full (..., 3, 3)."""
    mat = np.empty(values.shape[:-1] + (3, 3), dtype=values.dtype)
    for slot, (a, b) in enumerate(SYM_PAIRS):
        mat[..., a, b] = values[..., slot]
        mat[..., b, a] = values[..., slot]
    return mat


def matrix_to_sym(mat: np.ndarray) -> np.ndarray:
    """Collapse a symmetric (..., 3, 3) array to 6-component storage.

    Off-diagonal slots are averaged, so feeding a slightly asymmetric
    matrix symmetrizes it.
    """
    out = np.empty(mat.shape[:-2] + (6,), dtype=mat.dtype)
    for slot, (a, b) in enumerate(SYM_PAIRS):
        if a == b:
            out[..., slot] = mat[..., a, a]
        else:
            out[..., slot] = 0.5 * (mat[..., a, b] + mat[..., b, a])
    return out


def metric_determinant(g: SymTensorField) -> np.ndarray:
    """Pointwise det(g) from the 6 stored components (closed form)."""
    v = g.values
    xx, xy, xz = v[..., 0], v[..., 1], v[..., 2]
    yy, yz, zz = v[..., 3], v[..., 4], v[..., 5]
    return (
        xx * (yy * zz - yz * yz)
        - xy * (xy * zz - yz * xz)
        + xz * (xy * yz - yy * xz)
    )


def inverse_metric(g: SymTensorField, det: np.ndarray | None = None) -> np.ndarray:
    """Pointwise inverse metric as a full (..., 3, 3) array.

    Raises NonPositiveMetric if det(g) <= 0 anywhere; a symmetric 3x3
    matrix with positive determinant and positive diagonal entries is the
    caller's responsibility beyond that cheap guard.
    """
    if det is None:
        det = metric_determinant(g)
    if np.any(det <= 0.0):
        raise NonPositiveMetric(f"metric determinant has min {det.min():.3e} <= 0")
    v = g.values
    xx, xy, xz = v[..., 0], v[..., 1], v[..., 2]
    yy, yz, zz = v[..., 3], v[..., 4], v[..., 5]
    inv = np.empty(v.shape[:-1] + (3, 3), dtype=v.dtype)
    inv[..., 0, 0] = yy * zz - yz * yz
    inv[..., 0, 1] = xz * yz - xy * zz
    inv[..., 0, 2] = xy * yz - xz * yy
    inv[..., 1, 1] = xx * zz - xz * xz
    inv[..., 1, 2] = xy * xz - xx * yz
    inv[..., 2, 2] = xx * yy - xy * xy
    inv[..., 1, 0] = inv[..., 0, 1]
    inv[..., 2, 0] = inv[..., 0, 2]
    inv[..., 2, 1] = inv[..., 1, 2]
    inv /= det[..., None, None]
    return inv


# 4th-order centered first-derivative stencil: (8(f+1 - f-1) - (f+2 - f-2)) / 12h
def diff_array(values: np.ndarray, axis: int, spacing: float) -> np.ndarray:
    """4th-order periodic centered difference of an array along a grid axis."""
    up1 = np.roll(values, -1, axis=axis)
    dn1 = np.roll(values, 1, axis=axis)
    up2 = np.roll(values, -2, axis=axis)
    dn2 = np.roll(values, 2, axis=axis)
    return (8.0 * (up1 - dn1) - (up2 - dn2)) / (12.0 * spacing)


def partial_derivative(f: ScalarField, axis: int) -> ScalarField:
    """Coordinate partial derivative of a scalar field along axis 0, 1 or 2."""
    if axis not in (0, 1, 2):
        raise ValueError(f"axis must be 0, 1 or 2, got {axis}")
    h = f.grid.spacings[axis]
    return ScalarField(f.grid, diff_array(f.values, axis, h))


def integrate(f: ScalarField, g: SymTensorField) -> float:
    """Integral of f against the metric volume element sqrt(det g) d^3x."""
    det = metric_determinant(g)
    if np.any(det <= 0.0):
        raise NonPositiveMetric(f"metric determinant has min {det.min():.3e} <= 0")
    return float(np.sum(f.values * np.sqrt(det)) * f.grid.cell_volume)


def _pointwise_norm_sq(field, inv: np.ndarray) -> np.ndarray:
    if isinstance(field, ScalarField):
        return field.values**2
    if isinstance(field, VectorField):
        v = field.values
        return np.einsum("...ab,...a,...b->...", inv, v, v)
    if isinstance(field, SymTensorField):
        m = sym_to_matrix(field.values)
        up = np.einsum("...ac,...bd,...cd->...ab", inv, inv, m)
        return np.einsum("...ab,...ab->...", up, m)
    raise TypeError(f"unsupported field type {type(field).__name__}")


def sup_norm(field, g: SymTensorField) -> float:
    """Max over the grid of the pointwise g-norm of a field.

    Scalars use |f|; vectors and symmetric tensors contract all indices
    with the inverse metric.
    """
    inv = inverse_metric(g)
    return float(np.sqrt(np.max(_pointwise_norm_sq(field, inv))))
