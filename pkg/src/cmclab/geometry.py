"""Slice curvature, electric/magnetic Weyl parts and energy-density fields.

On a vacuum Cauchy slice with data (g, K) the Weyl tensor of the ambient
spacetime is encoded by two symmetric slice-tangent tensors,

    E_ab = Ric_ab + H K_ab - K_ac K^c_b        (electric part)
    B_ab = -curl K_ab                          (magnetic part)

with H = tr K.  Both are traceless exactly when the vacuum constraints

    ham = R + H^2 - |K|^2        (scalar)
    mom_a = (div K)_a - d_a H    (covector)

hold; the g-trace of E reproduces the Hamiltonian residual identically, so
that identity doubles as an internal consistency check.

The quadratic energy fields assembled from E and B are

    q_tttt = |E|^2 + |B|^2                    (nonnegative density)
    q_attt = 2 (E ^ B)_a
    q_abtt = -(E x E)_ab - (B x B)_ab + (1/3)(|E|^2 + |B|^2) g_ab
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonPositiveLapse
from .grid import (
    ScalarField,
    SymTensorField,
    VectorField,
    diff_array,
    integrate,
    inverse_metric,
    matrix_to_sym,
    sym_to_matrix,
)
from .tensor import (
    Connection,
    christoffels,
    cross,
    curl,
    divergence,
    gradient,
    hessian,
    inner,
    norm_sq,
    trace,
    wedge,
)

__all__ = [
    "WeylParts",
    "BRComponents",
    "ricci",
    "scalar_curvature",
    "electric_weyl",
    "magnetic_weyl",
    "weyl_parts",
    "br_components",
    "hamiltonian_constraint",
    "momentum_constraint",
    "static_residual",
    "constraint_norms",
    "weyl_trace_residuals",
]


@dataclass(frozen=True, eq=False)
class WeylParts:
    """Electric and magnetic Weyl tensors of a slice."""

    E: SymTensorField
    B: SymTensorField


@dataclass(frozen=True, eq=False)
class BRComponents:
    """Normal-frame components of the quadratic curvature energy tensor."""

    q_tttt: ScalarField
    q_attt: VectorField
    q_abtt: SymTensorField


def ricci(g: SymTensorField, gamma: Connection | None = None) -> SymTensorField:
    """Ricci tensor of the slice metric.

    Ric_ab = d_c Gamma^c_ab - d_a Gamma^c_cb
             + Gamma^c_cd Gamma^d_ab - Gamma^c_ad Gamma^d_cb
    """
    if gamma is None:
        gamma = christoffels(g)
    gam = gamma.coefficients
    spacings = g.grid.spacings

    term = np.zeros(g.grid.shape + (3, 3))
    for c in range(3):
        term += diff_array(gam[..., c, :, :], c, spacings[c])

    gtrace = np.einsum("...ccb->...b", gam)  # Gamma^c_{cb}
    for a in range(3):
        term[..., a, :] -= diff_array(gtrace, a, spacings[a])

    term += np.einsum("...d,...dab->...ab", gtrace, gam)
    term -= np.einsum("...cad,...dcb->...ab", gam, gam)
    return SymTensorField(g.grid, matrix_to_sym(term))


def scalar_curvature(g: SymTensorField, gamma: Connection | None = None) -> ScalarField:
    """Scalar curvature R = g^{ab} Ric_ab."""
    return trace(ricci(g, gamma), g)


def electric_weyl(
    g: SymTensorField, K: SymTensorField, gamma: Connection | None = None
) -> SymTensorField:
    """E_ab = Ric_ab + H K_ab - K_ac K^c_b with H = tr K."""
    if gamma is None:
        gamma = christoffels(g)
    inv = inverse_metric(g)
    km = sym_to_matrix(K.values)
    h = np.einsum("...ab,...ab->...", inv, km)
    ksq = np.einsum("...ac,...cd,...db->...ab", km, inv, km)
    ric = sym_to_matrix(ricci(g, gamma).values)
    return SymTensorField(g.grid, matrix_to_sym(ric + h[..., None, None] * km - ksq))


def magnetic_weyl(
    K: SymTensorField, g: SymTensorField, gamma: Connection | None = None
) -> SymTensorField:
    """B_ab = -curl K_ab."""
    b = curl(K, g, gamma)
    return SymTensorField(K.grid, -b.values)


def weyl_parts(
    g: SymTensorField, K: SymTensorField, gamma: Connection | None = None
) -> WeylParts:
    if gamma is None:
        gamma = christoffels(g)
    return WeylParts(E=electric_weyl(g, K, gamma), B=magnetic_weyl(K, g, gamma))


def br_components(E: SymTensorField, B: SymTensorField, g: SymTensorField) -> BRComponents:
    """Assemble (q_tttt, q_attt, q_abtt) from the Weyl parts."""
    density = ScalarField(E.grid, norm_sq(E, g).values + norm_sq(B, g).values)
    flux_vec = VectorField(E.grid, 2.0 * wedge(E, B, g).values)
    stress = (
        -cross(E, E, g).values
        - cross(B, B, g).values
        + (density.values[..., None] / 3.0) * g.values
    )
    return BRComponents(density, flux_vec, SymTensorField(E.grid, stress))


def hamiltonian_constraint(
    g: SymTensorField, K: SymTensorField, gamma: Connection | None = None
) -> ScalarField:
    """Vacuum scalar constraint residual R + H^2 - |K|^2."""
    if gamma is None:
        gamma = christoffels(g)
    r = scalar_curvature(g, gamma)
    h = trace(K, g)
    return ScalarField(g.grid, r.values + h.values**2 - norm_sq(K, g).values)


def momentum_constraint(
    g: SymTensorField, K: SymTensorField, gamma: Connection | None = None
) -> VectorField:
    """Vacuum vector constraint residual (div K)_a - d_a H."""
    if gamma is None:
        gamma = christoffels(g)
    div_k = divergence(K, g, gamma)
    dh = gradient(trace(K, g))
    return VectorField(g.grid, div_k.values - dh.values)


def static_residual(
    g: SymTensorField, N: ScalarField, gamma: Connection | None = None
) -> tuple[ScalarField, SymTensorField]:
    """Residuals of the static vacuum system (Delta N, Hess N - N Ric).

    Both vanish iff (g, N) solves  Delta N = 0,  nabla^2 N = N Ric.
    Note the system sees only the pair (g, N): any slice with flat metric
    and spatially constant lapse satisfies it regardless of K.
    """
    if np.any(N.values <= 0.0):
        raise NonPositiveLapse(f"lapse has min {N.values.min():.3e} <= 0")
    if gamma is None:
        gamma = christoffels(g)
    hess = hessian(N, gamma)
    lap = trace(hess, g)
    ric = ricci(g, gamma)
    tensor_res = SymTensorField(g.grid, hess.values - N.values[..., None] * ric.values)
    return lap, tensor_res


def constraint_norms(
    g: SymTensorField, K: SymTensorField, gamma: Connection | None = None
) -> tuple[float, float]:
    """L2(mu_g) norms of the Hamiltonian and momentum constraint residuals."""
    if gamma is None:
        gamma = christoffels(g)
    ham = hamiltonian_constraint(g, K, gamma)
    mom = momentum_constraint(g, K, gamma)
    inv = inverse_metric(g)
    mom_sq = np.einsum("...ab,...a,...b->...", inv, mom.values, mom.values)
    ham_norm = np.sqrt(integrate(ScalarField(g.grid, ham.values**2), g))
    mom_norm = np.sqrt(integrate(ScalarField(g.grid, mom_sq), g))
    return float(ham_norm), float(mom_norm)


def weyl_trace_residuals(
    g: SymTensorField, K: SymTensorField, gamma: Connection | None = None
) -> tuple[float, float]:
    """Sup of |tr E| and |tr B|; near zero for constraint-clean data."""
    parts = weyl_parts(g, K, gamma)
    tr_e = trace(parts.E, g).values
    tr_b = trace(parts.B, g).values
    return float(np.max(np.abs(tr_e))), float(np.max(np.abs(tr_b)))
