"""Tensor algebra and covariant calculus against brute-force contractions."""

import numpy as np
import pytest

import oracles as orc
from cmclab import (
    Connection,
    GridSpec,
    ScalarField,
    SymTensorField,
    christoffels,
    covariant_derivative_sym,
    cross,
    curl,
    divergence,
    gradient,
    hessian,
    inner,
    inverse_metric,
    levi_civita_lower,
    metric_determinant,
    norm_sq,
    raise_first_index,
    sym_to_matrix,
    trace,
    traceless,
    wedge,
)
from cmclab.checks import random_metric

ROUND = 1e-12  # relative, same-stencil comparisons


def _random_sym(grid, rng):
    return SymTensorField(grid, rng.standard_normal(grid.shape + (6,)))


def _rel(err, scale):
    return err / max(scale, 1e-300)


def test_trace_inner_norm_match_brute(grid8, rng):
    for _ in range(5):
        g = random_metric(grid8, rng)
        a = _random_sym(grid8, rng)
        b = _random_sym(grid8, rng)
        gm = orc.sym_to_mat(g.values)
        am, bm = orc.sym_to_mat(a.values), orc.sym_to_mat(b.values)
        inv = orc.brute_inverse(gm)
        tr = orc.brute_trace(am, inv)
        ip = orc.brute_inner(am, bm, inv)
        assert np.allclose(trace(a, g).values, tr, rtol=ROUND, atol=1e-13)
        assert np.allclose(inner(a, b, g).values, ip, rtol=ROUND, atol=1e-13)
        assert np.allclose(norm_sq(a, g).values, orc.brute_inner(am, am, inv),
                           rtol=ROUND, atol=1e-13)


def test_traceless_kills_trace_and_is_idempotent(grid8, rng):
    g = random_metric(grid8, rng)
    a = _random_sym(grid8, rng)
    tl = traceless(a, g)
    assert np.max(np.abs(trace(tl, g).values)) < 1e-13
    again = traceless(tl, g)
    assert np.allclose(again.values, tl.values, rtol=0, atol=1e-13)


def test_raise_first_index_round_trip(grid8, rng):
    g = random_metric(grid8, rng)
    a = _random_sym(grid8, rng)
    inv = inverse_metric(g)
    up = raise_first_index(a, inv)  # A^a_b
    gm = sym_to_matrix(g.values)
    back = np.einsum("...ac,...cb->...ab", gm, up)
    assert np.allclose(back, sym_to_matrix(a.values), rtol=1e-12, atol=1e-13)


def test_levi_civita_lower_is_weighted_alternating_symbol(grid8, rng):
    g = random_metric(grid8, rng)
    eps = levi_civita_lower(g)
    expect = orc.brute_eps_lower(orc.brute_det(orc.sym_to_mat(g.values)))
    assert np.allclose(eps, expect, rtol=1e-13, atol=1e-15)


def test_wedge_matches_brute(grid8, rng):
    for _ in range(5):
        g = random_metric(grid8, rng)
        a = _random_sym(grid8, rng)
        b = _random_sym(grid8, rng)
        got = wedge(a, b, g).values
        want = orc.brute_wedge(orc.sym_to_mat(a.values),
                               orc.sym_to_mat(b.values),
                               orc.sym_to_mat(g.values))
        scale = np.max(np.abs(want))
        assert _rel(np.max(np.abs(got - want)), scale) < ROUND


def test_wedge_is_antisymmetric(grid8, rng):
    g = random_metric(grid8, rng)
    a = _random_sym(grid8, rng)
    b = _random_sym(grid8, rng)
    ab = wedge(a, b, g).values
    ba = wedge(b, a, g).values
    scale = np.max(np.abs(ab))
    assert np.max(np.abs(ab + ba)) < 1e-13 * max(scale, 1.0)


def test_wedge_of_field_with_itself_vanishes(grid8, rng):
    g = random_metric(grid8, rng)
    a = _random_sym(grid8, rng)
    aa = wedge(a, a, g).values
    scale = np.max(np.abs(a.values)) ** 2
    assert np.max(np.abs(aa)) < 1e-13 * max(scale, 1.0)


def test_cross_matches_brute(grid8, rng):
    for _ in range(5):
        g = random_metric(grid8, rng)
        a = _random_sym(grid8, rng)
        b = _random_sym(grid8, rng)
        got = sym_to_matrix(cross(a, b, g).values)
        want = orc.brute_cross(orc.sym_to_mat(a.values),
                               orc.sym_to_mat(b.values),
                               orc.sym_to_mat(g.values))
        scale = np.max(np.abs(want))
        assert _rel(np.max(np.abs(got - want)), scale) < ROUND


def test_cross_is_symmetric_in_arguments_and_traceless(grid8, rng):
    g = random_metric(grid8, rng)
    a = _random_sym(grid8, rng)
    b = _random_sym(grid8, rng)
    ab = cross(a, b, g)
    ba = cross(b, a, g)
    scale = max(np.max(np.abs(ab.values)), 1.0)
    assert np.max(np.abs(ab.values - ba.values)) < 1e-13 * scale
    assert np.max(np.abs(trace(ab, g).values)) < 1e-12 * scale


def test_christoffels_match_brute(grid8, rng):
    for _ in range(3):
        g = random_metric(grid8, rng)
        got = christoffels(g).coefficients
        want = orc.brute_christoffels(orc.sym_to_mat(g.values), grid8.spacings)
        scale = max(np.max(np.abs(want)), 1.0)
        assert np.max(np.abs(got - want)) < 1e-12 * scale


def test_christoffels_flat_metric_vanish(grid8):
    g = SymTensorField.diagonal_constant(grid8, (1.0, 2.0, 0.5))
    assert np.all(christoffels(g).coefficients == 0.0)


def test_christoffels_symmetric_in_lower_indices(grid8, rng):
    g = random_metric(grid8, rng)
    gam = christoffels(g).coefficients
    assert np.allclose(gam, np.swapaxes(gam, -1, -2), rtol=0, atol=1e-13)


def test_covariant_derivative_matches_brute(grid8, rng):
    g = random_metric(grid8, rng)
    a = _random_sym(grid8, rng)
    gamma = christoffels(g)
    got = covariant_derivative_sym(a, gamma)
    want = orc.brute_cov_deriv(orc.sym_to_mat(a.values),
                               gamma.coefficients, grid8.spacings)
    scale = max(np.max(np.abs(want)), 1.0)
    assert np.max(np.abs(got - want)) < 1e-12 * scale


def test_covariant_derivative_of_metric_vanishes(grid16, rng):
    # compatibility holds to rounding because the same stencil builds Gamma
    g = random_metric(grid16, rng)
    gamma = christoffels(g)
    nabla_g = covariant_derivative_sym(g, gamma)
    assert np.max(np.abs(nabla_g)) < 1e-10


def test_curl_matches_brute(grid8, rng):
    for _ in range(3):
        g = random_metric(grid8, rng)
        a = _random_sym(grid8, rng)
        got = sym_to_matrix(curl(a, g).values)
        want = orc.brute_curl(orc.sym_to_mat(a.values),
                              orc.sym_to_mat(g.values), grid8.spacings)
        scale = max(np.max(np.abs(want)), 1.0)
        assert np.max(np.abs(got - want)) < 1e-12 * scale


def test_curl_is_trace_free(grid8, rng):
    g = random_metric(grid8, rng)
    a = _random_sym(grid8, rng)
    c = curl(a, g)
    scale = max(np.max(np.abs(c.values)), 1.0)
    h4 = max(grid8.spacings) ** 4
    resid = np.max(np.abs(trace(c, g).values))
    assert resid < 1e-12 * scale  # antisymmetric contraction, rounding only
    assert resid < h4 * scale


def test_curl_constant_field_flat_metric_is_zero(grid8):
    g = SymTensorField.identity(grid8)
    a = SymTensorField.diagonal_constant(grid8, (1.0, -2.0, 3.0))
    assert np.all(curl(a, g).values == 0.0)


def test_divergence_matches_brute(grid8, rng):
    for _ in range(3):
        g = random_metric(grid8, rng)
        a = _random_sym(grid8, rng)
        got = divergence(a, g).values
        want = orc.brute_divergence(orc.sym_to_mat(a.values),
                                    orc.sym_to_mat(g.values), grid8.spacings)
        scale = max(np.max(np.abs(want)), 1.0)
        assert np.max(np.abs(got - want)) < 1e-12 * scale


def test_gradient_is_componentwise_stencil(grid8, rng):
    f = ScalarField(grid8, rng.standard_normal(grid8.shape))
    got = gradient(f).values
    for axis in range(3):
        want = orc.diff4(f.values, axis, grid8.spacings[axis])
        assert np.array_equal(got[..., axis], want)


def test_hessian_flat_metric_is_second_stencil(grid8, rng):
    g = SymTensorField.identity(grid8)
    gamma = christoffels(g)
    f = ScalarField(grid8, rng.standard_normal(grid8.shape))
    got = hessian(f, gamma)
    for a in range(3):
        for b in range(3):
            want = orc.diff4(orc.diff4(f.values, a, grid8.spacings[a]),
                             b, grid8.spacings[b])
            assert np.allclose(got.component(a, b), want, rtol=0, atol=1e-11)


def test_curl_divergence_hessian_converge_to_symbolic():
    g_, a_, curl_, div_ = orc.manufactured_calculus()
    _, n_, hess_, _ = orc.manufactured_scalar_calculus()
    errs = []
    for n in (16, 32):
        grid = GridSpec.cubic(n)
        g = SymTensorField(grid, orc.eval_matrix_on_grid(g_, grid))
        a = SymTensorField(grid, orc.eval_matrix_on_grid(a_, grid))
        f = ScalarField(grid, orc.eval_on_grid(n_, grid))
        gamma = christoffels(g)
        errs.append((
            np.max(np.abs(curl(a, g, gamma).values
                          - orc.eval_matrix_on_grid(curl_, grid))),
            np.max(np.abs(divergence(a, g, gamma).values
                          - orc.eval_vector_on_grid(div_, grid))),
            np.max(np.abs(hessian(f, gamma).values
                          - orc.eval_matrix_on_grid(hess_, grid))),
        ))
    for i in range(3):
        order = np.log2(errs[0][i] / errs[1][i])
        assert 3.7 <= order <= 4.3


def test_connection_shape_validation(grid8):
    with pytest.raises(ValueError):
        Connection(grid8, np.zeros(grid8.shape + (3, 3)))
