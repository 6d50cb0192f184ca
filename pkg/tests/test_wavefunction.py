import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ptwell.core import DomainError, WellConfig, potential_array
from ptwell.secular import find_roots_on_hyperbola
from ptwell.spectrum import t_window_for_levels
from ptwell.wavefunction import (
    MATCHING_REGIONS,
    REGION_ORDER,
    branch_derivative,
    branch_values,
    coefficients,
    eigenfunction_derivative,
    eigenfunction_value,
)

CONFIGS = [WellConfig(1, 0.5, 2), WellConfig(1, 0.3, 10), WellConfig(1, 0.04, 650), WellConfig(1.5, 0.2, 3)]


def _roots(cfg, n=5):
    return find_roots_on_hyperbola(cfg, t_window_for_levels(cfg, n))[:n]


def _scale(cfg, c):
    x = np.linspace(-cfg.L, cfg.L, 4001)
    return np.max(np.abs(eigenfunction_value(cfg, c, x)))


@pytest.mark.parametrize("cfg", CONFIGS)
def test_continuity_at_matching_points(cfg):
    for r in _roots(cfg):
        c = coefficients(cfg, r)
        scale = _scale(cfg, c)
        for name in MATCHING_REGIONS:
            for order in (0, 1):
                a, b = branch_values(cfg, c, name, order)
                assert abs(a - b) < 1e-11 * scale * max(r.k, 1) ** order * (1 + r.s)


@pytest.mark.parametrize("cfg", CONFIGS)
def test_dirichlet_walls(cfg):
    for r in _roots(cfg):
        c = coefficients(cfg, r)
        ends = eigenfunction_value(cfg, c, np.array([-cfg.L, cfg.L]))
        assert np.all(np.abs(ends) < 1e-12 * _scale(cfg, c))


@pytest.mark.parametrize("cfg", CONFIGS)
def test_schrodinger_equation_in_each_region(cfg):
    for r in _roots(cfg):
        c = coefficients(cfg, r)
        for region in REGION_ORDER:
            a, b = region.interval(cfg)
            x = np.linspace(a, b, 50)[1:-1]
            V = potential_array(cfg, x)
            psi = branch_derivative(cfg, c, region, x, 0)
            d2 = branch_derivative(cfg, c, region, x, 2)
            res = -d2 + (V - r.E) * psi
            assert np.max(np.abs(res)) < 1e-10 * (np.max(np.abs(d2)) + np.max(np.abs(V * psi)) + 1)


def test_pt_symmetry_of_eigenfunctions(cfg_g2, roots_g2):
    rng = np.random.default_rng(7)
    x = rng.uniform(-1, 1, 200)
    for r in roots_g2:
        c = coefficients(cfg_g2, r)
        a = eigenfunction_value(cfg_g2, c, -x)
        b = np.conj(eigenfunction_value(cfg_g2, c, x))
        assert np.max(np.abs(a - b)) < 1e-12 * _scale(cfg_g2, c)


def test_derivatives_match_finite_differences(cfg_g2, roots_g2):
    c = coefficients(cfg_g2, roots_g2[2])
    x = np.array([-0.8, -0.3, 0.2, 0.7])
    h = 1e-5
    fd = (eigenfunction_value(cfg_g2, c, x + h) - eigenfunction_value(cfg_g2, c, x - h)) / (2 * h)
    np.testing.assert_allclose(eigenfunction_derivative(cfg_g2, c, x), fd, rtol=1e-8)
    fd2 = (eigenfunction_derivative(cfg_g2, c, x + h) - eigenfunction_derivative(cfg_g2, c, x - h)) / (2 * h)
    np.testing.assert_allclose(eigenfunction_derivative(cfg_g2, c, x, 2), fd2, rtol=1e-7)


def test_normalization_and_real_constants(cfg_g2, roots_g2):
    for r in roots_g2:
        c = coefficients(cfg_g2, r)
        assert eigenfunction_value(cfg_g2, c, 0.0) == pytest.approx(1.0)
        assert c.C_imag_residual < 1e-12
        d = c.scaled(2.5)
        assert eigenfunction_value(cfg_g2, d, 0.3) == pytest.approx(2.5 * eigenfunction_value(cfg_g2, c, 0.3))


def test_zero_count_of_dominant_component():
    # near the Hermitian limit level n has n - 1 interior nodes, carried by
    # Re psi for odd n and by Im psi for even n (psi(0) = 1 is forced)
    cfg = WellConfig(1.0, 0.5, 0.05)
    x = np.linspace(-1, 1, 20000)[1:-1]  # avoid x = 0, a node of odd states
    for n, r in enumerate(_roots(cfg, 6), start=1):
        psi = eigenfunction_value(cfg, coefficients(cfg, r), x)
        comp = psi.real if np.max(np.abs(psi.real)) > np.max(np.abs(psi.imag)) else psi.imag
        zeros = np.count_nonzero(np.sign(comp[:-1]) * np.sign(comp[1:]) < 0)
        assert zeros == n - 1


def test_outside_the_box_is_rejected(cfg_g2, roots_g2):
    c = coefficients(cfg_g2, roots_g2[0])
    with pytest.raises(DomainError):
        eigenfunction_value(cfg_g2, c, 1.01)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.05, 0.9), st.floats(0.1, 4.0))
def test_pt_symmetry_property(l, g):
    cfg = WellConfig(1.0, l, g)
    roots = _roots(cfg, 2)
    x = np.linspace(0.01, 0.99, 17)
    for r in roots:
        c = coefficients(cfg, r)
        diff = eigenfunction_value(cfg, c, -x) - np.conj(eigenfunction_value(cfg, c, x))
        assert np.max(np.abs(diff)) < 1e-10 * _scale(cfg, c)
