import cmath
import math

import numpy as np
import pytest

from ptwell.core import DomainError, WellConfig, potential_array
from ptwell.secular import find_roots_on_hyperbola
from ptwell.spectrum import t_window_for_levels
from ptwell.susy import (
    PoleError,
    discontinuity_noncontinuity_certificates,
    partner_eigenfunction_value,
    partner_jumps,
    partner_oracle_spectrum,
    partner_potential_value,
    split_residuals,
    split_terms,
    superpotential_value,
    susy_parameters,
    tanh_target,
    verify_susy,
)
from ptwell.wavefunction import coefficients, eigenfunction_derivative, eigenfunction_value


@pytest.fixture(scope="module")
def setup(cfg_g2, roots_g2):
    return cfg_g2, roots_g2, susy_parameters(cfg_g2, roots_g2[0])


def _newton_x_r1(cfg, ground, seed):
    """Damped 2-D Newton on the split system, independent of the artanh route."""
    Nr, Ni, D = split_terms(cfg, ground)
    target = complex(Nr / D, Ni / D)
    kap = ground.kappa

    def F(v):
        th = cmath.tanh(kap * complex(*v))
        return np.array([th.real - target.real, th.imag - target.imag])

    v = np.array([seed.real, seed.imag])
    for _ in range(100):
        f = F(v)
        if np.max(np.abs(f)) < 1e-15:
            break
        J = np.empty((2, 2))
        for j in range(2):
            dv = np.zeros(2)
            dv[j] = 1e-7
            J[:, j] = (F(v + dv) - F(v - dv)) / 2e-7
        step = np.linalg.solve(J, -f)
        lam = 1.0
        while np.max(np.abs(F(v + lam * step))) > np.max(np.abs(f)) and lam > 1e-4:
            lam /= 2
        v = v + lam * step
    return complex(*v)


def test_split_expressions_equal_the_matching_ratio(setup):
    cfg, roots, _ = setup
    for r in roots:
        Nr, Ni, D = split_terms(cfg, r)
        assert complex(Nr, Ni) / D == pytest.approx(tanh_target(cfg, r), rel=1e-12)


def test_tanh_target_matches_closed_form(setup):
    cfg, roots, p = setup
    k0, kap = p.k0, p.kappa0
    cot = 1 / math.tan(k0 * (cfg.L - cfg.l))
    coth = 1 / cmath.tanh(kap * cfg.l)
    want = (k0 * cot * coth + kap) / (k0 * cot + kap * coth)
    assert cmath.tanh(kap * p.x_R1) == pytest.approx(want, rel=1e-12)


def test_x_r1_agrees_with_newton_oracle(setup):
    cfg, roots, p = setup
    # seed away from the answer; Newton only sees the split equations
    x = _newton_x_r1(cfg, roots[0], p.x_R1 * (1 + 0.2j))
    assert x == pytest.approx(p.x_R1, abs=1e-12)
    assert max(split_residuals(cfg, roots[0], x)) < 1e-12


def test_parameter_invariants(setup):
    cfg, roots, p = setup
    assert p.kappa0.real > 0
    assert p.E0 == pytest.approx(p.k0**2)
    assert p.kappa0**2 == pytest.approx(1j * cfg.g - p.E0, abs=1e-12)
    assert p.x_L1 == p.x_R1.conjugate()
    assert p.x_L2 == pytest.approx(cfg.L + math.pi / (2 * p.k0))
    assert p.x_R2 == pytest.approx(cfg.L - math.pi / (2 * p.k0))
    assert max(p.split_residuals) < 1e-9
    # first constraint linking the R1 and L1 ground-state branches
    lhs = p.kappa0 * cmath.tanh(p.kappa0 * p.x_R1)
    rhs = -p.kappa0.conjugate() * cmath.tanh(p.kappa0.conjugate() * p.x_R1.conjugate())
    assert lhs == pytest.approx(rhs, abs=1e-12)
    for alt in p.alternatives:
        assert cmath.tanh(p.kappa0 * alt) == pytest.approx(cmath.tanh(p.kappa0 * p.x_R1), abs=1e-9)


def test_superpotential_is_log_derivative_of_ground_state(setup):
    cfg, roots, p = setup
    c0 = coefficients(cfg, roots[0])
    x = np.linspace(-0.97, 0.97, 301)
    W = superpotential_value(p, cfg, x)
    want = -eigenfunction_derivative(cfg, c0, x) / eigenfunction_value(cfg, c0, x)
    np.testing.assert_allclose(W, want, rtol=1e-10, atol=1e-12)


def test_riccati_relations(setup):
    cfg, roots, p = setup
    x = np.array([-0.8, -0.3, -0.1, 0.15, 0.4, 0.75])
    h = 1e-5
    W = superpotential_value(p, cfg, x)
    dW = (superpotential_value(p, cfg, x + h) - superpotential_value(p, cfg, x - h)) / (2 * h)
    np.testing.assert_allclose(partner_potential_value(p, cfg, x), W**2 + dW + p.E0, rtol=1e-7, atol=1e-7)
    np.testing.assert_allclose(potential_array(cfg, x), W**2 - dW + p.E0, rtol=1e-7, atol=1e-7)


def test_superpotential_blows_up_at_walls(setup):
    cfg, _, p = setup
    assert superpotential_value(p, cfg, -cfg.L + 1e-6).real < -1e5
    assert superpotential_value(p, cfg, cfg.L - 1e-6).real > 1e5
    for x in (-cfg.L, cfg.L, cfg.L - 1e-10):
        with pytest.raises(PoleError):
            superpotential_value(p, cfg, x)
        with pytest.raises(PoleError):
            partner_potential_value(p, cfg, x)
    with pytest.raises(DomainError):
        superpotential_value(p, cfg, 1.5)


def test_partner_potential_regions(setup):
    cfg, _, p = setup
    assert partner_potential_value(p, cfg, 0.8) == pytest.approx(2 * p.k0**2 / math.sin(p.k0 * (0.8 - cfg.L)) ** 2)
    v = partner_potential_value(p, cfg, 0.2)
    assert v == pytest.approx(-2 * p.kappa0**2 / cmath.cosh(p.kappa0 * (0.2 - p.x_R1)) ** 2 + 2j)


def test_partner_jumps_mirror_the_original_potential(setup):
    cfg, _, p = setup
    jumps = partner_jumps(p, cfg)
    assert jumps["-l"] == pytest.approx(1j * cfg.g, abs=1e-12)
    assert jumps["0"] == pytest.approx(-2j * cfg.g, abs=1e-12)
    assert jumps["l"] == pytest.approx(1j * cfg.g, abs=1e-12)
    mid = partner_potential_value(p, cfg, cfg.l)
    assert mid == pytest.approx(0.5 * (partner_potential_value(p, cfg, cfg.l - 1e-12) + partner_potential_value(p, cfg, cfg.l + 1e-12)), abs=1e-6)


def test_partner_state_is_a_applied_to_excited_state(setup):
    cfg, roots, p = setup
    x = np.linspace(-0.95, 0.95, 97)
    W = superpotential_value(p, cfg, x)
    for r in roots[1:5]:
        c = coefficients(cfg, r)
        direct = eigenfunction_derivative(cfg, c, x) + W * eigenfunction_value(cfg, c, x)
        got = partner_eigenfunction_value(cfg, p, r, c, x)
        np.testing.assert_allclose(got, 1j * direct, rtol=1e-10, atol=1e-10 * np.max(np.abs(direct)))


def test_partner_state_vanishes_at_walls(setup):
    cfg, roots, p = setup
    for r in roots[1:5]:
        c = coefficients(cfg, r)
        ends = partner_eigenfunction_value(cfg, p, r, c, np.array([-cfg.L, cfg.L]))
        inner = partner_eigenfunction_value(cfg, p, r, c, np.linspace(-0.9, 0.9, 50))
        assert np.max(np.abs(ends)) < 1e-12 * np.max(np.abs(inner))


def test_partner_state_checks_arguments(setup):
    cfg, roots, p = setup
    c = coefficients(cfg, roots[1])
    with pytest.raises(ValueError):
        partner_eigenfunction_value(cfg, p, roots[2], c, 0.1)
    with pytest.raises(DomainError):
        partner_eigenfunction_value(cfg, p, roots[1], c, 1.1)


def test_pt_properties(setup):
    cfg, roots, p = setup
    rng = np.random.default_rng(11)
    x = rng.uniform(-0.99, 0.99, 100)
    W, Wm = superpotential_value(p, cfg, x), superpotential_value(p, cfg, -x)
    np.testing.assert_allclose(Wm, -np.conj(W), rtol=1e-12, atol=1e-12)
    V, Vm = partner_potential_value(p, cfg, x), partner_potential_value(p, cfg, -x)
    np.testing.assert_allclose(Vm, np.conj(V), rtol=1e-12, atol=1e-12)
    c = coefficients(cfg, roots[2])
    a = partner_eigenfunction_value(cfg, p, roots[2], c, -x)
    b = partner_eigenfunction_value(cfg, p, roots[2], c, x)
    np.testing.assert_allclose(a, np.conj(b), atol=1e-12 * np.max(np.abs(b)))


def test_verification_report(setup):
    cfg, roots, p = setup
    rep = verify_susy(cfg, p, roots[:5])
    assert rep.annihilation_residual < 1e-12
    assert rep.factorization_residual < 1e-12
    assert rep.intertwining_residual < 1e-10
    assert rep.isospectral_residual < 1e-9
    assert max(rep.partner_matching_residuals.values()) < 1e-11
    assert all(abs(j) > 0.1 for j in rep.discontinuity_jumps.values())
    d = rep.as_dict()
    assert set(d["partner_matching_residuals"]) == {"-l", "0", "l"}
    assert all(v >= 0 for k, v in d.items() if k.endswith("residual"))


def test_verify_needs_roots(setup):
    cfg, _, p = setup
    with pytest.raises(ValueError):
        verify_susy(cfg, p, [])


def test_certificates(setup):
    cfg, _, p = setup
    c_l, c_0 = discontinuity_noncontinuity_certificates(p, cfg)
    assert c_l == pytest.approx(-0.5j * cfg.g, abs=1e-12)
    assert c_0 == pytest.approx(-1j * cfg.g, abs=1e-12)


def test_weak_coupling_approaches_hermitian_partner():
    cfg = WellConfig(1.0, 0.5, 1e-6)
    roots = find_roots_on_hyperbola(cfg, t_window_for_levels(cfg, 3))[:3]
    p = susy_parameters(cfg, roots[0])
    x = np.array([-0.7, -0.2, 0.3, 0.8])
    herm = 2 * p.k0**2 / np.sin(p.k0 * (x + 1)) ** 2
    np.testing.assert_allclose(partner_potential_value(p, cfg, x), herm, rtol=1e-5)
    assert all(abs(j) <= 3 * cfg.g for j in partner_jumps(p, cfg).values())
    c_l, c_0 = discontinuity_noncontinuity_certificates(p, cfg)
    assert abs(c_l) < 1e-5 and abs(c_0) < 1e-5


@pytest.mark.slow
def test_partner_oracle_is_isospectral_without_ground_state(setup):
    cfg, roots, p = setup
    want = np.array([r.E - p.E0 for r in roots[1:5]])
    a = partner_oracle_spectrum(cfg, p, N=1999, n_levels=4, delta=1e-3)
    b = partner_oracle_spectrum(cfg, p, N=1999, n_levels=4, delta=5e-4)
    np.testing.assert_allclose(a.best.real, want, rtol=2e-5)
    np.testing.assert_allclose(b.best.real, want, rtol=2e-5)
    assert np.max(np.abs(a.best.imag)) < 1e-8
    # no level near zero: the ground state of H+ has no partner
    assert np.min(np.abs(a.best)) > 0.5 * want[0]
