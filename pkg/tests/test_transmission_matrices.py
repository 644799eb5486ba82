import numpy as np
import pytest

from defectchain.lax_defect import RegimeParams
from defectchain.oscillator_reps import spin_rep
from defectchain.transmission_amplitudes import amplitude, type2_amplitude
from defectchain.transmission_matrices import (default_rep, make_t_pair,
                                               make_type2,
                                               quadratic_algebra_residual,
                                               type2_algebra_residual,
                                               unitarity_crossing_residual)

XXX = RegimeParams.xxx()
CRIT = RegimeParams.critical(0.7)
NC = RegimeParams.noncritical(0.35)

ALL = [XXX, CRIT, NC]
IDS = ["xxx", "crit", "nc"]


def test_xxx_entries_read_off():
    rep = default_rep(XXX, 6)
    pair = make_t_pair(XXX, rep)
    lh = 0.44
    d = rep.dim
    t = pair.t(lh).entries
    pref = amplitude(XXX, "-", lh).value / (1j * lh + 0.5)
    # (2,2) block = prefactor * identity, (1,2) block = prefactor * a
    np.testing.assert_allclose(t[d:, d:], pref * np.eye(d), atol=1e-13)
    np.testing.assert_allclose(t[:d, d:], pref * rep.a, atol=1e-13)
    # (1,1) block = prefactor * (i lam + 1 + a a_dag - 1/2)
    want = pref * (1j * lh * np.eye(d) + np.eye(d) + rep.a @ rep.a_dag - 0.5 * np.eye(d))
    np.testing.assert_allclose(t[:d, :d], want, atol=1e-13)
    tbar = pair.t_bar(lh).entries
    np.testing.assert_allclose(tbar[:d, :d],
                               amplitude(XXX, "+", lh).value * np.eye(d), atol=1e-13)


def test_critical_entries_spot_check():
    params = RegimeParams.critical(np.pi / 2.5)   # gamma = 1.5
    rep = default_rep(params, 6)
    pair = make_t_pair(params, rep)
    g = params.gamma
    mu_t = np.pi * g
    q_t = np.exp(1j * mu_t)
    lh = 0.4
    u = lh / g
    part = pair.t_matrix_part(lh).entries
    d = rep.dim
    want_11 = np.exp(-mu_t * u) * q_t * rep.v - np.exp(mu_t * u) / q_t * rep.v_inv
    np.testing.assert_allclose(part[:d, :d], want_11, atol=1e-12)
    np.testing.assert_allclose(part[d:, d:], -np.exp(mu_t * u) / q_t * rep.v, atol=1e-12)
    assert pair.renorm is not None
    assert pair.renorm["q_tilde"] == pytest.approx(q_t)


def test_critical_rejects_microscopic_deformation():
    from defectchain.oscillator_reps import q_oscillator_rep
    with pytest.raises(ValueError, match="rescaled-deformation"):
        make_t_pair(CRIT, q_oscillator_rep(6, CRIT.q))


@pytest.mark.parametrize("params", ALL, ids=IDS)
@pytest.mark.parametrize("which", ["t", "t_bar"])
def test_quadratic_algebra(params, which):
    rep = default_rep(params, 8)
    rng = np.random.default_rng(11)
    for l1, l2 in rng.uniform(-1.2, 1.2, size=(5, 2)):
        rr = quadratic_algebra_residual(params, l1, l2, rep, which=which)
        assert rr.residual < 1e-9, (params.regime, which, l1, l2, rr.residual)


def test_quadratic_algebra_prefactor_invariance():
    # the residual is bilinear, so attaching the scalar prefactors must not
    # change whether it vanishes
    rep = default_rep(XXX, 6)
    a = quadratic_algebra_residual(XXX, 0.9, -0.6, rep, include_prefactor=False)
    b = quadratic_algebra_residual(XXX, 0.9, -0.6, rep, include_prefactor=True)
    assert a.residual < 1e-11 and b.residual < 1e-11


@pytest.mark.parametrize("params", ALL + [RegimeParams.noncritical(0.5)],
                         ids=IDS + ["nc-eta05"])
def test_unitarity_and_crossing(params):
    rep = default_rep(params, 8)
    for lh in (0.44, -0.9, 1.3):
        unit, cross = unitarity_crossing_residual(params, lh, rep)
        assert unit.residual < 1e-9, (params.regime, lh, unit.residual)
        assert cross.residual < 1e-9, (params.regime, lh, cross.residual)


def test_scalar_unitarity_consistency_reuse():
    # the scalar piece of tt-unitarity is exactly the amplitude identity
    for params in ALL:
        prod = (amplitude(params, "-", 0.7).value * amplitude(params, "+", -0.7).value)
        assert abs(prod - 1.0) < 1e-10


# ------------------------------------------------------------------- type-II

def test_type2_spin_half_entries():
    eta = 0.35
    mat = make_type2(eta, 0.5)
    lh = 0.3
    part = mat.matrix_part(lh).entries
    # S+ entry = sin(i eta) sigma+, lower-left block
    np.testing.assert_allclose(part[2:, :2], np.sin(1j * eta) * mat.rep.s_plus,
                               atol=1e-14)
    assert mat.s_tilde == pytest.approx(0.0)
    t = mat.t(lh).entries
    pref = type2_amplitude(lh, eta, 0.5).value / np.sin(eta * (-lh + 0.0j + 0.5j))
    np.testing.assert_allclose(t[2:, :2], pref * np.sin(1j * eta) * mat.rep.s_plus,
                               atol=1e-13)


@pytest.mark.parametrize("spin", [1.0, 1.5])
def test_type2_quadratic_algebra(spin, eta=0.35):
    rng = np.random.default_rng(4)
    for l1, l2 in rng.uniform(-1.2, 1.2, size=(5, 2)):
        rr = type2_algebra_residual(eta, spin, l1, l2)
        assert rr.residual < 1e-9, (spin, l1, l2, rr.residual)


def test_type2_isotropic_limit_of_entries():
    # eta -> 0: entries / eta tend to the rational spin-defect structure
    spin, lh = 1.0, 0.4
    eta = 1e-5
    mat = make_type2(eta, spin, rep=spin_rep(spin, np.exp(-eta)))
    part = mat.matrix_part(lh).entries / eta
    rep1 = spin_rep(spin, 1.0)
    d = rep1.dim
    sz = np.diag(rep1.s_z)
    want = np.block([
        [np.diag(-lh + 1j * sz + 0.5j), 1j * rep1.s_minus],
        [1j * rep1.s_plus, np.diag(-lh - 1j * sz + 0.5j)]])
    np.testing.assert_allclose(part, want, atol=1e-4)


def test_type2_pole_reported():
    eta, spin = 0.35, 1.0
    mat = make_type2(eta, spin)
    lh_pole = 1j * (spin - 0.5) + 0.5j   # zero of sin(eta(-lh + i s~ + i/2))
    with pytest.raises(ZeroDivisionError):
        mat.prefactor(complex(lh_pole))


def test_type2_dimension_mismatch():
    with pytest.raises(ValueError):
        make_type2(0.35, 1.0, rep=spin_rep(0.5, np.exp(-0.35)))
