import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import trapezoid

from pdmosc.errors import DomainError
from pdmosc.ladder import (
    FactorizationPair,
    apply_factorization,
    apply_ladder,
    beta_oscillator,
    commutator_value,
    ladder_coefficient,
    missing_state,
    oscillator_pair,
    partner_potential,
    potential_from_beta,
    riccati_residual,
)
from pdmosc.mass_models import MassFamily, MassKind, OrderingParameter, coordinate_map
from pdmosc.oscillators import first_kind, first_kind_eigenfunction
from pdmosc.special_fns import hermite_functions
from pdmosc.transform import PotentialSpec, WaveSample

SQRT2 = math.sqrt(2)
CATALOG = [MassFamily.singular0(), MassFamily.singular_n(1), MassFamily.singular_n(2),
           MassFamily.singular_n(3), MassFamily.regular(), MassFamily.constant()]
MINT = OrderingParameter(-0.25)


def _ids(fam):
    return fam.kind.value + (str(fam.n) if fam.n else "")


def _grid(fam, count=200):
    x = np.asarray(coordinate_map(fam).inverse(np.linspace(-3, 3, count)))
    if fam.kind is MassKind.SINGULAR_N:
        x = x[np.abs(x - fam.t0) > 1e-4]
    return x


def _y_grid():
    return np.linspace(-16, 16, 4001)


# -- beta --------------------------------------------------------------------------
def test_beta_constant_mass():
    for a in (-0.25, 0.0, 0.3):
        assert beta_oscillator(MassFamily.constant(), a, 1.0) == pytest.approx(1 / SQRT2, rel=1e-15)


def test_beta_regular_mint():
    x = np.linspace(-4, 4, 17)
    np.testing.assert_allclose(beta_oscillator(MassFamily.regular(), -0.25, x), np.arcsinh(x) / SQRT2, rtol=1e-14)


def test_beta_singular_n1():
    # int_0^1 x^(-2/3) dx = 3 and m'/m^(3/2) = -(4/3) x^(-1/3)
    expected = (3.0 + 0.25 * 4.0 / 3.0) / SQRT2
    assert beta_oscillator(MassFamily.singular_n(1), 0.0, 1.0) == pytest.approx(expected, rel=1e-14)


# -- Riccati, commutator, potentials ----------------------------------------------------
def _textbook_pair():
    return FactorizationPair(MassFamily.constant(), MINT, beta=lambda x: np.asarray(x) / SQRT2, epsilon=0.5)


def test_riccati_textbook_oscillator():
    x = np.linspace(-5, 5, 21)
    # beta' comes from finite differences here
    res = riccati_residual(_textbook_pair(), PotentialSpec.harmonic(), x)
    assert np.max(np.abs(res)) <= 1e-9


def test_riccati_regular_arcsinh():
    pair = oscillator_pair(MassFamily.regular(), MINT)
    x = np.linspace(-6, 6, 200)
    assert np.max(np.abs(riccati_residual(pair, PotentialSpec.arcsinh_sq(), x))) <= 1e-9


def test_riccati_detects_wrong_beta():
    fam = MassFamily.regular()
    good = oscillator_pair(fam, MINT)
    bad = FactorizationPair(fam, MINT, beta=lambda x: good.beta(x) + 0.1, epsilon=0.5)
    x = np.linspace(-2, 2, 9)
    assert np.min(np.abs(riccati_residual(bad, PotentialSpec.arcsinh_sq(), x))) > 1e-3


def test_commutator_examples():
    assert commutator_value(_textbook_pair(), 0.7) == pytest.approx(-1.0, abs=1e-10)
    x = np.linspace(-5, 5, 200)
    reg = oscillator_pair(MassFamily.regular(), MINT)
    assert np.max(np.abs(commutator_value(reg, x) + 1)) <= 1e-9
    s1 = oscillator_pair(MassFamily.singular_n(1), OrderingParameter(0))
    xs = x[np.abs(x) > 1e-3]
    assert np.max(np.abs(commutator_value(s1, xs) + 1)) <= 1e-9


@pytest.mark.parametrize("fam", CATALOG, ids=_ids)
def test_catalog_ladder_identities(fam):
    pair = oscillator_pair(fam)
    x = _grid(fam)
    assert np.max(np.abs(commutator_value(pair, x) + 1)) <= 1e-8
    V = PotentialSpec.custom(lambda t: potential_from_beta(pair, t), domain=fam.domain)
    assert np.max(np.abs(riccati_residual(pair, V, x))) <= 1e-9
    # the factorized potential is the first-kind one, 1/2 s(x)^2
    first = first_kind(fam).potential
    np.testing.assert_allclose(potential_from_beta(pair, x), first(x), rtol=1e-9, atol=1e-9)


@settings(max_examples=40, deadline=None)
@given(a=st.floats(-0.7, 0.7), x=st.floats(-5, 5), lam=st.floats(0.3, 3))
def test_commutator_minus_one_for_any_ordering(a, x, lam):
    pair = oscillator_pair(MassFamily.regular(lam=lam), OrderingParameter(a))
    assert commutator_value(pair, x) == pytest.approx(-1.0, abs=1e-9)


def test_potential_from_beta_examples():
    x = np.linspace(-3, 3, 13)
    np.testing.assert_allclose(potential_from_beta(_textbook_pair(), x), x * x / 2, atol=1e-14)
    reg = oscillator_pair(MassFamily.regular(), MINT)
    np.testing.assert_allclose(potential_from_beta(reg, x), 0.5 * np.arcsinh(x) ** 2, atol=1e-12)
    s1 = oscillator_pair(MassFamily.singular_n(1), OrderingParameter(0))
    xp = np.linspace(0.2, 4, 12)
    np.testing.assert_allclose(potential_from_beta(s1, xp), 4.5 * xp ** (2 / 3), rtol=1e-12)


def test_partner_of_ladder_pair_is_shifted():
    pair = oscillator_pair(MassFamily.regular())
    V = PotentialSpec.arcsinh_sq()
    x = np.linspace(-4, 4, 17)
    np.testing.assert_allclose(partner_potential(pair, V, x), V(x) + 1.0, atol=1e-9)


def test_tanh_pair_has_free_partner():
    # beta = tanh/sqrt2, eps = -1/2 factorizes V = -sech^2 with a flat partner
    pair = FactorizationPair(MassFamily.constant(), MINT, beta=lambda x: np.tanh(x) / SQRT2, epsilon=-0.5,
                             beta_prime=lambda x: 1 / (SQRT2 * np.cosh(x) ** 2))
    V = PotentialSpec.custom(lambda x: -1 / np.cosh(np.asarray(x)) ** 2, y_min=0.0)
    x = np.linspace(-5, 5, 41)
    assert np.max(np.abs(riccati_residual(pair, V, x))) <= 1e-12
    np.testing.assert_allclose(partner_potential(pair, V, x), 0.0, atol=1e-12)
    ms = missing_state(pair, x)
    assert not ms.tilde_normalizable
    assert ms.m_normalizable
    # psi_M is the bound state sech(x) / sqrt 2 of -sech^2
    np.testing.assert_allclose(ms.psi_m, 1 / (SQRT2 * np.cosh(x)), rtol=1e-8)


def test_zero_commutator_partner_unchanged():
    pair = FactorizationPair(MassFamily.constant(), MINT, beta=lambda x: np.full_like(np.asarray(x, float), 1.0),
                             epsilon=0.0, beta_prime=lambda x: np.zeros_like(np.asarray(x, float)))
    V = PotentialSpec.custom(lambda x: np.ones_like(np.asarray(x, float)), y_min=0.0)
    x = np.linspace(-2, 2, 9)
    np.testing.assert_allclose(commutator_value(pair, x), 0.0, atol=1e-15)
    np.testing.assert_allclose(partner_potential(pair, V, x), V(x), atol=1e-15)


def test_numeric_beta_derivative():
    fam = MassFamily.regular()
    exact = oscillator_pair(fam, MINT)
    numeric = FactorizationPair(fam, MINT, beta=exact.beta, epsilon=0.5)
    x = np.linspace(-3, 3, 13)
    np.testing.assert_allclose(numeric.dbeta(x), exact.dbeta(x), atol=1e-9)


# -- missing states -----------------------------------------------------------------------
def test_missing_state_constant_mass():
    pair = oscillator_pair(MassFamily.constant())
    x = np.linspace(-6, 6, 121)
    ms = missing_state(pair, x)
    assert not ms.tilde_normalizable
    assert ms.m_normalizable
    np.testing.assert_allclose(ms.psi_m, np.pi ** -0.25 * np.exp(-x * x / 2), atol=1e-12)
    # unnormalized growing Gaussian e^(x^2/2)
    ratio = ms.psi_tilde / np.exp(x * x / 2)
    np.testing.assert_allclose(ratio, ratio[0], rtol=1e-12)


@pytest.mark.parametrize("fam", [MassFamily.regular(), MassFamily.singular0(), MassFamily.singular_n(1)],
                         ids=_ids)
def test_missing_state_is_first_kind_ground_state(fam):
    pair = oscillator_pair(fam)
    x = _grid(fam, 60)
    ms = missing_state(pair, x)
    assert ms.m_normalizable and not ms.tilde_normalizable
    ref = first_kind_eigenfunction(first_kind(fam), 0, x)
    np.testing.assert_allclose(np.abs(ms.psi_m), np.abs(ref), atol=1e-9)


# -- y-space ladder operators ---------------------------------------------------------------
def test_lower_ground_state_vanishes():
    y = _y_grid()
    phi = hermite_functions(0, y)[0]
    out = apply_ladder("lower", None, WaveSample(y, phi, "y"))
    assert math.sqrt(trapezoid(out.values**2, y)) <= 1e-6


def test_lower_phi3():
    y = _y_grid()
    phis = hermite_functions(3, y)
    out = apply_ladder("lower", None, WaveSample(y, phis[3], "y"))
    assert math.sqrt(trapezoid((out.values - math.sqrt(6) * phis[2]) ** 2, y)) <= 1e-6


def test_raise_then_lower():
    y = _y_grid()
    phi2 = hermite_functions(2, y)[2]
    wave = WaveSample(y, phi2, "y")
    out = apply_ladder("lower", None, apply_ladder("raise", None, wave))
    assert math.sqrt(trapezoid((out.values - 6 * phi2) ** 2, y)) <= 1e-5


@pytest.mark.parametrize("k", range(1, 7))
def test_lowering_coefficient(k):
    y = _y_grid()
    phis = hermite_functions(k, y)
    out = apply_ladder("lower", None, WaveSample(y, phis[k], "y"))
    assert ladder_coefficient(out, WaveSample(y, phis[k - 1], "y")) == pytest.approx(math.sqrt(2 * k), abs=1e-5)


def test_ladder_grid_checks():
    y = np.linspace(-5, 5, 500)
    with pytest.raises(DomainError):
        apply_ladder("lower", None, WaveSample(y, np.exp(-y * y), "y"))
    y = np.concatenate((np.linspace(-5, 0, 600), np.linspace(0.001, 5, 600)))
    with pytest.raises(DomainError):
        apply_ladder("lower", None, WaveSample(y, np.exp(-y * y), "y"))
    y = np.linspace(-5, 5, 1001)
    with pytest.raises(DomainError):
        apply_ladder("sideways", None, WaveSample(y, np.exp(-y * y), "y"))


# -- x-space factorization operators --------------------------------------------------------
@pytest.fixture(scope="module")
def regular_states():
    fam = MassFamily.regular()
    osc = first_kind(fam)
    x = np.linspace(-1500, 1500, 600001)
    return fam, x, [first_kind_eigenfunction(osc, k, x) for k in range(5)]


def test_factorization_lowers_pulled_back_states(regular_states):
    fam, x, psis = regular_states
    pair = oscillator_pair(fam)
    for k in range(1, 5):
        out = apply_factorization("B", pair, WaveSample(x, psis[k], "x"))
        # B = a_- / sqrt 2 in y-space, so B psi_k = sqrt(k) psi_(k-1)
        assert math.sqrt(trapezoid((out.values - math.sqrt(k) * psis[k - 1]) ** 2, x)) <= 1e-5


def test_factorization_energy(regular_states):
    fam, x, psis = regular_states
    pair = oscillator_pair(fam)
    for k, psi in enumerate(psis):
        ab = apply_factorization("A", pair, apply_factorization("B", pair, WaveSample(x, psi, "x")))
        val = trapezoid(psi * (ab.values + pair.epsilon * psi), x)
        assert val == pytest.approx(k + 0.5, abs=1e-6)


def test_factorization_rejects_y_samples():
    pair = oscillator_pair(MassFamily.regular())
    y = _y_grid()
    with pytest.raises(DomainError):
        apply_factorization("B", pair, WaveSample(y, np.exp(-y * y), "y"))
