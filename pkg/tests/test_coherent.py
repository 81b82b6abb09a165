import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import trapezoid

from pdmosc.coherent import (
    coherent_amplitudes,
    coherent_state,
    coherent_wavefunction,
    coherent_y,
    displace,
    displaced_ground_state,
    energy_moments,
    poisson_prob,
    required_truncation,
    uncertainty_from_samples,
    uncertainty_product,
    uncertainty_product_x,
)
from pdmosc.errors import DomainError
from pdmosc.ladder import apply_ladder
from pdmosc.mass_models import MassFamily
from pdmosc.oscillators import first_kind, first_kind_eigenfunction
from pdmosc.special_fns import hermite_function
from pdmosc.transform import WaveSample

from _oracles import x_space_norm


def test_vacuum_amplitudes():
    c = coherent_amplitudes(0.0)
    assert c[0] == 1.0
    assert np.all(c[1:] == 0.0)


def test_real_label_gives_positive_amplitudes():
    c = coherent_amplitudes(1.7)
    assert np.all(np.abs(c.imag) == 0.0)
    assert np.all(c.real > 0.0)


def test_amplitudes_closed_form():
    z = 0.8 - 1.3j
    c = coherent_amplitudes(z)
    for k in range(25):
        ref = z ** k * math.exp(-abs(z) ** 2 / 4) / math.sqrt(2.0 ** k * math.factorial(k))
        assert c[k] == pytest.approx(ref, rel=1e-12, abs=1e-300)


def test_populations_are_poisson():
    z = 2.0
    p = np.abs(coherent_amplitudes(z)) ** 2
    mu = mpmath.mpf(abs(z) ** 2) / 2
    for k in range(31):
        ref = float(mu ** k * mpmath.exp(-mu) / mpmath.factorial(k))
        assert p[k] == pytest.approx(ref, rel=1e-12, abs=1e-300)
        assert poisson_prob(z, k) == pytest.approx(ref, rel=1e-12, abs=1e-300)


@settings(max_examples=40, deadline=None)
@given(re=st.floats(-4, 4), im=st.floats(-4, 4))
def test_populations_match_poisson_everywhere(re, im):
    z = complex(re, im)
    p = coherent_state(z).populations
    q = np.array([poisson_prob(z, n) for n in range(len(p))])
    np.testing.assert_allclose(p, q, rtol=1e-10, atol=1e-300)
    assert abs(p.sum() - 1.0) <= 1e-12


def test_poisson_examples():
    assert poisson_prob(0.0, 0) == 1.0
    assert poisson_prob(0.0, 3) == 0.0
    z = 3.0
    total = math.fsum(poisson_prob(z, n) for n in range(200))
    assert total == pytest.approx(1.0, abs=1e-14)
    pmf = [poisson_prob(math.sqrt(2.0), n) for n in range(10)]
    assert int(np.argmax(pmf)) in (0, 1)
    with pytest.raises(DomainError):
        poisson_prob(1.0, -1)


def test_truncation_too_small_names_requirement():
    need = required_truncation(3.0)
    with pytest.raises(DomainError, match=str(need)):
        coherent_amplitudes(3.0, need - 1)
    assert len(coherent_amplitudes(3.0, need + 5)) == need + 6


@pytest.mark.parametrize("r", [0.0, 0.5, 1.0, 2.5, 3.0, 6.0])
def test_truncated_norm(r):
    assert abs(coherent_state(r * np.exp(0.3j)).populations.sum() - 1.0) <= 1e-12


def test_energy_moment_examples():
    assert energy_moments(0.0) == (1.0, 0.0)
    mean, std = energy_moments(1.0)
    assert mean == pytest.approx(2.0, abs=1e-15)
    assert std == pytest.approx(math.sqrt(2.0), abs=1e-15)


@pytest.mark.parametrize("r", [0.5, 1.0, 2.5])
def test_energy_moments_against_series(r):
    z = r * np.exp(0.7j)
    mean, std = energy_moments(z)
    # independent oracle: Poisson sums in mpmath, E_k = 2k + 1
    mpmath.mp.dps = 30
    mu = mpmath.mpf(r) ** 2 / 2
    p = [mu ** k * mpmath.exp(-mu) / mpmath.factorial(k) for k in range(120)]
    m1 = mpmath.fsum(pk * (2 * k + 1) for k, pk in enumerate(p))
    m2 = mpmath.fsum(pk * (2 * k + 1) ** 2 for k, pk in enumerate(p))
    mpmath.mp.dps = 15
    assert abs(mean - float(m1)) <= 1e-10
    assert abs(std - float(mpmath.sqrt(m2 - m1 ** 2))) <= 1e-10
    s_mean, s_std = coherent_state(z).energy_series()
    assert abs(s_mean - mean) <= 1e-10
    assert abs(s_std - std) <= 1e-10


def test_dispersion_ratio_large_label():
    mean, std = energy_moments(10.0)
    assert std / mean == pytest.approx(math.sqrt(2) * 10 / 101, rel=1e-2)
    assert std / mean == pytest.approx(math.sqrt(2) / 10, rel=1e-2)


def test_vacuum_is_first_kind_ground_state():
    fam = MassFamily.regular()
    x = np.linspace(-20, 20, 81)
    got = coherent_wavefunction(coherent_state(0.0, fam), x)
    np.testing.assert_allclose(got, first_kind_eigenfunction(first_kind(fam), 0, x), atol=1e-15)


def test_regular_state_normalized_in_x():
    fam = MassFamily.regular()
    state = coherent_state(1 + 1j, fam)
    assert x_space_norm(fam, lambda x: coherent_wavefunction(state, x)) == pytest.approx(1.0, abs=1e-6)


def test_constant_mass_mean_position():
    z = 1.4
    y = np.linspace(-12, 14, 8001)
    rho = np.abs(coherent_wavefunction(coherent_state(z), y)) ** 2
    assert trapezoid(rho, y) == pytest.approx(1.0, abs=1e-10)
    assert trapezoid(y * rho, y) == pytest.approx(z, abs=1e-10)


def test_wavefunction_space_argument():
    state = coherent_state(0.5)
    with pytest.raises(DomainError):
        coherent_wavefunction(state, 0.0, space="k")
    np.testing.assert_array_equal(coherent_wavefunction(state, [0.2], space="y"), coherent_y(state, [0.2]))


def test_wavefunction_rejects_outside_domain():
    state = coherent_state(0.5, MassFamily.singular0())
    with pytest.raises(DomainError):
        coherent_wavefunction(state, -2.0)


@pytest.mark.parametrize("z", [0.7, 1 - 2j, -2.2 + 0.4j])
def test_displacement_identity(z):
    y = np.linspace(-20, 20, 2048, endpoint=False)
    ground = WaveSample(y, hermite_function(0, y).astype(complex), "y")
    moved = displace(ground, z)
    theta = coherent_y(coherent_state(z), y)
    h = y[1] - y[0]
    assert math.sqrt(np.sum(np.abs(moved.values - theta) ** 2) * h) <= 1e-5
    np.testing.assert_allclose(displaced_ground_state(z, y), theta, atol=1e-12)


def test_uncertainty_examples():
    assert uncertainty_product(coherent_state(0.0)) == pytest.approx(0.5, abs=1e-4)
    assert uncertainty_product(coherent_state(2 + 1j)) == pytest.approx(0.5, abs=1e-4)
    y = np.linspace(-16, 16, 4096, endpoint=False)
    fock = WaveSample(y, hermite_function(3, y), "y")
    assert uncertainty_from_samples(fock) == pytest.approx(3.5, abs=1e-6)


def test_uncertainty_needs_uniform_grid():
    y = np.linspace(-5, 5, 50) ** 3
    with pytest.raises(DomainError):
        uncertainty_from_samples(WaveSample(y, np.exp(-y * y), "y"))


def test_x_space_uncertainty_reported():
    # the x-space product has no claimed bound; for constant mass it is the y one
    assert uncertainty_product_x(coherent_state(1.0)) == pytest.approx(0.5, abs=1e-4)
    assert uncertainty_product_x(coherent_state(1.0, MassFamily.regular())) > 0.0


@settings(max_examples=25, deadline=None)
@given(r=st.floats(0, 3), phase=st.floats(0, 2 * math.pi))
def test_lowering_eigenvalue(r, phase):
    z = r * complex(math.cos(phase), math.sin(phase))
    y = np.linspace(-16, 16, 4001)
    theta = WaveSample(y, coherent_y(coherent_state(z), y), "y")
    lowered = apply_ladder("lower", None, theta)
    h = y[1] - y[0]
    err = math.sqrt(np.sum(np.abs(lowered.values - z * theta.values) ** 2) * h)
    assert err / theta.norm() <= 1e-4
