import numpy as np
import pytest

from qcdisk.beltrami import BeltramiSpec
from qcdisk.errors import DomainError, ResourceError
from qcdisk.fuchsian import (G1, G2, GENERATORS, Mobius, enumerate_group, fuchsian_mu,
                             reduce_to_domain, theta_series, word_count)


def test_generators():
    for g in GENERATORS:
        assert abs(g.det - 1) < 1e-12
    assert G1(0) == pytest.approx(np.sqrt(2) / 2)
    assert G2(0) == pytest.approx(1j * np.sqrt(2) / 2)
    z = 0.3 - 0.2j
    assert (G1 @ G1.inverse())(z) == pytest.approx(z)
    assert G1.deriv(z) == pytest.approx(1 / (G1.c * z + G1.d) ** 2)


@pytest.mark.parametrize("L", range(7))
def test_word_counts(L):
    e = enumerate_group(L)
    assert len(e) == word_count(L) == 1 + 2 * (3 ** L - 1)


def test_word_count_examples_and_cap():
    assert len(enumerate_group(0)) == 1
    assert len(enumerate_group(1)) == 5
    assert len(enumerate_group(6)) == 1457
    with pytest.raises(ResourceError):
        enumerate_group(12)
    with pytest.raises(DomainError):
        enumerate_group(-1)


def test_words_freely_reduced_and_distinct():
    e = enumerate_group(4)
    for w in e.words:
        for x, y in zip(w, w[1:]):
            assert (x + 2) % 4 != y
    assert len(set(e.words)) == len(e)


def test_elements_preserve_disk():
    e = enumerate_group(4)
    rng = np.random.default_rng(0)
    z = 0.99 * np.sqrt(rng.random(30)) * np.exp(2j * np.pi * rng.random(30))
    gz = (e.a[:, None] * z + e.b[:, None]) / (e.c[:, None] * z + e.d[:, None])
    assert np.all(np.abs(gz) < 1)
    assert np.allclose(e.a * e.d - e.b * e.c, 1)


def test_identity_only_series():
    e = enumerate_group(0)
    assert theta_series(e, 0.3 + 0.1j) == pytest.approx(1)
    assert theta_series(e, 0.3 + 0.1j, reduce=False) == pytest.approx(1)


def test_direct_series_converges():
    d = [theta_series(enumerate_group(L), 0, reduce=False) for L in (4, 5, 6)]
    assert abs(d[2] - d[1]) < abs(d[1] - d[0])
    for z in (0.2, 0.3j, -0.25 + 0.1j, 0.1 - 0.3j):
        s = [theta_series(enumerate_group(L), z, reduce=False) for L in (3, 4, 5, 6)]
        diffs = np.abs(np.diff(s))
        assert np.all(diffs[1:] < diffs[:-1])


def test_reduction_lands_in_fundamental_domain():
    rng = np.random.default_rng(1)
    z = 0.98 * np.sqrt(rng.random(200)) * np.exp(2j * np.pi * rng.random(200))
    zr, der = reduce_to_domain(z)
    for g in GENERATORS:
        assert np.all(np.abs(g.c * zr + g.d) >= 1 - 1e-12)
    assert np.all(np.abs(zr) <= np.abs(z) + 1e-12)


def test_reduced_series_invariance():
    e = enumerate_group(6)
    rng = np.random.default_rng(2)
    z = 0.6 * np.sqrt(rng.random(20)) * np.exp(2j * np.pi * rng.random(20))
    for g in GENERATORS:
        lhs = theta_series(e, g(z)) * g.deriv(z) ** 2
        assert np.max(np.abs(lhs - theta_series(e, z)) / np.abs(theta_series(e, z))) < 1e-10


def test_direct_series_invariance_magnitude():
    # the raw length-6 sum breaks invariance at the 1e-3 level; documented as a known shortfall
    e = enumerate_group(6)
    t0 = theta_series(e, 0, reduce=False)
    for g in (G1, G2):
        rel = abs(theta_series(e, g(0), reduce=False) * g.deriv(0) ** 2 - t0) / abs(t0)
        assert 1e-3 < rel < 2e-3


def test_mu_modulus_and_group_law():
    e = enumerate_group(6)
    rng = np.random.default_rng(3)
    z = 0.95 * np.sqrt(rng.random(100)) * np.exp(2j * np.pi * rng.random(100))
    mu = fuchsian_mu(0.5, e, z)
    assert np.max(np.abs(np.abs(mu) - 0.5)) < 1e-12
    assert np.all(fuchsian_mu(0.0, e, z) == 0)
    for g in GENERATORS:
        gz = g(z[:20])
        d = g.deriv(z[:20])
        law = fuchsian_mu(0.5, e, gz) * np.conj(d) / d
        assert np.max(np.abs(law - fuchsian_mu(0.5, e, z[:20]))) < 1e-10


def test_domain_errors():
    e = enumerate_group(1)
    with pytest.raises(DomainError):
        theta_series(e, 1.0)
    with pytest.raises(DomainError):
        fuchsian_mu(1.0, e, 0.1)
    with pytest.raises(DomainError):
        Mobius.normalized(1, 1, 1, 1)


def test_field_on_unit_circle():
    spec = BeltramiSpec.fuchsian(0.5, 3)
    mu = spec(np.exp(1j * np.linspace(0, 2 * np.pi, 16)))
    assert np.allclose(np.abs(mu), 0.5)
