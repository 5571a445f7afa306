from fractions import Fraction

import numpy as np
import pytest

from jordanflow.algebra import StructureTensor, act, inf_act, tensor_inner
from jordanflow.catalog import builtin, heisenberg, hyperbolic, names
from jordanflow.moment import (
    energy,
    energy_gradient,
    moment_map,
    moment_matrix,
    sl_residual,
    soliton_check,
    soliton_type,
    type_from_beta,
)
from jordanflow.sampling import (
    random_group_element,
    random_hermitian,
    random_symmetric_tensor,
    random_unitary,
)
from jordanflow.snap import RationalSnapError, snap_fraction, snap_spectrum


def test_moment_matrix_examples():
    assert np.allclose(moment_matrix(heisenberg(2)), np.diag([-2.0, 1.0]), atol=1e-12)
    assert np.allclose(moment_matrix(hyperbolic(2)), np.diag([-1.5, 0.0]), atol=1e-12)
    point = StructureTensor.from_products(1, {(1, 1, 1): 1.0})
    assert np.allclose(moment_matrix(point), [[-1.0]], atol=1e-14)


@pytest.mark.parametrize("n", [2, 3, 5])
def test_moment_matrix_families(n):
    heis = moment_matrix(heisenberg(n))
    assert np.allclose(heis, np.diag([-2.0, 1.0] + [0.0] * (n - 2)), atol=1e-12)
    hyp = moment_matrix(hyperbolic(n))
    expected = -((n + 1) / 2) * np.eye(n)
    expected[1:, 1:] += ((n + 1) / 2) * np.eye(n - 1)
    assert np.allclose(hyp, expected, atol=1e-12)


def test_moment_matrix_rejects_zero():
    with pytest.raises(ValueError):
        moment_matrix(StructureTensor.zero(3))


def test_moment_pairing_identity(rng):
    # <A.mu, mu> = Tr(M A) for Hermitian A is the definition of the moment map
    for n in (2, 4):
        mu = random_symmetric_tensor(rng, n)
        big_m = moment_matrix(mu)
        for _ in range(20):
            a = random_hermitian(rng, n)
            lhs = tensor_inner(inf_act(a, mu), mu)
            rhs = np.trace(big_m @ a)
            bound = 1e-9 * mu.norm_sq * np.linalg.norm(a)
            assert abs(lhs - rhs) <= bound


def test_trace_identity(rng):
    for n in (2, 3, 5):
        mu = random_symmetric_tensor(rng, n)
        assert np.trace(moment_matrix(mu)).real == pytest.approx(-mu.norm_sq, rel=1e-12)


def test_energy_examples():
    for n in range(2, 9):
        assert energy(heisenberg(n)) == pytest.approx(5.0, abs=1e-12)
        assert energy(hyperbolic(n)) == pytest.approx(1.0, abs=1e-12)


def test_energy_scale_invariance(rng):
    mu = random_symmetric_tensor(rng, 3)
    for c in (2.0, -0.3, 1.7j, 0.2 - 3.1j):
        assert energy(mu.scaled(c)) == pytest.approx(energy(mu), rel=1e-12)


def test_energy_lower_bound_and_equality_case():
    for name in names():
        mu = builtin(name).tensor
        m = moment_map(mu)
        e = energy(mu)
        n = mu.dim
        assert e >= 1.0 / n - 1e-12
        scalar = np.allclose(m, -np.eye(n) / n, atol=1e-9)
        assert scalar == (abs(e - 1.0 / n) < 1e-9)


def test_gradient_vanishes_at_catalog_solitons():
    for name in names():
        if name == "A_4_63":
            continue
        assert energy_gradient(builtin(name).tensor).norm <= 1e-8


def test_gradient_matches_finite_differences(rng):
    for n in (2, 3, 4):
        mu = random_symmetric_tensor(rng, n).normalized()
        xi = random_symmetric_tensor(rng, n)
        h = 1e-5
        plus = energy(StructureTensor(mu.table + h * xi.table))
        minus = energy(StructureTensor(mu.table - h * xi.table))
        fd = (plus - minus) / (2 * h)
        # real inner product of the real gradient with the direction
        analytic = tensor_inner(energy_gradient(mu), xi).real
        assert fd == pytest.approx(analytic, abs=1e-6 * max(1.0, abs(analytic)))


def test_unitary_equivariance(rng):
    for n in (2, 4):
        mu = random_symmetric_tensor(rng, n)
        k = random_unitary(rng, n)
        lhs = moment_matrix(act(k, mu))
        rhs = k @ moment_matrix(mu) @ k.conj().T
        assert np.max(np.abs(lhs - rhs)) < 1e-9 * mu.norm_sq


def test_soliton_check_on_catalog():
    for name in names():
        report = soliton_check(builtin(name).tensor)
        if name == "A_4_63":
            assert not report.is_soliton
        else:
            assert report.is_soliton, name
        assert report.derivation_pairing_max < 1e-8
        # M is Hermitian and Tr M = -||mu||^2
        assert np.max(np.abs(report.M - report.M.conj().T)) < 1e-12
        assert report.c < 0


def test_generic_basis_change_destroys_criticality(rng):
    mu = builtin("A_3_7").tensor
    for _ in range(5):
        g = random_group_element(rng, 3, cond_max=10)
        report = soliton_check(act(g, mu))
        assert not report.is_soliton
        assert report.soliton_residual > 1e-8


def test_heisenberg_orbit_is_entirely_critical(rng):
    # the maximal-energy orbit is a single K-orbit up to scaling, so a basis
    # change never destroys criticality there
    mu = heisenberg(3)
    for _ in range(5):
        g = random_group_element(rng, 3, cond_max=10)
        report = soliton_check(act(g, mu))
        assert report.is_soliton
        assert report.energy == pytest.approx(5.0, abs=1e-10)


def test_lambda_family_moment_matrix():
    # n1 n2 = n3, n1 n3 = n4 with unit coefficients: M = diag(-4, -2, 0, 2)
    lam = StructureTensor.from_products(4, {(1, 2, 3): 1.0, (1, 3, 4): 1.0})
    assert np.allclose(moment_matrix(lam), np.diag([-4.0, -2.0, 0.0, 2.0]), atol=1e-12)
    assert soliton_check(lam).is_soliton


def test_soliton_type_examples():
    t = soliton_type(heisenberg(2))
    assert (t.degrees, t.multiplicities) == ((1, 2), (1, 1))
    assert t.beta_diagonal() == [Fraction(-2), Fraction(1)]
    assert t.energy == 5

    t = soliton_type(builtin("A_3_7").tensor)
    assert str(t) == "(0<1<2;1,1,1)"
    assert t.beta_diagonal() == [Fraction(-5, 6), Fraction(-1, 3), Fraction(1, 6)]
    assert t.energy == Fraction(5, 6)

    t = soliton_type(builtin("A_2_4").tensor)
    assert str(t) == "(0;2)"
    assert t.beta_diagonal() == [Fraction(-1, 2), Fraction(-1, 2)]
    assert t.energy == Fraction(1, 2)


def test_soliton_type_rejects_non_soliton():
    with pytest.raises(ValueError):
        soliton_type(builtin("A_4_63").tensor)


def test_type_degrees_are_coprime_across_catalog():
    import math
    for name in names():
        entry = builtin(name)
        if entry.expected_type is None:
            continue
        t = soliton_type(entry.tensor)
        assert t == entry.expected_type, name
        g = 0
        for d in t.degrees:
            g = math.gcd(g, abs(d))
        assert g in (0, 1)
        assert sum(t.multiplicities) == entry.dim


def test_snap_fraction_behaviour():
    assert snap_fraction(0.5) == Fraction(1, 2)
    assert snap_fraction(-5 / 6 + 2e-7) == Fraction(-5, 6)
    with pytest.raises(RationalSnapError):
        snap_fraction(0.123456789)  # no denominator <= 64 close enough
    spec = snap_spectrum([-0.5000001, -0.4999999, 0.0])
    assert spec == [(Fraction(-1, 2), 2), (Fraction(0), 1)]


def test_type_from_beta_semisimple_convention():
    t = type_from_beta([(Fraction(-1, 4), 4)])
    assert (t.degrees, t.multiplicities) == ((0,), (4,))
    assert t.energy == Fraction(1, 4)


def test_soliton_data_is_scale_invariant():
    mu = builtin("A_3_7").tensor
    for c in (3.0, 0.01, 2.0j):
        scaled = mu.scaled(c)
        assert soliton_check(scaled).is_soliton
        assert soliton_type(scaled) == soliton_type(mu)


def test_sl_residual_examples():
    assert sl_residual(builtin("A_3_1").tensor) < 1e-12
    assert sl_residual(builtin("A_3_2").tensor) < 1e-9
    for n in (2, 4):
        # brute-force value from the explicit diagonal moment matrix
        diag = np.array([-2.0, 1.0] + [0.0] * (n - 2)) + 1.0 / n
        assert sl_residual(heisenberg(n)) == pytest.approx(np.linalg.norm(diag), rel=1e-12)


def test_diagonal_moment_weight_decomposition():
    # when M is diagonal it equals the |coefficient|^2-weighted sum of the
    # supported weight vectors, ordered pairs counted separately
    for name in names():
        mu = builtin(name).tensor
        big_m = moment_matrix(mu)
        assert np.max(np.abs(big_m - np.diag(np.diag(big_m)))) < 1e-9
        n = mu.dim
        recon = np.zeros(n)
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    w = np.zeros(n)
                    w[i] -= 1
                    w[j] -= 1
                    w[k] += 1
                    recon += abs(mu.table[i, j, k]) ** 2 * w
        assert np.max(np.abs(np.diag(big_m).real - recon)) < 1e-9 * max(1.0, mu.norm_sq)


def test_moment_report_json_shape():
    payload = soliton_check(heisenberg(2)).to_json_dict()
    assert set(payload) == {
        "dim", "M", "m_eigenvalues", "energy", "c",
        "soliton_residual", "is_soliton", "derivation_pairing_max",
    }
    assert payload["energy"] == pytest.approx(5.0)
