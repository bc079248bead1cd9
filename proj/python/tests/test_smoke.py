import math

import numpy as np
import pytest

import torusns


def test_field_round_trip():
    f = torusns.random_field(2, 3, 2, seed=5)
    c = f.coefficients()
    assert c.shape == (7, 7, 2)
    g = torusns.Field.from_coefficients(c)
    assert torusns.sobolev_norm(f - g, 0.0) == 0.0
    # Real field: c(-xi) = conj(c(xi)).
    assert np.allclose(c[::-1, ::-1, :], np.conj(c), atol=1e-15)


def test_helmholtz_decomposition():
    F = torusns.random_field(3, 4, 3, seed=11)
    rest = F - torusns.project_grad(F) - torusns.project_sigma(F)
    assert torusns.sobolev_norm(rest, 0.0) <= 1e-13 * torusns.sobolev_norm(F, 0.0)
    assert torusns.project_sigma(F).divergence_defect() <= 1e-13


def test_solenoidal_transport_is_energy_neutral():
    u = torusns.random_field(2, 4, 2, seed=3, solenoidal=True)
    v = torusns.random_field(2, 4, 2, seed=4)
    assert abs(torusns.trilinear(u, v, v)) <= 1e-11 * torusns.sobolev_norm(v, 1.0) ** 2 * torusns.sobolev_norm(u, 1.0)


def test_basis_orthonormal():
    b = torusns.GalerkinBasis(2, 2)
    assert len(b) == 12  # nonzero integer vectors with |eta| <= 2
    for j in range(len(b)):
        for k in range(len(b)):
            ip = torusns.dual_product(b.field(j), b.field(k)).real
            assert abs(ip - (1.0 if j == k else 0.0)) <= 1e-13


def test_isotropic_certificate():
    A = torusns.parse_tensor("isotropic(0, 1)", 2)
    cert = torusns.certify(A, 4)
    assert cert["C_A"] == pytest.approx(0.5, rel=1e-13)
    with pytest.raises(torusns.EllipticityViolation):
        torusns.parse_tensor("isotropic(0, -1)", 2)


def test_describe_and_run(tmp_path):
    d = torusns.describe_scenario(scenario="taylor-green", K=4)
    assert d["B1"] == pytest.approx(0.5)
    assert d["C_A"] == pytest.approx(0.5)
    out = torusns.run({"scenario": "taylor-green", "K": "4", "T": "0.01", "stepper": "ifrk4",
                       "out_dir": str(tmp_path)})
    assert out["steps"] == 10
    exact = 0.5 * math.exp(-16 * math.pi**2 * out["t"][-1])
    assert out["energy"][-1] == pytest.approx(exact, rel=1e-10)
    assert (tmp_path / "manifest.json").exists()


def test_bad_setting():
    with pytest.raises(torusns.ConfigError):
        torusns.describe_scenario(K="eight")


def test_verify_suite():
    report = torusns.verify_suite("korn")
    assert report["pass"]
    assert "korn" in torusns.verify_suites()
