import math

import numpy as np
import pytest

import fracback


def test_gamma_matches_math():
    for z in (0.1, 0.5, 1.3, 2.7, 5.0):
        assert fracback.gamma(z) == pytest.approx(math.gamma(z), rel=1e-13)


def test_default_grading():
    assert fracback.default_grading(0.5) == pytest.approx(3.0)
    assert fracback.default_grading(0.9) == pytest.approx(1.1 / 0.9)
    t = fracback.graded_times(1.0, 4, 2.0)
    np.testing.assert_allclose(t, [0.0, 1 / 16, 1 / 4, 9 / 16, 1.0])


def test_forward_shape_and_boundaries():
    out = fracback.forward(alpha=0.4, N=10, M=7)
    u = out["u"]
    assert u.shape == (8, 11)
    assert out["t"][0] == 0.0 and out["t"][-1] == 1.0
    assert np.all(u[:, 0] == 0.0) and np.all(u[:, -1] == 0.0)
    assert np.all(np.isfinite(u))


def test_zero_data_stays_zero():
    u = fracback.forward(N=6, M=5, zero_data=True)["u"]
    assert np.all(u == 0.0)


def test_forward_is_deterministic():
    a = fracback.forward(alpha=0.7, N=12, M=9)["u"]
    b = fracback.forward(alpha=0.7, N=12, M=9)["u"]
    assert np.array_equal(a, b)


def test_clean_reconstruction_is_accurate():
    res = fracback.reconstruct(alpha=0.5, N=40, M=40, r=1.0)
    assert res["E_u0_2"] < 5e-2
    assert res["E_psi_inf"] < 1e-8
    assert 1.0 <= res["condition_number"] < 10.0
    assert res["u0_hat"].shape == (39,)


def test_reconstruction_from_explicit_psi_matches_default():
    base = fracback.reconstruct(alpha=0.3, N=20, M=20, r=1.0)
    again = fracback.reconstruct(psi=base["psi_measured"], alpha=0.3, N=20, M=20, r=1.0)
    np.testing.assert_array_equal(base["u0_hat"], again["u0_hat"])
    assert "E_u0_2" not in again


def test_noise_is_seeded():
    psi = np.sin(np.pi * np.linspace(0, 1, 21)[1:-1])
    a = fracback.add_noise(psi, 0.05, 42)
    b = fracback.add_noise(psi, 0.05, 42)
    c = fracback.add_noise(psi, 0.05, 43)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    np.testing.assert_array_equal(fracback.add_noise(psi, 0.0, 42), psi)


def test_tables():
    rows = fracback.table1([0.5], [16, 32], r=1.0)
    assert [(r["N"], r["M"]) for r in rows] == [(16, 16), (32, 32)]
    assert rows[1]["E_u0_2"] < rows[0]["E_u0_2"]
    noisy = fracback.table2([0.5], [0.01, 0.05], N=20, M=20, r=1.0)
    assert noisy[1]["E_u0_2"] > noisy[0]["E_u0_2"]
    assert all(r["seed"] == 42 for r in noisy)


def test_oracle_check_small():
    out = fracback.oracle_check(alpha=0.5, modes=3, fine_M=400, N=30, M=30, r=1.0)
    assert out["all_positive"]
    assert all(row["A_k_T"] >= out["gronwall_floor"] for row in out["rows"])
    assert out["relative_gap_l2h"] < 0.1


def test_bad_arguments_raise():
    with pytest.raises(ValueError):
        fracback.forward(alpha=1.5)
    with pytest.raises(ValueError):
        fracback.reconstruct(psi=np.zeros(3), N=20, M=20)
