import math

import numpy as np
import pytest

import projchan


def test_werner_holevo_minimal_entropy():
    t = projchan.zoo("wh:d=3")
    assert t.dim == 3
    for alpha in (0.5, 1.0, 2.0, projchan.ALPHA_INF):
        r = projchan.min_output_entropy(t, alpha, starts=8)
        assert abs(r["value"] - 1.0) < 1e-6


def test_channel_from_kraus_roundtrip():
    t = projchan.zoo("wh:d=3")
    u = projchan.Channel.from_kraus(t.kraus)
    assert np.allclose(u.choi, t.choi)
    assert u.validate()["valid"]
    rho = np.eye(3, dtype=complex) / 3
    assert np.allclose(u.apply(rho), rho)


def test_projective_m_and_norm():
    assert projchan.projective_m("coarse:n=2,D=2") == 2
    assert projchan.projective_m("depol:d=3") is None
    assert abs(projchan.max_output_norm(projchan.zoo("wh:d=3"), starts=8)["value"] - 0.5) < 1e-9


def test_additivity_violation_at_order_five():
    t = projchan.zoo("wh:d=3")
    r = projchan.additivity_gap([t, t], 5.0, starts=8)
    assert r["gap"] >= 0.01
    assert r["witness_start"] == 1


def test_capacity_and_chi():
    assert abs(projchan.capacity("weyl:d=4", starts=8)["capacity"] - (2 - math.log2(3))) < 1e-6
    ident = projchan.Channel.from_kraus([np.eye(2, dtype=complex)])
    states = [np.diag([1.0, 0.0]).astype(complex), np.diag([0.0, 1.0]).astype(complex)]
    assert abs(projchan.holevo_chi(ident, [0.5, 0.5], states) - 1.0) < 1e-12


def test_example9_entanglement_of_formation():
    rho = projchan.example9_state()
    assert rho.shape == (16, 16)
    r = projchan.eof_upper(rho, 4, 4, starts=8)
    assert abs(r["value"] - 1.0) < 1e-3


def test_errors_are_value_errors():
    with pytest.raises(projchan.ProjchanError):
        projchan.zoo("wh:d=1")
    with pytest.raises(ValueError):
        projchan.renyi_entropy(np.eye(2, dtype=complex) / 2, -1.0)
