from fractions import Fraction

import pytest

import lwgas


def test_cost_model():
    assert lwgas.per_user_cost("proposed", 50) == 1189
    assert lwgas.per_user_cost("harn", 10) == 1868
    assert lwgas.per_user_cost("harn", 10, harn_slope="table") == 1558
    assert lwgas.per_user_cost("chien", 10) == 6855
    assert lwgas.savings_ratio(10) == Fraction(6855 - 1189, 6855)
    with pytest.raises(ValueError):
        lwgas.per_user_cost("proposed", 0)


def test_curve():
    c = lwgas.load_curve("builtin:test2017")
    assert c.p == 2017
    assert c.order == 2035
    assert c.scalar_order == 37
    assert c.protocol_generator == (1368, 374)
    assert c.scalar_mul(8) == (170, 1485)
    assert c.scalar_mul(37) is None


def test_protocol_round_trip():
    g = lwgas.gm_init(3, 5, seed=4)
    assert g.threshold == 3
    assert g.member_ids == ["U1", "U2", "U3", "U4", "U5"]
    assert all(g.gm_verify().values())
    assert g.decentralized_verify(["U1", "U3", "U5"])
    key = g.key_agreement(["U2", "U3", "U4"])
    assert key is not None and g.verify_secret(key)
    assert g.key_agreement(["U1", "U5"]) is None
    c = g.curve
    assert c.scalar_mul(key) == g.Q
    with pytest.raises(ValueError):
        lwgas.gm_init(6, 5)
    with pytest.raises(lwgas.LwgasError):
        g.decentralized_verify(["U1"])


def test_secp160r1_group():
    g = lwgas.gm_init(2, 4, curve="builtin:secp160r1", seed=2)
    x, y = g.share("U1")
    assert x == 1 and 0 < y < g.curve.scalar_order
    assert g.public_share("U1") == g.curve.scalar_mul(y)


def test_harn():
    assert lwgas.harn_check(2, 5, 3, group="tiny", seed=3)
    assert lwgas.harn_check(3, 4, 4, group="fixture", seed=1)


def test_simulate_calibration_point():
    r = lwgas.simulate(scheme="proposed-centralized", m=10)
    assert r["outcome"] == "authenticated"
    assert r["auth_time_s"] == pytest.approx(1.3, abs=1e-6)
    assert r["member"]["tmulq"] == 1189
    lost = lwgas.simulate(scheme="proposed-centralized", m=4, loss_probability=1.0)
    assert lost["outcome"] == "failed(no-progress)"
    assert lost["auth_time_s"] is None
    with pytest.raises(ValueError):
        lwgas.simulate(m=3, colour="red")


def test_sweep_and_presets():
    csv = lwgas.sweep(["proposed-centralized", "harn"], [5, 5], jobs=2)
    lines = csv.strip().split("\n")
    assert lines[0] == "scheme,m,tmulq,compute_J,radio_J,total_J,auth_time_s"
    assert len(lines) == 5
    assert len(lwgas.preset("paper-fig4")) == 3
    assert lwgas.sweep(["harn"], []).strip() == lines[0]


def test_attacks():
    assert "replay" in lwgas.attack_names()
    rep = lwgas.attack("dos-invalid-share")
    assert rep["all_matched"]
    assert {f["case"] for f in rep["findings"]} >= {"centralized", "decentralized"}
