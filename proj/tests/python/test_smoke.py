import json

import numpy as np
import pytest

import mcwave


def qam16(rows, cols, seed):
    rng = np.random.default_rng(seed)
    levels = np.array([-3.0, -1.0, 1.0, 3.0]) / np.sqrt(10.0)
    return rng.choice(levels, (rows, cols)) + 1j * rng.choice(levels, (rows, cols))


def test_dft_matches_numpy():
    x = np.random.default_rng(0).standard_normal(37) + 1j
    np.testing.assert_allclose(mcwave.dft(x), np.fft.fft(x), atol=1e-11)
    np.testing.assert_allclose(mcwave.idft(mcwave.dft(x)), x, atol=1e-12)


def test_phydyas_prototype_shape_and_symmetry():
    p = mcwave.phydyas_prototype(64)
    assert p.shape == (255,)
    np.testing.assert_allclose(p, p[::-1], atol=1e-12)
    assert np.sum(p**2) == pytest.approx(1.0)
    with pytest.raises(ValueError, match="no coefficient table"):
        mcwave.phydyas_prototype(64, K=3)


def test_nyquist_contrast():
    assert mcwave.verify_nyquist("ofdm", 8, 64)["max_cross"] < 1e-10
    assert mcwave.verify_nyquist("modified-ofdm", 8, 16)["max_adjacent_cross"] > 0.1
    on = mcwave.verify_nyquist("cmt", 8, 32, span=16, max_lag=16)
    off = mcwave.verify_nyquist("cmt", 8, 32, span=16, phase_alternation=False, max_lag=16)
    assert on["max_cross"] < 5e-3 < 0.1 < off["max_adjacent_cross"]


def test_ofdm_multipath_loopback():
    A = qam16(10, 64, 1)
    h = np.array([1.0, 0.4 + 0.2j, -0.2j, 0.1])
    rx = mcwave.apply_channel(mcwave.ofdm_modulate(A, cp_len=16), h)
    Y = mcwave.ofdm_demodulate(rx, 64, cp_len=16, channel=h)
    assert np.max(np.abs(Y - A)) < 1e-8


def test_cmt_and_smt():
    A = qam16(12, 8, 2)
    s = mcwave.smt_modulate(A, stride=16, span=16)
    np.testing.assert_allclose(s, mcwave.cmt_qam_modulate(A, stride=16, span=16), atol=1e-10)
    Y = mcwave.smt_demodulate(s, 8, 12, stride=16, span=16)
    assert np.max(np.abs(Y - A)) < 5e-3
    r = np.random.default_rng(3).uniform(-1, 1, (20, 8))
    back = mcwave.cmt_demodulate(mcwave.cmt_modulate(r, 16, span=16), 8, 20, 16, span=16)
    assert np.max(np.abs(back - r)) < 5e-3


def test_oqam_loopback_and_direct_form():
    A = qam16(16, 64, 4)
    tx = mcwave.oqam_modulate(A)
    np.testing.assert_allclose(tx, mcwave.oqam_modulate(A, direct=True), atol=1e-10)
    assert mcwave.evm_db(A, mcwave.oqam_demodulate(tx, 64, 16)) < -55.0


def test_psd_and_numeric_error():
    freq, power = mcwave.estimate_psd(mcwave.oqam_modulate(qam16(16, 16, 5)), 64)
    assert freq.shape == power.shape == (64,)
    assert power.max() == pytest.approx(0.0)
    with pytest.raises(mcwave.NumericError):
        mcwave.estimate_psd(np.zeros(256, dtype=complex), 64)


def test_simulate_is_deterministic():
    cfg = json.dumps({"waveform": "oqam", "num_subcarriers": 16, "num_symbols": 8, "master_seed": 3})
    a = mcwave.simulate(cfg, 15.0)
    b = mcwave.simulate(cfg, 15.0)
    assert a["config_hash"] == b["config_hash"]
    np.testing.assert_array_equal(a["rx_symbols"], b["rx_symbols"])
    assert 0.0 <= a["ber"] <= 1.0


def test_run_cli_exit_codes(tmp_path):
    code, out, _ = mcwave.run_cli(["verify-nyquist", "--set", "ofdm", "--out", str(tmp_path / "r.json")])
    assert code == 0 and "PASS" in out
    code, _, err = mcwave.run_cli(["simulate", "--qam", "8"])
    assert code == 2 and "qam_order" in err
