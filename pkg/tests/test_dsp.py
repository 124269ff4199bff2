import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from fsoqkd.dsp import (
    CalibrationRecord,
    calibrate,
    compensate_frequency_offset,
    equalize,
    estimate_frequency_offset,
    estimate_gain,
    normalize_to_snu,
    pilot_snr_db,
    process_block,
    read_calibration,
    recover_phase,
    write_calibration,
)
from fsoqkd.errors import CalibrationError, InsufficientPilotsError, InvalidArgumentError, UnrecoverableBlockError
from fsoqkd.security import SecurityParams, estimate_channel
from fsoqkd.signal import ChannelRealization, apply_channel, build_frame


def _standardised(rng, n):
    z = rng.standard_normal(n)
    return (z - z.mean()) / z.std()


def test_calibration_from_exact_variances(rng):
    shot = math.sqrt(1.1) * _standardised(rng, 50_000)
    elec = math.sqrt(0.1) * _standardised(rng, 50_000)
    cal = calibrate(shot, elec, [0.67, 0.522])
    assert_allclose(cal.snu_scale, 1.0, rtol=1e-12)
    assert_allclose(cal.v_el, 0.1, rtol=1e-12)
    assert_allclose(cal.clearance_db, 10.0, rtol=1e-12)
    assert_allclose(cal.eta_total, 0.35, atol=0.005)
    assert_allclose(10.0 ** (-cal.clearance_db / 10.0), cal.v_el, atol=1e-12)


def test_calibration_of_complex_captures(rng):
    n = 50_000
    shot = 2.0 * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
    elec = 0.5 * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
    cal = calibrate(shot, elec, [0.9])
    assert_allclose(cal.snu_scale, 4.0 - 0.25, rtol=0.03)
    assert_allclose(cal.v_el, 0.25 / 3.75, rtol=0.05)


def test_zero_electronic_noise_caps_clearance(rng):
    cal = calibrate(rng.standard_normal(20_000), np.zeros(20_000), [0.5])
    assert cal.v_el == 0.0
    assert cal.clearance_db == 99.0


def test_calibration_rejects_bad_captures(rng):
    with pytest.raises(CalibrationError):
        calibrate(0.5 * rng.standard_normal(20_000), rng.standard_normal(20_000), [0.5])
    with pytest.raises(InvalidArgumentError):
        calibrate(rng.standard_normal(100), rng.standard_normal(100), [0.5])
    with pytest.raises(InvalidArgumentError):
        calibrate(rng.standard_normal(20_000), 0.1 * rng.standard_normal(20_000), [])
    with pytest.raises(InvalidArgumentError):
        calibrate(rng.standard_normal(20_000), 0.1 * rng.standard_normal(20_000), [1.5])


def test_record_from_clearance():
    cal = CalibrationRecord.from_clearance(10.0, 0.35)
    assert_allclose(cal.v_el, 0.1, rtol=1e-12)
    with pytest.raises(InvalidArgumentError):
        CalibrationRecord(snu_scale=1.0, v_el=0.1, clearance_db=10.0, eta_total=0.0)


def test_normalisation_puts_shot_noise_at_one(rng):
    n = 100_000
    snu, v_el = 3.0, 0.1
    shot_part = math.sqrt(snu) * rng.standard_normal(n)
    elec_part = math.sqrt(snu * v_el) * rng.standard_normal(n)
    cal = calibrate(shot_part + math.sqrt(snu * v_el) * rng.standard_normal(n), elec_part, [0.35])
    assert_allclose(np.var(normalize_to_snu(shot_part, cal)), 1.0, rtol=0.03)
    assert_allclose(np.var(normalize_to_snu(elec_part, cal)), v_el, rtol=0.05)


def test_normalisation_is_linear(rng):
    cal = CalibrationRecord(snu_scale=2.5, v_el=0.1, clearance_db=10.0, eta_total=0.35)
    x = rng.standard_normal(100) + 1j * rng.standard_normal(100)
    assert_allclose(normalize_to_snu(3.0 * x, cal), 3.0 * normalize_to_snu(x, cal), rtol=1e-14)


def test_calibration_file(tmp_path):
    cal = CalibrationRecord.from_clearance(12.5, 0.35, snu_scale=1.7)
    assert read_calibration(write_calibration(cal, tmp_path / "cal.txt")) == cal


def test_calibration_file_rejects_missing_keys(tmp_path):
    path = tmp_path / "cal.txt"
    path.write_text("snu_scale=1.0\nv_el=0.1\n")
    with pytest.raises(InvalidArgumentError):
        read_calibration(path)


def _pilot_stream(frame, offset, sigma2, rng):
    k = np.arange(frame.n_symbols)
    noise = math.sqrt(sigma2) * (rng.standard_normal(k.size) + 1j * rng.standard_normal(k.size))
    return frame.symbols * np.exp(2j * math.pi * offset * k / frame.symbol_rate) + noise


@pytest.mark.parametrize("offset", [5e6, -3e6, 0.0])
def test_frequency_offset_estimate(ps256, rng, offset):
    # 1e5 pilots at a pilot SNR of 20 dB
    frame = build_frame(ps256, 200_000, seed=2)
    rx = _pilot_stream(frame, offset, 0.4, rng)
    assert abs(estimate_frequency_offset(rx, frame) - offset) < 1e3


def test_frequency_offset_needs_enough_pilots(ps256):
    frame = build_frame(ps256, 2000, seed=2)
    with pytest.raises(InsufficientPilotsError):
        estimate_frequency_offset(frame.symbols, frame)


def test_frequency_compensation_undoes_rotation(ps256):
    frame = build_frame(ps256, 1000, seed=2)
    k = np.arange(frame.n_symbols)
    rx = frame.symbols * np.exp(2j * math.pi * 2e6 * k / frame.symbol_rate)
    assert_allclose(compensate_frequency_offset(rx, 2e6, frame.symbol_rate), frame.symbols, atol=1e-9)


def test_single_gain_equalizer_is_exact(ps256):
    frame = build_frame(ps256, 4000, seed=3)
    g = 2.0 * np.exp(1j * math.pi / 4)
    out = equalize(g * frame.symbols, frame)
    assert_allclose(out, frame.symbols, atol=1e-9)
    assert_allclose(estimate_gain(g * frame.symbols, frame), g, rtol=1e-12)


def test_fir_equalizer_is_exact_on_flat_channel(ps256):
    frame = build_frame(ps256, 4000, seed=3)
    g = 0.5 * np.exp(-1j * math.pi / 3)
    out = equalize(g * frame.symbols, frame, n_taps=5)
    assert_allclose(out, frame.symbols, atol=1e-8)


def test_gain_estimate_within_standard_error(ps256, rng):
    frame = build_frame(ps256, 20_000, seed=3)
    t = 0.3
    rx = t * frame.symbols + rng.standard_normal(frame.n_symbols) + 1j * rng.standard_normal(frame.n_symbols)
    energy = float(np.sum(np.abs(frame.pilots) ** 2))
    assert abs(estimate_gain(rx, frame) - t) < 4.0 * math.sqrt(1.0 / energy)


def test_equalizer_rejects_degenerate_input(ps256):
    frame = build_frame(ps256, 1000, seed=3)
    with pytest.raises(InsufficientPilotsError):
        equalize(np.zeros(frame.n_symbols, dtype=complex), frame)
    with pytest.raises(InvalidArgumentError):
        equalize(frame.symbols, frame, n_taps=0)


def test_constant_rotation_is_removed(ps256):
    frame = build_frame(ps256, 4000, seed=4)
    out = recover_phase(frame.symbols * np.exp(1j * math.pi / 3), frame)
    assert np.max(np.abs(np.angle(out * np.conj(frame.symbols)))) < 1e-9


def test_unit_window_tracks_phase_exactly_at_pilots(ps256, rng):
    frame = build_frame(ps256, 4000, seed=4)
    phi = np.cumsum(0.05 * rng.standard_normal(frame.n_symbols))
    out = recover_phase(0.3 * frame.symbols * np.exp(1j * phi), frame, window=1)
    idx = frame.pilot_index
    assert_allclose(out[idx], 0.3 * frame.symbols[idx], atol=1e-9)


def test_noiseless_chain_is_identity(ps256):
    frame = build_frame(ps256, 20_000, seed=5)
    t = 0.25
    rx = t * frame.symbols * np.exp(0.7j)
    block = process_block(rx, frame)
    assert np.array_equal(block.tx_quantum, frame.tx_quantum)
    assert_allclose(block.rx_quantum / t, frame.tx_quantum, atol=1e-6)
    assert block.pilot_snr_db > 60.0


def test_chain_applies_calibration(ps256):
    frame = build_frame(ps256, 20_000, seed=5)
    cal = CalibrationRecord(snu_scale=4.0, v_el=0.0, clearance_db=99.0, eta_total=1.0)
    block = process_block(2.0 * 0.25 * frame.symbols, frame, cal=cal, estimate_offset=False)
    assert_allclose(block.rx_quantum, 0.25 * frame.tx_quantum, atol=1e-9)


def test_low_snr_block_is_discarded(ps256):
    frame = build_frame(ps256, 20_000, seed=6)
    ch = ChannelRealization(transmittance_block=0.2, eta=0.35, v_el=0.1, linewidth_total=0.0)
    rx = apply_channel(frame, ch, seed=7)
    with pytest.raises(UnrecoverableBlockError) as info:
        process_block(rx, frame, estimate_offset=False)
    assert info.value.snr_db < 3.0


def test_pilot_snr_matches_operating_point(ps256):
    # t^2 = eta*T/2, pilot energy 80, per-quadrature noise 1 + v_el
    frame = build_frame(ps256, 100_000, seed=6)
    ch = ChannelRealization(transmittance_block=0.444, xi_injected=0.0048, eta=0.35, v_el=0.1, linewidth_total=0.0)
    rx = apply_channel(frame, ch, seed=7)
    expected = 10.0 * math.log10(ch.slope**2 * 80.0 / (2.0 * ch.noise_variance))
    assert_allclose(pilot_snr_db(rx, frame), expected, atol=0.1)


def test_slow_phase_noise_adds_little_excess_noise(ps256):
    frame = build_frame(ps256, 200_000, seed=8)
    params = SecurityParams(n_block=100_000)

    def xi_hat(linewidth):
        ch = ChannelRealization(transmittance_block=1.0, eta=0.35, v_el=0.1, linewidth_total=linewidth)
        block = process_block(apply_channel(frame, ch, seed=9), frame, phase_window=64, estimate_offset=False)
        return estimate_channel(block.tx_quantum, block.rx_quantum, CalibrationRecord.from_clearance(10.0, 0.35), params)

    # same noise draws in both runs, so the difference isolates the residual phase error
    assert xi_hat(100.0).xi_hat - xi_hat(0.0).xi_hat < 0.002


def test_default_chain_adds_little_excess_noise(ps256):
    # genie: the same received draw read at the quantum positions without any recovery
    frame = build_frame(ps256, 400_000, seed=10)
    ch = ChannelRealization(transmittance_block=0.444, xi_injected=0.0048, eta=0.35, v_el=0.1, linewidth_total=0.0)
    rx = apply_channel(frame, ch, seed=11)
    cal = CalibrationRecord.from_clearance(10.0, 0.35)
    params = SecurityParams(n_block=200_000)
    genie = estimate_channel(frame.tx_quantum, rx[frame.quantum_index], cal, params)
    block = process_block(rx * np.exp(0.4j), frame, estimate_offset=False)
    recovered = estimate_channel(block.tx_quantum, block.rx_quantum, cal, params)
    assert abs(recovered.xi_hat - genie.xi_hat) < 0.003
    assert abs(recovered.T_hat - genie.T_hat) < 0.005
