import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from fsoqkd.errors import InvalidArgumentError
from fsoqkd.signal import (
    DEFAULT_PILOT_AMPLITUDE,
    ChannelRealization,
    Constellation,
    apply_channel,
    build_constellation,
    build_frame,
    constellation_entropy,
    matched_filter,
    nu_for_entropy,
    read_constellation,
    read_frame,
    rrc_taps,
    shape,
    write_constellation,
    write_frame,
)


@pytest.mark.parametrize("order", [4, 16, 64, 256])
@pytest.mark.parametrize("nu", [0.0, 0.5])
def test_constellation_hits_modulation_variance(order, nu):
    c = build_constellation(order, nu, 8.0)
    assert c.order == order
    assert_allclose(2.0 * np.sum(c.probs * np.abs(c.points) ** 2), 8.0, rtol=1e-12)
    assert_allclose(c.mean_photon_number, 4.0, rtol=1e-12)


def test_uniform_constellation_has_full_entropy():
    c = build_constellation(64, 0.0, 8.0)
    assert_allclose(constellation_entropy(c), 6.0, atol=1e-12)


def test_shaping_rate_reaches_target_entropy(ps256):
    assert_allclose(constellation_entropy(ps256), 6.0, atol=1e-9)
    assert nu_for_entropy(256, 6.0) > 0.0


def test_constellation_rejects_bad_input():
    with pytest.raises(InvalidArgumentError):
        build_constellation(32, 0.0, 8.0)
    with pytest.raises(InvalidArgumentError):
        build_constellation(16, 0.0, 0.0)
    with pytest.raises(InvalidArgumentError):
        nu_for_entropy(16, 4.0)
    with pytest.raises(InvalidArgumentError):
        Constellation(points=np.array([1.0, -1.0]), probs=np.array([0.6, 0.6]), va=2.0)


def test_constellation_file(tmp_path, ps256):
    back = read_constellation(write_constellation(ps256, tmp_path / "ps256.txt"))
    assert_allclose(back.points, ps256.points, rtol=1e-15)
    assert_allclose(back.va, 8.0, rtol=1e-12)


def test_frame_layout_alternates_pilots(ps256):
    frame = build_frame(ps256, 10_000, seed=3)
    assert frame.n_symbols == 10_000
    assert frame.n_pilots == 5_000
    assert np.array_equal(frame.pilot_index, np.arange(0, 10_000, 2))
    assert_allclose(np.abs(frame.pilots), 2.0 * DEFAULT_PILOT_AMPLITUDE, rtol=1e-12)
    assert_allclose(frame.pilot_rate, 125e6)
    assert np.array_equal(frame.symbols[frame.quantum_index], frame.tx_quantum)


def test_frame_quantum_symbols_carry_modulation_variance(ps256):
    frame = build_frame(ps256, 200_000, seed=4)
    x = frame.tx_quantum
    # quadrature units: per-quadrature variance of x = 2*alpha equals va
    assert_allclose(np.var(x.real), 8.0, rtol=0.03)
    assert_allclose(np.var(x.imag), 8.0, rtol=0.03)


def test_frame_is_deterministic_per_seed(ps256):
    a = build_frame(ps256, 1000, seed=9)
    b = build_frame(ps256, 1000, seed=9)
    c = build_frame(ps256, 1000, seed=10)
    assert np.array_equal(a.symbols, b.symbols)
    assert not np.array_equal(a.symbols, c.symbols)


def test_frame_with_other_pilot_ratio(ps256):
    frame = build_frame(ps256, 1000, pilot_ratio=0.25, seed=1)
    assert frame.n_pilots == 250
    with pytest.raises(InvalidArgumentError):
        build_frame(ps256, 1000, pilot_ratio=1.0)


def test_frame_file(tmp_path, ps256):
    frame = build_frame(ps256, 2000, seed=5)
    back = read_frame(write_frame(frame, tmp_path / "frame.qfrm"))
    assert np.array_equal(back.symbols, frame.symbols)
    assert np.array_equal(back.pilot_mask, frame.pilot_mask)
    assert back.symbol_rate == frame.symbol_rate


def test_frame_file_rejects_truncated_payload(tmp_path, ps256):
    path = write_frame(build_frame(ps256, 100, seed=5), tmp_path / "frame.qfrm")
    path.write_bytes(path.read_bytes()[:-3])
    with pytest.raises(InvalidArgumentError):
        read_frame(path)


def test_channel_realization_units():
    ch = ChannelRealization(transmittance_block=0.444, xi_injected=0.0048, eta=0.35, v_el=0.1)
    assert_allclose(ch.slope, math.sqrt(0.35 * 0.444 / 2.0))
    assert_allclose(ch.noise_variance, 1.1 + 0.35 * 0.444 * 0.0048 / 2.0)
    with pytest.raises(ValueError):
        ChannelRealization(transmittance_block=1.2)


def test_closed_channel_delivers_pure_noise(ps256):
    frame = build_frame(ps256, 100_000, seed=1)
    y = apply_channel(frame, ChannelRealization(transmittance_block=0.0, v_el=0.1, linewidth_total=0.0), seed=2)
    assert_allclose(np.var(y.real), 1.1, rtol=0.02)
    assert_allclose(np.var(y.imag), 1.1, rtol=0.02)


def test_static_channel_gain_and_noise(ps256):
    frame = build_frame(ps256, 200_000, seed=1)
    ch = ChannelRealization(transmittance_block=0.444, xi_injected=0.0048, eta=0.35, v_el=0.1, linewidth_total=0.0)
    y = apply_channel(frame, ch, seed=2)
    x = frame.symbols
    t_hat = np.vdot(x, y).real / np.vdot(x, x).real
    resid = y - t_hat * x
    assert_allclose(t_hat, ch.slope, rtol=0.01)
    assert_allclose(np.var(resid.real), ch.noise_variance, rtol=0.02)


def test_channel_is_deterministic_per_seed(ps256):
    frame = build_frame(ps256, 1000, seed=1)
    ch = ChannelRealization(transmittance_block=0.5, freq_offset=1e6)
    assert np.array_equal(apply_channel(frame, ch, seed=5), apply_channel(frame, ch, seed=5))


def test_rrc_taps_unit_energy_and_symmetry():
    taps = rrc_taps(8, 0.2, 32)
    assert taps.size == 32 * 8 + 1
    assert_allclose(np.sum(taps**2), 1.0, rtol=1e-12)
    assert_allclose(taps, taps[::-1], atol=1e-12)


def test_shape_then_matched_filter_is_nyquist():
    taps = rrc_taps(8, 0.2, 32)
    x = np.exp(1j * np.pi / 2 * np.arange(64))
    out = matched_filter(shape(x, taps, 8), taps, 8, x.size)
    assert_allclose(out, x, atol=2e-2)


def test_oversampled_channel_matches_symbol_statistics(ps256):
    frame = build_frame(ps256, 50_000, seed=1)
    ch = ChannelRealization(transmittance_block=1.0, eta=1.0, linewidth_total=0.0)
    y = apply_channel(frame, ch, seed=2, oversampled=True)
    x = frame.symbols
    t_hat = np.vdot(x, y) / np.vdot(x, x)
    assert_allclose(abs(t_hat), ch.slope, rtol=0.01)
    assert abs(np.angle(t_hat)) < 0.01
    assert_allclose(np.var((y - t_hat * x).real), ch.noise_variance, rtol=0.03)


def test_phase_noise_is_a_wiener_process():
    # high-amplitude symbols so the additive noise barely moves the measured phase
    c = build_constellation(4, 0.0, 1e6)
    frame = build_frame(c, 200_000, pilot_amplitude=1000.0, seed=12)
    ch = ChannelRealization(transmittance_block=1.0, linewidth_total=1e6)
    theta = np.unwrap(np.angle(apply_channel(frame, ch, seed=13) * np.conj(frame.symbols)))
    q = 2.0 * math.pi * 1e6 / frame.symbol_rate
    for lag, rtol in ((1, 0.02), (50, 0.1)):
        steps = theta[lag:] - theta[:-lag]
        assert_allclose(np.var(steps), lag * q, rtol=rtol)
