import csv

import numpy as np
import pytest
from numpy.testing import assert_allclose

from fsoqkd.coex import (
    ClassicalPlan,
    NgmiRow,
    classical_throughput,
    demap_llrs,
    gmi,
    gray_qam,
    leakage_excess_noise,
    modulate,
    ngmi,
    simulate_ngmi,
    supports_fec_rate,
    write_ngmi_csv,
)
from fsoqkd.errors import InvalidArgumentError


def test_default_plan_throughput():
    raw, net = classical_throughput(ClassicalPlan())
    assert raw == 4.05e12
    assert net == 3.0375e12


def test_empty_plan_carries_nothing():
    assert classical_throughput(ClassicalPlan(n_channels=0)) == (0.0, 0.0)


def test_plan_validation():
    with pytest.raises(ValueError):
        ClassicalPlan(n_channels=-1)
    with pytest.raises(ValueError):
        ClassicalPlan(unknown=1)
    assert ClassicalPlan().order == 64
    assert ClassicalPlan().center_index == 7


def test_leakage_referred_to_input():
    assert_allclose(leakage_excess_noise(0.001, 0.444), 0.001 / 0.444, rtol=1e-12)
    assert_allclose(leakage_excess_noise(0.001, 0.444), 0.00225, atol=5e-6)
    assert_allclose(leakage_excess_noise(0.003, 0.444), 3.0 * leakage_excess_noise(0.001, 0.444), rtol=1e-12)
    assert leakage_excess_noise(0.0, 0.444) == 0.0


def test_leakage_rejects_bad_input():
    with pytest.raises(InvalidArgumentError):
        leakage_excess_noise(-0.1, 0.5)
    with pytest.raises(InvalidArgumentError):
        leakage_excess_noise(0.1, 0.0)


@pytest.mark.parametrize("order", [4, 16, 64, 256])
def test_gray_labels_differ_in_one_bit_between_neighbours(order):
    points, labels = gray_qam(order)
    k = int(np.sqrt(order))
    assert_allclose(np.mean(np.abs(points) ** 2), 1.0, rtol=1e-12)
    grid = labels.reshape(k, k, -1)
    assert np.all(np.sum(grid[1:] != grid[:-1], axis=-1) == 1)
    assert np.all(np.sum(grid[:, 1:] != grid[:, :-1], axis=-1) == 1)
    assert len({tuple(row) for row in labels}) == order


def test_gray_qam_rejects_non_square_order():
    with pytest.raises(InvalidArgumentError):
        gray_qam(32)


def test_noiseless_ngmi_is_one(rng):
    bits = rng.integers(0, 2, size=(2000, 6), dtype=np.int8)
    tx = modulate(bits, 64)
    assert ngmi(bits, demap_llrs(tx, 1e-4, 64), 6) >= 0.999


def _posterior_ngmi(bits, rx, noise_var, order):
    points, labels = gray_qam(order)
    likelihood = np.exp(-np.abs(rx[:, None] - points[None, :]) ** 2 / noise_var)
    post = likelihood / likelihood.sum(axis=1, keepdims=True)
    m = labels.shape[1]
    total = np.zeros(rx.size)
    for b in range(m):
        match = labels[None, :, b] == bits[:, b][:, None]
        total += np.log2(np.sum(post * match, axis=1))
    return (m + np.mean(total)) / m


def test_ngmi_matches_probability_domain_reference(rng):
    n, snr_db = 10_000, 18.0
    bits = rng.integers(0, 2, size=(n, 6), dtype=np.int8)
    noise_var = 10.0 ** (-snr_db / 10.0)
    rx = modulate(bits, 64) + np.sqrt(noise_var / 2.0) * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
    value = ngmi(bits, demap_llrs(rx, noise_var, 64), 6)
    assert abs(value - _posterior_ngmi(bits, rx, noise_var, 64)) < 0.01
    assert supports_fec_rate(value, 0.8)


def test_ngmi_without_information_is_zero():
    assert abs(simulate_ngmi(-30.0, n_symbols=20_000, seed=3)) < 0.02
    bits = np.zeros((100, 6), dtype=np.int8)
    assert gmi(bits, np.zeros((100, 6))) == 0.0


def test_ngmi_increases_with_snr():
    values = [simulate_ngmi(snr, seed=5) for snr in (6.0, 10.0, 14.0, 18.0, 22.0)]
    assert np.all(np.diff(values) > 0.0)


def test_fec_threshold():
    assert supports_fec_rate(0.83, 0.8)
    assert not supports_fec_rate(0.79, 0.8)


def test_ngmi_dimension_mismatch_raises():
    bits = np.zeros((10, 6), dtype=np.int8)
    with pytest.raises(InvalidArgumentError):
        ngmi(bits, np.zeros((10, 6)), 4)
    with pytest.raises(InvalidArgumentError):
        gmi(bits, np.zeros((10, 5)))


def test_ngmi_csv_is_sorted(tmp_path):
    rows = [NgmiRow(1, 0, 17.0, 0.9), NgmiRow(0, 2, 16.5, 0.85), NgmiRow(0, 1, 17.2, 0.91)]
    with open(write_ngmi_csv(rows, tmp_path / "ngmi.csv")) as f:
        table = list(csv.DictReader(f))
    assert [(r["block_id"], r["channel_index"]) for r in table] == [("0", "1"), ("0", "2"), ("1", "0")]
    assert float(table[0]["ngmi"]) == 0.91


@pytest.mark.parametrize("snr_db", [10.0, 13.0, 16.0, 19.0, 22.0])
def test_ngmi_sweep_matches_probability_domain_reference(rng, snr_db):
    n = 20_000
    bits = rng.integers(0, 2, size=(n, 6), dtype=np.int8)
    noise_var = 10.0 ** (-snr_db / 10.0)
    rx = modulate(bits, 64) + np.sqrt(noise_var / 2.0) * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
    assert abs(ngmi(bits, demap_llrs(rx, noise_var, 64), 6) - _posterior_ngmi(bits, rx, noise_var, 64)) < 0.01
