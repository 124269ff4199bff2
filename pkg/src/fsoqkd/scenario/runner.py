"""Block-by-block scenario runner: turbulence -> frame -> channel -> DSP -> estimation -> key rate."""

import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
from tqdm import tqdm

from fsoqkd.coex.ngmi import NgmiRow, simulate_ngmi, write_ngmi_csv
from fsoqkd.coex.throughput import leakage_excess_noise
from fsoqkd.dsp.calibration import CalibrationRecord, calibrate
from fsoqkd.dsp.chain import process_block
from fsoqkd.errors import FsoQkdError, UnrecoverableBlockError
from fsoqkd.scenario.config import ScenarioConfig
from fsoqkd.scenario.summary import summarize, write_summary
from fsoqkd.security.estimation import estimate_channel
from fsoqkd.security.keyrate import compute_skr
from fsoqkd.security.params import SecurityParams, SkrReport
from fsoqkd.security.report_io import BlockRow, write_skr_csv
from fsoqkd.signal.channel import ChannelRealization, apply_channel
from fsoqkd.signal.constellation import Constellation, build_constellation, nu_for_entropy
from fsoqkd.signal.frame import build_frame
from fsoqkd.turbulence.process import sample_capture_trace, sample_trace

logger = logging.getLogger(__name__)

TRACE_STREAM = 0xF50


@dataclass(frozen=True)
class BlockSeeds:
    frame: np.random.SeedSequence
    channel: np.random.SeedSequence
    calibration: np.random.SeedSequence
    classical: np.random.SeedSequence


def block_seeds(master_seed: int, block_id: int) -> BlockSeeds:
    """Independent streams for one block, derived from (master_seed, block_id) only."""
    frame, channel, cal, classical = np.random.SeedSequence([master_seed, block_id]).spawn(4)
    return BlockSeeds(frame=frame, channel=channel, calibration=cal, classical=classical)


def block_intensities(config: ScenarioConfig) -> np.ndarray:
    """Normalised intensity per block: the trace mean over each block's time span (1 without turbulence)."""
    n = config.block_count
    params = config.turbulence_params()
    if params is None:
        return np.ones(n)
    rate = config.turbulence.trace_rate
    seed = int(np.random.SeedSequence([config.master_seed, TRACE_STREAM]).generate_state(1)[0])
    dur = config.block_duration
    if config.turbulence.capture_interval is not None:
        captures = sample_capture_trace(params, n, dur, config.turbulence.capture_interval, rate, seed)
        return np.array([c.samples.mean() for c in captures])
    per_block = max(int(round(dur * rate)), 1)
    trace = sample_trace(params, max(n * per_block, 2) / rate, rate, seed)
    return trace.samples[: n * per_block].reshape(n, per_block).mean(axis=1)


@dataclass
class RunContext:
    config: ScenarioConfig
    security: SecurityParams
    constellation: Constellation
    calibration: CalibrationRecord
    intensities: np.ndarray

    @classmethod
    def from_config(cls, config: ScenarioConfig) -> "RunContext":
        s = config.security
        order = s.constellation_order
        nu = nu_for_entropy(order, s.entropy_bits) if s.entropy_bits < math.log2(order) else 0.0
        return cls(
            config=config,
            security=config.security_params(),
            constellation=build_constellation(order, nu, s.va),
            calibration=config.calibration_record(),
            intensities=block_intensities(config),
        )


def _measured_calibration(ctx: RunContext, seed: np.random.SeedSequence) -> CalibrationRecord:
    # shot-noise (LO on) and electronic-noise (LO off) captures in raw units
    cfg = ctx.config
    n = cfg.dsp.calibration_samples
    rng = np.random.default_rng(seed)
    snu, v_el = cfg.dsp.snu_scale, ctx.calibration.v_el
    shot = math.sqrt(snu * (1.0 + v_el)) * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
    elec = math.sqrt(snu * v_el) * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
    return calibrate(shot, elec, [ctx.calibration.eta_total])


def run_block(ctx: RunContext, block_id: int) -> tuple[BlockRow, NgmiRow | None]:
    cfg = ctx.config
    seeds = block_seeds(cfg.master_seed, block_id)
    intensity = float(ctx.intensities[block_id])
    T_block = min(cfg.channel.transmittance * intensity, 1.0)

    ngmi_row = None
    if cfg.classical is not None and cfg.classical.n_channels > 0:
        snr = cfg.classical.snr_db + 10.0 * math.log10(max(intensity, 1e-30))
        value = simulate_ngmi(snr, cfg.classical.order, cfg.classical.ngmi_symbols, seeds.classical)
        ngmi_row = NgmiRow(block_id=block_id, channel_index=cfg.classical.center_index, snr_db=snr, ngmi=value)

    xi = cfg.channel.xi_injected
    if cfg.classical is not None and cfg.classical.leak_power > 0.0 and T_block > 0.0:
        xi += leakage_excess_noise(cfg.classical.leak_power, T_block)

    try:
        frame = build_frame(
            ctx.constellation,
            cfg.frame_symbols,
            cfg.pilot_ratio,
            cfg.pilot_amplitude,
            seeds.frame,
            cfg.symbol_rate,
        )
        ch = ChannelRealization(
            transmittance_block=T_block,
            xi_injected=xi,
            freq_offset=cfg.channel.freq_offset,
            linewidth_total=cfg.channel.linewidth_total,
            eta=ctx.calibration.eta_total,
            v_el=ctx.calibration.v_el,
        )
        rx = apply_channel(frame, ch, seeds.channel, oversampled=cfg.channel.oversampled)
        cal = ctx.calibration
        if cfg.dsp.calibration_samples:
            cal = _measured_calibration(ctx, seeds.calibration)
        rx = rx * math.sqrt(cfg.dsp.snu_scale)
        block = process_block(
            rx,
            frame,
            cal,
            phase_window=cfg.dsp.phase_window,
            n_taps=cfg.dsp.n_taps,
            estimate_offset=cfg.dsp.estimate_offset,
            discard_snr_db=cfg.dsp.discard_snr_db,
        )
        n_pe = min(ctx.security.pe_symbols, block.rx_quantum.size)
        est = estimate_channel(block.tx_quantum[:n_pe], block.rx_quantum[:n_pe], cal, ctx.security)
        constellation = ctx.constellation if cfg.security.bound == "discrete" else None
        report = compute_skr(est, ctx.security, constellation)
        return BlockRow(block_id, est, report, T_block, block.pilot_snr_db), ngmi_row
    except UnrecoverableBlockError as e:
        logger.warning("[scenario] block %d discarded: %s", block_id, e)
        return BlockRow(block_id, None, SkrReport.discarded_report(str(e)), T_block, e.snr_db), ngmi_row
    except FsoQkdError as e:
        logger.warning("[scenario] block %d failed: %s", block_id, e)
        return BlockRow(block_id, None, SkrReport.discarded_report(str(e)), T_block), ngmi_row


@dataclass
class RunResult:
    rows: list[BlockRow]
    ngmi_rows: list[NgmiRow]
    summary: dict[str, Any]
    paths: dict[str, Path] = field(default_factory=dict)


def run(config: ScenarioConfig, out_dir: str | Path | None = None, progress: bool = False) -> RunResult:
    """Run every block, write the per-block CSV (and NGMI CSV) plus the summary JSON.

    Output is independent of `workers`: rows are sorted by block_id before writing.
    """
    ctx = RunContext.from_config(config)
    n = config.block_count
    logger.info("[scenario] %d blocks of %d symbols, preset %s", n, config.frame_symbols, config.preset)

    show = progress and sys.stderr.isatty()
    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        results = list(tqdm(pool.map(lambda b: run_block(ctx, b), range(n)), total=n, disable=not show, desc="blocks"))

    rows = sorted((r for r, _ in results), key=lambda r: r.block_id)
    ngmi_rows = sorted((g for _, g in results if g is not None), key=lambda g: g.block_id)
    fec = config.classical.fec_rate if config.classical is not None else 0.8
    summary = summarize(rows, ngmi_rows, ctx.security.duty_chain, config.symbol_rate, fec)
    summary["preset"] = config.preset
    summary["master_seed"] = config.master_seed

    result = RunResult(rows=rows, ngmi_rows=ngmi_rows, summary=summary)
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        result.paths["skr_csv"] = write_skr_csv(rows, out / config.output.skr_csv)
        if config.classical is not None:
            result.paths["ngmi_csv"] = write_ngmi_csv(ngmi_rows, out / config.output.ngmi_csv)
        result.paths["summary_json"] = write_summary(summary, out / config.output.summary_json)
        logger.info("[scenario] wrote %s", ", ".join(str(p) for p in result.paths.values()))
    return result
