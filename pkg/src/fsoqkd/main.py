import argparse
import json
import logging
import math
import sys
from dataclasses import asdict

from utils.dotenv_loader import load_nearest_dotenv, prefixed_env

from fsoqkd import __version__
from fsoqkd.coex.ngmi import DEFAULT_FEC_RATE, simulate_ngmi, supports_fec_rate
from fsoqkd.errors import ConfigError, FsoQkdError
from fsoqkd.logs import configure_logging
from fsoqkd.scenario.config import load_config
from fsoqkd.scenario.runner import run
from fsoqkd.scenario.summary import compare_summaries, read_summary
from fsoqkd.security.keyrate import compute_skr
from fsoqkd.security.params import ChannelEstimate, SecurityParams
from fsoqkd.turbulence.fitting import fit_params
from fsoqkd.turbulence.params import TurbulenceParams, preset
from fsoqkd.turbulence.stats import scintillation_index
from fsoqkd.turbulence.trace_io import read_trace

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


def _print_json(data) -> None:
    def clean(v):
        if isinstance(v, float) and not math.isfinite(v):
            return None
        if isinstance(v, dict):
            return {k: clean(x) for k, x in v.items()}
        return v

    print(json.dumps(clean(data), indent=2, sort_keys=True))


def _cmd_run(args) -> int:
    overrides = {"preset": args.preset, "n_blocks": args.blocks, "master_seed": args.seed, "workers": args.workers}
    config = load_config(args.config, overrides)
    out = args.out if args.out is not None else config.output.dir
    result = run(config, out_dir=out, progress=args.verbose > 0)
    s = result.summary
    logger.info(
        "[scenario] done: median T %s, median SKR %s, %d/%d blocks discarded",
        s.get("median_T"),
        s.get("median_skr_symbol"),
        s["n_discarded"],
        s["n_blocks"],
    )
    print(result.paths["summary_json"])
    return EXIT_OK


def _cmd_fit(args) -> int:
    trace = read_trace(args.trace)
    init = preset(args.init_preset) if args.init_preset else TurbulenceParams(sigma2_ln=0.01, gamma=3.0)
    fit = fit_params(trace, init, max_iter=args.max_iter)
    _print_json(
        {
            "params": fit.params.model_dump(),
            "nll": fit.nll,
            "converged": fit.converged,
            "likelihood": fit.likelihood,
            "scintillation_index": scintillation_index(trace),
            "n_samples": len(trace),
        }
    )
    return EXIT_OK


def _cmd_skr(args) -> int:
    params = SecurityParams(
        va=args.va,
        eta=args.eta,
        v_el=args.vel,
        beta=args.beta,
        n_block=args.N,
        pe_fraction=args.pe_fraction,
        pe_duty=args.pe_duty,
        fer=args.fer,
        eps_pe=args.eps,
        eps_smooth=args.eps,
        worst_case=False,
    )
    report = compute_skr(ChannelEstimate.from_point(args.T, args.xi), params)
    _print_json(asdict(report))
    return EXIT_OK


def _cmd_ngmi(args) -> int:
    value = simulate_ngmi(args.snr_db, args.order, args.symbols, args.seed)
    supported = supports_fec_rate(value, args.fec_rate)
    _print_json({"snr_db": args.snr_db, "order": args.order, "ngmi": value, "supports_fec": supported})
    return EXIT_OK


def _cmd_compare(args) -> int:
    _print_json(compare_summaries(read_summary(args.base), read_summary(args.other)))
    return EXIT_OK


def _create_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fsoqkd", description="CV-QKD over turbulent free-space links")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="Verbosity: -v warnings, -vv info, -vvv debug. Errors are always shown.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="Run a scenario and write per-block CSV and a summary JSON")
    p.add_argument("--config", help="TOML scenario file")
    p.add_argument("--out", help="Output directory (default from config)")
    p.add_argument("--preset", help="Turbulence preset A..E or 'off'")
    p.add_argument("--blocks", help="Number of blocks, or 'paper' for the per-setting capture count")
    p.add_argument("--seed", type=int, help="Master seed")
    p.add_argument("--workers", type=int, help="Worker threads")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("fit", help="Fit the combined turbulence model to an intensity trace")
    p.add_argument("--trace", required=True, help="Trace file (text or binary)")
    p.add_argument("--init-preset", help="Start from a preset instead of the generic initial guess")
    p.add_argument("--max-iter", type=int, default=2000)
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("skr", help="One-shot key rate at a channel point")
    p.add_argument("--va", type=float, default=8.0)
    p.add_argument("--T", type=float, default=0.444)
    p.add_argument("--xi", type=float, default=0.0048)
    p.add_argument("--eta", type=float, default=0.35)
    p.add_argument("--vel", type=float, default=0.1)
    p.add_argument("--beta", type=float, default=0.95)
    p.add_argument("--N", type=int, default=1_000_000)
    p.add_argument("--fer", type=float, default=0.1)
    p.add_argument("--pe-fraction", type=float, default=0.5)
    p.add_argument("--pe-duty", type=float, default=0.5, help="Parameter-estimation duty factor for bits/s")
    p.add_argument("--eps", type=float, default=1e-10)
    p.set_defaults(func=_cmd_skr)

    p = sub.add_parser("ngmi", help="One-shot NGMI of Gray QAM over AWGN")
    p.add_argument("--snr-db", type=float, required=True)
    p.add_argument("--order", type=int, default=64)
    p.add_argument("--symbols", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fec-rate", type=float, default=DEFAULT_FEC_RATE)
    p.set_defaults(func=_cmd_ngmi)

    p = sub.add_parser("compare", help="Percent change of median T and SKR between two summaries")
    p.add_argument("--base", required=True)
    p.add_argument("--other", required=True)
    p.set_defaults(func=_cmd_compare)
    return parser


def _blocks(value):
    if value is None or value == "paper":
        return value
    try:
        return int(value)
    except ValueError as e:
        raise ConfigError(f"--blocks must be an integer or 'paper', got {value!r}") from e


def main(argv: list[str] | None = None) -> int:
    parser = _create_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose)

    loaded = load_nearest_dotenv(override=False)
    if loaded:
        logger.info("[env] loaded .env from %s", loaded)
    env = prefixed_env("FSOQKD_")
    if env:
        logger.info("[env] scenario settings from environment: %s", ", ".join(sorted(env)))

    try:
        if args.command == "run":
            args.blocks = _blocks(args.blocks)
        return args.func(args)
    except ConfigError as e:
        logger.error("[config] %s", e)
        return EXIT_CONFIG
    except (FsoQkdError, OSError) as e:
        logger.error("[%s] %s", args.command, e)
        return EXIT_RUNTIME
    except ValueError as e:
        # pydantic validation of one-shot parameters
        logger.error("[%s] invalid argument: %s", args.command, e)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
