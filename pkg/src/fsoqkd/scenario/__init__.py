from fsoqkd.scenario.config import ScenarioConfig, load_config
from fsoqkd.scenario.runner import RunResult, block_intensities, block_seeds, run, run_block
from fsoqkd.scenario.summary import box_stats, compare_summaries, read_summary, summarize, write_summary

__all__ = [
    "RunResult",
    "ScenarioConfig",
    "block_intensities",
    "block_seeds",
    "box_stats",
    "compare_summaries",
    "load_config",
    "read_summary",
    "run",
    "run_block",
    "summarize",
    "write_summary",
]
