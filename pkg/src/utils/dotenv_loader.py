import logging
import os
from collections.abc import Iterator
from pathlib import Path

from dotenv import dotenv_values, find_dotenv, load_dotenv

logger = logging.getLogger(__name__)


def _candidate_dirs(start: Path) -> Iterator[Path]:
    p = start.parent if start.is_file() else start
    yield p
    yield from p.parents


def load_nearest_dotenv(start_path: str | Path | None = None, override: bool = False) -> Path | None:
    """Search for a .env file starting at start_path (or the cwd) and walk up to the filesystem root.

    If found, load it with python-dotenv and return its path, else None.
    Existing environment variables win unless override=True.
    """
    start = Path(start_path) if start_path else Path.cwd()
    for directory in _candidate_dirs(start.resolve()):
        env_path = directory / ".env"
        if env_path.exists():
            load_dotenv(dotenv_path=env_path, override=override)
            return env_path

    # Fallback to find_dotenv (looks from CWD upward)
    found = find_dotenv(usecwd=True)
    if found:
        load_dotenv(dotenv_path=found, override=override)
        return Path(found)

    return None


def prefixed_env(prefix: str, env_path: Path | None = None) -> dict[str, str]:
    """Return variables starting with `prefix`, from the process environment or a specific .env file."""
    source = dotenv_values(env_path) if env_path else os.environ
    found = {k: v for k, v in source.items() if k.startswith(prefix) and v is not None}
    if found:
        logger.debug("[env] %d variables with prefix %s", len(found), prefix)
    return found
