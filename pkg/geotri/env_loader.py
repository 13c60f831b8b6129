"""
Environment variable loader.
Searches for .env in two locations:
1. The current working directory (per-project overrides)
2. The package directory (shipped defaults)
"""
import logging
from pathlib import Path

logger = logging.getLogger(__name__)


def get_env_path() -> Path | None:
    """
    Get .env file path with priority:
    1. ./.env in the working directory
    2. geotri/.env next to this file

    Returns: Path to the .env file, or None when neither exists
    """
    local_env = Path.cwd() / '.env'
    if local_env.exists():
        logger.debug("[ENV] Using working-directory .env: %s", local_env)
        return local_env

    package_env = Path(__file__).parent / '.env'
    if package_env.exists():
        logger.debug("[ENV] Using package .env: %s", package_env)
        return package_env

    return None


def load_env() -> bool:
    """
    Load environment variables from the .env file, if any.
    Existing process variables win over file values.
    """
    from dotenv import load_dotenv

    env_path = get_env_path()
    if env_path is None:
        return False
    try:
        return load_dotenv(dotenv_path=env_path, override=False)
    except OSError as e:
        logger.warning("[ENV] Failed to load %s: %s", env_path, e)
        return False
