"""
Date: 2024-05-06 10:12:40
LastEditTime: 2024-06-18 17:31:02
Description: Top-level package for grouptest
FilePath: /grouptest/grouptest/__init__.py
"""

import logging
import os
from pathlib import Path

import yaml

__version__ = "0.1.0"

logger = logging.getLogger(__name__)

SETTING_FILE = os.path.join(Path.home(), "grouptest_setting.yml")
FALLBACK_SEED = 20220101


class GroupTestingError(Exception):
    """Base class of every error raised by grouptest"""


class InvalidParameterError(GroupTestingError, ValueError):
    pass


class DimensionMismatchError(GroupTestingError, ValueError):
    pass


class EnumerationTooLargeError(GroupTestingError, RuntimeError):
    """Raised when an exhaustive enumeration would exceed its cap

    Parameters
    ----------
    size
        the number of configurations the enumeration would visit
    limit
        the largest enumeration we accept
    """

    def __init__(self, size, limit):
        self.size = size
        self.limit = limit
        super().__init__(
            f"Enumeration of {size} configurations exceeds the limit of {limit}, "
            "please choose a smaller instance!"
        )


def read_setting(setting_path):
    """Read the optional user setting file

    Only two keys are recognized: ``default_seed`` and ``workers``.
    A missing file gives an empty setting.
    """
    if not os.path.exists(setting_path):
        return {}
    with open(setting_path, "r") as file:
        setting = yaml.safe_load(file)
    if setting is None:
        return {}
    if not isinstance(setting, dict):
        raise ValueError(
            f"Setting file {setting_path} has invalid format.\n\nExample setting:\n"
            "default_seed: 20220101\nworkers: 4"
        )
    unknown = set(setting) - {"default_seed", "workers"}
    if unknown:
        logger.warning("Ignoring unknown keys in %s: %s", setting_path, sorted(unknown))
    return {k: v for k, v in setting.items() if k in ("default_seed", "workers")}


def default_seed():
    """Master seed used when none is given: GT_SEED, then the setting file"""
    env_seed = os.environ.get("GT_SEED")
    if env_seed is not None and env_seed.strip() != "":
        try:
            return int(env_seed)
        except ValueError as e:
            raise InvalidParameterError(
                f"GT_SEED must be an integer, got {env_seed!r}"
            ) from e
    return int(SETTING.get("default_seed", FALLBACK_SEED))


try:
    SETTING = read_setting(SETTING_FILE)
except (ValueError, yaml.YAMLError) as e:
    logger.warning("%s", e)
    SETTING = {}
