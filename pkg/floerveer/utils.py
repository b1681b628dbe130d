""" Various utility functions """
import logging
import os

from floerveer import errors

LOG_ENV_VAR = "FLOERVEER_LOG"
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def validate_path(path: str):
    """ Check that a path points to an existing file.

    Args:
        path (str): File path.
    Raises:
        errors.IoError: Path does not exist or is not a file.
    Returns:
        True (bool): Path is valid. """

    if os.path.isfile(path):
        return True
    raise errors.IoError(f"No such file: {path}")


def read_text(path: str):
    """ Read a UTF-8 text file after validating its path. """

    validate_path(path)
    abspath = os.path.abspath(path)
    with open(abspath, "r", encoding="utf-8") as file:
        return file.read()


def get_log_level():
    """ Get the log level name from FLOERVEER_LOG, WARNING when unset. """

    level = os.getenv(LOG_ENV_VAR, "WARNING").strip().upper()

    if isinstance(logging.getLevelName(level), int):
        return level

    raise errors.ConfigError(
        f"Unknown log level {level!r}. Please set {LOG_ENV_VAR} to DEBUG, INFO, WARNING or ERROR")


def setup_logging(level: str = None):
    """ Configure the root logger once.

    Args:
        level (str, optional): Level name.
            Defaults to the FLOERVEER_LOG setting. """

    logging.basicConfig(level=level or get_log_level(), format=LOG_FORMAT)


def parse_int_list(text: str):
    """ Turn "1,-2,3" into [1, -2, 3].

    Raises:
        errors.ConfigError: An entry is not an integer. """

    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise errors.ConfigError(f"Expected comma-separated integers, got {text!r}") from exc


def permutation_parity(images):
    """ Parity (0 even, 1 odd) of a permutation given as the list of images of 0..n-1. """

    seen = [False] * len(images)
    cycles = 0
    for start in range(len(images)):
        if seen[start]:
            continue
        cycles += 1
        i = start
        while not seen[i]:
            seen[i] = True
            i = images[i]
    return (len(images) - cycles) % 2


def invert_permutation(images):
    """ Inverse of a permutation given as a list of images. """

    inverse = [0] * len(images)
    for i, j in enumerate(images):
        inverse[j] = i
    return inverse
