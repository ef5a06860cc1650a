import json
import logging

import yaml

from setreach.exceptions import ProblemSpecError

logger = logging.getLogger(__name__)


def read_config(filepath):
    """
    Read a YAML file and return the parsed mapping (an empty dict for an empty file).

    Raises:
        ProblemSpecError: If the file is missing, unreadable or not valid YAML.
    """
    try:
        with open(filepath) as f:
            config = yaml.safe_load(f)
    except FileNotFoundError as e:
        logger.error(f"Configuration file {filepath} not found: {e}")
        raise ProblemSpecError(f"configuration file not found: {filepath}") from e
    except yaml.YAMLError as e:
        logger.error(
            f"Error parsing YAML in configuration file {filepath}: {e}", exc_info=True
        )
        raise ProblemSpecError(f"invalid YAML in {filepath}: {e}") from e
    if config is None:
        return {}
    if not isinstance(config, dict):
        raise ProblemSpecError(f"{filepath} must contain a mapping at top level")
    return config


def read_doc(path):
    """
    Read a JSON document.

    Raises:
        ProblemSpecError: If the file cannot be read or parsed.
    """
    try:
        with open(path) as f:
            return json.load(f)
    except OSError as e:
        logger.error(f"Error reading JSON file {path}: {e}")
        raise ProblemSpecError(f"cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        logger.error(f"Error parsing JSON file {path}: {e}")
        raise ProblemSpecError(f"malformed JSON in {path}: {e}") from e


def write_doc(path, document, indent=2):
    with open(path, "w") as outfile:
        json.dump(document, outfile, indent=indent)
        outfile.write("\n")
