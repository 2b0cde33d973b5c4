# coding=utf-8
"""Configuration of experiment defaults and bound constants.

Settings come from YAML files found in the XDG configuration directories
(``legproj/config.yaml``), from the file named by ``LEGPROJ_CONFIG_FILE``, and
from ``LEGPROJ_`` prefixed environment variables. Later sources shadow earlier
ones. Nothing is required: :data:`legproj.constants.EXPERIMENT_DEFAULTS`
covers every experiment setting.
"""
import logging
import os
import warnings

from dynaconf import Dynaconf
from xdg import BaseDirectory

from legproj import exceptions


logger = logging.getLogger(__name__)

CONFIG_FILE_ENVVAR = "LEGPROJ_CONFIG_FILE"


def get_settings_files(xdg_config_dir, xdg_config_file):
    """Return the configuration files to load, lowest priority first.

    Files found in ``XDG_CONFIG_DIRS`` come first, the user file in
    ``XDG_CONFIG_HOME`` after them. A file named by ``LEGPROJ_CONFIG_FILE`` is
    appended last, so it wins over both.

    :param xdg_config_dir: Directory name below each XDG configuration path.
    :param xdg_config_file: File name inside that directory.
    """
    found = list(BaseDirectory.load_config_paths(xdg_config_dir, xdg_config_file))
    found.reverse()
    explicit = os.environ.get(CONFIG_FILE_ENVVAR)
    if explicit:
        if os.path.isfile(explicit):
            found.append(explicit)
        else:
            warnings.warn(
                "{}={} does not name a file.".format(CONFIG_FILE_ENVVAR, explicit),
                exceptions.ConfigFileNotFoundError,
            )
    if not found:
        candidates = [
            os.path.join(directory, xdg_config_dir, xdg_config_file)
            for directory in BaseDirectory.xdg_config_dirs
        ]
        warnings.warn(
            "No legproj configuration file in {}. Using built-in defaults.".format(
                ", ".join(candidates)
            ),
            exceptions.ConfigFileNotFoundError,
        )
    logger.debug("Configuration files: %s", found)
    return found


def _load():
    return Dynaconf(
        envvar_prefix="LEGPROJ",
        settings_files=get_settings_files("legproj", "config.yaml"),
    )


_CONFIG = _load()


def get_config():
    """Return the global config object."""
    return _CONFIG


def reload_config():
    """Search the configuration files again and replace the global config object."""
    global _CONFIG
    _CONFIG = _load()
    return _CONFIG
