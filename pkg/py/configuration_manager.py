#!/usr/bin/env python
#
# Licensed under the BSD license.  See full license in LICENSE file.
#

"""Configuration management for EntangleOps.

Configuration files are all located in the <homedir>/config directory.
defaults.cfg is always read first; overrides.cfg (or the file given with
--config) is layered on top of it.  Every value has a fallback so the
library still works from a bare checkout.

Third party dependencies:

python-dotenv: picks up ENTANGLEOPS_HOME from a .env file
    https://pypi.org/project/python-dotenv/
"""

import argparse
import configparser
import logging
import os
import os.path
from typing import Optional

from dotenv import load_dotenv

log = logging.getLogger(__name__)

load_dotenv()

# The home directory and configuration directory for the application.
HOME_DIR = os.getenv("ENTANGLEOPS_HOME") or os.path.dirname(
    os.path.dirname(os.path.abspath(__file__)))
CONFIG_DIR = os.path.join(HOME_DIR, 'config')

LOG_LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL')


def _as_list(list_str, delimiter=','):
    """Return a list of items from a delimited string (after stripping whitespace).

    :param list_str: string to turn into a list
    :type list_str: str

    :param delimiter: split the string on this
    :type delimiter: str

    :return: string converted to a list
    :rtype: list
    """
    return [item.strip() for item in list_str.split(delimiter) if item.strip()]


class Configuration(object):
    """Configuration management for EntangleOps.

    Exposes one Section per config section: tolerances, sampling,
    criteria, report and logging.
    """

    def __init__(self, param_config=None):
        self.home_dir = HOME_DIR
        self.config_dir = CONFIG_DIR
        self.param_config = param_config

        self.config = configparser.RawConfigParser(allow_no_value=True)
        self.loaded_files = []
        self.load_config()

        self.tolerances = None
        self.sampling = None
        self.criteria = None
        self.report = None
        self.logging = None

        self.set_tolerances()
        self.set_sampling()
        self.set_criteria()
        self.set_report()
        self.set_logging()

    def load_config(self):
        """Load config files into ConfigParser instance"""
        files = [os.path.join(self.config_dir, 'defaults.cfg')]

        if self.param_config:
            # absolute paths come from tests and --config
            if os.path.isabs(self.param_config):
                files.append(self.param_config)
            else:
                files.append(os.path.join(self.config_dir, self.param_config))
        else:
            files.append(os.path.join(self.config_dir, 'overrides.cfg'))

        self.loaded_files = self.config.read(files)
        log.debug("Configuration files loaded: %s", self.loaded_files)

        if self.param_config and files[-1] not in self.loaded_files:
            log.warning("Config override not found: %s", files[-1])

    def set_tolerances(self):
        """
        Retrieves the numerical tolerances; one record for every identity check.
        """
        tl = 'tolerances'
        tols = dict()
        tols["eq_tol"] = self.config.getfloat(tl, 'eq_tol', fallback=1e-10)
        tols["herm_tol"] = self.config.getfloat(tl, 'herm_tol', fallback=1e-10)
        tols["eig_tol"] = self.config.getfloat(tl, 'eig_tol', fallback=1e-13)
        tols["max_sweeps"] = self.config.getint(tl, 'max_sweeps', fallback=100)
        tols["norm_tol"] = self.config.getfloat(tl, 'norm_tol', fallback=1e-10)
        tols["psd_tol"] = self.config.getfloat(tl, 'psd_tol', fallback=1e-8)
        tols["imag_tol"] = self.config.getfloat(tl, 'imag_tol', fallback=1e-9)
        tols["ppt_tol"] = self.config.getfloat(tl, 'ppt_tol', fallback=1e-10)
        tols["verdict_margin"] = self.config.getfloat(tl, 'verdict_margin', fallback=1e-10)

        for key, value in tols.items():
            if value <= 0:
                raise ValueError("tolerance %s must be positive, got %r" % (key, value))

        self.tolerances = Section(tols)

    def set_sampling(self):
        """
        Retrieves the random sampling configuration.
        """
        smpl = dict()
        smpl["default_seed"] = self.config.getint('sampling', 'default_seed', fallback=20240607)
        smpl["probes"] = self.config.getint('sampling', 'probes', fallback=10)
        self.sampling = Section(smpl)

    def set_criteria(self):
        """
        Retrieves the entanglement criteria configuration.
        """
        crit = dict()
        b_side = self.config.get('criteria', 'b_side', fallback='conjugate').strip().lower()
        if b_side not in ('same', 'conjugate'):
            log.error("b_side must be 'same' or 'conjugate', got %r; using conjugate", b_side)
            b_side = 'conjugate'
        crit["b_side"] = b_side
        crit["collective_materialize_limit"] = \
            self.config.getint('criteria', 'collective_materialize_limit', fallback=12)
        crit["default_basis"] = self.config.get('criteria', 'default_basis', fallback='gellmann')
        self.criteria = Section(crit)

    def set_report(self):
        """
        Retrieves the report output configuration.
        """
        rprt = dict()
        rprt["format"] = self.config.get('report', 'format', fallback='json').lower()
        rprt["indent"] = self.config.getint('report', 'indent', fallback=2)
        rprt["schmidt_orders"] = list(map(
            int, _as_list(self.config.get('report', 'schmidt_orders', fallback='2,3,4,5'))))
        self.report = Section(rprt)

    def set_logging(self):
        lggng = dict()
        level = self.config.get('logging', 'log_level', fallback='WARNING').upper()
        lggng["log_level"] = level if level in LOG_LEVELS else 'WARNING'
        self.logging = Section(lggng)


class Section(object):
    """One parsed config section; every key is also an attribute."""

    def __init__(self, values):
        self.config = dict(values)
        for key, value in self.config.items():
            setattr(self, key, value)

    def __repr__(self):
        return "Section(%s)" % (self.config,)


_active: Optional[Configuration] = None


def get_configuration(param_config: Optional[str] = None) -> Configuration:
    """Return the active configuration, loading it on first use.

    Passing param_config always reloads with that override file.
    """
    global _active
    if _active is None or param_config is not None:
        _active = Configuration(param_config=param_config)
    return _active


def reset_configuration():
    """Forget the cached configuration (next access reloads from disk)."""
    global _active
    _active = None


def tolerances() -> Section:
    return get_configuration().tolerances


if __name__ == "__main__":
    # prints the current configuration

    parser = argparse.ArgumentParser()
    parser.add_argument('--config', default=None, help='Config File Override')
    args = parser.parse_args()

    cm = Configuration(param_config=args.config)

    print("Configuration files:", ", ".join(cm.loaded_files) or "(none, built-in defaults)")
    print("Home directory set:", HOME_DIR)
    print("Config directory set:", CONFIG_DIR)

    for name in ('tolerances', 'sampling', 'criteria', 'report', 'logging'):
        print("\n%s Configuration" % name.capitalize())
        for key, value in getattr(cm, name).config.items():
            print(key, "=", value)
