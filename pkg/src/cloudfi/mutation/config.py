"""Scan configuration in INI form.

::

    [subsystems]
    compute = compute/

    [keywords]
    compute = instance image host

    [exceptions]
    types = NotFound Conflict
    module = errors
"""

import configparser
from importlib import resources

from .types import ScanConfig


def parse_scan_config(parser):
    cfg = ScanConfig()
    if parser.has_section("subsystems"):
        cfg.subsystems = {k: v.strip() for k, v in parser.items("subsystems")}
    if parser.has_section("keywords"):
        cfg.keywords = {k: v.split() for k, v in parser.items("keywords")}
    if parser.has_section("exceptions"):
        cfg.exceptions = parser.get("exceptions", "types", fallback="").split()
        cfg.exceptions_module = parser.get("exceptions", "module", fallback="errors").strip()
    missing = set(cfg.keywords) - set(cfg.subsystems)
    if missing:
        raise ValueError(f"keywords given for unmapped subsystems: {sorted(missing)}")
    return cfg


def load_scan_config(path=None):
    parser = configparser.ConfigParser()
    if path is None:
        parser.read_string(resources.files("cloudfi.data").joinpath("scan.ini").read_text())
    else:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    return parse_scan_config(parser)


def default_scan_config():
    return load_scan_config(None)
