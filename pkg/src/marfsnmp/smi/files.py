"""Loading MIB modules from a directory, including the bundled set."""

import os
from importlib import resources

from marfsnmp.smi.parser import parse_mib
from marfsnmp.smi.registry import link_modules

MIB_DIR_ENV = "MARFMAN_MIB_DIR"


def bundled_mib_dir():
    return str(resources.files("marfsnmp") / "mibs")


def default_mib_dir():
    return os.environ.get(MIB_DIR_ENV) or bundled_mib_dir()


def load_mib_directory(path):
    """Parse every .mib file under path, sorted by file name."""
    modules = []
    for name in sorted(os.listdir(path)):
        if not name.endswith(".mib"):
            continue
        with open(os.path.join(path, name), "r", encoding="ascii") as handle:
            modules.append(parse_mib(handle.read()))
    return modules


def load_registry(path=None):
    """Parse and link a MIB directory (the bundled set by default)."""
    return link_modules(load_mib_directory(path or default_mib_dir()))
