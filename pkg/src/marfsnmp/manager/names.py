"""Round trip between OID text forms.

Raw dotted notation always works, with or without a loaded MIB set;
when a registry is supplied, object names resolve too, qualified or
bare, with an optional trailing instance suffix ("serviceName.1").
"""

from __future__ import annotations

import re
from functools import lru_cache

from marfsnmp.oid import Oid
from marfsnmp.smi import LENIENT, AmbiguousName, UnknownName, default_mib_dir, load_registry

_DOTTED = re.compile(r"\d+(\.\d+)*")


class Namer:
    """Name/OID translation against one linked registry."""

    def __init__(self, registry):
        self.registry = registry
        # lenient view: the bundled set needs the chained-AUGMENTS waiver
        import warnings

        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            self.tables = tuple(registry.tables(LENIENT))
        self._column_by_oid = {
            col.oid: col for table in self.tables for col in table.effective_columns
        }
        self._table_by_name = {t.table_name: t for t in self.tables}

    def to_oid(self, text: str) -> Oid:
        """Parse dotted digits, or a MIB name with optional instance suffix."""
        text = text.strip()
        if _DOTTED.fullmatch(text):
            return Oid.parse(text)
        parts = text.split(".")
        split = len(parts)
        while split > 0 and parts[split - 1].isdigit():
            split -= 1
        if split == 0:
            raise UnknownName(f"unresolvable OID text {text!r}")
        base = self.registry.oid_of(".".join(parts[:split]))
        return base.extend(*(int(p) for p in parts[split:]))

    def to_name(self, oid: Oid) -> str:
        """Best-effort display name; falls back to dotted text."""
        try:
            return self.registry.name_of(oid)
        except (UnknownName, AmbiguousName):
            return str(oid)

    def column_for(self, oid: Oid):
        """The ColumnDef whose subtree contains this instance OID, if any."""
        probe = tuple(oid)
        while probe:
            col = self._column_by_oid.get(Oid(probe))
            if col is not None:
                return col
            probe = probe[:-1]
        return None

    def table_named(self, name: str):
        try:
            return self._table_by_name[name]
        except KeyError:
            raise UnknownName(f"no table named {name!r}") from None


@lru_cache(maxsize=4)
def _cached_namer(path):
    return Namer(load_registry(path))


def default_namer(mib_dir=None) -> Namer:
    """Namer over the bundled MIB set, an env override, or a given directory.

    The directory is resolved before caching, so changing the override
    between calls is honored.
    """
    return _cached_namer(mib_dir or default_mib_dir())
