"""Flatten walk output into table rows."""

from __future__ import annotations

from marfsnmp.ber import EndOfMibView, NoSuchInstance, NoSuchObject


def render_table(varbinds, table) -> dict:
    """Group instance varbinds into rows keyed by index.

    Cells the agent never returned stay absent. Index columns are
    filled in from the instance suffix itself, which is how a row in
    an augmenting table shows its inherited index without the agent
    serving the base columns under this subtree.
    """
    columns = [(tuple(col.oid), col) for col in table.effective_columns]
    raw_rows: dict = {}
    for vb in varbinds:
        if isinstance(vb.value, (NoSuchObject, NoSuchInstance, EndOfMibView)):
            continue
        arcs = tuple(vb.oid)
        for col_arcs, col in columns:
            if arcs[: len(col_arcs)] == col_arcs and len(arcs) > len(col_arcs):
                suffix = arcs[len(col_arcs) :]
                key = suffix[0] if len(suffix) == 1 else suffix
                raw_rows.setdefault(key, {})[col.name] = getattr(vb.value, "value", None)
                break
    rows = {}
    for key in sorted(raw_rows):
        cells = raw_rows[key]
        suffix = (key,) if isinstance(key, int) else key
        for pos, icol in enumerate(table.index_columns):
            if icol.name not in cells and pos < len(suffix):
                cells[icol.name] = suffix[pos]
        # present cells in declared column order
        ordered = {c.name: cells[c.name] for _, c in columns if c.name in cells}
        rows[key] = ordered
    return rows
