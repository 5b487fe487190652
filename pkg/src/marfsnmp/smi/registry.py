"""Linking parsed modules into an OID registry and resolving AUGMENTS chains."""

import warnings
from dataclasses import dataclass, replace

from marfsnmp.oid import Oid
from marfsnmp.smi import model
from marfsnmp.smi.errors import (
    AmbiguousName,
    AugmentsCycle,
    AugmentsNonEntry,
    ChainedAugments,
    CycleDetected,
    DanglingAugments,
    DuplicateOid,
    SmiError,
    SmiWarning,
    UnknownName,
    UnresolvedImport,
)

LENIENT = "lenient"
STRICT = "strict"

# Well-known anchors; values are raw sub-id tuples because several are
# shorter than a valid standalone OID.
_BUILTIN_OIDS = {
    "iso": (1,),
    "org": (1, 3),
    "dod": (1, 3, 6),
    "internet": (1, 3, 6, 1),
    "mgmt": (1, 3, 6, 1, 2),
    "mib-2": (1, 3, 6, 1, 2, 1),
    "experimental": (1, 3, 6, 1, 3),
    "private": (1, 3, 6, 1, 4),
    "enterprises": (1, 3, 6, 1, 4, 1),
}

# Symbols importable without providing the source module as text.
_BUILTIN_EXPORTS = {
    "SNMPv2-SMI": frozenset(
        ["MODULE-IDENTITY", "OBJECT-TYPE", "NOTIFICATION-TYPE", "Integer32",
         "Counter32", "TimeTicks"]
    ) | frozenset(_BUILTIN_OIDS),
    "SNMPv2-TC": frozenset(["TEXTUAL-CONVENTION", "DisplayString"]),
}


@dataclass(frozen=True, slots=True)
class _Registered:
    module: str
    name: str
    oid: tuple
    kind: str  # object-type | assignment | module-identity | notification


class MibRegistry:
    """Frozen name/OID registry produced by link_modules."""

    def __init__(self, modules, entries, object_types, notifications):
        self.modules = modules                # name -> MibModule
        self._by_oid = {}                     # sub-id tuple -> _Registered
        self._by_name = {}                    # bare name -> [_Registered]
        self._object_types = object_types     # (module, name) -> resolved ObjectTypeDef
        self._notifications = notifications   # (module, name) -> resolved NotificationDef
        for reg in entries:
            clash = self._by_oid.get(reg.oid)
            if clash is not None:
                raise DuplicateOid(reg.oid, f"{clash.module}.{clash.name}", f"{reg.module}.{reg.name}")
            self._by_oid[reg.oid] = reg
            self._by_name.setdefault(reg.name, []).append(reg)
        self._sorted_oids = sorted(self._by_oid)

    # -- lookups ------------------------------------------------------

    def _find(self, name):
        if "." in name:
            module, _, bare = name.partition(".")
            for reg in self._by_name.get(bare, ()):
                if reg.module == module:
                    return reg
            raise UnknownName(name)
        hits = self._by_name.get(name, ())
        if not hits:
            raise UnknownName(name)
        if len(hits) > 1:
            raise AmbiguousName(name, [f"{r.module}.{r.name}" for r in hits])
        return hits[0]

    def oid_of(self, name):
        reg = self._find(name)
        if len(reg.oid) < 2:
            raise UnknownName(name, "resolves above the OID root")
        return Oid(reg.oid)

    def qualified_name(self, reg):
        if len(self._by_name[reg.name]) > 1:
            return f"{reg.module}.{reg.name}"
        return reg.name

    def name_of(self, oid):
        """Exact name, or longest registered ancestor plus dotted residue."""
        oid = tuple(oid)
        for cut in range(len(oid), 0, -1):
            reg = self._by_oid.get(oid[:cut])
            if reg is not None:
                name = self.qualified_name(reg)
                residue = oid[cut:]
                if residue:
                    return name + "." + ".".join(str(s) for s in residue)
                return name
        return ".".join(str(s) for s in oid)

    def resolve(self, text):
        """Name, Module.name, either with a dotted numeric residue, or a raw OID."""
        parts = text.split(".")
        if all(p.isdigit() for p in parts):
            return Oid.parse(text)
        split = len(parts)
        while split > 0 and parts[split - 1].isdigit():
            split -= 1
        name = ".".join(parts[:split])
        residue = tuple(int(p) for p in parts[split:])
        return self.oid_of(name).extend(*residue)

    def object_type(self, name):
        reg = self._find(name)
        obj = self._object_types.get((reg.module, reg.name))
        if obj is None:
            raise UnknownName(name, "not an OBJECT-TYPE")
        return obj

    def object_types(self):
        out = []
        for oid in self._sorted_oids:
            reg = self._by_oid[oid]
            obj = self._object_types.get((reg.module, reg.name))
            if obj is not None:
                out.append(obj)
        return out

    def notification(self, name):
        reg = self._find(name)
        note = self._notifications.get((reg.module, reg.name))
        if note is None:
            raise UnknownName(name, "not a NOTIFICATION-TYPE")
        return note

    def all_names(self):
        return [self.qualified_name(self._by_oid[oid]) for oid in self._sorted_oids]

    # -- AUGMENTS resolution -------------------------------------------

    def tables(self, profile=LENIENT):
        return resolve_augments(self, profile)

    def _register_entry_oid(self, obj, oid):
        """Materialize the OID of an AUGMENTS-only entry object."""
        key = (obj.module, obj.name)
        clash = self._by_oid.get(oid)
        if clash is not None and (clash.module, clash.name) != key:
            raise DuplicateOid(oid, f"{clash.module}.{clash.name}", f"{obj.module}.{obj.name}")
        resolved = replace(obj, resolved_oid=Oid(oid))
        self._object_types[key] = resolved
        if clash is None:
            reg = _Registered(obj.module, obj.name, oid, "object-type")
            self._by_oid[oid] = reg
            self._by_name.setdefault(obj.name, []).append(reg)
            self._sorted_oids = sorted(self._by_oid)
        return resolved


def link_modules(modules):
    """Resolve every OID assignment across modules into a MibRegistry."""
    by_name = {}
    for mod in modules:
        if mod.name in by_name:
            raise SmiError(f"module {mod.name!r} given twice")
        by_name[mod.name] = mod

    # imports: (module, symbol) -> defining module name, after validation
    import_sources = {}
    for mod in modules:
        for symbol, source in mod.imports:
            if source in by_name:
                if not by_name[source].defines(symbol):
                    raise UnresolvedImport(symbol, mod.name)
            elif source in _BUILTIN_EXPORTS:
                if symbol not in _BUILTIN_EXPORTS[source]:
                    raise UnresolvedImport(symbol, mod.name)
            else:
                raise UnresolvedImport(symbol, mod.name)
            import_sources[(mod.name, symbol)] = source

    # Collect OID-bearing definitions: (module, name) -> (parent, sub_ids, kind)
    defs = {}

    def add_def(module, name, parent, sub_ids, kind):
        key = (module, name)
        if key in defs:
            raise SmiError(f"{name!r} defined twice in module {module!r}")
        defs[key] = (parent, sub_ids, kind)

    for mod in modules:
        if mod.module_identity is not None:
            mi = mod.module_identity
            add_def(mod.name, mi.name, mi.parent, mi.sub_ids, "module-identity")
        for name, parent, sub_ids in mod.assignments:
            add_def(mod.name, name, parent, sub_ids, "assignment")
        for obj in mod.object_types:
            if obj.parent:
                add_def(mod.name, obj.name, obj.parent, obj.sub_ids, "object-type")
            elif obj.augments:
                # AUGMENTS-only entry: its OID is not official until
                # resolve_augments, but its columns name it as parent, so an
                # internal placement under its table is derived here.
                table = _table_for_entry(mod, obj)
                if table is not None and table.parent:
                    add_def(mod.name, obj.name, table.name, (1,), "entry-pending")
        for note in mod.notifications:
            add_def(mod.name, note.name, note.parent, note.sub_ids, "notification")

    def parent_key(module, parent):
        """Where does `parent` referenced from `module` live?"""
        if (module, parent) in defs:
            return (module, parent)
        source = import_sources.get((module, parent))
        if source is not None and source in by_name:
            return (source, parent)
        if parent in _BUILTIN_OIDS:
            return None  # builtin anchor
        return ("", parent)  # unresolvable

    resolved = {}  # (module, name) -> sub-id tuple
    pending = dict(defs)
    while pending:
        progressed = False
        for key in list(pending):
            parent, sub_ids, _kind = pending[key]
            pkey = parent_key(key[0], parent)
            if pkey == ("", parent):
                raise UnresolvedImport(parent, key[0])
            base = _BUILTIN_OIDS[parent] if pkey is None else resolved.get(pkey)
            if base is None:
                continue
            resolved[key] = base + sub_ids
            del pending[key]
            progressed = True
        if not progressed:
            raise CycleDetected(sorted(name for _m, name in pending))

    # Normalize object-type syntaxes and attach resolved OIDs.
    object_types = {}
    notifications = {}
    entries = []
    for mod in modules:
        for obj in mod.object_types:
            syntax = _normalize_syntax(obj.syntax, mod, by_name, import_sources)
            key = (mod.name, obj.name)
            oid = resolved.get(key)
            if key in defs and defs[key][2] == "entry-pending":
                oid = None  # official placement happens in resolve_augments
            object_types[key] = replace(
                obj,
                syntax=syntax,
                module=mod.name,
                resolved_oid=Oid(oid) if oid is not None else None,
            )
        for note in mod.notifications:
            oid = resolved[(mod.name, note.name)]
            notifications[(mod.name, note.name)] = replace(
                note, module=mod.name, resolved_oid=Oid(oid)
            )

    for (module, name), oid in resolved.items():
        kind = defs[(module, name)][2]
        if kind == "entry-pending":
            continue
        entries.append(_Registered(module, name, oid, kind))

    return MibRegistry(by_name, entries, object_types, notifications)


def _table_for_entry(mod, entry_obj):
    """The table object in mod whose SEQUENCE OF matches the entry's type."""
    ref = entry_obj.syntax.ref
    if not ref:
        return None
    for obj in mod.object_types:
        if obj.syntax.kind == model.SEQUENCE_OF and obj.syntax.ref == ref:
            return obj
    return None


def _lookup_type(name, mod, by_name, import_sources):
    """Find a SEQUENCE or TEXTUAL-CONVENTION visible from mod."""
    scopes = [mod]
    source = import_sources.get((mod.name, name))
    if source is not None and source in by_name:
        scopes.append(by_name[source])
    for scope in scopes:
        seq = scope.sequence_named(name)
        if seq is not None:
            return ("sequence", seq)
        for tc in scope.textual_conventions:
            if tc.name == name:
                return ("tc", tc)
    return (None, None)


def _normalize_syntax(syntax, mod, by_name, import_sources, _depth=0):
    """Rewrite named type references to their concrete kinds."""
    if _depth > 16:
        raise SmiError(f"textual-convention reference cycle at {syntax.ref!r}")
    if syntax.kind != model.NAMED:
        return syntax
    kind, found = _lookup_type(syntax.ref, mod, by_name, import_sources)
    if kind == "sequence":
        return model.Syntax(model.ENTRY, ref=syntax.ref)
    if kind == "tc":
        return _normalize_syntax(found.syntax, mod, by_name, import_sources, _depth + 1)
    raise UnresolvedImport(syntax.ref, mod.name)


def resolve_augments(registry, profile=LENIENT):
    """Flatten AUGMENTS chains into ResolvedTables, honoring the profile.

    lenient accepts chains of any depth; strict rejects depth >= 2 the way
    validators that read RFC 2578 narrowly do.  AUGMENTS written on a table
    object (instead of its entry) is accepted with a warning under both
    profiles and treated as if written on the entry.
    """
    if profile not in (LENIENT, STRICT):
        raise ValueError(f"unknown profile {profile!r}")

    objects = list(registry._object_types.values())
    tables = [o for o in objects if o.is_table]

    def entry_for_table(table):
        for obj in objects:
            if obj.module == table.module and obj.syntax.kind == model.ENTRY and obj.syntax.ref == table.syntax.ref:
                return obj
        return None

    def find_named(module, name):
        for obj in objects:
            if obj.name == name and (obj.module == module or _visible(module, name, obj.module)):
                return obj
        return None

    def _visible(module, name, defining_module):
        mod = registry.modules.get(module)
        if mod is None:
            return False
        return (name, defining_module) in mod.imports

    # Gather augments links, normalizing the table-level idiom on both ends.
    raw_links = []  # (entry ObjectTypeDef, target name, declared-on name)
    for obj in objects:
        if not obj.augments:
            continue
        if obj.is_table:
            entry = entry_for_table(obj)
            if entry is None:
                raise AugmentsNonEntry(obj.name)
            warnings.warn(
                f"{obj.name}: AUGMENTS belongs on the entry, not the table; "
                f"treating it as written on {entry.name}",
                SmiWarning,
                stacklevel=2,
            )
            raw_links.append((entry, obj.augments, obj.name))
        else:
            raw_links.append((obj, obj.augments, obj.name))

    resolved_links = {}  # (module, entryName) -> target entry ObjectTypeDef
    for entry, target_name, declared_on in raw_links:
        target = find_named(entry.module, target_name)
        if target is None:
            raise DanglingAugments(declared_on, target_name)
        if target.is_table:
            warnings.warn(
                f"{declared_on}: AUGMENTS names table {target.name}; "
                "treating the target as its entry",
                SmiWarning,
                stacklevel=2,
            )
            target = entry_for_table(target)
            if target is None:
                raise AugmentsNonEntry(declared_on)
        if not target.is_entry:
            raise AugmentsNonEntry(declared_on)
        key = (entry.module, entry.name)
        existing = resolved_links.get(key)
        if existing is not None:
            if (existing.module, existing.name) != (target.module, target.name):
                raise SmiError(
                    f"{entry.name!r} carries conflicting AUGMENTS targets "
                    f"{existing.name!r} and {target.name!r}"
                )
            continue
        resolved_links[key] = target

    def chain_of(entry):
        """Entries from this one back to the chain's base, leaf first."""
        chain = [entry]
        seen = {(entry.module, entry.name)}
        current = entry
        while (current.module, current.name) in resolved_links:
            current = resolved_links[(current.module, current.name)]
            key = (current.module, current.name)
            if key in seen:
                raise AugmentsCycle([e.name for e in chain] + [current.name])
            seen.add(key)
            chain.append(current)
        return chain

    out = []
    for table in sorted(tables, key=lambda t: tuple(t.resolved_oid or ())):
        entry = entry_for_table(table)
        if entry is None:
            raise SmiError(f"table {table.name!r} has no entry object")
        chain = chain_of(entry)
        if profile == STRICT and len(chain) > 2:
            raise ChainedAugments(entry.name, [e.name for e in chain])

        if table.resolved_oid is None:
            raise SmiError(f"table {table.name!r} has no OID assignment")
        if entry.resolved_oid is None:
            entry = registry._register_entry_oid(entry, tuple(table.resolved_oid) + (1,))

        base = chain[-1]
        if not base.index:
            raise SmiError(f"base entry {base.name!r} of {table.name!r} has no INDEX")

        own_by_entry = {}
        for link_entry in chain:
            own_by_entry[link_entry.name] = _columns_under(registry, link_entry)

        effective = []
        seen_names = set()
        for link_entry in reversed(chain):  # base first
            for col in own_by_entry[link_entry.name]:
                if col.name in seen_names:
                    raise SmiError(
                        f"duplicate column {col.name!r} in chain of {table.name!r}"
                    )
                seen_names.add(col.name)
                effective.append(col)

        index_columns = []
        for index_name in base.index:
            col = next((c for c in effective if c.name == index_name), None)
            if col is None:
                col = _foreign_index_column(registry, base, index_name)
            index_columns.append(col)

        out.append(
            model.ResolvedTable(
                table_name=table.name,
                table_oid=table.resolved_oid,
                entry_name=entry.name,
                entry_oid=entry.resolved_oid,
                index_columns=tuple(index_columns),
                own_columns=tuple(own_by_entry[entry.name]),
                effective_columns=tuple(effective),
                augments_base=resolved_links[(entry.module, entry.name)].name
                if (entry.module, entry.name) in resolved_links
                else "",
            )
        )
    return out


def _columns_under(registry, entry):
    """Column definitions directly under an entry, ordered by sub-id."""
    candidates = [
        o for o in registry._object_types.values()
        if o.module == entry.module and o.parent == entry.name
    ]
    cols = []
    for obj in sorted(candidates, key=lambda o: o.sub_ids):
        if obj.resolved_oid is None:
            raise SmiError(f"column {obj.name!r} under {entry.name!r} has no OID")
        cols.append(
            model.ColumnDef(
                name=obj.name,
                sub_id=obj.sub_ids[-1],
                syntax=obj.syntax,
                max_access=obj.max_access,
                oid=obj.resolved_oid,
            )
        )
    return cols


def _foreign_index_column(registry, base_entry, index_name):
    """INDEX may reference a column object defined under another table."""
    try:
        obj = registry.object_type(index_name)
    except UnknownName:
        raise SmiError(
            f"index column {index_name!r} of {base_entry.name!r} is not defined"
        ) from None
    return model.ColumnDef(
        name=obj.name,
        sub_id=obj.sub_ids[-1] if obj.sub_ids else 0,
        syntax=obj.syntax,
        max_access=obj.max_access,
        oid=obj.resolved_oid,
    )
