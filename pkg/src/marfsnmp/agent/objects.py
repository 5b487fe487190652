"""Managed-object registry: scalars plus table bindings over row sources.

Table instances are not stored; they materialize on demand as
column-OID.row-index from whatever the row source currently reports, so agent
answers always reflect live instrumentation.
"""

import heapq
from dataclasses import dataclass

from marfsnmp import ber
from marfsnmp.messages import ErrorStatus
from marfsnmp.oid import Oid
from marfsnmp.smi import model

READ_ONLY = "read-only"
READ_WRITE = "read-write"


class DuplicateRegistration(Exception):
    def __init__(self, oid):
        super().__init__(f"already registered: {oid}")
        self.oid = oid


@dataclass(frozen=True, slots=True)
class ManagedObject:
    oid: Oid
    access: str
    read: object                 # () -> BerValue
    write: object = None         # (BerValue) -> None, commits
    check: object = None         # (BerValue) -> error-status int, 0 when ok
    ber_type: type | None = None

    def __post_init__(self):
        if (self.access == READ_WRITE) != (self.write is not None):
            raise ValueError("write delegate present iff access is read-write")


_KIND_TO_BER = {
    model.INTEGER: ber.Integer,
    model.INTEGER_ENUM: ber.Integer,
    model.COUNTER32: ber.Counter32,
    model.TIMETICKS: ber.TimeTicks,
    model.OCTET_STRING: ber.OctetString,
    model.DISPLAY_STRING: ber.OctetString,
    model.OID_SYNTAX: ber.OidValue,
}


def ber_type_for(syntax):
    return _KIND_TO_BER.get(syntax.kind)


def to_ber(syntax, raw):
    """Wrap a plain python value as the BER value a column syntax calls for."""
    cls = _KIND_TO_BER[syntax.kind]
    if cls is ber.OctetString:
        return ber.OctetString.from_text(raw) if isinstance(raw, str) else ber.OctetString(bytes(raw))
    if cls is ber.OidValue:
        return ber.OidValue(Oid(raw))
    return cls(int(raw))


def from_ber(syntax, value):
    """Unwrap a BER value into the plain python value row sources traffic in."""
    if isinstance(value, ber.OctetString):
        return value.text()
    if isinstance(value, ber.OidValue):
        return Oid(value.value)
    return value.value


class TableBinding:
    """Serves the own columns of one resolved table from a row source.

    The row source speaks plain python values and column names:
      row_indexes() -> sorted iterable of int
      read_cell(column_name, index) -> value
      write_cell(column_name, index, value)          (read-write columns)
      check_cell(column_name, index, value) -> int   (optional, 0 = fine)
    """

    def __init__(self, resolved, source):
        self.resolved = resolved
        self.source = source
        self.entry_oid = resolved.entry_oid
        self.columns = tuple(
            c for c in resolved.own_columns if c.max_access != "not-accessible"
        )
        self._by_sub_id = {c.sub_id: c for c in self.columns}

    def instances(self):
        indexes = sorted(self.source.row_indexes())
        for col in self.columns:
            for index in indexes:
                yield self._materialize(col, index)

    def lookup(self, oid):
        if len(oid) != len(self.entry_oid) + 2 or not oid.startswith(self.entry_oid):
            return None
        col = self._by_sub_id.get(oid[len(self.entry_oid)])
        if col is None:
            return None
        index = oid[-1]
        if index not in set(self.source.row_indexes()):
            return None
        return self._materialize(col, index)

    def covers_object(self, oid):
        """True when oid names or extends a column this binding serves."""
        for col in self.columns:
            if oid.startswith(col.oid):
                return True
        return False

    def _materialize(self, col, index):
        writable = col.max_access == READ_WRITE

        def read():
            return to_ber(col.syntax, self.source.read_cell(col.name, index))

        def check(value):
            if col.syntax.kind == model.INTEGER_ENUM:
                if value.value not in [num for _label, num in col.syntax.labels]:
                    return ErrorStatus.WRONG_VALUE
            probe = getattr(self.source, "check_cell", None)
            if probe is not None:
                return probe(col.name, index, from_ber(col.syntax, value))
            return ErrorStatus.NO_ERROR

        def write(value):
            self.source.write_cell(col.name, index, from_ber(col.syntax, value))

        return ManagedObject(
            oid=col.oid.extend(index),
            access=col.max_access,
            read=read,
            write=write if writable else None,
            check=check,
            ber_type=ber_type_for(col.syntax),
        )


class ObjectRegistry:
    """OID-ordered set of scalars and table bindings."""

    def __init__(self):
        self._scalars = {}    # Oid -> ManagedObject
        self._bindings = []   # TableBinding list

    def register(self, obj):
        if obj.oid in self._scalars:
            raise DuplicateRegistration(obj.oid)
        for binding in self._bindings:
            if obj.oid.startswith(binding.entry_oid):
                raise DuplicateRegistration(obj.oid)
        self._scalars[obj.oid] = obj

    def register_table(self, resolved, source):
        binding = TableBinding(resolved, source)
        for other in self._bindings:
            if binding.entry_oid.startswith(other.entry_oid) or other.entry_oid.startswith(binding.entry_oid):
                raise DuplicateRegistration(binding.entry_oid)
        for oid in self._scalars:
            if oid.startswith(binding.entry_oid):
                raise DuplicateRegistration(binding.entry_oid)
        self._bindings.append(binding)
        return binding

    def lookup(self, oid):
        obj = self._scalars.get(oid)
        if obj is not None:
            return obj
        for binding in self._bindings:
            obj = binding.lookup(oid)
            if obj is not None:
                return obj
        return None

    def knows_object(self, oid):
        """True when oid lies at or under an implemented object definition."""
        for scalar_oid in self._scalars:
            if len(scalar_oid) > 1 and oid.startswith(scalar_oid[:-1]):
                return True
        return any(binding.covers_object(oid) for binding in self._bindings)

    def instances(self):
        """Every live instance in ascending OID order."""
        streams = [sorted((oid, obj) for oid, obj in self._scalars.items())]
        streams.extend(
            [(obj.oid, obj) for obj in binding.instances()]
            for binding in self._bindings
        )
        return heapq.merge(*[iter(s) for s in streams], key=lambda pair: pair[0])

    def successor(self, oid):
        """First registered instance with an OID strictly greater than oid."""
        for ioid, obj in self.instances():
            if ioid > oid:
                return obj
        return None

    def dump(self):
        """Sorted (oid, value) pairs for every instance; the walk oracle."""
        return [(ioid, obj.read()) for ioid, obj in self.instances()]
