"""Data model for parsed SMI modules and the resolved object registry."""

from dataclasses import dataclass, field

from marfsnmp.oid import Oid

# Syntax kinds after parsing.  "named" is a reference to a TEXTUAL-CONVENTION
# or SEQUENCE that linking later normalizes to one of the concrete kinds.
INTEGER = "integer"
INTEGER_ENUM = "integer-enum"
COUNTER32 = "counter32"
TIMETICKS = "timeticks"
OCTET_STRING = "octet-string"
DISPLAY_STRING = "display-string"
OID_SYNTAX = "oid"
SEQUENCE_OF = "sequence-of"
ENTRY = "entry"
NAMED = "named"


@dataclass(frozen=True, slots=True)
class Syntax:
    kind: str
    labels: tuple = ()       # ((label, number), ...) for integer-enum
    ref: str = ""            # target type name for sequence-of / entry / named
    constraint: tuple = ()   # raw constraint tokens, e.g. ("SIZE", "(", "0", "..", "255", ")")

    def label_for(self, number):
        for name, value in self.labels:
            if value == number:
                return name
        return None

    def number_for(self, label):
        for name, value in self.labels:
            if name == label:
                return value
        return None


@dataclass(frozen=True, slots=True)
class ObjectTypeDef:
    name: str
    syntax: Syntax
    max_access: str
    status: str
    description: str = ""
    index: tuple = ()        # column names from INDEX { ... }
    augments: str = ""       # target name from AUGMENTS { ... }
    parent: str = ""         # parent name from ::= { parent sub-ids }
    sub_ids: tuple = ()
    resolved_oid: Oid | None = field(default=None, compare=False)
    module: str = field(default="", compare=False)
    line: int = field(default=0, compare=False)

    @property
    def is_table(self):
        return self.syntax.kind == SEQUENCE_OF

    @property
    def is_entry(self):
        return self.syntax.kind == ENTRY


@dataclass(frozen=True, slots=True)
class TextualConvention:
    name: str
    syntax: Syntax
    status: str = "current"
    description: str = ""
    display_hint: str = ""
    line: int = field(default=0, compare=False)


@dataclass(frozen=True, slots=True)
class SequenceDef:
    name: str
    fields: tuple = ()       # ((fieldName, Syntax), ...)
    line: int = field(default=0, compare=False)


@dataclass(frozen=True, slots=True)
class NotificationDef:
    name: str
    objects: tuple = ()
    status: str = "current"
    description: str = ""
    parent: str = ""
    sub_ids: tuple = ()
    resolved_oid: Oid | None = field(default=None, compare=False)
    module: str = field(default="", compare=False)
    line: int = field(default=0, compare=False)


@dataclass(frozen=True, slots=True)
class ModuleIdentity:
    name: str
    last_updated: str = ""
    organization: str = ""
    contact_info: str = ""
    description: str = ""
    parent: str = ""
    sub_ids: tuple = ()
    line: int = field(default=0, compare=False)


@dataclass(frozen=True, slots=True)
class MibModule:
    name: str
    imports: tuple = ()               # ((symbol, sourceModule), ...)
    assignments: tuple = ()           # ((name, parent, sub_ids), ...) from OBJECT IDENTIFIER
    object_types: tuple = ()
    textual_conventions: tuple = ()
    sequences: tuple = ()
    notifications: tuple = ()
    module_identity: ModuleIdentity | None = None

    def sequence_named(self, name):
        for seq in self.sequences:
            if seq.name == name:
                return seq
        return None

    def defines(self, symbol):
        """True when this module defines symbol at top level (any construct)."""
        if self.module_identity is not None and self.module_identity.name == symbol:
            return True
        for name, _parent, _subs in self.assignments:
            if name == symbol:
                return True
        return any(
            d.name == symbol
            for group in (
                self.object_types,
                self.textual_conventions,
                self.sequences,
                self.notifications,
            )
            for d in group
        )


@dataclass(frozen=True, slots=True)
class ColumnDef:
    name: str
    sub_id: int
    syntax: Syntax
    max_access: str
    oid: Oid


@dataclass(frozen=True, slots=True)
class ResolvedTable:
    table_name: str
    table_oid: Oid
    entry_name: str
    entry_oid: Oid
    index_columns: tuple      # ColumnDefs of the chain's base table index
    own_columns: tuple        # ColumnDefs defined directly under this entry
    effective_columns: tuple  # base-chain columns ++ own_columns
    augments_base: str = ""   # entry name this entry augments ("" when none)

    def column_named(self, name):
        for col in self.effective_columns:
            if col.name == name:
                return col
        return None
