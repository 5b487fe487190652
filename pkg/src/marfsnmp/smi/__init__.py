"""SMIv2 subset: parser, module linker, and AUGMENTS resolution."""

from marfsnmp.smi.errors import (
    AmbiguousName,
    AugmentsCycle,
    AugmentsNonEntry,
    ChainedAugments,
    CycleDetected,
    DanglingAugments,
    DuplicateOid,
    SmiError,
    SmiSyntaxError,
    SmiWarning,
    UnknownName,
    UnresolvedImport,
    UnsupportedConstruct,
)
from marfsnmp.smi.files import (
    MIB_DIR_ENV,
    bundled_mib_dir,
    default_mib_dir,
    load_mib_directory,
    load_registry,
)
from marfsnmp.smi.model import (
    ColumnDef,
    MibModule,
    ModuleIdentity,
    NotificationDef,
    ObjectTypeDef,
    ResolvedTable,
    SequenceDef,
    Syntax,
    TextualConvention,
)
from marfsnmp.smi.parser import parse_mib
from marfsnmp.smi.printer import module_to_text
from marfsnmp.smi.registry import LENIENT, STRICT, MibRegistry, link_modules, resolve_augments

__all__ = [
    "AmbiguousName",
    "AugmentsCycle",
    "AugmentsNonEntry",
    "ChainedAugments",
    "ColumnDef",
    "CycleDetected",
    "DanglingAugments",
    "DuplicateOid",
    "LENIENT",
    "MIB_DIR_ENV",
    "MibModule",
    "MibRegistry",
    "ModuleIdentity",
    "NotificationDef",
    "ObjectTypeDef",
    "ResolvedTable",
    "STRICT",
    "SequenceDef",
    "SmiError",
    "SmiSyntaxError",
    "SmiWarning",
    "Syntax",
    "TextualConvention",
    "UnknownName",
    "UnresolvedImport",
    "UnsupportedConstruct",
    "bundled_mib_dir",
    "default_mib_dir",
    "link_modules",
    "load_mib_directory",
    "load_registry",
    "module_to_text",
    "parse_mib",
    "resolve_augments",
]
