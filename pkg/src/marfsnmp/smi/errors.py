"""Errors and warnings raised by the SMI parser and registry."""


class SmiError(Exception):
    """Base class for all SMI parsing, linking, and resolution errors."""


class SmiSyntaxError(SmiError):
    def __init__(self, line, expected):
        super().__init__(f"line {line}: expected {expected}")
        self.line = line
        self.expected = expected


class UnsupportedConstruct(SmiError):
    def __init__(self, name, line):
        super().__init__(f"line {line}: unsupported SMI construct {name!r}")
        self.name = name
        self.line = line


class UnresolvedImport(SmiError):
    def __init__(self, symbol, module):
        super().__init__(f"symbol {symbol!r} cannot be resolved for module {module!r}")
        self.symbol = symbol
        self.module = module


class DuplicateOid(SmiError):
    def __init__(self, oid, name1, name2):
        dotted = ".".join(str(s) for s in oid)
        super().__init__(f"OID {dotted} assigned to both {name1!r} and {name2!r}")
        self.oid = oid
        self.name1 = name1
        self.name2 = name2


class CycleDetected(SmiError):
    def __init__(self, names):
        self.names = tuple(names)
        super().__init__("OID assignment cycle through " + ", ".join(self.names))


class DanglingAugments(SmiError):
    def __init__(self, name, target):
        super().__init__(f"{name!r} augments undefined target {target!r}")
        self.name = name
        self.target = target


class AugmentsCycle(SmiError):
    def __init__(self, names):
        self.names = tuple(names)
        super().__init__("AUGMENTS cycle through " + ", ".join(self.names))


class AugmentsNonEntry(SmiError):
    def __init__(self, name):
        super().__init__(f"{name!r} augments an object that is not a table entry")
        self.name = name


class ChainedAugments(SmiError):
    """Strict-profile rejection of an entry that augments another augmenting entry."""

    def __init__(self, name, chain):
        self.name = name
        self.chain = tuple(chain)
        super().__init__(
            f"{name!r} augments through a chain ({' <- '.join(self.chain)}); "
            "chained AUGMENTS is rejected by the strict profile"
        )


class UnknownName(SmiError):
    def __init__(self, name, detail=""):
        super().__init__(f"unknown name {name!r}" + (f": {detail}" if detail else ""))
        self.name = name


class AmbiguousName(UnknownName):
    def __init__(self, name, candidates):
        self.candidates = tuple(candidates)
        super().__init__(name, "ambiguous, one of " + ", ".join(self.candidates))


class SmiWarning(UserWarning):
    """Non-fatal deviations from strict SMIv2 that are accepted anyway."""
