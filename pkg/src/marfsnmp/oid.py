"""Object identifiers: the universal naming key of the management tree."""

from __future__ import annotations

from typing import Iterable


class OidError(ValueError):
    """Raised for malformed object identifiers."""


class Oid(tuple):
    """An object identifier as a tuple of non-negative sub-identifiers.

    Tuple comparison gives exactly the order managed objects are walked
    in: lexicographic on sub-identifiers, with a strict prefix sorting
    before any of its extensions.
    """

    __slots__ = ()

    def __new__(cls, sub_ids: Iterable[int]):
        return super().__new__(cls, tuple(int(x) for x in sub_ids))

    @classmethod
    def parse(cls, text: str) -> "Oid":
        """Parse dotted notation, validating registration-tree rules."""
        text = text.strip().lstrip(".")
        if not text:
            raise OidError("empty OID")
        try:
            oid = cls(int(part) for part in text.split("."))
        except ValueError:
            raise OidError(f"malformed OID {text!r}") from None
        oid.validate()
        return oid

    def validate(self) -> "Oid":
        if len(self) < 2:
            raise OidError(f"OID {self} needs at least two sub-identifiers")
        for x in self:
            if not 0 <= x < 2**32:
                raise OidError(f"sub-identifier {x} out of range")
        if self[0] not in (0, 1, 2):
            raise OidError(f"first sub-identifier must be 0, 1 or 2, got {self[0]}")
        if self[0] < 2 and self[1] >= 40:
            raise OidError(f"second sub-identifier must be < 40 under root {self[0]}")
        return self

    def extend(self, *sub_ids: int) -> "Oid":
        return Oid(tuple(self) + sub_ids)

    def startswith(self, prefix: "Oid") -> bool:
        return self[: len(prefix)] == tuple(prefix)

    def __add__(self, other):  # type: ignore[override]
        return Oid(tuple(self) + tuple(other))

    def __getitem__(self, item):
        result = super().__getitem__(item)
        return Oid(result) if isinstance(item, slice) else result

    def __str__(self) -> str:
        return ".".join(str(x) for x in self)

    def __repr__(self) -> str:
        return f"Oid({str(self)!r})"


ENTERPRISES = Oid((1, 3, 6, 1, 4, 1))
MARF = ENTERPRISES.extend(28218)

# Standard instances used in SNMPv2 trap payloads.
SYS_UPTIME_INSTANCE = Oid((1, 3, 6, 1, 2, 1, 1, 3, 0))
SNMP_TRAP_OID_INSTANCE = Oid((1, 3, 6, 1, 6, 3, 1, 1, 4, 1, 0))
