"""Render a parsed module back to SMI text.

The output is canonical, not a byte-copy of the input: reparsing it yields a
module structurally equal to the one printed.
"""

from marfsnmp.smi import model

_KIND_TEXT = {
    model.INTEGER: "Integer32",
    model.COUNTER32: "Counter32",
    model.TIMETICKS: "TimeTicks",
    model.OCTET_STRING: "OCTET STRING",
    model.DISPLAY_STRING: "DisplayString",
    model.OID_SYNTAX: "OBJECT IDENTIFIER",
}


def _syntax_text(syntax):
    if syntax.kind == model.INTEGER_ENUM:
        labels = ", ".join(f"{name}({num})" for name, num in syntax.labels)
        return "INTEGER { " + labels + " }"
    if syntax.kind == model.SEQUENCE_OF:
        return f"SEQUENCE OF {syntax.ref}"
    if syntax.kind in (model.NAMED, model.ENTRY):
        return syntax.ref
    text = _KIND_TEXT[syntax.kind]
    if syntax.constraint:
        text += " (" + _join_constraint(syntax.constraint) + ")"
    return text


def _join_constraint(parts):
    text = ""
    for part in parts:
        if text and part not in (")", "..", ",") and not text.endswith(("(", "..")):
            text += " "
        text += part
    return text


def _oid_value(parent, sub_ids):
    return "{ " + parent + " " + " ".join(str(s) for s in sub_ids) + " }"


def module_to_text(mod):
    lines = [f"{mod.name} DEFINITIONS ::= BEGIN", ""]

    if mod.imports:
        by_source = {}
        order = []
        for symbol, source in mod.imports:
            if source not in by_source:
                by_source[source] = []
                order.append(source)
            by_source[source].append(symbol)
        lines.append("IMPORTS")
        for i, source in enumerate(order):
            tail = ";" if i == len(order) - 1 else ""
            lines.append(f"    {', '.join(by_source[source])} FROM {source}{tail}")
        lines.append("")

    mi = mod.module_identity
    if mi is not None:
        lines += [
            f"{mi.name} MODULE-IDENTITY",
            f'    LAST-UPDATED "{mi.last_updated}"',
            f'    ORGANIZATION "{mi.organization}"',
            f'    CONTACT-INFO "{mi.contact_info}"',
            f'    DESCRIPTION "{mi.description}"',
            f"    ::= {_oid_value(mi.parent, mi.sub_ids)}",
            "",
        ]

    for name, parent, sub_ids in mod.assignments:
        lines.append(f"{name} OBJECT IDENTIFIER ::= {_oid_value(parent, sub_ids)}")
    if mod.assignments:
        lines.append("")

    for tc in mod.textual_conventions:
        lines.append(f"{tc.name} ::= TEXTUAL-CONVENTION")
        if tc.display_hint:
            lines.append(f'    DISPLAY-HINT "{tc.display_hint}"')
        lines += [
            f"    STATUS {tc.status}",
            f'    DESCRIPTION "{tc.description}"',
            f"    SYNTAX {_syntax_text(tc.syntax)}",
            "",
        ]

    for obj in mod.object_types:
        lines += [
            f"{obj.name} OBJECT-TYPE",
            f"    SYNTAX {_syntax_text(obj.syntax)}",
            f"    MAX-ACCESS {obj.max_access}",
            f"    STATUS {obj.status}",
        ]
        if obj.description:
            lines.append(f'    DESCRIPTION "{obj.description}"')
        if obj.index:
            lines.append("    INDEX { " + ", ".join(obj.index) + " }")
        if obj.augments:
            lines.append("    AUGMENTS { " + obj.augments + " }")
        if obj.parent:
            lines.append(f"    ::= {_oid_value(obj.parent, obj.sub_ids)}")
        lines.append("")

    for seq in mod.sequences:
        lines.append(f"{seq.name} ::= SEQUENCE {{")
        for i, (field_name, syntax) in enumerate(seq.fields):
            comma = "," if i < len(seq.fields) - 1 else ""
            lines.append(f"    {field_name} {_syntax_text(syntax)}{comma}")
        lines += ["}", ""]

    for note in mod.notifications:
        lines.append(f"{note.name} NOTIFICATION-TYPE")
        if note.objects:
            lines.append("    OBJECTS { " + ", ".join(note.objects) + " }")
        lines.append(f"    STATUS {note.status}")
        if note.description:
            lines.append(f'    DESCRIPTION "{note.description}"')
        lines += [f"    ::= {_oid_value(note.parent, note.sub_ids)}", ""]

    lines.append("END")
    return "\n".join(lines) + "\n"
