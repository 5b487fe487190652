"""Recursive-descent parser for the SMIv2 subset.

Supported constructs: IMPORTS, MODULE-IDENTITY, OBJECT IDENTIFIER assignment,
OBJECT-TYPE (SYNTAX, MAX-ACCESS, STATUS, DESCRIPTION, INDEX, AUGMENTS),
SEQUENCE, TEXTUAL-CONVENTION, NOTIFICATION-TYPE.  Anything else is rejected
with UnsupportedConstruct naming the construct and line.
"""

from marfsnmp.smi import model
from marfsnmp.smi.errors import SmiSyntaxError, UnsupportedConstruct
from marfsnmp.smi.lexer import NAME, NUMBER, PUNCT, STRING, tokenize

# SMI types outside the subset get a targeted rejection instead of being
# mistaken for textual-convention references.
_KNOWN_UNSUPPORTED_TYPES = frozenset(
    ["Gauge32", "Unsigned32", "IpAddress", "Opaque", "Counter64", "BITS"]
)

_OBJECT_TYPE_CLAUSES = frozenset(
    ["SYNTAX", "MAX-ACCESS", "STATUS", "DESCRIPTION", "INDEX", "AUGMENTS"]
)
_UNSUPPORTED_CLAUSES = frozenset(["UNITS", "REFERENCE", "DEFVAL", "ACCESS"])


class _Cursor:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self, ahead=0):
        i = self.pos + ahead
        return self.tokens[i] if i < len(self.tokens) else None

    def advance(self):
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1].line if self.tokens else 1
            raise SmiSyntaxError(last, "more input, got end of file")
        self.pos += 1
        return tok

    def expect(self, text=None, kind=None):
        tok = self.advance()
        if text is not None and tok.text != text:
            raise SmiSyntaxError(tok.line, f"{text!r}, got {tok.text!r}")
        if kind is not None and tok.kind != kind:
            raise SmiSyntaxError(tok.line, f"a {kind}, got {tok.text!r}")
        return tok

    def at(self, text):
        tok = self.peek()
        return tok is not None and tok.text == text


def parse_mib(source):
    """Parse one MODULE ... DEFINITIONS ::= BEGIN ... END unit."""
    cur = _Cursor(tokenize(source))
    module_name = cur.expect(kind=NAME).text
    cur.expect("DEFINITIONS")
    cur.expect("::=")
    cur.expect("BEGIN")

    imports = []
    assignments = []
    object_types = []
    textual_conventions = []
    sequences = []
    notifications = []
    module_identity = None

    while not cur.at("END"):
        tok = cur.peek()
        if tok is None:
            raise SmiSyntaxError(cur.tokens[-1].line, "'END'")
        if tok.text == "IMPORTS":
            cur.advance()
            imports.extend(_parse_imports(cur))
            continue
        if tok.text == "EXPORTS":
            raise UnsupportedConstruct("EXPORTS", tok.line)
        name_tok = cur.expect(kind=NAME)
        kind_tok = cur.peek()
        if kind_tok is None:
            raise SmiSyntaxError(name_tok.line, "a definition body")
        if kind_tok.text == "OBJECT-TYPE":
            cur.advance()
            object_types.append(_parse_object_type(cur, name_tok))
        elif kind_tok.text == "MODULE-IDENTITY":
            if module_identity is not None:
                raise SmiSyntaxError(kind_tok.line, "at most one MODULE-IDENTITY")
            cur.advance()
            module_identity = _parse_module_identity(cur, name_tok)
        elif kind_tok.text == "NOTIFICATION-TYPE":
            cur.advance()
            notifications.append(_parse_notification(cur, name_tok))
        elif kind_tok.text == "OBJECT" and cur.peek(1) is not None and cur.peek(1).text == "IDENTIFIER":
            cur.advance()
            cur.advance()
            cur.expect("::=")
            parent, sub_ids = _parse_oid_value(cur)
            assignments.append((name_tok.text, parent, sub_ids))
        elif kind_tok.text == "::=":
            cur.advance()
            _parse_type_assignment(
                cur, name_tok, textual_conventions, sequences
            )
        else:
            raise UnsupportedConstruct(kind_tok.text, kind_tok.line)

    cur.expect("END")
    trailing = cur.peek()
    if trailing is not None:
        raise SmiSyntaxError(trailing.line, f"end of module, got {trailing.text!r}")

    return model.MibModule(
        name=module_name,
        imports=tuple(imports),
        assignments=tuple(assignments),
        object_types=tuple(object_types),
        textual_conventions=tuple(textual_conventions),
        sequences=tuple(sequences),
        notifications=tuple(notifications),
        module_identity=module_identity,
    )


def _parse_imports(cur):
    imports = []
    pending = []
    while True:
        tok = cur.advance()
        if tok.text == ";":
            if pending:
                raise SmiSyntaxError(tok.line, "'FROM <module>' before ';'")
            return imports
        if tok.text == ",":
            continue
        if tok.text == "FROM":
            source = cur.expect(kind=NAME).text
            imports.extend((symbol, source) for symbol in pending)
            pending = []
            continue
        if tok.kind != NAME:
            raise SmiSyntaxError(tok.line, f"an import symbol, got {tok.text!r}")
        pending.append(tok.text)


def _parse_oid_value(cur):
    """{ parentName subId+ } -> (parentName, (subIds...))."""
    cur.expect("{")
    parent = cur.expect(kind=NAME).text
    sub_ids = []
    while not cur.at("}"):
        sub_ids.append(int(cur.expect(kind=NUMBER).text))
    cur.expect("}")
    if not sub_ids:
        raise SmiSyntaxError(cur.peek(-1).line if cur.peek(-1) else 1, "at least one sub-identifier")
    return parent, tuple(sub_ids)


def _parse_syntax(cur):
    tok = cur.advance()
    if tok.text in _KNOWN_UNSUPPORTED_TYPES:
        raise UnsupportedConstruct(tok.text, tok.line)
    if tok.text in ("INTEGER", "Integer32"):
        if cur.at("{"):
            return model.Syntax(model.INTEGER_ENUM, labels=_parse_enum_labels(cur))
        return model.Syntax(model.INTEGER, constraint=_maybe_constraint(cur))
    if tok.text == "OCTET":
        cur.expect("STRING")
        return model.Syntax(model.OCTET_STRING, constraint=_maybe_constraint(cur))
    if tok.text == "OBJECT":
        cur.expect("IDENTIFIER")
        return model.Syntax(model.OID_SYNTAX)
    if tok.text == "Counter32":
        return model.Syntax(model.COUNTER32)
    if tok.text == "TimeTicks":
        return model.Syntax(model.TIMETICKS)
    if tok.text == "DisplayString":
        return model.Syntax(model.DISPLAY_STRING, constraint=_maybe_constraint(cur))
    if tok.text == "SEQUENCE":
        cur.expect("OF")
        entry_type = cur.expect(kind=NAME).text
        return model.Syntax(model.SEQUENCE_OF, ref=entry_type)
    if tok.kind == NAME and tok.text[0].isupper():
        return model.Syntax(model.NAMED, ref=tok.text)
    raise SmiSyntaxError(tok.line, f"a SYNTAX type, got {tok.text!r}")


def _parse_enum_labels(cur):
    cur.expect("{")
    labels = []
    while True:
        label = cur.expect(kind=NAME).text
        cur.expect("(")
        number = int(cur.expect(kind=NUMBER).text)
        cur.expect(")")
        labels.append((label, number))
        tok = cur.advance()
        if tok.text == "}":
            return tuple(labels)
        if tok.text != ",":
            raise SmiSyntaxError(tok.line, f"',' or '}}', got {tok.text!r}")


def _maybe_constraint(cur):
    """Capture a parenthesized range/SIZE constraint as raw tokens."""
    if not cur.at("("):
        return ()
    cur.advance()
    depth = 1
    parts = []
    while depth > 0:
        tok = cur.advance()
        if tok.text == "(":
            depth += 1
        elif tok.text == ")":
            depth -= 1
            if depth == 0:
                break
        parts.append(tok.text)
    return tuple(parts)


def _parse_object_type(cur, name_tok):
    syntax = None
    max_access = None
    status = None
    description = ""
    index = ()
    augments = ""
    parent = ""
    sub_ids = ()

    while True:
        tok = cur.peek()
        if tok is None:
            raise SmiSyntaxError(name_tok.line, "OBJECT-TYPE clauses")
        if tok.text == "SYNTAX":
            cur.advance()
            syntax = _parse_syntax(cur)
        elif tok.text == "MAX-ACCESS":
            cur.advance()
            max_access = cur.expect(kind=NAME).text
        elif tok.text == "STATUS":
            cur.advance()
            status = cur.expect(kind=NAME).text
        elif tok.text == "DESCRIPTION":
            cur.advance()
            description = cur.expect(kind=STRING).text
        elif tok.text == "INDEX":
            cur.advance()
            index = _parse_name_list(cur)
        elif tok.text == "AUGMENTS":
            cur.advance()
            targets = _parse_name_list(cur)
            if len(targets) != 1:
                raise SmiSyntaxError(tok.line, "exactly one AUGMENTS target")
            augments = targets[0]
        elif tok.text in _UNSUPPORTED_CLAUSES:
            raise UnsupportedConstruct(tok.text, tok.line)
        elif tok.text == "::=":
            cur.advance()
            parent, sub_ids = _parse_oid_value(cur)
            break
        else:
            break  # next top-level definition

    if syntax is None:
        raise SmiSyntaxError(name_tok.line, "SYNTAX clause in OBJECT-TYPE")
    if max_access is None:
        raise SmiSyntaxError(name_tok.line, "MAX-ACCESS clause in OBJECT-TYPE")
    if status is None:
        raise SmiSyntaxError(name_tok.line, "STATUS clause in OBJECT-TYPE")
    if index and augments:
        raise SmiSyntaxError(name_tok.line, "INDEX or AUGMENTS, not both")
    if not parent and not augments:
        raise SmiSyntaxError(name_tok.line, "'::= { parent sub-id }' or AUGMENTS")

    return model.ObjectTypeDef(
        name=name_tok.text,
        syntax=syntax,
        max_access=max_access,
        status=status,
        description=description,
        index=index,
        augments=augments,
        parent=parent,
        sub_ids=sub_ids,
        line=name_tok.line,
    )


def _parse_name_list(cur):
    cur.expect("{")
    names = [cur.expect(kind=NAME).text]
    while cur.at(","):
        cur.advance()
        names.append(cur.expect(kind=NAME).text)
    cur.expect("}")
    return tuple(names)


def _parse_module_identity(cur, name_tok):
    cur.expect("LAST-UPDATED")
    last_updated = cur.expect(kind=STRING).text
    cur.expect("ORGANIZATION")
    organization = cur.expect(kind=STRING).text
    cur.expect("CONTACT-INFO")
    contact_info = cur.expect(kind=STRING).text
    cur.expect("DESCRIPTION")
    description = cur.expect(kind=STRING).text
    while cur.at("REVISION"):
        cur.advance()
        cur.expect(kind=STRING)
        cur.expect("DESCRIPTION")
        cur.expect(kind=STRING)
    cur.expect("::=")
    parent, sub_ids = _parse_oid_value(cur)
    return model.ModuleIdentity(
        name=name_tok.text,
        last_updated=last_updated,
        organization=organization,
        contact_info=contact_info,
        description=description,
        parent=parent,
        sub_ids=sub_ids,
        line=name_tok.line,
    )


def _parse_notification(cur, name_tok):
    objects = ()
    if cur.at("OBJECTS"):
        cur.advance()
        objects = _parse_name_list(cur)
    cur.expect("STATUS")
    status = cur.expect(kind=NAME).text
    description = ""
    if cur.at("DESCRIPTION"):
        cur.advance()
        description = cur.expect(kind=STRING).text
    cur.expect("::=")
    parent, sub_ids = _parse_oid_value(cur)
    return model.NotificationDef(
        name=name_tok.text,
        objects=objects,
        status=status,
        description=description,
        parent=parent,
        sub_ids=sub_ids,
        line=name_tok.line,
    )


def _parse_type_assignment(cur, name_tok, textual_conventions, sequences):
    tok = cur.peek()
    if tok is None:
        raise SmiSyntaxError(name_tok.line, "a type definition after '::='")
    if tok.text == "TEXTUAL-CONVENTION":
        cur.advance()
        textual_conventions.append(_parse_textual_convention(cur, name_tok))
    elif tok.text == "SEQUENCE":
        cur.advance()
        sequences.append(_parse_sequence(cur, name_tok))
    else:
        raise UnsupportedConstruct(tok.text, tok.line)


def _parse_textual_convention(cur, name_tok):
    display_hint = ""
    if cur.at("DISPLAY-HINT"):
        cur.advance()
        display_hint = cur.expect(kind=STRING).text
    cur.expect("STATUS")
    status = cur.expect(kind=NAME).text
    cur.expect("DESCRIPTION")
    description = cur.expect(kind=STRING).text
    cur.expect("SYNTAX")
    syntax = _parse_syntax(cur)
    return model.TextualConvention(
        name=name_tok.text,
        syntax=syntax,
        status=status,
        description=description,
        display_hint=display_hint,
        line=name_tok.line,
    )


def _parse_sequence(cur, name_tok):
    cur.expect("{")
    fields = []
    while True:
        field_name = cur.expect(kind=NAME).text
        syntax = _parse_syntax(cur)
        fields.append((field_name, syntax))
        tok = cur.advance()
        if tok.text == "}":
            break
        if tok.text != ",":
            raise SmiSyntaxError(tok.line, f"',' or '}}', got {tok.text!r}")
    return model.SequenceDef(name=name_tok.text, fields=tuple(fields), line=name_tok.line)
