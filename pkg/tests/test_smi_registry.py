import warnings

import pytest

from marfsnmp.oid import Oid
from marfsnmp.smi import (
    LENIENT,
    STRICT,
    AmbiguousName,
    AugmentsCycle,
    ChainedAugments,
    CycleDetected,
    DanglingAugments,
    DuplicateOid,
    SmiWarning,
    UnknownName,
    UnresolvedImport,
    bundled_mib_dir,
    link_modules,
    load_mib_directory,
    load_registry,
    module_to_text,
    parse_mib,
    resolve_augments,
)

MARF = (1, 3, 6, 1, 4, 1, 28218)


@pytest.fixture(scope="module")
def registry():
    return load_registry()


@pytest.fixture(scope="module")
def tables(registry):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SmiWarning)
        return {t.table_name: t for t in resolve_augments(registry, LENIENT)}


def _link(*sources):
    return link_modules([parse_mib(s) for s in sources])


# -- linking ------------------------------------------------------------


def test_marf_anchor(registry):
    assert registry.oid_of("marf") == Oid(MARF)


def test_bundled_set_is_nine_modules():
    assert len(load_mib_directory(bundled_mib_dir())) == 9


def test_duplicate_oid_rejected():
    with pytest.raises(DuplicateOid) as exc:
        _link(
            """
            M DEFINITIONS ::= BEGIN
            a OBJECT IDENTIFIER ::= { enterprises 7 }
            b OBJECT IDENTIFIER ::= { enterprises 7 }
            END
            """
        )
    assert exc.value.oid[-1] == 7


def test_self_referential_assignment_is_a_cycle():
    with pytest.raises(CycleDetected) as exc:
        _link("M DEFINITIONS ::= BEGIN\na OBJECT IDENTIFIER ::= { a 1 }\nEND\n")
    assert exc.value.names == ("a",)


def test_two_step_assignment_cycle():
    with pytest.raises(CycleDetected) as exc:
        _link(
            """
            M DEFINITIONS ::= BEGIN
            a OBJECT IDENTIFIER ::= { b 1 }
            b OBJECT IDENTIFIER ::= { a 1 }
            END
            """
        )
    assert set(exc.value.names) == {"a", "b"}


def test_unknown_parent_is_unresolved():
    with pytest.raises(UnresolvedImport) as exc:
        _link("M DEFINITIONS ::= BEGIN\na OBJECT IDENTIFIER ::= { nowhere 1 }\nEND\n")
    assert exc.value.symbol == "nowhere"


def test_import_of_unknown_symbol_rejected():
    with pytest.raises(UnresolvedImport):
        _link(
            """
            M DEFINITIONS ::= BEGIN
            IMPORTS noSuchThing FROM SNMPv2-SMI;
            a OBJECT IDENTIFIER ::= { enterprises 1 }
            END
            """
        )


def test_import_from_unknown_module_rejected():
    with pytest.raises(UnresolvedImport):
        _link(
            """
            M DEFINITIONS ::= BEGIN
            IMPORTS anything FROM NO-SUCH-MODULE;
            a OBJECT IDENTIFIER ::= { enterprises 1 }
            END
            """
        )


def test_cross_module_import_resolves():
    reg = _link(
        """
        BASE DEFINITIONS ::= BEGIN
        root OBJECT IDENTIFIER ::= { enterprises 1000 }
        END
        """,
        """
        LEAF DEFINITIONS ::= BEGIN
        IMPORTS root FROM BASE;
        leaf OBJECT IDENTIFIER ::= { root 2 }
        END
        """,
    )
    assert reg.oid_of("leaf") == Oid((1, 3, 6, 1, 4, 1, 1000, 2))


# -- canonical layout ---------------------------------------------------


@pytest.mark.parametrize(
    "name, tail",
    [
        ("marfMIB", (1,)),
        ("marfTypes", (1, 1)),
        ("marfStorage", (2,)),
        ("storageTable", (2, 1)),
        ("marfServices", (3,)),
        ("serviceNotifications", (3, 0)),
        ("serviceStatusChange", (3, 0, 1)),
        ("serviceTable", (3, 1)),
        ("serviceEntry", (3, 1, 1)),
        ("serviceIndex", (3, 1, 1, 1)),
        ("serviceName", (3, 1, 1, 2)),
        ("serviceType", (3, 1, 1, 3)),
        ("serviceStatus", (3, 1, 1, 4)),
        ("serviceUptime", (3, 1, 1, 5)),
        ("serviceInRequests", (3, 1, 1, 6)),
        ("serviceOutErrors", (3, 1, 1, 7)),
        ("sampleLoading", (4,)),
        ("sampleLoadingServiceTable", (4, 1)),
        ("iFormat", (4, 1, 1, 1)),
        ("adSampleLength", (4, 1, 1, 2)),
        ("preprocessing", (5,)),
        ("dSilenceThresholdMicro", (5, 1, 1, 1)),
        ("bRemoveNoise", (5, 1, 1, 2)),
        ("bRemoveSilence", (5, 1, 1, 3)),
        ("featureExtraction", (6,)),
        ("featureextractionServiceTable", (6, 1)),
        ("oFeatureSetSize", (6, 1, 1, 2)),
        ("lpcServiceTable", (6, 2)),
        ("iPoles", (6, 2, 1, 1)),
        ("iWindowLen", (6, 2, 1, 2)),
        ("classification", (7,)),
        ("classificationServiceTable", (7, 1)),
        ("oResultSetSize", (7, 1, 1, 2)),
        ("oResultSetTopId", (7, 1, 1, 3)),
        ("marfApps", (8,)),
        ("speakerIdentApp", (8, 1)),
        ("appTable", (8, 1, 1)),
        ("appRequests", (8, 1, 1, 1, 1)),
        ("appLastSpeakerId", (8, 1, 1, 1, 2)),
        ("appLastDistanceMicro", (8, 1, 1, 1, 3)),
    ],
)
def test_canonical_layout(registry, name, tail):
    assert registry.oid_of(name) == Oid(MARF + tail)


def test_name_of_column_instance(registry):
    assert registry.name_of(Oid(MARF + (3, 1, 1, 2, 1))) == "serviceName.1"


def test_oid_of_name_of_identity_on_all_registered(registry, tables):
    for name in registry.all_names():
        oid = registry.oid_of(name)
        assert registry.name_of(oid) == name
        assert registry.oid_of(registry.name_of(oid)) == oid


def test_unknown_and_ambiguous_names(registry):
    with pytest.raises(UnknownName):
        registry.oid_of("noSuchSymbol")
    with pytest.raises(AmbiguousName):
        registry.oid_of("adFeaturesLength")  # featureExtraction and classification
    assert registry.oid_of("MARF-classification.adFeaturesLength") == Oid(MARF + (7, 1, 1, 1))
    assert registry.name_of(Oid(MARF + (6, 1, 1, 1))) == "MARF-feature-extraction.adFeaturesLength"


def test_resolve_accepts_names_and_raw_oids(registry):
    assert registry.resolve("serviceName.1") == Oid(MARF + (3, 1, 1, 2, 1))
    assert registry.resolve("marf") == Oid(MARF)
    assert registry.resolve("1.3.6.1.4.1.28218.3.1") == Oid(MARF + (3, 1))


def test_textual_conventions_normalize(registry):
    assert registry.object_type("dSilenceThresholdMicro").syntax.kind == "integer"
    flag = registry.object_type("bRemoveNoise")
    assert flag.syntax.kind == "integer-enum"
    assert flag.syntax.labels == (("true", 1), ("false", 2))


# -- AUGMENTS resolution ------------------------------------------------


def test_double_chain_resolves_in_lenient_mode(tables):
    lpc = tables["lpcServiceTable"]
    assert lpc.entry_oid == Oid(MARF + (6, 2, 1))
    assert [c.name for c in lpc.effective_columns] == [
        "serviceIndex", "serviceName", "serviceType", "serviceStatus",
        "serviceUptime", "serviceInRequests", "serviceOutErrors",
        "adFeaturesLength", "oFeatureSetSize",
        "iPoles", "iWindowLen",
    ]
    assert lpc.augments_base == "featureextractionServiceEntry"
    assert [c.name for c in lpc.own_columns] == ["iPoles", "iWindowLen"]


def test_strict_mode_rejects_the_chain(registry):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SmiWarning)
        with pytest.raises(ChainedAugments) as exc:
            resolve_augments(registry, STRICT)
    assert exc.value.name == "lpcServiceEntry"
    assert exc.value.chain == (
        "lpcServiceEntry", "featureextractionServiceEntry", "serviceEntry"
    )


def test_table_level_augments_warns(registry):
    with pytest.warns(SmiWarning, match="featureextractionServiceTable"):
        resolve_augments(registry, LENIENT)


def test_index_columns_come_from_chain_base(registry, tables):
    service_index = registry.oid_of("serviceIndex")
    for name in (
        "sampleLoadingServiceTable",
        "preprocessingServiceTable",
        "featureextractionServiceTable",
        "lpcServiceTable",
        "classificationServiceTable",
    ):
        idx = tables[name].index_columns
        assert [c.name for c in idx] == ["serviceIndex"]
        assert idx[0].oid == service_index
    assert [c.name for c in tables["storageTable"].index_columns] == ["storageIndex"]
    assert [c.name for c in tables["appTable"].index_columns] == ["serviceIndex"]


def test_flattening_is_associative(tables):
    fe = tables["featureextractionServiceTable"]
    lpc = tables["lpcServiceTable"]
    assert lpc.effective_columns == fe.effective_columns + lpc.own_columns


def test_plain_table_effective_equals_own(tables):
    svc = tables["serviceTable"]
    assert svc.effective_columns == svc.own_columns
    assert len(svc.effective_columns) == 7


def test_augments_entry_oid_defaults_to_table_dot_one(tables):
    assert tables["sampleLoadingServiceTable"].entry_oid == Oid(MARF + (4, 1, 1))
    assert tables["preprocessingServiceTable"].entry_oid == Oid(MARF + (5, 1, 1))


def test_dangling_augments():
    reg = _link(
        """
        M DEFINITIONS ::= BEGIN
        fooTable OBJECT-TYPE
            SYNTAX SEQUENCE OF FooEntry
            MAX-ACCESS not-accessible
            STATUS current
            ::= { enterprises 1 }
        fooEntry OBJECT-TYPE
            SYNTAX FooEntry
            MAX-ACCESS not-accessible
            STATUS current
            AUGMENTS { missingEntry }
        FooEntry ::= SEQUENCE { fooThing INTEGER }
        END
        """
    )
    with pytest.raises(DanglingAugments) as exc:
        resolve_augments(reg)
    assert exc.value.target == "missingEntry"


def test_two_cycle_detected():
    reg = _link(
        """
        M DEFINITIONS ::= BEGIN
        aTable OBJECT-TYPE
            SYNTAX SEQUENCE OF AEntry
            MAX-ACCESS not-accessible
            STATUS current
            ::= { enterprises 1 }
        aEntry OBJECT-TYPE
            SYNTAX AEntry
            MAX-ACCESS not-accessible
            STATUS current
            AUGMENTS { bEntry }
        AEntry ::= SEQUENCE { aThing INTEGER }
        bTable OBJECT-TYPE
            SYNTAX SEQUENCE OF BEntry
            MAX-ACCESS not-accessible
            STATUS current
            ::= { enterprises 2 }
        bEntry OBJECT-TYPE
            SYNTAX BEntry
            MAX-ACCESS not-accessible
            STATUS current
            AUGMENTS { aEntry }
        BEntry ::= SEQUENCE { bThing INTEGER }
        END
        """
    )
    with pytest.raises(AugmentsCycle):
        resolve_augments(reg)


def test_bundled_fixpoint_through_printer():
    for mod in load_mib_directory(bundled_mib_dir()):
        assert parse_mib(module_to_text(mod)) == mod
