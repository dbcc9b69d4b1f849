import json

import pytest

from hypexp.fingerprint import (CANDIDATE_FILES, InvariantViolation, MissingPowerMap,
                                SchemaError, data_dir, find_classes_matching,
                                identify, load_candidates, load_table,
                                trace_sequence_of_class)

PAPER_SEQ = [0, -2, 0, 2, 0, -2, 7]


@pytest.fixture(scope="module")
def tables():
    return {t.group_name: t for t in load_candidates()}


def test_all_bundled_tables_load(tables):
    assert set(tables) == {"A24", "S24", "M24", "PSL2(23)", "PGL2(23)", "Co3", "Co2"}
    for t in tables.values():
        ident = [c for c in t.classes if c.order == 1]
        assert len(ident) == 1 and ident[0].chi == 23


def test_orthogonality_asserted_at_load(tables):
    # the loader enforces sum(size * chi) = 0; recheck here explicitly
    for t in tables.values():
        assert sum(c.size * c.chi for c in t.classes) == 0
        assert sum(c.size for c in t.classes) == t.group_order


def test_schema_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"group": "X", "group_order": 1, "degree": 23,
                               "classes": [{"name": "1a", "order": 1, "size": 1,
                                            "chi": 23}], "aliases": {}}))
    with pytest.raises(SchemaError, match="power_maps"):
        load_table(bad)
    bad.write_text(json.dumps({"group": "X"}))
    with pytest.raises(SchemaError):
        load_table(bad)


def test_invariant_violation_detected(tmp_path):
    table = json.loads((data_dir() / "psl2_23.json").read_text())
    table["classes"][1]["size"] += 1
    bad = tmp_path / "tampered.json"
    bad.write_text(json.dumps(table))
    with pytest.raises(InvariantViolation):
        load_table(bad)


def test_power_map_composition_consistency(tables):
    # (c^2)^2 equals the 4th power; 2-then-3 equals 3-then-2
    for t in tables.values():
        by_name = {c.name: c for c in t.classes}
        for c in t.classes:
            c2 = by_name[c.power_maps[2]]
            c4a = by_name[c2.power_maps[2]]
            seq = trace_sequence_of_class(t, c, 4)
            assert seq[3] == c4a.chi
            c6a = by_name[c2.power_maps[3]]
            c3 = by_name[c.power_maps[3]]
            c6b = by_name[c3.power_maps[2]]
            assert c6a.chi == c6b.chi and c6a.order == c6b.order


def test_identity_trace_sequence(tables):
    t = tables["Co2"]
    ident = next(c for c in t.classes if c.order == 1)
    assert trace_sequence_of_class(t, ident, 7) == [23] * 7


def test_involution_trace_sequences_alternate(tables):
    t = tables["Co2"]
    for c in t.classes:
        if c.order == 2:
            seq = trace_sequence_of_class(t, c, 6)
            assert seq == [c.chi, 23, c.chi, 23, c.chi, 23]


def test_missing_power_map(tables):
    with pytest.raises(MissingPowerMap):
        trace_sequence_of_class(tables["Co2"], tables["Co2"].classes[0], 11)


def test_co3_has_unique_trace7_class(tables):
    co3 = tables["Co3"]
    sevens = [c for c in co3.classes if c.chi == 7]
    assert len(sevens) == 1 and sevens[0].order == 2


def test_co3_paper_aliases(tables):
    co3 = tables["Co3"]
    assert co3.resolve_alias("2").chi == 7
    assert co3.resolve_alias("16").chi == 2
    assert co3.resolve_alias("29").chi == 0
    assert co3.resolve_alias("29").order == 14
    assert co3.resolve_alias("16").order == 7


def test_co3_class29_elimination_detail(tables):
    # the square of the paper's class 29 is class 16, whose trace is 2, not -2
    co3 = tables["Co3"]
    c29 = co3.resolve_alias("29")
    seq = trace_sequence_of_class(co3, c29, 7)
    assert seq[0] == 0 and seq[6] == 7
    assert seq[1] == 2          # the decisive mismatch with the paper sequence
    assert co3.resolve_alias("29").power_maps[2] == co3.aliases["16"]


def test_co3_gamma7_candidates(tables):
    # classes whose 7th power lands on the trace-7 class: exactly the
    # involution itself and the order-14 class
    co3 = tables["Co3"]
    by_name = {c.name: c for c in co3.classes}
    target = co3.resolve_alias("2").name
    hits = [c for c in co3.classes
            if by_name[c.power_maps[7]].name == target and c.order in (2, 14)]
    assert {c.order for c in hits} == {2, 14}
    all_hits = [c for c in co3.classes if by_name[c.power_maps[7]].chi == 7]
    assert {c.order for c in all_hits} == {2, 14}


def test_find_classes_matching(tables):
    assert find_classes_matching(tables["Co3"], PAPER_SEQ) == []
    hits = find_classes_matching(tables["Co2"], PAPER_SEQ)
    assert hits and all(c.order == 28 for c in hits)
    # all-23 sequence matches exactly the identity
    for t in tables.values():
        ids = find_classes_matching(t, [23] * 7)
        assert [c.order for c in ids] == [1]


def test_min_value_rule_for_permutation_groups(tables):
    for g in ("A24", "S24", "M24", "PSL2(23)", "PGL2(23)"):
        assert tables[g].min_chi == -1


def test_identify_paper_sequence(tables):
    report = identify(tables.values(), PAPER_SEQ)
    assert report.admitted_groups == ["Co2"]
    for g in ("A24", "S24", "M24", "PSL2(23)", "PGL2(23)"):
        assert "min-value rule" in report.verdicts[g].reason
    assert not report.verdicts["Co3"].admits
    assert "fails at power 2" in report.verdicts["Co3"].reason
    parsed = json.loads(report.to_json())
    assert parsed["admitted_groups"] == ["Co2"]


def test_identify_all_23s_admits_everywhere(tables):
    report = identify(tables.values(), [23] * 7)
    assert set(report.admitted_groups) == set(tables)
