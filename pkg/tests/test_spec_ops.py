import itertools

import pytest

from msdtools import spec_ops
from msdtools.errors import LookupFailed, MergeConflict
from msdtools.spec_model import load_section, load_spec

EVIDENTIAL = """LANG-SECTION hr
CAT V
ATTR 1 Type
VAL m main
ATTR 2 VForm
VAL n infinitive
VAL e evidential
"""

CLASH = """LANG-SECTION hr
CAT V
ATTR 1 Type
VAL m main
ATTR 2 VForm
VAL n evidential
"""


def flags(spec, lang):
    return {
        (c.code, a.name, v.code)
        for c in spec.categories
        for a in c.attributes
        for v in a.values
        if lang in v.languages
    }


def test_split_formation_from_seed(spec):
    sec = spec_ops.split(spec, ["bg", "mk", "ru"], "zz")
    formation = sec.table("Q").attribute("Formation")
    assert [(v.code, v.name) for v in formation.values] == [("s", "simple"), ("c", "compound")]
    assert formation.position == 2


def test_split_slovene_particle_is_empty(spec):
    sec = spec_ops.split(spec, ["sl"], "hr")
    assert sec.table("Q").attributes == ()
    assert not sec.is_localised


def test_split_all_languages_covers_common_tables(spec):
    sec = spec_ops.split(spec, sorted(spec.languages), "zz")
    for cat in spec.categories:
        table = sec.table(cat.code)
        assert [a.name for a in table.attributes] == [a.name for a in cat.attributes]
        for la in table.attributes:
            assert [v.code for v in la.values] == [v.code for v in cat.attribute(la.name).values]


def test_split_errors(spec):
    with pytest.raises(LookupFailed):
        spec_ops.split(spec, ["xx"], "hr")
    with pytest.raises(MergeConflict):
        spec_ops.split(spec, ["sl"], "bg")


@pytest.mark.parametrize("size", [1, 2, 3, 5])
def test_split_merge_coherence(spec, size):
    for seeds in itertools.combinations(sorted(spec.languages), size):
        sec = spec_ops.split(spec, seeds, "zz")
        merged, warnings = spec_ops.merge(spec, sec)
        assert warnings == []
        assert flags(merged, "zz") == set().union(*(flags(spec, l) for l in seeds))
        for lang in spec.languages:
            assert flags(merged, lang) == flags(spec, lang)
        again, warnings = spec_ops.merge(merged, sec)
        assert warnings == [] and spec_ops.diff(merged, again) == []


def test_merge_adds_value(spec):
    before = {v.name for v in spec.category("V").attribute("VForm").values}
    merged, warnings = spec_ops.merge(spec, load_section(EVIDENTIAL))
    after = {v.name for v in merged.category("V").attribute("VForm").values}
    assert after - before == {"evidential"}
    assert [(w.kind, w.path) for w in warnings] == [("value-added", "V/VForm/e")]
    assert merged.category("V").attribute("VForm").value("e").languages == {"hr"}


def test_merge_code_clash(spec):
    with pytest.raises(MergeConflict):
        spec_ops.merge(spec, load_section(CLASH))


def test_merge_unknown_category(spec):
    with pytest.raises(MergeConflict):
        spec_ops.merge(spec, load_section("LANG-SECTION hr\nCAT Z\n"))


def test_merge_withdraws_unlisted_flags(spec):
    sec = load_section("LANG-SECTION en\nCAT X\nATTR 1 Type\nVAL f foreign\n")
    merged, warnings = spec_ops.merge(spec, sec)
    kinds = {(w.kind, w.path) for w in warnings}
    assert ("flag-removed", "X/Type/t") in kinds
    assert "en" not in merged.category("X").attribute("Type").value("t").languages


def test_diff_self_empty(spec):
    assert spec_ops.diff(spec, spec) == []


def test_diff_reports_merge_additions(spec):
    merged, warnings = spec_ops.merge(spec, load_section(EVIDENTIAL))
    changes = spec_ops.diff(spec, merged)
    added = {(c.kind, c.path) for c in changes if c.kind.endswith("-added") and not c.kind.startswith(("flag", "section", "language"))}
    assert added == {(w.kind, w.path) for w in warnings}
    assert {c.kind for c in changes} <= {"value-added", "flag-added", "language-added", "section-added"}


def test_diff_position_renumbering():
    a = load_spec("LANGUAGES en\nCATEGORY C Conjunction\nATTR 1 Type\nVAL c coordinating en\nATTR 2 Formation\nVAL s simple en\n")
    b = load_spec("LANGUAGES en\nCATEGORY C Conjunction\nATTR 1 Formation\nVAL s simple en\nATTR 2 Type\nVAL c coordinating en\n")
    changes = spec_ops.diff(a, b)
    assert {c.kind for c in changes} == {"position-changed"}
    assert sorted(c.line() for c in changes) == [
        "position-changed\tC/Formation\t2 -> 1",
        "position-changed\tC/Type\t1 -> 2",
    ]


def test_feature_library_golden(spec):
    libs = spec_ops.emit_feature_libraries(spec, "sl", ["Ncmsn", "Ncmsg"])
    fs = {s.id: " ".join("#" + r for r in s.feats) for s in libs.structures}
    assert fs["Ncmsn"] == "#N0. #N1.c #N2.m #N3.s #N4.n"
    assert fs["Ncmsg"] == "#N0. #N1.c #N2.m #N3.s #N4.g"
    assert [s.id for s in libs.structures] == ["Ncmsn", "Ncmsg"]
    ids = [f.id for f in libs.features]
    assert ids == ["N0.", "N1.c", "N2.m", "N3.s", "N4.n", "N4.g"]
    assert libs.features[0].name == "CATEGORY" and libs.features[0].value == "Noun"


def test_feature_library_xml(spec):
    xml = spec_ops.libraries_xml(spec_ops.emit_feature_libraries(spec, "sl", ["Ncmsn"]))
    assert '<f name="CATEGORY" xml:id="N0." xml:lang="en">' in xml
    assert '<fs xml:id="Ncmsn" xml:lang="en" feats="#N0. #N1.c #N2.m #N3.s #N4.n" />' in xml


def test_feature_library_empty(spec):
    libs = spec_ops.emit_feature_libraries(spec, "sl", [])
    assert libs.features == () and libs.structures == ()


def test_render_lists_categories_in_order(spec):
    text = spec_ops.render_report(spec).split("## Categories", 1)[1].split("\n## ", 1)[0]
    rows = [line.split("|")[1].strip() for line in text.splitlines() if line.startswith("| ") and "---" not in line]
    assert rows[1:] == [c.code for c in spec.categories]


def test_render_slovene_index_row(spec):
    text = spec_ops.render_report(spec, "sl")
    row = next(line for line in text.splitlines() if line.startswith("| Ncmsg "))
    assert "Somer" in row
    assert "Noun Type=common Gender=masculine Number=singular Case=genitive" in row
    assert "samostalnik vrsta=občno_ime spol=moški število=ednina sklon=rodilnik" in row
    assert "15945" in row and "2649" in row


def test_render_warnings_section():
    spec = load_spec(
        "LANGUAGES sl\nCATEGORY N Noun\nATTR 1 Type\nVAL c common sl\nVAL p proper sl\n"
        "LANG-SECTION sl\nCAT N samostalnik S\nATTR 1 Type vrsta\nVAL c common občno_ime o\nVAL p proper\n"
    )
    text = spec_ops.render_report(spec)
    assert "## Warnings" in text
    warnings = text.split("## Warnings", 1)[1]
    assert "section/sl/N/Type/p: value not localised" in warnings
