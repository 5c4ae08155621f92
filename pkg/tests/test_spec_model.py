import xml.etree.ElementTree as ET

import pytest

from msdtools import teitables
from msdtools.errors import LookupFailed, SpecError
from msdtools.model import Attribute, Category
from msdtools.spec_model import (
    COMMON,
    PARTICULAR,
    check_spec,
    emit_section,
    emit_spec,
    load_section,
    load_spec,
    load_spec_file,
    lookup,
    spec_stats,
)

FORMATION_ROW = """<row role="attribute">
 <cell role="position">2</cell>
 <cell role="name">Formation</cell>
 <cell>
  <table>
   <row role="value">
    <cell role="name">simple</cell>
    <cell role="code">s</cell>
    <cell role="lang">bg</cell>
    <cell role="lang">mk</cell>
    <cell role="lang">ru</cell>
   </row>
   <row role="value">
    <cell role="name">compound</cell>
    <cell role="code">c</cell>
    <cell role="lang">bg</cell>
    <cell role="lang">mk</cell>
    <cell role="lang">ru</cell>
   </row>
  </table>
 </cell>
</row>"""

PARTICLE_SECTION = """<div type="section" select="sl" xml:id="msd.Q-sl">
  <head>Slovene Particle</head>
  <table n="msd.cat" select="sl" xml:id="msd.cat.Q-sl">
    <head>Slovene Specification for Particle</head>
    <row role="type">
      <cell role="position">0</cell>
      <cell role="name"  xml:lang="sl">besedna_vrsta</cell>
      <cell role="value" xml:lang="sl">členek</cell>
      <cell role="code"  xml:lang="sl">L</cell>
      <cell role="name"  xml:lang="en">CATEGORY</cell>
      <cell role="value" xml:lang="en">Particle</cell>
      <cell role="code"  xml:lang="en">Q</cell>
    </row>
  </table>
</div>"""

DEGENERATE = "LANGUAGES xx\nCATEGORY I Interjection\nLANG-SECTION xx\nCAT I\n"


def test_attribute_row_from_tei():
    attr = teitables.parse_attribute_row(ET.fromstring(FORMATION_ROW))
    assert attr.name == "Formation"
    assert attr.common_position == 2
    assert [(v.name, v.code) for v in attr.values] == [("simple", "s"), ("compound", "c")]
    assert all(v.languages == {"bg", "mk", "ru"} for v in attr.values)


def test_particle_section_without_attributes():
    sec = load_section(PARTICLE_SECTION, "tei")
    table = sec.table("Q")
    assert sec.language == "sl"
    assert table.localised_code == "L"
    assert table.localised_name == "členek"
    assert table.attributes == ()


def test_fixture_particle_has_no_slovene_attributes(spec):
    assert spec.section("sl").table("Q").attributes == ()
    assert spec.positions("sl", "Q", PARTICULAR) == {}


def test_degenerate_spec():
    spec = load_spec(DEGENERATE)
    cat = spec.category("I")
    assert cat.attributes == ()
    assert [(s.attributes, s.values, s.languages) for s in spec_stats(spec)] == [(0, 0, 1)]
    assert check_spec(spec).ok


def test_stats_residual_sixteen_languages(data):
    spec = load_spec_file(data / "residual16.tab")
    (x,) = spec_stats(spec)
    assert (x.code, x.attributes, x.values, x.languages) == ("X", 1, 3, 16)


def test_stats_fixture_hand_counted(spec):
    stats = {s.code: (s.attributes, s.values, s.languages) for s in spec_stats(spec)}
    assert stats["N"] == (6, 19, 5)
    assert stats["V"] == (14, 40, 5)
    assert stats["Q"] == (2, 5, 4)  # bg mk ru by flags, sl by its section
    assert stats["I"] == (0, 0, 2)
    assert stats["X"] == (1, 3, 5)


def test_lookup(spec):
    assert lookup(spec, None, "Q", 2, COMMON).name == "Formation"
    assert lookup(spec, "sl", "N", 3, PARTICULAR).name == "Number"
    assert lookup(spec, "en", "N", 2, PARTICULAR).name == "Number"
    for ordering in (COMMON, PARTICULAR):
        cat = lookup(spec, "sl", "V", 0, ordering)
        assert isinstance(cat, Category) and cat.code == "V"
    assert isinstance(lookup(spec, "sl", "V", 2, PARTICULAR), Attribute)


def test_lookup_failures(spec):
    with pytest.raises(LookupFailed):
        lookup(spec, None, "Z", 1)
    with pytest.raises(LookupFailed):
        lookup(spec, None, "N", 9)


def test_fixture_is_consistent(spec):
    assert check_spec(spec).findings == []


@pytest.mark.parametrize("fmt", ["tabular", "tei"])
def test_round_trip(spec, fmt):
    text = emit_spec(spec, fmt)
    again = load_spec(text, fmt)
    assert again == spec
    assert emit_spec(again, fmt) == text


@pytest.mark.parametrize("fmt", ["tabular", "tei"])
def test_section_round_trip(spec, fmt):
    sec = spec.section("sl")
    assert load_section(emit_section(sec, fmt, spec), fmt) == sec


def test_load_errors_carry_line_numbers():
    with pytest.raises(SpecError, match="bad.tab:3"):
        load_spec("CATEGORY N Noun\nATTR 1 Type\nVAL c\n", name="bad.tab")


def test_value_outside_declared_languages():
    with pytest.raises(SpecError):
        load_spec("LANGUAGES en\nCATEGORY N Noun\nATTR 1 Type\nVAL c common en,zz\n")


def _codes(text, severity="error"):
    return check_spec(load_spec(text)).codes(severity)


def test_check_duplicate_and_gap():
    base = "LANGUAGES en\nCATEGORY N Noun\nATTR 1 Type\nVAL c common en\n"
    with pytest.raises(SpecError, match="duplicate position"):
        load_spec(base + "ATTR 1 Gender\nVAL m masculine en\n")
    assert "position-gap" in _codes(base + "ATTR 3 Gender\nVAL m masculine en\n")


def test_check_section_value_not_flagged():
    text = (
        "LANGUAGES en sl\nCATEGORY N Noun\nATTR 1 Type\nVAL c common en\n"
        "LANG-SECTION sl\nCAT N\nATTR 1 Type\nVAL c common\n"
    )
    assert "unflagged-value" in _codes(text)


def test_check_unlocalised_warning():
    text = (
        "LANGUAGES sl\nCATEGORY N Noun\nATTR 1 Type\nVAL c common sl\nVAL p proper sl\n"
        "LANG-SECTION sl\nCAT N samostalnik S\nATTR 1 Type vrsta\nVAL c common občno_ime o\nVAL p proper\n"
    )
    assert "unlocalised" in _codes(text, "warning")
