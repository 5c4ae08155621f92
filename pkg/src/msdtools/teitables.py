"""TEI ``table``/``row``/``cell`` import and export of specifications.

The common tables are ``table n="msd.cat"`` elements whose rows carry a
``role`` (``type``, ``attribute``, ``value``) and whose cells carry a role
(``position``, ``name``, ``code``, ``value``, ``lang``).  Language sections
are ``div type="section" select="xx"``; their cells are labelled with
``xml:lang``.  The MSD index is ``table n="msd.index"`` with ``row
role="msd"`` rows.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET

from .errors import SpecError
from .model import (
    CATEGORY_LABEL,
    AttrValue,
    Attribute,
    Category,
    LanguageSection,
    LocalAttribute,
    LocalCategory,
    LocalValue,
    MsdIndexEntry,
    Specification,
)
from .tabular import LANG_RE

XML_LANG = "{http://www.w3.org/XML/1998/namespace}lang"
XML_ID = "{http://www.w3.org/XML/1998/namespace}id"


def local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1] if isinstance(tag, str) else ""


def _children(el, name):
    return [c for c in el if local(c.tag) == name]


def _text(el) -> str:
    return " ".join("".join(el.itertext()).split())


def _cells(row, role=None, lang=None):
    out = []
    for c in _children(row, "cell"):
        if role is not None and c.get("role") != role:
            continue
        if lang is not None and (c.get(XML_LANG) or "en") != lang:
            continue
        out.append(c)
    return out


def _one(row, role, where, lang=None, required=True):
    cells = _cells(row, role, lang)
    if not cells:
        if required:
            raise SpecError(f"row lacks a cell with role={role!r}" + (f" xml:lang={lang!r}" if lang else ""), where)
        return None
    return _text(cells[0])


def _where(el, hint):
    return f"{hint} <{local(el.tag)} {' '.join(f'{k}={v!r}' for k, v in el.attrib.items() if k != XML_LANG)}>"


def _position(text, where):
    if not text.isdigit():
        raise SpecError(f"non-numeric position cell {text!r}", where)
    return int(text)


def _lang(code, where, declared):
    code = code.strip().lower()
    if not LANG_RE.match(code):
        raise SpecError(f"malformed language code {code!r}", where)
    if declared is not None and code not in declared:
        raise SpecError(f"unknown language code {code!r}", where)
    return code


def _value_table(cell):
    tables = _children(cell, "table")
    return _children(tables[0], "row") if tables else []


# --- common tables ----------------------------------------------------------


def parse_attribute_row(row, where="", declared=None) -> Attribute:
    """Parse a common-table ``row role="attribute"`` element."""
    if row.get("role") != "attribute":
        raise SpecError(f"expected row role='attribute', got {row.get('role')!r}", where)
    pos = _position(_one(row, "position", where), where)
    name = _one(row, "name", where)
    nested = [c for c in _cells(row) if c.get("role") is None]
    values = []
    codes = set()
    for vrow in _value_table(nested[0]) if nested else []:
        vwhere = _where(vrow, where)
        if vrow.get("role") != "value":
            raise SpecError(f"unexpected row role {vrow.get('role')!r} in value table", vwhere)
        vname = _one(vrow, "name", vwhere)
        code = _one(vrow, "code", vwhere)
        if len(code) != 1 or code == "-":
            raise SpecError(f"bad value code {code!r}", vwhere)
        if code in codes:
            raise SpecError(f"duplicate value code {code!r}", vwhere)
        codes.add(code)
        langs = frozenset(_lang(_text(c), vwhere, declared) for c in _cells(vrow, "lang"))
        if not langs:
            raise SpecError("value flagged for no language", vwhere)
        values.append(AttrValue(vname, code, langs))
    return Attribute(name, pos, tuple(values))


def _parse_common_table(table, where, declared) -> Category:
    code = name = None
    attrs = []
    for row in _children(table, "row"):
        rwhere = _where(row, where)
        role = row.get("role")
        if role == "type":
            name = _one(row, "value", rwhere)
            code = _one(row, "code", rwhere)
        elif role == "attribute":
            attrs.append(parse_attribute_row(row, rwhere, declared))
        else:
            raise SpecError(f"unknown row role {role!r}", rwhere)
    if code is None:
        raise SpecError("category table lacks a row role='type'", where)
    if not (len(code) == 1 and code.isupper()):
        raise SpecError(f"category code must be one uppercase letter, got {code!r}", where)
    positions = [a.common_position for a in attrs]
    if len(set(positions)) != len(positions):
        raise SpecError(f"duplicate attribute positions in {code}", where)
    return Category(code, name, tuple(sorted(attrs, key=lambda a: a.common_position)))


# --- language sections ------------------------------------------------------


def _parse_local_table(table, lang, where) -> LocalCategory:
    # English is the reference language; an English section carries no localisation.
    native = lang if lang != "en" else "-"
    code = lname = lcode = None
    attrs = []
    for row in _children(table, "row"):
        rwhere = _where(row, where)
        role = row.get("role")
        if role == "type":
            code = _one(row, "code", rwhere, lang="en")
            lname = _one(row, "value", rwhere, lang=native, required=False)
            lcode = _one(row, "code", rwhere, lang=native, required=False)
        elif role == "attribute":
            pos = _position(_one(row, "position", rwhere), rwhere)
            name = _one(row, "name", rwhere, lang="en")
            aname = _one(row, "name", rwhere, lang=native, required=False)
            values = []
            nested = [c for c in _cells(row) if c.get("role") is None]
            for vrow in _value_table(nested[0]) if nested else []:
                vwhere = _where(vrow, rwhere)
                values.append(
                    LocalValue(
                        _one(vrow, "code", vwhere, lang="en"),
                        _one(vrow, "name", vwhere, lang="en"),
                        _one(vrow, "name", vwhere, lang=native, required=False),
                        _one(vrow, "code", vwhere, lang=native, required=False),
                    )
                )
            attrs.append(LocalAttribute(pos, name, aname, tuple(values)))
        else:
            raise SpecError(f"unknown row role {role!r}", rwhere)
    if code is None:
        raise SpecError("section table lacks a row role='type'", where)
    positions = [a.position for a in attrs]
    if len(set(positions)) != len(positions):
        raise SpecError(f"duplicate particular positions in {code}", where)
    return LocalCategory(code, lname, lcode, tuple(sorted(attrs, key=lambda a: a.position)))


def _parse_index(table, lang, where) -> tuple:
    entries = []
    for row in _children(table, "row"):
        rwhere = _where(row, where)
        if row.get("role") != "msd":
            raise SpecError(f"unknown row role {row.get('role')!r} in MSD index", rwhere)
        plain = [_text(c) for c in _cells(row) if c.get("role") is None]
        plain += [""] * (3 - len(plain))
        counts = []
        for text in plain[:2]:
            if text and not text.isdigit():
                raise SpecError(f"non-numeric count cell {text!r}", rwhere)
            counts.append(int(text) if text else None)
        examples = []
        for item in plain[2].split(","):
            item = item.strip()
            if item:
                wf, _, lemma = item.partition("/")
                examples.append((wf, lemma))
        entries.append(
            MsdIndexEntry(
                msd=_one(row, "msd", rwhere, lang="en"),
                verbose_en=_one(row, "verbose", rwhere, lang="en", required=False) or "",
                msd_localised=_one(row, "msd", rwhere, lang=lang, required=False) if lang != "en" else None,
                verbose_localised=_one(row, "verbose", rwhere, lang=lang, required=False) if lang != "en" else None,
                token_count=counts[0],
                type_count=counts[1],
                examples=tuple(examples),
            )
        )
    return tuple(entries)


def parse_section(div, declared=None, where="") -> LanguageSection:
    lang = _lang(div.get("select") or "", _where(div, where), declared)
    cats = []
    index = None
    constraints = []
    for el in div.iter():
        name = local(el.tag)
        if name == "table" and el.get("n") == "msd.cat":
            cats.append(_parse_local_table(el, lang, _where(el, where)))
        elif name == "table" and el.get("n") == "msd.index":
            index = (index or ()) + _parse_index(el, lang, _where(el, where))
        elif name == "list" and el.get("type") == "constraints":
            constraints.extend(_text(i) for i in _children(el, "item"))
    codes = [c.code for c in cats]
    if len(set(codes)) != len(codes):
        raise SpecError("duplicate category in section", _where(div, where))
    return LanguageSection(lang, tuple(cats), index, tuple(constraints))


def load_tei(data, source: str = "<spec>") -> Specification:
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        raise SpecError(f"malformed XML: {exc}", source) from None
    declared = None
    usage = [el for el in root.iter() if local(el.tag) == "langUsage"]
    if usage:
        declared = {
            _lang(el.get("ident", ""), source, None) for el in usage[0].iter() if local(el.tag) == "language"
        }
    categories = []
    sections = {}
    section_divs = [el for el in root.iter() if local(el.tag) == "div" and el.get("type") == "section" and el.get("select")]
    in_section = {id(t) for d in section_divs for t in d.iter()}
    for el in root.iter():
        if local(el.tag) == "table" and el.get("n") == "msd.cat" and id(el) not in in_section:
            cat = _parse_common_table(el, _where(el, source), declared)
            if any(c.code == cat.code for c in categories):
                raise SpecError(f"duplicate category code {cat.code!r}", _where(el, source))
            categories.append(cat)
    for div in section_divs:
        sec = parse_section(div, declared, source)
        if sec.language in sections:
            raise SpecError(f"duplicate section for {sec.language!r}", _where(div, source))
        sections[sec.language] = sec
    if declared is None:
        declared = set(sections)
        for cat in categories:
            for a in cat.attributes:
                for v in a.values:
                    declared |= v.languages
    return Specification(tuple(categories), frozenset(declared), sections)


def load_section_tei(data, source: str = "<section>") -> LanguageSection:
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        raise SpecError(f"malformed XML: {exc}", source) from None
    divs = [el for el in root.iter() if local(el.tag) == "div" and el.get("type") == "section" and el.get("select")]
    if len(divs) != 1:
        raise SpecError("section file must contain exactly one div type='section'", source)
    return parse_section(divs[0], None, source)


# --- emission ---------------------------------------------------------------


def _cell(parent, role, text, lang=None):
    attrib = {}
    if role:
        attrib["role"] = role
    if lang:
        attrib[XML_LANG] = lang
    c = ET.SubElement(parent, "cell", attrib)
    c.text = text
    return c


def _common_table(parent, cat: Category):
    table = ET.SubElement(parent, "table", {"n": "msd.cat", XML_ID_ATTR: f"msd.cat.{cat.code}"})
    ET.SubElement(table, "head").text = f"Common specification for {cat.name}"
    row = ET.SubElement(table, "row", {"role": "type"})
    _cell(row, "position", "0")
    _cell(row, "name", CATEGORY_LABEL)
    _cell(row, "value", cat.name)
    _cell(row, "code", cat.code)
    for a in cat.attributes:
        row = ET.SubElement(table, "row", {"role": "attribute"})
        _cell(row, "position", str(a.common_position))
        _cell(row, "name", a.name)
        holder = _cell(row, None, None)
        vt = ET.SubElement(holder, "table")
        for v in a.values:
            vrow = ET.SubElement(vt, "row", {"role": "value"})
            _cell(vrow, "name", v.name)
            _cell(vrow, "code", v.code)
            for lang in sorted(v.languages):
                _cell(vrow, "lang", lang)


def _section_div(parent, sec: LanguageSection, spec=None):
    lang = sec.language
    div = ET.SubElement(parent, "div", {"type": "section", "select": lang, XML_ID_ATTR: f"msd.{lang}"})
    for c in sec.categories:
        name = spec.category(c.code).name if spec is not None and spec.has_category(c.code) else c.code
        table = ET.SubElement(div, "table", {"n": "msd.cat", "select": lang, XML_ID_ATTR: f"msd.cat.{c.code}-{lang}"})
        row = ET.SubElement(table, "row", {"role": "type"})
        _cell(row, "position", "0")
        if c.localised_name:
            _cell(row, "value", c.localised_name, lang)
        if c.localised_code:
            _cell(row, "code", c.localised_code, lang)
        _cell(row, "name", CATEGORY_LABEL, "en")
        _cell(row, "value", name, "en")
        _cell(row, "code", c.code, "en")
        for a in c.attributes:
            row = ET.SubElement(table, "row", {"role": "attribute"})
            _cell(row, "position", str(a.position))
            if a.localised_name:
                _cell(row, "name", a.localised_name, lang)
            _cell(row, "name", a.name, "en")
            holder = _cell(row, None, None)
            vt = ET.SubElement(holder, "table")
            for v in a.values:
                vrow = ET.SubElement(vt, "row", {"role": "value"})
                if v.localised_name:
                    _cell(vrow, "name", v.localised_name, lang)
                if v.localised_code:
                    _cell(vrow, "code", v.localised_code, lang)
                _cell(vrow, "name", v.name, "en")
                _cell(vrow, "code", v.code, "en")
    if sec.constraints:
        lst = ET.SubElement(div, "list", {"type": "constraints"})
        for text in sec.constraints:
            ET.SubElement(lst, "item").text = text
    if sec.msd_index is not None:
        table = ET.SubElement(div, "table", {"n": "msd.index", "select": lang})
        for e in sec.msd_index:
            index_row(table, e, lang)
    return div


def index_row(parent, e: MsdIndexEntry, lang: str):
    """Append one MSD index ``row role="msd"`` in the layout of the released index."""
    row = ET.SubElement(parent, "row", {"role": "msd"})
    _cell(row, "msd", e.msd, "en")
    if e.verbose_en:
        _cell(row, "verbose", e.verbose_en, "en")
    if e.msd_localised:
        _cell(row, "msd", e.msd_localised, lang)
    if e.verbose_localised:
        _cell(row, "verbose", e.verbose_localised, lang)
    _cell(row, None, "" if e.token_count is None else str(e.token_count))
    _cell(row, None, "" if e.type_count is None else str(e.type_count))
    _cell(row, None, ", ".join(f"{w}/{l}" for w, l in e.examples))
    return row


XML_ID_ATTR = XML_ID


def to_string(root) -> str:
    ET.indent(root, space=" ")
    return ET.tostring(root, encoding="unicode") + "\n"


def emit_tei(spec: Specification) -> str:
    root = ET.Element("div", {"type": "msd-specs"})
    usage = ET.SubElement(root, "langUsage")
    for lang in sorted(spec.languages):
        ET.SubElement(usage, "language", {"ident": lang})
    common = ET.SubElement(root, "div", {"type": "common"})
    for cat in spec.categories:
        _common_table(common, cat)
    for lang in sorted(spec.particular_sections):
        _section_div(root, spec.particular_sections[lang], spec)
    return to_string(root)


def emit_section_tei(sec: LanguageSection, spec=None) -> str:
    root = ET.Element("div", {"type": "msd-section"})
    _section_div(root, sec, spec)
    return to_string(root)
