"""Authoring operations over specifications.

* :func:`split` builds a template section for a new language from the
  features of similar (seed) languages.
* :func:`merge` folds a language section back into the common tables and
  reports every structural change it had to make.
* :func:`diff` compares two specifications.
* :func:`emit_feature_libraries` derives TEI feature / feature-value
  libraries for a list of MSDs.
* :func:`render_report` produces a plain markdown document with attribute,
  value and MSD indexes.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass, replace
from typing import Iterable, Optional

from . import codec
from .errors import LookupFailed, MergeConflict, MsdError
from .model import (
    CATEGORY_LABEL,
    COMMON,
    PARTICULAR,
    AttrValue,
    Attribute,
    LanguageSection,
    LocalAttribute,
    LocalCategory,
    LocalValue,
    Specification,
    check_spec,
    spec_stats,
)


@dataclass(frozen=True)
class Change:
    kind: str
    path: str
    detail: str = ""

    def line(self) -> str:
        return f"{self.kind}\t{self.path}\t{self.detail}"


def changes_text(changes: Iterable[Change]) -> str:
    return "".join(c.line() + "\n" for c in changes)


# --- split -------------------------------------------------------------------


def split(spec: Specification, seed_languages, new_language: str) -> LanguageSection:
    """Template section for ``new_language`` holding every feature of the seeds."""
    seeds = {s.lower() for s in seed_languages}
    new_language = new_language.lower()
    unknown = sorted(seeds - spec.languages)
    if unknown:
        raise LookupFailed(f"unknown seed language(s): {', '.join(unknown)}")
    if new_language in spec.languages:
        raise MergeConflict(f"language {new_language!r} already present in the specification")
    tables = []
    for cat in spec.categories:
        if not (spec.category_languages(cat.code) & seeds):
            continue
        attrs = []
        for attr in cat.attributes:
            values = tuple(LocalValue(v.code, v.name) for v in attr.values if v.languages & seeds)
            if values:
                attrs.append(LocalAttribute(len(attrs) + 1, attr.name, None, values))
        tables.append(LocalCategory(cat.code, None, None, tuple(attrs)))
    return LanguageSection(new_language, tuple(tables))


# --- merge -------------------------------------------------------------------


def merge(spec: Specification, section: LanguageSection):
    """Fold a language section into the common tables.

    Returns ``(new_spec, warnings)``.  Existing attribute-value pairs gain the
    language flag; attributes and values unknown to the common tables are
    added, and flags the section no longer lists are withdrawn, each with a
    warning.  A value code bound to a different value name raises
    :class:`MergeConflict`.
    """
    lang = section.language
    warnings = []
    for table in section.categories:
        if not spec.has_category(table.code):
            raise MergeConflict(f"section/{lang}: category {table.code!r} not in common tables")
    categories = []
    for cat in spec.categories:
        table = section.table(cat.code)
        listed = {}
        skipped = set()
        new_attrs = []
        if table is not None:
            for la in table.attributes:
                attr = cat.attribute(la.name)
                path = f"{cat.code}/{la.name}"
                if attr is None:
                    folded = [a for a in cat.attributes if a.name.lower() == la.name.lower()]
                    if folded:
                        warnings.append(Change("case-mismatch", path, f"common tables spell it {folded[0].name!r}; not merged"))
                        skipped.add(folded[0].name)
                        continue
                    new_attrs.append(la)
                    continue
                listed[attr.name] = _merge_values(attr, la, lang, path, warnings)
        attrs = []
        for attr in cat.attributes:
            path = f"{cat.code}/{attr.name}"
            if attr.name in skipped:
                attrs.append(attr)
                continue
            accepted, added = listed.get(attr.name, (set(), []))
            values = []
            for v in attr.values:
                langs = set(v.languages)
                if v.code in accepted:
                    langs.add(lang)
                elif lang in langs:
                    langs.discard(lang)
                    warnings.append(Change("flag-removed", f"{path}/{v.code}", lang))
                if not langs:
                    warnings.append(Change("value-removed", f"{path}/{v.code}", v.name))
                    continue
                values.append(AttrValue(v.name, v.code, frozenset(langs)))
            values.extend(added)
            if not values:
                warnings.append(Change("attribute-removed", path, f"position {attr.common_position}"))
                continue
            attrs.append(Attribute(attr.name, attr.common_position, tuple(values)))
        next_pos = cat.max_position
        for la in new_attrs:
            next_pos += 1
            path = f"{cat.code}/{la.name}"
            warnings.append(Change("attribute-added", path, f"position {next_pos}"))
            values = []
            for lv in la.values:
                warnings.append(Change("value-added", f"{path}/{lv.code}", lv.name))
                values.append(AttrValue(lv.name, lv.code, frozenset({lang})))
            attrs.append(Attribute(la.name, next_pos, tuple(values)))
        categories.append(replace(cat, attributes=tuple(attrs)))
    sections = dict(spec.particular_sections)
    sections[lang] = section
    merged = Specification(tuple(categories), spec.languages | {lang}, sections)
    return merged, warnings


def _merge_values(attr, la, lang, path, warnings):
    accepted = set()
    added = []
    for lv in la.values:
        vpath = f"{path}/{lv.code}"
        common = attr.value(lv.code)
        if common is not None:
            if common.name == lv.name:
                accepted.add(lv.code)
            elif common.name.lower() == lv.name.lower():
                warnings.append(Change("case-mismatch", vpath, f"common tables spell it {common.name!r}; not merged"))
                if lang in common.languages:
                    accepted.add(lv.code)
            else:
                raise MergeConflict(f"{vpath}: code {lv.code!r} is {common.name!r} in the common tables, {lv.name!r} in section {lang}")
            continue
        same_name = attr.value_named(lv.name)
        if same_name is not None:
            raise MergeConflict(f"{vpath}: value {lv.name!r} already has code {same_name.code!r}")
        warnings.append(Change("value-added", vpath, lv.name))
        added.append(AttrValue(lv.name, lv.code, frozenset({lang})))
    return accepted, added


# --- diff --------------------------------------------------------------------


def diff(a: Specification, b: Specification) -> list:
    """Structural differences from ``a`` to ``b`` as :class:`Change` records."""
    out = []
    for lang in sorted(a.languages - b.languages):
        out.append(Change("language-removed", lang))
    for lang in sorted(b.languages - a.languages):
        out.append(Change("language-added", lang))
    b_codes = {c.code for c in b.categories}
    for cat in a.categories:
        if cat.code not in b_codes:
            out.append(Change("category-removed", cat.code, cat.name))
            continue
        other = b.category(cat.code)
        if other.name != cat.name:
            out.append(Change("category-renamed", cat.code, f"{cat.name} -> {other.name}"))
        _diff_attributes(cat, other, out)
    a_codes = {c.code for c in a.categories}
    for cat in b.categories:
        if cat.code not in a_codes:
            out.append(Change("category-added", cat.code, cat.name))
            for attr in cat.attributes:
                out.append(Change("attribute-added", f"{cat.code}/{attr.name}", f"position {attr.common_position}"))
                for v in attr.values:
                    out.append(Change("value-added", f"{cat.code}/{attr.name}/{v.code}", v.name))
    if [c.code for c in a.categories if c.code in b_codes] != [c.code for c in b.categories if c.code in a_codes]:
        out.append(Change("category-order", "", " ".join(c.code for c in b.categories)))
    for lang in sorted(set(a.particular_sections) | set(b.particular_sections)):
        sa = a.particular_sections.get(lang)
        sb = b.particular_sections.get(lang)
        path = f"section/{lang}"
        if sb is None:
            out.append(Change("section-removed", path))
        elif sa is None:
            out.append(Change("section-added", path))
        elif sa != sb:
            _diff_sections(sa, sb, path, out)
    return out


def _diff_attributes(cat, other, out):
    for attr in cat.attributes:
        path = f"{cat.code}/{attr.name}"
        o = other.attribute(attr.name)
        if o is None:
            out.append(Change("attribute-removed", path, f"position {attr.common_position}"))
            continue
        if o.common_position != attr.common_position:
            out.append(Change("position-changed", path, f"{attr.common_position} -> {o.common_position}"))
        for v in attr.values:
            vpath = f"{path}/{v.code}"
            ov = o.value(v.code)
            if ov is None:
                out.append(Change("value-removed", vpath, v.name))
                continue
            if ov.name != v.name:
                out.append(Change("value-renamed", vpath, f"{v.name} -> {ov.name}"))
            for lang in sorted(v.languages - ov.languages):
                out.append(Change("flag-removed", vpath, lang))
            for lang in sorted(ov.languages - v.languages):
                out.append(Change("flag-added", vpath, lang))
        for ov in o.values:
            if attr.value(ov.code) is None:
                out.append(Change("value-added", f"{path}/{ov.code}", ov.name))
        if [v.code for v in attr.values if o.value(v.code)] != [v.code for v in o.values if attr.value(v.code)]:
            out.append(Change("value-order", path, " ".join(v.code for v in o.values)))
    for o in other.attributes:
        if cat.attribute(o.name) is None:
            out.append(Change("attribute-added", f"{cat.code}/{o.name}", f"position {o.common_position}"))
            for v in o.values:
                out.append(Change("value-added", f"{cat.code}/{o.name}/{v.code}", v.name))


def _diff_sections(sa, sb, path, out):
    for ta in sa.categories:
        tb = sb.table(ta.code)
        cpath = f"{path}/{ta.code}"
        if tb is None:
            out.append(Change("section-category-removed", cpath))
            continue
        if (ta.localised_name, ta.localised_code) != (tb.localised_name, tb.localised_code):
            out.append(Change("localisation-changed", cpath, f"{ta.localised_code} -> {tb.localised_code}"))
        for la in ta.attributes:
            lb = tb.attribute(la.name)
            apath = f"{cpath}/{la.name}"
            if lb is None:
                out.append(Change("section-attribute-removed", apath))
                continue
            if la.position != lb.position:
                out.append(Change("position-changed", apath, f"{la.position} -> {lb.position}"))
            if la.localised_name != lb.localised_name:
                out.append(Change("localisation-changed", apath, f"{la.localised_name} -> {lb.localised_name}"))
            if la.values != lb.values:
                codes_a = {v.code: v for v in la.values}
                codes_b = {v.code: v for v in lb.values}
                for code in codes_a.keys() - codes_b.keys():
                    out.append(Change("section-value-removed", f"{apath}/{code}"))
                for code in codes_b.keys() - codes_a.keys():
                    out.append(Change("section-value-added", f"{apath}/{code}"))
                for code in sorted(codes_a.keys() & codes_b.keys()):
                    if codes_a[code] != codes_b[code]:
                        out.append(Change("localisation-changed", f"{apath}/{code}",
                                          f"{codes_a[code].localised_code} -> {codes_b[code].localised_code}"))
        for lb in tb.attributes:
            if ta.attribute(lb.name) is None:
                out.append(Change("section-attribute-added", f"{cpath}/{lb.name}", f"position {lb.position}"))
    for tb in sb.categories:
        if sa.table(tb.code) is None:
            out.append(Change("section-category-added", f"{path}/{tb.code}"))
    if sa.constraints != sb.constraints:
        out.append(Change("constraints-changed", path, f"{len(sa.constraints)} -> {len(sb.constraints)}"))
    if sa.msd_index != sb.msd_index:
        na = len(sa.msd_index or ())
        nb = len(sb.msd_index or ())
        out.append(Change("index-changed", path, f"{na} -> {nb} entries"))


# --- feature libraries ---------------------------------------------------------


@dataclass(frozen=True)
class FeatureDef:
    id: str
    name: str
    value: str
    lang: str = "en"


@dataclass(frozen=True)
class FsDef:
    id: str
    feats: tuple
    lang: str = "en"


@dataclass(frozen=True)
class FeatureLibraries:
    features: tuple = ()
    structures: tuple = ()

    def feature_ids(self) -> set:
        return {f.id for f in self.features}

    def fs(self, ident: str) -> Optional[FsDef]:
        for s in self.structures:
            if s.id == ident:
                return s
        return None


def feature_id(category_code: str, position: int, value_code: str = "") -> str:
    return f"{category_code}{position}.{value_code}"


def default_ordering(spec: Specification, language) -> str:
    return PARTICULAR if language is not None and spec.has_section(language) else COMMON


def emit_feature_libraries(spec: Specification, language, msds: Iterable[str], ordering=None) -> FeatureLibraries:
    """Feature and feature-value libraries for the distinct MSDs given.

    Identifiers are ``<Cat><position>.<code>`` with ``<Cat>0.`` for the
    category; each MSD's structure lists its features in position order.
    """
    if ordering is None:
        ordering = default_ordering(spec, language)
    features = {}
    structures = {}
    for text in msds:
        if text in structures:
            continue
        msd = codec.Msd(text, language, ordering)
        fs = codec.decode(msd, spec)
        cat = spec.category(fs.category_code)
        positions = spec.positions(language, cat.code, ordering)
        cat_id = feature_id(cat.code, 0)
        refs = [cat_id]
        features[cat_id] = ((spec.category_rank(cat.code), 0, 0), FeatureDef(cat_id, CATEGORY_LABEL, cat.name))
        for pos in sorted(positions):
            attr = positions[pos]
            if attr.name not in fs.assignments:
                continue
            value = attr.value_named(fs.assignments[attr.name])
            fid = feature_id(cat.code, pos, value.code)
            refs.append(fid)
            features[fid] = ((spec.category_rank(cat.code), pos, attr.rank(value.code)), FeatureDef(fid, attr.name, value.name))
        structures[text] = (codec.collation_key(msd, spec), FsDef(text, tuple(refs)))
    return FeatureLibraries(
        tuple(f for _, f in sorted(features.values(), key=lambda kv: kv[0])),
        tuple(s for _, s in sorted(structures.values(), key=lambda kv: kv[0])),
    )


XML_ID = "{http://www.w3.org/XML/1998/namespace}id"
XML_LANG = "{http://www.w3.org/XML/1998/namespace}lang"


def library_elements(libs: FeatureLibraries):
    """Build ``fLib`` and ``fvLib`` elements."""
    flib = ET.Element("fLib")
    for f in libs.features:
        el = ET.SubElement(flib, "f", {"name": f.name, XML_ID: f.id, XML_LANG: f.lang})
        ET.SubElement(el, "symbol", {"value": f.value})
    fvlib = ET.Element("fvLib")
    for s in libs.structures:
        ET.SubElement(fvlib, "fs", {XML_ID: s.id, XML_LANG: s.lang, "feats": " ".join("#" + r for r in s.feats)})
    return flib, fvlib


def libraries_xml(libs: FeatureLibraries) -> str:
    back = ET.Element("back")
    back.extend(library_elements(libs))
    ET.indent(back, space=" ")
    return ET.tostring(back, encoding="unicode") + "\n"


# --- report ------------------------------------------------------------------


def fill_index_entry(spec: Specification, language: str, entry, ordering=None):
    """Complete an index entry's verbose and localised fields from the codec."""
    if ordering is None:
        ordering = default_ordering(spec, language)
    fs = codec.decode(codec.Msd(entry.msd, language, ordering), spec)
    verbose_en = entry.verbose_en or codec.expand_fs(fs, spec, codec.VERBOSE_STRING)
    msd_loc, verbose_loc, fallbacks = entry.msd_localised, entry.verbose_localised, 0
    sec = spec.particular_sections.get(language)
    if language != "en" and sec is not None and sec.is_localised:
        if not msd_loc:
            try:
                msd_loc = codec.encode(fs, spec, ordering, localise=True).text
            except MsdError:
                msd_loc, fallbacks = None, fallbacks + 1
        if not verbose_loc:
            exp = codec.expand_fs(fs, spec, codec.MINIMAL_LOCALISED)
            verbose_loc, fallbacks = str(exp), fallbacks + exp.fallbacks
    return replace(entry, verbose_en=verbose_en, msd_localised=msd_loc, verbose_localised=verbose_loc), fallbacks


def _md_row(cells):
    return "| " + " | ".join(str(c).replace("|", "\\|") for c in cells) + " |"


def render_report(spec: Specification, language: Optional[str] = None) -> str:
    """Markdown document with category, attribute, value and MSD indexes."""
    lines = ["# Morphosyntactic specification", ""]
    langs = sorted(spec.languages)
    lines.append(f"Languages: {', '.join(langs)}")
    lines.append("")
    lines.append("## Categories")
    lines.append("")
    lines.append(_md_row(["Code", "Category", "Attributes", "Values", "Languages"]))
    lines.append(_md_row(["---"] * 5))
    for st in spec_stats(spec):
        lines.append(_md_row([st.code, st.name, st.attributes, st.values, st.languages]))
    lines.append("")

    lines.append("## Attribute index")
    lines.append("")
    for cat in spec.categories:
        for attr in cat.attributes:
            if language and language not in attr.languages:
                continue
            codes = ", ".join(f"{v.code}={v.name}" for v in attr.values if not language or language in v.languages)
            lines.append(f"- {cat.name} ({cat.code}) {attr.common_position}: {attr.name} [{codes}]")
    lines.append("")

    lines.append("## Value index")
    lines.append("")
    entries = []
    for cat in spec.categories:
        for attr in cat.attributes:
            for v in attr.values:
                if language and language not in v.languages:
                    continue
                entries.append((v.name, cat.code, attr.name, v.code, ",".join(sorted(v.languages))))
    for name, code, attr, vcode, vlangs in sorted(entries):
        lines.append(f"- {name}: {code}/{attr}={vcode} ({vlangs})")
    lines.append("")

    warnings = []
    checks = check_spec(spec)
    for f in checks.findings:
        if language and not f.path.startswith(f"section/{language}"):
            continue
        warnings.append(f"{f.severity}: {f.path}: {f.detail}")
    sections = [language] if language else sorted(spec.particular_sections)
    for lang in sections:
        if lang not in spec.particular_sections:
            warnings.append(f"warning: section/{lang}: no language section")
            continue
        sec = spec.particular_sections[lang]
        lines.append(f"## Language section: {lang}")
        lines.append("")
        for table in sec.categories:
            name = spec.category(table.code).name if spec.has_category(table.code) else table.code
            local = f" / {table.localised_name} ({table.localised_code})" if table.localised_code else ""
            attrs = ", ".join(f"{a.position}:{a.name}" for a in table.attributes) or "no attributes"
            lines.append(f"- {name} ({table.code}){local}: {attrs}")
        if sec.constraints:
            lines.append("")
            lines.append("Constraints (not evaluated):")
            lines.extend(f"- {c}" for c in sec.constraints)
        if sec.msd_index is not None:
            lines.append("")
            lines.append(f"### MSD index ({lang})")
            lines.append("")
            lines.append(_md_row(["MSD", "Features", f"MSD ({lang})", f"Features ({lang})", "Tokens", "Types", "Examples"]))
            lines.append(_md_row(["---"] * 7))
            for entry in sec.msd_index:
                try:
                    entry, fallbacks = fill_index_entry(spec, lang, entry)
                except (MsdError, LookupFailed) as exc:
                    warnings.append(f"error: section/{lang}/index/{entry.msd}: {exc}")
                    continue
                if fallbacks:
                    warnings.append(f"warning: section/{lang}/index/{entry.msd}: {fallbacks} item(s) shown in English")
                lines.append(_md_row([
                    entry.msd,
                    entry.verbose_en,
                    entry.msd_localised or "",
                    entry.verbose_localised or "",
                    "" if entry.token_count is None else entry.token_count,
                    "" if entry.type_count is None else entry.type_count,
                    ", ".join(f"{w}/{l}" for w, l in entry.examples),
                ]))
        lines.append("")
    if warnings:
        lines.append("## Warnings")
        lines.append("")
        lines.extend(f"- {w}" for w in warnings)
        lines.append("")
    return "\n".join(lines)
