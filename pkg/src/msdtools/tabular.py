"""Canonical line-oriented specification format.

::

    LANGUAGES bg en sl
    CATEGORY N Noun
    ATTR 1 Type
    VAL c common bg,en,sl
    LANG-SECTION sl
    CAT N samostalnik S
    ATTR 1 Type vrsta
    VAL c common občno_ime o
    CONSTRAINT free text
    MSD Ncmsg 15945 2649 časa/čas,sveta/svet

Blank lines and lines starting with ``#`` are ignored.  ``LANGUAGES`` is
optional; when present it closes the set of language codes.
"""

from __future__ import annotations

import re

from .errors import SpecError
from .model import (
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

LANG_RE = re.compile(r"^[a-z]{2,3}$")


def _lang(code, loc):
    code = code.strip().lower()
    if not LANG_RE.match(code):
        raise SpecError(f"malformed language code {code!r}", loc)
    return code


def _position(text, loc):
    if not text.isdigit():
        raise SpecError(f"non-numeric position {text!r}", loc)
    return int(text)


def _count(text, loc):
    if text == "-":
        return None
    if not text.isdigit():
        raise SpecError(f"non-numeric count {text!r}", loc)
    return int(text)


def _examples(text, loc):
    out = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        wf, sep, lemma = item.partition("/")
        if not sep or not wf or not lemma:
            raise SpecError(f"malformed example {item!r}, expected word/lemma", loc)
        out.append((wf, lemma))
    return tuple(out)


class _Builder:
    """Accumulates mutable drafts while reading lines, then freezes them."""

    def __init__(self, source):
        self.source = source
        self.declared = None
        self.categories = []  # [code, name, [[name, pos, [AttrValue]]], loc]
        self.sections = {}  # lang -> dict
        self.section = None
        self.local_cat = None
        self.local_attr = None
        self.langs_seen = []  # (lang, loc)

    def loc(self, lineno):
        return f"{self.source}:{lineno}"

    def feed(self, lineno, line):
        loc = self.loc(lineno)
        keyword, _, rest = line.partition(" ")
        rest = rest.strip()
        fields = rest.split()
        handler = getattr(self, "_" + keyword.lower().replace("-", "_"), None)
        if handler is None:
            raise SpecError(f"unknown record type {keyword!r}", loc)
        handler(fields, rest, loc)

    def _languages(self, fields, rest, loc):
        if self.declared is not None:
            raise SpecError("LANGUAGES declared twice", loc)
        self.declared = {_lang(f, loc) for f in fields}

    def _category(self, fields, rest, loc):
        if self.section is not None:
            raise SpecError("CATEGORY inside a LANG-SECTION", loc)
        if len(fields) < 2:
            raise SpecError("CATEGORY needs <code> <name>", loc)
        code = fields[0]
        if not (len(code) == 1 and code.isupper()):
            raise SpecError(f"category code must be one uppercase letter, got {code!r}", loc)
        if any(c[0] == code for c in self.categories):
            raise SpecError(f"duplicate category code {code!r}", loc)
        self.categories.append([code, rest.split(None, 1)[1], [], loc])

    def _attr(self, fields, rest, loc):
        if self.section is not None:
            return self._section_attr(fields, loc)
        if not self.categories:
            raise SpecError("ATTR before any CATEGORY", loc)
        if len(fields) != 2:
            raise SpecError("ATTR needs <position> <name>", loc)
        pos = _position(fields[0], loc)
        if pos < 1:
            raise SpecError("attribute positions start at 1", loc)
        attrs = self.categories[-1][2]
        if any(a[1] == pos for a in attrs):
            raise SpecError(f"duplicate position {pos}", loc)
        if any(a[0] == fields[1] for a in attrs):
            raise SpecError(f"duplicate attribute {fields[1]!r}", loc)
        attrs.append([fields[1], pos, []])

    def _val(self, fields, rest, loc):
        if self.section is not None:
            return self._section_val(fields, loc)
        if not self.categories or not self.categories[-1][2]:
            raise SpecError("VAL outside an attribute", loc)
        if len(fields) != 3:
            raise SpecError("VAL needs <code> <name> <lang>[,<lang>...]", loc)
        code, name, langs = fields
        _check_value_code(code, loc)
        values = self.categories[-1][2][-1][2]
        if any(v.code == code for v in values):
            raise SpecError(f"duplicate value code {code!r}", loc)
        langset = frozenset(_lang(x, loc) for x in langs.split(",") if x)
        if not langset:
            raise SpecError("value flagged for no language", loc)
        for lang in langset:
            self.langs_seen.append((lang, loc))
        values.append(AttrValue(name, code, langset))

    def _lang_section(self, fields, rest, loc):
        if len(fields) != 1:
            raise SpecError("LANG-SECTION needs one language code", loc)
        lang = _lang(fields[0], loc)
        if lang in self.sections:
            raise SpecError(f"duplicate section for {lang!r}", loc)
        self.langs_seen.append((lang, loc))
        self.section = {"lang": lang, "cats": [], "msds": None, "constraints": []}
        self.sections[lang] = self.section
        self.local_cat = self.local_attr = None

    def _need_section(self, loc, what):
        if self.section is None:
            raise SpecError(f"{what} outside a LANG-SECTION", loc)

    def _cat(self, fields, rest, loc):
        self._need_section(loc, "CAT")
        if len(fields) not in (1, 3):
            raise SpecError("CAT needs <code> [<localised-name> <localised-code>]", loc)
        code = fields[0]
        if any(c["code"] == code for c in self.section["cats"]):
            raise SpecError(f"duplicate category {code!r} in section", loc)
        if len(fields) == 3:
            if any(c["lcode"] == fields[2] for c in self.section["cats"]):
                raise SpecError(f"duplicate localised category code {fields[2]!r}", loc)
        self.local_cat = {
            "code": code,
            "lname": fields[1] if len(fields) == 3 else None,
            "lcode": fields[2] if len(fields) == 3 else None,
            "attrs": [],
        }
        self.section["cats"].append(self.local_cat)
        self.local_attr = None

    def _section_attr(self, fields, loc):
        if self.local_cat is None:
            raise SpecError("ATTR before CAT in section", loc)
        if len(fields) not in (2, 3):
            raise SpecError("ATTR needs <position> <name> [<localised-name>]", loc)
        pos = _position(fields[0], loc)
        if any(a["pos"] == pos for a in self.local_cat["attrs"]):
            raise SpecError(f"duplicate particular position {pos}", loc)
        self.local_attr = {
            "pos": pos,
            "name": fields[1],
            "lname": fields[2] if len(fields) == 3 else None,
            "vals": [],
        }
        self.local_cat["attrs"].append(self.local_attr)

    def _section_val(self, fields, loc):
        if self.local_attr is None:
            raise SpecError("VAL outside an attribute in section", loc)
        if len(fields) not in (2, 4):
            raise SpecError("VAL needs <code> <name> [<localised-name> <localised-code>]", loc)
        code = fields[0]
        _check_value_code(code, loc)
        vals = self.local_attr["vals"]
        if any(v.code == code for v in vals):
            raise SpecError(f"duplicate value code {code!r}", loc)
        if len(fields) == 4:
            _check_value_code(fields[3], loc)
            if any(v.localised_code == fields[3] for v in vals):
                raise SpecError(f"duplicate localised value code {fields[3]!r}", loc)
            vals.append(LocalValue(code, fields[1], fields[2], fields[3]))
        else:
            vals.append(LocalValue(code, fields[1]))

    def _constraint(self, fields, rest, loc):
        self._need_section(loc, "CONSTRAINT")
        self.section["constraints"].append(rest)

    def _msd(self, fields, rest, loc):
        self._need_section(loc, "MSD")
        if len(fields) < 3:
            raise SpecError("MSD needs <msd> <token-count|-> <type-count|-> [examples]", loc)
        examples = _examples(rest.split(None, 3)[3], loc) if len(fields) > 3 else ()
        entry = MsdIndexEntry(
            msd=fields[0],
            token_count=_count(fields[1], loc),
            type_count=_count(fields[2], loc),
            examples=examples,
        )
        if self.section["msds"] is None:
            self.section["msds"] = []
        self.section["msds"].append(entry)

    def build(self) -> Specification:
        if self.declared is not None:
            for lang, loc in self.langs_seen:
                if lang not in self.declared:
                    raise SpecError(f"unknown language code {lang!r}", loc)
            languages = frozenset(self.declared)
        else:
            languages = frozenset(lang for lang, _ in self.langs_seen)
        categories = []
        for code, name, attrs, loc in self.categories:
            attrs = sorted(attrs, key=lambda a: a[1])
            categories.append(
                Category(code, name, tuple(Attribute(n, p, tuple(vals)) for n, p, vals in attrs))
            )
        sections = {}
        for lang, sec in self.sections.items():
            cats = tuple(
                LocalCategory(
                    c["code"],
                    c["lname"],
                    c["lcode"],
                    tuple(
                        LocalAttribute(a["pos"], a["name"], a["lname"], tuple(a["vals"]))
                        for a in sorted(c["attrs"], key=lambda a: a["pos"])
                    ),
                )
                for c in sec["cats"]
            )
            msds = tuple(sec["msds"]) if sec["msds"] is not None else None
            sections[lang] = LanguageSection(lang, cats, msds, tuple(sec["constraints"]))
        return Specification(tuple(categories), languages, sections)


def _check_value_code(code, loc):
    if len(code) != 1 or code == "-" or code.isspace():
        raise SpecError(f"value code must be one character other than '-', got {code!r}", loc)


def load_tabular(text: str, source: str = "<spec>") -> Specification:
    builder = _Builder(source)
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        builder.feed(lineno, line)
    return builder.build()


def load_section_tabular(text: str, source: str = "<section>") -> LanguageSection:
    """Parse a file holding exactly one ``LANG-SECTION`` block."""
    spec = load_tabular(text, source)
    if spec.categories:
        raise SpecError("section file must not contain common CATEGORY tables", source)
    if len(spec.particular_sections) != 1:
        raise SpecError("section file must contain exactly one LANG-SECTION", source)
    return next(iter(spec.particular_sections.values()))


# --- emission ---------------------------------------------------------------


def _emit_section(sec: LanguageSection, out: list) -> None:
    out.append(f"LANG-SECTION {sec.language}")
    for c in sec.categories:
        if c.localised_name and c.localised_code:
            out.append(f"CAT {c.code} {c.localised_name} {c.localised_code}")
        else:
            out.append(f"CAT {c.code}")
        for a in c.attributes:
            out.append(f"ATTR {a.position} {a.name}" + (f" {a.localised_name}" if a.localised_name else ""))
            for v in a.values:
                if v.localised_name and v.localised_code:
                    out.append(f"VAL {v.code} {v.name} {v.localised_name} {v.localised_code}")
                else:
                    out.append(f"VAL {v.code} {v.name}")
    for text in sec.constraints:
        out.append(f"CONSTRAINT {text}")
    for e in sec.msd_index or ():
        tok = "-" if e.token_count is None else str(e.token_count)
        typ = "-" if e.type_count is None else str(e.type_count)
        line = f"MSD {e.msd} {tok} {typ}"
        if e.examples:
            line += " " + ",".join(f"{w}/{l}" for w, l in e.examples)
        out.append(line)


def emit_section_tabular(sec: LanguageSection) -> str:
    out = []
    _emit_section(sec, out)
    return "\n".join(out) + "\n"


def emit_tabular(spec: Specification) -> str:
    out = [f"LANGUAGES {' '.join(sorted(spec.languages))}"]
    for cat in spec.categories:
        out.append("")
        out.append(f"CATEGORY {cat.code} {cat.name}")
        for a in cat.attributes:
            out.append(f"ATTR {a.common_position} {a.name}")
            for v in a.values:
                out.append(f"VAL {v.code} {v.name} {','.join(sorted(v.languages))}")
    for lang in sorted(spec.particular_sections):
        out.append("")
        _emit_section(spec.particular_sections[lang], out)
    return "\n".join(out) + "\n"
