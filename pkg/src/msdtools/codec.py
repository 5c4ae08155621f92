"""Conversion between MSD strings and feature structures.

An MSD is interpreted relative to a language, an ordering (``common`` or
``particular``) and whether its codes are localised.  The character at
position *p* is the code of the value of the attribute occupying position
*p*; ``-`` marks a non-applicable attribute and trailing hyphens are omitted
in canonical form.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import LookupFailed, MsdError
from .model import CATEGORY_LABEL, COMMON, PARTICULAR, Specification

MINIMAL = "minimal"
MINIMAL_LOCALISED = "minimal-localised"
CANONICAL_LANGUAGE = "canonical-language"
CANONICAL_UNIVERSAL = "canonical-universal"
VERBOSE_STRING = "verbose-string"
FORMS = (MINIMAL, MINIMAL_LOCALISED, CANONICAL_LANGUAGE, CANONICAL_UNIVERSAL, VERBOSE_STRING)

ENGLISH = "english"
NATIVE = "native"

# Placeholder for attributes absent from a canonical expansion; never stored.
ABSENT = "0"

_PREFIX_RE = re.compile(r"^([a-z]{2,3}):(.+)$")


@dataclass(frozen=True)
class Msd:
    text: str
    language: Optional[str] = None
    ordering: str = COMMON
    localised: bool = False

    def __str__(self):
        return self.text


@dataclass(frozen=True)
class FeatureStructure:
    language: Optional[str]
    category_code: str
    assignments: dict = field(default_factory=dict)

    def __str__(self):
        feats = " ".join(f"{k}={v}" for k, v in self.assignments.items())
        return f"{self.category_code} {feats}".strip()


@dataclass(frozen=True)
class Expansion:
    """A rendered feature listing: category label plus ``(attribute, value)`` pairs."""

    category: str
    features: tuple = ()
    fallbacks: int = 0  # items rendered in English for want of a localisation

    def __str__(self):
        return " ".join([self.category] + [f"{a}={v}" for a, v in self.features])

    def as_dict(self) -> dict:
        return dict(self.features)


def split_language_prefix(text: str):
    """Split the ``<lang>:<msd>`` extension syntax; returns ``(lang|None, msd)``."""
    m = _PREFIX_RE.match(text)
    if m:
        return m.group(1), m.group(2)
    return None, text


def _table(spec, language, code):
    try:
        table = spec.section(language).table(code)
    except LookupFailed as exc:
        raise MsdError(str(exc), "no-localisation") from None
    if table is None:
        raise MsdError(f"language {language!r} has no table for category {code!r}", "no-localisation")
    return table


def _category_of(msd: Msd, spec: Specification):
    first = msd.text[0]
    if msd.localised:
        try:
            table = spec.section(msd.language).table_by_local_code(first)
        except LookupFailed as exc:
            raise MsdError(str(exc), "no-localisation") from None
        if table is None:
            raise MsdError(f"unknown localised category code {first!r}", "unknown-category")
        return spec.category(table.code)
    if not spec.has_category(first):
        raise MsdError(f"unknown category {first!r}", "unknown-category")
    return spec.category(first)


def _positions(spec, msd_or_lang, code, ordering):
    try:
        return spec.positions(msd_or_lang, code, ordering)
    except LookupFailed as exc:
        raise MsdError(str(exc), "no-ordering") from None


def decode(msd: Msd, spec: Specification, lenient: bool = False) -> FeatureStructure:
    """Interpret an MSD string as a feature structure.

    In lenient mode trailing hyphens (and over-long strings padded with
    hyphens) are accepted; canonical mode rejects them.
    """
    text = msd.text
    if not text:
        raise MsdError("empty MSD", "empty")
    cat = _category_of(msd, spec)
    positions = _positions(spec, msd.language, cat.code, msd.ordering)
    if len(text) > 1 and text.endswith("-"):
        if not lenient:
            raise MsdError("non-canonical trailing hyphens", "trailing-hyphens", len(text) - 1)
        text = text.rstrip("-") or text[0]
    max_pos = max(positions, default=0)
    if len(text) - 1 > max_pos:
        raise MsdError(f"MSD longer than the {max_pos} positions declared for {cat.code}", "too-long", max_pos + 1)
    table = _table(spec, msd.language, cat.code) if msd.localised else None
    assignments = {}
    for pos, ch in enumerate(text[1:], 1):
        if ch == "-":
            continue
        attr = positions.get(pos)
        if attr is None:
            raise MsdError(f"no attribute at position {pos}", "invalid-position", pos)
        code = ch
        if table is not None:
            la = table.attribute(attr.name)
            lv = la.value_by_local_code(ch) if la is not None else None
            if lv is None:
                raise MsdError(f"invalid value code {ch!r} at position {pos}", "invalid-code", pos)
            code = lv.code
        value = attr.value(code)
        if value is None:
            raise MsdError(f"invalid value code {ch!r} at position {pos}", "invalid-code", pos)
        if msd.language is not None and msd.language not in value.languages:
            raise MsdError(
                f"value {attr.name}={value.name} at position {pos} not valid for {msd.language}",
                "not-flagged",
                pos,
            )
        assignments[attr.name] = value.name
    return FeatureStructure(msd.language, cat.code, assignments)


def encode(fs: FeatureStructure, spec: Specification, ordering: str = COMMON, localise: bool = False) -> Msd:
    """Serialise a feature structure as a canonical MSD."""
    cat = spec.category(fs.category_code) if spec.has_category(fs.category_code) else None
    if cat is None:
        raise MsdError(f"unknown category {fs.category_code!r}", "unknown-category")
    positions = _positions(spec, fs.language, cat.code, ordering)
    where = {a.name: p for p, a in positions.items()}
    table = _table(spec, fs.language, cat.code) if localise else None
    if table is not None:
        if not table.localised_code:
            raise MsdError(f"no localised code for category {cat.code}", "no-localisation")
        head = table.localised_code
    else:
        head = cat.code
    chars = {}
    for name, value_name in fs.assignments.items():
        attr = cat.attribute(name)
        if attr is None:
            raise MsdError(f"category {cat.code} has no attribute {name!r}", "unknown-attribute")
        if name not in where:
            raise MsdError(f"attribute {name!r} has no position in the {ordering} ordering", "unknown-attribute")
        value = attr.value_named(value_name)
        if value is None:
            raise MsdError(f"attribute {name} has no value {value_name!r}", "invalid-value")
        if fs.language is not None and fs.language not in value.languages:
            raise MsdError(f"value {name}={value_name} not valid for {fs.language}", "not-flagged")
        code = value.code
        if table is not None:
            la = table.attribute(name)
            lv = la.value(code) if la is not None else None
            if lv is None or not lv.localised_code:
                raise MsdError(f"no localised code for {name}={value_name}", "no-localisation")
            code = lv.localised_code
        chars[where[name]] = code
    length = max(chars, default=0)
    text = head + "".join(chars.get(p, "-") for p in range(1, length + 1))
    return Msd(text, fs.language, ordering, localise)


def relocalise(msd: Msd, spec: Specification, target: str = NATIVE, lenient: bool = False) -> Msd:
    """Re-express an MSD with English or native codes; features are unchanged."""
    if target not in (ENGLISH, NATIVE):
        raise ValueError(f"unknown localisation target {target!r}")
    fs = decode(msd, spec, lenient)
    return encode(fs, spec, msd.ordering, localise=(target == NATIVE))


def render_order(spec: Specification, fs: FeatureStructure) -> list:
    """Attribute names of a category in display order.

    The language's particular ordering is preferred when it has one.
    """
    lang = fs.language
    if lang is not None and spec.has_section(lang) and spec.section(lang).table(fs.category_code) is not None:
        pos = spec.positions(lang, fs.category_code, PARTICULAR)
    else:
        pos = spec.positions(lang, fs.category_code, COMMON)
    return [pos[p].name for p in sorted(pos)]


def _ordered_assignments(spec, fs):
    order = render_order(spec, fs)
    rank = {n: i for i, n in enumerate(order)}
    return sorted(fs.assignments.items(), key=lambda kv: rank.get(kv[0], len(rank)))


def expand_fs(fs: FeatureStructure, spec: Specification, form: str = MINIMAL):
    cat = spec.category(fs.category_code)
    if form in (MINIMAL, VERBOSE_STRING):
        exp = Expansion(cat.name, tuple(_ordered_assignments(spec, fs)))
        return str(exp) if form == VERBOSE_STRING else exp
    if form == MINIMAL_LOCALISED:
        return _localised_expansion(fs, spec)
    if form == CANONICAL_LANGUAGE:
        if fs.language is None:
            raise MsdError("canonical-language expansion needs a language", "no-language")
        names = spec.language_attributes(fs.language)
    elif form == CANONICAL_UNIVERSAL:
        names = spec.universal_attributes()
    else:
        raise ValueError(f"unknown expansion form {form!r}")
    return Expansion(cat.name, tuple((n, fs.assignments.get(n, ABSENT)) for n in names))


def _localised_expansion(fs, spec):
    cat = spec.category(fs.category_code)
    fallbacks = 0
    table = None
    if fs.language is not None and spec.has_section(fs.language):
        table = spec.section(fs.language).table(cat.code)
    label = table.localised_name if table is not None and table.localised_name else None
    if label is None:
        label = cat.name
        fallbacks += 1
    feats = []
    for name, value_name in _ordered_assignments(spec, fs):
        la = table.attribute(name) if table is not None else None
        lname = la.localised_name if la is not None and la.localised_name else None
        code = cat.attribute(name).value_named(value_name).code
        lv = la.value(code) if la is not None else None
        lvalue = lv.localised_name if lv is not None and lv.localised_name else None
        if lname is None or lvalue is None:
            fallbacks += 1
        feats.append((lname or name, lvalue or value_name))
    return Expansion(label, tuple(feats), fallbacks)


def expand(msd: Msd, spec: Specification, form: str = MINIMAL, lenient: bool = False):
    """Expand an MSD into one of the feature-listing forms.

    ``verbose-string`` returns a string; every other form an :class:`Expansion`.
    """
    return expand_fs(decode(msd, spec, lenient), spec, form)


def collation_key(msd: Msd, spec: Specification, lenient: bool = False) -> tuple:
    """Sort key: category order, then per position the value's listing rank.

    Unassigned positions rank 0, before every value.
    """
    fs = decode(msd, spec, lenient)
    positions = spec.positions(msd.language, fs.category_code, msd.ordering)
    ranks = []
    for pos in range(1, max(positions, default=0) + 1):
        attr = positions.get(pos)
        if attr is None or attr.name not in fs.assignments:
            ranks.append(0)
        else:
            ranks.append(attr.rank(attr.value_named(fs.assignments[attr.name]).code))
    return (spec.category_rank(fs.category_code), tuple(ranks))


def sort_msds(texts: Iterable[str], spec: Specification, language=None, ordering=COMMON, localised=False) -> list:
    return sorted(texts, key=lambda t: collation_key(Msd(t, language, ordering, localised), spec))


@dataclass(frozen=True)
class MsdCheck:
    msd: str
    valid: bool
    reason: str = ""
    code: str = ""
    normalised: Optional[str] = None

    def line(self) -> str:
        if self.valid:
            return f"{self.msd}\tvalid\t{self.normalised or self.msd}"
        return f"{self.msd}\tinvalid\t{self.reason}"


def check_msd(text: str, spec: Specification, language=None, ordering=COMMON, lenient=False, localised=False) -> MsdCheck:
    lang, body = split_language_prefix(text)
    msd = Msd(body, lang or language, ordering, localised)
    try:
        decode(msd, spec, lenient)
    except MsdError as exc:
        return MsdCheck(text, False, str(exc), exc.reason)
    normalised = body.rstrip("-") or body[:1]
    return MsdCheck(text, True, normalised=normalised)


def validate_msd_list(msds: Iterable[str], spec: Specification, language=None, ordering=COMMON,
                      lenient=False, localised=False) -> list:
    """Classify each MSD string; errors are returned as data."""
    return [check_msd(m, spec, language, ordering, lenient, localised) for m in msds]


def parse_features(text: str, spec: Specification, language=None, localised=False) -> FeatureStructure:
    """Parse ``Category Attr=value ...`` (English names) into a feature structure."""
    parts = text.replace(",", " ").split()
    if not parts:
        raise MsdError("empty feature listing", "empty")
    head = parts[0]
    cat = None
    for c in spec.categories:
        if head in (c.name, c.code):
            cat = c
            break
    if cat is None:
        raise MsdError(f"unknown category {head!r}", "unknown-category")
    assignments = {}
    for item in parts[1:]:
        name, sep, value = item.partition("=")
        if not sep:
            raise MsdError(f"expected Attr=value, got {item!r}", "syntax")
        if value == ABSENT:
            continue
        if name == CATEGORY_LABEL:
            continue
        assignments[name] = value
    return FeatureStructure(language, cat.code, assignments)
