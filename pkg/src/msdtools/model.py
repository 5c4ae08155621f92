"""In-memory model of a morphosyntactic specification.

The common tables (:class:`Category`, :class:`Attribute`, :class:`AttrValue`)
define the feature system for all languages.  Each language may add a
:class:`LanguageSection` that re-orders attributes for shorter MSDs, carries
localised names and codes, and lists the language's tagset.

All objects are immutable once built; derived lookup tables are cached on
first use.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Union

from .errors import LookupFailed
from .reports import Report

COMMON = "common"
PARTICULAR = "particular"
ORDERINGS = (COMMON, PARTICULAR)

CATEGORY_LABEL = "CATEGORY"


@dataclass(frozen=True)
class AttrValue:
    name: str
    code: str
    languages: frozenset = frozenset()


@dataclass(frozen=True)
class Attribute:
    name: str
    common_position: int
    values: tuple = ()

    @cached_property
    def _by_code(self):
        return {v.code: v for v in self.values}

    @cached_property
    def _by_name(self):
        return {v.name: v for v in self.values}

    def value(self, code: str) -> Optional[AttrValue]:
        return self._by_code.get(code)

    def value_named(self, name: str) -> Optional[AttrValue]:
        return self._by_name.get(name)

    def rank(self, code: str) -> int:
        """1-based rank of a value code in listing order."""
        for i, v in enumerate(self.values, 1):
            if v.code == code:
                return i
        raise KeyError(code)

    @property
    def languages(self) -> frozenset:
        out = set()
        for v in self.values:
            out |= v.languages
        return frozenset(out)


@dataclass(frozen=True)
class Category:
    code: str
    name: str
    attributes: tuple = ()

    @cached_property
    def _by_position(self):
        return {a.common_position: a for a in self.attributes}

    @cached_property
    def _by_name(self):
        return {a.name: a for a in self.attributes}

    def attribute(self, name: str) -> Optional[Attribute]:
        return self._by_name.get(name)

    def attribute_at(self, position: int) -> Optional[Attribute]:
        return self._by_position.get(position)

    @property
    def max_position(self) -> int:
        return max((a.common_position for a in self.attributes), default=0)


# --- language-particular tables ---------------------------------------------


@dataclass(frozen=True)
class LocalValue:
    code: str
    name: str
    localised_name: Optional[str] = None
    localised_code: Optional[str] = None


@dataclass(frozen=True)
class LocalAttribute:
    position: int
    name: str
    localised_name: Optional[str] = None
    values: tuple = ()

    @cached_property
    def _by_code(self):
        return {v.code: v for v in self.values}

    @cached_property
    def _by_local_code(self):
        return {v.localised_code: v for v in self.values if v.localised_code}

    def value(self, code: str) -> Optional[LocalValue]:
        return self._by_code.get(code)

    def value_by_local_code(self, code: str) -> Optional[LocalValue]:
        return self._by_local_code.get(code)


@dataclass(frozen=True)
class LocalCategory:
    code: str
    localised_name: Optional[str] = None
    localised_code: Optional[str] = None
    attributes: tuple = ()

    @cached_property
    def _by_position(self):
        return {a.position: a for a in self.attributes}

    @cached_property
    def _by_name(self):
        return {a.name: a for a in self.attributes}

    def attribute_at(self, position: int) -> Optional[LocalAttribute]:
        return self._by_position.get(position)

    def attribute(self, name: str) -> Optional[LocalAttribute]:
        return self._by_name.get(name)

    @property
    def max_position(self) -> int:
        return max((a.position for a in self.attributes), default=0)


@dataclass(frozen=True)
class MsdIndexEntry:
    msd: str
    verbose_en: str = ""
    msd_localised: Optional[str] = None
    verbose_localised: Optional[str] = None
    token_count: Optional[int] = None
    type_count: Optional[int] = None
    examples: tuple = ()  # ((word_form, lemma), ...)


@dataclass(frozen=True)
class LanguageSection:
    language: str
    categories: tuple = ()  # LocalCategory, in table order
    msd_index: Optional[tuple] = None
    constraints: tuple = ()

    @cached_property
    def category_tables(self) -> dict:
        return {c.code: c for c in self.categories}

    @cached_property
    def _by_local_code(self):
        return {c.localised_code: c for c in self.categories if c.localised_code}

    def table(self, code: str) -> Optional[LocalCategory]:
        return self.category_tables.get(code)

    def table_by_local_code(self, code: str) -> Optional[LocalCategory]:
        return self._by_local_code.get(code)

    @property
    def is_localised(self) -> bool:
        return any(c.localised_code or c.localised_name for c in self.categories)


# --- the specification ------------------------------------------------------


@dataclass(frozen=True)
class Specification:
    categories: tuple = ()
    languages: frozenset = frozenset()
    particular_sections: dict = field(default_factory=dict)

    @cached_property
    def _by_code(self):
        return {c.code: c for c in self.categories}

    @cached_property
    def _rank(self):
        return {c.code: i for i, c in enumerate(self.categories)}

    def category(self, code: str) -> Category:
        try:
            return self._by_code[code]
        except KeyError:
            raise LookupFailed(f"unknown category {code!r}") from None

    def has_category(self, code: str) -> bool:
        return code in self._by_code

    def category_rank(self, code: str) -> int:
        return self._rank[code]

    def section(self, language: str) -> LanguageSection:
        try:
            return self.particular_sections[language]
        except KeyError:
            raise LookupFailed(f"language {language!r} has no particular section") from None

    def has_section(self, language: str) -> bool:
        return language in self.particular_sections

    def category_languages(self, code: str) -> frozenset:
        """Languages using a category: flagged on any value or declared in a section."""
        langs = set()
        for a in self.category(code).attributes:
            langs |= a.languages
        for lang, sec in self.particular_sections.items():
            if sec.table(code) is not None:
                langs.add(lang)
        return frozenset(langs)

    def positions(self, language: Optional[str], code: str, ordering: str = COMMON) -> dict:
        """Map MSD position -> common :class:`Attribute` under an ordering."""
        cat = self.category(code)
        if ordering == COMMON:
            return {a.common_position: a for a in cat.attributes}
        if ordering != PARTICULAR:
            raise ValueError(f"unknown ordering {ordering!r}")
        table = self.section(language).table(code)
        if table is None:
            raise LookupFailed(f"language {language!r} declares no table for category {code!r}")
        out = {}
        for la in table.attributes:
            attr = cat.attribute(la.name)
            if attr is None:
                raise LookupFailed(f"{language}/{code}: attribute {la.name!r} missing from common tables")
            out[la.position] = attr
        return out

    def lookup(self, language, code, position, ordering=COMMON) -> Union[Category, Attribute]:
        """Return the item at an MSD position; position 0 is the category itself."""
        positions = self.positions(language, code, ordering)
        if position == 0:
            return self.category(code)
        try:
            return positions[position]
        except KeyError:
            raise LookupFailed(f"category {code!r} has no attribute at position {position} ({ordering})") from None

    def position_of(self, language, code, attribute_name, ordering=COMMON) -> int:
        for pos, attr in self.positions(language, code, ordering).items():
            if attr.name == attribute_name:
                return pos
        raise LookupFailed(f"attribute {attribute_name!r} not in category {code!r} ({ordering})")

    def language_attributes(self, language: str) -> list:
        """Attribute names defined for a language, in first-appearance order.

        Categories are walked in spec order; within a category the language's
        particular ordering is used when it has one.
        """
        names = []
        seen = set()
        for cat in self.categories:
            attrs = [a for a in cat.attributes if language in a.languages]
            if self.has_section(language) and self.section(language).table(cat.code) is not None:
                pos = self.positions(language, cat.code, PARTICULAR)
                attrs = [pos[p] for p in sorted(pos)]
            for a in attrs:
                if a.name not in seen:
                    seen.add(a.name)
                    names.append(a.name)
        return names

    def universal_attributes(self) -> list:
        names = []
        seen = set()
        for cat in self.categories:
            for a in cat.attributes:
                if a.name not in seen:
                    seen.add(a.name)
                    names.append(a.name)
        return names


# --- reports over the model -------------------------------------------------


@dataclass(frozen=True)
class CategoryStats:
    code: str
    name: str
    attributes: int
    values: int
    languages: int


def spec_stats(spec: Specification) -> list:
    """Per-category counts of attributes, attribute-value pairs and languages."""
    out = []
    for cat in spec.categories:
        out.append(
            CategoryStats(
                code=cat.code,
                name=cat.name,
                attributes=len(cat.attributes),
                values=sum(len(a.values) for a in cat.attributes),
                languages=len(spec.category_languages(cat.code)),
            )
        )
    return out


def check_spec(spec: Specification) -> Report:
    """Structural checks that loading alone does not enforce."""
    report = Report()
    for cat in spec.categories:
        positions = sorted(a.common_position for a in cat.attributes)
        if positions != list(range(1, len(positions) + 1)):
            report.error("position-gap", f"common/{cat.code}", f"positions {positions} are not contiguous from 1")
    for lang in sorted(spec.particular_sections):
        sec = spec.particular_sections[lang]
        if lang not in spec.languages:
            report.error("unknown-language", f"section/{lang}", "section language not declared")
        for table in sec.categories:
            path = f"section/{lang}/{table.code}"
            if not spec.has_category(table.code):
                report.error("unknown-category", path, "category missing from common tables")
                continue
            cat = spec.category(table.code)
            positions = [a.position for a in table.attributes]
            if len(set(positions)) != len(positions):
                report.error("duplicate-position", path, f"positions {positions}")
            elif positions and sorted(positions) != list(range(1, len(positions) + 1)):
                report.error("position-gap", path, f"positions {sorted(positions)} are not contiguous from 1")
            listed = set()
            for la in table.attributes:
                attr = cat.attribute(la.name)
                if attr is None:
                    report.error("unknown-attribute", f"{path}/{la.name}", "attribute missing from common tables")
                    continue
                for lv in la.values:
                    listed.add((la.name, lv.code))
                    common = attr.value(lv.code)
                    if common is None:
                        report.error("unknown-value", f"{path}/{la.name}/{lv.code}", "value missing from common tables")
                    elif common.name != lv.name:
                        report.error("value-name-mismatch", f"{path}/{la.name}/{lv.code}",
                                     f"{lv.name!r} vs common {common.name!r}")
                    elif lang not in common.languages:
                        report.error("unflagged-value", f"{path}/{la.name}/{lv.code}",
                                     f"value not flagged for {lang} in common tables")
            for attr in cat.attributes:
                for v in attr.values:
                    if lang in v.languages and (attr.name, v.code) not in listed:
                        report.warning("unlisted-value", f"{path}/{attr.name}/{v.code}",
                                       f"flagged for {lang} in common tables but absent from section")
            if sec.is_localised:
                _check_localisation(report, lang, table)
        if sec.is_localised:
            for cat in spec.categories:
                if lang in spec.category_languages(cat.code) and sec.table(cat.code) is None:
                    report.warning("unlocalised", f"section/{lang}/{cat.code}", "category has no localised table")
    return report


def _check_localisation(report, lang, table):
    path = f"section/{lang}/{table.code}"
    if not (table.localised_name and table.localised_code):
        report.warning("unlocalised", path, "category name or code not localised")
    for la in table.attributes:
        if not la.localised_name:
            report.warning("unlocalised", f"{path}/{la.name}", "attribute name not localised")
        for lv in la.values:
            if not (lv.localised_name and lv.localised_code):
                report.warning("unlocalised", f"{path}/{la.name}/{lv.code}", "value not localised")
