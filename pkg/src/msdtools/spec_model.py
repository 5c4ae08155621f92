"""Loading and emitting specifications in either serialisation."""

from __future__ import annotations

from pathlib import Path

from . import tabular, teitables
from .errors import SpecError
from .model import (  # noqa: F401  re-exported
    COMMON,
    PARTICULAR,
    AttrValue,
    Attribute,
    Category,
    CategoryStats,
    LanguageSection,
    LocalAttribute,
    LocalCategory,
    LocalValue,
    MsdIndexEntry,
    Specification,
    check_spec,
    spec_stats,
)

FORMATS = ("tabular", "tei")


def _decode(source):
    if isinstance(source, bytes):
        return source.decode("utf-8")
    if hasattr(source, "read"):
        data = source.read()
        return data.decode("utf-8") if isinstance(data, bytes) else data
    return source


def load_spec(source, format: str = "tabular", name: str = "<spec>") -> Specification:
    """Load a specification from text, bytes or a binary/text stream."""
    text = _decode(source)
    if format == "tabular":
        return tabular.load_tabular(text, name)
    if format == "tei":
        return teitables.load_tei(text.encode("utf-8"), name)
    raise SpecError(f"unknown specification format {format!r}")


def load_spec_file(path, format: str | None = None) -> Specification:
    path = Path(path)
    if format is None:
        format = "tei" if path.suffix.lower() == ".xml" else "tabular"
    return load_spec(path.read_bytes(), format, str(path))


def emit_spec(spec: Specification, format: str = "tabular") -> str:
    if format == "tabular":
        return tabular.emit_tabular(spec)
    if format == "tei":
        return teitables.emit_tei(spec)
    raise SpecError(f"unknown specification format {format!r}")


def load_section(source, format: str = "tabular", name: str = "<section>") -> LanguageSection:
    text = _decode(source)
    if format == "tabular":
        return tabular.load_section_tabular(text, name)
    if format == "tei":
        return teitables.load_section_tei(text.encode("utf-8"), name)
    raise SpecError(f"unknown specification format {format!r}")


def emit_section(section: LanguageSection, format: str = "tabular", spec: Specification | None = None) -> str:
    if format == "tabular":
        return tabular.emit_section_tabular(section)
    if format == "tei":
        return teitables.emit_section_tei(section, spec)
    raise SpecError(f"unknown specification format {format!r}")


def lookup(spec: Specification, language, category_code, position, ordering=COMMON):
    return spec.lookup(language, category_code, position, ordering)
