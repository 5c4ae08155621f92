"""Linguistically annotated corpus: model, XML reader/writer and validation.

The supported document shape is::

    text@xml:id@xml:lang
      body
        div@type@xml:id  (nested)
          p@xml:id
            s@xml:id
              w@lemma@ana | c
      back
        fLib / f@name@xml:id@xml:lang / symbol@value
        fvLib / fs@xml:id@xml:lang@feats
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass, field, replace
from typing import Optional

from . import codec
from .errors import CorpusError, MsdError
from .reports import Report
from .spec_ops import FeatureDef, FeatureLibraries, FsDef, default_ordering, emit_feature_libraries, library_elements

XML_ID = "{http://www.w3.org/XML/1998/namespace}id"
XML_LANG = "{http://www.w3.org/XML/1998/namespace}lang"

WORD = "word"
PUNCT = "punctuation"


@dataclass(frozen=True)
class Token:
    kind: str
    surface: str
    lemma: Optional[str] = None
    msd_ref: Optional[str] = None
    id: Optional[str] = None


@dataclass(frozen=True)
class Sentence:
    id: str
    tokens: tuple = ()

    @property
    def words(self):
        return [t for t in self.tokens if t.kind == WORD]


@dataclass(frozen=True)
class Paragraph:
    id: str
    sentences: tuple = ()


@dataclass(frozen=True)
class Division:
    type: Optional[str]
    id: str
    children: tuple = ()  # Division | Paragraph


@dataclass(frozen=True)
class AnnotatedCorpus:
    language: str
    text_id: str
    divisions: tuple = ()
    back_matter: Optional[FeatureLibraries] = None

    def sentences(self):
        for div in self.divisions:
            yield from _div_sentences(div)

    def tokens(self):
        for s in self.sentences():
            yield from s.tokens

    def sentence_ids(self) -> list:
        return [s.id for s in self.sentences()]

    def msd_refs(self) -> set:
        return {t.msd_ref for t in self.tokens() if t.msd_ref}


def _div_sentences(div):
    for child in div.children:
        if isinstance(child, Division):
            yield from _div_sentences(child)
        else:
            yield from child.sentences


def _local(tag):
    return tag.rsplit("}", 1)[-1] if isinstance(tag, str) else ""


# --- loading -----------------------------------------------------------------


class _Loader:
    def __init__(self, strict, report):
        self.strict = strict
        self.report = report

    def unknown(self, el, parent_id):
        msg = f"unknown element <{_local(el.tag)}>"
        if self.strict:
            raise CorpusError(f"{parent_id}: {msg}")
        self.report.warning("unknown-element", parent_id, msg + " skipped")

    def need(self, el, attr, where):
        value = el.get(attr)
        if value is None:
            name = "xml:id" if attr == XML_ID else attr
            raise CorpusError(f"{where}: <{_local(el.tag)}> lacks required attribute {name}")
        return value

    def division(self, el, where):
        ident = self.need(el, XML_ID, where)
        children = []
        for child in el:
            name = _local(child.tag)
            if name == "div":
                children.append(self.division(child, ident))
            elif name == "p":
                children.append(self.paragraph(child, ident))
            elif name in ("head",) or not isinstance(child.tag, str):
                continue
            else:
                self.unknown(child, ident)
        return Division(el.get("type"), ident, tuple(children))

    def paragraph(self, el, where):
        ident = self.need(el, XML_ID, where)
        sentences = []
        for child in el:
            if not isinstance(child.tag, str):
                continue
            if _local(child.tag) == "s":
                sentences.append(self.sentence(child, ident))
            else:
                self.unknown(child, ident)
        return Paragraph(ident, tuple(sentences))

    def sentence(self, el, where):
        ident = self.need(el, XML_ID, where)
        tokens = []
        self._tokens(el, ident, tokens)
        if not tokens:
            self.report.warning("empty-sentence", ident, "sentence has no tokens")
        return Sentence(ident, tuple(tokens))

    def _tokens(self, el, ident, tokens):
        for child in el:
            if not isinstance(child.tag, str):
                continue
            name = _local(child.tag)
            text = "".join(child.itertext()).strip()
            if name == "w":
                lemma = self.need(child, "lemma", ident)
                ana = self.need(child, "ana", ident)
                tokens.append(Token(WORD, text, lemma, ana[1:] if ana.startswith("#") else ana, child.get(XML_ID)))
            elif name == "c":
                tokens.append(Token(PUNCT, text, id=child.get(XML_ID)))
            elif self.strict:
                self.unknown(child, ident)
            else:
                # permissive: look inside extra markup such as names
                self.report.warning("unknown-element", ident, f"unknown element <{name}> unwrapped")
                self._tokens(child, ident, tokens)


def _parse_back(back, report, ident):
    features, structures = [], []
    for el in back.iter():
        name = _local(el.tag)
        if name == "f":
            symbols = [s for s in el if _local(s.tag) == "symbol"]
            fid = el.get(XML_ID)
            if fid is None or el.get("name") is None or not symbols:
                raise CorpusError(f"{ident}: malformed <f> entry {fid!r}")
            features.append(FeatureDef(fid, el.get("name"), symbols[0].get("value", ""), el.get(XML_LANG, "en")))
        elif name == "fs":
            fid = el.get(XML_ID)
            if fid is None:
                raise CorpusError(f"{ident}: <fs> lacks xml:id")
            feats = tuple(r[1:] if r.startswith("#") else r for r in el.get("feats", "").split())
            structures.append(FsDef(fid, feats, el.get(XML_LANG, "en")))
    if not features and not structures:
        return None
    return FeatureLibraries(tuple(features), tuple(structures))


def load_corpus(source, strict: bool = False, report: Optional[Report] = None) -> AnnotatedCorpus:
    """Parse an annotated text.  Permissive mode skips unknown markup with warnings."""
    if report is None:
        report = Report()
    if hasattr(source, "read"):
        source = source.read()
    try:
        root = ET.fromstring(source)
    except ET.ParseError as exc:
        raise CorpusError(f"malformed XML: {exc}") from None
    if _local(root.tag) != "text":
        texts = [el for el in root.iter() if _local(el.tag) == "text"]
        if not texts:
            raise CorpusError("no <text> element")
        if len(texts) > 1:
            report.warning("multiple-texts", "", "only the first <text> is read")
        root = texts[0]
    loader = _Loader(strict, report)
    ident = loader.need(root, XML_ID, "text")
    lang = loader.need(root, XML_LANG, ident).lower()
    divisions = []
    back = None
    for child in root:
        name = _local(child.tag)
        if name == "body":
            for div in child:
                if not isinstance(div.tag, str):
                    continue
                if _local(div.tag) == "div":
                    divisions.append(loader.division(div, ident))
                else:
                    loader.unknown(div, ident)
        elif name == "back":
            back = _parse_back(child, report, ident)
        elif isinstance(child.tag, str):
            loader.unknown(child, ident)
    return AnnotatedCorpus(lang, ident, tuple(divisions), back)


# --- emission ----------------------------------------------------------------


def _emit_children(parent, children):
    for child in children:
        if isinstance(child, Division):
            attrib = {"type": child.type} if child.type else {}
            attrib[XML_ID] = child.id
            el = ET.SubElement(parent, "div", attrib)
            _emit_children(el, child.children)
        else:
            p = ET.SubElement(parent, "p", {XML_ID: child.id})
            for s in child.sentences:
                sel = ET.SubElement(p, "s", {XML_ID: s.id})
                for t in s.tokens:
                    if t.kind == WORD:
                        attrib = {XML_ID: t.id} if t.id else {}
                        attrib.update({"lemma": t.lemma, "ana": "#" + t.msd_ref})
                        ET.SubElement(sel, "w", attrib).text = t.surface
                    else:
                        ET.SubElement(sel, "c", {XML_ID: t.id} if t.id else {}).text = t.surface


def emit_corpus(corpus: AnnotatedCorpus) -> str:
    root = ET.Element("text", {XML_ID: corpus.text_id, XML_LANG: corpus.language})
    body = ET.SubElement(root, "body")
    _emit_children(body, corpus.divisions)
    if corpus.back_matter is not None:
        back = ET.SubElement(root, "back")
        back.extend(library_elements(corpus.back_matter))
    ET.indent(root, space=" ")
    return ET.tostring(root, encoding="unicode") + "\n"


# --- validation --------------------------------------------------------------


def extends(parent: str, child: str) -> bool:
    """True when ``child`` is a dotted extension of ``parent`` (``Osl.1`` -> ``Osl.1.2``)."""
    if not child.startswith(parent) or len(child) == len(parent):
        return False
    if parent.endswith("."):
        return True
    return child[len(parent)] == "."


def _check_ids(corpus, report):
    seen = set()

    def visit(ident, parent, path):
        if ident in seen:
            report.error("duplicate-id", ident, "identifier used more than once")
        seen.add(ident)
        if parent is not None and not extends(parent, ident):
            report.error("id-hierarchy", ident, f"does not extend parent identifier {parent}")

    def walk(children, parent):
        for child in children:
            visit(child.id, parent, None)
            if isinstance(child, Division):
                walk(child.children, child.id)
            else:
                for s in child.sentences:
                    visit(s.id, child.id, None)

    visit(corpus.text_id, None, None)
    walk(corpus.divisions, corpus.text_id)


def validate_corpus(corpus: AnnotatedCorpus, spec=None) -> Report:
    """Reference closure, library consistency against a spec, identifier hierarchy."""
    report = Report()
    _check_ids(corpus, report)
    libs = corpus.back_matter
    for s in corpus.sentences():
        for i, t in enumerate(s.tokens, 1):
            where = t.id or f"{s.id}[{i}]"
            if t.kind == WORD and (not t.lemma or not t.msd_ref):
                report.error("incomplete-word", where, "word lacks lemma or ana")
            if t.kind == WORD and t.msd_ref and libs is not None and libs.fs(t.msd_ref) is None:
                report.error("dangling-reference", where, f"ana #{t.msd_ref} not in fvLib")
    if libs is None:
        if any(True for _ in corpus.tokens()):
            report.warning("no-libraries", corpus.text_id, "no fLib/fvLib back matter")
        return report
    feature_ids = libs.feature_ids()
    for f in libs.features:
        if f.lang != "en":
            report.warning("library-language", f"fLib/{f.id}", f"xml:lang {f.lang}")
    for s in libs.structures:
        if s.lang != "en":
            report.warning("library-language", f"fvLib/{s.id}", f"xml:lang {s.lang}")
        for ref in s.feats:
            if ref not in feature_ids:
                report.error("dangling-feature", f"fvLib/{s.id}", f"#{ref} not in fLib")
    if spec is not None:
        _check_against_spec(corpus, libs, spec, report)
    return report


def _check_against_spec(corpus, libs, spec, report):
    lang = corpus.language
    ordering = default_ordering(spec, lang)
    feature_defs = {f.id: f for f in libs.features}
    for s in libs.structures:
        try:
            gold = emit_feature_libraries(spec, lang, [s.id], ordering)
        except MsdError as exc:
            report.error("invalid-msd", f"fvLib/{s.id}", str(exc))
            continue
        want = gold.structures[0].feats
        if tuple(s.feats) != want:
            report.error(
                "decomposition-mismatch",
                f"fvLib/{s.id}",
                f"feats {' '.join('#' + r for r in s.feats)} != {' '.join('#' + r for r in want)}",
            )
        for f in gold.features:
            have = feature_defs.get(f.id)
            if have is not None and (have.name, have.value) != (f.name, f.value):
                report.error("feature-mismatch", f"fLib/{f.id}", f"{have.name}={have.value} != {f.name}={f.value}")


# --- libraries & statistics ----------------------------------------------------


def attach_libraries(corpus: AnnotatedCorpus, spec) -> AnnotatedCorpus:
    """Replace back matter with libraries derived from the MSDs actually used."""
    ordering = default_ordering(spec, corpus.language)
    used = []
    seen = set()
    for s in corpus.sentences():
        for i, t in enumerate(s.tokens, 1):
            if t.kind != WORD or t.msd_ref in seen:
                continue
            try:
                codec.decode(codec.Msd(t.msd_ref, corpus.language, ordering), spec)
            except MsdError as exc:
                raise CorpusError(f"token {t.id or f'{s.id}[{i}]'}: MSD {t.msd_ref!r} invalid: {exc}") from None
            seen.add(t.msd_ref)
            used.append(t.msd_ref)
    libs = emit_feature_libraries(spec, corpus.language, used, ordering)
    return replace(corpus, back_matter=libs)


@dataclass
class Counts:
    words: int = 0
    punctuation: int = 0
    types: int = 0
    msds: int = 0

    @property
    def tokens(self):
        return self.words + self.punctuation


@dataclass
class CorpusStats:
    corpus: Counts
    divisions: dict = field(default_factory=dict)  # id -> Counts
    sentences: dict = field(default_factory=dict)  # id -> Counts


def _count(tokens) -> Counts:
    words = [t for t in tokens if t.kind == WORD]
    return Counts(
        words=len(words),
        punctuation=len(tokens) - len(words),
        types=len({t.surface for t in words}),
        msds=len({t.msd_ref for t in words}),
    )


def corpus_stats(corpus: AnnotatedCorpus) -> CorpusStats:
    """Word, punctuation, type and MSD counts per sentence, top-level division and corpus."""
    sentences = {s.id: _count(list(s.tokens)) for s in corpus.sentences()}
    divisions = {d.id: _count([t for s in _div_sentences(d) for t in s.tokens]) for d in corpus.divisions}
    return CorpusStats(_count(list(corpus.tokens())), divisions, sentences)
