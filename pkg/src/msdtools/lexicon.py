"""Three-field morphosyntactic lexicons (word-form, lemma, MSD)."""

from __future__ import annotations

import xml.etree.ElementTree as ET
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Optional

from . import codec
from .errors import LexiconError, MsdError
from .model import MsdIndexEntry, Specification
from .reports import Report
from .spec_ops import default_ordering, fill_index_entry
from .teitables import index_row, to_string

MAX_EXAMPLES = 10


@dataclass(frozen=True)
class LexiconEntry:
    word_form: str
    lemma: str
    msd: str
    lineno: Optional[int] = None

    @property
    def triple(self):
        return (self.word_form, self.lemma, self.msd)


@dataclass(frozen=True)
class Lexicon:
    language: str
    entries: tuple = ()

    def __len__(self):
        return len(self.entries)

    def msds(self) -> list:
        """Distinct MSDs in first-occurrence order."""
        return list(dict.fromkeys(e.msd for e in self.entries))


def load_lexicon(source, language: str, separator: Optional[str] = "\t", equals_shorthand: bool = False) -> Lexicon:
    """Read one entry per non-comment line.

    ``separator=None`` splits on runs of whitespace.  With
    ``equals_shorthand`` a ``=`` word-form means "same as the lemma" and a
    ``=`` lemma means "same as the word-form".
    """
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    entries = []
    for lineno, raw in enumerate(source.splitlines(), 1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split() if separator is None else line.split(separator)
        if len(fields) != 3:
            raise LexiconError(f"expected 3 fields, found {len(fields)}", lineno)
        wf, lemma, msd = (f.strip() for f in fields)
        if equals_shorthand:
            if wf == "=" and lemma == "=":
                raise LexiconError("word-form and lemma cannot both be '='", lineno)
            if wf == "=":
                wf = lemma
            elif lemma == "=":
                lemma = wf
        for name, value in (("word-form", wf), ("lemma", lemma), ("MSD", msd)):
            if not value:
                raise LexiconError(f"empty {name} field", lineno)
        entries.append(LexiconEntry(wf, lemma, msd, lineno))
    return Lexicon(language.lower(), tuple(entries))


def emit_lexicon(lex: Lexicon, separator: str = "\t") -> str:
    return "".join(separator.join(e.triple) + "\n" for e in lex.entries)


def validate_lexicon(lex: Lexicon, spec: Specification, ordering=None, lenient=False) -> Report:
    """Check every MSD against the spec; duplicates and unindexed MSDs are warnings."""
    if ordering is None:
        ordering = default_ordering(spec, lex.language)
    report = Report()
    checks = {}
    for msd in lex.msds():
        checks[msd] = codec.check_msd(msd, spec, lex.language, ordering, lenient)
    index = None
    if spec.has_section(lex.language) and spec.section(lex.language).msd_index is not None:
        index = {e.msd for e in spec.section(lex.language).msd_index}
    seen = set()
    for e in lex.entries:
        where = f"line {e.lineno}" if e.lineno else e.word_form
        check = checks[e.msd]
        if not check.valid:
            report.error(check.code or "invalid-msd", where, f"{e.msd}: {check.reason}")
        elif index is not None and e.msd not in index:
            report.warning("not-in-index", where, f"{e.msd} valid but absent from the {lex.language} MSD index")
        if e.triple in seen:
            report.warning("duplicate-entry", where, "\t".join(e.triple))
        seen.add(e.triple)
    return report


def build_msd_index(lex: Lexicon, spec: Specification, corpus=None, ordering=None) -> list:
    """One :class:`MsdIndexEntry` per distinct MSD of the lexicon (and corpus).

    With a corpus, counts are token and word-form type frequencies and the
    examples are the most frequent ``word/lemma`` pairs, ties broken by word
    form.  Without one, counts stay empty and examples come from the lexicon
    in alphabetical order.
    """
    if ordering is None:
        ordering = default_ordering(spec, lex.language)
    language = lex.language
    msds = dict.fromkeys(lex.msds())
    token_counts = Counter()
    pair_counts = defaultdict(Counter)
    forms = defaultdict(set)
    if corpus is not None:
        known = {e.triple for e in lex.entries}
        for s in corpus.sentences():
            words = s.words
            for i, t in enumerate(words):
                wf = t.surface
                if i == 0 and (wf, t.lemma, t.msd_ref) not in known and (wf.lower(), t.lemma, t.msd_ref) in known:
                    wf = wf.lower()
                msds.setdefault(t.msd_ref)
                token_counts[t.msd_ref] += 1
                pair_counts[t.msd_ref][(wf, t.lemma)] += 1
                forms[t.msd_ref].add(wf)
    by_msd = defaultdict(set)
    for e in lex.entries:
        by_msd[e.msd].add((e.word_form, e.lemma))
    entries = []
    for msd in msds:
        if corpus is not None and token_counts[msd]:
            ranked = sorted(pair_counts[msd].items(), key=lambda kv: (-kv[1], kv[0][0], kv[0][1]))
            examples = tuple(pair for pair, _ in ranked[:MAX_EXAMPLES])
            entry = MsdIndexEntry(msd, token_count=token_counts[msd], type_count=len(forms[msd]), examples=examples)
        else:
            examples = tuple(sorted(by_msd[msd])[:MAX_EXAMPLES])
            if corpus is not None:
                entry = MsdIndexEntry(msd, token_count=0, type_count=0, examples=examples)
            else:
                entry = MsdIndexEntry(msd, examples=examples)
        entries.append(entry)
    return sorted(entries, key=lambda e: _index_key(e.msd, spec, language, ordering))


def _index_key(msd, spec, language, ordering):
    # invalid MSDs go last, in code-point order
    try:
        return (0, codec.collation_key(codec.Msd(msd, language, ordering), spec, lenient=True), msd)
    except MsdError:
        return (1, (), msd)


def index_tabular(entries, provenance: str = "") -> str:
    """Index rows in the ``MSD`` record syntax of the tabular spec format."""
    out = []
    if provenance:
        out.append(f"# counts: {provenance}")
    for e in entries:
        tok = "-" if e.token_count is None else str(e.token_count)
        typ = "-" if e.type_count is None else str(e.type_count)
        line = f"MSD {e.msd} {tok} {typ}"
        if e.examples:
            line += " " + ",".join(f"{w}/{l}" for w, l in e.examples)
        out.append(line)
    return "".join(line + "\n" for line in out)


def index_tei(entries, spec: Specification, language: str, provenance: str = "") -> str:
    """Index rows as a TEI ``table n="msd.index"`` with verbose expansions filled in."""
    table = ET.Element("table", {"n": "msd.index", "select": language})
    if provenance:
        table.append(ET.Comment(f" counts: {provenance} "))
    for e in entries:
        filled, _ = fill_index_entry(spec, language, e)
        index_row(table, filled, language)
    return to_string(table)
