import pytest

from msdtools import corpus as C
from msdtools.errors import CorpusError
from msdtools.reports import Report

WRAP = '<text xml:id="T." xml:lang="sl"><body><div type="d" xml:id="T.1"><p xml:id="T.1.1">{}</p></div></body></text>'


def one_sentence(inner):
    return C.load_corpus(WRAP.format(f'<s xml:id="T.1.1.1">{inner}</s>').encode())


def test_word_and_punctuation_tokens():
    corp = one_sentence('<w lemma="dan" ana="#Ncmsn">dan</w><c>,</c>')
    w, c = next(corp.sentences()).tokens
    assert (w.kind, w.surface, w.lemma, w.msd_ref) == (C.WORD, "dan", "dan", "Ncmsn")
    assert (c.kind, c.surface) == (C.PUNCT, ",")


def test_empty_sentence_warns():
    report = Report()
    corp = C.load_corpus(WRAP.format('<s xml:id="T.1.1.1"/>').encode(), report=report)
    assert next(corp.sentences()).tokens == ()
    assert report.codes("warning") == ["empty-sentence"]


def test_unknown_markup_permissive_and_strict():
    text = WRAP.format('<s xml:id="T.1.1.1"><name><w lemma="Julia" ana="#Npfsn">Julia</w></name></s><note>x</note>')
    report = Report()
    corp = C.load_corpus(text.encode(), report=report)
    assert [t.surface for t in corp.tokens()] == ["Julia"]
    assert "unknown-element" in report.codes("warning")
    with pytest.raises(CorpusError):
        C.load_corpus(text.encode(), strict=True)


def test_fragment_structure(fragment):
    assert fragment.language == "sl"
    assert fragment.sentence_ids() == ["Osl.1.2.2.1"]
    assert [t.surface for t in fragment.tokens()] == ["Bil", "je", "jasen", ",", "mrzel", "aprilski", "dan"]


def test_fragment_validates_after_attach(fragment, spec):
    attached = C.attach_libraries(fragment, spec)
    assert C.validate_corpus(attached, spec).findings == []
    assert {s.id for s in attached.back_matter.structures} == fragment.msd_refs()


def test_attach_single_msd(spec):
    corp = C.attach_libraries(one_sentence('<w lemma="dan" ana="#Ncmsn">dan</w>'), spec)
    assert [s.id for s in corp.back_matter.structures] == ["Ncmsn"]


def test_attach_two_nouns(spec):
    corp = C.attach_libraries(
        one_sentence('<w lemma="dan" ana="#Ncmsn">dan</w><w lemma="dan" ana="#Ncmsg">dneva</w>'), spec
    )
    ids = corp.back_matter.feature_ids()
    assert {"N4.n", "N4.g"} <= ids
    assert [f.id for f in corp.back_matter.features].count("N0.") == 1


def test_attach_invalid_msd_names_token(spec):
    corp = one_sentence('<w lemma="dan" ana="#Ncmsn">dan</w><w xml:id="T.1.1.1.2" lemma="x" ana="#Ncmsz">x</w>')
    with pytest.raises(CorpusError, match="T.1.1.1.2"):
        C.attach_libraries(corp, spec)
    with pytest.raises(CorpusError, match=r"T\.1\.1\.1\[1\]"):
        C.attach_libraries(one_sentence('<w lemma="x" ana="#Ncmsz">x</w>'), spec)


def test_dangling_reference(data):
    text = (data / "mini-corpus-libs.xml").read_text().replace('ana="#Cc"', 'ana="#Xqq"')
    report = C.validate_corpus(C.load_corpus(text.encode()))
    assert report.codes("error") == ["dangling-reference"]


def test_corrupted_feats_detected(data, spec):
    text = (data / "mini-corpus-libs.xml").read_text()
    good = 'feats="#N0. #N1.c #N2.m #N3.s #N4.n"'
    assert good in text
    corp = C.load_corpus(text.replace(good, 'feats="#N0. #N1.c #N2.m #N3.s"').encode())
    report = C.validate_corpus(corp, spec)
    assert [(f.code, f.path) for f in report.errors] == [("decomposition-mismatch", "fvLib/Ncmsn")]


def test_dangling_feature(data):
    text = (data / "mini-corpus-libs.xml").read_text().replace("#N4.n", "#N4.q")
    report = C.validate_corpus(C.load_corpus(text.encode()))
    assert report.codes("error") == ["dangling-feature"]


def test_hierarchy_and_duplicates():
    text = WRAP.format('<s xml:id="T.2.1"><c>.</c></s><s xml:id="T.1.1.1"><c>.</c></s><s xml:id="T.1.1.1"><c>.</c></s>')
    codes = C.validate_corpus(C.load_corpus(text.encode())).codes("error")
    assert "id-hierarchy" in codes and "duplicate-id" in codes


def test_extends():
    assert C.extends("Osl.", "Osl.1")
    assert C.extends("Osl.1.2", "Osl.1.2.2")
    assert not C.extends("Osl.1", "Osl.12")
    assert not C.extends("Osl.1", "Osl.1")


def test_round_trip_byte_identical(data):
    text = (data / "mini-corpus-libs.xml").read_text()
    assert C.emit_corpus(C.load_corpus(text.encode())) == text


def test_stats_fragment(fragment):
    stats = C.corpus_stats(fragment)
    assert (stats.corpus.words, stats.corpus.punctuation) == (6, 1)
    assert stats.sentences["Osl.1.2.2.1"].tokens == 7


def test_stats_additive(data):
    corp = C.load_corpus((data / "mini-corpus.xml").read_bytes())
    stats = C.corpus_stats(corp)
    assert stats.corpus.tokens == sum(c.tokens for c in stats.sentences.values()) == 11
    assert stats.corpus.words == sum(c.words for c in stats.divisions.values()) == 9


def test_stats_empty():
    corp = C.load_corpus(b'<text xml:id="E." xml:lang="sl"><body/></text>')
    stats = C.corpus_stats(corp)
    assert (stats.corpus.words, stats.corpus.punctuation, stats.corpus.types, stats.corpus.msds) == (0, 0, 0, 0)
