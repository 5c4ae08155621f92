import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import msdgen
from msdtools import codec
from msdtools.codec import Msd, decode, encode, expand
from msdtools.errors import MsdError
from msdtools.model import COMMON, PARTICULAR


def fs_of(spec, text, lang=None, ordering=COMMON, localised=False):
    return decode(Msd(text, lang, ordering, localised), spec)


def test_decode_ncndl(spec):
    fs = fs_of(spec, "Ncndl", "sl")
    assert fs.category_code == "N"
    assert fs.assignments == {"Type": "common", "Gender": "neuter", "Number": "dual", "Case": "locative"}


def test_decode_adverb_particle(spec):
    fs = fs_of(spec, "Rp-y")
    assert fs.assignments == {"Type": "particle", "Clitic": "yes"}
    assert "Degree" not in fs.assignments


def test_bare_category(spec):
    assert fs_of(spec, "N").assignments == {}
    assert encode(codec.FeatureStructure(None, "N", {}), spec).text == "N"


def test_three_forms_of_one_verb(spec):
    common = fs_of(spec, "Vmn-----------e", "sl")
    particular = fs_of(spec, "Vmen", "sl", PARTICULAR)
    localised = fs_of(spec, "Ggdn", "sl", PARTICULAR, localised=True)
    assert common == particular == localised
    assert common.assignments == {"Type": "main", "VForm": "infinitive", "Aspect": "perfective"}
    assert encode(common, spec, COMMON).text == "Vmn-----------e"
    assert encode(common, spec, PARTICULAR).text == "Vmen"
    assert encode(common, spec, PARTICULAR, localise=True).text == "Ggdn"


def test_relocalise(spec):
    sosdm = codec.relocalise(Msd("Ncndl", "sl", PARTICULAR), spec, codec.NATIVE)
    assert sosdm.text == "Sosdm"
    assert codec.relocalise(Msd("Ncmsg", "sl", PARTICULAR), spec).text == "Somer"
    back = codec.relocalise(sosdm, spec, codec.ENGLISH)
    assert back.text == "Ncndl"


def test_expand_minimal(spec):
    exp = expand(Msd("Vmn-----------e", "sl"), spec, codec.MINIMAL)
    assert str(exp) == "Verb Type=main Aspect=perfective VForm=infinitive"


def test_expand_minimal_localised(spec):
    exp = expand(Msd("Vmen", "sl", PARTICULAR), spec, codec.MINIMAL_LOCALISED)
    assert str(exp) == "glagol vrsta=glavni vid=dovršni oblika=nedoločnik"
    assert exp.fallbacks == 0


def test_expand_verbose_string(spec):
    text = expand(Msd("Ncmsg", "sl", PARTICULAR), spec, codec.VERBOSE_STRING)
    assert text == "Noun Type=common Gender=masculine Number=singular Case=genitive"


def test_expand_canonical_forms(spec):
    exp = expand(Msd("Vmen", "sl", PARTICULAR), spec, codec.CANONICAL_LANGUAGE)
    feats = exp.as_dict()
    assert feats["Aspect"] == "perfective" and feats["VForm"] == "infinitive"
    assert feats["Case"] == codec.ABSENT
    assert list(feats) == spec.language_attributes("sl")
    universal = expand(Msd("Vmen", "sl", PARTICULAR), spec, codec.CANONICAL_UNIVERSAL)
    assert len(universal.features) == len(spec.universal_attributes())
    assert "Formation" in universal.as_dict()


def test_localised_fallback_counts(spec):
    # en has no localisation: every item falls back to English
    exp = expand(Msd("Ncp", "en", PARTICULAR), spec, codec.MINIMAL_LOCALISED)
    assert str(exp) == "Noun Type=common Number=plural"
    assert exp.fallbacks == 3


def test_parse_features_round_trip(spec):
    fs = codec.parse_features("Verb Type=main Aspect=perfective VForm=infinitive", spec, "sl")
    assert encode(fs, spec, PARTICULAR).text == "Vmen"


def test_sort_small(spec):
    assert codec.sort_msds(["Vmen", "Ncmsn", "Ncmsg"], spec, "sl", PARTICULAR) == ["Ncmsn", "Ncmsg", "Vmen"]
    assert codec.sort_msds(["Ncmsn"], spec, "sl") == ["Ncmsn"]


def test_collation_keys_distinct(spec):
    tagset = msdgen.all_msds(spec, "en", PARTICULAR)
    keys = {codec.collation_key(Msd(m, "en", PARTICULAR), spec) for m in tagset}
    assert len(keys) == len(tagset)


def test_english_tagset_fixture(spec, data):
    lines = [l for l in (data / "en-tagset.txt").read_text().splitlines() if l and not l.startswith("#")]
    checks = codec.validate_msd_list(lines, spec, "en", PARTICULAR)
    assert len(checks) == 135
    assert sum(c.valid for c in checks) == 135


@pytest.mark.parametrize(
    "text, reason",
    [
        ("", "empty"),
        ("Zxx", "unknown-category"),
        ("Ncmsn----", "trailing-hyphens"),
        ("Ncmsx", "invalid-code"),
        ("Ncmsnnyy", "too-long"),
    ],
)
def test_invalid(spec, text, reason):
    check = codec.check_msd(text, spec, "sl")
    assert not check.valid
    assert check.code == reason


def test_trailing_hyphens(spec):
    strict = codec.check_msd("Ncmsn----", spec, "sl")
    assert strict.reason == "non-canonical trailing hyphens"
    lenient = codec.check_msd("Ncmsn----", spec, "sl", lenient=True)
    assert lenient.valid and lenient.normalised == "Ncmsn"
    assert codec.check_msd(lenient.normalised, spec, "sl").valid


def test_invalid_code_message(spec):
    with pytest.raises(MsdError, match="invalid value code 'x' at position 4"):
        fs_of(spec, "Ncmsx", "sl")


def test_value_not_flagged_for_language(spec):
    # dual is Slovene only
    assert codec.check_msd("Ncnd", spec, "sl").valid
    assert codec.check_msd("Ncnd", spec, "ru").code == "not-flagged"


def test_language_prefix(spec):
    assert codec.check_msd("ru:Ncnd", spec).code == "not-flagged"
    assert codec.check_msd("sl:Ncnd", spec).valid


def test_particular_needs_section(spec):
    assert codec.check_msd("Ncmsn", spec, "ru", PARTICULAR).code == "no-ordering"


def test_check_line_format(spec):
    assert codec.check_msd("Ncmsn", spec, "sl").line() == "Ncmsn\tvalid\tNcmsn"
    assert codec.check_msd("Zxx", spec).line().startswith("Zxx\tinvalid\t")


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), lang=st.sampled_from(["bg", "en", "mk", "ru", "sl"]))
def test_property_round_trip(spec, seed, lang):
    import random

    rng = random.Random(seed)
    cats = [c.code for c in spec.categories if lang in spec.category_languages(c.code)]
    names, strings, localised = msdgen.sample(spec, lang, rng.choice(cats), rng)
    decoded = {o: decode(Msd(m, lang, o), spec) for o, m in strings.items()}
    for ordering, msd in strings.items():
        assert decoded[ordering].assignments == names
        assert encode(decoded[ordering], spec, ordering).text == msd
        assert not encode(decoded[ordering], spec, ordering).text.endswith("-")
    assert len({tuple(sorted(fs.assignments.items())) for fs in decoded.values()}) == 1
    if localised is not None:
        fs = decode(Msd(localised, lang, PARTICULAR, True), spec)
        assert fs.assignments == names
        assert encode(fs, spec, PARTICULAR, localise=True).text == localised


def test_collation_matches_tuple_sort(spec):
    tagset = msdgen.all_msds(spec, "en", PARTICULAR)
    cat_rank = {c.code: i for i, c in enumerate(spec.categories)}

    def oracle(m):
        positions = spec.positions("en", m[0], PARTICULAR)
        ranks = []
        for pos in range(1, max(positions, default=0) + 1):
            ch = m[pos] if pos < len(m) else "-"
            codes = [v.code for v in positions[pos].values]
            ranks.append(0 if ch == "-" else codes.index(ch) + 1)
        return (cat_rank[m[0]], ranks)

    shuffled = list(reversed(tagset))
    assert codec.sort_msds(shuffled, spec, "en", PARTICULAR) == sorted(shuffled, key=oracle)


def test_all_pairs_distinct_keys_sl_nouns(spec):
    nouns = msdgen.all_msds(spec, "sl", PARTICULAR, categories={"N"})
    keys = {codec.collation_key(Msd(m, "sl", PARTICULAR), spec) for m in nouns}
    assert len(nouns) == 3 * 4 * 4 * 7 * 3  # each attribute: its sl values or unset
    assert len(keys) == len(nouns)
