"""Random valid MSDs built straight from the tables, without the encoder."""

import random

from msdtools.model import COMMON, PARTICULAR


def _choices(spec, lang, code, attr):
    values = [v for v in attr.values if lang in v.languages]
    if spec.has_section(lang) and spec.section(lang).table(code) is not None:
        la = spec.section(lang).table(code).attribute(attr.name)
        values = [v for v in values if la is not None and la.value(v.code) is not None]
    return values


def _string(head, chars):
    length = max(chars, default=0)
    return head + "".join(chars.get(p, "-") for p in range(1, length + 1))


def sample(spec, lang, code, rng, density=0.6):
    """One feature assignment plus its strings: {ordering: msd}, localised msd (or None)."""
    section = spec.section(lang) if spec.has_section(lang) else None
    table = section.table(code) if section else None
    common = spec.positions(lang, code, COMMON)
    usable = {a.name for a in common.values()}
    if table is not None:
        usable &= {la.name for la in table.attributes}
    assignments = {}
    for pos in sorted(common):
        attr = common[pos]
        if attr.name not in usable:
            continue
        choices = _choices(spec, lang, code, attr)
        if choices and rng.random() < density:
            assignments[attr.name] = rng.choice(choices)
    strings = {}
    for ordering in (COMMON, PARTICULAR) if table is not None else (COMMON,):
        where = {a.name: p for p, a in spec.positions(lang, code, ordering).items()}
        strings[ordering] = _string(code, {where[n]: v.code for n, v in assignments.items()})
    localised = None
    if table is not None and section.is_localised:
        where = {la.name: la.position for la in table.attributes}
        chars = {where[n]: table.attribute(n).value(v.code).localised_code for n, v in assignments.items()}
        localised = _string(table.localised_code, chars)
    names = {n: v.name for n, v in assignments.items()}
    return names, strings, localised


def valid_msds(spec, count=400, seed=1234, languages=None):
    """Distinct (language, ordering, msd, names) tuples, at least ``count`` of them when possible."""
    rng = random.Random(seed)
    languages = sorted(languages or spec.languages)
    seen = {}
    attempts = 0
    while len(seen) < count and attempts < count * 50:
        attempts += 1
        lang = rng.choice(languages)
        cats = [c.code for c in spec.categories if lang in spec.category_languages(c.code)]
        code = rng.choice(cats)
        names, strings, _ = sample(spec, lang, code, rng)
        for ordering, msd in strings.items():
            seen.setdefault((lang, ordering, msd), names)
    return [(lang, ordering, msd, names) for (lang, ordering, msd), names in sorted(seen.items())]


def all_msds(spec, lang, ordering=COMMON, limit=100000, categories=None):
    """Exhaustive tagset of a language in one ordering (small specs only)."""
    out = []
    for cat in spec.categories:
        if lang not in spec.category_languages(cat.code) or (categories and cat.code not in categories):
            continue
        positions = spec.positions(lang, cat.code, ordering)
        options = []
        for pos in range(1, max(positions, default=0) + 1):
            attr = positions.get(pos)
            options.append([None] + ([v.code for v in _choices(spec, lang, cat.code, attr)] if attr else []))
        partial = [""]
        for opts in options:
            partial = [p + (o or "-") for p in partial for o in opts]
            if len(partial) > limit:
                raise ValueError("tagset too large to enumerate")
        out.extend(sorted({cat.code + p.rstrip("-") for p in partial}))
    return out
