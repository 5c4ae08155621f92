"""Command-line front-end: ``msdtools <group> <command> [options]``.

Exit status is 0 on success, 1 when a report contains error findings (or an
MSD fails to decode), and 2 on usage or input/output failures.  Reports go to
standard output, diagnostics to standard error.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import alignment, codec, corpus, lexicon, spec_ops
from .errors import MsdError, MsdToolsError
from .model import COMMON, ORDERINGS, check_spec, spec_stats
from .reports import Report, tsv
from .spec_model import FORMATS, emit_section, emit_spec, load_section, load_spec

EXIT_OK, EXIT_FINDINGS, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# --- helpers -------------------------------------------------------------------


def _read(path, mode="r"):
    try:
        with open(path, mode, **({} if "b" in mode else {"encoding": "utf-8"})) as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _guess_format(path, explicit=None):
    if explicit:
        return explicit
    return "tei" if path.lower().endswith(".xml") else "tabular"


def _spec(args, path=None):
    path = path or args.spec
    if not path:
        raise UsageError("--spec FILE is required")
    return load_spec(_read(path, "rb"), _guess_format(path, getattr(args, "format", None)), name=path)


def _write(args, text, out):
    target = getattr(args, "output", None)
    if target:
        try:
            with open(target, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise UsageError(f"cannot write {target}: {exc.strerror}") from None
    else:
        out.write(text)


def _report(args, report: Report, out) -> int:
    _write(args, report.human() if args.human else report.text(), out)
    return EXIT_OK if report.ok else EXIT_FINDINGS


def _input_lines(args, stdin):
    if args.items:
        return list(args.items)
    return [line.strip() for line in stdin.read().splitlines() if line.strip()]


def _msd(text, args, ordering=None):
    lang, body = codec.split_language_prefix(text)
    return codec.Msd(body, lang or args.lang, ordering or args.ordering or COMMON, args.localise)


def _figure(kind, data, path):
    from . import figures  # matplotlib is only imported when a figure is asked for

    return getattr(figures, kind)(data, path)


# --- spec ------------------------------------------------------------------------


def cmd_spec_validate(args, out, err):
    report = Report()
    try:
        spec = _spec(args)
    except MsdToolsError as exc:
        report.error("load-error", args.spec, str(exc))
        return _report(args, report, out)
    return _report(args, check_spec(spec), out)


def cmd_spec_stats(args, out, err):
    stats = spec_stats(_spec(args))
    rows = [("category", "name", "attributes", "values", "languages")]
    rows += [(s.code, s.name, s.attributes, s.values, s.languages) for s in stats]
    _write(args, tsv(rows), out)
    if args.figure:
        _figure("spec_stats_figure", stats, args.figure)
    return EXIT_OK


def cmd_spec_split(args, out, err):
    spec = _spec(args)
    seeds = [s for s in args.seed.split(",") if s]
    section = spec_ops.split(spec, seeds, args.new)
    _write(args, emit_section(section, args.format or "tabular", spec), out)
    return EXIT_OK


def cmd_spec_merge(args, out, err):
    spec = _spec(args)
    section = load_section(_read(args.section, "rb"), _guess_format(args.section, args.format), name=args.section)
    try:
        merged, warnings = spec_ops.merge(spec, section)
    except MsdToolsError as exc:
        if type(exc).__name__ != "MergeConflict":
            raise
        report = Report()
        report.error("merge-conflict", args.section, str(exc))
        return _report(args, report, out)
    err.write(spec_ops.changes_text(warnings))
    _write(args, emit_spec(merged, args.format or _guess_format(args.spec)), out)
    return EXIT_OK


def cmd_spec_diff(args, out, err):
    a = load_spec(_read(args.old, "rb"), _guess_format(args.old, args.format), name=args.old)
    b = load_spec(_read(args.new, "rb"), _guess_format(args.new, args.format), name=args.new)
    _write(args, spec_ops.changes_text(spec_ops.diff(a, b)), out)
    return EXIT_OK


def cmd_spec_render(args, out, err):
    _write(args, spec_ops.render_report(_spec(args), args.lang), out)
    return EXIT_OK


# --- msd -------------------------------------------------------------------------


def _per_line(args, stdin, out, fn):
    status = EXIT_OK
    lines = []
    for text in _input_lines(args, stdin):
        try:
            lines.append(f"{text}\t{fn(text)}")
        except MsdError as exc:
            lines.append(f"{text}\tinvalid\t{exc}")
            status = EXIT_FINDINGS
    _write(args, "".join(line + "\n" for line in lines), out)
    return status


def cmd_msd_decode(args, out, err, stdin):
    spec = _spec(args)

    def fn(text):
        fs = codec.decode(_msd(text, args), spec, args.lenient)
        return f"{fs.category_code}\t" + " ".join(f"{k}={v}" for k, v in fs.assignments.items())

    return _per_line(args, stdin, out, fn)


def cmd_msd_encode(args, out, err, stdin):
    spec = _spec(args)

    def fn(text):
        fs = codec.parse_features(text, spec, args.lang)
        return codec.encode(fs, spec, args.ordering or COMMON, args.localise).text

    return _per_line(args, stdin, out, fn)


def cmd_msd_expand(args, out, err, stdin):
    spec = _spec(args)
    status = EXIT_OK
    lines = []
    for text in _input_lines(args, stdin):
        try:
            lines.append(str(codec.expand(_msd(text, args), spec, args.form, args.lenient)))
        except MsdError as exc:
            err.write(f"{text}: {exc}\n")
            lines.append(f"{text}\tinvalid\t{exc}")
            status = EXIT_FINDINGS
    _write(args, "".join(line + "\n" for line in lines), out)
    return status


def cmd_msd_sort(args, out, err, stdin):
    spec = _spec(args)
    items = _input_lines(args, stdin)
    try:
        ordered = sorted(items, key=lambda t: codec.collation_key(_msd(t, args), spec, args.lenient))
    except MsdError as exc:
        err.write(f"cannot sort: {exc}\n")
        return EXIT_FINDINGS
    _write(args, "".join(t + "\n" for t in ordered), out)
    return EXIT_OK


def cmd_msd_validate(args, out, err, stdin):
    spec = _spec(args)
    checks = codec.validate_msd_list(_input_lines(args, stdin), spec, args.lang, args.ordering or COMMON,
                                     args.lenient, args.localise)
    if args.human:
        text = "".join(f"{c.msd}: {'valid' if c.valid else 'invalid (' + c.reason + ')'}\n" for c in checks)
    else:
        text = "".join(c.line() + "\n" for c in checks)
    _write(args, text, out)
    return EXIT_OK if all(c.valid for c in checks) else EXIT_FINDINGS


def cmd_msd_relocalise(args, out, err, stdin):
    spec = _spec(args)

    def fn(text):
        return codec.relocalise(_msd(text, args), spec, args.to, args.lenient).text

    return _per_line(args, stdin, out, fn)


# --- lex ---------------------------------------------------------------------------


def _lexicon(args):
    if not args.lang:
        raise UsageError("--lang is required for lexicon commands")
    sep = None if args.separator == "whitespace" else args.separator.encode().decode("unicode_escape")
    return lexicon.load_lexicon(_read(args.lexicon), args.lang, sep, args.equals)


def cmd_lex_validate(args, out, err):
    spec = _spec(args)
    return _report(args, lexicon.validate_lexicon(_lexicon(args), spec, args.ordering, args.lenient), out)


def cmd_lex_index(args, out, err):
    spec = _spec(args)
    lex = _lexicon(args)
    corp = None
    if args.corpus:
        corp = corpus.load_corpus(_read(args.corpus, "rb"))
    entries = lexicon.build_msd_index(lex, spec, corp, args.ordering)
    provenance = os.path.basename(args.corpus) if args.corpus else ""
    if args.format == "tei":
        text = lexicon.index_tei(entries, spec, lex.language, provenance)
    else:
        text = lexicon.index_tabular(entries, provenance)
    _write(args, text, out)
    if args.figure:
        _figure("msd_frequency_figure", entries, args.figure)
    return EXIT_OK


# --- corpus -------------------------------------------------------------------------


def _load_corpus(args, report=None):
    return corpus.load_corpus(_read(args.corpus_file, "rb"), strict=args.strict, report=report)


def cmd_corpus_validate(args, out, err):
    report = Report()
    corp = _load_corpus(args, report)
    spec = _spec(args) if args.spec else None
    report.extend(corpus.validate_corpus(corp, spec))
    return _report(args, report, out)


def cmd_corpus_attach(args, out, err):
    spec = _spec(args)
    corp = _load_corpus(args)
    try:
        corp = corpus.attach_libraries(corp, spec)
    except MsdToolsError as exc:
        report = Report()
        report.error("invalid-msd", args.corpus_file, str(exc))
        return _report(args, report, out)
    _write(args, corpus.emit_corpus(corp), out)
    return EXIT_OK


def cmd_corpus_stats(args, out, err):
    stats = corpus.corpus_stats(_load_corpus(args))
    rows = [("level", "id", "words", "punctuation", "tokens", "types", "msds")]

    def row(level, ident, c):
        return (level, ident, c.words, c.punctuation, c.tokens, c.types, c.msds)

    rows.append(row("corpus", "-", stats.corpus))
    rows += [row("div", k, v) for k, v in stats.divisions.items()]
    rows += [row("s", k, v) for k, v in stats.sentences.items()]
    _write(args, tsv(rows), out)
    if args.figure:
        _figure("corpus_stats_figure", stats, args.figure)
    return EXIT_OK


# --- align --------------------------------------------------------------------------


def _group(path, report=None):
    return alignment.load_alignment(_read(path, "rb"), report)


def _emit_group(args, group, out, err):
    _write(args, alignment.emit_alignment(group), out)
    nulls = alignment.null_link_report(group)
    if args.nulls:
        try:
            with open(args.nulls, "w", encoding="utf-8") as fh:
                fh.write(nulls)
        except OSError as exc:
            raise UsageError(f"cannot write {args.nulls}: {exc.strerror}") from None
    return EXIT_OK


def cmd_align_validate(args, out, err):
    report = Report()
    group = _group(args.group, report)
    corpora = {}
    for spec in args.corpus or []:
        label, sep, path = spec.partition("=")
        if not sep:
            label, path = os.path.basename(spec), spec
        corpora[label] = corpus.load_corpus(_read(path, "rb"))
    report.extend(alignment.validate_alignment(group, corpora))
    return _report(args, report, out)


def cmd_align_compose(args, out, err):
    group = alignment.compose(_group(args.hub_x), _group(args.hub_y), args.hub)
    return _emit_group(args, group, out, err)


def cmd_align_multiway(args, out, err):
    groups = [_group(p) for p in args.groups]
    group = alignment.compose_multiway(groups, args.include_hub, args.hub)
    return _emit_group(args, group, out, err)


# --- parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", metavar="FILE", help="specification file (.xml is read as TEI)")
    common.add_argument("--format", choices=FORMATS, help="spec serialisation (default: by file extension)")
    common.add_argument("--ordering", choices=ORDERINGS, help="positional ordering of MSDs")
    common.add_argument("--lang", help="language code")
    common.add_argument("--localise", action="store_true", help="MSDs use localised codes")
    common.add_argument("--lenient", action="store_true", help="accept trailing hyphens")
    common.add_argument("--human", action="store_true", help="prose reports instead of tab-separated lines")
    common.add_argument("-o", "--output", metavar="FILE", help="write the result here instead of stdout")

    parser = argparse.ArgumentParser(prog="msdtools", description="Morphosyntactic specification toolkit.")
    groups = parser.add_subparsers(dest="group", required=True, metavar="GROUP")

    def sub(group, name, fn, help, stdin=False):
        p = group.add_parser(name, parents=[common], help=help)
        p.set_defaults(fn=fn, wants_stdin=stdin)
        return p

    spec = groups.add_parser("spec", help="specification tables").add_subparsers(dest="cmd", required=True, metavar="CMD")
    sub(spec, "validate", cmd_spec_validate, "check internal consistency")
    p = sub(spec, "stats", cmd_spec_stats, "per-category counts")
    p.add_argument("--figure", metavar="PNG", help="also draw a bar chart")
    p = sub(spec, "split", cmd_spec_split, "derive a new language section")
    p.add_argument("--seed", required=True, help="comma-separated seed languages")
    p.add_argument("--new", required=True, help="code of the new language")
    p = sub(spec, "merge", cmd_spec_merge, "merge a language section")
    p.add_argument("section")
    p = sub(spec, "diff", cmd_spec_diff, "structural differences")
    p.add_argument("old")
    p.add_argument("new")
    sub(spec, "render", cmd_spec_render, "markdown document")

    msd = groups.add_parser("msd", help="MSD strings").add_subparsers(dest="cmd", required=True, metavar="CMD")
    for name, fn, help in (
        ("decode", cmd_msd_decode, "MSD to features"),
        ("encode", cmd_msd_encode, "features ('Noun Type=common ...') to MSD"),
        ("expand", cmd_msd_expand, "feature listing"),
        ("sort", cmd_msd_sort, "collation order"),
        ("validate", cmd_msd_validate, "check MSDs"),
        ("relocalise", cmd_msd_relocalise, "switch code language"),
    ):
        p = sub(msd, name, fn, help, stdin=True)
        p.add_argument("items", nargs="*", help="inputs (default: one per line on stdin)")
        if name == "expand":
            p.add_argument("--form", choices=codec.FORMS, default=codec.MINIMAL)
        if name == "relocalise":
            p.add_argument("--to", choices=(codec.ENGLISH, codec.NATIVE), default=codec.NATIVE)

    lex = groups.add_parser("lex", help="word-form lexicons").add_subparsers(dest="cmd", required=True, metavar="CMD")
    for name, fn, help in (("validate", cmd_lex_validate, "check entries"), ("index", cmd_lex_index, "build an MSD index")):
        p = sub(lex, name, fn, help)
        p.add_argument("lexicon")
        p.add_argument("--separator", default="\\t", help="field separator, or 'whitespace'")
        p.add_argument("--equals", action="store_true", help="'=' abbreviates a field equal to the other")
        if name == "index":
            p.add_argument("--corpus", metavar="FILE", help="annotated corpus supplying counts")
            p.add_argument("--figure", metavar="PNG", help="also draw MSD frequencies")

    corp = groups.add_parser("corpus", help="annotated corpora").add_subparsers(dest="cmd", required=True, metavar="CMD")
    for name, fn, help in (
        ("validate", cmd_corpus_validate, "cross-check annotation and libraries"),
        ("attach-fslib", cmd_corpus_attach, "regenerate fLib/fvLib"),
        ("stats", cmd_corpus_stats, "token counts"),
    ):
        p = sub(corp, name, fn, help)
        p.add_argument("corpus_file", metavar="corpus")
        p.add_argument("--strict", action="store_true", help="reject unknown elements")
        if name == "stats":
            p.add_argument("--figure", metavar="PNG", help="also draw a bar chart")

    align = groups.add_parser("align", help="sentence alignments").add_subparsers(dest="cmd", required=True, metavar="CMD")
    p = sub(align, "validate", cmd_align_validate, "check links against corpora")
    p.add_argument("group")
    p.add_argument("--corpus", action="append", metavar="[DOC=]FILE", help="corpus for a slot (repeatable)")
    for name, fn, help in (("compose", cmd_align_compose, "pairwise via a hub"),
                           ("compose-multiway", cmd_align_multiway, "multi-way via a hub")):
        p = sub(align, name, fn, help)
        if name == "compose":
            p.add_argument("hub_x")
            p.add_argument("hub_y")
        else:
            p.add_argument("groups", nargs="+")
            p.add_argument("--include-hub", action="store_true")
        p.add_argument("--hub", help="hub document label (default: the shared one)")
        p.add_argument("--nulls", metavar="FILE", help="write the null-link report here")
    return parser


def run(argv=None, stdin=None, stdout=None, stderr=None) -> int:
    stdin = stdin or sys.stdin
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        if args.wants_stdin:
            return args.fn(args, out, err, stdin)
        return args.fn(args, out, err)
    except (UsageError, MsdToolsError) as exc:
        err.write(f"msdtools: {exc}\n")
        return EXIT_USAGE


def main(argv=None) -> int:
    sys.exit(run(argv))
