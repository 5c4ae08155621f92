"""Sentence alignments: ``linkGrp`` parsing, validation and hub composition.

A link relates sentence sets across the documents named in the group's
``corresp``.  A link with an empty slot is a null-link; since a TEI
``@targets`` needs two or more URIs, null-links are written as comments.

Composition builds the finest partition of hub sentences in which every
source link's hub sentences fall in one block, and turns each block into one
output link.
"""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from typing import Iterable, Optional
from xml.sax.saxutils import quoteattr

from .errors import AlignmentError
from .reports import Report

_COMMENT_LINK_RE = re.compile(r'^\s*link\s+n="([^"]*)"\s+targets="([^"]*)"\s*/?\s*$', re.S)


def id_key(ident: str) -> tuple:
    """Document-order key for dotted identifiers such as ``Osl.1.2.2.1``."""
    out = []
    for seg in ident.split("."):
        if seg.isdigit():
            out.append((0, int(seg), ""))
        else:
            out.append((1, 0, seg))
    return tuple(out)


@dataclass(frozen=True)
class AlignmentLink:
    targets: tuple  # one tuple of sentence ids per slot

    @property
    def arity(self) -> tuple:
        return tuple(len(t) for t in self.targets)

    @property
    def n(self) -> str:
        return ":".join(str(a) for a in self.arity)

    @property
    def is_null(self) -> bool:
        return any(not t for t in self.targets)

    def sort_key(self):
        for i, slot in enumerate(self.targets):
            if slot:
                return (id_key(slot[0]), i)
        return ((), len(self.targets))


@dataclass(frozen=True)
class AlignmentGroup:
    language_slots: tuple  # document labels, e.g. ("oana-mk.xml", "oana-sl.xml")
    links: tuple = ()
    type: str = "alignment"

    def slot(self, doc: str) -> int:
        try:
            return self.language_slots.index(doc)
        except ValueError:
            raise AlignmentError(f"document {doc!r} not in group {self.language_slots}") from None

    @property
    def null_links(self):
        return [l for l in self.links if l.is_null]


def make_link(targets) -> AlignmentLink:
    return AlignmentLink(tuple(tuple(sorted(slot, key=id_key)) for slot in targets))


def make_group(slots, links, type="alignment") -> AlignmentGroup:
    """Build a group in canonical order, rejecting a sentence reused within one slot."""
    slots = tuple(slots)
    seen = [set() for _ in slots]
    canon = []
    for link in links:
        link = link if isinstance(link, AlignmentLink) else make_link(link)
        if len(link.targets) != len(slots):
            raise AlignmentError(f"link {link.n} has {len(link.targets)} slots, group has {len(slots)}")
        if not any(link.targets):
            continue
        for i, slot in enumerate(link.targets):
            for ident in slot:
                if ident in seen[i]:
                    raise AlignmentError(f"sentence {slots[i]}#{ident} appears in more than one link")
                seen[i].add(ident)
        canon.append(link)
    return AlignmentGroup(slots, tuple(sorted(canon, key=AlignmentLink.sort_key)), type)


def _parse_link(n, targets, docs, where):
    slots = [[] for _ in docs]
    refs = targets.split()
    for ref in refs:
        doc, sep, ident = ref.partition("#")
        if not sep or not ident:
            raise AlignmentError(f"{where}: target {ref!r} is not of the form document#id")
        if doc not in docs:
            raise AlignmentError(f"{where}: target {ref!r} names no declared document")
        slots[docs.index(doc)].append(ident)
    try:
        arity = [int(x) for x in n.split(":")]
    except ValueError:
        raise AlignmentError(f"{where}: malformed arity n={n!r}") from None
    if arity != [len(s) for s in slots]:
        raise AlignmentError(f"{where}: arity n={n!r} does not match {len(refs)} targets {':'.join(str(len(s)) for s in slots)}")
    return slots


def load_alignment(source, report: Optional[Report] = None) -> AlignmentGroup:
    """Parse a ``linkGrp``; commented-out links are kept as null-links."""
    if report is None:
        report = Report()
    if hasattr(source, "read"):
        source = source.read()
    parser = ET.XMLParser(target=ET.TreeBuilder(insert_comments=True))
    try:
        root = ET.fromstring(source, parser=parser)
    except ET.ParseError as exc:
        raise AlignmentError(f"malformed XML: {exc}") from None
    groups = [el for el in root.iter() if isinstance(el.tag, str) and el.tag.rsplit("}", 1)[-1] == "linkGrp"]
    if not groups:
        raise AlignmentError("no <linkGrp> element")
    grp = groups[0]
    docs = grp.get("corresp", "").split()
    if len(docs) < 2:
        raise AlignmentError("linkGrp@corresp must name two or more documents")
    links = []
    for i, el in enumerate(grp, 1):
        where = f"link {i}"
        if el.tag is ET.Comment:
            m = _COMMENT_LINK_RE.match(el.text or "")
            if not m:
                continue
            slots = _parse_link(m.group(1), m.group(2), docs, where)
            report.info("commented-link", " ".join(m.group(2).split()), f"n={m.group(1)} kept as null-link")
            links.append(slots)
        elif el.tag.rsplit("}", 1)[-1] == "link":
            slots = _parse_link(el.get("n", ""), el.get("targets", ""), docs, where)
            links.append(slots)
        else:
            report.warning("unknown-element", where, f"<{el.tag}> skipped")
    return make_group(docs, links, grp.get("type", "alignment"))


def _targets_attr(group, link):
    return " ".join(f"{doc}#{ident}" for doc, slot in zip(group.language_slots, link.targets) for ident in slot)


def emit_alignment(group: AlignmentGroup) -> str:
    """Canonical form: one link per line, null-links as commented links."""
    out = [f"<linkGrp type={quoteattr(group.type)} corresp={quoteattr(' '.join(group.language_slots))}>"]
    for link in group.links:
        body = f"link n={quoteattr(link.n)} targets={quoteattr(_targets_attr(group, link))}"
        if link.is_null:
            out.append(f"  <!--{body}/-->")
        else:
            out.append(f"  <{body}/>")
    out.append("</linkGrp>")
    return "\n".join(out) + "\n"


def null_link_report(group: AlignmentGroup) -> str:
    """Sidecar listing of null-links: ``NULL<TAB>n<TAB>targets``."""
    return "".join(f"NULL\t{l.n}\t{_targets_attr(group, l)}\n" for l in group.null_links)


# --- validation ----------------------------------------------------------------


def validate_alignment(group: AlignmentGroup, corpora: dict) -> Report:
    """Check targets against corpora (document label -> corpus or sentence ids).

    Reports dangling targets, unaligned sentences per slot, and crossing
    links as monotonicity warnings.
    """
    report = Report()
    orders = {}
    for i, doc in enumerate(group.language_slots):
        c = corpora.get(doc)
        if c is None:
            continue
        ids = c.sentence_ids() if hasattr(c, "sentence_ids") else list(c)
        orders[i] = {ident: k for k, ident in enumerate(ids)}
    aligned = {i: set() for i in orders}
    for link in group.links:
        for i, slot in enumerate(link.targets):
            if i not in orders:
                continue
            for ident in slot:
                if ident not in orders[i]:
                    report.error("dangling-target", f"{group.language_slots[i]}#{ident}", f"link {link.n}")
                elif not link.is_null:
                    aligned[i].add(ident)
    for i, order in orders.items():
        doc = group.language_slots[i]
        for ident in sorted(order, key=order.get):
            if ident not in aligned[i]:
                report.info("unaligned", f"{doc}#{ident}", "sentence in no non-null link")
    for a, b in crossing_links(group, orders):
        report.warning("non-monotonic", f"{a.n}/{b.n}",
                       f"{_targets_attr(group, a)} crosses {_targets_attr(group, b)}")
    return report


def crossing_links(group: AlignmentGroup, orders: Optional[dict] = None) -> list:
    """Pairs of links whose relative order differs between two slots."""

    def pos(i, ident):
        if orders and i in orders and ident in orders[i]:
            return (0, orders[i][ident])
        return (1, id_key(ident))

    out = []
    n = len(group.language_slots)
    links = list(group.links)
    for x in range(len(links)):
        for y in range(x + 1, len(links)):
            a, b = links[x], links[y]
            signs = set()
            for i in range(n):
                if a.targets[i] and b.targets[i]:
                    pa, pb = pos(i, a.targets[i][0]), pos(i, b.targets[i][0])
                    if pa != pb:
                        signs.add(pa < pb)
            if len(signs) > 1:
                out.append((a, b))
    return out


# --- composition ---------------------------------------------------------------


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # keep the document-earlier sentence as representative
            if id_key(rb) < id_key(ra):
                ra, rb = rb, ra
            self.parent[rb] = ra


def _hub_document(groups, hub):
    if hub is not None:
        for g in groups:
            g.slot(hub)
        return hub
    common = set(groups[0].language_slots)
    for g in groups[1:]:
        common &= set(g.language_slots)
    if len(common) != 1:
        raise AlignmentError(f"cannot determine hub document; shared documents: {sorted(common)}")
    return common.pop()


def compose_multiway(groups: Iterable[AlignmentGroup], include_hub: bool = False, hub: Optional[str] = None) -> AlignmentGroup:
    """Merge several hub alignments into one group over all their documents."""
    groups = list(groups)
    if not groups:
        raise AlignmentError("no alignment groups to compose")
    hub = _hub_document(groups, hub)
    others = []
    for g in groups:
        if len(g.language_slots) != 2:
            raise AlignmentError(f"hub alignments must be pairwise, got {g.language_slots}")
        other = g.language_slots[1 - g.slot(hub)]
        if other in others:
            raise AlignmentError(f"document {other!r} aligned to the hub twice")
        others.append(other)

    uf = _UnionFind()
    for g in groups:
        h = g.slot(hub)
        seen = set()
        for link in g.links:
            hub_ids = link.targets[h]
            for ident in hub_ids:
                if ident in seen:
                    raise AlignmentError(f"hub sentence {hub}#{ident} appears twice in {g.language_slots}")
                seen.add(ident)
                uf.add(ident)
            for ident in hub_ids[1:]:
                uf.union(hub_ids[0], ident)

    width = len(groups)
    blocks = {}
    loose = []
    for k, g in enumerate(groups):
        h = g.slot(hub)
        o = 1 - h
        for link in g.links:
            if not link.targets[h]:
                slots = [[] for _ in range(width)]
                slots[k] = list(link.targets[o])
                loose.append(([], slots))
                continue
            root = uf.find(link.targets[h][0])
            hub_ids, slots = blocks.setdefault(root, (set(), [[] for _ in range(width)]))
            hub_ids.update(link.targets[h])
            slots[k].extend(link.targets[o])
    for root in uf.parent:
        if uf.find(root) == root and root not in blocks:
            blocks[root] = ({root}, [[] for _ in range(width)])

    out_links = []
    for hub_ids, slots in list(blocks.values()) + loose:
        targets = ([sorted(hub_ids, key=id_key)] if include_hub else []) + slots
        if any(targets):
            out_links.append(make_link(targets))
    slot_names = ([hub] if include_hub else []) + others
    return make_group(slot_names, out_links, groups[0].type)


def compose(hub_to_x: AlignmentGroup, hub_to_y: AlignmentGroup, hub: Optional[str] = None) -> AlignmentGroup:
    """Pairwise alignment between the two non-hub documents."""
    return compose_multiway([hub_to_x, hub_to_y], include_hub=False, hub=hub)
