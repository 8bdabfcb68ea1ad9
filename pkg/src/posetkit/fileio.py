"""Text formats: ``poset v1`` and ``map v1`` files, and DOT output.

A file may hold several documents separated by a line containing only
``---`` (the CLI uses this for reduction sequences and constructions).
"""

import re
import warnings
from pathlib import Path

from .core import Poset
from .errors import ParseError, PosetError, RedundantGeneratorWarning
from .maps import PosetMap

POSET_HEADER = "poset v1"
MAP_HEADER = "map v1"
SEPARATOR = "---"
_BAD_LABEL = re.compile(r"[\s:]")


def split_documents(text):
    """Split ``text`` into ``(first_line_number, lines)`` documents."""
    docs = []
    cur, start = [], 1
    for no, line in enumerate(text.splitlines(), 1):
        if line.strip() == SEPARATOR:
            docs.append((start, cur))
            cur, start = [], no + 1
        else:
            cur.append(line)
    docs.append((start, cur))
    return [d for d in docs if any(l.strip() and not l.lstrip().startswith("#") for l in d[1])]


def _content(lines, start):
    for off, raw in enumerate(lines):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield start + off, line


def parse_poset_lines(lines, start=1, path=None, strict_covers=False):
    labels = None
    gens = []
    header_seen = False
    for no, line in _content(lines, start):
        if not header_seen:
            if line != POSET_HEADER:
                raise ParseError(f"expected {POSET_HEADER!r} header", no, path)
            header_seen = True
            continue
        key, sep, rest = line.partition(":")
        if not sep:
            raise ParseError(f"expected 'key: value', got {line!r}", no, path)
        key = key.strip()
        if key == "elements":
            if labels is not None:
                raise ParseError("second 'elements:' line", no, path)
            labels = rest.split()
            if not labels:
                raise ParseError("'elements:' lists no labels", no, path)
            seen = set()
            for lab in labels:
                if lab in seen:
                    raise ParseError(f"duplicate label {lab!r}", no, path)
                seen.add(lab)
        elif key == "rel":
            if labels is None:
                raise ParseError("'rel:' before 'elements:'", no, path)
            parts = rest.split()
            if len(parts) != 2:
                raise ParseError(f"'rel:' needs two labels, got {len(parts)}", no, path)
            for lab in parts:
                if lab not in seen:
                    raise ParseError(f"unknown label {lab!r}", no, path)
            gens.append((parts[0], parts[1], no))
        else:
            raise ParseError(f"unknown key {key!r}", no, path)
    if not header_seen:
        raise ParseError(f"missing {POSET_HEADER!r} header", start, path)
    if labels is None:
        raise ParseError("missing 'elements:' line", start, path)
    pairs = list(dict.fromkeys((a, b) for a, b, _ in gens))
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RedundantGeneratorWarning)
            return Poset.build(labels, pairs, strict_covers=strict_covers)
    except PosetError as exc:
        raise ParseError(str(exc), None, path) from None


def parse_poset(text, path=None, strict_covers=False):
    docs = split_documents(text)
    if not docs:
        raise ParseError("empty input", 1, path)
    if len(docs) > 1:
        raise ParseError("expected one poset document", docs[1][0], path)
    start, lines = docs[0]
    return parse_poset_lines(lines, start, path, strict_covers)


def parse_posets(text, path=None, strict_covers=False):
    """Every poset document in ``text`` (map documents are skipped)."""
    out = []
    for start, lines in split_documents(text):
        first = next(_content(lines, start), (start, ""))[1]
        if first == MAP_HEADER:
            continue
        out.append(parse_poset_lines(lines, start, path, strict_covers))
    return out


def load_poset(path, strict_covers=False):
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror}", None, path) from None
    return parse_poset(text, path, strict_covers)


def format_poset(p, comments=()):
    lines = [POSET_HEADER]
    lines.extend(f"# {c}" for c in comments)
    lines.append("elements: " + " ".join(p.labels))
    lines.extend(f"rel: {a} {b}" for a, b in p.cover_pairs(labels=True))
    return "\n".join(lines) + "\n"


def check_labels(p):
    bad = [lab for lab in p.labels if not lab or _BAD_LABEL.search(lab)]
    if bad:
        raise ValueError(f"labels not representable in a poset file: {bad}")


def parse_map(text, dom, cod, path=None):
    docs = split_documents(text)
    if len(docs) != 1:
        raise ParseError("expected one map document", 1, path)
    start, lines = docs[0]
    pairs = []
    header_seen = False
    seen = {}
    for no, line in _content(lines, start):
        if not header_seen:
            if line != MAP_HEADER:
                raise ParseError(f"expected {MAP_HEADER!r} header", no, path)
            header_seen = True
            continue
        key, sep, rest = line.partition(":")
        if not sep or key.strip() != "pair":
            raise ParseError(f"expected 'pair: X Y', got {line!r}", no, path)
        parts = rest.split()
        if len(parts) != 2:
            raise ParseError(f"'pair:' needs two labels, got {len(parts)}", no, path)
        a, b = parts
        if a not in dom._index:
            raise ParseError(f"unknown domain label {a!r}", no, path)
        if b not in cod._index:
            raise ParseError(f"unknown codomain label {b!r}", no, path)
        if a in seen:
            raise ParseError(f"domain label {a!r} already assigned on line {seen[a]}", no, path)
        seen[a] = no
        pairs.append((a, b))
    if not header_seen:
        raise ParseError(f"missing {MAP_HEADER!r} header", start, path)
    missing = [lab for lab in dom.labels if lab not in seen]
    if missing:
        raise ParseError("map is not total; unassigned: " + " ".join(sorted(missing)), None, path)
    return PosetMap.from_pairs(dom, cod, pairs)


def load_map(path, dom, cod):
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror}", None, path) from None
    return parse_map(text, dom, cod, path)


def format_map(f, comments=()):
    lines = [MAP_HEADER]
    lines.extend(f"# {c}" for c in comments)
    lines.extend(f"pair: {a} {b}" for a, b in f.pairs())
    return "\n".join(lines) + "\n"


def _q(label):
    return '"' + label.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(p, name="poset"):
    """Hasse diagram as DOT: one edge per cover, low to high, one rank per
    height.  Output depends only on labels and order, never on node ids."""
    lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=circle];"]
    for h in range(p.dim + 1):
        ids = p.nodes_at_height(h)
        lines.append(f"  {{ rank=same; {' '.join(_q(p.labels[i]) + ';' for i in ids)} }}")
    for a, b in p.cover_pairs(labels=True):
        lines.append(f"  {_q(a)} -> {_q(b)};")
    lines.append("}")
    return "\n".join(lines) + "\n"
