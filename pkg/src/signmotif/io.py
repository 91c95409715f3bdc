"""Reading raw signed-network dumps and the canonical TSV edge list."""

from __future__ import annotations

import gzip
import io
from collections import Counter, defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import BinaryIO, Iterable, TextIO

from .graph import SignedGraph

FORMATS = ("bitcoin-csv", "snap-signed-tsv", "wiki-rfa")


class ParseError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class DirectedSignRecord:
    source: str
    target: str
    sign: int

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign!r}")
        if not self.source or not self.target:
            raise ValueError("source and target must be non-empty")


def _text_lines(stream: BinaryIO | TextIO | bytes | str) -> Iterable[str]:
    if isinstance(stream, bytes):
        stream = io.BytesIO(stream)
    elif isinstance(stream, str):
        stream = io.StringIO(stream)
    for raw in stream:
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8")
        yield raw.rstrip("\r\n")


def _parse_int(text: str, lineno: int, what: str) -> int:
    try:
        return int(text.strip())
    except ValueError:
        try:
            value = float(text)
        except ValueError:
            raise ParseError(lineno, f"{what} is not a number: {text!r}") from None
        if not value.is_integer():
            raise ParseError(lineno, f"{what} is not an integer: {text!r}")
        return int(value)


def _parse_bitcoin(lines, diagnostics):
    out = []
    for lineno, line in enumerate(lines, 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split(",")
        if len(fields) < 3:
            raise ParseError(lineno, f"expected SOURCE,TARGET,RATING[,TIME], got {line!r}")
        src, dst = fields[0].strip(), fields[1].strip()
        if not src or not dst:
            raise ParseError(lineno, "empty node identifier")
        rating = _parse_int(fields[2], lineno, "rating")
        if rating == 0:
            diagnostics["zero_rating"] += 1
            continue
        out.append(DirectedSignRecord(src, dst, 1 if rating > 0 else -1))
    return out


def _parse_snap(lines, diagnostics):
    out = []
    for lineno, line in enumerate(lines, 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 3:
            raise ParseError(lineno, f"expected FromNodeId TargetNodeId Sign, got {line!r}")
        sign = _parse_int(fields[2], lineno, "sign")
        if sign not in (1, -1):
            raise ParseError(lineno, f"sign must be 1 or -1, got {fields[2]!r}")
        out.append(DirectedSignRecord(fields[0], fields[1], sign))
    return out


def _parse_wiki(lines, diagnostics):
    out = []
    fields: dict[str, str] = {}
    start = 0

    def flush():
        if not fields:
            return
        for key in ("SRC", "TGT", "VOT"):
            if key not in fields:
                raise ParseError(start, f"record without {key}: field")
        vote = _parse_int(fields["VOT"], start, "VOT")
        src, dst = fields["SRC"].strip(), fields["TGT"].strip()
        if vote == 0:
            diagnostics["neutral_vote"] += 1
        elif vote not in (1, -1):
            raise ParseError(start, f"VOT must be -1, 0 or 1, got {vote}")
        elif not src or not dst:
            diagnostics["anonymous_vote"] += 1
        else:
            out.append(DirectedSignRecord(src, dst, vote))
        fields.clear()

    for lineno, line in enumerate(lines, 1):
        if not line.strip():
            flush()
            continue
        if not fields:
            start = lineno
        key, sep, value = line.partition(":")
        if not sep:
            raise ParseError(lineno, f"expected KEY:value, got {line!r}")
        fields[key.strip()] = value
    flush()
    return out


_PARSERS = {"bitcoin-csv": _parse_bitcoin, "snap-signed-tsv": _parse_snap, "wiki-rfa": _parse_wiki}


def parse_records(stream, fmt: str, diagnostics: Counter | None = None) -> list[DirectedSignRecord]:
    """Parse a raw dump into directed signed records.

    ``stream`` may be a binary or text file object, or the raw bytes/str.
    Rejected-but-valid lines (zero ratings, neutral or anonymous votes) are
    tallied into ``diagnostics`` instead of raising.
    """
    if fmt not in _PARSERS:
        raise ValueError(f"unknown format {fmt!r}; expected one of {', '.join(FORMATS)}")
    if diagnostics is None:
        diagnostics = Counter()
    return _PARSERS[fmt](_text_lines(stream), diagnostics)


def open_maybe_gzip(path: str | Path) -> BinaryIO:
    path = Path(path)
    if path.suffix == ".gz":
        return gzip.open(path, "rb")
    return open(path, "rb")


def read_records(path: str | Path, fmt: str, diagnostics: Counter | None = None) -> list[DirectedSignRecord]:
    with open_maybe_gzip(path) as fh:
        return parse_records(fh, fmt, diagnostics)


def to_undirected(records: Iterable[DirectedSignRecord], diagnostics: Counter | None = None,
                  keep_isolated: bool = False) -> SignedGraph:
    """Collapse directed records into an undirected signed graph.

    A pair whose records agree in sign (in either direction, any
    multiplicity) becomes one link with that sign; a pair with conflicting
    signs is dropped. Self-loops are dropped. Nodes left without links do
    not appear unless ``keep_isolated`` is set, in which case every record
    endpoint is kept.
    """
    if diagnostics is None:
        diagnostics = Counter()
    seen: dict[tuple[str, str], set[int]] = defaultdict(set)
    endpoints: set[str] = set()
    for rec in records:
        endpoints.update((rec.source, rec.target))
        if rec.source == rec.target:
            diagnostics["self_loop"] += 1
            continue
        key = (rec.source, rec.target) if rec.source < rec.target else (rec.target, rec.source)
        seen[key].add(rec.sign)
    links = []
    for (u, v), signs in seen.items():
        if len(signs) > 1:
            diagnostics["conflicting_pair"] += 1
            continue
        links.append((u, v, signs.pop()))
    graph = SignedGraph.from_links(links, nodes=endpoints if keep_isolated else ())
    if graph.n_nodes < len(endpoints):
        diagnostics["isolated_node"] += len(endpoints) - graph.n_nodes
    return graph


def write_tsv(graph: SignedGraph, out: TextIO) -> None:
    """Canonical edge list: ``u<TAB>v<TAB>±1``, u < v lexicographically, sorted."""
    for u, v, s in graph.canonical_links():
        out.write(f"{u}\t{v}\t{s:+d}\n")


def save_tsv(graph: SignedGraph, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        write_tsv(graph, fh)


def read_tsv(stream) -> SignedGraph:
    links = []
    for lineno, line in enumerate(_text_lines(stream), 1):
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise ParseError(lineno, f"expected u<TAB>v<TAB>sign, got {line!r}")
        sign = _parse_int(fields[2], lineno, "sign")
        if sign not in (1, -1):
            raise ParseError(lineno, f"sign must be +1 or -1, got {fields[2]!r}")
        links.append((fields[0], fields[1], sign))
    try:
        return SignedGraph.from_links(links)
    except ValueError as exc:
        raise ParseError(0, str(exc)) from None


def load_tsv(path: str | Path) -> SignedGraph:
    with open_maybe_gzip(path) as fh:
        return read_tsv(fh)
