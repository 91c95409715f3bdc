import gzip
from collections import Counter

import pytest
from hypothesis import given, settings

from _graphs import small_graphs
from signmotif.graph import stats
from signmotif.io import (
    DirectedSignRecord, ParseError, load_tsv, parse_records, read_records, read_tsv, save_tsv, to_undirected,
)


def test_bitcoin_line():
    recs = parse_records(b"7188,1,10,1407470400\n", "bitcoin-csv")
    assert recs == [DirectedSignRecord("7188", "1", 1)]


def test_bitcoin_negative_and_zero_rating():
    diag = Counter()
    recs = parse_records("1,2,-3,0\n2,3,0,5\n", "bitcoin-csv", diag)
    assert recs == [DirectedSignRecord("1", "2", -1)]
    assert diag["zero_rating"] == 1


def test_empty_input():
    for fmt in ("bitcoin-csv", "snap-signed-tsv", "wiki-rfa"):
        assert parse_records(b"", fmt) == []


def test_snap_line_and_comments():
    text = "# Directed graph\n# FromNodeId\tToNodeId\tSign\n0\t5\t-1\n3\t4\t1\n"
    assert parse_records(text, "snap-signed-tsv") == [
        DirectedSignRecord("0", "5", -1), DirectedSignRecord("3", "4", 1)]


def test_wiki_votes():
    text = ("SRC:Alice\nTGT:Bob\nVOT:1\nRES:1\nYEA:2013\nDAT:19:53, 25 January 2013\nTXT:'''Support''' sure: yes\n\n"
            "SRC:Carol\nTGT:Bob\nVOT:-1\nRES:1\nYEA:2013\nDAT:\nTXT:\n\n"
            "SRC:Dan\nTGT:Bob\nVOT:0\nRES:1\nYEA:2013\nDAT:\nTXT:\n\n"
            "SRC:\nTGT:Bob\nVOT:1\nRES:1\nYEA:2013\nDAT:\nTXT:\n")
    diag = Counter()
    recs = parse_records(text, "wiki-rfa", diag)
    assert recs == [DirectedSignRecord("Alice", "Bob", 1), DirectedSignRecord("Carol", "Bob", -1)]
    assert diag == Counter(neutral_vote=1, anonymous_vote=1)


@pytest.mark.parametrize("fmt,text,line", [
    ("bitcoin-csv", "1,2,5,0\n1,2\n", 2),
    ("bitcoin-csv", "1,2,x,0\n", 1),
    ("snap-signed-tsv", "1\t2\t1\n\n# c\n1\t2\t2\n", 4),
    ("wiki-rfa", "SRC:a\nTGT:b\n\nSRC:c\n", 1),
])
def test_parse_errors_name_line(fmt, text, line):
    with pytest.raises(ParseError) as exc:
        parse_records(text, fmt)
    assert exc.value.line == line
    assert f"line {line}" in str(exc.value)


def test_record_validation():
    with pytest.raises(ValueError):
        DirectedSignRecord("a", "b", 0)
    with pytest.raises(ValueError):
        DirectedSignRecord("", "b", 1)


def test_undirected_rules():
    R = DirectedSignRecord
    g = to_undirected([R("u", "v", 1), R("v", "u", 1)])
    assert g.canonical_links() == [("u", "v", 1)]
    diag = Counter()
    g = to_undirected([R("u", "v", 1), R("v", "u", -1)], diag)
    assert g.n_links == 0 and g.n_nodes == 0
    assert diag["conflicting_pair"] == 1
    g = to_undirected([R("u", "u", 1)])
    assert g.n_nodes == 0 and g.n_links == 0
    g = to_undirected([R("u", "v", -1), R("u", "v", -1), R("v", "u", -1)])
    assert g.canonical_links() == [("u", "v", -1)]
    # same-direction re-vote with a different sign is unreliable too
    assert to_undirected([R("u", "v", 1), R("u", "v", -1)]).n_links == 0


def test_keep_isolated():
    R = DirectedSignRecord
    recs = [R("u", "v", 1), R("v", "u", -1), R("w", "x", 1)]
    assert to_undirected(recs).n_nodes == 2
    assert to_undirected(recs, keep_isolated=True).n_nodes == 4


def test_stats_triangle():
    g = to_undirected([DirectedSignRecord("a", "b", 1), DirectedSignRecord("b", "c", 1),
                       DirectedSignRecord("c", "a", -1)])
    st = stats(g)
    assert (st.node_count, st.link_count) == (3, 3)
    assert st.f_plus == pytest.approx(2 / 3) and st.f_minus == pytest.approx(1 / 3)


def test_stats_empty():
    st = stats(to_undirected([]))
    assert st.link_count == 0 and st.f_plus is None and st.f_minus is None


def test_gzip_and_tsv_files(tmp_path):
    p = tmp_path / "raw.csv.gz"
    with gzip.open(p, "wt") as fh:
        fh.write("1,2,4,0\n2,1,3,0\n2,3,-1,0\n")
    g = to_undirected(read_records(p, "bitcoin-csv"))
    out = tmp_path / "g.tsv"
    save_tsv(g, out)
    assert out.read_bytes() == b"1\t2\t+1\n2\t3\t-1\n"
    assert load_tsv(out) == g


def test_tsv_rejects_bad_sign():
    with pytest.raises(ParseError):
        read_tsv("a\tb\t+2\n")


@settings(max_examples=60, deadline=None)
@given(small_graphs())
def test_tsv_round_trip(g):
    import io
    buf = io.StringIO()
    from signmotif.io import write_tsv
    write_tsv(g, buf)
    assert read_tsv(buf.getvalue()) == g


@settings(max_examples=60, deadline=None)
@given(small_graphs())
def test_undirected_invariants(g):
    # feed every link in both directions plus a conflicting extra pair
    R = DirectedSignRecord
    recs = [R(u, v, s) for u, v, s in g.iter_links()] + [R(v, u, s) for u, v, s in g.iter_links()]
    recs += [R("x", "y", 1), R("y", "x", -1), R("z", "z", 1)]
    h = to_undirected(recs)
    assert h == g
    pairs = {frozenset((r.source, r.target)) for r in recs if r.source != r.target}
    assert h.n_links <= len(pairs)
