import re

import pytest
from hypothesis import given, strategies as st

from conftest import INTERLEAVED
from thintree.formats import (
    ParseError, dot_source, export_dot, format_edge_list, load_edge_list, load_graph,
    load_matrix_market, parse_edge_list, save_edge_list,
)
from thintree.generators import barbell, complete_graph, random_weighted_graph
from thintree.shift_engine import thin
from thintree.tree_position import caterpillar_position

BARBELL_TSV = "# two triangles and a bridge\na\tb\t1\na\tc\t1\nb\tc\t1\nc\td\t1\nd\te\t1\nd\tf\t1\ne\tf\t1\n"


def test_barbell_file(tmp_path):
    path = tmp_path / "barbell.tsv"
    path.write_text(BARBELL_TSV)
    g = load_edge_list(path)
    assert g.vertex_count == 6 and len(g.edges) == 7
    assert g.labels == ("a", "b", "c", "d", "e", "f")
    assert g.edges == barbell().edges


def test_empty_file(tmp_path):
    path = tmp_path / "empty.tsv"
    path.write_text("# nothing here\n\n")
    with pytest.raises(ParseError, match="no edges"):
        load_edge_list(path)


def test_duplicates_merge():
    g = parse_edge_list("x\ty\t1.5\ny\tx\t0.25\n")
    assert g.edges == ((0, 1, 1.75),)


@pytest.mark.parametrize("text,line", [
    ("a\tb\t1\na\tb\n", 2),
    ("a\tb\tone\n", 1),
    ("# c\na\tb\t-1\n", 2),
    ("a\tb\t0\n", 1),
    ("a\tb\tnan\n", 1),
    ("a\ta\t1\n", 1),
    ("a b 1\n", 1),
])
def test_parse_errors_carry_line(text, line):
    with pytest.raises(ParseError) as info:
        parse_edge_list(text)
    assert info.value.line == line
    assert f"line {line}" in str(info.value)


@given(st.integers(2, 10), st.integers(0, 10**6))
def test_round_trip(n, seed):
    g = random_weighted_graph(n, seed, p=0.8)
    if not g.edges:
        return
    g = g.with_labels([f"v{v}" for v in range(n)])
    back = parse_edge_list(format_edge_list(g))
    # isolated vertices cannot appear in an edge list; ids follow first appearance
    named = {(min(g.label(u), g.label(v)), max(g.label(u), g.label(v))): w for u, v, w in g.edges}
    got = {(min(back.label(u), back.label(v)), max(back.label(u), back.label(v))): w for u, v, w in back.edges}
    assert got == named
    # once ids follow first appearance the round trip is exact
    assert parse_edge_list(format_edge_list(back)) == back


def test_save_then_load(tmp_path):
    path = tmp_path / "g.tsv"
    for text in (BARBELL_TSV, "p\tq\t1\nr\ts\t2\nr\tp\t0.5\nt\tq\t3\n"):
        g = parse_edge_list(text)
        save_edge_list(g, path)
        assert load_edge_list(path) == g


def _mtx(tmp_path, header, body):
    path = tmp_path / "m.mtx"
    path.write_text(header + "\n" + body)
    return path


def test_matrix_market_triangle(tmp_path):
    path = _mtx(tmp_path, "%%MatrixMarket matrix coordinate real symmetric", "3 3 3\n2 1 1\n3 1 1\n3 2 1\n")
    g = load_matrix_market(path)
    assert g.edges == complete_graph(3).edges
    assert load_graph(path).edges == g.edges


def test_matrix_market_pattern_skips_zero_and_diagonal(tmp_path):
    path = _mtx(tmp_path, "%%MatrixMarket matrix coordinate real symmetric",
                "3 3 4\n1 1 5\n2 1 0\n3 1 2.5\n3 2 1\n")
    g = load_matrix_market(path)
    assert g.edges == ((0, 2, 2.5), (1, 2, 1.0))
    path = _mtx(tmp_path, "%%MatrixMarket matrix coordinate pattern symmetric", "3 3 2\n2 1\n3 2\n")
    assert load_matrix_market(path).edges == ((0, 1, 1.0), (1, 2, 1.0))


@pytest.mark.parametrize("header", [
    "%%MatrixMarket matrix coordinate real general",
    "%%MatrixMarket matrix array real symmetric",
    "%%MatrixMarket matrix coordinate complex hermitian",
    "not a header",
])
def test_matrix_market_rejects(tmp_path, header):
    path = _mtx(tmp_path, header, "3 3 1\n2 1 1\n")
    with pytest.raises(ParseError):
        load_matrix_market(path)


def test_dot_star(triangle):
    text = dot_source(caterpillar_position(triangle))
    assert text.count("shape=plaintext") == 3
    assert text.count(" -- ") == 3
    assert len([ln for ln in text.splitlines() if "--" in ln and 'label="2"' in ln]) == 3
    assert len(re.findall(r"^  n\d+[ ;]", text, re.M)) - text.count(" -- ") == 4


def test_dot_barbell(tmp_path):
    g = parse_edge_list(BARBELL_TSV)
    pos = thin(caterpillar_position(g, INTERLEAVED))
    path = tmp_path / "t.dot"
    text = export_dot(pos, path)
    assert path.read_text() == text
    assert text == export_dot(thin(caterpillar_position(g, INTERLEAVED)))
    assert 'label="1"' in text
    assert 'label="a"' in text and 'label="f"' in text
