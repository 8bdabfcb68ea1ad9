import json
import subprocess
import sys

import pytest
from hypothesis import given, settings

from conftest import P, posets
from posetkit import corpus_path
from posetkit.cli import main
from posetkit.errors import ParseError
from posetkit.fileio import (
    format_map,
    format_poset,
    load_poset,
    parse_map,
    parse_poset,
    parse_posets,
    to_dot,
)
from posetkit.maps import PosetMap


def corpus(name):
    return str(corpus_path(name))


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


# -- poset files -----------------------------------------------------------------


class TestPosetFormat:
    def test_parse_basic(self, diamond):
        text = "poset v1\n# comment\nelements: m a b t\nrel: m a\nrel: m b\nrel: a t\nrel: b t\n"
        assert parse_poset(text) == diamond

    def test_duplicate_rel_lines_allowed(self):
        p = parse_poset("poset v1\nelements: a b\nrel: a b\nrel: a b\n")
        assert p == P("a b", "a<b")

    def test_redundant_generator_closure(self, chain3):
        p = parse_poset("poset v1\nelements: m a t\nrel: m a\nrel: a t\nrel: m t\n")
        assert p == chain3

    @pytest.mark.parametrize(
        "text, line",
        [
            ("elements: a\n", 1),
            ("poset v1\nelements: a a\n", 2),
            ("poset v1\nelements: a b\nrel: a c\n", 3),
            ("poset v1\nelements: a b\n\nrel: a\n", 4),
            ("poset v1\nrel: a b\n", 2),
            ("poset v1\nelements: a\nbogus: x\n", 3),
            ("poset v1\nelements: a b\nno colon here\n", 3),
        ],
    )
    def test_errors_carry_line_numbers(self, text, line):
        with pytest.raises(ParseError) as info:
            parse_poset(text)
        assert info.value.line == line
        assert str(info.value).startswith(f"{line}: ")

    def test_cycle_is_parse_error(self):
        with pytest.raises(ParseError, match="cycle"):
            parse_poset("poset v1\nelements: a b\nrel: a b\nrel: b a\n")

    def test_strict_covers(self):
        text = "poset v1\nelements: m a t\nrel: m a\nrel: a t\nrel: m t\n"
        with pytest.raises(ParseError):
            parse_poset(text, strict_covers=True)

    def test_multiple_documents(self, diamond, chain3):
        text = format_poset(diamond) + "---\n" + format_poset(chain3)
        assert parse_posets(text) == [diamond, chain3]
        with pytest.raises(ParseError):
            parse_poset(text)

    def test_corpus_loads(self, figure1a):
        assert figure1a.n == 6 and figure1a.dim == 4
        for k in range(1, 11):
            p = load_poset(corpus_path(f"figure1b-k{k}"))
            assert p.n == 6 + k
        assert load_poset(corpus_path("point")).n == 1


@given(posets(max_n=9))
@settings(max_examples=100)
def test_poset_round_trip(p):
    q = parse_poset(format_poset(p, ["note"]))
    assert q == p and q.labels == p.labels


# -- map files ---------------------------------------------------------------------


class TestMapFormat:
    def test_round_trip(self, diamond):
        f = PosetMap.identity(diamond)
        assert parse_map(format_map(f), diamond, diamond) == f

    def test_not_total(self, diamond):
        with pytest.raises(ParseError, match="not total"):
            parse_map("map v1\npair: m m\n", diamond, diamond)

    def test_repeated_domain_label(self, chain3):
        with pytest.raises(ParseError) as info:
            parse_map("map v1\npair: m m\npair: m a\n", chain3, chain3)
        assert info.value.line == 3

    def test_unknown_codomain_label(self, chain3):
        with pytest.raises(ParseError):
            parse_map("map v1\npair: m zz\n", chain3, chain3)


# -- DOT ---------------------------------------------------------------------------


def dot_counts(text):
    edges = sum(1 for l in text.splitlines() if "->" in l)
    ranks = [l for l in text.splitlines() if "rank=same" in l]
    nodes = sum(l.count(";") - 1 for l in ranks)
    return nodes, edges, len(ranks)


class TestDot:
    def test_diamond(self, diamond):
        assert dot_counts(to_dot(diamond)) == (4, 4, 3)

    def test_point(self):
        assert dot_counts(to_dot(P("p"))) == (1, 0, 1)

    def test_figure1a(self, figure1a):
        text = to_dot(figure1a)
        assert dot_counts(text) == (6, 6, 5)
        assert '"7" -> "6";' in text and '"10" -> "12";' in text

    def test_label_order_not_node_order(self, diamond):
        assert to_dot(diamond) == to_dot(diamond.permuted([3, 2, 1, 0]))


# -- CLI -----------------------------------------------------------------------------


class TestCheck:
    def test_figure1a(self, capsys):
        code, out, _ = run(capsys, "check", corpus("figure1a"), "--mode", "local")
        assert code == 1
        assert "BadCover: 7 (height 1), 6 (height 4)" in out

    def test_point_and_diamond(self, capsys):
        assert run(capsys, "check", corpus("point"))[0] == 0
        assert run(capsys, "check", corpus("diamond"), "--mode", "nonlocal")[0] == 0

    def test_json(self, capsys):
        code, out, _ = run(capsys, "check", corpus("antichain2"), "--json")
        assert code == 1
        d = json.loads(out)
        assert d["verdict"] is False
        assert [v["kind"] for v in d["violations"]] == ["MultipleMinimal", "MultipleMaximal"]

    def test_parse_error_exit(self, capsys, tmp_path):
        bad = write(tmp_path, "bad.poset", "poset v1\nelements: a\nrel: a q\n")
        code, _, err = run(capsys, "check", bad)
        assert code == 3
        assert "bad.poset:3: unknown label 'q'" in err

    def test_missing_file(self, capsys, tmp_path):
        assert run(capsys, "check", tmp_path / "nope.poset")[0] == 3

    def test_strict_covers_flag(self, capsys, tmp_path):
        f = write(tmp_path, "c.poset", "poset v1\nelements: m a t\nrel: m a\nrel: a t\nrel: m t\n")
        assert run(capsys, "check", f)[0] == 0
        assert run(capsys, "check", f, "--strict-covers")[0] == 3


class TestSurgeryCli:
    def test_glue_singleton(self, capsys, diamond):
        code, out, _ = run(capsys, "surgery", corpus("diamond"), "glue", "--nodes", "m")
        assert code == 0
        assert parse_poset(out) == diamond

    def test_split(self, capsys):
        code, out, _ = run(capsys, "surgery", corpus("diamond"), "split", "--node", "m")
        assert code == 0
        assert parse_poset(out).n == 5
        assert "# n = 0" in out

    def test_reduce(self, capsys):
        code, out, _ = run(capsys, "surgery", corpus("diamond"), "reduce")
        assert code == 0
        stages = parse_posets(out)
        assert len(stages) == 5
        assert stages[0].n == 1
        assert out.count("# step ") == 4

    def test_retract_and_attach(self, capsys, tmp_path):
        f = write(tmp_path, "c.poset", format_poset(P("m a t", "m<a a<t")))
        code, out, _ = run(capsys, "surgery", f, "retract", "--node", "a")
        assert code == 0 and parse_poset(out) == P("a t", "a<t")
        code, out, _ = run(capsys, "surgery", f, "attach", "--node", "m", "--count", "2")
        assert code == 0 and parse_poset(out).n == 5

    def test_precondition_errors(self, capsys):
        code, _, err = run(capsys, "surgery", corpus("diamond"), "retract", "--node", "a")
        assert code == 2 and "NotSimpleNode" in err
        assert run(capsys, "surgery", corpus("diamond"), "glue", "--nodes", "zz")[0] == 2
        assert run(capsys, "surgery", corpus("diamond"), "split")[0] == 2
        assert run(capsys, "surgery", corpus("antichain2"), "reduce")[0] == 2

    def test_output_file(self, capsys, tmp_path):
        out = tmp_path / "out.poset"
        code, printed, _ = run(capsys, "surgery", corpus("diamond"), "split", "--node", "m", "-o", out)
        assert code == 0 and printed == ""
        assert load_poset(out).n == 5


class TestConstructCli:
    def test_dim_plus_one_antichain(self, capsys):
        code, out, _ = run(capsys, "construct", corpus("antichain2"), "dim-plus-one")
        assert code == 0
        poset_text, map_text = out.split("---\n")
        q = parse_poset(poset_text)
        assert q == P("z x y", "z<x z<y")
        f = parse_map(map_text, P("x y"), q)
        assert f.pairs() == [("x", "x"), ("y", "y")]

    def test_extension_diamond(self, capsys, tmp_path):
        out = tmp_path / "ext.poset"
        code, _, _ = run(capsys, "construct", corpus("diamond"), "extension", "-o", out)
        assert code == 0
        text = out.read_text()
        assert "# pairing: a' -> a" in text
        assert load_poset(out).n == 5
        assert (tmp_path / "ext.poset.map").read_text().startswith("map v1\n")

    def test_extension_precondition(self, capsys):
        code, _, err = run(capsys, "construct", corpus("antichain2"), "extension")
        assert code == 2 and "NoUniqueMinimal" in err


class TestMapCheckCli:
    @pytest.fixture
    def files(self, tmp_path):
        two = write(tmp_path, "two.poset", "poset v1\nelements: a b\nrel: a b\n")
        three = write(tmp_path, "three.poset", "poset v1\nelements: p q r\nrel: p q\nrel: q r\n")
        skip = write(tmp_path, "skip.map", "map v1\npair: a p\npair: b r\n")
        ident = write(tmp_path, "id.map", "map v1\npair: p p\npair: q q\npair: r r\n")
        return two, three, skip, ident

    def test_identity(self, capsys, files):
        _, three, _, ident = files
        assert run(capsys, "map-check", three, three, ident)[0] == 0

    def test_skipping_cover(self, capsys, files):
        two, three, skip, _ = files
        code, out, _ = run(capsys, "map-check", two, three, skip, "--explain")
        assert code == 1
        assert out.splitlines()[1].endswith(": a b")
        assert run(capsys, "map-check", two, three, skip, "--property", "embedding")[0] == 0

    def test_coheight_default_along(self, capsys, files):
        _, three, _, ident = files
        a = run(capsys, "map-check", three, three, ident, "--property", "coheight")
        b = run(capsys, "map-check", three, three, ident, "--property", "coheight", "--along", "p")
        assert a[0] == b[0] == 0

    def test_not_total_is_parse_error(self, capsys, files, tmp_path):
        two, three, _, _ = files
        partial = write(tmp_path, "partial.map", "map v1\npair: a p\n")
        assert run(capsys, "map-check", two, three, partial)[0] == 3


class TestRenderCli:
    def test_render_deterministic(self, capsys):
        a = run(capsys, "render", corpus("figure1a"))
        b = run(capsys, "render", corpus("figure1a"))
        assert a == b and a[0] == 0
        assert dot_counts(a[1]) == (6, 6, 5)

    def test_render_parse_error(self, capsys, tmp_path):
        bad = write(tmp_path, "bad.poset", "nonsense\n")
        assert run(capsys, "render", bad)[0] == 3


class TestCensusCli:
    def test_small(self, capsys):
        code, out, _ = run(capsys, "census", "--max-n", "3", "--verify", "all")
        assert code == 0
        assert out.rstrip().endswith("violations: 0")

    def test_bad_flags(self, capsys):
        code, _, err = run(capsys, "census", "--max-n", "99")
        assert code == 2 and "SizeLimitExceeded" in err
        assert run(capsys, "census", "--jobs", "0")[0] == 2
        with pytest.raises(SystemExit) as info:
            main(["census", "--verify", "bogus"])
        assert info.value.code == 2

    def test_json(self, capsys):
        code, out, _ = run(capsys, "census", "--max-n", "4", "--verify", "reduce", "--json")
        d = json.loads(out)
        assert code == 0
        assert [r["iso_classes"] for r in d["rows"]] == [1, 2, 5, 16]
        assert d["reduction"]["failures"] == 0

    def test_jobs_do_not_change_output(self, capsys):
        outs = {run(capsys, "census", "--max-n", "4", "--seed", "3", "--jobs", j)[1] for j in (1, 2, 4)}
        assert len(outs) == 1


def test_module_entry_point():
    r = subprocess.run(
        [sys.executable, "-m", "posetkit.cli", "check", corpus("figure1a")],
        capture_output=True, text=True,
    )
    assert r.returncode == 1
    assert "NOT realizable" in r.stdout
