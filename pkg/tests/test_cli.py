import io
import json
from pathlib import Path

import pytest

from fomega.cli.drv import read_derivation, write_derivation
from fomega.cli.main import format_trace, parse_trace, run
from fomega.cli.pretty import show_decls
from fomega.cli.surface import ParseError, Postulate, TermDef, TypeDef, parse, parse_type
from fomega.derivations.check import check
from fomega.sk import Step, SKTrace, gamma_sk

EXAMPLES = Path(__file__).resolve().parent.parent / "examples"
CORPUS = sorted(EXAMPLES.glob("*.fo"))


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def test_bounded_definitions_parse():
    decls = parse((EXAMPLES / "bounded.fo").read_text())
    names = [it.name for it in decls.items]
    assert names[:3] == ["Bounded", "All", "Id"]
    assert all(isinstance(it, TypeDef) and it.body is not None for it in decls.items[:3])
    assert isinstance(decls.find("id"), TermDef)


def test_postulate_block_parses():
    decls = parse((EXAMPLES / "intersection.fo").read_text())
    assert [type(it) for it in decls.items[:4]] == [Postulate] * 4


def test_unbound_identifier():
    with pytest.raises(ParseError):
        parse_type("X -> Top")
    with pytest.raises(ParseError) as e:
        parse("type T : * = Nope\n")
    assert e.value.line == 1


@pytest.mark.parametrize("path", CORPUS, ids=lambda p: p.name)
def test_printing_round_trips(path):
    decls = parse(path.read_text())
    again = parse(show_decls(decls))
    assert again.items == decls.items


@pytest.mark.parametrize("path", sorted(EXAMPLES.glob("*.drv")), ids=lambda p: p.name)
def test_derivation_files_round_trip(path):
    d = read_derivation(path.read_text())
    assert check(d)
    text = write_derivation(d)
    assert write_derivation(read_derivation(text)) == text


def test_signature_file_matches_the_signature():
    decls = parse((EXAMPLES / "sk_signature.fo").read_text())
    assert decls.context() == gamma_sk()


@pytest.mark.parametrize("path,code", [("bounded.fo", 0), ("intersection.fo", 0), ("mu.fo", 0),
                                       ("sorted_view.fo", 0), ("sk_signature.fo", 0),
                                       ("stuck.fo", 1)])
def test_check_exit_codes(path, code):
    assert cli("check", EXAMPLES / path)[0] == code


def test_derive_exit_codes():
    drv = EXAMPLES / "top_le_bot_under_absurd.drv"
    assert cli("derive", drv)[0] == 0
    assert cli("derive", drv, "--extended")[0] == 0


def test_usage_errors():
    assert cli()[0] == 2
    assert cli("frobnicate")[0] == 2
    assert cli("check")[0] == 2
    assert cli("check", EXAMPLES / "missing.fo")[0] == 2
    assert cli("nf", EXAMPLES / "bounded.fo")[0] == 2


def test_bad_derivation_is_a_check_failure(tmp_path):
    text = (EXAMPLES / "top_le_bot_under_absurd.drv").read_text().replace('"Z" "Bot" "*"', '"Z" "Top" "*"')
    p = tmp_path / "bad.drv"
    p.write_text(text)
    code, _, err = cli("derive", p)
    assert code == 1 and "error" in err


def test_json_report():
    code, out, _ = cli("check", EXAMPLES / "stuck.fo", "--json")
    rep = json.loads(out)
    assert code == 1
    assert set(rep) == {"command", "ok", "diagnostics", "stats", "result"}
    assert rep["ok"] is False and rep["diagnostics"]
    assert set(rep["stats"]) == {"fuel_used", "steps"}


def test_fuel_from_the_environment(monkeypatch):
    monkeypatch.setenv("FOMEGA_FUEL", "5")
    assert "default 5" in cli("check", "--help")[1]
    monkeypatch.setenv("FOMEGA_FUEL", "lots")
    assert cli("check", EXAMPLES / "bounded.fo")[0] == 2


def test_inconsistent_bounds_warn(tmp_path):
    p = tmp_path / "absurd.fo"
    p.write_text("postulate Z : Top .. Bot\n")
    code, out, _ = cli("check", p)
    assert code == 0 and "warning" in out


def test_nf():
    code, out, _ = cli("nf", EXAMPLES / "bounded.fo", "--expr", "Id")
    assert code == 0 and out.strip() == "all X : *. X -> X"
    code, out, _ = cli("nf", EXAMPLES / "bounded.fo", "--expr", "Bounded Top", "--show-shape")
    assert code == 0 and "shape: (* -> *) -> *" in out
    omega = "(lam X : *. X X) (lam X : *. X X)"
    assert cli("nf", EXAMPLES / "bounded.fo", "--expr", omega)[0] == 1
    assert cli("nf", EXAMPLES / "bounded.fo", "--expr", omega, "--raw")[0] == 0


def test_eval():
    code, out, _ = cli("eval", EXAMPLES / "bounded.fo", "--main", "twice")
    assert code == 0 and out.startswith("tfun")
    assert cli("eval", EXAMPLES / "stuck.fo", "--main", "stuck")[0] == 1


def test_trace_format_round_trips():
    trace = SKTrace((Step((), "K-contract"), Step((0, 1), "S-expand")))
    assert parse_trace(format_trace(trace)) == trace


def test_sk(tmp_path):
    tr = tmp_path / "k.trace"
    tr.write_text(". K-contract\n")
    code, out, _ = cli("sk", "--lhs", "K S K", "--rhs", "S", "--trace", tr)
    assert code == 0
    assert check(read_derivation(out))
    code, out, _ = cli("sk", "--lhs", "K S K", "--rhs", "S", "--probe")
    assert code == 0 and "joinable" in out
    assert cli("sk", "--lhs", "S", "--rhs", "K", "--probe", "--budget", "10")[0] == 1
    dest = tmp_path / "detour.drv"
    assert cli("sk", "--detour", "--out", dest)[0] == 0
    assert check(read_derivation(dest.read_text()))


def test_harness():
    code, out, _ = cli("harness", "--n", "20", "--size", "5", "--json")
    rep = json.loads(out)
    assert code == 0 and rep["result"]["programs"] == 20 and rep["result"]["violations"] == 0


def test_example_trace():
    tr = EXAMPLES / "skk.trace"
    assert cli("sk", "--lhs", "S K K S", "--rhs", "S", "--trace", tr)[0] == 0
    assert cli("sk", "--lhs", "S K K S", "--rhs", "K", "--trace", tr)[0] == 1
