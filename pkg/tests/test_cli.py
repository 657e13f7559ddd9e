import json

import pytest

from flagloop import cli
from flagloop.cli import RunConfig, main
from flagloop.parse import ParseError
from flagloop.spectral import EInfinityTable
from flagloop.verify import FAIL, Report

SIGMA = "g1^2+g1*g2+g2^2, g1^2*g2+g1*g2^2"


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_gb_reduce(capsys):
    code, out, _ = _run(capsys, "gb", "--vars", "g1,g2", "--order", "lex:g2>g1", "--ideal", SIGMA, "--reduce", "g1^3")
    assert code == 0
    assert out.strip() == "0"


def test_gb_member(capsys):
    code, out, _ = _run(capsys, "gb", "--vars", "g1,g2", "--ideal", SIGMA, "--member", "g1")
    assert code == 0 and out.strip() == "false"
    code, out, _ = _run(capsys, "gb", "--vars", "g1,g2", "--ideal", SIGMA, "--member", "g1^2*g2 + g1*g2^2")
    assert out.strip() == "true"


def test_gb_prints_basis(capsys):
    code, out, _ = _run(capsys, "gb", "--vars", "x,y", "--order", "lex:x>y", "--ideal", "2*x, 3*y")
    assert code == 0
    assert "x*y" in out.split()


def _ideal_file(tmp_path, name, body):
    p = tmp_path / name
    p.write_text(body)
    return str(p)


def test_gb_intersect(tmp_path, capsys):
    head = "vars = y2, y1, g2, g1\norder = lex:y2>y1>g2>g1\n"
    a = _ideal_file(tmp_path, "A.txt", head + "# d2 image multiples\ny1*y2*(2*g2 + g1)\ny1*y2*(g2 + 2*g1)\n")
    b = _ideal_file(tmp_path, "B.txt", head + "g2^2 + g2*g1 + g1^2\ng1^3\n")
    code, out, _ = _run(capsys, "gb", "--intersect", a, b)
    assert code == 0
    lines = [l for l in out.splitlines() if l and not l.startswith("#")]
    assert len(lines) == 3
    from flagloop.algebra import Generator, Ring
    from flagloop.groebner import MonomialOrder, ideal_equal
    R = Ring([Generator(n, 2) for n in ("y2", "y1", "g2", "g1")])
    want = [R.parse(s) for s in ("y1*y2*(g2^2 + g2*g1 + g1^2)", "3*y1*y2*g1^3", "y1*y2*(g2*g1^3 + 2*g1^4)")]
    assert ideal_equal([R.parse(l) for l in lines], want, MonomialOrder("lex", ("y2", "y1", "g2", "g1")))


def test_gb_file(tmp_path, capsys):
    f = _ideal_file(tmp_path, "I.txt", "vars = g1, g2\norder = lex:g2>g1\n" + SIGMA.replace(", ", "\n") + "\n")
    code, out, _ = _run(capsys, "gb", f, "--reduce", "g1^3")
    assert code == 0 and out.strip() == "0"


def test_gb_empty_file(tmp_path, capsys):
    f = _ideal_file(tmp_path, "E.txt", "")
    code, _, err = _run(capsys, "gb", f)
    assert code == 2
    assert "line" in err


def test_gb_parse_error_position(tmp_path, capsys):
    f = _ideal_file(tmp_path, "B.txt", "vars = g1, g2\ng1^2 + \n")
    code, _, err = _run(capsys, "gb", f)
    assert code == 2
    assert "line 2" in err and "column" in err


def test_ss_text(capsys):
    code, out, _ = _run(capsys, "ss", "--bundle", "su3-eval", "--cutoff", "12", "--format", "text", "--no-header")
    assert code == 0
    row1 = [l for l in out.splitlines() if l.startswith("1 ")][0].split()
    assert row1[:3] == ["1", "2", "-"]
    assert "unstable" in out  # degree 12 is above the trust horizon


def test_ss_diagonal_ranks(capsys):
    code, out, _ = _run(capsys, "ss", "--bundle", "su3-diagonal", "--cutoff", "10", "--format", "json", "--no-header")
    d = json.loads(out)
    assert [r["free_rank"] for r in d["degrees"]][:7] == [1, 0, 2, 0, 2, 0, 1]


def test_ss_mod_p_bookkeeping(capsys):
    _, out, _ = _run(capsys, "ss", "--bundle", "su3-eval", "--cutoff", "12", "--format", "json", "--no-header")
    z = EInfinityTable.from_dict(json.loads(out))
    _, out, _ = _run(capsys, "ss", "--bundle", "su3-eval", "--cutoff", "12", "--mod", "3", "--format", "json",
                     "--no-header")
    f3 = EInfinityTable.from_dict(json.loads(out))
    for n in range(z.horizon):
        assert f3.degree(n)[0] == z.degree(n)[0] + z.torsion_count(n, 3) + z.torsion_count(n + 1, 3)


def test_ss_csv(capsys):
    code, out, _ = _run(capsys, "ss", "--bundle", "sp2-eval", "--cutoff", "10", "--format", "csv", "--no-header")
    lines = out.splitlines()
    assert lines[0] == "degree,free_rank,torsion,stable"
    assert len(lines) == 12


def test_ss_deterministic(capsys):
    args = ("ss", "--bundle", "g2-eval", "--cutoff", "12", "--format", "json", "--pages", "--no-header")
    _, a, _ = _run(capsys, *args)
    _, b, _ = _run(capsys, *args)
    assert a == b
    assert "page_dumps" in json.loads(a)


def test_ss_header_present_by_default(capsys):
    _, out, _ = _run(capsys, "ss", "--bundle", "su3-eval", "--cutoff", "6")
    assert out.startswith("# flagloop")


def test_json_round_trip(capsys):
    _, out, _ = _run(capsys, "ss", "--bundle", "sp2-eval", "--cutoff", "12", "--format", "json", "--no-header")
    d = json.loads(out)
    t = EInfinityTable.from_dict(d)
    assert t.to_dict() == {k: v for k, v in d.items() if k not in ("generated", "page_dumps")}


def test_ss_output_file(tmp_path, capsys):
    p = tmp_path / "out.txt"
    code, out, _ = _run(capsys, "ss", "--bundle", "su3-eval", "--cutoff", "8", "-o", str(p), "--no-header")
    assert code == 0 and out == ""
    assert "su3-eval" in p.read_text()


def test_ss_jobs_match(capsys):
    base = ("ss", "--bundle", "sp2-diagonal", "--cutoff", "10", "--no-header")
    _, a, _ = _run(capsys, *base)
    _, b, _ = _run(capsys, *base, "--jobs", "2")
    assert a == b


def test_cutoff_from_environment(monkeypatch, capsys):
    monkeypatch.setenv("FLAGLOOP_CUTOFF", "8")
    _, out, _ = _run(capsys, "ss", "--bundle", "su3-eval", "--format", "json", "--no-header")
    assert json.loads(out)["cutoff"] == 8
    monkeypatch.setenv("FLAGLOOP_CUTOFF", "many")
    code, _, _ = _run(capsys, "ss", "--bundle", "su3-eval")
    assert code == 2


def test_config_keeps_its_cutoff(tmp_path, capsys, monkeypatch):
    _, text, _ = _run(capsys, "export", "--bundle", "su3-eval", "--cutoff", "9")
    p = tmp_path / "su3.ini"
    p.write_text(text)
    monkeypatch.setenv("FLAGLOOP_CUTOFF", "14")
    _, out, _ = _run(capsys, "ss", "--config", str(p), "--format", "json", "--no-header")
    assert json.loads(out)["cutoff"] == 9


@pytest.mark.parametrize("argv", [
    ["ss", "--bundle", "su3-eval", "--mod", "4"],
    ["ss", "--bundle", "su3-eval", "--cutoff", "1"],
    ["ss", "--bundle", "e8-eval"],
    ["ss"],
    ["ss", "--bundle", "su3-eval", "--flip", "7"],
    ["ss", "--config", "/nonexistent/file.ini"],
    ["gb", "--vars", "g1", "--ideal", "g1 +* 2"],
])
def test_usage_errors_exit_2(argv, capsys):
    assert main(argv) == 2


def test_math_error_exit_3(capsys):
    # class-level assignments need integer coefficients
    assert main(["ss", "--bundle", "g2-diagonal", "--cutoff", "10", "--mod", "2"]) == 3


def test_d_squared_exit_4(tmp_path, capsys):
    p = tmp_path / "bad.ini"
    p.write_text("[fibration]\ncutoff = 6\n[base]\ngenerators = g:2\n[fibre]\ngenerators = y:1\n"
                 "families = x:2\n[differentials]\nd2(y) = g\nd2(x) = y*g\n")
    assert main(["ss", "--config", str(p)]) == 4


def test_flip_consistent_pair(capsys):
    base = ("ss", "--bundle", "su3-diagonal", "--cutoff", "10", "--no-header")
    _, a, _ = _run(capsys, *base)
    code, b, _ = _run(capsys, *base, "--flip", "0", "--flip", "1")
    assert code == 0 and a == b
    assert main(list(base) + ["--flip", "0"]) == 4


def test_verify_ok(capsys):
    code, out, _ = _run(capsys, "verify", "--bundle", "su3-eval", "--cutoff", "12", "--no-header")
    assert code == 0
    assert "torsion orders: orders [3]" in out
    assert "FAIL " not in out


def test_verify_sp2_ambiguous(capsys):
    code, out, _ = _run(capsys, "verify", "--bundle", "sp2-eval", "--cutoff", "12", "--no-header")
    assert code == 0
    assert sum(1 for l in out.splitlines() if l.startswith("AMBIGUOUS")) == 1


def test_verify_g2_path_alias(capsys):
    code, out, _ = _run(capsys, "verify", "--bundle", "g2-path", "--cutoff", "12", "--no-header")
    assert code == 0
    assert "PASS      cycle theta-psi" in out


def test_verify_failure_exit_5(monkeypatch, capsys):
    def failing(bundle, cutoff):
        rep = Report(bundle, cutoff)
        rep.add("degree 3", FAIL, "forced")
        return rep
    monkeypatch.setattr("flagloop.verify.verify_bundle", failing)
    assert main(["verify", "--bundle", "su3-eval"]) == 5


def test_export_round_trip(capsys, tmp_path):
    _, text, _ = _run(capsys, "export", "--bundle", "g2-diagonal", "--cutoff", "10")
    p = tmp_path / "g2.ini"
    p.write_text(text)
    _, a, _ = _run(capsys, "ss", "--config", str(p), "--no-header")
    _, b, _ = _run(capsys, "ss", "--bundle", "g2-diagonal", "--cutoff", "10", "--no-header")
    assert a == b


def test_run_config_invariants():
    assert RunConfig("ss", modulus=3, cutoff=2).cutoff == 2
    with pytest.raises(ParseError):
        RunConfig("ss", modulus=9)
    with pytest.raises(ParseError):
        RunConfig("ss", cutoff=1)


def test_default_cutoff(monkeypatch):
    monkeypatch.delenv("FLAGLOOP_CUTOFF", raising=False)
    assert cli.default_cutoff() == 12
