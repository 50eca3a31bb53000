"""Command-line interface: subcommands, exit codes, and deterministic
machine-readable output."""

from __future__ import annotations

from arbocert import tree_group as tg
from arbocert.cli import main

GOLDEN_TEXT = "P: 2 0 -2\nQ: 1 0 1\nx0: 3 1\n"


def run(capsys, argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        import io
        import sys
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(argv)
    return code, capsys.readouterr().out


def write_map(tmp_path, text):
    path = tmp_path / "map.txt"
    path.write_text(text)
    return str(path)


def test_analyze_golden(tmp_path, capsys):
    path = write_map(tmp_path, GOLDEN_TEXT)
    code, out = run(capsys, ["analyze", "--input", path])
    assert code == 0
    assert out.startswith("arbocert v1\n")
    assert "collision: ell=2" in out
    assert "delta: 1" in out
    assert "normal-form: 2 -2 1" in out


def test_analyze_no_collision(tmp_path, capsys):
    path = write_map(tmp_path, "P: 1 0 0\nQ: 0 0 1\n")
    code, out = run(capsys, ["analyze", "--input", path])
    assert code == 0
    assert "collision: none within 20 iterates" in out


def test_analyze_nonsquare_delta(tmp_path, capsys):
    path = write_map(tmp_path, "P: 1 4 2\nQ: 2 6 4\nx0: 3 1\n")
    code, out = run(capsys, ["analyze", "--input", path])
    assert code == 0
    assert "delta: 2" in out
    assert "delta-square: no" in out


def test_analyze_parse_error(tmp_path, capsys):
    path = write_map(tmp_path, "nonsense\n")
    code, out = run(capsys, ["analyze", "--input", path])
    assert code == 2
    assert "error:" in out


def test_analyze_degenerate_map(tmp_path, capsys):
    path = write_map(tmp_path, "P: 1 0 0\nQ: 2 0 0\n")
    code, out = run(capsys, ["analyze", "--input", path])
    assert code == 3
    assert "degenerate" in out


def test_certify_golden_exit_code(tmp_path, capsys):
    path = write_map(tmp_path, GOLDEN_TEXT)
    code, out = run(capsys, ["certify", "--input", path, "--N", "6"])
    assert code == 1  # frozen verdict: NotFull with witness {1, 2}
    assert "verdict: NotFull" in out
    assert "witness: 1 2" in out
    assert "witness-audit: ok" in out


def test_certify_full_mtilde_exit_code(tmp_path, capsys):
    path = write_map(tmp_path, "P: 1 4 2\nQ: 2 6 4\nx0: 3 1\n")
    code, out = run(capsys, ["certify", "--input", path, "--N", "5"])
    assert code == 0
    assert "verdict: FullMtilde" in out


def test_certify_degenerate_critical_hit(tmp_path, capsys):
    path = write_map(tmp_path, "P: 2 0 -2\nQ: 1 0 1\nx0: 6 5\n")
    code, out = run(capsys, ["certify", "--input", path, "--N", "4"])
    assert code == 4
    assert "verdict: DegenerateCriticalHit" in out


def test_certify_output_deterministic(tmp_path, capsys):
    path = write_map(tmp_path, GOLDEN_TEXT)
    _, out1 = run(capsys, ["certify", "--input", path, "--N", "5"])
    _, out2 = run(capsys, ["certify", "--input", path, "--N", "5"])
    assert out1 == out2


def test_kappa_output(tmp_path, capsys):
    path = write_map(tmp_path, GOLDEN_TEXT)
    code, out = run(capsys, ["kappa", "--input", path, "--N", "3"])
    assert code == 0
    assert "kappa-1: -20 case=disc" in out
    assert "kappa-3: 225/161 case=cross" in out


def test_group_order(capsys):
    code, out = run(capsys, ["group", "order", "2", "3"])
    assert code == 0
    assert "order: 16" in out


def test_group_member_identity(capsys):
    ident = tg.identity(2).to_hex()
    code, out = run(capsys, ["group", "member", ident, "2"])
    assert code == 0
    assert "member: in M, common sign +1" in out


def test_group_cousins_odd_example(capsys):
    sigma = tg.compose(tg.single_swap(3, (0, 0)), tg.single_swap(3, (0, 1)))
    code, out = run(capsys, ["group", "cousins", sigma.to_hex(), "-", "2", "3"])
    assert code == 0
    assert "cousins: Odd" in out


def test_group_abelianize(capsys):
    sigma = tg.single_swap(2, ())
    code, out = run(capsys, ["group", "abelianize", sigma.to_hex(), "2"])
    assert code == 0
    assert "abelianize: -1" in out


def test_verify_single_suite(capsys):
    code, out = run(capsys, ["verify", "--suite", "groups", "--seed", "1"])
    assert code == 0
    assert "suite-groups: pass" in out
    assert "result: pass" in out
    assert "suite-forms" not in out


def test_verify_deterministic(capsys):
    _, out1 = run(capsys, ["verify", "--suite", "generate", "--seed", "7"])
    _, out2 = run(capsys, ["verify", "--suite", "generate", "--seed", "7"])
    assert out1 == out2


def test_stdin_input(capsys, monkeypatch):
    code, out = run(capsys, ["analyze"], stdin=GOLDEN_TEXT,
                    monkeypatch=monkeypatch)
    assert code == 0
    assert "collision: ell=2" in out
