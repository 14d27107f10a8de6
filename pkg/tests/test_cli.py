"""Command line: gen, solve, audit, sweep, verify."""

import io
import json

import numpy as np
import pytest

from polylab import PolySystem, read_csv
from polylab.cli import main


def run_cli(args):
    return main(list(args))


def gen_file(tmp_path, name="sys.json", *extra):
    path = tmp_path / name
    code = run_cli(
        ["gen", "--family", "cyclic_squares", "--d", "2", "--sigma", "0.5", "--out", str(path)]
        + list(extra)
    )
    assert code == 0
    return path


def test_gen_writes_a_loadable_system(tmp_path):
    path = gen_file(tmp_path)
    data = json.loads(path.read_text())
    s = PolySystem.from_json_dict(data)
    assert s.d == 2
    assert s.family_tag == "cyclic_squares"
    assert len(s.true_roots) == 4
    for r in s.true_roots:
        assert s.residual(np.asarray(r)) <= 1e-12 * s.coefficient_scale()


def test_gen_prints_to_stdout_by_default(capsys):
    assert run_cli(["gen", "--family", "orthogonal", "--d", "2", "--sigma", "0.1"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert PolySystem.from_json_dict(data).family_tag == "orthogonal"


def test_gen_accepts_a_shift(tmp_path):
    path = tmp_path / "s.json"
    code = run_cli(
        ["gen", "--family", "orthogonal", "--d", "2", "--sigma", "0.1",
         "--shift", "0.25,0.5", "--out", str(path)]
    )
    assert code == 0
    s = PolySystem.from_json_dict(json.loads(path.read_text()))
    target = np.array([0.25, 0.5], dtype=complex)
    assert any(np.linalg.norm(np.asarray(r) - target) <= 1e-12 for r in s.true_roots)


def test_solve_reports_all_roots(tmp_path):
    sys_path = gen_file(tmp_path)
    out_path = tmp_path / "roots.json"
    code = run_cli(
        ["solve", "--system", str(sys_path), "--method", "nf", "--out", str(out_path)]
    )
    assert code == 0
    rep = json.loads(out_path.read_text())
    assert rep["method_tag"] == "nf"
    assert len(rep["roots"]) == 4
    assert max(rep["residuals"]) <= 1e-9
    assert rep["diagnostics"]["polished"] is False


def test_solve_polish_flag_reaches_the_solver(tmp_path, capsys):
    sys_path = gen_file(tmp_path)
    code = run_cli(["solve", "--system", str(sys_path), "--method", "macaulay", "--polish"])
    assert code == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["diagnostics"]["polished"] is True
    assert rep["method_tag"] == "macaulay"


def test_solve_reads_stdin(tmp_path, capsys, monkeypatch):
    sys_path = gen_file(tmp_path)
    monkeypatch.setattr("sys.stdin", io.StringIO(sys_path.read_text()))
    code = run_cli(["solve", "--system", "-", "--method", "mep"])
    assert code == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["method_tag"] == "mep"
    assert len(rep["roots"]) == 4


def test_audit_compares_every_method_at_the_stored_root(tmp_path, capsys):
    sys_path = tmp_path / "perm.json"
    run_cli(["gen", "--family", "permutation", "--d", "2", "--sigma", "0.01",
             "--out", str(sys_path)])
    code = run_cli(["audit", "--system", str(sys_path)])
    assert code == 0
    out = json.loads(capsys.readouterr().out)
    assert sorted(out) == ["macaulay", "mep", "nf"]
    for entry in out.values():
        assert entry["kappa_root"] == pytest.approx(100.0, rel=1e-6)
        assert entry["kappa_sub"] > entry["kappa_root"]
        assert entry["ratio"] == pytest.approx(entry["kappa_sub"] / entry["kappa_root"], rel=1e-9)


def test_audit_marks_methods_that_do_not_apply(tmp_path, capsys):
    # mixed quadratic terms rule out the determinantal representation
    sys_path = tmp_path / "mixed.json"
    run_cli(["gen", "--family", "notdev2d", "--d", "2", "--sigma", "0.01",
             "--out", str(sys_path)])
    code = run_cli(["audit", "--system", str(sys_path)])
    assert code == 0
    out = json.loads(capsys.readouterr().out)
    assert sorted(out) == ["macaulay", "mep", "nf"]
    assert "unsupported" in out["mep"]
    assert out["nf"]["kappa_sub"] > 0


def test_audit_single_unsupported_method_exits_cleanly(tmp_path, capsys):
    sys_path = tmp_path / "mixed.json"
    run_cli(["gen", "--family", "notdev2d", "--d", "2", "--sigma", "0.01",
             "--out", str(sys_path)])
    code = run_cli(["audit", "--system", str(sys_path), "--method", "mep"])
    assert code == 1
    assert "does not apply" in capsys.readouterr().err


def test_audit_accepts_an_explicit_root(tmp_path, capsys):
    sys_path = gen_file(tmp_path)
    code = run_cli(
        ["audit", "--system", str(sys_path), "--method", "nf", "--root", "0,0"]
    )
    assert code == 0
    out = json.loads(capsys.readouterr().out)
    assert out["method_tag"] == "nf"
    assert out["kappa_root"] == pytest.approx(2.0, rel=1e-9)  # 1 / sigma


def test_audit_requires_a_root_when_none_is_stored(tmp_path, capsys):
    from polylab import FamilySpec, generate

    s = generate(FamilySpec(family="cyclic_squares", d=2, sigma=0.5))
    bare = PolySystem(d=s.d, polys=s.polys, true_roots=[], family_tag="")
    path = tmp_path / "bare.json"
    path.write_text(json.dumps(bare.to_json_dict()))
    assert run_cli(["audit", "--system", str(path)]) == 1
    assert "pass --root" in capsys.readouterr().err


def test_sweep_figure_writes_csv_and_svg(tmp_path, capsys):
    out = tmp_path / "plots"
    code = run_cli(["sweep", "--figure", "1c", "--trials", "1", "--out", str(out)])
    assert code == 0
    records = read_csv(out / "fig1c.csv")
    assert len(records) == 9
    assert (out / "fig1c.svg").read_text().startswith("<svg")
    assert "fig1c.csv" in capsys.readouterr().out


def test_sweep_figure_group_expands(tmp_path):
    out = tmp_path / "plots"
    code = run_cli(["sweep", "--figure", "4", "--trials", "2", "--out", str(out)])
    assert code == 0
    for name in ("fig4a.csv", "fig4a.svg", "fig4b.csv", "fig4b.svg"):
        assert (out / name).exists()


def test_sweep_custom_builds_a_spec_from_flags(tmp_path):
    out = tmp_path / "plots"
    code = run_cli(
        ["sweep", "--custom", "--method", "nf", "--family", "orthogonal",
         "--axis", "sigma", "--values", "0.1,0.01", "--d", "2",
         "--shift", "0.333,0.333", "--trials", "2", "--out", str(out)]
    )
    assert code == 0
    records = read_csv(out / "figcustom.csv")
    assert [r.x for r in records] == [0.1, 0.01]
    assert all(r.median_digits > 4.0 for r in records)


def test_sweep_demands_a_mode():
    with pytest.raises(SystemExit):
        run_cli(["sweep"])


def test_sweep_custom_reports_missing_flags():
    with pytest.raises(SystemExit, match="values"):
        run_cli(["sweep", "--custom", "--method", "nf", "--family", "orthogonal",
                 "--axis", "sigma"])


def test_sweep_rejects_unknown_figures():
    with pytest.raises(SystemExit):
        run_cli(["sweep", "--figure", "99"])


def test_verify_single_suite_prints_json_and_passes(capsys):
    code = run_cli(["verify", "--suite", "lemmaA1"])
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    assert list(out) == ["lemmaA1"]
    assert out["lemmaA1"]["passed"] is True
    assert "max_log_excess_over_u0" in out["lemmaA1"]["details"]


def test_verify_exit_code_tracks_failures(capsys, monkeypatch):
    from polylab import verification

    def stub(seed=1):
        return verification.VerificationResult(name="lemmaA1", passed=False, details={})

    monkeypatch.setitem(verification.SUITES, "lemmaA1", stub)
    code = run_cli(["verify", "--suite", "lemmaA1"])
    out = json.loads(capsys.readouterr().out)
    assert code == 1
    assert out["lemmaA1"]["passed"] is False
