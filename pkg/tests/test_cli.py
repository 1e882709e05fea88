"""End-to-end tests of the command-line front end.

Exit-code contract: 0 all checks passed, 1 a finding (run succeeded but a
numerical check failed), 2 usage or configuration errors.
"""

import subprocess
import sys

from jholo.cli import main


def _write(tmp_path, text, name="run.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_cg_selftest_passes(tmp_path, capsys):
    cfg = _write(tmp_path, "N = 32\n")
    out = tmp_path / "out"
    code = main(["cg-selftest", "--config", cfg, "--outdir", str(out)])
    assert code == 0
    assert "PASS" in capsys.readouterr().out
    report = (out / "report.csv").read_text()
    assert report.splitlines()[0] == "check,N,value,bound,pass"
    assert "refinement_ratio" in report
    assert (out / "plots" / "cg_convergence.svg").exists()


def test_solve_disc_passes(tmp_path, capsys):
    cfg = _write(tmp_path, "N = 32\nA = const:0.1,0,0,0.05\ntol = 1e-6\n")
    out = tmp_path / "out"
    code = main(["solve-disc", "--config", cfg, "--outdir", str(out)])
    assert code == 0
    assert "residual" in capsys.readouterr().out
    report = (out / "report.csv").read_text()
    assert "residual" in report and "true" in report
    assert (out / "plots" / "disc_deformation.svg").exists()


def test_solve_disc_stall_is_a_finding(tmp_path, capsys):
    # an unreachable tolerance stalls the Picard iteration at the floating
    # point floor; the run completes and reports the finding via exit 1
    cfg = _write(tmp_path, "n = 1\nN = 32\nA = const:0.45\ntol = 1e-18\n")
    out = tmp_path / "out"
    code = main(["solve-disc", "--config", cfg, "--outdir", str(out)])
    assert code == 1
    assert "no convergence" in capsys.readouterr().out
    assert "false" in (out / "report.csv").read_text()


def test_regions_pass_and_determinism(tmp_path):
    cfg = _write(tmp_path, "samples = 200\nseed = 3\n")
    outs = []
    for name in ("one", "two"):
        out = tmp_path / name
        assert main(["regions", "--config", cfg, "--outdir", str(out)]) == 0
        outs.append(out)
    a, b = outs
    assert (a / "report.csv").read_bytes() == (b / "report.csv").read_bytes()
    assert (a / "plots" / "regions.svg").read_bytes() == \
        (b / "plots" / "regions.svg").read_bytes()


def test_regions_needs_model_domain(tmp_path):
    cfg = _write(tmp_path, "rho = custom-poly:1,0.5,-0.25\n")
    assert main(["regions", "--config", cfg, "--outdir", str(tmp_path / "o")]) == 2


def test_lindelof_passes(tmp_path, capsys):
    cfg = _write(tmp_path, "N = 32\n")
    out = tmp_path / "out"
    code = main(["lindelof", "--config", cfg, "--outdir", str(out)])
    assert code == 0
    assert "disagreement" in capsys.readouterr().out
    report = (out / "report.csv").read_text()
    assert "curve" in report and "region" in report and "ladder" in report
    assert (out / "plots" / "lindelof_ladder.svg").exists()


def test_lindelof_rejects_ball(tmp_path):
    cfg = _write(tmp_path, "rho = ball\n")
    assert main(["lindelof", "--config", cfg, "--outdir", str(tmp_path / "o")]) == 2


def test_tangent_passes(tmp_path, capsys):
    cfg = _write(tmp_path, "N = 32\n")
    out = tmp_path / "out"
    code = main(["tangent", "--config", cfg, "--outdir", str(out)])
    assert code == 0
    assert "flag tangent" in capsys.readouterr().out
    assert (out / "plots" / "tangent_decay.svg").exists()


def test_fatou_survey_passes(tmp_path, capsys):
    cfg = _write(tmp_path, "rho = ball\nsamples = 6\n")
    out = tmp_path / "out"
    code = main(["fatou-survey", "--config", cfg, "--outdir", str(out)])
    assert code == 0
    assert "fraction 1.000" in capsys.readouterr().out
    assert (out / "plots" / "survey.svg").exists()


def test_fatou_survey_needs_ball(tmp_path):
    cfg = _write(tmp_path, "rho = halfspace\nsamples = 4\n")
    assert main(["fatou-survey", "--config", cfg,
                 "--outdir", str(tmp_path / "o")]) == 2


def test_usage_errors_exit_2(tmp_path, capsys):
    assert main(["does-not-exist"]) == 2
    assert main([]) == 2
    capsys.readouterr()  # drop argparse noise

    missing = str(tmp_path / "absent.cfg")
    assert main(["cg-selftest", "--config", missing,
                 "--outdir", str(tmp_path / "o")]) == 2
    assert "config error" in capsys.readouterr().err

    bad_key = _write(tmp_path, "resolution = 64\n", "bad_key.cfg")
    assert main(["cg-selftest", "--config", bad_key,
                 "--outdir", str(tmp_path / "o")]) == 2

    bad_val = _write(tmp_path, "N = 33\n", "bad_val.cfg")
    assert main(["cg-selftest", "--config", bad_val,
                 "--outdir", str(tmp_path / "o")]) == 2

    bad_mat = _write(tmp_path, "A = const:0.1,0.2\n", "bad_mat.cfg")
    assert main(["solve-disc", "--config", bad_mat,
                 "--outdir", str(tmp_path / "o")]) == 2
    assert "expected 4 entries" in capsys.readouterr().err


def test_help_exits_clean(capsys):
    # argparse's SystemExit(0) is absorbed into the exit-code contract
    assert main(["--help"]) == 0
    assert "cg-selftest" in capsys.readouterr().out


def test_console_script_entry_point(tmp_path):
    cfg = _write(tmp_path, "N = 32\n")
    proc = subprocess.run([sys.executable, "-m", "jholo.cli", "cg-selftest",
                           "--config", cfg, "--outdir", str(tmp_path / "o")],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert "cg-selftest" in proc.stdout
