"""End-to-end tests of the command-line front end (in-process main())."""

import csv
import json
import math

import numpy as np
import pytest

from ngstate import cli, wigner
from ngstate.statemap import ReducedState, x_from_c4


def _read_csv(path):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[float(v) for v in row] for row in reader]
    return header, rows


def _read_meta(out_dir):
    with open(out_dir / "meta.json") as fh:
        return json.load(fh)


def test_validate_quick(capsys):
    assert cli.main(["validate", "--quick"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out and "0 failed" in out


def test_validate_corrupt_hook(capsys):
    assert cli.main(["validate", "--quick", "--corrupt-kappa"]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_fig1_defaults(tmp_path):
    out = tmp_path / "f1"
    assert cli.main(["fig1_c4", "--out", str(out)]) == 0
    header, rows = _read_csv(out / "c4_ratio.csv")
    assert header == ["n", "x", "c4_ratio"]
    assert len(rows) == 3 * 201
    assert all(-1.0 <= r[2] <= 0.0 for r in rows)
    # n = 10 endpoint sits near the saturating large-n curve
    tail = [r for r in rows if r[0] == 10.0 and r[1] == 20.0]
    assert tail and tail[0][2] == pytest.approx(-40.0 / 41.0, rel=0.02)
    meta = _read_meta(out)
    assert meta["preset"] == "fig1_c4"
    assert meta["c4_ratio.rows"] == 603


def test_fig2_values(tmp_path):
    out = tmp_path / "f2"
    assert cli.main(["fig2_purity", "--n", "0", "1", "--x", "0", "1", "5",
                     "--out", str(out)]) == 0
    header, rows = _read_csv(out / "purity.csv")
    assert header == ["n", "x", "p", "p_gaussian", "ratio"]
    assert len(rows) == 6
    by_key = {(r[0], r[1]): r for r in rows}
    assert by_key[(1.0, 0.0)][2] == pytest.approx(1.0 / 3.0, abs=1e-9)
    assert all(r[0] != 0.0 or r[4] == 1.0 for r in rows)
    assert all(math.sqrt(2.0 / math.e) < r[4] <= 1.0 for r in rows)


def test_fig3_surface(tmp_path):
    out = tmp_path / "f3"
    assert cli.main(["fig3_dsurface", "--x", "15", "--grid", "21x21",
                     "--out", str(out)]) == 0
    header, rows = _read_csv(out / "dsurface_x15.csv")
    assert header == ["u", "v", "ln_d_norm"]
    assert len(rows) == 441
    assert max(r[2] for r in rows) == 0.0
    meta = _read_meta(out)
    assert meta["dsurface_x15.u_max"] > 0.0


def test_fig4_gaussian_slice_peaks_at_origin(tmp_path):
    out = tmp_path / "f4"
    assert cli.main(["fig4_dslices", "--x", "0", "1", "--grid", "41",
                     "--out", str(out)]) == 0
    _, rows = _read_csv(out / "dslices.csv")
    gauss = [r for r in rows if r[0] == 0.0]
    assert len(gauss) == 41
    assert gauss[0][2] == 0.0                      # max at u = 0
    assert all(a[2] >= b[2] for a, b in zip(gauss, gauss[1:]))


def test_fig5_gaussian_grid_matches_exact(tmp_path):
    out = tmp_path / "f5"
    assert cli.main(["fig5_wigner", "--x", "0", "--grid", "11x11",
                     "--out", str(out)]) == 0
    header, rows = _read_csv(out / "wigner_x0.csv")
    assert header == ["u", "r", "ln_w_norm", "spread"]
    assert len(rows) == 121
    st = ReducedState.from_nx(10.0, 0.0)
    u = np.array([r[0] for r in rows])
    r_ = np.array([r[1] for r in rows])
    want = wigner.ln_w_gaussian_exact(st, u * u, r_ * r_)
    want = want - want.max()
    got = np.array([r[2] for r in rows])
    assert np.max(np.abs(got - want)) < 1e-6
    meta = _read_meta(out)
    assert meta["wigner_x0.converged"] is True
    assert meta["wigner_x0.max_spread"] < 1e-3


def test_fig6_single_panel(tmp_path):
    out = tmp_path / "f6"
    assert cli.main(["fig6_contours", "--phi", "0", "--mode", "para",
                     "--grid", "9x9", "--out", str(out)]) == 0
    header, rows = _read_csv(out / "contours_phi0_para.csv")
    assert header == ["phi", "pi", "ln_w_norm"]
    assert len(rows) == 81
    # symmetric window containing the origin
    assert rows[0][0] == -rows[-1][0] and rows[0][1] == -rows[-1][1]
    assert _read_meta(out)["contours_phi0_para.converged"] is True


def test_fig7_peak_is_interior(tmp_path):
    out = tmp_path / "f7"
    assert cli.main(["fig7_slice", "--grid", "41", "--out", str(out)]) == 0
    _, rows = _read_csv(out / "slice.csv")
    assert len(rows) == 41
    assert all(r[1] == 0.0 for r in rows)          # pi = 0 slice
    top = max(range(len(rows)), key=lambda i: rows[i][2])
    assert 0 < top < len(rows) - 1
    meta = _read_meta(out)
    assert rows[top][0] == pytest.approx(meta["slice.phi_peak"], rel=0.05)


def test_threads_do_not_change_bytes(tmp_path):
    # small N-list keeps it fast; --tol 0.5 accepts its coarse spread
    args = ["fig6_contours", "--grid", "7x7", "--N-list", "4", "6", "8",
            "--tol", "0.5"]
    a, b = tmp_path / "a", tmp_path / "b"
    assert cli.main(args + ["--threads", "1", "--out", str(a)]) == 0
    assert cli.main(args + ["--threads", "8", "--out", str(b)]) == 0
    names = sorted(p.name for p in a.glob("*.csv"))
    assert len(names) == 4
    for name in names:
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_c4_ratio_flag_sets_x(tmp_path):
    out = tmp_path / "ratio"
    assert cli.main(["fig3_dsurface", "--c4-ratio", "-0.5", "--grid", "5x5",
                     "--out", str(out)]) == 0
    meta = _read_meta(out)
    assert float(meta["x"]) == pytest.approx(x_from_c4(10.0, -0.5), rel=1e-8)


def test_env_threads_fallback(tmp_path, monkeypatch):
    monkeypatch.setenv("NGSTATE_THREADS", "3")
    out = tmp_path / "env"
    assert cli.main(["fig1_c4", "--x", "0", "1", "--out", str(out)]) == 0
    assert _read_meta(out)["threads"] == 3


def test_json_format(tmp_path):
    out = tmp_path / "js"
    assert cli.main(["fig1_c4", "--x", "0", "1", "--format", "json",
                     "--out", str(out)]) == 0
    with open(out / "c4_ratio.json") as fh:
        data = json.load(fh)
    assert data["header"] == ["n", "x", "c4_ratio"]
    assert len(data["rows"]) == 6


def test_invalid_config_exits_2(tmp_path, capsys):
    out = str(tmp_path / "bad")
    assert cli.main(["fig3_dsurface", "--x", "5", "--c4-ratio", "-0.5",
                     "--out", out]) == 2
    assert cli.main(["fig3_dsurface", "--grid", "bogus", "--out", out]) == 2
    assert cli.main(["fig1_c4", "--threads", "0", "--out", out]) == 2
    assert cli.main(["fig5_wigner", "--tol", "-1", "--out", out]) == 2
    assert cli.main(["fig5_wigner", "--N-list", "4", "5", "6",
                     "--out", out]) == 2
    assert cli.main(["fig6_contours", "--gamma", "1.5", "--out", out]) == 2
    capsys.readouterr()


def test_not_converged_exits_1_with_partial_output(tmp_path, capsys):
    out = tmp_path / "nc"
    code = cli.main(["fig5_wigner", "--x", "15", "--N-list", "4", "6", "8",
                     "--grid", "5x5", "--tol", "1e-9", "--out", str(out)])
    assert code == 1
    capsys.readouterr()
    assert (out / "wigner_x15.csv").exists()       # partial output kept
    meta = _read_meta(out)
    assert meta["wigner_x15.converged"] is False
    assert meta["wigner_x15.max_spread"] > 1e-9
