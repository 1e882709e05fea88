"""Tests for the deterministic CSV/SVG report writers."""

import numpy as np

from jholo.report import rows_to_csv_text, save_loglog, save_scatter, write_csv


def test_csv_rendering_rules():
    rows = [{"name": "a", "err": 0.123456789012345, "n": 7, "ok": True},
            {"name": "b", "err": 1e-17, "n": np.int64(3), "ok": np.bool_(False)}]
    text = rows_to_csv_text(rows)
    lines = text.splitlines()
    assert lines[0] == "name,err,n,ok"
    assert lines[1] == "a,0.123456789012,7,true"
    assert lines[2] == "b,1e-17,3,false"
    assert text.endswith("\n")


def test_csv_complex_columns_split():
    rows = [{"z": 1.5 - 2.25j, "w": np.complex128(0.5j)}]
    text = rows_to_csv_text(rows)
    assert text.splitlines()[0] == "z_re,z_im,w_re,w_im"
    assert text.splitlines()[1] == "1.5,-2.25,0,0.5"


def test_csv_column_order_and_missing_values():
    # first-seen order across rows; missing cells render empty
    rows = [{"a": 1, "b": 2}, {"b": 4, "c": 5}]
    text = rows_to_csv_text(rows)
    assert text == "a,b,c\n1,2,\n,4,5\n"
    # explicit column list wins
    text2 = rows_to_csv_text(rows, columns=["c", "a"])
    assert text2 == "c,a\n,1\n5,\n"


def test_csv_bytes_are_deterministic(tmp_path):
    rows = [{"k": i, "v": np.sin(i) * 1e-5, "z": np.exp(1j * i)}
            for i in range(40)]
    assert rows_to_csv_text(rows) == rows_to_csv_text([dict(r) for r in rows])
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    write_csv(str(p1), rows)
    write_csv(str(p2), rows)
    assert p1.read_bytes() == p2.read_bytes()


def test_write_csv_creates_directories(tmp_path):
    target = tmp_path / "deep" / "nested" / "out.csv"
    write_csv(str(target), [{"x": 1}])
    assert target.read_text() == "x\n1\n"


def test_loglog_plot_is_deterministic(tmp_path):
    x = 0.5 ** np.arange(3, 10)
    series = {"err": x**2, "ref": 0.1 * x}
    p1 = tmp_path / "one.svg"
    p2 = tmp_path / "two.svg"
    save_loglog(str(p1), x, series, "h", "error", title="decay")
    save_loglog(str(p2), x, series, "h", "error", title="decay")
    data = p1.read_bytes()
    assert data[:5] == b"<?xml"
    assert data == p2.read_bytes(), "same plot twice gave different bytes"


def test_scatter_plot_with_mask(tmp_path):
    rng = np.random.default_rng(0)
    x, y = rng.standard_normal((2, 50))
    mask = x + y > 0
    p1 = tmp_path / "one.svg"
    p2 = tmp_path / "two.svg"
    save_scatter(str(p1), x, y, mask=mask, xlabel="x", ylabel="y")
    save_scatter(str(p2), x, y, mask=mask, xlabel="x", ylabel="y")
    assert p1.read_bytes()[:5] == b"<?xml"
    assert p1.read_bytes() == p2.read_bytes()
