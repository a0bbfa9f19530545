import csv
import io

import pytest

from zipzip import cli


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_parse_n():
    assert cli.parse_n("256..2048") == [256, 512, 1024, 2048]
    assert cli.parse_n("1,5,7") == [1, 5, 7]
    for bad in ("3..9", "8..4", "x", "0", ""):
        with pytest.raises(cli.UsageError):
            cli.parse_n(bad)


@pytest.mark.parametrize("argv", [
    ["nope"],
    ["depth-height", "--variant", "jit"],
    ["depth-height", "--n", "3..9"],
    ["depth-height", "--trials", "0"],
    ["vary-p", "--p", "1.5"],
    ["depth-height", "--format", "svg"],
    ["depth-height", "--bogus"],
])
def test_usage_errors_exit_1(argv, capsys):
    code, out, err = run(argv, capsys)
    assert code == 1 and "usage error" in err and out == ""


def test_depth_rows_carry_provenance_and_are_deterministic(capsys):
    argv = ["depth-discrepancy", "--n", "1,64", "--trials", "5", "--seed", "3"]
    code, first, _ = run(argv, capsys)
    assert code == 0
    _, second, _ = run(argv, capsys)
    assert first == second
    table = rows(first)
    assert len(table) == 6
    for r in table:
        assert r["trials"] == "5" and r["seed"] == "3"
        if r["n"] == "1":
            assert r["smallest_depth"] == r["largest_depth"] == "1"


def test_depth_height_n1(capsys):
    code, out, _ = run(["depth-height", "--n", "1", "--trials", "2"], capsys)
    assert code == 0
    assert all(r["mean_depth"] == "1" and r["mean_height"] == "1" for r in rows(out))


def test_six_significant_digits(capsys):
    _, out, _ = run(["depth-height", "--n", "256", "--trials", "3",
                     "--variant", "zipzip"], capsys)
    value = rows(out)[0]["depth_scaled"]
    assert len(value.replace(".", "").lstrip("0")) <= 6


def test_rank_ties_reports_fits(capsys):
    code, out, err = run(["rank-ties", "--n", "256..2048", "--budget", "20000",
                          "--c", "1"], capsys)
    assert code == 0
    assert "fit uniform" in err and "fit zipzip" in err
    assert {r["variant"] for r in rows(out)} == {"uniform", "zipzip"}


def test_jit_bits_both_orders(capsys):
    code, out, _ = run(["jit-bits", "--n", "1,128", "--trials", "2"], capsys)
    table = rows(out)
    assert code == 0 and {r["order"] for r in table} == {"sequential", "random"}
    single = [r for r in table if r["n"] == "1"]
    assert all(r["r2_bits_per_node"] == "0" and r["r1_diff_bits_per_node"] == "0"
               for r in single)


def test_vary_p_monotone_at_extremes(capsys):
    _, out, _ = run(["vary-p", "--n", "1024", "--trials", "10",
                     "--p", "0.5,0.999"], capsys)
    half, worst = rows(out)
    assert float(worst["depth_scaled"]) > float(half["depth_scaled"])


def test_biased_fit_message(capsys):
    code, out, err = run(["biased", "--n", "512", "--trials", "20"], capsys)
    assert code == 0 and "fit n=512" in err
    assert [r["profile"] for r in rows(out)] == ["equal", "sqrt_n", "n", "n_squared", "half"]


def test_hi_check_marks_jit_exempt(capsys):
    code, out, _ = run(["hi-check", "--n", "50", "--trials", "10"], capsys)
    table = {r["variant"]: r["status"] for r in rows(out)}
    assert code == 0
    assert table.pop("jit") == "exempt"
    assert set(table.values()) == {"pass"}


def test_validate_pass_and_negative_control(capsys):
    code, out, _ = run(["validate", "--ops", "300"], capsys)
    assert code == 0 and all(r["status"] == "pass" for r in rows(out))
    code, out, err = run(["validate", "--ops", "300", "--inject-fault",
                          "--variant", "zipzip"], capsys)
    assert code == 2 and "step 150" in err
    code, _, _ = run(["validate", "--ops", "0"], capsys)
    assert code == 0


def test_csv_and_svg_files(tmp_path, capsys):
    out = tmp_path / "dh.csv"
    code, stdout, _ = run(["depth-height", "--n", "64,128,256", "--trials", "3",
                           "--out", str(out), "--format", "both"], capsys)
    assert code == 0 and stdout == ""
    assert out.read_text().startswith("variant,n,trials,seed,")
    svg = (tmp_path / "dh.svg").read_text()
    assert svg.startswith("<svg") and svg.count("<polyline") == 6
