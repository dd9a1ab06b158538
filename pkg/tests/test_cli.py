import pytest

from conftest import BIGON
from geolam.cli import fmt, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_validate_ok(capsys):
    code, out, _ = run(capsys, "validate", "torus")
    assert code == 0
    assert "status valid" in out and "euler_characteristic -1" in out


def test_validate_bad_asset(capsys, tmp_path):
    f = tmp_path / "bigon.track"
    f.write_text(BIGON)
    code, out, err = run(capsys, "validate", str(f))
    assert code == 2
    assert "disc with 2 spikes" in out
    assert err.startswith("error: invalid-track")


def test_missing_asset(capsys):
    code, _, err = run(capsys, "validate", "/nonexistent.track")
    assert code == 2 and err.startswith("error: missing-file")


def test_dtheta_record(capsys):
    code, out, _ = run(capsys, "dtheta", "--track", "torus", "--lhs", "1/2", "--rhs", "1/3",
                       "--rmax", "64")
    assert code == 0
    body = out.splitlines()[4:]
    assert body == ["value 1/3", "depth 2", "witness a- a- a-", "capped false"]


def test_header(capsys):
    _, out, _ = run(capsys, "dtheta", "--track", "torus", "--lhs", "1/2", "--rhs", "1/3",
                    "--seed", "9")
    lines = out.splitlines()
    assert lines[0].startswith("# geolam ")
    assert lines[1] == "# command dtheta"
    assert lines[3] == "# seed 9"


def test_paths(capsys):
    code, out, _ = run(capsys, "paths", "--track", "torus", "--r", "3", "--lamination", "1/2")
    body = [l for l in out.splitlines() if not l.startswith("#")]
    assert code == 0 and len(body) == 6
    assert body == sorted(body, key=lambda l: [(t[:-1], t[-1] == "+") for t in l.split()])


def test_paths_cap(capsys):
    code, out, err = run(capsys, "paths", "--track", "genus2", "--r", "6", "--cap", "100")
    assert code == 3 and "# partial 101" in out and err.startswith("error: cap-exceeded")


def test_zippers_csv(capsys, tmp_path):
    slopes = tmp_path / "slopes.txt"
    slopes.write_text("1/2\n1/3\n2/5\n")
    code, out, _ = run(capsys, "zippers", "--track", "torus", "--r", "3", "--census", str(slopes))
    rows = [l for l in out.splitlines() if not l.startswith("#")]
    assert code == 0
    assert rows[0] == "r,zipper_count,bound_z_r,bound_better,census_size,status"
    assert rows[1:] == ["1,5,64,5,2,complete", "2,11,1024,1280,3,complete",
                        "3,20,5184,32805,3,complete"]


def test_zippers_cap(capsys):
    code, out, _ = run(capsys, "zippers", "--track", "genus2", "--r", "2", "--cap", "100")
    assert code == 3 and "capped" in out


def test_dimension_output(capsys, tmp_path):
    out_file = tmp_path / "dim.csv"
    code, out, _ = run(capsys, "dimension", "--track", "torus", "--slopes", "50", "--rmax", "24",
                       "--rmin", "4", "--step", "4", "--schedule", "recip", "--out", str(out_file))
    text = out_file.read_text()
    assert code == 0 and out == ""
    assert "r,eps,N,running_estimate" in text
    assert "# estimate slope=" in text


def test_metriccheck_small(capsys):
    code, out, _ = run(capsys, "metriccheck", "--slopes", "6", "--rmax", "32", "--grid", "100")
    assert code == 0
    assert out.count(",true,") == 5


def test_jobs_do_not_change_bytes(capsys):
    args = ["metriccheck", "--slopes", "7", "--rmax", "32", "--grid", "50"]
    _, one, _ = run(capsys, *args, "--jobs", "1")
    _, eight, _ = run(capsys, *args, "--jobs", "8")
    assert one == eight


def test_bad_slope(capsys):
    code, _, err = run(capsys, "dtheta", "--track", "torus", "--lhs", "x", "--rhs", "1/3")
    assert code == 2 and err.startswith("error: bad-slope")


@pytest.mark.parametrize("value,text", [(0.1 + 0.2, "0.3"), (1 / 3, "0.333333333333"),
                                        (True, "true"), (None, "")])
def test_fmt(value, text):
    assert fmt(value) == text


def test_fmt_fraction():
    from fractions import Fraction

    assert fmt(Fraction(2, 6)) == "1/3" and fmt(Fraction(4, 2)) == "2"
