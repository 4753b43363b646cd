import json

import pytest

from dcpsampler.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_tune(capsys):
    code, out, _ = run_cli(capsys, "tune", "--n", "1000")
    assert code == 0
    rec = json.loads(out)
    assert rec["n"] == 1000
    assert 0.88 < rec["closed_form"] < 0.89
    assert 0.89 < rec["refined"] < 0.90
    assert abs(rec["refined_mean_size"] - 1000) / 1000 < 1e-4


def test_check_fig_word(capsys):
    code, out, err = run_cli(capsys, "check", "1110110101010001001")
    assert code == 0
    rec = json.loads(out)
    assert rec["nw_convex"] is True
    assert rec["geometric"] is True
    assert [5, 2, 1] in rec["factors"]
    assert "NW-convex: True" in err


def test_check_rejects_bad_word(capsys):
    code, out, _ = run_cli(capsys, "check", "10100")
    assert code == 0
    assert json.loads(out)["nw_convex"] is False
    code, _, err = run_cli(capsys, "check", "102")
    assert code == 2


def test_count(capsys):
    code, out, _ = run_cli(capsys, "count", "--n", "5")
    assert code == 0
    assert out.splitlines() == ["0,1", "1,1", "2,2", "3,4", "4,7", "5,13"]


def test_sample_path_free_deterministic(capsys):
    args = ("sample-path", "--x", "0.5", "--samples", "5", "--seed", "42")
    code1, out1, _ = run_cli(capsys, *args)
    code2, out2, _ = run_cli(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2
    recs = [json.loads(line) for line in out1.splitlines()]
    assert len(recs) == 5
    assert all(r["word"][0] == "1" for r in recs)


def test_sample_path_modes(capsys):
    code, out, _ = run_cli(
        capsys, "sample-path", "--n", "30", "--exact", "--samples", "3", "--seed", "7"
    )
    assert code == 0
    assert all(json.loads(l)["size"] == 30 for l in out.splitlines())
    code, out, _ = run_cli(
        capsys, "sample-path", "--n", "100", "--eps", "0.2", "--samples", "3", "--seed", "7"
    )
    assert code == 0
    assert all(80 <= json.loads(l)["size"] <= 120 for l in out.splitlines())


def test_sample_path_argument_validation(capsys):
    code, _, err = run_cli(capsys, "sample-path", "--samples", "1")
    assert code == 2 and "error" in err
    code, _, _ = run_cli(capsys, "sample-path", "--x", "0.5", "--n", "10")
    assert code == 2
    code, _, _ = run_cli(capsys, "sample-path", "--x", "1.5")
    assert code == 2


def test_trial_cap_exit_code(capsys):
    code, _, err = run_cli(
        capsys,
        "sample-path", "--n", "60", "--exact", "--seed", "1",
        "--trial-cap", "5", "--samples", "1",
    )
    assert code == 3
    assert "error" in err


def test_sample_path_workers_partition(capsys):
    # two workers: same per-stream content as a single-stream run of the
    # same share, different interleaving overall
    code, out, _ = run_cli(
        capsys, "sample-path", "--x", "0.4", "--samples", "4", "--seed", "11",
        "--workers", "2",
    )
    assert code == 0
    recs = [json.loads(l) for l in out.splitlines()]
    assert [r["stream"] for r in recs] == [0, 0, 1, 1]


def test_sample_dcp(capsys):
    code, out, _ = run_cli(
        capsys, "sample-dcp", "--x", "0.4", "--samples", "3", "--seed", "5"
    )
    assert code == 0
    recs = [json.loads(l) for l in out.splitlines()]
    assert len(recs) == 3
    for r in recs:
        assert r["perimeter"] == 2 * (r["width"] + r["height"])


def test_shape_csv(capsys, tmp_path):
    out_file = tmp_path / "profile.csv"
    code, out, err = run_cli(
        capsys, "shape", "--n", "300", "--samples", "10", "--grid", "11",
        "--seed", "3", "--out", str(out_file),
    )
    assert code == 0
    lines = out_file.read_text().strip().splitlines()
    assert lines[1] == "z,mean_height,reference,n,samples"
    assert len(lines) == 13
    assert "endpoint=" in err


def test_render(capsys, tmp_path):
    svg_file = tmp_path / "poly.svg"
    code, _, _ = run_cli(
        capsys, "render", "--words", "1,1,1,1", "--out", str(svg_file)
    )
    assert code == 0
    svg = svg_file.read_text()
    assert svg.startswith("<svg") and "</svg>" in svg
    code, _, _ = run_cli(capsys, "render", "--x", "0.4", "--seed", "9")
    assert code == 0
    code, _, _ = run_cli(capsys, "render", "--words", "1,1,1")
    assert code == 2
    code, _, _ = run_cli(capsys, "render", "--words", "11,1,1,1")
    assert code == 2


def test_verify(capsys):
    code, out, _ = run_cli(capsys, "verify")
    assert code == 0
    lines = out.strip().splitlines()
    names = {l.split(",")[0] for l in lines}
    assert {"checker_agreement", "enumeration_counts", "series_identity"} <= names
    assert all(",pass," in l for l in lines)


def test_unknown_command(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
