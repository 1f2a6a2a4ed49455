import json

import pytest

from perclat.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_cells_on_grid(capsys):
    code, out, _ = run(capsys, "cells", "grid4x4")
    assert code == 0 and len(out.strip().splitlines()) == 16
    code, out, _ = run(capsys, "--json", "cells", "grid2x2")
    assert code == 0 and len(json.loads(out)["cells"]) == 4


def test_validate_and_shells(capsys):
    assert run(capsys, "validate", "grid3x3")[0] == 0
    code, out, _ = run(capsys, "shells", "fixture:bowtie")
    assert code == 0 and len(out.strip().splitlines()) == 2


def test_malformed_file_exits_two_with_location(tmp_path, capsys):
    p = tmp_path / "bad.lat"
    p.write_text("perclat-lattice 1\nvertex 0 0 0\nedge 0 oops\n")
    code, _, err = run(capsys, "validate", str(p))
    assert code == 2 and "line 3, column 8" in err


def test_boundary_and_surround(capsys):
    code, out, _ = run(capsys, "--json", "boundary", "fixture:star_two_cycles", "--mode", "star", "--check")
    assert code == 0 and len(json.loads(out)["cycles"]) == 2
    code, _, _ = run(capsys, "surround", "fixture:pocket", "--mode", "star", "--exhaustive")
    assert code == 0
    code, _, err = run(capsys, "surround", "grid4x4", "--occupied", "0,1,6,5", "--mode", "star")
    assert code == 1


def test_dual_verify_exit_codes(capsys):
    assert run(capsys, "dual", "grid4x4", "--verify")[0] == 0
    assert run(capsys, "dual", "fixture:two_squares", "--verify")[0] == 1


def test_cross(capsys):
    code, out, _ = run(capsys, "--json", "cross", "grid5x5", "--site", "--random", "0.5", "--seed", "3")
    rep = json.loads(out)
    assert code == 0 and rep["xor"] is True
    assert run(capsys, "cross", "grid5x5", "--bond", "--random", "0.5", "--seed", "3")[0] == 0


def test_experiment(tmp_path, capsys):
    spec = {"generator": {"kind": "square", "n": 6, "m": 6}, "trials": 50, "seed": 1, "checks": ["site_duality"]}
    p = tmp_path / "spec.json"
    p.write_text(json.dumps(spec))
    code, out, _ = run(capsys, "--json", "experiment", "--spec", str(p), "--workers", "2")
    assert code == 0 and json.loads(out)["checks"]["site_duality"]["violations"] == 0
    p.write_text('{"trials": 5')
    assert run(capsys, "experiment", "--spec", str(p))[0] == 2


def test_render(tmp_path, capsys):
    out = tmp_path / "a.svg"
    code, _, _ = run(capsys, "render", "fixture:star_two_cycles", "--out", str(out), "--mode", "star", "--dual")
    assert code == 0 and '<g id="boundary"' in out.read_text()


def test_unknown_cell_and_origin(capsys):
    assert run(capsys, "boundary", "grid3x3", "--occupied", "0,1,2")[0] == 2
    assert run(capsys, "boundary", "grid3x3", "--occupied", "0,1,5,4", "--origin", "1,2,6,5")[0] == 2


def test_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["nonsense"])
    assert info.value.code == 2
