import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from kreinframes.cli import main
from kreinframes.documents import dumps, frame_document, load_document, parse_document
from kreinframes.errors import ParseError
from kreinframes.frames import Frame
from kreinframes.kspace import KreinSpace

DATA = Path(__file__).resolve().parents[1] / "data"
THREE = str(DATA / "three_vectors.json")
NEUTRAL = str(DATA / "neutral_vector.json")
FF = str(DATA / "ff_instance.json")
BAD = str(DATA / "not_a_frame.json")


def run(capsys, *argv):
    code = main([*argv, "--output", "json"])
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out else None), out.err


def test_verify_three_vec(capsys):
    code, rep, _ = run(capsys, "verify", THREE)
    assert code == 0 and rep["is_frame"] and rep["is_spanning"]
    np.testing.assert_allclose([rep["bounds"][k] for k in ("A1", "B1", "A2", "B2")], [1, 1, -2, -2], atol=1e-10)


def test_verify_neutral(capsys):
    code, rep, _ = run(capsys, "verify", NEUTRAL)
    assert code == 0 and rep["is_frame"] and not rep["is_spanning"]
    code, rep, _ = run(capsys, "tight", NEUTRAL)
    assert code == 0 and rep["is_parseval"]


def test_verify_not_a_frame(capsys):
    code, rep, _ = run(capsys, "verify", BAD)
    assert code == 1 and rep["reason"] == "K+ component not spanned"
    code, _, err = run(capsys, "tight", BAD)
    assert code == 2 and "NotAFrameError" in err


def test_exactness_commands(capsys):
    assert run(capsys, "exact", THREE)[0] == 1
    code, rep, _ = run(capsys, "near-exact", THREE)
    assert code == 0 and rep["count"] == 1 and rep["removed"] == [3]


def test_transfer_commands(capsys):
    code, rep, _ = run(capsys, "transfer", THREE, "--n", "3", "--m", "1,2,3")
    assert code == 1 and not rep["transferable"]
    code, _, err = run(capsys, "transfer", THREE, "--n", "0", "--m", "1,2,3")
    assert code == 2 and "1-based" in err


def test_reconstruct_round_trip(capsys):
    code, rep, _ = run(capsys, "reconstruct", THREE, "--vector", "[1, [0, 1], 3]")
    assert code == 0 and rep["relative_error"] <= 1e-12
    assert rep["reconstructed"][1] == pytest.approx([0, 1])


def test_sequence_and_grammian(capsys):
    code, rep, _ = run(capsys, "sequence", THREE, "--idx", "1")
    assert code == 0 and rep["plus_rank"] == 1 and rep["minus_bounds"] == pytest.approx([-0.5, -0.5])
    code, rep, _ = run(capsys, "grammian", THREE)
    assert code == 0 and len(rep["G1"]) == 3


def test_ff_partition(capsys):
    code, rep, _ = run(capsys, "ff-partition", FF)
    assert code == 0
    assert rep["plus_classes"] == [{"lambda": 1, "members": [1, 2]}]
    assert rep["minus_classes"] == [{"lambda": 2, "members": [3, 4]}]
    code, rep, _ = run(capsys, "potential", FF)
    assert rep["potential"] == pytest.approx(6.0) and rep["minimum"] == pytest.approx(16 / 3)


def test_decompose3(capsys):
    code, _, err = run(capsys, "decompose3", THREE, "--epsilon", "0.5")
    assert code == 2 and "NotSquareInvertible" in err


def test_decompose3_square(tmp_path, capsys):
    doc = tmp_path / "sq.json"
    doc.write_text(dumps(frame_document(Frame(KreinSpace(2, 2), [[2, 0.5, 1, 0], [1, 1, 1j, 3]]))))
    code, rep, _ = run(capsys, "decompose3", str(doc), "--epsilon", "0.5")
    assert code == 0 and rep["resynthesis_residual"] <= 1e-10 and len(rep["bases"]) == 3


def test_split_write_then_merge(tmp_path, capsys):
    prefix = str(tmp_path / "part")
    code, rep, _ = run(capsys, "split", THREE, "--mask", "1,0,1", "--write", prefix)
    assert code == 0 and rep["inside"]["is_frame"] and rep["outside"]["is_frame"]
    code, rep, _ = run(capsys, "merge", prefix + "_inside.json", prefix + "_outside.json")
    assert code == 0
    merged = np.array([[complex(*v) if isinstance(v, list) else v for v in row] for row in rep["merged"]["vectors"]])
    F = load_document(THREE).frame()
    mask = np.array([1, 0, 1], dtype=bool)
    np.testing.assert_allclose(merged, np.vstack([F.vectors * mask, F.vectors * ~mask]))


def test_optimize_exit_code(capsys):
    code, rep, _ = run(capsys, "optimize", "--p", "1", "--q", "1", "--k", "3", "--seed", "0")
    assert code == 0 and abs(rep["potential"] - 4.5) <= 1e-6 and rep["is_tight"]
    code, rep, _ = run(capsys, "optimize", "--p", "2", "--q", "2", "--k", "5", "--max-iters", "1")
    assert code == 1 and rep["iterations"] == 1


def test_input_errors(tmp_path, capsys):
    assert run(capsys, "verify", str(tmp_path / "missing.json"))[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"signature": {"p": 1, "q": 1}, "vectors": [[1, 2, 3]]}')
    code, _, err = run(capsys, "verify", str(bad))
    assert code == 2 and "vectors[0]" in err
    assert run(capsys, "nonsense")[0] == 2


def test_text_output(capsys):
    assert main(["verify", THREE]) == 0
    out = capsys.readouterr().out
    assert "command: verify" in out and "A2: -2" in out


# -- documents ----------------------------------------------------------------


def test_document_round_trip():
    F = Frame(KreinSpace(2, 1), [[1, 1j, 0.1], [1 / 3, -2, 1e-300 + 2j]])
    doc = frame_document(F)
    G = parse_document(json.loads(dumps(doc))).frame()
    np.testing.assert_array_equal(G.vectors, F.vectors)
    assert dumps(frame_document(G)) == dumps(doc)


@pytest.mark.parametrize(
    "obj,field",
    [
        ([], "document"),
        ({"vectors": [[1]]}, "signature"),
        ({"signature": {"p": 1, "q": 0}}, "vectors"),
        ({"signature": {"p": 1.5, "q": 0}, "vectors": [[1]]}, "signature.p"),
        ({"signature": {"p": 1, "q": 0}, "vectors": [[True]]}, "vectors[0][0]"),
        ({"signature": {"p": 1, "q": 0}, "vectors": [["x"]]}, "vectors[0][0]"),
    ],
)
def test_parse_errors_name_the_field(obj, field):
    with pytest.raises(ParseError, match=field.replace("[", r"\[").replace("]", r"\]")):
        parse_document(obj)


def test_json_byte_identical_across_processes(tmp_path):
    cmds = [
        ["verify", THREE],
        ["bounds", THREE],
        ["near-exact", THREE],
        ["ff-partition", FF],
        ["optimize", "--p", "2", "--q", "1", "--k", "4", "--seed", "42"],
    ]
    for argv in cmds:
        outs = [
            subprocess.run(
                [sys.executable, "-m", "kreinframes.cli", *argv, "--output", "json"],
                capture_output=True,
                check=False,
            ).stdout
            for _ in range(2)
        ]
        assert outs[0] == outs[1] and outs[0]
        rep = json.loads(outs[0])
        assert dumps(rep) + "\n" == outs[0].decode("utf-8")
