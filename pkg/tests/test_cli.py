import json
import os

from bhfi.cli import main
from bhfi.files import builtin_structure, dump_structure, load_structure


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestHfihat:
    def test_builtin_pair(self, capsys):
        code, out, _ = run(capsys, "hfihat", "--builtin", "cfd0",
                           "--builtin", "cfd0")
        assert code == 0
        data = json.loads(out)
        assert data["hf_dim"] == 2
        assert data["hfi_dim"] == 4
        assert data["iota"] == [[1, 0], [0, 1]]

    def test_reports_are_byte_identical(self, capsys):
        _, out1, _ = run(capsys, "hfihat", "--builtin", "cfd0",
                         "--builtin", "cfd0")
        _, out2, _ = run(capsys, "hfihat", "--builtin", "cfd0",
                         "--builtin", "cfd0")
        assert out1 == out2

    def test_file_inputs(self, capsys, tmp_path):
        path = tmp_path / "cfd0.json"
        dump_structure(builtin_structure("cfd0"), path)
        code, out, _ = run(capsys, "hfhat", str(path), str(path))
        assert code == 0
        assert json.loads(out) == {"hf_dim": 2}

    def test_out_flag(self, capsys, tmp_path):
        target = tmp_path / "report.json"
        code, out, _ = run(capsys, "hfhat", "--builtin", "cfd0",
                           "--builtin", "cfd0", "--out", str(target))
        assert code == 0
        assert json.loads(target.read_text()) == json.loads(out)


class TestVerify:
    def test_builtin_passes(self, capsys):
        code, out, _ = run(capsys, "verify", "--builtin", "az_k1")
        assert code == 0
        data = json.loads(out)
        assert data["az_k1"]["violations"] == 0
        assert data["az_k1"]["generators"] == 8

    def test_violations_exit_code(self, capsys, tmp_path):
        payload = {
            "kind": "D",
            "circle": {"k": 1, "matching": [[1, 3], [2, 4]]},
            "generators": [{"label": "n", "idem": [1]}],
            "ops": [{"src": "n", "inputs": [],
                     "out": [{"left_idem": [1], "moving": [[1, 2]],
                              "horizontal": []}],
                     "dst": "n"}],
        }
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(payload))
        code, _, err = run(capsys, "verify", str(path))
        assert code == 3
        assert json.loads(err)["error"] == "relations"


class TestErrors:
    def test_parse_error_exit_code(self, capsys, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        code, _, err = run(capsys, "hfhat", str(path), str(path))
        assert code == 2
        assert json.loads(err)["error"] == "parse"

    def test_unknown_builtin(self, capsys):
        code, _, err = run(capsys, "hfhat", "--builtin", "nope",
                           "--builtin", "cfd0")
        assert code == 2

    def test_wrong_input_count(self, capsys):
        code, _, err = run(capsys, "hfhat", "--builtin", "cfd0")
        assert code == 2


class TestTriangleCommand:
    def test_triangle_on_builtin(self, capsys):
        code, out, _ = run(capsys, "triangle", "--builtin", "cfa0_k1")
        assert code == 0
        data = json.loads(out)
        assert data["hat_exact"] and data["involutive_exact"]


class TestMcgCommand:
    def test_interpolating_pair_acts_by_identity(self, capsys):
        code, out, _ = run(capsys, "mcg", "--builtin", "cfa0_k1",
                           "--builtin", "cfd0", "--builtin", "az_k1",
                           "--builtin", "azbar_k1")
        assert code == 0
        assert json.loads(out)["action"] == [[1, 0], [0, 1]]


class TestDumpStandard:
    def test_round_trip_all(self, capsys, tmp_path):
        code, out, _ = run(capsys, "dump-standard", "--out", str(tmp_path))
        assert code == 0
        written = json.loads(out)["written"]
        assert len(written) == 13
        for path in written:
            name = os.path.splitext(os.path.basename(path))[0]
            S = load_structure(path)
            T = builtin_structure(name)
            assert S.generators == T.generators
            assert S.ops == T.ops


class TestGenusTwoEndToEnd:
    def test_hfihat_on_user_style_files(self, capsys, tmp_path):
        p = tmp_path / "side.json"
        dump_structure(builtin_structure("cfd0_k2"), p)
        code, out, _ = run(capsys, "hfihat", str(p), str(p))
        assert code == 0
        data = json.loads(out)
        assert data["hf_dim"] == 4
        assert data["hfi_dim"] == 8
