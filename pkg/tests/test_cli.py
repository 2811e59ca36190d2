"""
End-to-end tests of the command-line entrypoint.
"""

import json

import pytest

from lkgeom.main import main
from tests.helpers import FIXTURES, write_json


def _run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def _fixture(name: str) -> str:
    return str(FIXTURES / name)


@pytest.mark.integration
class TestGeometryCommands:
    def test_lk_csv(self, capsys):
        code, out, _ = _run(capsys, "lk", "--in", _fixture("square.json"))
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "shape,i,lambda,method,stderr"
        assert lines[2].startswith("square,1,2,exact")
        assert len(lines) == 4

    def test_lk_json(self, capsys):
        code, out, _ = _run(capsys, "lk", "--in", _fixture("cube.json"), "--format", "json")
        assert code == 0
        assert json.loads(out)["values"] == pytest.approx([1.0, 3.0, 3.0, 1.0])

    def test_tube_rows(self, capsys):
        code, out, _ = _run(capsys, "tube", "--in", _fixture("square.json"), "--eps", "0.1", "0.2", "--samples", "2000")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "epsilon,estimate,stderr,steiner"
        assert len(lines) == 3

    def test_crofton_volume(self, capsys):
        code, out, _ = _run(capsys, "crofton", "--in", _fixture("unit_segment.json"), "--samples", "5000", "--seed", "3")
        assert code == 0
        body = json.loads(out)
        assert body["target"] == "volume"
        assert body["i"] == 1
        assert abs(body["estimate"] - 1.0) <= max(5 * body["stderr"], 1e-9)

    def test_crofton_lambda_needs_index(self, capsys):
        code, out, err = _run(capsys, "crofton", "--in", _fixture("square.json"), "--target", "lambda")
        assert code == 1
        assert out == ""
        assert json.loads(err.strip().splitlines()[-1])["error"] == "MISSING_ARGUMENT"

    def test_plotdata_file(self, capsys, tmp_path):
        target = tmp_path / "sweep.csv"
        code, out, _ = _run(
            capsys, "plotdata", "--in", _fixture("square.json"), "--eps", "0.05", "0.1", "--samples", "1000", "--out", str(target)
        )
        assert code == 0
        assert out == ""
        lines = target.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "epsilon,value"
        assert len(lines) == 3


@pytest.mark.integration
class TestLocalCommands:
    def test_local(self, capsys):
        code, out, _ = _run(capsys, "local", "--in", _fixture("quarter_plane.json"))
        assert code == 0
        body = json.loads(out)
        assert body["density"] == 0.25
        assert body["lambda_loc"][2] == pytest.approx(0.25)

    def test_polar_csv(self, capsys):
        code, out, _ = _run(capsys, "polar", "--in", _fixture("half_line.json"), "--samples", "1000")
        assert code == 0
        assert out.splitlines()[0] == "i,sigma,stderr"

    def test_mlcc_check(self, capsys):
        code, out, _ = _run(capsys, "mlcc-check", "--in", _fixture("half_plane.json"), "--samples", "2000")
        assert code == 0
        assert json.loads(out)["passed"] is True

    def test_complex_layer(self, capsys):
        code, out, _ = _run(capsys, "complex", "--in", _fixture("a1_surface.json"))
        assert code == 0
        body = json.loads(out)
        assert body["E"] == [0, 2, 0]
        assert body["euler_obstruction"] == 0

    def test_complex_layer_failure_exit(self, capsys, tmp_path):
        doc = json.loads((FIXTURES / "cusp_curve.json").read_text(encoding="utf-8"))
        doc["polar"] = [5]
        code, out, _ = _run(capsys, "complex", "--in", write_json(tmp_path, "bad_polar.json", doc))
        assert code == 2
        assert json.loads(out)["passed"] is False


@pytest.mark.integration
class TestMotivicCommands:
    def test_zeta(self, capsys):
        code, out, _ = _run(capsys, "zeta", "--in", _fixture("cusp.json"), "--expand", "6")
        assert code == 0
        body = json.loads(out)
        assert body["chi_surrogate"] is True
        assert len(body["expansion"]) == 6
        assert {"nu": 5, "N": 6, "candidate": "exp(2*pi*i*5/6)"} in body["poles"]

    def test_acampo(self, capsys):
        code, out, _ = _run(capsys, "acampo", "--in", _fixture("cusp.json"), "--m", "12")
        assert code == 0
        body = json.loads(out)
        assert body["chi_milnor_fibre"] == -1
        assert body["period"] == 6
        assert body["lefschetz"]["6"] == -1

    def test_milnor_fibre_complex(self, capsys):
        code, out, _ = _run(capsys, "milnor-fibre", "--in", _fixture("node.json"))
        assert code == 0
        body = json.loads(out)
        assert body["chi"] == 0
        assert body["class"] == [[0, 1, 1], [1, -1, 1]]
        assert body["series_agrees"] is True

    @pytest.mark.slow
    def test_milnor_fibre_real(self, capsys):
        code, out, _ = _run(capsys, "milnor-fibre", "--in", _fixture("x2y2_real.json"), "--mode", "real")
        assert code == 0
        body = json.loads(out)
        assert body["passed"] is True
        assert "oracle" in body

    def test_oracle(self, capsys):
        code, out, _ = _run(capsys, "oracle", "--in", _fixture("oracle_xy_link.json"))
        assert code == 0
        assert json.loads(out)["chi"] == 2


@pytest.mark.integration
class TestErrorsAndValidation:
    def test_validate_good(self, capsys):
        code, out, _ = _run(capsys, "validate", "--in", _fixture("node.json"))
        assert code == 0
        assert json.loads(out) == {"schema": "ResolutionSchema", "valid": True}

    @pytest.mark.parametrize("name", ["node_typo.json", "square_typo.json", "germ_typo.json", "malformed.json"])
    def test_validate_bad(self, capsys, name):
        code, out, err = _run(capsys, "validate", "--in", str(FIXTURES / "bad" / name))
        assert code == 1
        assert out == ""
        assert json.loads(err.strip().splitlines()[-1])["exit"] == 1

    def test_missing_input(self, capsys, tmp_path):
        code, _, err = _run(capsys, "lk", "--in", str(tmp_path / "nothing.json"))
        assert code == 3
        assert json.loads(err.strip().splitlines()[-1])["error"] == "FILE_NOT_FOUND"

    def test_bad_arguments(self, capsys):
        code, _, err = _run(capsys, "lk", "--in", _fixture("square.json"), "--samples", "0")
        assert code == 1
        assert json.loads(err.strip().splitlines()[-1])["error"] == "BAD_ARGUMENTS"

    def test_unknown_command(self, capsys):
        code, _, err = _run(capsys, "volume", "--in", _fixture("square.json"))
        assert code == 1
        assert json.loads(err.strip().splitlines()[-1])["error"] == "BAD_ARGUMENTS"

    def test_wrong_document_for_command(self, capsys):
        code, _, err = _run(capsys, "zeta", "--in", _fixture("square.json"))
        assert code == 1
        assert json.loads(err.strip().splitlines()[-1])["error"] == "SCHEMA_MISMATCH"

    def test_same_seed_same_bytes(self, capsys):
        args = ("crofton", "--in", _fixture("unit_segment.json"), "--samples", "3000", "--seed", "5", "--workers", "2")
        _, first, _ = _run(capsys, *args)
        _, second, _ = _run(capsys, *args)
        assert first == second

    def test_bad_config_is_json(self, capsys, monkeypatch):
        import lkgeom.conf as conf

        monkeypatch.setattr(conf, "LOG_FORMAT", "xml")
        code, out, err = _run(capsys, "lk", "--in", _fixture("square.json"))
        assert code == 1
        assert out == ""
        body = json.loads(err.strip().splitlines()[-1])
        assert body["error"] == "BAD_CONFIG"
        assert "LOG_FORMAT" in body["detail"]


@pytest.mark.integration
class TestVerbose:
    def test_metrics_table_on_stderr(self, capsys):
        code, out, err = _run(capsys, "crofton", "--in", _fixture("unit_segment.json"), "--samples", "500", "-v")
        assert code == 0
        assert json.loads(out)["target"] == "volume"
        assert "run metrics" in err
        assert "samples_drawn" in err
        assert "rejection_rate" in err
