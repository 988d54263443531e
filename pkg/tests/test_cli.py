import io
import json
import math
from contextlib import redirect_stdout

import numpy as np
import pytest

from hilbert_lab.cli import main


@pytest.fixture
def bodies(tmp_path):
    paths = {}
    specs = {
        "disk": {"type": "ball", "dim": 2},
        "square": {
            "type": "hpolytope",
            "A": [[1, 0], [-1, 0], [0, 1], [0, -1]],
            "b": [1, 1, 1, 1],
        },
        "cylinder": {
            "type": "product",
            "factors": [{"type": "ball", "dim": 2}, {"type": "ball", "dim": 1}],
        },
    }
    for name, spec in specs.items():
        p = tmp_path / f"{name}.json"
        p.write_text(json.dumps(spec))
        paths[name] = str(p)
    return paths


def run(argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(argv)
    return code, buf.getvalue()


class TestBasicCommands:
    def test_distance_prints_klein_value(self, bodies):
        code, out = run(
            ["distance", "--body", bodies["disk"], "--p", "0,0", "--q", "0.761594,0"]
        )
        assert code == 0
        assert float(out) == pytest.approx(math.atanh(0.761594), abs=1e-9)

    def test_negative_coordinates_accepted(self, bodies):
        code, out = run(
            ["distance", "--body", bodies["disk"], "--p", "-0.3,0", "--q", "0.3,0"]
        )
        assert code == 0
        assert float(out) > 0

    def test_norm_report_schema(self, bodies):
        code, out = run(["norm", "--body", bodies["disk"], "--p", "0,0", "--v", "1,0"])
        assert code == 0
        rep = json.loads(out)
        assert set(rep) == {"config", "results", "witnesses", "bounds", "pass"}
        assert rep["pass"] is True
        assert rep["config"]["version"]
        assert rep["results"]["finsler"] == pytest.approx(1.0)
        assert rep["results"]["dual"] == pytest.approx(1.0, abs=1e-6)

    def test_density_csv(self, bodies):
        code, out = run(
            ["density", "--body", bodies["disk"], "--p", "0.5,0", "--format", "csv"]
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "density,stderr"
        val = float(lines[1].split(",")[0])
        assert val == pytest.approx(0.75**-1.5, rel=1e-3)

    def test_ball_table(self, bodies):
        code, out = run(
            [
                "ball", "--body", bodies["disk"], "--p", "0,0",
                "--radius", "1", "--resolution", "64", "--format", "csv",
            ]
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert len(lines) == 65
        t = float(lines[1].split(",")[-1])
        assert t == pytest.approx(math.tanh(1.0), abs=1e-9)


class TestBoundsAndExitCodes:
    def test_john_passes_on_square(self, bodies):
        code, out = run(["john", "--body", bodies["square"]])
        assert code == 0
        rep = json.loads(out)
        assert rep["results"]["cover_factor"] <= rep["bounds"]["cover_bound"] + 1e-3
        assert rep["results"]["contained"] is True

    def test_malformed_body_exits_2(self, tmp_path, bodies):
        bad = tmp_path / "bad.json"
        bad.write_text('{"type": "dodecahedron"}')
        code, _ = run(["distance", "--body", str(bad), "--p", "0,0", "--q", "0.1,0"])
        assert code == 2

    def test_exterior_point_exits_2(self, bodies):
        code, _ = run(["distance", "--body", bodies["disk"], "--p", "0,0", "--q", "2,0"])
        assert code == 2

    def test_missing_flag_exits_2(self, bodies):
        code, _ = run(["distance", "--body", bodies["disk"], "--p", "0,0"])
        assert code == 2

    def test_unknown_command_exits_2(self):
        code, _ = run(["frobnicate"])
        assert code == 2


class TestExperimentCommands:
    def test_theorem12_square(self, bodies):
        code, out = run(
            ["theorem12", "--body", bodies["square"], "--points", "2"]
        )
        assert code == 0
        rep = json.loads(out)
        assert rep["pass"] is True
        assert len(rep["results"]["per_point"]) == 2
        for pt in rep["results"]["per_point"]:
            assert pt["d0"] >= rep["bounds"]["d0_lower"]

    def test_cylinder_sandwich(self):
        code, out = run(
            ["cylinder", "--tgrid", "-0.5:0.5:3", "--samples", "2048", "--seed", "7"]
        )
        assert code == 0
        rep = json.loads(out)
        assert rep["results"]["within_bounds"] is True
        assert rep["results"]["fact1_defect"] < rep["bounds"]["fact1_tol"]
        assert rep["results"]["fact2_caps"]["l1_1_l2_1"] == pytest.approx(1.0)
        assert rep["results"]["fact2_caps"]["l1_1_l2_3"] == pytest.approx(1.5)
        assert rep["bounds"]["spectral_constant"] == pytest.approx(1.0 / 48.0)

    def test_rayleigh_family_floor(self, bodies):
        code, out = run(
            [
                "rayleigh", "--body", bodies["disk"], "--radius", "8",
                "--budget", "2", "--samples", "2048", "--format", "csv",
            ]
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "label,quotient,stderr"
        q = float(lines[1].split(",")[-2])
        assert q == pytest.approx(0.25, abs=0.01)

    def test_cheeger(self, bodies):
        code, out = run(
            ["cheeger", "--body", bodies["disk"], "--radius", "2", "--samples", "4096"]
        )
        assert code == 0
        rep = json.loads(out)
        assert rep["results"]["quotient"] == pytest.approx(1.0 / math.tanh(1.0), abs=0.02)

    def test_converge_disks(self):
        code, out = run(["converge", "--family", "disks", "--ks", "1,2,4"])
        assert code == 0
        rep = json.loads(out)
        devs = rep["results"]["deviations"]
        assert devs == sorted(devs, reverse=True)
        assert rep["results"]["monotone"] is True

    def test_delta_scales(self, bodies):
        code, out = run(
            [
                "delta", "--body", bodies["disk"], "--scales", "2,6",
                "--quadruples", "1000", "--format", "csv",
            ]
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "scale,delta"
        assert len(lines) == 3


class TestReproducibility:
    def test_byte_identical_reruns(self, bodies, tmp_path):
        args = [
            "cheeger", "--body", bodies["disk"], "--samples", "2048", "--seed", "11",
        ]
        outs = []
        for i in range(2):
            path = tmp_path / f"rep{i}.json"
            code, _ = run(args + ["--out", str(path)])
            assert code == 0
            outs.append(path.read_bytes())
        assert outs[0] == outs[1]

    def test_csv_format_rules(self, bodies):
        # '.' decimal, ',' separator, 12 significant digits
        code, out = run(
            ["delta", "--body", bodies["disk"], "--quadruples", "500",
             "--scales", "1.5", "--format", "csv"]
        )
        assert code == 0
        value = out.strip().splitlines()[1].split(",")[1]
        assert "." in value
        mantissa = value.replace("-", "").replace(".", "").lstrip("0")
        assert len(mantissa) <= 12

    def test_svg_section(self, bodies, tmp_path):
        svg = tmp_path / "disk.svg"
        code, _ = run(
            ["ball", "--body", bodies["disk"], "--p", "0.2,0", "--radius", "1",
             "--resolution", "64", "--svg", str(svg)]
        )
        assert code == 0
        text = svg.read_text()
        assert text.startswith("<svg") and text.rstrip().endswith("</svg>")
        assert text.count("<path") == 2  # body outline + ball boundary

    def test_svg_rejected_in_3d(self, bodies, tmp_path):
        code, _ = run(
            ["ball", "--body", bodies["cylinder"], "--p", "0,0,0",
             "--svg", str(tmp_path / "x.svg")]
        )
        assert code == 2
