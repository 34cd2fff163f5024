import json
import re

import numpy as np
import pytest

from affinedim.cli import main
from affinedim.report import dumps_json, read_configuration_csv, read_gamma_file

SQUARE_CSV = """NAME,x,y
a,0,0
b,2,0
c,2,2
d,0,2
center,1,1
"""


@pytest.fixture
def square_csv(tmp_path):
    path = tmp_path / "square.csv"
    path.write_text(SQUARE_CSV)
    return str(path)


def load_report(path):
    with open(path) as fh:
        return json.load(fh)


class TestInputParsing:
    def test_label_column_autodetected(self, square_csv):
        cfg = read_configuration_csv(square_csv)
        assert cfg.labels == ["a", "b", "c", "d", "center"]
        assert cfg.coords.shape == (5, 2)

    def test_explicit_label_column(self, tmp_path):
        path = tmp_path / "t.csv"
        path.write_text("id,x,y\n1,0,0\n2,1,1\n")
        cfg = read_configuration_csv(str(path), label_column="id")
        assert cfg.labels == ["1", "2"]
        assert cfg.coords.shape == (2, 2)

    def test_weights_column(self, tmp_path):
        path = tmp_path / "t.csv"
        path.write_text("x,y,w\n0,0,2\n1,1,3\n")
        cfg = read_configuration_csv(str(path), weights_column="w")
        assert np.array_equal(cfg.weights, [2.0, 3.0])
        assert cfg.coords.shape == (2, 2)

    def test_gamma_file(self, tmp_path):
        path = tmp_path / "g.csv"
        path.write_text("gamma\n0.5\n0.25\n0.25\n")
        g = read_gamma_file(str(path), 3)
        assert np.allclose(g, [0.5, 0.25, 0.25])


class TestExitCodes:
    def test_missing_input_file(self, tmp_path, capsys):
        code = main(["canonize", "--input", str(tmp_path / "none.csv"),
                     "--out", str(tmp_path / "o")])
        assert code == 2
        err = json.loads(capsys.readouterr().err)
        assert err["error"]["category"] == "input"

    def test_q_at_rank_rejected(self, tmp_path, capsys):
        code = main(["reduce", "--fixture", "hexagon", "--q", "2",
                     "--out", str(tmp_path / "o")])
        assert code == 2
        assert "input" in capsys.readouterr().err

    def test_compare_requires_q2(self, tmp_path, capsys):
        code = main(["compare", "--fixture", "longley", "--q", "3",
                     "--out", str(tmp_path / "o")])
        assert code == 2

    def test_zero_variance_column_in_pca(self, tmp_path, capsys):
        path = tmp_path / "t.csv"
        path.write_text("x,y\n1,5\n2,5\n3,5\n")
        code = main(["pca", "--input", str(path), "--q", "1",
                     "--out", str(tmp_path / "o")])
        assert code == 2

    def test_bad_gamma_file(self, tmp_path, capsys):
        g = tmp_path / "g.csv"
        g.write_text("0.9\n0.9\n")
        code = main(["canonize", "--fixture", "hexagon",
                     "--gamma", f"file:{g}", "--out", str(tmp_path / "o")])
        assert code == 2

    def test_success_is_zero(self, tmp_path):
        assert main(["median", "--fixture", "hexagon",
                     "--out", str(tmp_path / "o")]) == 0


class TestCanonize:
    def test_hexagon_rank_two(self, tmp_path):
        out = tmp_path / "o"
        assert main(["canonize", "--fixture", "hexagon", "--out", str(out)]) == 0
        rep = load_report(out / "canonize.json")
        assert rep["results"]["canonical_rank"] == 2

    def test_longley_rank_six(self, tmp_path):
        out = tmp_path / "o"
        assert main(["canonize", "--fixture", "longley", "--out", str(out)]) == 0
        rep = load_report(out / "canonize.json")
        assert rep["results"]["canonical_rank"] == 6

    def test_point_gamma_zeroes_first_centered_row(self, tmp_path, square_csv):
        out = tmp_path / "o"
        assert main(["canonize", "--input", square_csv, "--gamma", "point:0",
                     "--out", str(out)]) == 0
        with open(out / "centered.csv") as fh:
            header = fh.readline()
            first = fh.readline().strip().split(",")
        assert [float(v) for v in first[1:]] == [0.0, 0.0]


class TestReduce:
    def test_sixpoint_catalog_and_oracle(self, tmp_path):
        from affinedim.fixtures import expected_value
        out = tmp_path / "o"
        assert main(["reduce", "--fixture", "sixpoint", "--q", "1",
                     "--out", str(out)]) == 0
        rep = load_report(out / "report.json")
        red = rep["results"]["reduction"]
        values = sorted(m["value"] for m in red["local_minima"])
        assert len(values) >= 2
        assert red["value"] == pytest.approx(
            expected_value("sixpoint", "q1_global_norm2"), abs=1e-6)
        svg = (out / "reduction.svg").read_text()
        assert "origin-marker" in svg

    def test_q1_emits_number_line(self, tmp_path):
        out = tmp_path / "o"
        assert main(["reduce", "--fixture", "hexagon", "--q", "1",
                     "--out", str(out)]) == 0
        assert (out / "reduction.svg").exists()
        assert (out / "z.csv").exists()

    def test_same_seed_byte_identical_results(self, tmp_path):
        reports = []
        for sub in ("a", "b"):
            out = tmp_path / sub
            assert main(["reduce", "--fixture", "sixpoint", "--q", "1",
                         "--seed", "7", "--out", str(out)]) == 0
            rep = load_report(out / "report.json")
            reports.append(dumps_json(rep["results"]))
        assert reports[0] == reports[1]

    def test_json_round_trip(self, tmp_path):
        out = tmp_path / "o"
        assert main(["reduce", "--fixture", "sixpoint", "--q", "1",
                     "--out", str(out)]) == 0
        raw = (out / "report.json").read_text()
        assert dumps_json(json.loads(raw)) == raw


class TestPca:
    def test_longley_biplot_contents(self, tmp_path):
        out = tmp_path / "o"
        assert main(["pca", "--fixture", "longley", "--q", "2",
                     "--out", str(out)]) == 0
        svg = (out / "pca.svg").read_text()
        for year in range(1947, 1963):
            assert str(year) in svg
        for var in ("X1", "X2", "X3", "X4", "X5", "X6"):
            assert var in svg

    def test_mean_mode_on_hexagon_equal_singular_values(self, tmp_path):
        out = tmp_path / "o"
        assert main(["pca", "--fixture", "hexagon", "--q", "2",
                     "--standardize", "mean", "--out", str(out)]) == 0
        rep = load_report(out / "pca.json")
        sv = rep["results"]["pca"]["singular_values"]
        assert sv[0] == pytest.approx(sv[1], rel=1e-10)

    def test_q_beyond_rank(self, tmp_path):
        code = main(["pca", "--fixture", "longley", "--q", "7",
                     "--out", str(tmp_path / "o")])
        assert code == 2


class TestMedian:
    def test_square_plus_center(self, tmp_path, square_csv):
        out = tmp_path / "o"
        assert main(["median", "--input", square_csv, "--out", str(out)]) == 0
        rep = load_report(out / "median.json")
        assert rep["results"]["gamma"] == [0.0, 0.0, 0.0, 0.0, 1.0]
        assert rep["results"]["peel_stages"] == [[0, 1, 2, 3]]

    def test_triangle_uniform(self, tmp_path):
        path = tmp_path / "tri.csv"
        path.write_text("x,y\n0,0\n1,0\n0.5,0.9\n")
        out = tmp_path / "o"
        assert main(["median", "--input", str(path), "--out", str(out)]) == 0
        rep = load_report(out / "median.json")
        gamma = rep["results"]["gamma"]
        assert gamma == pytest.approx([1 / 3] * 3)
        assert sum(gamma) == pytest.approx(1.0, abs=1e-12)


class TestCompare:
    def test_longley_panels_and_hole(self, tmp_path):
        out = tmp_path / "o"
        assert main(["compare", "--fixture", "longley", "--starts", "32",
                     "--out", str(out)]) == 0
        rep = load_report(out / "compare.json")
        res = rep["results"]
        assert res["canonical_rank"] == 6
        assert res["swarm"]["min_radius"] > 0
        assert len(res["pca"]["explained_fraction"]) == 2
        assert res["reduction"]["value"] > 0
        svg = (out / "compare.svg").read_text()
        assert "origin-marker" in svg
        assert "radius-ring-min" in svg and "radius-ring-max" in svg
        assert "1947" in svg and "1962" in svg
        # one shared label set across both panels
        assert svg.count("1955") >= 2

    def test_svg_is_self_contained_with_legend(self, tmp_path):
        out = tmp_path / "o"
        assert main(["compare", "--fixture", "longley", "--starts", "8",
                     "--seed", "3", "--out", str(out)]) == 0
        svg = (out / "compare.svg").read_text()
        hrefs = [h for h in re.findall(r'href="([^"]+)"', svg)
                 if not h.startswith("#")]
        assert hrefs == []
        assert "<image" not in svg
        assert "gamma=mean" in svg and "q=2" in svg and "seed=3" in svg

    def test_median_gamma_mode(self, tmp_path, square_csv):
        out = tmp_path / "o"
        code = main(["reduce", "--input", square_csv, "--gamma", "median",
                     "--q", "1", "--out", str(out)])
        assert code == 0
        rep = load_report(out / "report.json")
        assert rep["config"]["gamma"] == "median"


class TestInternalErrorPath:
    def test_internal_error_exit_code_one(self, tmp_path, capsys, monkeypatch):
        import affinedim.cli as cli
        from affinedim.errors import InternalError

        def boom(*a, **k):
            raise InternalError("synthetic failure")

        monkeypatch.setattr(cli, "canonical_form", boom)
        code = main(["canonize", "--fixture", "hexagon", "--out", str(tmp_path / "o")])
        assert code == 1
        err = json.loads(capsys.readouterr().err)
        assert err["error"]["category"] == "internal"


class TestWeightsAndPlotsFlags:
    def test_weights_column_merges_coincident_points(self, tmp_path):
        path = tmp_path / "w.csv"
        path.write_text("x,y,w\n0,0,1\n0,0,2\n4,0,1\n0,3,1\n1,1,1\n")
        out = tmp_path / "o"
        code = main(["reduce", "--input", str(path), "--weights", "w",
                     "--q", "1", "--out", str(out)])
        assert code == 0
        rep = load_report(out / "report.json")
        # 5 input rows, 4 distinct locations after the merge
        assert len(rep["results"]["swarm"]["radii"]) == 4

    def test_plot_radius_size_flag(self, tmp_path):
        out = tmp_path / "o"
        code = main(["compare", "--fixture", "longley", "--starts", "8",
                     "--plot-radius-size", "--out", str(out)])
        assert code == 0
        assert (out / "compare.svg").exists()
