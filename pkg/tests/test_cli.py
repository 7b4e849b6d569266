import json

import jsonschema
import pytest

from biasedcube import cli


SCHEMA_PATH = None


def load_schema():
    import importlib.resources as res
    with res.files("biasedcube").joinpath("report_schema.json").open() as fh:
        return json.load(fh)


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestVerify:
    def test_exit_zero_and_schema(self, capsys):
        code, out, _ = run(["verify"], capsys)
        assert code == 0
        report = json.loads(out)
        jsonschema.validate(report, load_schema())
        assert report["body"]["failed"] == []
        assert report["body"]["total"] >= 50

    def test_zero_tolerance_fails(self, capsys):
        code, out, _ = run(["verify", "--tol", "0"], capsys)
        assert code == 1
        assert json.loads(out)["body"]["failed"]

    def test_body_reproducible(self, capsys):
        _, out1, _ = run(["verify", "--seed", "5"], capsys)
        _, out2, _ = run(["verify", "--seed", "5"], capsys)
        assert json.loads(out1)["body"] == json.loads(out2)["body"]

    def test_csv_format(self, capsys):
        code, out, _ = run(["verify", "--format", "csv"], capsys)
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0].startswith("name,passed,value")
        assert len(lines) > 50


class TestCurve:
    def test_dictator_curve(self, capsys):
        code, out, _ = run(["curve", "--function", "dictator", "--n", "5",
                            "--grid", "0.1:0.9:5"], capsys)
        assert code == 0
        body = json.loads(out)["body"]["curve"]
        assert abs(body["p_c"] - 0.5) < 1e-6
        assert abs(body["mu"][0] - 0.1) < 1e-12
        assert body["monotone"]

    def test_unknown_function_exit_2(self, capsys):
        code, _, err = run(["curve", "--function", "nope"], capsys)
        assert code == 2 and "unknown function" in err

    def test_max_n_guard(self, capsys):
        code, _, err = run(["curve", "--function", "maj", "--n", "9",
                            "--max-n", "5"], capsys)
        assert code == 2 and "exceeds" in err

    def test_file_input(self, tmp_path, capsys):
        from biasedcube.cube import DenseFunction
        f = DenseFunction.from_predicate(4, lambda x: x != 0)
        path = tmp_path / "fn.bin"
        path.write_bytes(f.to_bytes())
        code, out, _ = run(["curve", "--function", f"file:{path}", "--grid",
                            "0.2:0.8:3"], capsys)
        assert code == 0
        mu = json.loads(out)["body"]["curve"]["mu"]
        assert abs(mu[0] - (1 - 0.8 ** 4)) < 1e-12


class TestLambda:
    def test_grid_values(self, capsys):
        code, out, _ = run(["lambda", "--rho", "0,0.5", "--mu", "0.5",
                            "--nu", "0.5"], capsys)
        assert code == 0
        vals = {e["rho"]: e["value"] for e in json.loads(out)["body"]["lambda"]}
        assert abs(vals[0.0] - 0.25) < 1e-12
        import math
        assert abs(vals[0.5] - (0.25 + math.asin(0.5) / (2 * math.pi))) < 1e-9

    def test_csv(self, capsys):
        code, out, _ = run(["lambda", "--rho", "0.3", "--mu", "0.5",
                            "--nu", "0.5", "--format", "csv"], capsys)
        assert code == 0
        assert out.splitlines()[0] == "rho,mu,nu,lambda"


class TestCount:
    def test_exact_rational_output(self, capsys):
        code, out, _ = run(["count", "--n", "4", "--sizes", "1,1",
                            "--families", "singleton:1,singleton:2",
                            "--samples", "2000"], capsys)
        assert code == 0
        body = json.loads(out)["body"]
        assert body["probability_exact"] == "1/12"
        assert abs(body["mc"]["probability"] - 1 / 12) < 5 * body["mc"]["stderr"] + 1e-3

    def test_star_count(self, capsys):
        code, out, _ = run(["count", "--n", "8", "--sizes", "2,2",
                            "--families", "star,full", "--samples", "1000"],
                           capsys)
        assert code == 0
        body = json.loads(out)["body"]
        num, den = body["probability_exact"].split("/")
        assert int(num) > 0 and int(den) > 0

    def test_bad_family_exit_2(self, capsys):
        code, _, err = run(["count", "--n", "4", "--sizes", "1",
                            "--families", "bogus"], capsys)
        assert code == 2 and "unknown family" in err


class TestRemoval:
    def test_star_pipeline(self, capsys):
        code, out, _ = run(["removal", "--family", "star", "--hypergraph", "i21",
                            "--n", "9", "--k", "3", "--s", "1",
                            "--samples", "2000"], capsys)
        assert code == 0
        body = json.loads(out)["body"]["pipeline"]
        assert body["almost_free"]["exact"] == "1/9"
        assert body["junta"]["J"] == [1]

    def test_report_schema(self, capsys):
        _, out, _ = run(["removal", "--family", "star", "--hypergraph", "m2",
                         "--n", "9", "--k", "3", "--samples", "1000"], capsys)
        jsonschema.validate(json.loads(out), load_schema())

    def test_output_file(self, tmp_path, capsys):
        path = tmp_path / "report.json"
        code, out, _ = run(["removal", "--family", "star", "--hypergraph", "m2",
                            "--n", "9", "--k", "3", "--samples", "1000",
                            "--out", str(path)], capsys)
        assert code == 0 and out == ""
        jsonschema.validate(json.loads(path.read_text()), load_schema())


class TestParser:
    def test_missing_subcommand(self):
        with pytest.raises(SystemExit):
            cli.main([])

    def test_header_fields(self, capsys):
        _, out, _ = run(["lambda", "--rho", "0", "--mu", "0.5", "--nu", "0.5"],
                        capsys)
        header = json.loads(out)["header"]
        assert header["command"] == "lambda"
        assert header["version"]
        assert "T" in header["timestamp"]
