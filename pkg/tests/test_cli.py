import json

import numpy as np
import pytest

import priorank
from priorank import from_weights, to_csv, to_json
from priorank.cli import VERB_OPERATIONS, main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def transitive_csv(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text(to_csv(from_weights(np.array([0.5, 0.25, 0.25]))))
    return str(path)


@pytest.fixture
def margin_json(tmp_path, margin_2x2):
    path = tmp_path / "margin.json"
    path.write_text(to_json(margin_2x2))
    return str(path)


class TestWeights:
    def test_llsm_recovers_generators(self, capsys, transitive_csv):
        code, out, _ = run(capsys, "weights", "--method", "llsm", transitive_csv)
        assert code == 0
        payload = json.loads(out)
        w = np.array(payload["weights"])
        assert np.allclose(w / w[0], [1.0, 0.5, 0.5], rtol=1e-12)
        assert payload["normalization"] == "PRODUCT_ONE"

    def test_eigen_reports_lambda(self, capsys, transitive_csv):
        code, out, _ = run(capsys, "weights", "--method", "eigen", transitive_csv)
        payload = json.loads(out)
        assert code == 0
        assert payload["lambda_max"] == pytest.approx(3.0, abs=1e-9)
        assert np.allclose(payload["weights"], [0.5, 0.25, 0.25], atol=1e-12)

    def test_csv_output(self, capsys, transitive_csv):
        code, out, _ = run(capsys, "weights", "--format", "csv", transitive_csv)
        assert code == 0
        assert len(out.strip().split(",")) == 3


class TestConsistency:
    def test_2x2_reciprocal_cr_zero(self, capsys, tmp_path):
        path = tmp_path / "m.csv"
        path.write_text("1,2\n0.5,1")
        code, out, _ = run(capsys, "consistency", str(path))
        payload = json.loads(out)
        assert code == 0
        assert payload["cr"] == 0.0
        assert payload["acceptable"] is True

    def test_non_reciprocal_cr_null(self, capsys, margin_json):
        code, out, _ = run(capsys, "consistency", margin_json)
        payload = json.loads(out)
        assert code == 0
        assert payload["cr"] is None
        assert payload["intransitivity"] == pytest.approx(0.101894, abs=1e-5)

    def test_saaty_table_override(self, capsys, tmp_path):
        path = tmp_path / "m.csv"
        path.write_text(to_csv(from_weights(np.array([1.0, 2.0, 4.0]))))
        code, out, _ = run(capsys, "consistency", "--ri-table", "saaty", str(path))
        payload = json.loads(out)
        assert code == 0
        assert payload["ri"] == 0.58
        assert abs(payload["cr"]) <= 1e-9


class TestMatrixVerbs:
    def test_nearest_round_trips(self, capsys, margin_json):
        code, out, _ = run(capsys, "nearest", margin_json)
        assert code == 0
        fitted = priorank.parse_matrix(out)
        assert fitted.entries[0, 1] == pytest.approx(np.sqrt(2.1 / 0.55), abs=1e-9)

    def test_deviation_includes_hint(self, capsys, margin_json):
        code, out, _ = run(capsys, "deviation", margin_json)
        payload = json.loads(out)
        assert code == 0
        assert payload["frobenius_norm"] == pytest.approx(0.101894, abs=1e-5)
        assert payload["hint"]["row"] == 0 and payload["hint"]["col"] == 1

    def test_deviation_csv(self, capsys, margin_json):
        code, out, _ = run(capsys, "deviation", "--format", "csv", margin_json)
        assert code == 0
        assert len(out.strip().splitlines()) == 2


class TestCoinVerbs:
    def test_coin_expansion(self, capsys, tmp_path):
        path = tmp_path / "prices.json"
        path.write_text("[1, 2, 4]")
        code, out, _ = run(capsys, "coin", str(path))
        payload = json.loads(out)
        assert code == 0
        assert payload["matrix"]["entries"][2][0] == 4.0
        assert payload["report"]["intransitivity"] <= 1e-12
        assert payload["pairwise_judgments_replaced"] == 3

    def test_aggregate(self, capsys, tmp_path):
        path = tmp_path / "panel.json"
        path.write_text(json.dumps({"importance": [0.5, 0.5], "vectors": [[1, 2, 4], [1, 8, 4]]}))
        code, out, _ = run(capsys, "aggregate", str(path))
        payload = json.loads(out)
        assert code == 0
        assert np.allclose(payload["prices"], [1.0, 4.0, 4.0], atol=1e-12)

    def test_synthesize(self, capsys, tmp_path):
        path = tmp_path / "h.json"
        path.write_text(json.dumps({
            "criteria": [0.5, 0.5],
            "alternatives": [[0.9, 0.1], [0.1, 0.9]],
        }))
        code, out, _ = run(capsys, "synthesize", str(path))
        payload = json.loads(out)
        assert code == 0
        assert np.allclose(payload["weights"], [0.5, 0.5], atol=1e-12)


class TestMetricVerbs:
    def test_hilbert(self, capsys, tmp_path):
        path = tmp_path / "pair.json"
        path.write_text(json.dumps({"x": [1, 2], "y": [2, 1]}))
        code, out, _ = run(capsys, "hilbert", str(path))
        assert code == 0
        assert json.loads(out)["distance"] == pytest.approx(np.log(4), abs=1e-12)

    def test_induced_echoes_seed(self, capsys, tmp_path, margin_2x2):
        fitted = priorank.nearest_transitive(margin_2x2)
        path = tmp_path / "ab.json"
        path.write_text(json.dumps({
            "a": [[float(v) for v in row] for row in fitted.entries],
            "b": [[float(v) for v in row] for row in margin_2x2.entries],
        }))
        code, out, _ = run(capsys, "induced", "--samples", "32", "--seed", "5", str(path))
        payload = json.loads(out)
        assert code == 0
        assert payload["seed"] == 5
        assert payload["value"] > 0

    def test_induced_integral_mode(self, capsys, tmp_path):
        path = tmp_path / "ab.json"
        path.write_text(json.dumps({"a": [[1, 2], [0.5, 1]], "b": [[1, 3], [0.5, 1]]}))
        code, out, _ = run(
            capsys, "induced", "--mode", "integral", "--samples", "64", "--seed", "1", str(path)
        )
        payload = json.loads(out)
        assert code == 0
        assert "std_error" in payload


class TestRateVerbs:
    def test_decompose(self, capsys, tmp_path):
        path = tmp_path / "rate.csv"
        path.write_text("1,2\n3,4")
        code, out, _ = run(capsys, "decompose", str(path))
        payload = json.loads(out)
        assert code == 0
        assert payload["flows"] == [[-3.0, 2.0], [3.0, -2.0]]
        assert payload["growths"] == [[4.0, 0.0], [0.0, 6.0]]

    def test_eigenbasis(self, capsys, tmp_path):
        path = tmp_path / "rate.csv"
        path.write_text("0,-1\n1,0")
        code, out, _ = run(capsys, "eigenbasis", str(path))
        payload = json.loads(out)
        assert code == 0
        ims = sorted(z["im"] for z in payload["eigenvalues"])
        assert ims == pytest.approx([-1.0, 1.0], abs=1e-12)

    def test_eigenbasis_rejects_csv_format(self, capsys, tmp_path):
        path = tmp_path / "rate.csv"
        path.write_text("0,-1\n1,0")
        code, _, err = run(capsys, "eigenbasis", "--format", "csv", str(path))
        assert code == 2
        assert "csv" in err.lower()


class TestCensusVerb:
    def test_census_json(self, capsys):
        code, out, _ = run(
            capsys, "census", "--n", "3..4", "--samples", "1000", "--seed", "7", "--quiet"
        )
        payload = json.loads(out)
        assert code == 0
        assert [row["n"] for row in payload] == [3, 4]
        assert all(row["seed"] == 7 for row in payload)

    def test_census_csv(self, capsys):
        code, out, _ = run(
            capsys, "census", "--n", "3", "--samples", "500", "--seed", "7",
            "--quiet", "--format", "csv",
        )
        assert code == 0
        assert out.splitlines()[0] == "n,samples,ri,count,fraction"

    def test_byte_identical_across_runs(self, capsys):
        args = ("census", "--n", "3", "--samples", "800", "--seed", "3", "--quiet")
        _, first, _ = run(capsys, *args)
        _, second, _ = run(capsys, *args)
        assert first == second

    def test_seed_env_fallback(self, capsys, monkeypatch):
        monkeypatch.setenv("PRIORANK_SEED", "123")
        code, out, _ = run(capsys, "census", "--n", "3", "--samples", "200", "--quiet")
        assert code == 0
        assert json.loads(out)[0]["seed"] == 123


class TestErrorPaths:
    def test_unknown_verb_exits_2(self, capsys):
        assert main(["frobnicate"]) == 2

    def test_invalid_matrix_names_row(self, capsys, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("1,2\n0.5")
        code, _, err = run(capsys, "weights", str(path))
        assert code == 1
        assert "row 1" in err

    def test_unreadable_file(self, capsys):
        code, _, err = run(capsys, "weights", "/nonexistent/m.csv")
        assert code == 1

    def test_nonpositive_entry(self, capsys, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("1,-2\n0.5,1")
        code, _, err = run(capsys, "weights", str(path))
        assert code == 1
        assert "positive" in err

    def test_bad_panel_json(self, capsys, tmp_path):
        path = tmp_path / "p.json"
        path.write_text('{"importance": [1.0]}')
        code, _, err = run(capsys, "aggregate", str(path))
        assert code == 1


class TestStdinAndPretty:
    def test_stdin_input(self, capsys, monkeypatch):
        import io

        monkeypatch.setattr("sys.stdin", io.StringIO("1,2\n0.5,1"))
        code, out, _ = run(capsys, "weights")
        assert code == 0
        assert "weights" in out

    def test_pretty_consistency(self, capsys, tmp_path):
        path = tmp_path / "m.csv"
        path.write_text("1,2\n0.5,1")
        code, out, _ = run(capsys, "consistency", "--pretty", str(path))
        assert code == 0
        assert "verdict" in out

    def test_pretty_matrix_uses_one_based_labels(self, capsys, transitive_csv):
        code, out, _ = run(capsys, "nearest", "--pretty", transitive_csv)
        assert code == 0
        assert out.splitlines()[1].lstrip().startswith("1 ")


class TestVerbCoverage:
    ENGINE_OPERATIONS = {
        "eigen_weights", "llsm_weights", "intransitivity", "deviation_matrix",
        "nearest_transitive", "consistency_report", "hilbert_distance",
        "induced_max_distance", "induced_integral_distance", "coin_to_matrix",
        "aggregate_panel", "synthesize_hierarchy", "revision_hint",
        "decompose_rate", "complex_eigenbasis", "random_reciprocal",
        "estimate_ri", "consistency_census",
    }

    def test_every_operation_reachable_from_exactly_one_verb(self):
        seen: dict[str, str] = {}
        for verb, ops in VERB_OPERATIONS.items():
            for op in ops:
                assert op not in seen, f"{op} exposed by both {seen[op]} and {verb}"
                seen[op] = verb
        assert self.ENGINE_OPERATIONS <= set(seen)

    def test_mapped_operations_exist(self):
        for ops in VERB_OPERATIONS.values():
            for op in ops:
                if op == "serve":
                    continue
                assert hasattr(priorank, op), op

    def test_all_verbs_registered(self):
        from priorank.cli import build_parser

        parser = build_parser()
        sub = next(a for a in parser._actions if a.dest == "verb")
        assert set(VERB_OPERATIONS) == set(sub.choices)
