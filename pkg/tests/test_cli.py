"""Command-line interface: output contracts, error paths, determinism."""

import json
from fractions import Fraction

import pytest

from strata import cli, schemas
from strata.darboux import DEProblem, de_solve_jet
from strata.families import MatrixFamily
from strata.gauge import connection_from_de, formal_simplify
from strata.polynomials import Poly
from strata.series import SeriesRing


def X(d, a):
    return Poly.variable(d, a, exact=True)


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


@pytest.fixture(scope="module")
def de_fixture(tmp_path_factory):
    """Problem document (with F0), solved-jet document, connection document."""
    base = tmp_path_factory.mktemp("cli")
    p = DEProblem(2, 2, ["0", "1"], [X(2, 0), X(2, 1)], ["0", "1/2"])
    F0 = [[0, Fraction(3, 2)], [Fraction(-2, 7), 0]]
    prob = base / "prob.json"
    prob.write_text(json.dumps(schemas.encode_de_problem(p, F0)))
    jet, feasible, _ = de_solve_jet(p, F0, 5)
    assert feasible
    jetfile = base / "jet.json"
    jetfile.write_text(json.dumps(schemas.encode_jet(jet)))
    conn = connection_from_de(p, jet)
    connfile = base / "conn.json"
    connfile.write_text(json.dumps(schemas.encode_framed_connection(conn)))
    gs = formal_simplify(conn, 4, mode="regular")
    gsfile = base / "gs.json"
    gsfile.write_text(json.dumps(schemas.encode_gauge_series(gs)))
    return {"prob": str(prob), "jet": str(jetfile), "conn": str(connfile), "gs": str(gsfile)}


class TestPartitions:
    def test_count_reference_value(self, capsys):
        code, out, err = run(capsys, "partitions", "count", "--r", "2", "--n", "20")
        assert code == 0 and out == "318106\n" and err == ""

    def test_count_methods_agree(self, capsys):
        values = set()
        for method in ("auto", "sigma", "enumerate"):
            code, out, _ = run(capsys, "partitions", "count", "--r", "2", "--n", "8",
                               "--method", method)
            assert code == 0
            values.add(out)
        assert values == {"223\n"}

    def test_list_json(self, capsys):
        doc = run_json(capsys, "partitions", "list", "--n", "3")
        assert len(doc) == 6
        assert [[1], [1], [1]] in doc

    def test_list_text(self, capsys):
        code, out, _ = run(capsys, "partitions", "list", "--n", "2", "--format", "text")
        assert code == 0 and len(out.splitlines()) == 3

    def test_conjugate(self, capsys):
        doc = run_json(capsys, "partitions", "conjugate", "--symbol", "[[2,1],[1]]")
        assert doc == [[2, 1], [1]]


class TestBundles:
    def test_describe(self, capsys):
        doc = run_json(capsys, "bundles", "describe", "--symbol", "[[1,1,1,1]]")
        assert doc["dim"] == 1 and doc["n"] == 4

    def test_moves(self, capsys):
        doc = run_json(capsys, "bundles", "moves", "--symbol", "[[1],[1]]")
        assert doc == [{"kind": "I", "symbol": [[2]]}]

    def test_closure(self, capsys):
        doc = run_json(capsys, "bundles", "closure", "--a", "[[1,1,1,1]]",
                       "--b", "[[1],[1],[1],[1]]")
        assert doc["leq"] is True

    def test_hasse_json(self, capsys):
        doc = run_json(capsys, "bundles", "hasse", "--n", "4")
        assert len(doc["symbols"]) == 14
        assert sorted(set(doc["dims"]), reverse=True) == [16, 15, 14, 13, 12, 11, 10, 9, 8, 7, 1]

    def test_hasse_dot(self, capsys):
        code, out, _ = run(capsys, "bundles", "hasse", "--n", "4", "--format", "dot")
        assert code == 0
        assert out.startswith("digraph bundle_closure {")
        assert out.count("label=") == 14

    def test_classify(self, capsys, tmp_path):
        f = tmp_path / "m.json"
        f.write_text(json.dumps([[2, 1], [0, 2]]))
        doc = run_json(capsys, "bundles", "classify", "--input", str(f))
        assert doc["symbol"] == [[2]]


class TestGap:
    def test_distance_exact_one(self, capsys, tmp_path):
        f = tmp_path / "pair.json"
        f.write_text(json.dumps({"a": [[1, 0]], "b": [[0, 1]]}))
        doc = run_json(capsys, "gap", "distance", "--input", str(f))
        assert abs(doc["distance"] - 1.0) <= 1e-12
        assert doc["dim_a"] == doc["dim_b"] == 1

    def test_kernel(self, capsys, tmp_path):
        f = tmp_path / "m.json"
        f.write_text(json.dumps([[0, 1], [0, 0]]))
        doc = run_json(capsys, "gap", "kernel", "--input", str(f))
        assert doc["dim"] == 1
        assert abs(abs(doc["basis"][0][0][0]) - 1.0) <= 1e-12

    def test_report(self, capsys, tmp_path):
        x1, x2 = X(2, 0), X(2, 1)
        z = Poly(2, None, True)
        fam = MatrixFamily(
            2, 3,
            [[x1, z, x2], [z, x1, x2], [z, z, z]],
            [(x1, 2), (z, 1)],
        )
        f = tmp_path / "fam.json"
        f.write_text(json.dumps(schemas.encode_matrix_family(fam)))
        doc = run_json(capsys, "gap", "report", "--input", str(f), "--point", "[0, 1]")
        assert doc["verdict"] is False
        assert doc["cond3"] is False and all(doc["cond2"])


class TestDE:
    def test_solve(self, capsys, de_fixture):
        doc = run_json(capsys, "de", "solve", "--input", de_fixture["prob"], "--order", "4")
        assert doc["feasible"] is True
        assert doc["residual"]["exact_zero"] is True

    def test_oracle_matches_solver(self, capsys, de_fixture):
        a = run_json(capsys, "de", "solve", "--input", de_fixture["prob"], "--order", "3")
        b = run_json(capsys, "de", "oracle", "--input", de_fixture["prob"], "--order", "3")
        assert a["jet"] == b["jet"]

    def test_residual_of_solved_jet(self, capsys, de_fixture):
        doc = run_json(capsys, "de", "residual", "--input", de_fixture["prob"],
                       "--jet", de_fixture["jet"], "--order", "4")
        assert doc["exact_zero"] is True


class TestGauge:
    def test_build(self, capsys, de_fixture):
        doc = run_json(capsys, "gauge", "build", "--input", de_fixture["conn"])
        assert doc["n"] == 2 and doc["coalescent_pairs"] == []

    def test_simplify_and_residual(self, capsys, de_fixture, tmp_path):
        gs = run_json(capsys, "gauge", "simplify", "--input", de_fixture["conn"],
                      "--order", "4")
        f = tmp_path / "gs.json"
        f.write_text(json.dumps(gs))
        doc = run_json(capsys, "gauge", "residual", "--input", de_fixture["conn"],
                       "--gauge", str(f))
        assert doc["determined_exact_zero"] is True

    def test_witness(self, capsys, tmp_path):
        ring = SeriesRing(2, 4, ["0", "1"], exact=True)
        one = schemas.encode_series(ring.one())["terms"]
        zero = schemas.encode_series(ring.zero())["terms"]
        gap = schemas.encode_series(ring.var(1) - ring.var(0))["terms"]
        neg_one = schemas.encode_series(ring.const(-1))["terms"]
        doc = {
            "d": 2, "n": 2, "center": [["0", "0"], ["1", "0"]], "K": 4,
            "Delta0": [
                schemas.encode_poly(X(2, 0)),
                schemas.encode_poly(X(2, 1)),
            ],
            "B": [[zero, gap], [zero, zero]],
            "varpi": [
                [[zero, one], [zero, zero]],
                [[zero, neg_one], [zero, zero]],
            ],
        }
        f = tmp_path / "wit.json"
        f.write_text(json.dumps(doc))
        out = run_json(capsys, "gauge", "witness", "--input", str(f))
        assert out["ok"] is True and "L" in out

    def test_holcon_divergent(self, capsys, tmp_path):
        ring = SeriesRing(2, 2, ["0", "0"], exact=True)
        delta = ring.matrix([
            [ring.var(0), ring.zero()],
            [ring.zero(), ring.var(1)],
        ])
        L = ring.matrix([[ring.zero(), ring.one()], [ring.one(), ring.zero()]])
        from strata.gauge import build_connection

        conn = build_connection(delta, ["0", "0"], L)
        cf = tmp_path / "conn.json"
        cf.write_text(json.dumps(schemas.encode_framed_connection(conn)))
        t = X(1, 0)
        half = Poly.constant(1, Fraction(1, 2), True)
        pf = tmp_path / "path.json"
        pf.write_text(json.dumps(schemas.encode_path([t * half, -(t * half)])))
        doc = run_json(capsys, "gauge", "holcon", "--input", str(cf),
                       "--pair", "0", "1", "--path", str(pf))
        assert doc["bounded"] is False


class TestAppendix:
    def test_pfaffian(self, capsys, tmp_path):
        ring = SeriesRing(1, 3, ["0"], exact=True)
        kjet = ring.matrix([
            [ring.var(0), ring.zero()],
            [ring.zero(), ring.var(0).scale(3)],
        ])
        doc = {
            "A0": [[1, 0], [0, 2]],
            "B0": [[5, 0], [0, 7]],
            "Kjet": schemas.encode_series_matrix(kjet),
        }
        f = tmp_path / "pf.json"
        f.write_text(json.dumps(doc))
        out = run_json(capsys, "appendix", "pfaffian", "--input", str(f))
        assert out["is_zero"] is True and out["max_abs"] == 0.0

    def test_curve(self, capsys):
        doc = run_json(capsys, "appendix", "curve", "--alpha0", "1", "--beta0", "1",
                       "--gamma0", "1", "--c", "2")
        assert doc["ok"] is True

    def test_families(self, capsys):
        doc = run_json(capsys, "appendix", "families", "--p", "1", "--q", "3")
        assert len(doc) == 2
        assert doc[0]["solves"] and doc[1]["solves"]

    def test_classify2x2(self, capsys, tmp_path):
        x = X(2, 0)
        l = (-x - x) * (-x - x) * Fraction(5, 3)
        doc = {
            "d": 2,
            "g": schemas.encode_poly(x),
            "h": [],
            "l": schemas.encode_poly(l),
            "m": schemas.encode_poly(-x),
        }
        f = tmp_path / "c2.json"
        f.write_text(json.dumps(doc))
        out = run_json(capsys, "appendix", "classify2x2", "--input", str(f))
        assert out["type"] == "I" and out["kappa"] == ["5/3", "0"]


class TestErrorContract:
    def test_missing_file(self, capsys):
        code, out, err = run(capsys, "gap", "kernel", "--input", "/nonexistent.json")
        assert code == 2 and out == ""
        lines = err.strip().splitlines()
        assert len(lines) == 1
        obj = json.loads(lines[0])
        assert obj["error"] == "invalid-input" and "detail" in obj

    def test_bad_symbol_json(self, capsys):
        code, _, err = run(capsys, "bundles", "describe", "--symbol", "not json")
        assert code == 2
        assert json.loads(err.strip())["error"] == "invalid-input"

    def test_resonant_error_code(self, capsys, tmp_path):
        p = DEProblem(2, 2, ["0", "0"], [X(2, 0), X(2, 1)], ["0", "2"])
        f = tmp_path / "res.json"
        f.write_text(json.dumps(schemas.encode_de_problem(p, [[0, 1], [1, 0]])))
        code, _, err = run(capsys, "de", "solve", "--input", str(f), "--order", "2")
        assert code == 2
        assert json.loads(err.strip())["error"] == "resonant"

    def test_negative_tol_rejected(self, capsys, tmp_path):
        f = tmp_path / "m.json"
        f.write_text(json.dumps([[0, 1], [0, 0]]))
        code, _, err = run(capsys, "gap", "kernel", "--input", str(f), "--tol", "-1")
        assert code == 2
        assert json.loads(err.strip())["error"] == "invalid-input"


class TestTolerancePrecedence:
    MATRIX = [[1e-6, 0], [0, 1.0]]

    def kernel_dim(self, capsys, tmp_path, *extra, env=None, monkeypatch=None):
        f = tmp_path / "m.json"
        f.write_text(json.dumps(self.MATRIX))
        if env is not None:
            monkeypatch.setenv("STRATA_TOL", env)
        doc = run_json(capsys, "gap", "kernel", "--input", str(f), *extra)
        return doc["dim"]

    def test_default(self, capsys, tmp_path):
        assert self.kernel_dim(capsys, tmp_path) == 0

    def test_env_overrides_default(self, capsys, tmp_path, monkeypatch):
        assert self.kernel_dim(capsys, tmp_path, env="1e-3", monkeypatch=monkeypatch) == 1

    def test_flag_wins_over_env(self, capsys, tmp_path, monkeypatch):
        assert self.kernel_dim(capsys, tmp_path, "--tol", "1e-3",
                               env="1e-12", monkeypatch=monkeypatch) == 1

    def test_invalid_env_rejected(self, capsys, tmp_path, monkeypatch):
        f = tmp_path / "m.json"
        f.write_text(json.dumps(self.MATRIX))
        monkeypatch.setenv("STRATA_TOL", "banana")
        code, _, err = run(capsys, "gap", "kernel", "--input", str(f))
        assert code == 2
        assert json.loads(err.strip())["error"] == "invalid-input"


class TestDeterminism:
    def test_hasse_bytes_stable(self, capsys):
        _, out1, _ = run(capsys, "bundles", "hasse", "--n", "4", "--format", "dot")
        _, out2, _ = run(capsys, "bundles", "hasse", "--n", "4", "--format", "dot")
        assert out1 == out2

    def test_solve_bytes_stable(self, capsys, de_fixture):
        _, out1, _ = run(capsys, "de", "solve", "--input", de_fixture["prob"], "--order", "4")
        _, out2, _ = run(capsys, "de", "solve", "--input", de_fixture["prob"], "--order", "4")
        assert out1 == out2
