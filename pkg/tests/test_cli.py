import json
import random
import re
from fractions import Fraction as F

import pytest

from nrestrict import cli
from nrestrict.errors import AlgebraicRootHalt, ParseError
from nrestrict.parser import parse_expression, render
from nrestrict.poly import PuiseuxPoly
from nrestrict.report import analyze
from nrestrict.roots import UniPoly


def P(text):
    return parse_expression(text).poly


class TestParser:
    def test_square_support(self):
        assert P("(x2 - x1^2)^2") == P("x2^2 - 2*x1^2*x2 + x1^4")

    def test_example_12_2(self):
        phi = P("(x2 - x1^2 - x1^3)*(x2 - x1^2 - x1^4)^3")
        assert phi.degree_x2() == 4 and len(phi.terms) == 24

    def test_fractional_exponent(self):
        phi = P("x1^(3/2)")
        assert phi.ramification == 2
        assert phi.coefficient(F(3, 2), 0) == 1

    def test_aliases(self):
        assert P("x*y") == P("x1*x2")

    def test_rational_coefficient(self):
        assert P("-2/5*x1").coefficient(1, 0) == F(-2, 5)

    def test_implicit_multiplication_rejected(self):
        with pytest.raises(ParseError):
            parse_expression("2 x1")

    def test_negative_exponent_rejected(self):
        with pytest.raises(ParseError):
            parse_expression("x1^(-2)")

    def test_zero_polynomial_rejected(self):
        with pytest.raises(ParseError):
            parse_expression("x1 - x1")

    def test_error_carries_offset(self):
        with pytest.raises(ParseError) as err:
            parse_expression("x1 + %")
        assert err.value.offset == 5

    def test_round_trip_corpus(self):
        rng = random.Random(11)
        corpus = []
        for _ in range(200):
            terms = {}
            for _ in range(rng.randint(1, 6)):
                e1 = F(rng.randint(0, 9), rng.choice([1, 1, 1, 2, 3]))
                e2 = rng.randint(0, 6)
                c = F(rng.randint(-9, 9), rng.randint(1, 7))
                if c:
                    terms[(e1, e2)] = c
            if terms:
                corpus.append(PuiseuxPoly(terms))
        assert len(corpus) >= 195
        for phi in corpus:
            assert parse_expression(render(phi)).poly == phi


class TestAnalyzeReport:
    def test_fifth_power_golden_values(self):
        doc = analyze(parse_expression("(x2-x1^2)^5")).to_json_dict()
        assert doc["d"] == "10/3"
        assert doc["h"] == "5"
        assert doc["h_r"] == "4"
        assert doc["p_c_prime"] == "10"
        assert doc["adapted"] is False

    def test_adapted_quadratic(self):
        doc = analyze(parse_expression("x1^2+x2^2")).to_json_dict()
        assert doc["adapted"] is True
        assert doc["p_c_prime"] == "4"

    def test_example_12_2_fields(self):
        doc = analyze(parse_expression(
            "(x2 - x1^2 - x1^3)*(x2 - x1^2 - x1^4)^3")).to_json_dict()
        assert doc["adapted_polyhedron"]["vertices"] == [
            ["0", "4"], ["3", "3"], ["15", "0"]]
        assert doc["l_pr_case"] == {"case": "b", "l_pr": 2, "a": "3"}
        branches = doc["splitting"]["branches"]
        assert branches[0]["terminal"] == "stop_12_9"
        assert branches[0]["factorization"]["power"] == 3
        certs = doc["knapp_certificates"]
        assert max(F(c["derived_exponent"]) for c in certs) == F(15, 2)

    def test_json_byte_deterministic(self):
        a = analyze(parse_expression("(x2-x1^2)^5")).to_json()
        b = analyze(parse_expression("(x2-x1^2)^5")).to_json()
        assert a == b

    def test_singularity_block(self):
        doc = analyze(parse_expression("(x2 - x1^2)^2 + x1^5")).to_json_dict()
        assert doc["singularity"]["label"] == "A4"
        assert doc["singularity"]["m"] == 2


class TestCommands:
    def test_analyze_stdout(self, capsys):
        assert cli.main(["analyze", "x1^2+x2^2"]) == 0
        out = capsys.readouterr().out
        doc = json.loads(out)
        assert doc["p_c_prime"] == "4"

    def test_parse_error_exit_code(self, capsys):
        assert cli.main(["analyze", "x1^2 +"]) == 1

    def test_algebraic_halt_exit_code(self, capsys, monkeypatch):
        def boom(expr, **kw):
            raise AlgebraicRootHalt((F(1), F(2)), UniPoly([-2, 0, 1]), 2,
                                    context="test")
        monkeypatch.setattr(cli, "analyze", boom)
        assert cli.main(["analyze", "x1^2+x2^2"]) == 2
        err = capsys.readouterr().err
        assert json.loads(err)["error"] == "algebraic-root"

    def test_internal_invariant_exit_code(self, capsys, monkeypatch):
        from nrestrict.errors import InternalInvariantError

        def boom(expr, **kw):
            raise InternalInvariantError("dual routes disagree")
        monkeypatch.setattr(cli, "analyze", boom)
        assert cli.main(["analyze", "x1^2+x2^2"]) == 3

    def test_diagram_contains_crossing(self, tmp_path):
        out = tmp_path / "d.svg"
        rc = cli.main(["diagram", "(x2 - x1^2 - x1^3)*(x2 - x1^2 - x1^4)^3",
                       "--svg", str(out)])
        assert rc == 0
        svg = out.read_text()
        for vertex in ("(0,4)", "(3,3)", "(15,0)"):
            assert vertex in svg
        m = re.search(r'data-role="delta-crossing"[^/]*data-t1="([0-9/]+)" '
                      r'data-t2="([0-9/]+)"', svg)
        assert m and (F(m.group(1)), F(m.group(2))) == (F(3, 4), F(15, 4))
        # the svg pixel coordinates match the exact point within rounding
        cm = re.search(r'cx="([0-9.]+)" cy="([0-9.]+)"[^/]*'
                       r'data-role="delta-crossing"', svg)
        assert cm is not None

    def test_diagram_svg_coordinates_match_exact_point(self, tmp_path):
        out = tmp_path / "d.svg"
        cli.main(["diagram", "(x2 - x1^2 - x1^3)*(x2 - x1^2 - x1^4)^3",
                  "--svg", str(out)])
        svg = out.read_text()
        cross = re.search(
            r'<circle cx="([\d.]+)" cy="([\d.]+)" r="5.0"[^>]*'
            r'data-role="delta-crossing"', svg)
        origin = re.search(
            r'<circle cx="([\d.]+)" cy="([\d.]+)"[^>]*data-role="vertex"'
            r'[^>]*data-t1="0" data-t2="4"', svg)
        assert cross and origin
        # recover the scale from the (0,4) vertex and check the crossing
        x0, y0 = float(origin.group(1)), float(origin.group(2))
        xc, yc = float(cross.group(1)), float(cross.group(2))
        scale_y = abs(yc - y0) / abs(15 / 4 - 4)
        assert (xc - x0) / scale_y == pytest.approx(3 / 4, abs=0.02)

    def test_knapp_command(self, capsys):
        assert cli.main(["knapp", "(x2-x1^2)^5"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["p_c_prime"] == "10"
        assert any(c["target"] == "horizontal" and
                   c["derived_exponent"] == "10"
                   for c in doc["certificates"])

    def test_trace_command(self, capsys):
        assert cli.main(["trace",
                         "(x2 - x1^2 - x1^3)*(x2 - x1^2 - x1^4)^3"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["splitting"]["branches"][0]["terminal"] == "stop_12_9"

    def test_decay_command_single_expression(self, capsys):
        rc = cli.main(["decay", "x1^2 + x2^2", "--lambda-min", "100",
                       "--lambda-max", "100000", "--points", "12"])
        assert rc == 0
        line = capsys.readouterr().out.strip().splitlines()[0]
        fit = json.loads(line)
        assert fit["verdict"] == "pass"
        assert abs(fit["fitted_exponent"] - 1.0) <= 0.07


class TestHaltSurfacing:
    def test_halted_branches_appear_in_the_report(self):
        # the splitting of ((x2 - x1^2)^2 - 2 x1^6)^2 needs the shear
        # coefficients +-sqrt(2); both branches halt with isolating data
        # while the exact invariants are still computed
        doc = analyze(parse_expression(
            "((x2 - x1^2)^2 - 2*x1^6)^2")).to_json_dict()
        assert doc["p_c_prime"] == "15/2"
        terminals = [b["terminal"] for b in doc["splitting"]["branches"]]
        assert terminals == ["algebraic_root_halt", "algebraic_root_halt"]
        halt = doc["splitting"]["branches"][0]["halt"]
        assert halt["multiplicity"] == 2
        lo, hi = F(halt["interval"][0]), F(halt["interval"][1])
        assert lo < hi and hi - lo <= F(1, 4)
        assert halt["witness_poly"]  # square-free certificate coefficients


class TestFileInput:
    def test_expression_read_from_file(self, tmp_path, capsys):
        path = tmp_path / "phi.txt"
        path.write_text("(x2 - x1^2)^5\n")
        assert cli.main(["analyze", str(path)]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["p_c_prime"] == "10"
