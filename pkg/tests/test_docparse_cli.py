import json
from pathlib import Path

import pytest

from eulerseries.cli import main
from eulerseries.docparse import (DocumentError, parse_document,
                                  serialize_document)
from eulerseries.exactnum import Poly, RatFn
from fractions import Fraction

EXAMPLES = Path(__file__).resolve().parent.parent / "docs" / "examples"

MINIMAL = """
[space]
kind = "projective"
n = 2

[bundles]
L = ["3/4*h"]

[sections.s]
kind = "zero"
bundle = "L"
"""


class TestParsing:
    def test_minimal_document(self):
        doc = parse_document(MINIMAL)
        assert doc.space_dim == 2
        L = doc.bundles["L"]
        assert L.positive == (doc.ring.gen("h") * Fraction(3, 4),)
        name, section = doc.sections["s"]
        assert name == "L" and section.kind == "zero"

    def test_product_space(self):
        doc = parse_document('[space]\nkind = "product"\nfactors = [1, 2]\n')
        assert doc.space_dim == 3
        assert doc.ring.gen("h1") is not None

    def test_unknown_top_key(self):
        with pytest.raises(DocumentError) as exc:
            parse_document("[bogus]\nx = 1\n")
        assert "bogus" in str(exc.value)

    def test_unknown_key_reports_path(self):
        with pytest.raises(DocumentError) as exc:
            parse_document('[space]\nkind = "projective"\nn = 1\nextra = 1\n')
        msg = str(exc.value)
        assert "extra" in msg and "space" in msg

    def test_unknown_generator_in_root(self):
        text = MINIMAL.replace('"3/4*h"', '"2*z"')
        with pytest.raises(DocumentError) as exc:
            parse_document(text)
        assert "bundles.L" in str(exc.value)

    def test_unknown_bundle_in_section(self):
        text = MINIMAL.replace('bundle = "L"', 'bundle = "M"')
        with pytest.raises(DocumentError) as exc:
            parse_document(text)
        assert "M" in str(exc.value)

    def test_toml_syntax_error(self):
        with pytest.raises(DocumentError):
            parse_document("[space\n")

    def test_simple_section_factor(self):
        text = MINIMAL + """
[sections.loc]
kind = "simple"
bundle = "L"
zeros = [{label = "p", mult = 2, factor = "1/(1-t^2)"}]
"""
        doc = parse_document(text)
        _, section = doc.sections["loc"]
        label, mult, factor = section.zeros[0]
        assert (label, mult) == ("p", 2)
        assert factor == RatFn(Poly([1]), Poly([1, 0, -1]))

    def test_expression_error_carries_position(self):
        text = MINIMAL.replace('"3/4*h"', '"h + * h"')
        with pytest.raises(DocumentError) as exc:
            parse_document(text)
        assert "column" in str(exc.value)


class TestRoundTrip:
    @pytest.mark.parametrize("name", [
        "p1_flow.toml", "bundle_identity.toml", "hilbert_koszul.toml",
        "splitting_dataset.toml", "rationality_suite.toml"])
    def test_examples_round_trip(self, name):
        text = (EXAMPLES / name).read_text()
        doc = parse_document(text)
        out = serialize_document(doc)
        doc2 = parse_document(out)
        assert doc2 == doc
        assert serialize_document(doc2) == out

    def test_round_trip_minimal(self):
        doc = parse_document(MINIMAL)
        assert parse_document(serialize_document(doc)) == doc


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCliCommands:
    def test_euler_on_rationality_suite(self, capsys):
        code, out, _ = run_cli(capsys, "euler",
                               str(EXAMPLES / "rationality_suite.toml"),
                               "--clear", "--nonreduced")
        assert code == 0
        assert "section tangent" in out
        assert "reduced = 2" in out

    def test_euler_single_section_machine(self, capsys):
        code, out, _ = run_cli(capsys, "euler",
                               str(EXAMPLES / "rationality_suite.toml"),
                               "--section", "tangent", "--machine")
        assert code == 0
        payload = json.loads(out)
        assert payload["results"][0]["reduced"] == "2"

    def test_hilbert_example(self, capsys):
        code, out, _ = run_cli(capsys, "hilbert",
                               str(EXAMPLES / "hilbert_koszul.toml"))
        assert code == 0
        assert "PASS" in out

    def test_traj_p1_flow(self, capsys):
        code, out, _ = run_cli(capsys, "traj", str(EXAMPLES / "p1_flow.toml"))
        assert code == 0
        assert "PASS" in out

    def test_traj_splitting_dataset(self, capsys):
        code, out, _ = run_cli(capsys, "traj",
                               str(EXAMPLES / "splitting_dataset.toml"))
        assert code == 0
        assert "splitting formula at [2]: PASS" in out

    def test_zeta_truncate(self, capsys):
        code, out, _ = run_cli(capsys, "zeta",
                               str(EXAMPLES / "splitting_dataset.toml"),
                               "--truncate", "2", "--machine")
        assert code == 0
        payload = json.loads(out)
        assert payload["truncation"] == 2

    def test_critval(self, capsys):
        code, out, _ = run_cli(capsys, "critval", "(1-t^2)/(1+t)")
        assert code == 0
        assert "P*(-1) = 2" in out

    def test_check_single_suite(self, capsys):
        code, out, _ = run_cli(capsys, "check", "critical-laws")
        assert code == 0
        assert "checks passed" in out

    def test_echo_round_trip(self, capsys, tmp_path):
        code, out, _ = run_cli(capsys, "echo", str(EXAMPLES / "p1_flow.toml"))
        assert code == 0
        doc = parse_document(out)
        assert doc == parse_document((EXAMPLES / "p1_flow.toml").read_text())


class TestCliDeterminism:
    def test_machine_output_is_byte_stable(self, capsys):
        outs = []
        for _ in range(2):
            code, out, _ = run_cli(capsys, "euler",
                                   str(EXAMPLES / "bundle_identity.toml"),
                                   "--machine")
            assert code == 0
            outs.append(out)
        assert outs[0] == outs[1]
        assert outs[0].count("\n") == 1  # single line

    def test_check_workers_do_not_change_output(self, capsys):
        _, out1, _ = run_cli(capsys, "check", "critical-laws",
                             "--machine", "--workers", "1")
        _, out4, _ = run_cli(capsys, "check", "critical-laws",
                             "--machine", "--workers", "4")
        assert out1 == out4

    def test_machine_keys_sorted(self, capsys):
        _, out, _ = run_cli(capsys, "check", "critical-laws", "--machine")
        payload = json.loads(out)
        assert out == json.dumps(payload, sort_keys=True,
                                 separators=(",", ":")) + "\n"


class TestExitCodes:
    def test_missing_file_is_input_error(self, capsys):
        code, _, err = run_cli(capsys, "euler", "/nonexistent.toml")
        assert code == 2
        assert "E_IO" in err

    def test_parse_error_is_input_error(self, capsys, tmp_path):
        bad = tmp_path / "bad.toml"
        bad.write_text("[space\n")
        code, _, err = run_cli(capsys, "euler", str(bad))
        assert code == 2
        assert "E_PARSE" in err

    def test_unknown_section_is_input_error(self, capsys):
        code, _, err = run_cli(capsys, "euler",
                               str(EXAMPLES / "rationality_suite.toml"),
                               "--section", "missing")
        assert code == 2
        assert "E_NO_SECTION" in err

    def test_failed_check_is_exit_one(self, capsys, tmp_path):
        text = (EXAMPLES / "splitting_dataset.toml").read_text()
        broken = tmp_path / "broken.toml"
        broken.write_text(text.replace('["1", "2"]', '["1", "3"]'))
        code, out, _ = run_cli(capsys, "traj", str(broken))
        assert code == 1
        assert "FAIL" in out

    def test_stacky_pole_is_engine_limit(self, capsys, tmp_path):
        doc = tmp_path / "stacky.toml"
        doc.write_text("""
[space]
kind = "projective"
n = 1

[bundles]
L = ["h"]

[sections.s]
kind = "simple"
bundle = "L"
zeros = [{label = "p", factor = "1/(1+t+t^2)"}]
""")
        code, _, err = run_cli(capsys, "euler", str(doc))
        assert code == 3
        assert "E_STACKY_POLE" in err
