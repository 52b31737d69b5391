import json
import subprocess
import sys
from contextlib import redirect_stdout
from io import StringIO

import pytest

from probgamma.cli import main
from probgamma.errors import ColumnNotStochastic
from probgamma.io import emit_error, emit_report


def run(*argv):
    buf = StringIO()
    with redirect_stdout(buf):
        code = main(list(argv))
    return code, json.loads(buf.getvalue())


HALF = {"probs": ["1/2", "1/2"]}
PIPELINE = {
    "source": {"probs": ["1/4", "1/4", "1/2"]},
    "steps": [
        {"target": HALF, "matrix": [[1, 1, 0], [0, 0, 1]]},
        {"target": {"probs": [1]}, "matrix": [[1, 1]]},
    ],
}


class TestValidate:

    def test_finite_probability(self):
        code, out = run("validate", "--input", json.dumps({"type": "finite-probability", "probs": ["1/3", "2/3"]}))
        assert code == 0
        assert out["result"]["valid"] and out["result"]["size"] == 2
        assert out["schema"] == "probgamma.report/1"

    def test_float_probs_are_parse_errors(self):
        code, out = run("validate", "--input",
                        json.dumps({"type": "finite-probability", "probs": [0.333, 0.333, 0.333]}))
        assert code == 2 and out["error"]["error"] == "ParseError"
        assert out["error"]["detail"]["location"] == "$.probs[0]"

    def test_unknown_field(self):
        code, out = run("validate", "--input", json.dumps({"type": "finite-probability", "probs": [1], "x": 1}))
        assert code == 2 and out["error"]["error"] == "ParseError"

    def test_bad_json(self):
        code, out = run("validate", "--input", "{not json")
        assert code == 2 and out["error"]["error"] == "ParseError"

    def test_column_sum_is_domain_error(self):
        m = {"type": "stochastic-morphism", "source": HALF, "target": {"probs": [1]}, "matrix": [["2/3", 1]]}
        code, out = run("validate", "--input", json.dumps(m))
        assert code == 1
        assert out["error"]["error"] == "ColumnNotStochastic"
        assert out["error"]["detail"]["sum"] == "2/3"

    def test_density_matrix_not_psd(self):
        code, out = run("validate", "--input", json.dumps({"type": "density-matrix", "matrix": [[1, 1], [1, 0]]}))
        assert code == 1 and out["error"]["error"] != "ParseError"

    def test_builtin_category(self):
        code, out = run("validate", "--input", json.dumps({"type": "category", "builtin": "z3"}))
        assert code == 0 and out["result"]["morphisms"] == 3

    def test_input_from_file(self, tmp_path):
        p = tmp_path / "fp.json"
        p.write_text(json.dumps({"type": "finite-probability", "probs": [1, 0]}))
        code, out = run("validate", "--input", str(p))
        assert code == 0 and out["result"]["support"] == [0]

    def test_missing_file(self):
        code, out = run("validate", "--input", "/nonexistent/x.json")
        assert code == 2


class TestCommands:

    def test_loss_pipeline_total(self):
        code, out = run("loss", "--pipeline", json.dumps(PIPELINE))
        assert code == 0
        res = out["result"]
        assert res["total"] == pytest.approx(sum(s["loss"] for s in res["steps"]), abs=1e-12)
        assert res["total"] == pytest.approx(res["composite_loss"], abs=1e-12)
        assert res["units"] == "nats"

    def test_loss_rejects_unknown_step_field(self):
        bad = {"source": HALF, "steps": [{"target": HALF, "matrix": [[1, 0], [0, 1]], "note": 1}]}
        code, _ = run("loss", "--pipeline", json.dumps(bad))
        assert code == 2

    def test_nerve_z2(self):
        code, out = run("nerve", "--category", "builtin:z2", "--nmax", "2")
        assert code == 0 and out["result"]["sizes"] == [1, 2, 8]

    def test_nerve_explosion_guard(self):
        code, out = run("nerve", "--category", "builtin:z3", "--nmax", "3", "--bound", "10")
        assert code == 1 and out["error"]["error"] == "ExplosionGuard"

    def test_gap_locus(self):
        code, out = run("gap-locus", "--beta", "1", "--delta", "2.7")
        assert code == 0 and out["result"]["feasible"] is True
        code, out = run("gap-locus", "--beta", "1", "--delta", "2.6")
        assert code == 0 and out["result"]["feasible"] is False

    def test_summing(self):
        code, out = run("summing", "--size", "3", "--lambda", "1/3,1/4", "--subset", "1,2")
        assert code == 0
        assert out["result"]["value"]["weights"] == ["1/12", "1/4", "1/6", "1/2"]

    def test_summing_float_lambda(self):
        code, _ = run("summing", "--size", "3", "--lambda", "0.3,1/4")
        assert code == 2

    def test_coproduct_objects(self):
        code, out = run("coproduct", "--input", json.dumps({"left": HALF, "right": {"probs": ["1/3", "2/3"]}}))
        assert code == 0
        assert out["result"]["object"]["probs"] == ["1/6", "1/3", "1/6", "1/3"]
        assert out["result"]["object"]["labels"] == ["0|0", "0|1", "1|0", "1|1"]

    def test_strata_classical(self):
        code, out = run("strata", "--kind", "classical", "--n", "2", "--sample", "1/3,1/4")
        assert code == 0

    def test_gapped_strata_need_parameters(self):
        code, _ = run("strata", "--kind", "gapped", "--n", "1")
        assert code == 2

    def test_export_writes_file(self, tmp_path):
        dest = tmp_path / "z2.json"
        code, out = run("export", "--what", "nerve", "--category", "builtin:z2", "--output", str(dest))
        assert code == 0 and out["result"]["written"] == str(dest)
        assert json.loads(dest.read_text())["levels"]

    def test_axiom_suite(self):
        code, out = run("axiom-suite", "--instances", "20", "--seed", "1")
        assert code == 0 and out["result"]["pass"] is True
        code, out = run("axiom-suite", "--loss", "entropy-squared", "--instances", "20")
        assert code == 0 and out["result"]["pass"] is False

    def test_unknown_command(self):
        with pytest.raises(SystemExit) as ei:
            main(["frobnicate"])
        assert ei.value.code == 2


def test_output_is_deterministic():
    first = run("axiom-suite", "--instances", "10", "--seed", "4")
    assert run("axiom-suite", "--instances", "10", "--seed", "4") == first


def test_report_roundtrip_is_stable():
    _, out = run("loss", "--pipeline", json.dumps(PIPELINE))
    text = emit_report("loss", out["result"])
    for _ in range(3):
        again = emit_report("loss", json.loads(text)["result"])
        assert again == text
        text = again
    err = emit_error("validate", ColumnNotStochastic("bad", col=0))
    assert json.loads(err)["error"]["detail"] == {"col": 0}


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "probgamma", "nerve", "--category", "builtin:disc2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["sizes"] == [2, 2, 2]
