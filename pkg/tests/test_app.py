"""
Tests d'intégration pour l'interface en ligne de commande (app.py).

Chaque test appelle main() avec une liste d'arguments et vérifie la sortie
standard et le code de sortie (0 succès, 1 vérification échouée, 2 erreur).
"""

import json

import pytest

import app
from services.semantics import CheckInstance, CheckReport, F, T


@pytest.fixture
def run(capsys, clean_env):
    """Lance la CLI et renvoie (code, stdout, stderr)."""

    def _run(*argv):
        code = app.main(list(argv))
        captured = capsys.readouterr()
        return code, captured.out.strip(), captured.err

    return _run


class TestSyntaxCommands:
    """Tests pour parse, render, encode, decode et les grands connecteurs."""

    def test_parse(self, run):
        assert run("parse", "(eq z z)") == (0, "(eq z z)", "")

    def test_parse_json(self, run):
        code, out, _ = run("parse", "(eq z z)", "--format", "json")
        assert code == 0
        assert json.loads(out) == {"command": "parse", "result": "(eq z z)"}

    def test_render_desugar(self, run):
        code, out, _ = run("render", "(and (eq z z) (eq z z))", "--desugar")
        assert out == "(not (or (not (eq z z)) (not (eq z z))))"

    def test_encode(self, run):
        assert run("encode", "(eq z z)")[:2] == (0, "184")
        assert run("encode", "(s z)", "--term")[:2] == (0, "13")

    def test_decode(self, run):
        assert run("decode", "184")[:2] == (0, "(eq z z)")

    def test_decode_not_a_code(self, run):
        code, out, err = run("decode", "0")
        assert code == 2
        assert out == ""
        assert "ctw decode:" in err

    def test_bigor_with_pool(self, run):
        code, out, _ = run("bigor", "(eq z z)", "--pool", "(lt z (s z)) (eq z (s z))")
        assert out == "(or (or (eq z z) (lt z (s z))) (eq z (s z)))"

    def test_bigor_empty(self, run):
        assert run("bigor")[0] == 2

    def test_relativize(self, run):
        code, out, _ = run("relativize", "(ex-i b (ieq b b))", "--index", "a")
        assert out == "(ex-i b (and (prec b a) (ieq b b)))"

    def test_file_input(self, run, tmp_path):
        path = tmp_path / "phi.sexpr"
        path.write_text("(lt z (s z))\n", encoding="utf-8")
        assert run("parse", str(path))[1] == "(lt z (s z))"


class TestConstructionCommands:
    """Tests pour axioms, theta, fixedpoint, iota, translate et size-profile."""

    def test_axioms_biconditional(self, run):
        code, out, _ = run("axioms", "biconditional", "--formula", "(eq z z)")
        assert out == "(all-i a (iff (itru a (quote (eq z z))) (eq z z)))"

    def test_axioms_missing_formula(self, run):
        code, _, err = run("axioms", "ind")
        assert code == 2
        assert "needs --formula" in err

    def test_axioms_bundle(self, run):
        code, out, _ = run("axioms", "dtb", "--pool", "(eq z z)")
        assert code == 0
        assert out.startswith("(bundle dtb ")

    def test_theta(self, run):
        assert run("theta")[1] == "(all-i a (itru a (var x)))"

    def test_fixedpoint(self, run):
        code, out, _ = run("fixedpoint", "(eq (var x) (var x))")
        assert code == 0
        assert out.startswith("(fixedpoint (delta (eq (var x) (var x)))")

    def test_iota(self, run):
        code, out, _ = run("iota", "--psi", "(eq z (s z))", "--pool", "(eq z z)", "--n", "0")
        assert code == 0
        assert out.startswith("(interp 0 ")

    def test_translate(self, run):
        code, out, _ = run("translate", "(ex-i a (ieq a a))", "--psi", "(eq z (s z))", "--n", "1")
        assert code == 0
        assert "ex-i" not in out

    def test_size_profile_csv(self, run):
        code, out, _ = run("size-profile", "--psi", "(eq z (s z))", "--pool", "(eq z z)", "--n-max", "2")
        lines = out.splitlines()
        assert lines[0] == "n,literal,shared"
        assert len(lines) == 4

    def test_size_profile_json(self, run):
        code, out, _ = run(
            "size-profile", "--psi", "(eq z (s z))", "--pool", "(eq z z)", "--n-max", "1", "--format", "json"
        )
        records = json.loads(out)
        assert [record["n"] for record in records] == [0, 1]


class TestCheckCommand:
    """Tests pour check."""

    def test_dc(self, run):
        code, out, _ = run("check", "dc", "--s", "3", "--fuel", "32")
        assert code == 0
        report = json.loads(out)
        assert report["pass"] is True
        assert len(report["instances"]) == 8

    def test_cc_inline_pool(self, run):
        code, out, _ = run("check", "cc", "--pool", "(eq z z) (eq z (s z))")
        assert code == 0
        assert len(json.loads(out)["instances"]) == 4

    def test_pc_and_dtb(self, run):
        assert run("check", "pc")[0] == 0
        assert run("check", "dtb")[0] == 0

    def test_sexpr_output(self, run):
        code, out, _ = run("check", "triangle", "--n", "1", "--format", "sexpr")
        assert code == 0
        assert out.startswith("(report triangle (pass true)")

    def test_failed_check_exit_code(self, run, monkeypatch):
        failing = CheckReport("pc", 8, (CheckInstance("bit 0", T, F),))
        monkeypatch.setattr(app, "_run_suite", lambda suite, args, config: failing)
        code, out, _ = run("check", "pc")
        assert code == 1
        assert json.loads(out)["pass"] is False

    def test_pool_too_large(self, run):
        code, _, err = run("check", "dc", "--s", "9")
        assert code == 2
        assert "exceeds the bound" in err

    @pytest.mark.slow
    def test_all(self, run):
        code, out, _ = run("check", "all", "--fuel", "16")
        assert code == 0
        result = json.loads(out)
        assert result["pass"] is True
        assert [report["check"] for report in result["reports"]] == ["dc", "cc", "star", "triangle", "pc", "dtb", "ind"]


class TestExportCommand:
    """Tests pour export-tptp."""

    def test_default_bundle(self, run):
        code, out, _ = run("export-tptp")
        assert code == 0
        assert "fof(inconsistency, conjecture, $false)." in out

    def test_loeb_without_opaque_codes(self, run):
        code, _, err = run("export-tptp", "--bundle", "loeb")
        assert code == 2
        assert "opaque codes" in err

    def test_obligations_dir(self, run, tmp_path):
        directory = tmp_path / "tasks"
        code, _, _ = run("export-tptp", "--bundle", "loeb", "--opaque-codes", "--obligations-dir", str(directory))
        assert code == 0
        assert sorted(path.name for path in directory.iterdir()) == ["hbl_gamma_1.p", "hbl_theta_1.p"]

    def test_out_file(self, run, tmp_path):
        target = tmp_path / "dtb.p"
        code, out, _ = run("export-tptp", "--out", str(target))
        assert code == 0
        assert out == ""
        assert target.read_text(encoding="utf-8").startswith("% Bundle: dtb")


class TestUsage:
    """Tests pour les erreurs d'usage et la configuration."""

    def test_unknown_command(self, run):
        assert run("bogus")[0] == 2

    def test_help(self, run):
        assert run("--help")[0] == 0

    def test_invalid_env_fuel(self, run, clean_env):
        clean_env.setenv("CTW_FUEL", "beaucoup")
        code, _, err = run("check", "pc")
        assert code == 2
        assert "CTW_FUEL" in err

    def test_invalid_fuel_flag(self, run):
        assert run("check", "pc", "--fuel", "0")[0] == 2

    def test_negative_stage(self, run):
        """Une étape négative est une erreur d'usage, sans trace Python."""
        code, _, err = run("iota", "--psi", "(eq z (s z))", "--n", "-1")
        assert code == 2
        assert "ctw iota:" in err
        assert "Traceback" not in err

    def test_negative_length(self, run):
        code, _, err = run("check", "pc", "--u", "-1")
        assert code == 2
        assert "non-negative" in err

    def test_unwritable_output(self, run, tmp_path):
        code, _, err = run("export-tptp", "--out", str(tmp_path / "absent" / "dtb.p"))
        assert code == 2
        assert "ctw export-tptp:" in err
