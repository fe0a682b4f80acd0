"""
Tests unitaires pour services/corpus.py.
"""

import pytest

from services.corpus import load_pool, load_seed_corpus
from services.sexpr import render
from services.syntax import Eq, Zero, is_sentence
from utils.errors import OpenFormulaError, ParseError


class TestSeedCorpus:
    """Tests pour le corpus de départ."""

    def test_default_path(self, clean_env):
        corpus = load_seed_corpus()
        assert len(corpus) == 16
        assert all(is_sentence(sentence) for sentence in corpus)
        assert corpus[0] == Eq(Zero(), Zero())

    def test_configured_path(self, clean_env, tmp_path):
        path = tmp_path / "corpus.sexpr"
        path.write_text("(eq z z)\n(lt z (s z))\n", encoding="utf-8")
        clean_env.setenv("CTW_SEED_CORPUS", str(path))
        assert [render(s) for s in load_seed_corpus()] == ["(eq z z)", "(lt z (s z))"]

    def test_missing_corpus(self, tmp_path):
        with pytest.raises(FileNotFoundError, match="Seed corpus not found"):
            load_seed_corpus(tmp_path / "absent.sexpr")


class TestLoadPool:
    """Tests pour la lecture des fichiers de pool."""

    def test_comments_and_blank_lines(self, tmp_path):
        path = tmp_path / "pool.sexpr"
        path.write_text("; pool\n\n(eq z z) ; vrai\n(not (eq z z))\n", encoding="utf-8")
        assert len(load_pool(path)) == 2

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError, match="Pool file not found"):
            load_pool(tmp_path / "absent.sexpr")

    def test_open_formula(self, tmp_path):
        path = tmp_path / "open.sexpr"
        path.write_text("(eq z z)\n(eq (var x) z)\n", encoding="utf-8")
        with pytest.raises(OpenFormulaError, match="formula 1"):
            load_pool(path)

    def test_malformed(self, tmp_path):
        path = tmp_path / "bad.sexpr"
        path.write_text("(eq z z\n", encoding="utf-8")
        with pytest.raises(ParseError):
            load_pool(path)
