"""
Pytest configuration and shared fixtures for the test suite.
"""

import os
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

# Add root directory to Python path
ROOT_DIR = Path(__file__).parent.parent
sys.path.insert(0, str(ROOT_DIR))

# Profils hypothesis : "dev" par défaut, "acceptance" pour les campagnes de 10^4 exemples
settings.register_profile("dev", max_examples=100, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("acceptance", max_examples=10_000, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "dev"))


def pytest_configure(config):
    """Configure pytest before running tests."""
    # Register custom markers
    config.addinivalue_line("markers", "slow: marks tests as slow (deselect with '-m \"not slow\"')")
    config.addinivalue_line("markers", "integration: marks tests as integration tests")
    config.addinivalue_line("markers", "property: marks hypothesis-based property tests")


def pytest_collection_modifyitems(config, items):
    """Marque automatiquement les tests hypothesis (property) et ceux de la CLI (integration)."""
    for item in items:
        if getattr(getattr(item, "obj", None), "is_hypothesis_test", False):
            item.add_marker(pytest.mark.property)
        if getattr(getattr(item, "module", None), "__name__", "") == "test_app":
            item.add_marker(pytest.mark.integration)


@pytest.fixture(scope="session")
def seed_corpus():
    """Le corpus de 16 phrases décidables (vrai / faux en alternance)."""
    from services.corpus import load_seed_corpus

    return load_seed_corpus(ROOT_DIR / "data" / "seed_corpus.sexpr")


@pytest.fixture
def small_pool(seed_corpus):
    """Les deux premières phrases du corpus : 0 = 0 et 0 = 1."""
    return seed_corpus[:2]


@pytest.fixture
def psi_false():
    """psi fermée et fausse : aucun indice n'est exclu du domaine."""
    from services.sexpr import parse

    return parse("(eq z (s z))")


@pytest.fixture
def clean_env(monkeypatch):
    """Retire les variables CTW_* de l'environnement."""
    for key in list(os.environ):
        if key.startswith("CTW_"):
            monkeypatch.delenv(key, raising=False)
    return monkeypatch
