"""Shared fixtures for the test suite."""

from __future__ import annotations

import sys
from datetime import datetime, timezone
from pathlib import Path

import pytest

TESTS_DIR = Path(__file__).resolve().parent
REPO_ROOT = TESTS_DIR.parent
FIXTURES = REPO_ROOT / "fixtures"

# Make sibling helper modules (oracles.py) importable from any test module.
if str(TESTS_DIR) not in sys.path:
    sys.path.insert(0, str(TESTS_DIR))

# Reference instants used when replaying the canned provider data.  Both fall
# a few days before the first travel date mentioned in the matching email.
NEWPORT_RECEIVED_AT = datetime(2020, 11, 20, 12, 0, tzinfo=timezone.utc)
NEWYORK_RECEIVED_AT = datetime(2020, 11, 1, 9, 30, tzinfo=timezone.utc)


@pytest.fixture(scope="session")
def fixtures_root() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def newport_email() -> str:
    return (FIXTURES / "emails" / "newport_invitation.txt").read_text("utf-8")


@pytest.fixture(scope="session")
def newyork_email() -> str:
    return (FIXTURES / "emails" / "newyork_offer.txt").read_text("utf-8")


@pytest.fixture
def app_config(tmp_path):
    from tripminder.config import AppConfig

    return AppConfig(
        fixture_root=FIXTURES,
        journal_path=tmp_path / "journal.jsonl",
    )
