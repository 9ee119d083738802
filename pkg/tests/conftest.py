from pathlib import Path

import pytest

from mdm.rewriting import load_theory

THEORY_DIR = Path(__file__).resolve().parent.parent / "theories"


@pytest.fixture(scope="session")
def empty_theory():
    return load_theory(THEORY_DIR / "empty.mdm")


@pytest.fixture(scope="session")
def selfapp():
    return load_theory(THEORY_DIR / "selfapp.mdm")


@pytest.fixture(scope="session")
def confusion():
    return load_theory(THEORY_DIR / "confusion.mdm")


@pytest.fixture(scope="session")
def arith_toy():
    return load_theory(THEORY_DIR / "arith-toy.mdm")
