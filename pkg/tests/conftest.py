import pytest

from df_spectra.molecules import MoleculeDatabase, builtin_molecules
from df_spectra.nu import PotentialSpec

# filled by tests/test_acceptance.py; printed after the run
ACCEPTANCE_LINES = []


@pytest.fixture(autouse=True)
def _isolate_env(monkeypatch):
    monkeypatch.delenv("DF_SPECTRA_MOLECULES", raising=False)


@pytest.fixture(scope="session")
def db():
    return MoleculeDatabase(builtin_molecules())


@pytest.fixture(scope="session")
def co(db):
    return db.get("CO")


@pytest.fixture(scope="session")
def co_df(co):
    return PotentialSpec.deng_fan(co)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
