import json
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

FIXTURES = Path(__file__).parent / "fixtures"

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def load_fixture(name):
    return json.loads((FIXTURES / name).read_text())


@pytest.fixture(scope="session")
def p_table():
    return load_fixture("p_table_n3.json")


@pytest.fixture(scope="session")
def phi_table():
    return load_fixture("phi_table_n3.json")


# one summary line per acceptance criterion, printed at the end of the run
ACCEPTANCE = {}


class Criterion:
    def __init__(self, number, text):
        self.number, self.text, self.notes = number, text, []

    def note(self, msg):
        self.notes.append(msg)

    def __enter__(self):
        return self

    def __exit__(self, kind, exc, tb):
        extra = "; ".join(self.notes)
        if kind is None:
            line = f"PASS criterion {self.number}: {self.text}"
        else:
            extra = "; ".join(filter(None, [extra, f"{kind.__name__}: {exc}".splitlines()[0]]))
            line = f"FAIL criterion {self.number}: {self.text}"
        if extra:
            line += f"  [{extra}]"
        ACCEPTANCE[self.number] = line
        print(line)
        return False


@pytest.fixture
def criterion():
    return Criterion


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
