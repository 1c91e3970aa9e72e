import pytest

from geobench.geo import load_areas
from geobench.ingest import Record, read_records
from geobench.synth import fixture_dir

# Three reference rows: Piemonte, Campania and Veneto posts with gold coordinates
TABLE1 = [
    Record("280", "[USER] A suma bin ciapa'! meglio alleggerire un attimo", "Piemonte", 45.0729, 7.6758),
    Record("286", "[USER] Ce ripigliamm tutt chell ch è o nuost", "Campania", 40.8541, 14.2435),
    Record("500", "[USER] [USER] Sta bon, vecio!", "Veneto", 46.1572, 12.2865),
]


@pytest.fixture
def table1():
    return list(TABLE1)


@pytest.fixture(scope="session")
def fixture_path():
    return fixture_dir()


@pytest.fixture(scope="session")
def fixture_train(fixture_path):
    return read_records(fixture_path / "train_merged.tsv")


@pytest.fixture(scope="session")
def fixture_test(fixture_path):
    return read_records(fixture_path / "test_merged.tsv")


@pytest.fixture(scope="session")
def areas(fixture_path):
    return load_areas(fixture_path / "synthetic_areas.geojson")


@pytest.fixture(scope="session")
def data_dir():
    from pathlib import Path

    return Path(__file__).parent / "data"


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line per criterion, then assert it."""

    def record(number: int, name: str, ok: bool, detail: str = "") -> None:
        line = f"acceptance {number}: {'PASS' if ok else 'FAIL'} - {name}" + (f" ({detail})" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
