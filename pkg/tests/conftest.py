import pytest


def pytest_addoption(parser):
    parser.addoption("--run-deep", action="store_true", default=False, help="run deep-BLER campaigns (hours)")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-deep"):
        return
    skip = pytest.mark.skip(reason="deep-BLER point; pass --run-deep")
    for item in items:
        if "deep" in item.keywords:
            item.add_marker(skip)


ACCEPTANCE_LINES: list[str] = []


def pytest_runtest_logreport(report):
    # skipped criteria never run their body, so report them here
    if report.skipped and report.when == "setup" and "test_criterion_" in report.nodeid:
        num = report.nodeid.split("test_criterion_")[1].split("_")[0]
        ACCEPTANCE_LINES.append(f"[{num}] SKIP  {report.longrepr[2].removeprefix('Skipped: ')}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES, key=lambda ln: int(ln[1 : ln.index("]")])):
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def acceptance_lines():
    return ACCEPTANCE_LINES
