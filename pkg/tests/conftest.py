"""Shared strategies and the acceptance summary printed at the end of a run."""
from __future__ import annotations

import pytest
from hypothesis import strategies as st

from twoopt_lab.geometry import Point

_acceptance: list[tuple[str, str, str, list]] = []

coord = st.integers(min_value=-50, max_value=50)
points = st.builds(Point.of, coord, coord)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or rep.when != "call" and not (rep.when == "setup" and rep.failed):
        return
    label = marker.args[0]
    doc = (item.function.__doc__ or item.name).strip().splitlines()[0]
    status = "PASS" if rep.passed else "FAIL"
    _acceptance.append((label, status, doc, list(item.user_properties)))


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(label): acceptance criterion test")


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for label, status, doc, props in sorted(_acceptance, key=lambda r: int(r[0][2:])):
        extra = "".join(f"  [{k}={v}]" for k, v in props)
        terminalreporter.write_line(f"{label} {status}: {doc}{extra}")
