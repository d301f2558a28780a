"""Print one summary line per acceptance criterion at the end of the run.

Parametrized cases roll up into their owning criterion: the criterion
passes only when every case passed.
"""

from __future__ import annotations

import pytest

_results: dict[str, tuple[str, bool]] = {}


def _criterion_label(nodeid: str) -> str | None:
    module = nodeid.split("::", 1)[0].rsplit("/", 1)[-1]
    if module == "test_acceptance.py":
        return "ACCEPTANCE"
    if module == "test_adapter_acceptance.py":
        return "SECONDARY"
    return None


def pytest_runtest_logreport(report):
    label = _criterion_label(report.nodeid)
    if label is None or report.when != "call":
        return
    criterion = report.nodeid.split("::", 1)[1].split("[", 1)[0]
    key = f"{label}:{criterion}"
    prev_ok = _results.get(key, (label, True))[1]
    _results[key] = (label, prev_ok and report.outcome == "passed")


@pytest.hookimpl(trylast=True)
def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _results or getattr(config, "_acceptance_summary_done", False):
        return
    config._acceptance_summary_done = True
    terminalreporter.section("acceptance criteria")
    for key, (label, ok) in _results.items():
        criterion = key.split(":", 1)[1]
        terminalreporter.write_line(
            f"[{label}] {criterion}: {'PASS' if ok else 'FAIL'}")
