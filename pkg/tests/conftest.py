import numpy as np
import pytest

from eg2order import _backend, core, orders, systems


@pytest.fixture(params=_backend.available())
def backend(request, monkeypatch):
    """Run a test once per importable kernel backend."""
    impl = _backend.get(request.param)
    monkeypatch.setattr(core, "kernels", impl)
    monkeypatch.setattr(systems, "kernels", impl)
    monkeypatch.setattr(orders, "kernels", impl)
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(n, label): acceptance criterion n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None or report.when != "call":
        return
    n, label = mark.args
    reason = ""
    if report.failed:
        text = str(call.excinfo.value) if call.excinfo else ""
        reason = text.strip().splitlines()[0] if text.strip() else call.excinfo.typename
    _ACCEPTANCE[n] = (label, report.passed, reason)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        label, ok, reason = _ACCEPTANCE[n]
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {label}"
        if reason:
            line += f"  -- {reason}"
        terminalreporter.write_line(line)
