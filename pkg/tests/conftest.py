import time

import pytest

from atomroute import CompileConfig, OperatingPoint, compile_circuit
from helpers import ACCEPTANCE, METHOD_ROWS, suite_anneal, suite_circuits


@pytest.fixture(scope="session")
def suite():
    return suite_circuits()


@pytest.fixture(scope="session")
def suite_results(suite):
    """Every suite circuit compiled under every method row at the default operating point."""
    start = time.perf_counter()
    results = {}
    for method in METHOD_ROWS:
        cfg = CompileConfig.for_method(method)
        results[method] = [
            compile_circuit(c, cfg, OperatingPoint(), suite_anneal(i)) for i, c in enumerate(suite)
        ]
    results["_seconds"] = time.perf_counter() - start
    return results


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, line = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:>2}: {'PASS' if ok else 'FAIL'}  {line}")
