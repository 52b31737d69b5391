import re
import time

TITLES = {
    1: "FP coproduct universal property",
    2: "information-loss axiom suite",
    3: "PS* copair bookkeeping",
    4: "summing-functor law",
    5: "cubical relations and Z/2 nerve sizes",
    6: "Euler multiplicativity on smashes",
    7: "quantum channel round trip",
    8: "annulus and diagonal consistency",
    9: "gap locus",
    10: "Kronecker-sum closure",
    11: "oracle equivalence",
    12: "CLI determinism and runtime",
}

_results = {}
_started = [0.0]
SUITE_BUDGET = 120.0


def pytest_sessionstart(session):
    _started[0] = time.perf_counter()


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)", report.nodeid)
    if not m:
        return
    n = int(m.group(1))
    if report.when == "call" or report.outcome != "passed":
        _results[n] = _results.get(n, True) and report.outcome == "passed"


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    elapsed = time.perf_counter() - _started[0]
    if 12 in _results:
        _results[12] = _results[12] and elapsed < SUITE_BUDGET
    terminalreporter.section("acceptance criteria")
    for n, ok in sorted(_results.items()):
        terminalreporter.write_line(f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  {TITLES.get(n, '')}")
    terminalreporter.write_line(f"suite runtime {elapsed:.1f} s (budget {SUITE_BUDGET:.0f} s)")
