import re

from hypothesis import HealthCheck, settings

settings.register_profile(
    "workbench",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("workbench")

_CRITERION = re.compile(r"test_c(\d\d)_")
_results: dict[int, dict] = {}

TITLES = {
    1: "boundary calculus on 500 instances",
    2: "Følner numbers 4/n and 48/17 against the oracle",
    3: "doubling threshold in Z² and free-group certificates",
    4: "Følner enlargement on 100 instances",
    5: "Schröder-Bernstein partitions and budget exhaustion",
    6: "graph classifier table",
    7: "Leavitt arithmetic: CK identities, confluence, Laurent ratios",
    8: "B3c Følner witnesses on the (eps, N) grid",
    9: "translation-algebra commutator identity and ratio bounds",
    10: "L(1,2) relations from the free-group decomposition",
    11: "properly infinite witness checker",
    12: "dimension counts over GF(2), GF(7) and Q",
}


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m or "test_acceptance" not in report.nodeid:
        return
    if report.when != "call" and not report.failed:
        return
    n = int(m.group(1))
    entry = _results.setdefault(n, {"ok": True, "tests": 0, "failed": []})
    if report.when == "call":
        entry["tests"] += 1
    if report.failed:
        entry["ok"] = False
        entry["failed"].append(report.nodeid.split("::")[-1])


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_results):
        entry = _results[n]
        status = "PASS" if entry["ok"] else "FAIL"
        line = f"ACCEPTANCE {n:02d} {status}: {TITLES.get(n, '')} ({entry['tests']} tests)"
        if entry["failed"]:
            line += " failed: " + ", ".join(entry["failed"])
        terminalreporter.write_line(line)
