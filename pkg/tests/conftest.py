import re


def pytest_runtest_logreport(report):
    """One visible PASS/FAIL line per numbered acceptance criterion."""
    if report.when != "call":
        return
    match = re.search(r"::test_criterion_(\d+)_(\w+)", report.nodeid)
    if not match:
        return
    number, slug = match.group(1), match.group(2).replace("_", " ")
    status = "PASS" if report.passed else "FAIL"
    print(f"\n{status} criterion {number}: {slug}", flush=True)
