from __future__ import annotations

from collections import OrderedDict

CRITERIA = OrderedDict(
    [
        (1, "Hall numbers: submodule, sequence-orbit and Riedtmann routes agree (total <= 5)"),
        (2, "D~4 family g = q^(m-1)(q-1)"),
        (3, "quantum Serre relations vanish"),
        (4, "Hopf suite on A2 and Kronecker, both antipode routes agree"),
        (5, "dim L_delta = 1 (A~2,1) and 3 (D~4), direct-sum rank identity"),
        (6, "L_delta is central against singular generators of degree <= 2 delta"),
        (7, "E_{n delta} identities (a), (b), (c) for n, n' in {1, 2}"),
        (8, "PBW elements of every degree <= 2 delta are a basis of the singular piece"),
        (9, "Hall polynomials verify at held-out primes, slot independence"),
        (10, "Euler identity, tame vanishing lemmas, mass conservation, split regular factor"),
        (11, "ext order implies hom order on A~2,1 up to total 5"),
    ]
)

_results: dict[int, list[str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            item.user_properties.append(("criterion", m.args[0]))


def pytest_runtest_logreport(report):
    crit = dict(report.user_properties).get("criterion")
    if crit is None:
        return
    if report.when == "call" or report.outcome != "passed":
        if hasattr(report, "wasxfail"):
            outcome = "xfail"
        else:
            outcome = report.outcome
        _results.setdefault(crit, []).append(outcome)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for n, desc in CRITERIA.items():
        outs = _results.get(n)
        if not outs:
            continue
        status = "PASS" if all(o == "passed" for o in outs) else "FAIL"
        extra = ""
        if "xfail" in outs:
            extra = f" ({outs.count('xfail')} known failing case(s))"
        terminalreporter.write_line(f"CRITERION {n}: {status} {desc}{extra}")
