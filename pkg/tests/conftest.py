import pytest
from hypothesis import strategies as st

from lmonoid import Letter, compose

letters = st.sampled_from(list(Letter))
words = st.lists(letters, max_size=5).map(tuple)


@pytest.fixture
def g3c2():
    # bottom < 1 < e < top, rows in rank order
    return compose((Letter.G3, Letter.C2))


_results = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None or rep.when != "call":
        return
    crit = mark.kwargs["criterion"]
    status = "PASS" if rep.passed and not hasattr(rep, "wasxfail") else "FAIL"
    note = mark.kwargs.get("note", "")
    _results.setdefault(crit, []).append((status, rep.duration, mark.kwargs["limit"], item.name, note))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(_results):
        rows = _results[crit]
        status = "PASS" if all(r[0] == "PASS" for r in rows) else "FAIL"
        took = sum(r[1] for r in rows)
        limit = rows[0][2]
        details = "; ".join(f"{name} {s}" + (f" ({note})" if note and s == "FAIL" else "") for s, _, _, name, note in rows)
        terminalreporter.write_line(f"criterion {crit}: {status}  {took:.2f}s (limit {limit}s)  {details}")
