from itertools import product

import pytest

from onestep_ghz.state import Sign


def spellings(n):
    """Every (bits, sign) pair, complements included: 2**(n+1) of them."""
    return [(bits, sign) for bits in product((0, 1), repeat=n) for sign in (Sign.PLUS, Sign.MINUS)]


def spelling_id(pair):
    bits, sign = pair
    return "".join(map(str, bits)) + sign.symbol


_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or rep.when not in ("setup", "call"):
        return
    key = marker.args[0]
    if rep.failed or key not in _CRITERIA:
        _CRITERIA[key] = (marker.args[1], "FAIL" if rep.failed else "PASS")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_CRITERIA):
        title, verdict = _CRITERIA[key]
        terminalreporter.write_line(f"{verdict}  AC{key}  {title}")
