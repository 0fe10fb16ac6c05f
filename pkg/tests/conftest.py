import re

import pytest


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    # the acceptance tests print their own PASS lines; mirror failures so the
    # suite always emits one pass/fail line per criterion
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call" and rep.failed and "test_acceptance" in item.nodeid:
        m = re.match(r"test_criterion_(\d+)", item.name)
        if m:
            print("\nFAIL criterion %2d: %s" % (int(m.group(1)), item.name))
