import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import pytest


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    # acceptance tests print their own PASS line; failures are announced here
    if call.when == "call" and rep.failed and "gate" in getattr(item, "fixturenames", ()):
        print(f"\n[FAIL] {item.name}", file=sys.__stdout__)
