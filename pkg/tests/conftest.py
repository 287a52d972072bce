import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(RESULTS):
        passed, detail = RESULTS[criterion]
        terminalreporter.write_line(f"criterion {criterion}: {'PASS' if passed else 'FAIL'} - {detail}")
