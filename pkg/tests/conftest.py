import sys


def pytest_terminal_summary(terminalreporter):
    """Print one verdict line per acceptance criterion after the run.

    The acceptance tests record their verdicts in ``GATE_LINES``; emitting
    them here keeps them visible under output capture.
    """
    for name, module in sys.modules.items():
        if name.rsplit(".", 1)[-1] == "test_acceptance":
            lines = getattr(module, "GATE_LINES", ())
            if lines:
                terminalreporter.section("acceptance gate")
                for line in lines:
                    terminalreporter.line(line)
            break
