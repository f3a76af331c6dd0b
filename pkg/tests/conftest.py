"""Shared pytest hooks: collect acceptance lines and echo them at the end."""

_acceptance_lines = []


def record_acceptance_line(line):
    """Register one criterion outcome for the end-of-run summary."""
    _acceptance_lines.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_lines:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for line in _acceptance_lines:
        terminalreporter.write_line(line)
