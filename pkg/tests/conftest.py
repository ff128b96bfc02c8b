def pytest_terminal_summary(terminalreporter):
    from test_acceptance import SUMMARY
    if SUMMARY:
        terminalreporter.section("acceptance criteria")
        for line in sorted(SUMMARY, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
