"""Shared test plumbing: the acceptance-criteria summary block."""

_CRITERIA: dict[int, tuple[str, bool, str]] = {}


def record_criterion(num: int, desc: str, ok: bool, detail: str = "") -> None:
    _CRITERIA[num] = (desc, bool(ok), detail)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        desc, ok, detail = _CRITERIA[num]
        status = "PASS" if ok else "FAIL"
        line = f"criterion {num:2d} [{status}] {desc}"
        if detail:
            line += f" — {detail}"
        terminalreporter.write_line(line)
