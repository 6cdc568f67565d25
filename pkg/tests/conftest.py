import contextlib

VERDICTS: dict[int, str] = {}


@contextlib.contextmanager
def criterion(n: int, label: str):
    """Record PASS/FAIL for one acceptance criterion; failures still propagate."""
    info: list[str] = []
    try:
        yield info
    except BaseException as exc:
        VERDICTS[n] = f"FAIL  criterion {n}: {label} ({type(exc).__name__}: {exc})"
        raise
    extra = f" [{'; '.join(info)}]" if info else ""
    VERDICTS[n] = f"PASS  criterion {n}: {label}{extra}"


def pytest_terminal_summary(terminalreporter):
    if not VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(VERDICTS):
        terminalreporter.write_line(VERDICTS[n])
