"""Per-criterion pass/fail lines, collected during the acceptance run."""

RESULTS = {}
CRITERIA = 10


def record(number: int, ok: bool, detail: str) -> None:
    RESULTS[number] = (bool(ok), detail)
    print(line(number))
    assert ok, line(number)


def line(number: int) -> str:
    if number not in RESULTS:
        return f"criterion {number:2d}: FAIL (did not finish)"
    ok, detail = RESULTS[number]
    return f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
