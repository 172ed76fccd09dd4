import math

import pytest
from hypothesis import settings

from amoebakit.polynomial import LaurentPolynomial

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def poly(r, *items, bits=None):
    """``poly(2, ((0, 0), 1), ((1, 0), 1))``; exponents may be ints when r = 1."""
    fixed = [((e,) if isinstance(e, int) else e, c) for e, c in items]
    return LaurentPolynomial.from_terms(r, fixed, bits)


@pytest.fixture
def line():
    return poly(2, ((0, 0), 1), ((1, 0), 1), ((0, 1), 1))


@pytest.fixture
def trinomial():
    return poly(2, ((0, 0), 1), ((1, 1), 1), ((0, 2), 1))


LOG2 = math.log(2)
LOG3 = math.log(3)


# acceptance bookkeeping: criterion -> list of (part, ok, detail)
ACCEPTANCE: dict[int, list[tuple[str, bool, str]]] = {}


def record(criterion: int, part: str, ok: bool, detail: str = "") -> None:
    ACCEPTANCE.setdefault(criterion, []).append((part, bool(ok), detail))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[crit]
        status = "PASS" if all(ok for _, ok, _ in parts) else "FAIL"
        details = "; ".join(f"{p}: {'ok' if ok else 'FAILED'}{' (' + d + ')' if d else ''}" for p, ok, d in parts)
        terminalreporter.write_line(f"criterion {crit:2d}: {status} | {details}")
