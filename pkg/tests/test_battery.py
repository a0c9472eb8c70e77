import pytest

from contract_lab.battery import INVARIANTS, battery, low_discrepancy


def test_battery_size():
    assert len(INVARIANTS) >= 25
    assert len(battery()) >= 10


def test_low_discrepancy_is_deterministic():
    a, b = low_discrepancy(50, 0.2, 0.9), low_discrepancy(50, 0.2, 0.9)
    assert (a == b).all() and a.min() >= 0.2 and a.max() <= 0.9


@pytest.mark.parametrize("inv", INVARIANTS, ids=lambda f: f.__name__.removeprefix("inv_"))
def test_invariant(inv):
    check = inv()
    assert check.passed, f"{check.name}: margin {check.margin!r} at {check.detail}"


def test_invariant_names_unique():
    names = [inv().name for inv in INVARIANTS]
    assert len(names) == len(set(names))
