import pytest

from rules import INSTANCES, RULES, check_rule


@pytest.mark.parametrize("rule", sorted(RULES))
def test_rule_is_sound_on_random_instances(rule):
    r = check_rule(rule)
    assert r.checked == INSTANCES
    assert r.failures == 0, f"{r.failures} of {r.checked} instances changed the map"


def test_generators_are_seeded():
    a = check_rule("LC", instances=20, seed=4)
    b = check_rule("LC", instances=20, seed=4)
    assert (a.checked, a.failures, a.skipped_zero) == (b.checked, b.failures, b.skipped_zero)
