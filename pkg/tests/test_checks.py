import pytest

from hybridjac import InstanceSeed, formats, random_instance, run_property_suite
from hybridjac.checks import SUITES
from hybridjac.errors import BoundsInfeasible, UnknownSuite


def test_instance_determinism():
    a = random_instance(InstanceSeed(42, 4, 6, 2))
    b = random_instance(InstanceSeed(42, 4, 6, 2))
    da = formats.dump_canonical(formats.instance_to_json(a.mcrs))
    db = formats.dump_canonical(formats.instance_to_json(b.mcrs))
    assert da == db
    assert [d.coeffs for d in a.divisors] == [d.coeffs for d in b.divisors]


def test_singleton_bounds():
    inst = random_instance(InstanceSeed(0, 1, 0, 1))
    assert len(inst.mcrs.graph.vertices) == 1
    assert not inst.mcrs.graph.edges
    assert inst.mcrs.genus in (0, 1)


def test_infeasible_bounds():
    with pytest.raises(BoundsInfeasible):
        random_instance(InstanceSeed(0, 0, 0, 1))
    with pytest.raises(BoundsInfeasible):
        run_property_suite("ses", InstanceSeed(0, 5, 1, 1), 1)


def test_unknown_suite():
    with pytest.raises(UnknownSuite):
        run_property_suite("no-such-suite", InstanceSeed(0), 1)


@pytest.mark.parametrize("name", sorted(SUITES))
def test_suites_green(name):
    result = run_property_suite(name, InstanceSeed(7), 8)
    assert result.cases == 8
    assert result.failures == []
    assert result.ok


def test_suite_reports_are_replayable():
    r = run_property_suite("tree-theorem", InstanceSeed(3), 5)
    payload = r.to_json()
    assert payload["suite"] == "tree-theorem"
    assert payload["cases"] == 5
    assert payload["ok"] is True
