from dataclasses import replace
from fractions import Fraction

import pytest

from snnkit.model import (
    ExplicitSchedule,
    InvalidNetworkError,
    Network,
    NetworkBuilder,
    NeuronSpec,
    PeriodicSchedule,
    SynapseSpec,
    check_network,
    format_rational,
    is_valid_id,
    one_shot,
    parse_rational,
    validate_network,
)


def test_parse_rational_forms():
    assert parse_rational("3") == Fraction(3)
    assert parse_rational("-7/2") == Fraction(-7, 2)
    assert parse_rational("2/4") == Fraction(1, 2)
    assert parse_rational(" 5/10 ") == Fraction(1, 2)


@pytest.mark.parametrize("bad", ["", "1.5", "1/0", "a", "1/-2", "--1", "1 /2"])
def test_parse_rational_rejects(bad):
    with pytest.raises(ValueError):
        parse_rational(bad)


def test_format_rational_lowest_terms():
    assert format_rational(Fraction(2, 4)) == "1/2"
    assert format_rational(Fraction(-3)) == "-3"
    assert format_rational(Fraction(0)) == "0"


def test_identifiers():
    assert is_valid_id("a_1")
    assert is_valid_id("123")
    assert not is_valid_id("")
    assert not is_valid_id("a-b")
    assert not is_valid_id("a b")


def test_neuron_defaults():
    spec = NeuronSpec("n")
    assert spec.threshold == 1
    assert spec.reset == 0
    assert spec.leak == 1


def test_schedules():
    explicit = ExplicitSchedule((1, 4, 9))
    assert [t for t in range(10) if explicit.fires_at(t)] == [1, 4, 9]
    periodic = PeriodicSchedule(offset=2, period=3)
    assert [t for t in range(12) if periodic.fires_at(t)] == [2, 5, 8, 11]
    assert periodic.next_fire(0) == 2
    assert periodic.next_fire(2) == 5
    assert one_shot(7) == ExplicitSchedule((7,))


def _valid_network():
    return Network(
        neurons=(NeuronSpec("a"), NeuronSpec("b", threshold=Fraction(3, 2))),
        programmed={"p": one_shot(0)},
        synapses=(SynapseSpec("p", "a"), SynapseSpec("a", "b", delay=2, weight=Fraction(-1, 3))),
        accept="a",
        reject="b",
    )


def test_validate_clean_network():
    assert validate_network(_valid_network()) == []


def test_network_canonical_order():
    net = _valid_network()
    shuffled = Network(
        neurons=tuple(reversed(net.neurons)),
        programmed=dict(net.programmed),
        synapses=tuple(reversed(net.synapses)),
        accept=net.accept,
        reject=net.reject,
    )
    assert shuffled == net


@pytest.mark.parametrize(
    "mutate, needle",
    [
        (lambda n: replace(n, neurons=(NeuronSpec("a", threshold=Fraction(-1)),) + n.neurons[1:]),
         "threshold must be >= 0"),
        (lambda n: replace(n, neurons=(NeuronSpec("a", reset=Fraction(-1, 2)),) + n.neurons[1:]),
         "reset must be >= 0"),
        (lambda n: replace(n, neurons=(NeuronSpec("a", leak=Fraction(3, 2)),) + n.neurons[1:]),
         "leak must be in [0, 1]"),
        (lambda n: replace(n, neurons=n.neurons + (NeuronSpec("a"),)), "duplicate id 'a'"),
        (lambda n: replace(n, programmed={"a": one_shot(0), "p": one_shot(0)}), "duplicate id 'a'"),
        (lambda n: replace(n, synapses=n.synapses + (SynapseSpec("a", "x"),)),
         "unknown post neuron 'x'"),
        (lambda n: replace(n, synapses=n.synapses + (SynapseSpec("x", "a"),)),
         "unknown pre neuron 'x'"),
        (lambda n: replace(n, synapses=n.synapses + (SynapseSpec("a", "b", delay=0),)),
         "delay must be >= 1"),
        (lambda n: replace(n, programmed={"p": ExplicitSchedule((3, 1))}),
         "strictly increasing"),
        (lambda n: replace(n, programmed={"p": ExplicitSchedule((-1, 2))}), "integers >= 0"),
        (lambda n: replace(n, programmed={"p": PeriodicSchedule(0, 0)}), "period must be"),
        (lambda n: replace(n, programmed={"p": PeriodicSchedule(-2, 2)}), "offset must be"),
        (lambda n: replace(n, accept="zzz"), "accept names unknown neuron 'zzz'"),
        (lambda n: replace(n, reject="a"), "accept and reject are both 'a'"),
        (lambda n: replace(n, gadget_tags=frozenset({"ghost"})), "gadget tag names unknown"),
    ],
)
def test_validation_detects_each_invariant(mutate, needle):
    violations = validate_network(mutate(_valid_network()))
    assert len(violations) >= 1
    assert any(needle in v for v in violations), violations


def test_check_network_raises_with_all_violations():
    bad = Network(
        neurons=(NeuronSpec("a", threshold=Fraction(-1)),),
        synapses=(SynapseSpec("a", "x", delay=0),),
    )
    with pytest.raises(InvalidNetworkError) as excinfo:
        check_network(bad)
    messages = excinfo.value.violations
    assert any("threshold" in m for m in messages)
    assert any("unknown post" in m for m in messages)
    assert any("delay" in m for m in messages)


def test_builder_duplicate_rejected():
    builder = NetworkBuilder()
    builder.add_neuron("n")
    with pytest.raises(ValueError, match="duplicate"):
        builder.add_neuron("n")
    with pytest.raises(ValueError, match="duplicate"):
        builder.add_input("n", [0])


def test_builder_builds_valid_network():
    builder = NetworkBuilder()
    builder.add_neuron("out", threshold="1/2")
    builder.add_input("inp", [0, 2, 4])
    builder.add_synapse("inp", "out", weight="2/4")
    builder.set_accept("out")
    net = builder.build()
    assert net.neuron("out").threshold == Fraction(1, 2)
    assert net.synapses[0].weight == Fraction(1, 2)
    assert net.accept == "out"
    assert net.size() == 2


def test_bind_schedules():
    builder = NetworkBuilder()
    builder.add_neuron("out")
    builder.add_input("port", [])
    builder.add_synapse("port", "out")
    net = builder.build()
    bound = net.bind_schedules({"port": [3, 5]})
    assert bound.programmed["port"] == ExplicitSchedule((3, 5))
    with pytest.raises(KeyError):
        net.bind_schedules({"nope": [1]})


def test_incoming_weight_magnitude():
    net = _valid_network()
    assert net.incoming_weight_magnitude("b") == Fraction(1, 3)
    assert net.incoming_weight_magnitude("a") == 1
