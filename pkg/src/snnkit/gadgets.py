"""Reusable network fragments and resource-guard augmentations.

The fragment constructors build the standard small circuits: a continuously
firing neuron, a clock with period K, and the temporal encoding of a natural
number n < K as a fixed lag of n+1 steps behind the clock. Both clock-style
circuits are driven by a one-shot programmed neuron through a delay-1
synapse, so their output phase is offset by one step: the clock ticks at
t = 1, 1+K, 1+2K, ...

`attach_timer` and `attach_meter` bolt a hard step deadline / spike budget
onto an existing decision network. Each adds a single instrumentation
neuron (tagged as a gadget so its spikes are excluded from payload energy):

* timer: a one-shot programmed neuron whose delayed synapses inhibit accept
  and excite reject at step t_bound + 1, forcing a verdict by then. When the
  network has no reject neuron, a default one is created and designated.
* meter: an integrator E with threshold = reset = e_bound and leak 1 that
  counts every payload spike via weight-1 delay-1 synapses. Once the count
  reaches e_bound, E fires every step, inhibiting accept (cancelling any
  possible input sum) and exciting reject.

The meter's acceptance guarantee is conditional: the inhibition cancels
current inputs but not stored potential, so it only blocks acceptance when
the accept neuron's reset lies below its threshold.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .model import (
    InvalidNetworkError,
    Network,
    NeuronSpec,
    SpikeSchedule,
    SynapseSpec,
    one_shot,
    validate_network,
)


@dataclass(frozen=True)
class Fragment:
    """A network piece with a named output and optional open input ports.

    Fragments carry no accept/reject designation; `merge` composes them
    (and whole networks) into a runnable network.
    """

    neurons: tuple[NeuronSpec, ...] = ()
    programmed: Mapping[str, SpikeSchedule] = field(default_factory=dict)
    synapses: tuple[SynapseSpec, ...] = ()
    output: str = ""
    ports: tuple[str, ...] = ()

    def ids(self) -> frozenset[str]:
        return frozenset(n.id for n in self.neurons) | frozenset(self.programmed)

    def to_network(self) -> Network:
        return Network(
            neurons=self.neurons,
            programmed=dict(self.programmed),
            synapses=self.synapses,
        )


def fresh_id(base: str, taken: Iterable[str]) -> str:
    """Smallest non-colliding id of the form base, base_2, base_3, ..."""
    taken = set(taken)
    if base not in taken:
        return base
    k = 2
    while f"{base}_{k}" in taken:
        k += 1
    return f"{base}_{k}"


def make_constant_firer(prefix: str = "const") -> Fragment:
    """One-shot seed into a self-looping default neuron; output fires at every t >= 1."""
    seed = f"{prefix}_seed"
    out = f"{prefix}_out"
    return Fragment(
        neurons=(NeuronSpec(out),),
        programmed={seed: one_shot(0)},
        synapses=(SynapseSpec(seed, out), SynapseSpec(out, out)),
        output=out,
    )


def make_clock(period: int, prefix: str = "clk") -> Fragment:
    """Clock ticking at t = 1, 1+K, 1+2K, ... via a self-synapse of delay K."""
    if period < 1:
        raise ValueError("clock period must be >= 1")
    seed = f"{prefix}_seed"
    out = f"{prefix}_out"
    return Fragment(
        neurons=(NeuronSpec(out),),
        programmed={seed: one_shot(0)},
        synapses=(SynapseSpec(seed, out), SynapseSpec(out, out, delay=period)),
        output=out,
    )


def make_number(value: int, period: int, prefix: str = "num") -> Fragment:
    """Temporal encoding of value < period: output lags the clock by value+1 steps.

    Fire times are 2 + value + j*period; the (clock output, number output)
    pair encodes the number as the fixed lag.
    """
    if value < 0:
        raise ValueError("encoded value must be >= 0")
    if value >= period:
        raise ValueError("encoded value must be < the clock period")
    clock = make_clock(period, prefix=f"{prefix}_clk")
    out = f"{prefix}_out"
    return Fragment(
        neurons=clock.neurons + (NeuronSpec(out),),
        programmed=dict(clock.programmed),
        synapses=clock.synapses + (SynapseSpec(clock.output, out, delay=value + 1),),
        output=out,
    )


def _require_regular(network: Network, name: str, gadget: str) -> NeuronSpec:
    if network.is_programmed(name):
        raise ValueError(
            f"{gadget} needs a regular {name!r} verdict neuron; programmed neurons ignore inputs"
        )
    return network.neuron(name)


def attach_timer(network: Network, t_bound: int) -> Network:
    """Force a verdict by step t_bound + 1 (inclusive).

    Adds one gadget-tagged one-shot timer neuron. Its delayed synapse into
    accept carries weight -(sum of |w| into accept), cancelling any possible
    excitation; the synapse into reject carries the reject threshold plus
    the sum of |w| into reject, guaranteeing a reject spike. A missing
    reject neuron is created with default parameters and designated.
    """
    if t_bound < 0:
        raise ValueError("t_bound must be >= 0")
    if network.accept is None:
        raise ValueError("attach_timer needs a network with an accept neuron")
    _require_regular(network, network.accept, "attach_timer")
    taken = set(network.ids())
    timer = fresh_id("timer", taken)
    taken.add(timer)
    neurons = list(network.neurons)
    programmed = dict(network.programmed)
    synapses = list(network.synapses)
    tags = set(network.gadget_tags)
    programmed[timer] = one_shot(0)
    tags.add(timer)
    synapses.append(
        SynapseSpec(
            timer,
            network.accept,
            delay=t_bound + 1,
            weight=-network.incoming_weight_magnitude(network.accept),
        )
    )
    reject = network.reject
    if reject is None:
        reject = fresh_id("rej", taken)
        neurons.append(NeuronSpec(reject))
        tags.add(reject)
        kick = Fraction(1)  # default threshold, no other inputs
    else:
        spec = _require_regular(network, reject, "attach_timer")
        kick = spec.threshold + network.incoming_weight_magnitude(reject)
    synapses.append(SynapseSpec(timer, reject, delay=t_bound + 1, weight=kick))
    return Network(
        neurons=tuple(neurons),
        programmed=programmed,
        synapses=tuple(synapses),
        accept=network.accept,
        reject=reject,
        gadget_tags=frozenset(tags),
    )


def attach_meter(network: Network, e_bound: int) -> Network:
    """Cut off acceptance once payload spikes reach e_bound.

    Adds one gadget-tagged counter neuron fed (delay 1, weight 1) by every
    pre-existing payload neuron. Instrumentation neurons, including the
    counter itself and any timer, do not feed the counter: self-counting
    would corrupt the budget.
    """
    if e_bound < 1:
        raise ValueError("e_bound must be >= 1")
    if network.accept is None:
        raise ValueError("attach_meter needs a network with an accept neuron")
    _require_regular(network, network.accept, "attach_meter")
    if network.reject is not None:
        _require_regular(network, network.reject, "attach_meter")
    taken = set(network.ids())
    meter = fresh_id("meter", taken)
    bound = Fraction(e_bound)
    neurons = list(network.neurons)
    neurons.append(NeuronSpec(meter, threshold=bound, reset=bound, leak=Fraction(1)))
    synapses = list(network.synapses)
    for name in sorted(network.payload_ids()):
        synapses.append(SynapseSpec(name, meter))
    synapses.append(
        SynapseSpec(
            meter,
            network.accept,
            weight=-network.incoming_weight_magnitude(network.accept),
        )
    )
    if network.reject is not None:
        spec = network.neuron(network.reject)
        synapses.append(
            SynapseSpec(
                meter,
                network.reject,
                weight=spec.threshold + network.incoming_weight_magnitude(network.reject),
            )
        )
    return Network(
        neurons=tuple(neurons),
        programmed=dict(network.programmed),
        synapses=tuple(synapses),
        accept=network.accept,
        reject=network.reject,
        gadget_tags=network.gadget_tags | {meter},
    )


def merge(
    parts: Iterable[Union[Fragment, Network]],
    cross_synapses: Iterable[SynapseSpec] = (),
    accept: str | None = None,
    reject: str | None = None,
) -> Network:
    """Disjoint union of fragments/networks plus caller-supplied wiring.

    Part ids must be pairwise disjoint (fragments are namespaced by their
    construction prefix). Verdict designations come from the caller only;
    designations carried by merged networks are discarded. The result is
    validated, so dangling cross-synapse endpoints are rejected.
    """
    neurons: list[NeuronSpec] = []
    programmed: dict[str, SpikeSchedule] = {}
    synapses: list[SynapseSpec] = []
    tags: set[str] = set()
    seen: set[str] = set()
    for part in parts:
        part_ids = part.ids()
        overlap = seen & part_ids
        if overlap:
            raise ValueError(f"id collision between merged parts: {sorted(overlap)}")
        seen |= part_ids
        neurons.extend(part.neurons)
        programmed.update(part.programmed)
        synapses.extend(part.synapses)
        if isinstance(part, Network):
            tags |= part.gadget_tags
    synapses.extend(cross_synapses)
    network = Network(
        neurons=tuple(neurons),
        programmed=programmed,
        synapses=tuple(synapses),
        accept=accept,
        reject=reject,
        gadget_tags=frozenset(tags),
    )
    violations = validate_network(network)
    if violations:
        raise InvalidNetworkError(violations)
    return network
