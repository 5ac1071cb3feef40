"""Core model types for the spiking-network machine.

A network is a labeled digraph of neurons and synapses. Regular neurons carry
exact-rational dynamics parameters (threshold, reset, leak); programmed
neurons fire on a predetermined schedule and ignore their inputs entirely.
All numeric parameters are `fractions.Fraction` values, never floats, so
simulation is exact and bit-for-bit reproducible.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Mapping, Union

Rational = Fraction

DEFAULT_THRESHOLD = Fraction(1)
DEFAULT_RESET = Fraction(0)
DEFAULT_LEAK = Fraction(1)
DEFAULT_DELAY = 1
DEFAULT_WEIGHT = Fraction(1)

_ID_RE = re.compile(r"[A-Za-z0-9_]+\Z")
_RATIONAL_RE = re.compile(r"(-?\d+)(?:/(\d+))?\Z")


class InvalidNetworkError(ValueError):
    """A network violates one or more structural invariants."""

    def __init__(self, violations: Iterable[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


def is_valid_id(name: object) -> bool:
    """Identifiers are nonempty strings over letters, digits, underscore."""
    return isinstance(name, str) and bool(_ID_RE.match(name))


def parse_rational(text: str) -> Fraction:
    """Parse `p` or `p/q` (q > 0) into an exact fraction."""
    m = _RATIONAL_RE.match(text.strip())
    if not m:
        raise ValueError(f"malformed rational {text!r} (expected p or p/q)")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise ValueError(f"malformed rational {text!r} (zero denominator)")
    return Fraction(num, den)


def format_rational(value: Fraction) -> str:
    """Lowest-terms text form: `p` when the denominator is 1, else `p/q`."""
    return str(Fraction(value))


def _rat(value: object) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


@dataclass(frozen=True)
class NeuronSpec:
    """A regular neuron: threshold, reset voltage, and leakage constant."""

    id: str
    threshold: Fraction = DEFAULT_THRESHOLD
    reset: Fraction = DEFAULT_RESET
    leak: Fraction = DEFAULT_LEAK

    def __post_init__(self):
        object.__setattr__(self, "threshold", _rat(self.threshold))
        object.__setattr__(self, "reset", _rat(self.reset))
        object.__setattr__(self, "leak", _rat(self.leak))


@dataclass(frozen=True)
class SynapseSpec:
    """A directed connection with a whole-step delay and a signed weight."""

    pre: str
    post: str
    delay: int = DEFAULT_DELAY
    weight: Fraction = DEFAULT_WEIGHT

    def __post_init__(self):
        object.__setattr__(self, "weight", _rat(self.weight))

    def sort_key(self):
        return (self.pre, self.post, self.delay, self.weight)


@dataclass(frozen=True)
class ExplicitSchedule:
    """Finite spike train: a strictly increasing sequence of step numbers."""

    times: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "times", tuple(self.times))

    def fires_at(self, t: int) -> bool:
        return t in self.times

    def first_fire(self) -> int | None:
        return self.times[0] if self.times else None

    def next_fire(self, after: int) -> int | None:
        for t in self.times:
            if t > after:
                return t
        return None


@dataclass(frozen=True)
class PeriodicSchedule:
    """Infinite spike train firing at offset, offset+period, offset+2*period, ..."""

    offset: int
    period: int

    def fires_at(self, t: int) -> bool:
        return t >= self.offset and (t - self.offset) % self.period == 0

    def first_fire(self) -> int:
        return self.offset

    def next_fire(self, after: int) -> int:
        if after < self.offset:
            return self.offset
        return after + self.period - (after - self.offset) % self.period


SpikeSchedule = Union[ExplicitSchedule, PeriodicSchedule]


def one_shot(t: int) -> ExplicitSchedule:
    """Schedule with a single spike at step t."""
    return ExplicitSchedule((t,))


def as_schedule(value: object) -> SpikeSchedule:
    """Coerce an iterable of step numbers into an explicit schedule."""
    if isinstance(value, (ExplicitSchedule, PeriodicSchedule)):
        return value
    if isinstance(value, Iterable):
        return ExplicitSchedule(tuple(value))
    raise TypeError(f"cannot interpret {value!r} as a spike schedule")


@dataclass(frozen=True)
class Network:
    """Immutable network value: neurons, schedules, synapses, designations.

    Construction canonicalizes ordering (neurons by id, synapses by
    (pre, post, delay, weight)) so that structurally equal networks compare
    equal and serialize identically. `gadget_tags` marks instrumentation
    neurons whose spikes are excluded from payload energy accounting.
    """

    neurons: tuple[NeuronSpec, ...] = ()
    programmed: Mapping[str, SpikeSchedule] = field(default_factory=dict)
    synapses: tuple[SynapseSpec, ...] = ()
    accept: str | None = None
    reject: str | None = None
    gadget_tags: frozenset[str] = frozenset()

    def __post_init__(self):
        neurons = tuple(sorted(self.neurons, key=lambda n: n.id))
        programmed = {k: self.programmed[k] for k in sorted(self.programmed)}
        synapses = tuple(sorted(self.synapses, key=SynapseSpec.sort_key))
        object.__setattr__(self, "neurons", neurons)
        object.__setattr__(self, "programmed", programmed)
        object.__setattr__(self, "synapses", synapses)
        object.__setattr__(self, "gadget_tags", frozenset(self.gadget_tags))

    def ids(self) -> frozenset[str]:
        return frozenset(n.id for n in self.neurons) | frozenset(self.programmed)

    def is_programmed(self, name: str) -> bool:
        return name in self.programmed

    def neuron(self, name: str) -> NeuronSpec:
        for spec in self.neurons:
            if spec.id == name:
                return spec
        raise KeyError(name)

    def payload_ids(self) -> frozenset[str]:
        """Ids of non-instrumentation neurons."""
        return self.ids() - self.gadget_tags

    def size(self) -> int:
        """Network size = neuron count (synapses are reported separately)."""
        return len(self.neurons) + len(self.programmed)

    def incoming_weight_magnitude(self, post: str) -> Fraction:
        """Sum of |weight| over all synapses into `post`."""
        total = Fraction(0)
        for syn in self.synapses:
            if syn.post == post:
                total += abs(syn.weight)
        return total

    def bind_schedules(self, bindings: Mapping[str, object]) -> "Network":
        """Replace the schedules of existing programmed neurons."""
        programmed = dict(self.programmed)
        for name, sched in bindings.items():
            if name not in programmed:
                raise KeyError(f"no programmed neuron {name!r} to bind")
            programmed[name] = as_schedule(sched)
        return replace(self, programmed=programmed)


def _check_schedule(name: str, sched: object, out: list[str]) -> None:
    if isinstance(sched, ExplicitSchedule):
        times = sched.times
        for t in times:
            if not isinstance(t, int) or t < 0:
                out.append(f"input {name}: schedule times must be integers >= 0")
                return
        if any(a >= b for a, b in zip(times, times[1:])):
            out.append(f"input {name}: schedule times must be strictly increasing")
    elif isinstance(sched, PeriodicSchedule):
        if not isinstance(sched.offset, int) or sched.offset < 0:
            out.append(f"input {name}: offset must be an integer >= 0")
        if not isinstance(sched.period, int) or sched.period < 1:
            out.append(f"input {name}: period must be an integer >= 1")
    else:
        out.append(f"input {name}: not a spike schedule")


def validate_network(network: Network) -> list[str]:
    """Check every structural invariant; return one message per violation.

    An empty list means the network is well-formed. Messages name the
    offending element so violations can be traced back.
    """
    out: list[str] = []
    seen: set[str] = set()
    for spec in network.neurons:
        if not is_valid_id(spec.id):
            out.append(f"invalid neuron id {spec.id!r}")
            continue
        if spec.id in seen:
            out.append(f"duplicate id {spec.id!r}")
        seen.add(spec.id)
        if spec.threshold < 0:
            out.append(f"neuron {spec.id}: threshold must be >= 0")
        if spec.reset < 0:
            out.append(f"neuron {spec.id}: reset must be >= 0")
        if not 0 <= spec.leak <= 1:
            out.append(f"neuron {spec.id}: leak must be in [0, 1]")
    for name, sched in network.programmed.items():
        if not is_valid_id(name):
            out.append(f"invalid neuron id {name!r}")
            continue
        if name in seen:
            out.append(f"duplicate id {name!r}")
        seen.add(name)
        _check_schedule(name, sched, out)
    for syn in network.synapses:
        label = f"synapse {syn.pre}->{syn.post}"
        if syn.pre not in seen:
            out.append(f"{label}: unknown pre neuron {syn.pre!r}")
        if syn.post not in seen:
            out.append(f"{label}: unknown post neuron {syn.post!r}")
        if not isinstance(syn.delay, int) or syn.delay < 1:
            out.append(f"{label}: delay must be >= 1")
    for role, name in (("accept", network.accept), ("reject", network.reject)):
        if name is not None and name not in seen:
            out.append(f"{role} names unknown neuron {name!r}")
    if network.accept is not None and network.accept == network.reject:
        out.append(f"accept and reject are both {network.accept!r}")
    for name in sorted(network.gadget_tags):
        if name not in seen:
            out.append(f"gadget tag names unknown neuron {name!r}")
    return out


def check_network(network: Network) -> Network:
    """Raise InvalidNetworkError unless the network is well-formed."""
    violations = validate_network(network)
    if violations:
        raise InvalidNetworkError(violations)
    return network


class NetworkBuilder:
    """Incremental network construction with duplicate-id detection.

    `build()` validates the assembled network and raises on any violation,
    so networks produced through the builder are always well-formed.
    """

    def __init__(self):
        self._neurons: list[NeuronSpec] = []
        self._programmed: dict[str, SpikeSchedule] = {}
        self._synapses: list[SynapseSpec] = []
        self._accept: str | None = None
        self._reject: str | None = None
        self._gadget_tags: set[str] = set()

    def has(self, name: str) -> bool:
        return name in self._programmed or any(n.id == name for n in self._neurons)

    def add_neuron(
        self,
        name: str,
        threshold: object = DEFAULT_THRESHOLD,
        reset: object = DEFAULT_RESET,
        leak: object = DEFAULT_LEAK,
    ) -> str:
        if self.has(name):
            raise ValueError(f"duplicate id {name!r}")
        self._neurons.append(NeuronSpec(name, _rat(threshold), _rat(reset), _rat(leak)))
        return name

    def add_input(self, name: str, schedule: object) -> str:
        if self.has(name):
            raise ValueError(f"duplicate id {name!r}")
        self._programmed[name] = as_schedule(schedule)
        return name

    def add_synapse(
        self,
        pre: str,
        post: str,
        delay: int = DEFAULT_DELAY,
        weight: object = DEFAULT_WEIGHT,
    ) -> None:
        self._synapses.append(SynapseSpec(pre, post, delay, _rat(weight)))

    def set_accept(self, name: str) -> None:
        self._accept = name

    def set_reject(self, name: str) -> None:
        self._reject = name

    def tag_gadget(self, name: str) -> None:
        self._gadget_tags.add(name)

    def build(self, validate: bool = True) -> Network:
        network = Network(
            neurons=tuple(self._neurons),
            programmed=dict(self._programmed),
            synapses=tuple(self._synapses),
            accept=self._accept,
            reject=self._reject,
            gadget_tags=frozenset(self._gadget_tags),
        )
        if validate:
            check_network(network)
        return network
