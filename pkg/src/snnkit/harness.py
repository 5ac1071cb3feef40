"""Resource-bounded generation harness and the network-halting oracle.

A problem is decided in this model by a metered generator that maps each
instance to a network, which then decides the instance within declared
TIME/SPACE/ENERGY budgets. The harness meters generation (counting
elementary builder operations as a stand-in for machine time), runs the
network, and compares every measured resource against its declared bound.

`network_halting_oracle` answers the promise question "does this network,
promised to stay within the given resource caps, accept?". The caller is
never charged more than the caps imply: simulation is cut off at the time
and energy caps, and a run that leaves the promised envelope (timeout,
ambiguous verdict, or any measured resource above its cap) yields the
distinguished outcome "promise_violated" instead of an arbitrary bit.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import floor
from random import Random
from typing import Any, Callable, Iterable, Iterator, Mapping

from . import arraysearch
from .arraysearch import ArrayInstance, contains_target, payload_energy_bound
from .engine import (
    ACCEPT,
    AMBIGUOUS,
    REJECT,
    TIMEOUT,
    ResourceReport,
    RunLimits,
    run,
)
from .gadgets import attach_meter, attach_timer
from .model import Network, NetworkBuilder

ACCEPTED = "accepted"
REJECTED = "rejected"
PROMISE_VIOLATED = "promise_violated"

_BOUND_KINDS = ("constant", "linear", "polynomial", "table")


@dataclass(frozen=True)
class ResourceBound:
    """A declared bound on one resource as a function of input size.

    Coefficients are ascending-power polynomial coefficients for the
    constant/linear/polynomial kinds, or the table entries for sizes
    0, 1, 2, ... (extended by the last entry) for the table kind. All
    kinds are monotone nondecreasing over natural sizes by construction.
    """

    applies_to: str
    kind: str
    coefficients: tuple[Fraction, ...]

    def __post_init__(self):
        if self.applies_to not in ("time", "space", "energy"):
            raise ValueError(f"unknown resource {self.applies_to!r}")
        if self.kind not in _BOUND_KINDS:
            raise ValueError(f"unknown bound kind {self.kind!r}")
        coefficients = tuple(Fraction(c) for c in self.coefficients)
        object.__setattr__(self, "coefficients", coefficients)
        if not coefficients:
            raise ValueError("bound needs at least one coefficient")
        if self.kind == "table":
            if any(b < a for a, b in zip(coefficients, coefficients[1:])):
                raise ValueError("table bound must be nondecreasing")
        elif any(c < 0 for c in coefficients):
            raise ValueError("bound coefficients must be >= 0")

    @classmethod
    def constant(cls, value, applies_to: str) -> "ResourceBound":
        return cls(applies_to, "constant", (Fraction(value),))

    @classmethod
    def linear(cls, slope, intercept, applies_to: str) -> "ResourceBound":
        return cls(applies_to, "linear", (Fraction(intercept), Fraction(slope)))

    @classmethod
    def polynomial(cls, coefficients, applies_to: str) -> "ResourceBound":
        return cls(applies_to, "polynomial", tuple(Fraction(c) for c in coefficients))

    @classmethod
    def table(cls, values, applies_to: str) -> "ResourceBound":
        return cls(applies_to, "table", tuple(Fraction(v) for v in values))

    def evaluate(self, n: int) -> Fraction:
        if n < 0:
            raise ValueError("input size must be >= 0")
        if self.kind == "table":
            return self.coefficients[min(n, len(self.coefficients) - 1)]
        total = Fraction(0)
        power = Fraction(1)
        for c in self.coefficients:
            total += c * power
            power *= n
        return total


@dataclass(frozen=True)
class ResourceBounds:
    """Declared TIME/SPACE/ENERGY bound functions."""

    time: ResourceBound
    space: ResourceBound
    energy: ResourceBound

    def caps(self, n: int) -> "ResourceCaps":
        return ResourceCaps(
            time=floor(self.time.evaluate(n)),
            space=floor(self.space.evaluate(n)),
            energy=floor(self.energy.evaluate(n)),
        )


@dataclass(frozen=True)
class ResourceCaps:
    """Concrete caps: bound functions evaluated at one input size."""

    time: int
    space: int
    energy: int


@dataclass(frozen=True)
class GeneratorCost:
    """Elementary construction effort: one unit per neuron, synapse, or scheduled spike."""

    builder_ops: int
    peak_neurons: int
    peak_synapses: int


@dataclass(frozen=True)
class OracleAnswer:
    outcome: str
    report: ResourceReport


@dataclass(frozen=True)
class Instrument:
    """Which resource guards to build into the generated network."""

    timer: bool = False
    meter: bool = False


@dataclass(frozen=True)
class Decision:
    verdict: str
    cost: GeneratorCost
    report: ResourceReport
    size: int
    caps: ResourceCaps
    violations: tuple[str, ...]


class CountingBuilder(NetworkBuilder):
    """NetworkBuilder that meters elementary construction operations."""

    def __init__(self):
        super().__init__()
        self.ops = 0
        self.neurons_added = 0
        self.synapses_added = 0

    def add_neuron(self, name, threshold=1, reset=0, leak=1):
        self.ops += 1
        self.neurons_added += 1
        return super().add_neuron(name, threshold, reset, leak)

    def add_input(self, name, schedule):
        self.ops += 1
        self.neurons_added += 1
        result = super().add_input(name, schedule)
        sched = self._programmed[name]
        self.note_scheduled_spikes(
            len(sched.times) if hasattr(sched, "times") else 1
        )
        return result

    def add_synapse(self, pre, post, delay=1, weight=1):
        self.ops += 1
        self.synapses_added += 1
        super().add_synapse(pre, post, delay, weight)

    def note_scheduled_spikes(self, count: int) -> None:
        self.ops += count

    def cost(self) -> GeneratorCost:
        return GeneratorCost(
            builder_ops=self.ops,
            peak_neurons=self.neurons_added,
            peak_synapses=self.synapses_added,
        )


@dataclass(frozen=True)
class CompilerEntry:
    """A registered instance-to-network compiler with its reference oracle."""

    name: str
    size_of: Callable[[Any], int]
    build: Callable[[Any, NetworkBuilder], Network]
    reference: Callable[[Any], bool]
    step_limit: Callable[[Any], int]
    enumerate_domain: Callable[["Domain"], Iterator[Any]] | None = None
    sample: Callable[[Random, "Domain"], Any] | None = None
    payload_bound: Callable[[Any], int] | None = None


_REGISTRY: dict[str, CompilerEntry] = {}


def register_compiler(entry: CompilerEntry) -> None:
    _REGISTRY[entry.name] = entry


def get_compiler(name: str) -> CompilerEntry:
    try:
        return _REGISTRY[name]
    except KeyError:
        raise KeyError(f"unknown compiler {name!r} (have {sorted(_REGISTRY)})") from None


def registered_compilers() -> tuple[str, ...]:
    return tuple(sorted(_REGISTRY))


def generate_and_decide(
    compiler: str,
    instance: Any,
    bounds: ResourceBounds,
    instrument: Instrument = Instrument(),
) -> Decision:
    """Metered build, optional timer/meter augmentation, run, bound check.

    Declared bounds are compared against the payload network's measurements:
    payload energy (spikes excluding instrumentation), payload neuron count,
    and executed steps. Violations are reported, never fatal; the timer, when
    requested, turns a time overrun into an actual reject verdict.
    """
    entry = get_compiler(compiler)
    n = entry.size_of(instance)
    caps = bounds.caps(n)
    counting = CountingBuilder()
    network = entry.build(instance, counting)
    cost = counting.cost()
    payload_neurons = network.size()
    if instrument.timer:
        network = attach_timer(network, max(caps.time - 1, 0))
    if instrument.meter:
        network = attach_meter(network, max(caps.energy, 1))
    report = run(
        network,
        RunLimits(max_steps=max(caps.time, 1) + 2),
        validate=False,
    ).report
    violations = []
    if report.time > caps.time:
        violations.append("time")
    if payload_neurons > caps.space:
        violations.append("space")
    if report.energy_payload > caps.energy:
        violations.append("energy")
    return Decision(
        verdict=report.verdict,
        cost=cost,
        report=report,
        size=n,
        caps=caps,
        violations=tuple(violations),
    )


def network_halting_oracle(
    network: Network,
    caps: ResourceCaps,
    inputs: Mapping[str, object] | None = None,
) -> OracleAnswer:
    """Decide whether a promise-bounded network accepts.

    Simulation is capped at the declared time and energy, so the caller's
    cost never exceeds the bounds even when the promise is broken. The
    outcome is "accepted"/"rejected" when the run stays inside the caps and
    reaches an unambiguous verdict, "promise_violated" otherwise.
    """
    if inputs:
        network = network.bind_schedules(inputs)
    neurons = network.size()
    synapses = len(network.synapses)
    if caps.time < 1:
        report = ResourceReport(TIMEOUT, 0, 0, 0, neurons, synapses)
        return OracleAnswer(PROMISE_VIOLATED, report)
    report = run(
        network,
        RunLimits(max_steps=caps.time, max_total_spikes=caps.energy),
    ).report
    violated = (
        report.verdict in (TIMEOUT, AMBIGUOUS)
        or neurons > caps.space
        or report.energy > caps.energy
    )
    if violated:
        return OracleAnswer(PROMISE_VIOLATED, report)
    return OracleAnswer(ACCEPTED if report.verdict == ACCEPT else REJECTED, report)


@dataclass(frozen=True)
class Domain:
    """Instance domain for equivalence sweeps."""

    max_len: int
    max_val: int
    random_instances: int = 0
    random_max_len: int = 16
    random_max_val: int = 64


@dataclass(frozen=True)
class Mismatch:
    instance: Any
    network_verdict: str
    reference: bool


@dataclass(frozen=True)
class MismatchReport:
    checked: int
    mismatches: tuple[Mismatch, ...]
    bound_violations: tuple[Any, ...]
    inequality_violations: tuple[Any, ...]


def verify_equivalence(compiler: str, domain: Domain, seed: int = 0) -> MismatchReport:
    """Exhaustively sweep the small domain (plus seeded random samples).

    Every instance is compiled, simulated, and compared against the
    compiler's brute-force reference. Alongside verdict equivalence the
    sweep enforces the per-variant payload spike ceiling and the universal
    energy <= time * neurons inequality, reporting offenders.
    """
    entry = get_compiler(compiler)
    if entry.enumerate_domain is None:
        raise ValueError(f"compiler {compiler!r} does not support domain enumeration")
    instances: Iterable[Any] = entry.enumerate_domain(domain)
    if domain.random_instances:
        if entry.sample is None:
            raise ValueError(f"compiler {compiler!r} does not support random sampling")
        rng = Random(seed)
        sampled = [entry.sample(rng, domain) for _ in range(domain.random_instances)]
        instances = itertools.chain(instances, sampled)
    checked = 0
    mismatches = []
    bound_violations = []
    inequality_violations = []
    for instance in instances:
        checked += 1
        network = entry.build(instance, NetworkBuilder())
        report = run(
            network,
            RunLimits(max_steps=entry.step_limit(instance)),
            validate=False,
        ).report
        expected = entry.reference(instance)
        if report.verdict != (ACCEPT if expected else REJECT):
            mismatches.append(Mismatch(instance, report.verdict, expected))
        if entry.payload_bound is not None:
            if report.energy_payload > entry.payload_bound(instance):
                bound_violations.append(instance)
        if report.energy > report.time * report.neurons:
            inequality_violations.append(instance)
    return MismatchReport(
        checked, tuple(mismatches), tuple(bound_violations), tuple(inequality_violations)
    )


def _enumerate_array_instances(domain: Domain) -> Iterator[ArrayInstance]:
    values = range(domain.max_val)
    for length in range(domain.max_len + 1):
        for elements in itertools.product(values, repeat=length):
            for target in values:
                yield ArrayInstance(elements, target, domain.max_val)


def _sample_array_instance(rng: Random, domain: Domain) -> ArrayInstance:
    length = rng.randint(0, domain.random_max_len)
    bound = domain.random_max_val
    elements = tuple(rng.randrange(bound) for _ in range(length))
    return ArrayInstance(elements, rng.randrange(bound), bound)


def _array_search_entry(variant: str) -> CompilerEntry:
    def build(instance: ArrayInstance, builder: NetworkBuilder) -> Network:
        if variant == "a":
            return arraysearch.compile_search_embedded(instance, builder)
        if variant == "b":
            compiled = arraysearch.compile_search_value_input(
                instance.elements, instance.bound, builder
            )
            schedules = arraysearch.encode_input(
                "b", bound=instance.bound, target=instance.target
            )
        else:
            compiled = arraysearch.compile_search_full_input(
                instance.size, instance.bound, builder
            )
            schedules = arraysearch.encode_input(
                "c",
                bound=instance.bound,
                target=instance.target,
                elements=instance.elements,
            )
        if isinstance(builder, CountingBuilder):
            builder.note_scheduled_spikes(len(schedules))
        return compiled.bind(schedules)

    return CompilerEntry(
        name=f"array-search-{variant}",
        size_of=lambda instance: instance.size,
        build=build,
        reference=contains_target,
        step_limit=lambda instance: arraysearch.step_limit(variant, instance.bound),
        enumerate_domain=_enumerate_array_instances,
        sample=_sample_array_instance,
        payload_bound=lambda instance: payload_energy_bound(variant, instance.size),
    )


def _constant_accept_entry() -> CompilerEntry:
    # The degenerate generator that maps every instance to the same
    # one-neuron accepting network: constant cost, decides nothing, and the
    # reason generation effort must be metered at all.
    def build(instance: Any, builder: NetworkBuilder) -> Network:
        builder.add_input("acc", [0])
        builder.set_accept("acc")
        return builder.build()

    return CompilerEntry(
        name="constant-accept",
        size_of=lambda instance: getattr(instance, "size", 0),
        build=build,
        reference=lambda instance: True,
        step_limit=lambda instance: 2,
    )


for _variant in arraysearch.VARIANTS:
    register_compiler(_array_search_entry(_variant))
register_compiler(_constant_accept_entry())
