"""Exact synchronous simulation with halting semantics and resource metering.

Each step t: (1) deliveries scheduled for t are summed per target neuron;
(2) every regular neuron updates its membrane potential
u' = max(0, leak*u + inputs) and fires when u' reaches its threshold,
resetting to its reset voltage; (3) programmed neurons fire exactly when
their schedule says so; (4) each firing enqueues deliveries along outgoing
synapses at t+delay; (5) energy counts one unit per spike. The run halts on
the first step in which the accept or reject neuron fires (both at once is
the distinct verdict "ambiguous"), or times out at the step/spike caps.

TIME is the number of executed steps, SPACE the neuron count, ENERGY the
spike count; ENERGY <= TIME * SPACE always holds since a neuron fires at
most once per step.

Two interchangeable kernels execute the inner loop: a compiled extension
(snnkit._kernel_cy, built from Cython) and a pure-Python fallback. The
compiled one is preferred when importable; SNNKIT_BACKEND=pure|compiled
overrides. Both produce byte-identical traces.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, NamedTuple

from . import _kernel_py
from .model import ExplicitSchedule, Network, check_network

try:  # compiled kernel is optional
    from . import _kernel_cy
except ImportError:  # pragma: no cover - depends on build environment
    _kernel_cy = None

ACCEPT = "accept"
REJECT = "reject"
TIMEOUT = "timeout"
AMBIGUOUS = "ambiguous"

_VERDICT_NAMES = {1: ACCEPT, 2: REJECT, 3: AMBIGUOUS}

_KERNELS = {"pure": _kernel_py}
if _kernel_cy is not None:
    _KERNELS["compiled"] = _kernel_cy


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_KERNELS))


def default_backend() -> str:
    env = os.environ.get("SNNKIT_BACKEND")
    if env:
        if env not in _KERNELS:
            raise ValueError(f"SNNKIT_BACKEND={env!r} is not available (have {available_backends()})")
        return env
    return "compiled" if "compiled" in _KERNELS else "pure"


class NoVerdictNeuronError(ValueError):
    """The network designates neither an accept nor a reject neuron."""


@dataclass(frozen=True)
class RunLimits:
    """Simulator-level safety caps, distinct from in-network timer/meter gadgets."""

    max_steps: int
    max_total_spikes: int | None = None

    def __post_init__(self):
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")
        if self.max_total_spikes is not None and self.max_total_spikes < 0:
            raise ValueError("max_total_spikes must be >= 0")


@dataclass(frozen=True)
class ResourceReport:
    """Verdict plus measured TIME, SPACE, ENERGY for one run."""

    verdict: str
    time: int
    energy: int
    energy_payload: int
    neurons: int
    synapses: int

    def __post_init__(self):
        if self.energy > self.time * self.neurons:
            raise ValueError("impossible report: energy exceeds time * neurons")


@dataclass(frozen=True)
class TraceStep:
    t: int
    fired: tuple[str, ...]
    energy: int

    def render(self) -> str:
        return f"t={self.t} fired={','.join(self.fired)} energy={self.energy}"


@dataclass(frozen=True)
class Trace:
    """Per-step firing record; steps with no firing are omitted."""

    steps: tuple[TraceStep, ...]
    report: ResourceReport

    def render(self) -> str:
        lines = [step.render() for step in self.steps]
        lines.append(format_report_line(self.report))
        return "\n".join(lines) + "\n"

    def fire_times(self, name: str) -> tuple[int, ...]:
        return tuple(step.t for step in self.steps if name in step.fired)


def format_report_line(report: ResourceReport) -> str:
    return (
        f"verdict={report.verdict} time={report.time} energy={report.energy}"
        f" payload_energy={report.energy_payload} neurons={report.neurons}"
        f" synapses={report.synapses}"
    )


@dataclass(frozen=True)
class EngineState:
    """Snapshot of a simulation between steps."""

    t: int
    potentials: Mapping[str, Fraction]
    pending: Mapping[tuple[int, str], Fraction]
    energy: int
    energy_payload: int
    fired_now: tuple[str, ...]


def membrane_update(
    u_prev: Fraction,
    leak: Fraction,
    input_sum: Fraction,
    threshold: Fraction,
    reset: Fraction,
) -> tuple[Fraction, bool]:
    """One neuron-step: leak, integrate, clamp at zero, threshold, reset.

    Returns (next potential, fired). The clamp applies before the threshold
    comparison; firing resets the potential even when reset >= threshold,
    which lets such neurons re-trigger themselves every step.
    """
    v = leak * u_prev + input_sum
    if v < 0:
        v = Fraction(0)
    if v >= threshold:
        return reset, True
    return v, False


def build_plan(network: Network):
    """Compile a Network into the flat index-based form the kernels consume."""
    ids = sorted(set(n.id for n in network.neurons) | set(network.programmed))
    index = {name: k for k, name in enumerate(ids)}
    n = len(ids)
    kinds = [0] * n
    params: list[tuple | None] = [None] * n
    scheds: list[tuple | None] = [None] * n
    out: list[list[tuple]] = [[] for _ in range(n)]
    for spec in network.neurons:
        k = index[spec.id]
        params[k] = (
            spec.threshold.numerator, spec.threshold.denominator,
            spec.reset.numerator, spec.reset.denominator,
            spec.leak.numerator, spec.leak.denominator,
        )
    for name, sched in network.programmed.items():
        k = index[name]
        kinds[k] = 1
        if isinstance(sched, ExplicitSchedule):
            scheds[k] = ("e", tuple(sched.times))
        else:
            scheds[k] = ("p", sched.offset, sched.period)
    for syn in network.synapses:
        out[index[syn.pre]].append(
            (index[syn.post], syn.delay, syn.weight.numerator, syn.weight.denominator)
        )
    accept_idx = index[network.accept] if network.accept is not None else -1
    reject_idx = index[network.reject] if network.reject is not None else -1
    gadget = tuple(1 if name in network.gadget_tags else 0 for name in ids)
    plan = (
        n,
        tuple(kinds),
        tuple(params),
        tuple(scheds),
        tuple(tuple(entries) for entries in out),
        accept_idx,
        reject_idx,
        gadget,
    )
    return ids, plan


class Simulation:
    """Step-level driver around a kernel; exposes exact state for inspection.

    Verdict-neuron designation is only required for `run` (which seeks a
    decision); fragments and other non-deciding networks can be stepped
    freely through this class. A simulation is strictly sequential, but
    separate Simulation instances share no mutable state, so concurrent
    runs over the same (immutable) network are safe.
    """

    def __init__(self, network: Network, backend: str | None = None, validate: bool = True):
        if validate:
            check_network(network)
        self.network = network
        self.backend = backend or default_backend()
        self.ids, plan = build_plan(network)
        self._kernel = _KERNELS[self.backend].Kernel(plan)
        self._fired_now: tuple[str, ...] = ()

    @property
    def t(self) -> int:
        return self._kernel.t

    @property
    def energy(self) -> int:
        return self._kernel.energy

    @property
    def energy_payload(self) -> int:
        return self._kernel.payload_energy

    @property
    def verdict(self) -> str | None:
        return _VERDICT_NAMES.get(self._kernel.verdict)

    @property
    def fired_now(self) -> tuple[str, ...]:
        return self._fired_now

    def step(self) -> tuple[str, ...]:
        """Execute one synchronous step; return the fired ids sorted."""
        if self.verdict is not None:
            raise RuntimeError("verdict already reached; the network has halted")
        fired = self._kernel.step()
        ids = self.ids
        self._fired_now = tuple(ids[k] for k in fired)
        return self._fired_now

    def potentials(self) -> dict[str, Fraction]:
        pairs = self._kernel.potential_pairs()
        return {
            self.ids[k]: Fraction(pair[0], pair[1])
            for k, pair in enumerate(pairs)
            if pair is not None
        }

    def pending(self) -> dict[tuple[int, str], Fraction]:
        return {
            (arrival, self.ids[k]): Fraction(pair[0], pair[1])
            for (arrival, k), pair in self._kernel.pending_pairs().items()
        }

    def state(self) -> EngineState:
        return EngineState(
            t=self.t,
            potentials=self.potentials(),
            pending=self.pending(),
            energy=self.energy,
            energy_payload=self.energy_payload,
            fired_now=self._fired_now,
        )


class RunResult(NamedTuple):
    report: ResourceReport
    trace: Trace | None


def run(
    network: Network,
    limits: RunLimits,
    trace: bool = False,
    backend: str | None = None,
    validate: bool = True,
) -> RunResult:
    """Simulate from t=0 until a verdict or a safety cap is hit.

    The network must designate at least one of accept/reject. TIME is the
    number of executed steps, so a verdict during step 0 reports time 1;
    hitting max_steps (or exceeding max_total_spikes) reports "timeout".
    """
    if validate:
        check_network(network)
    if network.accept is None and network.reject is None:
        raise NoVerdictNeuronError("network designates neither accept nor reject")
    sim = Simulation(network, backend=backend, validate=False)
    steps: list[TraceStep] = []
    time = limits.max_steps
    verdict = TIMEOUT
    cap = limits.max_total_spikes
    for t in range(limits.max_steps):
        fired = sim.step()
        if trace and fired:
            steps.append(TraceStep(t, fired, sim.energy))
        v = sim.verdict
        if v is not None:
            verdict = v
            time = t + 1
            break
        if cap is not None and sim.energy > cap:
            time = t + 1
            break
    report = ResourceReport(
        verdict=verdict,
        time=time,
        energy=sim.energy,
        energy_payload=sim.energy_payload,
        neurons=network.size(),
        synapses=len(network.synapses),
    )
    return RunResult(report, Trace(tuple(steps), report) if trace else None)


def render_raster(trace: Trace, network: Network) -> str:
    """Plain-text spike raster: one row per neuron, one column per step."""
    width = trace.report.time
    fired_at: dict[str, set[int]] = {}
    for step in trace.steps:
        for name in step.fired:
            fired_at.setdefault(name, set()).add(step.t)
    ids = sorted(network.ids())
    pad = max((len(name) for name in ids), default=0)
    lines = []
    for name in ids:
        hits = fired_at.get(name, set())
        row = "".join("*" if t in hits else "." for t in range(width))
        lines.append(f"{name.ljust(pad)} |{row}|")
    return "\n".join(lines) + ("\n" if lines else "")
