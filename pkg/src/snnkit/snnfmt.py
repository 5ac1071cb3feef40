"""The `.snn` plain-text network description format.

Line-oriented, `#` starts a comment, blank lines are ignored. The first
significant line must be the header ``snn 1``. Remaining lines:

    neuron <id> [threshold=<rat>] [reset=<rat>] [leak=<rat>]
    input <id> schedule=<t1;t2;...>
    input <id> periodic offset=<t> period=<K>
    synapse <pre> -> <post> [delay=<int>] [weight=<rat>]
    accept <id>
    reject <id>
    gadget <id>

Rationals are `p` or `p/q` with q > 0; omitted attributes take the defaults
(threshold=1, reset=0, leak=1, delay=1, weight=1). Serialization is
canonical: parse(serialize(n)) == n for every valid network and repeated
serialize calls are byte-identical.

The same module handles the sidecar port-binding files consumed by
``sim --inputs``: one ``port=<schedule>`` line per port, where <schedule>
is ``t1;t2;...`` or ``periodic:<offset>:<period>``.
"""

from __future__ import annotations

from typing import Mapping

from .model import (
    DEFAULT_DELAY,
    DEFAULT_LEAK,
    DEFAULT_RESET,
    DEFAULT_THRESHOLD,
    DEFAULT_WEIGHT,
    ExplicitSchedule,
    Network,
    NeuronSpec,
    PeriodicSchedule,
    SpikeSchedule,
    SynapseSpec,
    format_rational,
    is_valid_id,
    parse_rational,
    validate_network,
)

HEADER = "snn 1"


class NetworkFormatError(ValueError):
    """Raised with the full list of parse errors, one per violated rule."""

    def __init__(self, errors: list[str]):
        self.errors = list(errors)
        super().__init__("\n".join(self.errors))


def _split_attrs(tokens, lineno, errors, allowed):
    attrs = {}
    for token in tokens:
        key, eq, value = token.partition("=")
        if not eq or key not in allowed:
            errors.append(f"line {lineno}: unexpected token {token!r}")
            continue
        if key in attrs:
            errors.append(f"line {lineno}: duplicate attribute {key!r}")
            continue
        attrs[key] = value
    return attrs


def _parse_int(value, what, lineno, errors):
    try:
        return int(value)
    except ValueError:
        errors.append(f"line {lineno}: {what} must be an integer, got {value!r}")
        return None


def _parse_rat(value, what, lineno, errors):
    try:
        return parse_rational(value)
    except ValueError:
        errors.append(f"line {lineno}: {what}: malformed rational {value!r}")
        return None


def _parse_times(value, lineno, errors):
    if value == "":
        return ()
    times = []
    for piece in value.split(";"):
        t = _parse_int(piece, "schedule time", lineno, errors)
        if t is None:
            return None
        if t < 0:
            errors.append(f"line {lineno}: schedule times must be >= 0")
            return None
        times.append(t)
    if any(a >= b for a, b in zip(times, times[1:])):
        errors.append(f"line {lineno}: schedule times must be strictly increasing")
        return None
    return tuple(times)


class _Parser:
    def __init__(self, text: str):
        self.errors: list[str] = []
        self.neurons: list[NeuronSpec] = []
        self.programmed: dict[str, SpikeSchedule] = {}
        self.synapses: list[SynapseSpec] = []
        self.accept: str | None = None
        self.reject: str | None = None
        self.gadget_tags: set[str] = set()
        self.declared: dict[str, int] = {}
        self.pending_refs: list[tuple[str, str, int]] = []
        self.header_seen = False
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            self.line(lineno, line.split())

    def err(self, lineno: int, message: str) -> None:
        self.errors.append(f"line {lineno}: {message}")

    def declare(self, name: str, lineno: int) -> bool:
        if not is_valid_id(name):
            self.err(lineno, f"invalid id {name!r}")
            return False
        if name in self.declared:
            self.err(lineno, f"duplicate id {name!r} (first declared on line {self.declared[name]})")
            return False
        self.declared[name] = lineno
        return True

    def line(self, lineno: int, tokens: list[str]) -> None:
        if not self.header_seen:
            if tokens == HEADER.split():
                self.header_seen = True
            else:
                self.err(lineno, f"expected header {HEADER!r}")
                self.header_seen = True  # report once, keep parsing
            return
        keyword = tokens[0]
        handler = getattr(self, f"_kw_{keyword}", None)
        if handler is None:
            self.err(lineno, f"unknown directive {keyword!r}")
            return
        handler(lineno, tokens[1:])

    def _kw_neuron(self, lineno, rest):
        if not rest:
            self.err(lineno, "neuron needs an id")
            return
        name = rest[0]
        if not self.declare(name, lineno):
            return
        attrs = _split_attrs(rest[1:], lineno, self.errors, ("threshold", "reset", "leak"))
        threshold = reset = leak = None
        if "threshold" in attrs:
            threshold = _parse_rat(attrs["threshold"], "threshold", lineno, self.errors)
            if threshold is not None and threshold < 0:
                self.err(lineno, "threshold must be >= 0")
        if "reset" in attrs:
            reset = _parse_rat(attrs["reset"], "reset", lineno, self.errors)
            if reset is not None and reset < 0:
                self.err(lineno, "reset must be >= 0")
        if "leak" in attrs:
            leak = _parse_rat(attrs["leak"], "leak", lineno, self.errors)
            if leak is not None and not 0 <= leak <= 1:
                self.err(lineno, "leak must be in [0, 1]")
        self.neurons.append(
            NeuronSpec(
                name,
                threshold if threshold is not None else DEFAULT_THRESHOLD,
                reset if reset is not None else DEFAULT_RESET,
                leak if leak is not None else DEFAULT_LEAK,
            )
        )

    def _kw_input(self, lineno, rest):
        if not rest:
            self.err(lineno, "input needs an id")
            return
        name = rest[0]
        if not self.declare(name, lineno):
            return
        if len(rest) >= 2 and rest[1] == "periodic":
            attrs = _split_attrs(rest[2:], lineno, self.errors, ("offset", "period"))
            if "offset" not in attrs or "period" not in attrs:
                self.err(lineno, "periodic input needs offset= and period=")
                return
            offset = _parse_int(attrs["offset"], "offset", lineno, self.errors)
            period = _parse_int(attrs["period"], "period", lineno, self.errors)
            if offset is None or period is None:
                return
            if offset < 0:
                self.err(lineno, "offset must be >= 0")
                return
            if period < 1:
                self.err(lineno, "period must be >= 1")
                return
            self.programmed[name] = PeriodicSchedule(offset, period)
            return
        attrs = _split_attrs(rest[1:], lineno, self.errors, ("schedule",))
        if "schedule" not in attrs:
            self.err(lineno, "input needs schedule= or periodic")
            return
        times = _parse_times(attrs["schedule"], lineno, self.errors)
        if times is not None:
            self.programmed[name] = ExplicitSchedule(times)

    def _kw_synapse(self, lineno, rest):
        if len(rest) < 3 or rest[1] != "->":
            self.err(lineno, "synapse syntax is: synapse <pre> -> <post> [delay=..] [weight=..]")
            return
        pre, post = rest[0], rest[2]
        self.pending_refs.append(("synapse pre", pre, lineno))
        self.pending_refs.append(("synapse post", post, lineno))
        attrs = _split_attrs(rest[3:], lineno, self.errors, ("delay", "weight"))
        delay = DEFAULT_DELAY
        weight = DEFAULT_WEIGHT
        if "delay" in attrs:
            value = _parse_int(attrs["delay"], "delay", lineno, self.errors)
            if value is None:
                return
            if value < 1:
                self.err(lineno, "delay must be >= 1")
                return
            delay = value
        if "weight" in attrs:
            value = _parse_rat(attrs["weight"], "weight", lineno, self.errors)
            if value is None:
                return
            weight = value
        self.synapses.append(SynapseSpec(pre, post, delay, weight))

    def _designate(self, role, lineno, rest):
        if len(rest) != 1:
            self.err(lineno, f"{role} takes exactly one id")
            return
        name = rest[0]
        self.pending_refs.append((role, name, lineno))
        if getattr(self, role) is not None:
            self.err(lineno, f"duplicate {role} directive")
            return
        setattr(self, role, name)
        other = self.reject if role == "accept" else self.accept
        if other is not None and other == name:
            self.err(lineno, f"accept and reject are both {name!r}")

    def _kw_accept(self, lineno, rest):
        self._designate("accept", lineno, rest)

    def _kw_reject(self, lineno, rest):
        self._designate("reject", lineno, rest)

    def _kw_gadget(self, lineno, rest):
        if len(rest) != 1:
            self.err(lineno, "gadget takes exactly one id")
            return
        self.pending_refs.append(("gadget", rest[0], lineno))
        self.gadget_tags.add(rest[0])

    def finish(self) -> Network:
        for what, name, lineno in self.pending_refs:
            if name not in self.declared:
                self.err(lineno, f"{what} names unknown id {name!r}")
        self.errors.sort(key=_line_number)
        if self.errors:
            raise NetworkFormatError(self.errors)
        network = Network(
            neurons=tuple(self.neurons),
            programmed=self.programmed,
            synapses=tuple(self.synapses),
            accept=self.accept,
            reject=self.reject,
            gadget_tags=frozenset(self.gadget_tags),
        )
        residual = validate_network(network)  # backstop; line checks should cover everything
        if residual:
            raise NetworkFormatError(residual)
        return network


def _line_number(message: str) -> int:
    if message.startswith("line "):
        return int(message[5:].split(":", 1)[0])
    return 1 << 30


def parse_network(text: str) -> Network:
    """Parse `.snn` text into a validated Network.

    Raises NetworkFormatError carrying every violation found, each with the
    line number it was detected on.
    """
    return _Parser(text).finish()


def _format_schedule(sched: SpikeSchedule) -> str:
    if isinstance(sched, PeriodicSchedule):
        return f"periodic offset={sched.offset} period={sched.period}"
    return "schedule=" + ";".join(str(t) for t in sched.times)


def serialize_network(network: Network) -> str:
    """Canonical `.snn` text: header, neurons, inputs, synapses, designations.

    Default-valued attributes are omitted; rationals print in lowest terms.
    """
    lines = [HEADER]
    for spec in network.neurons:
        parts = [f"neuron {spec.id}"]
        if spec.threshold != DEFAULT_THRESHOLD:
            parts.append(f"threshold={format_rational(spec.threshold)}")
        if spec.reset != DEFAULT_RESET:
            parts.append(f"reset={format_rational(spec.reset)}")
        if spec.leak != DEFAULT_LEAK:
            parts.append(f"leak={format_rational(spec.leak)}")
        lines.append(" ".join(parts))
    for name in sorted(network.programmed):
        lines.append(f"input {name} {_format_schedule(network.programmed[name])}")
    for syn in network.synapses:
        parts = [f"synapse {syn.pre} -> {syn.post}"]
        if syn.delay != DEFAULT_DELAY:
            parts.append(f"delay={syn.delay}")
        if syn.weight != DEFAULT_WEIGHT:
            parts.append(f"weight={format_rational(syn.weight)}")
        lines.append(" ".join(parts))
    if network.accept is not None:
        lines.append(f"accept {network.accept}")
    if network.reject is not None:
        lines.append(f"reject {network.reject}")
    for name in sorted(network.gadget_tags):
        lines.append(f"gadget {name}")
    return "\n".join(lines) + "\n"


def parse_port_bindings(text: str) -> dict[str, SpikeSchedule]:
    """Parse a sidecar input file: one `port=<schedule>` line per port."""
    errors: list[str] = []
    bindings: dict[str, SpikeSchedule] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        name, eq, value = line.partition("=")
        name = name.strip()
        if not eq or not is_valid_id(name):
            errors.append(f"line {lineno}: expected port=<schedule>")
            continue
        if name in bindings:
            errors.append(f"line {lineno}: duplicate port {name!r}")
            continue
        value = value.strip()
        if value.startswith("periodic:"):
            pieces = value.split(":")
            if len(pieces) != 3:
                errors.append(f"line {lineno}: periodic schedule is periodic:<offset>:<period>")
                continue
            try:
                offset, period = int(pieces[1]), int(pieces[2])
            except ValueError:
                errors.append(f"line {lineno}: malformed periodic schedule {value!r}")
                continue
            if offset < 0 or period < 1:
                errors.append(f"line {lineno}: need offset >= 0 and period >= 1")
                continue
            bindings[name] = PeriodicSchedule(offset, period)
        else:
            times = _parse_times(value, lineno, errors)
            if times is not None:
                bindings[name] = ExplicitSchedule(times)
    if errors:
        raise NetworkFormatError(errors)
    return bindings


def serialize_port_bindings(bindings: Mapping[str, SpikeSchedule]) -> str:
    lines = []
    for name in sorted(bindings):
        sched = bindings[name]
        if isinstance(sched, PeriodicSchedule):
            lines.append(f"{name}=periodic:{sched.offset}:{sched.period}")
        else:
            lines.append(f"{name}=" + ";".join(str(t) for t in sched.times))
    return "\n".join(lines) + ("\n" if lines else "")
