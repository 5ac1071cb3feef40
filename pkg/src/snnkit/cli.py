"""Command-line entry point.

Every subcommand writes networks in the `.snn` text format and accepts `-`
for standard input/output, so generators compose with `sim` in pipelines:

    snnkit compile array-search --variant a --array 3,5,7 --target 5 --bound 8 | snnkit sim -

Exit codes: 0 accept/success, 1 reject, 2 usage error,
3 promise violation, verification mismatch, or a timeout/ambiguous verdict.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import engine, gadgets, harness, hostprog, snnfmt
from .arraysearch import (
    ArrayInstance,
    compile_instance,
    compile_search_full_input,
    compile_search_value_input,
    encode_input,
)
from .model import InvalidNetworkError

EXIT_ACCEPT = 0
EXIT_REJECT = 1
EXIT_USAGE = 2
EXIT_VIOLATION = 3


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _write_network(network, path: str) -> None:
    text = snnfmt.serialize_network(network)
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _load_network(path: str):
    return snnfmt.parse_network(_read_text(path))


def _verdict_exit(verdict: str) -> int:
    if verdict == engine.ACCEPT:
        return EXIT_ACCEPT
    if verdict == engine.REJECT:
        return EXIT_REJECT
    return EXIT_VIOLATION


def _cmd_sim(args) -> int:
    network = _load_network(args.network)
    if args.inputs:
        network = network.bind_schedules(snnfmt.parse_port_bindings(_read_text(args.inputs)))
    limits = engine.RunLimits(max_steps=args.max_steps, max_total_spikes=args.max_spikes)
    want_trace = args.trace or args.raster
    report, trace = engine.run(network, limits, trace=want_trace, backend=args.backend)
    if args.trace:
        for step in trace.steps:
            print(step.render())
    if args.raster:
        sys.stdout.write(engine.render_raster(trace, network))
    print(engine.format_report_line(report))
    return _verdict_exit(report.verdict)


def _cmd_gadget(args) -> int:
    kind = args.kind
    if kind == "constant":
        network = gadgets.make_constant_firer(args.prefix or "const").to_network()
    elif kind == "clock":
        if args.period is None:
            raise SystemExit("gadget clock needs --period")
        network = gadgets.make_clock(args.period, args.prefix or "clk").to_network()
    elif kind == "number":
        if args.value is None or args.period is None:
            raise SystemExit("gadget number needs --value and --period")
        network = gadgets.make_number(args.value, args.period, args.prefix or "num").to_network()
    else:
        if args.bound is None or args.attach is None:
            raise SystemExit(f"gadget {kind} needs --bound and --attach")
        base = _load_network(args.attach)
        if kind == "timer":
            network = gadgets.attach_timer(base, args.bound)
        else:
            network = gadgets.attach_meter(base, args.bound)
    _write_network(network, args.output)
    return EXIT_ACCEPT


def _cmd_compile(args) -> int:
    if args.problem != "array-search":
        raise SystemExit(f"unknown compiler {args.problem!r}")
    variant = args.variant
    elements = tuple(int(v) for v in args.array.split(",")) if args.array else ()
    if variant == "a":
        if args.target is None:
            raise SystemExit("variant a needs --target")
        network = compile_instance("a", ArrayInstance(elements, args.target, args.bound))
    elif variant == "b":
        compiled = compile_search_value_input(elements, args.bound)
        network = compiled.network
        if args.target is not None:
            _emit_sidecar(args, encode_input("b", bound=args.bound, target=args.target))
    else:
        size = args.size if args.size is not None else len(elements)
        compiled = compile_search_full_input(size, args.bound)
        network = compiled.network
        if args.target is not None:
            _emit_sidecar(
                args,
                encode_input("c", bound=args.bound, target=args.target, elements=elements),
            )
    _write_network(network, args.output)
    return EXIT_ACCEPT


def _emit_sidecar(args, schedules) -> None:
    if not args.inputs_out:
        raise SystemExit("emitting input schedules needs --inputs-out <file>")
    Path(args.inputs_out).write_text(snnfmt.serialize_port_bindings(schedules))


def _cmd_oracle(args) -> int:
    network = _load_network(args.network)
    inputs = None
    if args.inputs:
        inputs = snnfmt.parse_port_bindings(_read_text(args.inputs))
    caps = harness.ResourceCaps(time=args.time, space=args.space, energy=args.energy)
    answer = harness.network_halting_oracle(network, caps, inputs)
    print(f"outcome={answer.outcome}")
    print(engine.format_report_line(answer.report))
    if answer.outcome == harness.ACCEPTED:
        return EXIT_ACCEPT
    if answer.outcome == harness.REJECTED:
        return EXIT_REJECT
    return EXIT_VIOLATION


def _cmd_host(args) -> int:
    path = Path(args.program)
    result = hostprog.host_run(path.read_text(), base_dir=path.parent)
    sys.stdout.write(result.call_log())
    print(f"verdict={result.verdict}")
    return EXIT_ACCEPT if result.verdict == "accept" else EXIT_REJECT


def _cmd_verify(args) -> int:
    if args.problem != "array-search":
        raise SystemExit(f"unknown compiler {args.problem!r}")
    domain = harness.Domain(
        max_len=args.max_len,
        max_val=args.max_val,
        random_instances=args.random,
    )
    report = harness.verify_equivalence(f"array-search-{args.variant}", domain, seed=args.seed)
    print(f"checked={report.checked}")
    print(f"mismatches={len(report.mismatches)}")
    print(f"bound_violations={len(report.bound_violations)}")
    print(f"inequality_violations={len(report.inequality_violations)}")
    for mismatch in report.mismatches[:20]:
        inst = mismatch.instance
        print(
            f"mismatch array={','.join(map(str, inst.elements))} target={inst.target}"
            f" bound={inst.bound} verdict={mismatch.network_verdict} expected={mismatch.reference}"
        )
    ok = (
        not report.mismatches
        and not report.bound_violations
        and not report.inequality_violations
    )
    return EXIT_ACCEPT if ok else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="snnkit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sim", help="simulate a network until verdict or cap")
    p.add_argument("network", help=".snn file or - for stdin")
    p.add_argument("--inputs", help="port-binding file (port=<schedule> lines)")
    p.add_argument("--max-steps", type=int, default=10_000)
    p.add_argument("--max-spikes", type=int, default=None)
    p.add_argument("--trace", action="store_true", help="print per-step firings")
    p.add_argument("--raster", action="store_true", help="print a spike raster")
    p.add_argument("--backend", choices=engine.available_backends(), default=None)
    p.set_defaults(fn=_cmd_sim)

    p = sub.add_parser("gadget", help="emit a circuit fragment or augment a network")
    p.add_argument("kind", choices=("constant", "clock", "number", "timer", "meter"))
    p.add_argument("--period", type=int, help="clock period K")
    p.add_argument("--value", type=int, help="number to encode temporally")
    p.add_argument("--bound", type=int, help="step deadline (timer) or spike budget (meter)")
    p.add_argument("--attach", help="network to augment (.snn file or -)")
    p.add_argument("--prefix", help="id prefix for fragment neurons")
    p.add_argument("--output", default="-", help="where to write the .snn (default stdout)")
    p.set_defaults(fn=_cmd_gadget)

    p = sub.add_parser("compile", help="compile a problem instance into a network")
    p.add_argument("problem", choices=("array-search",))
    p.add_argument("--variant", choices=("a", "b", "c"), required=True)
    p.add_argument("--array", default="", help="comma-separated elements")
    p.add_argument("--size", type=int, help="array length (variant c)")
    p.add_argument("--target", type=int, help="value to search for")
    p.add_argument("--bound", type=int, required=True, help="exclusive value bound V")
    p.add_argument("--output", default="-", help="where to write the .snn (default stdout)")
    p.add_argument("--inputs-out", help="write port schedules here (variants b/c)")
    p.set_defaults(fn=_cmd_compile)

    p = sub.add_parser("oracle", help="promise-bounded accept/reject query")
    p.add_argument("network", help=".snn file or - for stdin")
    p.add_argument("--time", type=int, required=True)
    p.add_argument("--space", type=int, required=True)
    p.add_argument("--energy", type=int, required=True)
    p.add_argument("--inputs", help="port-binding file")
    p.set_defaults(fn=_cmd_oracle)

    p = sub.add_parser("host", help="run a host program with oracle access")
    p.add_argument("program", help="program file")
    p.set_defaults(fn=_cmd_host)

    p = sub.add_parser("verify", help="sweep a compiler against brute force")
    p.add_argument("problem", choices=("array-search",))
    p.add_argument("--variant", choices=("a", "b", "c"), required=True)
    p.add_argument("--max-len", type=int, required=True)
    p.add_argument("--max-val", type=int, required=True)
    p.add_argument("--random", type=int, default=0, help="extra seeded random instances")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.fn(args)
    except SystemExit as exc:
        if isinstance(exc.code, str):
            print(f"error: {exc.code}", file=sys.stderr)
            return EXIT_USAGE
        return int(exc.code) if exc.code is not None else 0
    except (
        snnfmt.NetworkFormatError,
        InvalidNetworkError,
        hostprog.HostProgramError,
        engine.NoVerdictNeuronError,
        ValueError,
        KeyError,
        OSError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entry() -> None:
    raise SystemExit(main())
