"""Command-line interface.

Subcommands: ``profile validate``, ``parse``, ``prepare``, ``transpile``,
``run``, ``mis``, ``bench``. Exit codes: 0 success, 1 domain error (bad file,
invariant violation, failed preparation), 2 usage error. Output documents are
written atomically (temp file + rename). ``NAQ_PROFILE`` supplies a default
profile path; ``--json`` forces machine-readable standard output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import analog, bench, prep, profile as profile_mod, simulator
from .circuit import ParseError, format_circuit, lower_to_native, parse_circuit, validate
from .transpile import schedule_to_dict, transpile


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 2 without killing the host process
        raise _UsageError(message)


def _atomic_write(path: str, text: str) -> None:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=target.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _load_profile_arg(value: str | None) -> profile_mod.HardwareProfile:
    if value is None:
        value = os.environ.get("NAQ_PROFILE")
    if value is None:
        return profile_mod.builtin_profile("rb87-2023")
    if value in profile_mod.BUILTIN_PROFILES:
        return profile_mod.builtin_profile(value)
    if not Path(value).exists():
        raise FileNotFoundError(f"profile file not found: {value}")
    return profile_mod.load_profile(Path(value))


def _read_circuit(path: str):
    p = Path(path)
    if not p.exists():
        raise FileNotFoundError(f"circuit file not found: {path}")
    return parse_circuit(p.read_text(encoding="utf-8"))


def _emit(doc: dict, out: str | None, as_json: bool, human: str | None = None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True)
    if out:
        _atomic_write(out, text + "\n")
    if as_json or not human:
        print(text)
    else:
        print(human)


def build_parser() -> _Parser:
    parser = _Parser(prog="naq", description="Neutral-atom quantum computer digital twin")
    parser.add_argument("--json", action="store_true", help="machine-readable stdout")
    sub = parser.add_subparsers(dest="command")

    p_profile = sub.add_parser("profile", help="profile tools")
    profile_sub = p_profile.add_subparsers(dest="profile_command")
    p_validate = profile_sub.add_parser("validate", help="validate a profile document")
    p_validate.add_argument("path")

    p_parse = sub.add_parser("parse", help="parse a circuit and echo the canonical form")
    p_parse.add_argument("path")

    p_prepare = sub.add_parser("prepare", help="simulate register preparation")
    p_prepare.add_argument("--profile")
    p_prepare.add_argument("--qubits", type=int, required=True)
    p_prepare.add_argument("--seed", type=int, default=0)
    p_prepare.add_argument("--max-retries", type=int, default=100)
    p_prepare.add_argument("--emit-plan", metavar="PATH")

    p_transpile = sub.add_parser("transpile", help="place, route and schedule a circuit")
    p_transpile.add_argument("--circuit", required=True)
    p_transpile.add_argument("--profile")
    p_transpile.add_argument("--mode", choices=["swap", "shuttle"], default="swap")
    p_transpile.add_argument("--shots", type=int, default=1)
    p_transpile.add_argument("--emit-schedule", metavar="PATH")
    p_transpile.add_argument("--report", metavar="PATH")

    p_run = sub.add_parser("run", help="noisy Monte-Carlo execution")
    p_run.add_argument("--circuit", required=True)
    p_run.add_argument("--profile")
    p_run.add_argument("--shots", type=int, required=True)
    p_run.add_argument("--seed", type=int, default=0)
    p_run.add_argument("--noise", choices=["off", "gates", "full"], default="full")
    p_run.add_argument("--mode", choices=["swap", "shuttle"], default="swap")
    p_run.add_argument("--workers", type=int, default=1)
    p_run.add_argument("--out", metavar="PATH")

    p_mis = sub.add_parser("mis", help="analog-mode maximum independent set")
    p_mis.add_argument("--positions", required=True, help="JSON list of [x, y] micrometers")
    p_mis.add_argument("--rb", type=float, required=True, help="blockade radius (µm)")
    p_mis.add_argument("--omega", type=float, default=1.0, help="peak Rabi rate (rad/µs)")
    p_mis.add_argument("--sweep-time", type=float, default=20.0, help="sweep length (µs)")
    p_mis.add_argument("--shots", type=int, default=100)
    p_mis.add_argument("--seed", type=int, default=0)
    p_mis.add_argument("--out", metavar="PATH")

    p_bench = sub.add_parser("bench", help="benchmark suites")
    p_bench.add_argument("--suite", choices=["ghz", "qv", "clops"], required=True)
    p_bench.add_argument("--profile")
    p_bench.add_argument("--widths", default="2..5", help="range like 2..6 or list 2,4,6")
    p_bench.add_argument("--depth", type=int, help="qv: circuit depth (defaults to width)")
    p_bench.add_argument("--circuits", type=int, default=20, help="qv: circuits per point")
    p_bench.add_argument("--layers", type=int, default=100, help="clops: template layers")
    p_bench.add_argument("--shots", type=int, default=1000)
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--noise", choices=["off", "gates", "full"], default="full")
    p_bench.add_argument("--out", metavar="PATH")
    p_bench.add_argument("--plot-csv", metavar="PATH")
    return parser


def _parse_widths(spec: str) -> list[int]:
    if ".." in spec:
        lo, hi = spec.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(w) for w in spec.split(",") if w.strip()]


def _cmd_profile(args, as_json: bool) -> int:
    if args.profile_command != "validate":
        raise _UsageError("usage: naq profile validate <path>")
    prof = profile_mod.load_profile(Path(args.path))
    _emit(
        profile_mod.profile_to_dict(prof),
        None,
        as_json,
        human=f"profile {prof.name!r} is valid "
        f"(fingerprint {profile_mod.profile_fingerprint(prof)})",
    )
    return 0


def _cmd_parse(args, as_json: bool) -> int:
    circuit = _read_circuit(args.path)
    if as_json:
        print(json.dumps({"n_qubits": circuit.n_qubits, "canonical": format_circuit(circuit)}))
    else:
        sys.stdout.write(format_circuit(circuit))
    return 0


def _cmd_prepare(args, as_json: bool) -> int:
    prof = _load_profile_arg(args.profile)
    rng = np.random.default_rng(args.seed)
    outcome = prep.prepare_register(prof, args.qubits, rng, max_retries=args.max_retries)
    if args.emit_plan:
        # Re-derive a representative plan for the emitted document.
        plan_rng = np.random.default_rng(args.seed)
        loaded = prep.sample_loading(
            prep.empty_occupancy(prof.lattice), prof.loading_prob, plan_rng
        )
        plan = prep.plan_rearrangement(loaded, prep.target_block(prof.lattice, args.qubits))
        _atomic_write(
            args.emit_plan,
            json.dumps(prep.plan_to_dict(plan, prof.lattice), indent=2) + "\n",
        )
    doc = {
        "defect_free": outcome.defect_free,
        "attempts": outcome.attempts,
        "elapsed_ms": outcome.elapsed_ms,
        "moves_executed": outcome.moves_executed,
        "atoms_lost_in_transfer": outcome.atoms_lost_in_transfer,
        "n_qubits": args.qubits,
        "seed": args.seed,
    }
    _emit(
        doc,
        None,
        as_json,
        human=(
            f"defect-free register of {args.qubits} qubits after {outcome.attempts} "
            f"attempt(s), {outcome.elapsed_ms:.1f} ms, {outcome.moves_executed} moves"
        ),
    )
    return 0


def _cmd_transpile(args, as_json: bool) -> int:
    prof = _load_profile_arg(args.profile)
    circuit = lower_to_native(_read_circuit(args.circuit))
    diags = validate(circuit, prof)
    fatal = [d for d in diags if d.code in ("capacity", "mid-circuit-measurement")]
    if fatal:
        raise ValueError("; ".join(d.message for d in fatal))
    graph = profile_mod.build_connectivity(
        prof, prep.target_block(prof.lattice, circuit.n_qubits)
    )
    result = transpile(circuit, prof, graph, mode=args.mode, n_shots=args.shots)
    if args.emit_schedule:
        _atomic_write(
            args.emit_schedule,
            json.dumps(schedule_to_dict(result.schedule), indent=2) + "\n",
        )
    report_doc = result.report.to_dict()
    report_doc["inserted_swaps"] = result.routed.n_inserted_swaps
    report_doc["shuttles"] = result.routed.n_shuttles
    if args.report:
        _atomic_write(args.report, json.dumps(report_doc, indent=2, sort_keys=True) + "\n")
    _emit(
        report_doc,
        None,
        as_json,
        human=(
            f"{result.report.gate_layer_count} gate layers, "
            f"t_shot = {result.report.t_shot_ms:.3f} ms, "
            f"{args.shots} shot(s) -> {result.report.t_total_s:.3f} s "
            f"({result.routed.n_inserted_swaps} swaps, {result.routed.n_shuttles} shuttles)"
        ),
    )
    return 0


def _cmd_run(args, as_json: bool) -> int:
    prof = _load_profile_arg(args.profile)
    circuit = _read_circuit(args.circuit)
    result = simulator.run(
        circuit,
        prof,
        args.shots,
        args.seed,
        noise=args.noise,
        mode=args.mode,
        n_workers=args.workers,
    )
    doc = {
        "histogram": result.histogram,
        "timing": result.timing.to_dict(),
        "noise_events": result.diagnostics["noise_events"],
        "diagnostics": {
            k: v for k, v in result.diagnostics.items() if k != "noise_events"
        },
        "seed": result.seed,
        "profile_fingerprint": result.profile_fingerprint,
    }
    top = sorted(result.histogram.items(), key=lambda kv: -kv[1])[:4]
    human = f"{args.shots} shots; top outcomes: " + ", ".join(
        f"{b}:{c}" for b, c in top
    )
    _emit(doc, args.out, as_json, human=human)
    return 0


def _cmd_mis(args, as_json: bool) -> int:
    path = Path(args.positions)
    if not path.exists():
        raise FileNotFoundError(f"positions file not found: {args.positions}")
    positions = json.loads(path.read_text(encoding="utf-8"))
    layout = analog.layout_from_positions(positions, args.rb, rabi_max=args.omega)
    sweep = analog.mis_sweep(args.omega, args.sweep_time)
    rng = np.random.default_rng(args.seed)
    result = analog.sample_mis(layout, sweep, args.shots, rng)
    doc = {
        "edges": sorted(list(e) for e in result.graph.edges),
        "shots": [list(s) for s in result.sets],
        "best_set": list(result.best_set),
        "best_size": result.best_size,
        "mean_size": result.mean_size,
        "norm_drift": result.norm_drift,
        "seed": args.seed,
    }
    if layout.n_atoms <= analog.BRUTE_FORCE_CAP:
        oracle_size, oracle_set = analog.brute_force_mis(result.graph)
        doc["oracle_size"] = oracle_size
        doc["oracle_set"] = list(oracle_set)
    human = f"best independent set {result.best_set} (size {result.best_size})"
    if "oracle_size" in doc:
        human += f"; optimum {doc['oracle_size']}"
    _emit(doc, args.out, as_json, human=human)
    return 0


def _cmd_bench(args, as_json: bool) -> int:
    prof = _load_profile_arg(args.profile)
    if args.suite == "ghz":
        report = bench.ghz_sweep(
            prof, _parse_widths(args.widths), args.shots, args.seed, noise=args.noise
        )
    elif args.suite == "qv":
        widths = _parse_widths(args.widths)
        records = []
        summary: dict = {}
        for width in widths:
            depth = args.depth if args.depth else width
            sub_report = bench.qv_heavy_output(
                prof, width, depth, args.circuits, args.shots, args.seed, noise=args.noise
            )
            records.extend(sub_report.records)
            summary[f"width_{width}"] = sub_report.summary
        report = bench.BenchReport(
            suite="qv",
            profile_fingerprint=bench.profile_fingerprint(prof),
            master_seed=args.seed,
            records=tuple(records),
            summary=summary,
        )
    else:
        widths = _parse_widths(args.widths)
        records = []
        for width in widths:
            clops = bench.clops_metric(prof, width, args.layers, args.shots, seed=args.seed)
            records.append(
                bench.BenchRecord(
                    width=width,
                    depth=args.layers,
                    metric=clops.layers_per_second,
                    shots=args.shots,
                    seed=args.seed,
                    extra={"metric_name": "layers_per_second", "host_seconds": clops.host_seconds},
                )
            )
        report = bench.BenchReport(
            suite="clops",
            profile_fingerprint=bench.profile_fingerprint(prof),
            master_seed=args.seed,
            records=tuple(records),
            summary={"layers": args.layers},
        )
    if args.out:
        _atomic_write(args.out, report.to_jsonl())
    if args.plot_csv:
        _atomic_write(args.plot_csv, report.plot_csv())
    if as_json:
        sys.stdout.write(report.to_jsonl())
    else:
        for record in report.records:
            print(
                f"{report.suite} width={record.width} depth={record.depth} "
                f"metric={record.metric:.6g}"
            )
    return 0


_COMMANDS = {
    "profile": _cmd_profile,
    "parse": _cmd_parse,
    "prepare": _cmd_prepare,
    "transpile": _cmd_transpile,
    "run": _cmd_run,
    "mis": _cmd_mis,
    "bench": _cmd_bench,
}


def cli_dispatch(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_usage(sys.stderr)
            return 2
        return _COMMANDS[args.command](args, args.json)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 2
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 1
    except (
        FileNotFoundError,
        ValueError,
        RuntimeError,
        json.JSONDecodeError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli_dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
