"""Command-line harness.

Exit status: 0 on success, 1 on a domain error (including capacity and
filesystem failures), 2 on a usage error (bad flags or a malformed config).
"""
from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .cocycle import CocycleSystem
from .cyclic import (CyclicProduct, annihilator, enumerate_subgroups, format_element,
                     has_star_property, is_coupling, subgroup_closure)
from .errors import DomainError
from .goldens import diff, load_fixture, regenerate
from .lattice import (INFINITE, LatticeSubgroup, index, intersect, is_rigidity, member,
                      minimal_period, project_mod, separate)
from .odometer import build_spec
from .report import (ConfigError, default_output_path, load_config, run_simulation,
                     write_report)
from .spectral import ip_character_trace


class UsageError(Exception):
    pass


def parse_vector(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"malformed integer vector {text!r}") from None


def parse_vectors(text: str | None) -> list[tuple[int, ...]]:
    if text is None or not text.strip():
        return []
    return [parse_vector(part) for part in text.split(";") if part.strip()]


def parse_range(text: str) -> list[int]:
    try:
        if "-" in text:
            a, b = text.split("-")
            return list(range(int(a), int(b) + 1))
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"malformed index range {text!r}") from None


def _subgroup_text(S) -> str:
    return "{" + ",".join(format_element(e) for e in S.elements) + "}"


def _cmd_algebra(args) -> int:
    V = CyclicProduct(parse_vector(args.moduli))
    S = subgroup_closure(V, parse_vectors(args.gens))
    if args.action == "closure":
        print(_subgroup_text(S))
    elif args.action == "annihilator":
        print(_subgroup_text(annihilator(S)))
    elif args.action == "coupling":
        print(str(is_coupling(S)).lower())
    elif args.action == "star":
        print(str(has_star_property(S)).lower())
    elif args.action == "subgroups":
        groups = enumerate_subgroups(V)
        print(len(groups))
        for G in groups:
            print(_subgroup_text(G))
    return 0


def _lattice(text: str | None, dim: int | None) -> LatticeSubgroup:
    gens = parse_vectors(text)
    if not gens and dim is None:
        raise UsageError("--dim is required with an empty generating set")
    return LatticeSubgroup.from_generators(gens, dim)


def _cmd_lattice(args) -> int:
    G = _lattice(args.gens, args.dim)
    a = args.action
    if a == "index":
        ix = index(G)
        print("inf" if ix == INFINITE else ix)
    elif a == "normal-form":
        print(G)
    elif a == "period":
        print(",".join(str(k) for k in minimal_period(G)))
    elif a == "rigidity":
        print(str(is_rigidity(G)).lower())
    elif a == "member":
        if args.vector is None:
            raise UsageError("member needs --vector")
        print(str(member(G, parse_vector(args.vector))).lower())
    elif a == "project":
        k = parse_vector(args.period) if args.period else minimal_period(G)
        print(_subgroup_text(project_mod(G, k)))
    elif a == "separate":
        print(separate(G, parse_vectors(args.exclude)))
    elif a == "intersect":
        if args.other is None:
            raise UsageError("intersect needs --other")
        print(intersect(G, _lattice(args.other, G.dimension)))
    return 0


def _cmd_simulate(args) -> int:
    overrides = {"seed": args.seed, "samples": args.samples, "stages": args.stages,
                 "output": args.output}
    cfg = load_config(args.config, overrides)
    report = run_simulation(cfg, workers=args.workers, record_timing=not args.no_timing)
    path = write_report(report, default_output_path(cfg))
    sums = report.data["character_sums"]
    bad = sum(1 for s in sums if not s["consistent"])
    print(f"report written to {path}; {len(sums)} character sums, {bad} inconsistent with targets")
    return 0


def _cmd_ip_trace(args) -> int:
    moduli = parse_vector(args.moduli)
    V = CyclicProduct(moduli)
    K = subgroup_closure(V, parse_vectors(args.coupling))
    rp = args.rho_prime if args.rho_prime == "t" else int(args.rho_prime)
    sys_ = CocycleSystem(build_spec(len(moduli), moduli, args.stages, rp), K)
    trace = ip_character_trace(sys_, parse_vector(args.j), parse_range(args.range),
                               args.samples, args.seed, workers=args.workers)
    if args.json:
        out = {
            "j": list(trace.j),
            "target": trace.verdict.value,
            "entries": [{"alpha": list(e.alpha), "n_alpha": str(e.n_alpha), "m": str(e.m),
                         "value": [e.result.value.real, e.result.value.imag],
                         "error_bound": e.result.error_bound, "consistent": e.consistent}
                        for e in trace.entries],
            "deviation_by_min_alpha": {str(k): v for k, v in trace.deviation_by_min_alpha.items()},
        }
        print(json.dumps(out, indent=2))
        return 0
    print(f"j = {format_element(trace.j)}, target {trace.verdict.value}")
    for e in trace.entries:
        z = e.result.value
        flag = "ok" if e.consistent else "off"
        print(f"alpha={format_element(e.alpha):<12} m={e.m:<24} value={z.real:+.4f}{z.imag:+.4f}i"
              f" bound={e.result.error_bound:.4f} {flag}")
    for k, v in trace.deviation_by_min_alpha.items():
        print(f"min alpha {k}: max deviation {v:.4f}")
    return 0


def _cmd_goldens(args) -> int:
    expected = load_fixture(args.fixture)
    got = regenerate(expected["N"], expected["n_t"], expected["rho_prime"], expected["columns"])
    if args.write:
        with open(args.write, "w") as fh:
            json.dump(got, fh, indent=1)
            fh.write("\n")
    problems = diff(expected, got)
    total = sum(len(r) for table in ("input_data", "phi_columns") for r in expected[table].values())
    if problems:
        for table, l, j, e, g in problems:
            print(f"{table} l={l} j={j}: expected {e!r}, got {g!r}")
        print(f"{len(problems)} of {total} entries differ")
        return 1
    print(f"all {total} table entries match")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="polyrigid", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"polyrigid {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("algebra", help="subgroups of Z_k1 + ... + Z_kN")
    a.add_argument("action", choices=["closure", "annihilator", "coupling", "star", "subgroups"])
    a.add_argument("--moduli", required=True, help="comma-separated k_1,...,k_N")
    a.add_argument("--gens", default="", help='generators, e.g. "1,1;0,2"')
    a.set_defaults(func=_cmd_algebra)

    lt = sub.add_parser("lattice", help="subgroups of Z^N")
    lt.add_argument("action", choices=["index", "normal-form", "period", "rigidity", "member",
                                       "project", "separate", "intersect"])
    lt.add_argument("--gens", required=True, help='generators, e.g. "2,0;0,3"')
    lt.add_argument("--dim", type=int)
    lt.add_argument("--vector")
    lt.add_argument("--period")
    lt.add_argument("--exclude", help="vectors to keep out of the result")
    lt.add_argument("--other", help="generators of the second subgroup")
    lt.set_defaults(func=_cmd_lattice)

    s = sub.add_parser("simulate", help="run an experiment from a config file")
    s.add_argument("--config", required=True)
    s.add_argument("--output")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--seed", type=int)
    s.add_argument("--samples", type=int)
    s.add_argument("--stages", type=int)
    s.add_argument("--no-timing", action="store_true", help="omit the wall-clock field")
    s.set_defaults(func=_cmd_simulate)

    t = sub.add_parser("ip-trace", help="character sums along finite sums of tower heights")
    t.add_argument("--moduli", required=True)
    t.add_argument("--coupling", required=True)
    t.add_argument("--j", required=True)
    t.add_argument("--stages", type=int, default=4)
    t.add_argument("--rho-prime", default="1")
    t.add_argument("--range", default="1-3")
    t.add_argument("--samples", type=int, default=10000)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--workers", type=int, default=1)
    t.add_argument("--json", action="store_true")
    t.set_defaults(func=_cmd_ip_trace)

    g = sub.add_parser("goldens", help="regenerate and diff the construction tables")
    g.add_argument("--fixture")
    g.add_argument("--write")
    g.set_defaults(func=_cmd_goldens)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, ConfigError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
