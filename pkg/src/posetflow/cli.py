"""Command-line front end: ``posetflow <command> ...``.

Poset specifiers are ``boolean:n``, ``symmetric:n``, ``partition:n``,
``chain:m`` (or ``chain:w1,w2,...``), ``claw:m``, ``file:path.json`` and
products of these joined by `` x ``. Network targets for ``flow`` are a
network JSON path or ``hasse(<spec>)``.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass

from . import families, flownet, morphism, poset, sperner
from .errors import PosetflowError

EXIT_OK, EXIT_ERROR, EXIT_NOT_SPERNER = 0, 1, 2


@dataclass(frozen=True)
class PosetSpec:
    family: str
    parameter: str

    def __str__(self) -> str:
        return f"{self.family}:{self.parameter}"


def parse_spec(text: str) -> list[PosetSpec]:
    """Split a product expression into factor specs."""
    parts = [p.strip() for p in re.split(r"\s+x\s+", text.strip())]
    out = []
    for part in parts:
        if ":" not in part:
            if part.endswith(".json"):
                out.append(PosetSpec("file", part))
                continue
            raise ValueError(f"bad poset spec {part!r}; expected family:parameter")
        family, parameter = part.split(":", 1)
        if family not in ("boolean", "symmetric", "partition", "chain", "claw", "file"):
            raise ValueError(f"unknown poset family {family!r}")
        out.append(PosetSpec(family, parameter))
    return out


def _int(spec: PosetSpec) -> int:
    try:
        return int(spec.parameter)
    except ValueError:
        raise ValueError(f"{spec}: parameter must be an integer") from None


def build_factor(spec: PosetSpec) -> poset.GradedPoset:
    if spec.family == "boolean":
        return families.boolean_lattice(_int(spec))
    if spec.family == "symmetric":
        return families.symmetric_group_refinement(_int(spec))[0]
    if spec.family == "partition":
        return families.partition_lattice(_int(spec))
    if spec.family == "claw":
        return poset.claw(_int(spec))
    if spec.family == "chain":
        if "," in spec.parameter:
            weights = [int(w) for w in spec.parameter.split(",")]
            return poset.chain(len(weights), weights)
        return poset.chain(_int(spec))
    return poset.load_poset(spec.parameter)


def build_poset_from_spec(text: str) -> poset.GradedPoset:
    factors = [build_factor(s) for s in parse_spec(text)]
    P = factors[0]
    for Q in factors[1:]:
        P = poset.product(P, Q)
    return P


def build_network_target(text: str) -> flownet.Network:
    m = re.fullmatch(r"hasse\((.*)\)", text.strip())
    if m:
        return flownet.hasse_network(build_poset_from_spec(m.group(1)))
    return flownet.load_network(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _labels(P, ids) -> list[str]:
    return [P.labels[v] for v in sorted(ids)]


def _nfp_json(records) -> list[dict]:
    out = []
    for r in records:
        row = {"k": r.k, "feasible": r.feasible}
        if r.violating is not None:
            row["violating"] = sorted(r.violating)
            row["violating_source"] = r.violating_source
        out.append(row)
    return out


# -- commands ----------------------------------------------------------------

def cmd_sperner(args) -> int:
    P = build_poset_from_spec(args.spec)
    report = sperner.is_sperner(P, name=args.spec, with_nfp=not args.no_nfp, jobs=args.jobs)
    if args.report_dir:
        from .plotting import write_report_files

        table, figure = write_report_files(report, args.report_dir)
        print(f"wrote {table} and {figure}", file=sys.stderr)
    if args.json:
        print(_dump({
            "spec": args.spec,
            "elements": P.element_count,
            "width": str(report.width),
            "level_weights": [str(w) for w in report.level_weights],
            "max_level": {"rank": report.max_level[0], "weight": str(report.max_level[1])},
            "verdict": report.verdict,
            "witness": _labels(P, report.witness.members),
            "nfp": _nfp_json(report.nfp),
            "nfp_holds": report.nfp_holds,
        }))
    else:
        rank, level = report.max_level
        if report.verdict:
            print(f"width {report.width} = max level {level}: SPERNER")
        else:
            print(f"width {report.width} > max level {level}: NOT SPERNER")
        print(f"poset {args.spec}: {P.element_count} elements, {len(P.covers)} covers")
        print("level weights: " + " ".join(map(str, report.level_weights)) + f" (max at rank {rank})")
        shown = _labels(P, report.witness.members)
        more = f" ... (+{len(shown) - 12})" if len(shown) > 12 else ""
        print("witness antichain: " + " ".join(shown[:12]) + more)
        for r in report.nfp:
            status = "normalized flow" if r.feasible else f"NO normalized flow, violating X = {_labels(P, r.violating)}"
            print(f"ranks {r.k}-{r.k + 1}: {status}")
    if report.verdict and report.nfp_holds:
        return EXIT_OK
    return EXIT_NOT_SPERNER


def cmd_width(args) -> int:
    P = build_poset_from_spec(args.spec)
    if args.oracle:
        w = poset.brute_force_width(P)
        value, members = w.total_weight, w.members
    else:
        value, witness = sperner.width(P)
        members = witness.members
    if args.json:
        print(_dump({"spec": args.spec, "width": str(value), "witness": _labels(P, members)}))
    else:
        print(f"width {value}")
        print("witness antichain: " + " ".join(_labels(P, members)))
    return EXIT_OK


def cmd_nfp(args) -> int:
    P = build_poset_from_spec(args.spec)
    records = sperner.check_nfp(P, jobs=args.jobs)
    if args.report_dir:
        from .plotting import write_report_files

        value, witness = sperner.width(P)
        weights = tuple(P.level_weights())
        best = max(range(len(weights)), key=lambda r: (weights[r], -r))
        report = sperner.SpernerReport(args.spec, value, witness, weights, (best, weights[best]), tuple(records))
        write_report_files(report, args.report_dir)
    if args.json:
        print(_dump({"spec": args.spec, "nfp": _nfp_json(records), "holds": all(r.feasible for r in records)}))
    else:
        for r in records:
            print(f"ranks {r.k}-{r.k + 1}: {'feasible' if r.feasible else 'infeasible'}")
        print("NFP holds" if all(r.feasible for r in records) else "NFP fails")
    return EXIT_OK if all(r.feasible for r in records) else EXIT_NOT_SPERNER


def cmd_collapse(args) -> int:
    P = build_poset_from_spec(args.spec)
    if args.stage == "two-chain":
        specs = parse_spec(args.spec)
        if len(specs) != 1 or specs[0].family != "symmetric":
            raise ValueError("the two-chain stage applies to symmetric:n only")
        tc, phi = morphism.collapse_to_two_chain(_int(specs[0]) - 1)
    else:
        _, phi = morphism.collapse_to_chain(P)
    out = {
        "spec": args.spec,
        "stage": args.stage,
        "codomain": flownet.network_to_dict(phi.codomain),
        "vertex_map": {P.labels[x]: phi.codomain.labels[y] for x, y in enumerate(phi.vertex_map)},
    }
    status = EXIT_OK
    if args.verify:
        report = morphism.verify_flow_morphism(phi)
        out["axioms"] = report.axioms()
        out["failures"] = report.failures()
        if report.ok:
            top = flownet.min_flow(phi.codomain)
            pre = morphism.pull_back_antichain(phi, top.antichain)
            out["codomain_max_antichain"] = [phi.codomain.labels[v] for v in sorted(top.antichain)]
            out["pulled_back_antichain"] = _labels(P, pre)
            out["pulled_back_weight"] = str(phi.domain.weight(pre))
        else:
            status = EXIT_NOT_SPERNER
    print(_dump(out))
    return status


def cmd_stirling(args) -> int:
    print(" ".join(map(str, families.stirling_row(args.kind, args.n))))
    return EXIT_OK


def cmd_flow(args) -> int:
    N = build_network_target(args.target)
    if args.problem == "max":
        res = flownet.max_flow(N)
        witness_name, witness = "cut", res.cut
    else:
        res = flownet.min_flow(N)
        witness_name, witness = "antichain", res.antichain
    if args.json:
        print(_dump({
            "problem": args.problem,
            "value": str(res.value),
            witness_name: [N.labels[v] for v in sorted(witness)],
            "flow": flownet.flow_to_list(res.flow),
        }))
    else:
        print(f"{'MaxFlow' if args.problem == 'max' else 'MinFlow'} value {res.value}")
        print(f"{witness_name}: " + " ".join(N.labels[v] for v in sorted(witness)))
    return EXIT_OK


def cmd_export(args) -> int:
    P = build_poset_from_spec(args.spec)
    if args.format == "dot":
        sys.stdout.write(poset.to_dot(P, args.spec))
    else:
        print(_dump(poset.poset_to_dict(P)))
    return EXIT_OK


def cmd_selftest(args) -> int:
    from .selftest import run_selftest

    results = run_selftest(seed=args.seed, trials=args.trials)
    for r in results:
        line = f"{'PASS' if r.passed else 'FAIL'}  {r.name}  ({r.trials} trials, {r.failures} failures)"
        print(line + (f"  {r.detail}" if r.detail else ""))
    return EXIT_OK if all(r.passed for r in results) else EXIT_NOT_SPERNER


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="posetflow", description="Sperner verdicts by exact network flows.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sperner", help="width, level profile, verdict and NFP report")
    p.add_argument("spec")
    p.add_argument("--json", action="store_true")
    p.add_argument("--no-nfp", action="store_true", help="skip the rank-pair normalized flow checks")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--report-dir", help="write a level table (.tsv) and figure (.png) here")
    p.set_defaults(func=cmd_sperner)

    p = sub.add_parser("width", help="maximum-weight antichain")
    p.add_argument("spec")
    p.add_argument("--json", action="store_true")
    p.add_argument("--oracle", action="store_true", help="use exhaustive search instead of min flow")
    p.set_defaults(func=cmd_width)

    p = sub.add_parser("nfp", help="normalized flow property on consecutive ranks")
    p.add_argument("spec")
    p.add_argument("--json", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--report-dir")
    p.set_defaults(func=cmd_nfp)

    p = sub.add_parser("collapse", help="collapse a poset by a flow morphism")
    p.add_argument("spec")
    p.add_argument("--stage", choices=["two-chain", "chain"], default="chain")
    p.add_argument("--verify", action="store_true")
    p.set_defaults(func=cmd_collapse)

    p = sub.add_parser("stirling", help="a row of Stirling numbers")
    p.add_argument("kind", choices=["first", "second"])
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_stirling)

    p = sub.add_parser("flow", help="MaxFlow or MinFlow of a network")
    p.add_argument("problem", choices=["max", "min"])
    p.add_argument("target", help="network JSON file or hasse(<spec>)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_flow)

    p = sub.add_parser("export", help="export a poset as DOT or JSON")
    p.add_argument("spec")
    p.add_argument("format", choices=["dot", "json"])
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("selftest", help="randomized oracle-equivalence suites")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=200)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (PosetflowError, ValueError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
