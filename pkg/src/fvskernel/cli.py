"""Command-line front end.

Every invocation prints one report of ``key value`` lines.  Exit codes:
0 success, 1 usage or parse error, 2 validation failure, 3 oracle cap
exceeded, 4 verification mismatch.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

from . import __version__
from .config import default_caps
from .elim import (
    compute_elimination_forest,
    elimination_distance_to_forest,
    format_elimination_forest,
    parse_elimination_forest,
    tree_decomposition_from_elimination_forest,
    validate_elimination_forest,
)
from .errors import FvsKernelError, InputError, OracleLimitError, ParseError
from .graph import brute_force_fvs, format_edge_list, parse_edge_list
from .kernel import GammaConfig, gamma_bound, kernelize
from .reduction import (
    check_equivalence,
    k3_structure,
    parse_dimacs,
    reduce_cnf,
)
from .solver import FvsConstraint, brute_exists_min_fvs_with, constrained_fvs_size, fvs_size

SCHEMA_VERSION = 1

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_CAP, EXIT_MISMATCH = 0, 1, 2, 3, 4


class Report:
    """Ordered key-value report, emitted exactly once."""

    def __init__(self, command: str, inputs: list[bytes]):
        self.command = command
        self.digest = hashlib.sha256(b"\0".join(inputs)).hexdigest()[:16]
        self.items: list[tuple[str, str]] = []
        self.violations: list[str] = []
        self.started = time.perf_counter()

    def add(self, key: str, value) -> None:
        if isinstance(value, bool):
            value = "yes" if value else "no"
        elif isinstance(value, (list, tuple, set, frozenset)):
            value = ",".join(str(v) for v in sorted(value)) or "-"
        self.items.append((key, str(value)))

    def render(self) -> str:
        lines = [f"schema {SCHEMA_VERSION}", f"command {self.command}", f"input_digest {self.digest}"]
        lines.extend(f"{k} {v}" for k, v in self.items)
        lines.extend(f"violation {v}" for v in self.violations)
        lines.append(f"elapsed_s {time.perf_counter() - self.started:.3f}")
        return "\n".join(lines) + "\n"


def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def _ids(text: str | None) -> frozenset[int]:
    if not text:
        return frozenset()
    try:
        return frozenset(int(t) for t in text.replace(",", " ").split())
    except ValueError:
        raise ParseError(f"expected vertex ids, got {text!r}") from None


def parse_vertex_list(text: str) -> frozenset[int]:
    """Whitespace or comma separated ids; ``#`` starts a comment."""
    body = " ".join(line.split("#", 1)[0] for line in text.splitlines())
    return _ids(body)


def cmd_solve(args, out) -> int:
    raw = _read(args.graph)
    g = parse_edge_list(raw.decode())
    rep = Report("solve", [raw, (args.require or "").encode(), (args.separate or "").encode()])
    if args.eta is not None:
        ef = compute_elimination_forest(g, args.eta)
        if ef is None:
            raise InputError(f"elimination distance to a forest exceeds --eta {args.eta}")
    else:
        eta = elimination_distance_to_forest(g, args.cap)
        if eta is None:
            raise OracleLimitError(f"elimination distance exceeds --cap {args.cap}")
        ef = compute_elimination_forest(g, eta)
    td = tree_decomposition_from_elimination_forest(g, ef)
    constrained = args.require is not None or args.separate is not None
    c = FvsConstraint(_ids(args.require), _ids(args.separate))
    size = fvs_size(g, td)
    rep.add("vertices", g.n)
    rep.add("edges", g.m)
    rep.add("width", td.width)
    rep.add("fvs", size)
    status = EXIT_OK
    answer = None
    if constrained:
        best = constrained_fvs_size(g, td, c)
        answer = best == size
        rep.add("constrained_min", best)
        rep.add("answer", answer)
    if args.oracle:
        caps = default_caps()
        osize, _ = brute_force_fvs(g, caps.brute_cap)
        agree = osize == size
        if constrained:
            agree = agree and brute_exists_min_fvs_with(g, c, caps.enumerate_cap) == answer
        rep.add("oracle_fvs", osize)
        rep.add("oracle_agrees", agree)
        if not agree:
            rep.violations.append("oracle mismatch")
            status = EXIT_MISMATCH
    out.write(rep.render())
    return status


def kernel_record(step, eta: int) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "eta": eta,
        "delta": step.delta,
        "modulator": sorted(step.modulator),
        "rounds": len(step.rounds),
        "round_stats": [r.as_dict() for r in step.rounds],
        "graph": format_edge_list(step.reduced),
    }


def cmd_kernelize(args, out) -> int:
    raw_g, raw_x = _read(args.graph), _read(args.modulator)
    g = parse_edge_list(raw_g.decode())
    x = parse_vertex_list(raw_x.decode())
    rep = Report("kernelize", [raw_g, raw_x, f"{args.eta} {args.gamma} {args.subset_cap}".encode()])
    bad = sorted(x - g.vertices)
    if bad:
        rep.violations.append(f"modulator holds unknown vertices {bad}")
    elif elimination_distance_to_forest(g.remove(x), args.eta) is None:
        rep.violations.append(f"G - X has elimination distance to a forest above {args.eta}")
    if rep.violations:
        rep.add("valid_modulator", False)
        out.write(rep.render())
        return EXIT_INVALID
    cfg = None
    if args.gamma is not None or args.subset_cap is not None:
        gamma = gamma_bound(args.eta) if args.gamma is None else args.gamma
        cfg = GammaConfig(gamma, args.subset_cap)
    step = kernelize(g, x, args.eta, cfg)
    rep.add("valid_modulator", True)
    rep.add("gamma", cfg.gamma if cfg else gamma_bound(args.eta))
    rep.add("gamma_sound", cfg is None or cfg.gamma >= gamma_bound(args.eta))
    rep.add("input_vertices", g.n)
    rep.add("reduced_vertices", step.reduced.n)
    rep.add("reduced_edges", step.reduced.m)
    rep.add("delta", step.delta)
    rep.add("modulator", step.modulator)
    rep.add("rounds", len(step.rounds))
    for r in step.rounds:
        rep.add(
            f"round_eta{r.eta}",
            f"components={r.components} dropped={r.components_dropped} "
            f"subsets={r.subsets_enumerated} max_retained={r.max_retained} tau={r.tau}",
        )
    status = EXIT_OK
    if args.verify:
        cap = default_caps().brute_cap
        if g.n > cap:
            rep.add("verified", "skipped")
        else:
            lhs = brute_force_fvs(g, cap)[0]
            rhs = brute_force_fvs(step.reduced, cap)[0] + step.delta
            rep.add("verified", lhs == rhs)
            if lhs != rhs:
                rep.violations.append(f"fvs(G)={lhs} but fvs(reduced)+delta={rhs}")
                status = EXIT_MISMATCH
    if args.output:
        Path(args.output).write_text(json.dumps(kernel_record(step, args.eta), indent=2) + "\n")
        rep.add("output", args.output)
    out.write(rep.render())
    return status


def cmd_reduce_sat(args, out) -> int:
    raw = _read(args.cnf)
    f = parse_dimacs(raw.decode())
    rep = Report("reduce-sat", [raw, args.pattern.encode()])
    if args.pattern != "k3":
        raise InputError(f"unsupported pattern {args.pattern!r}; available: k3")
    inst = reduce_cnf(f, k3_structure())
    rep.add("pattern", args.pattern)
    rep.add("variables", f.num_vars)
    rep.add("clauses", len(f.clauses))
    rep.add("vertices", inst.graph.n)
    rep.add("edges", inst.graph.m)
    rep.add("modulator_size", len(inst.modulator))
    rep.add("budget", inst.budget)
    status = EXIT_OK
    if args.verify:
        res = check_equivalence(f, inst)
        rep.add("satisfiable", res.satisfiable)
        rep.add("deletion_within_budget", res.deletion_set is not None)
        if res.holds:
            side = "SAT" if res.satisfiable else "UNSAT"
            rel = "some" if res.satisfiable else "no"
            rep.add("equivalence", f"holds: {side} <-> {rel} set of size <= t")
        else:
            rep.add("equivalence", "violated")
            rep.violations.append("satisfiability and deletion budget disagree")
            status = EXIT_MISMATCH
    if args.output:
        base = Path(args.output)
        base.with_suffix(".graph").write_text(format_edge_list(inst.graph))
        base.with_suffix(".json").write_text(json.dumps(inst.sidecar(), indent=2) + "\n")
        rep.add("output", str(base.with_suffix(".graph")))
    out.write(rep.render())
    return status


def cmd_ed(args, out) -> int:
    raw = _read(args.graph)
    g = parse_edge_list(raw.decode())
    rep = Report("ed", [raw, str(args.cap).encode()])
    eta = elimination_distance_to_forest(g, args.cap)
    if eta is None:
        raise OracleLimitError(f"elimination distance exceeds --cap {args.cap}")
    ef = compute_elimination_forest(g, eta)
    rep.add("ed", eta)
    for line in format_elimination_forest(ef).splitlines():
        rep.add("forest", line)
    out.write(rep.render())
    return EXIT_OK


def cmd_validate(args, out) -> int:
    raw_g, raw_f = _read(args.graph), _read(args.forest)
    g = parse_edge_list(raw_g.decode())
    ef = parse_elimination_forest(raw_f.decode())
    rep = Report("validate", [raw_g, raw_f, str(args.eta).encode()])
    res = validate_elimination_forest(g, ef, args.eta)
    rep.add("height", ef.height)
    rep.add("valid", res.ok)
    rep.violations.extend(f"{rule} violated: {detail}" for rule, detail in res.violations)
    out.write(rep.render())
    return EXIT_OK if res.ok else EXIT_INVALID


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fvskernel", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("--config", help="JSON file with default flag values")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="exact fvs by tree-decomposition DP")
    s.add_argument("graph")
    s.add_argument("--require", help="vertex ids that must be in the solution")
    s.add_argument("--separate", help="terminal ids that must end up disconnected")
    s.add_argument("--eta", type=int, help="use an elimination forest of this height")
    s.add_argument("--cap", type=int, default=8, help="cap on the elimination distance search")
    s.add_argument("--oracle", action="store_true", help="cross-check against brute force")
    s.set_defaults(func=cmd_solve)

    k = sub.add_parser("kernelize", help="kernelize with a modulator")
    k.add_argument("graph")
    k.add_argument("modulator")
    k.add_argument("--eta", type=int, help="elimination distance bound for G - X (required)")
    k.add_argument("--gamma", type=int, help="override gamma; sound only when >= gamma_bound(eta)")
    k.add_argument("--subset-cap", type=int, help="largest modulator subset enumerated")
    k.add_argument("--verify", action="store_true", help="brute-force check fvs(G) = fvs(G') + delta")
    k.add_argument("--output", help="write the kernel record (JSON) here")
    k.set_defaults(func=cmd_kernelize)

    r = sub.add_parser("reduce-sat", help="CNF to feedback vertex set instance")
    r.add_argument("cnf")
    r.add_argument("--pattern", default="k3")
    r.add_argument("--verify", action="store_true", help="brute-force SAT and deletion side")
    r.add_argument("--output", help="write <output>.graph and <output>.json")
    r.set_defaults(func=cmd_reduce_sat)

    e = sub.add_parser("ed", help="elimination distance to a forest with witness")
    e.add_argument("graph")
    e.add_argument("--cap", type=int, default=8)
    e.set_defaults(func=cmd_ed)

    v = sub.add_parser("validate", help="check an elimination forest")
    v.add_argument("graph")
    v.add_argument("forest")
    v.add_argument("--eta", type=int, help="height bound (required)")
    v.set_defaults(func=cmd_validate)
    return p


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    args = parser.parse_args(argv)
    if args.config:
        try:
            conf = json.loads(Path(args.config).read_text())
        except (OSError, ValueError) as exc:
            raise ParseError(f"cannot load config {args.config}: {exc}") from None
        section = {**conf.get("defaults", {}), **conf.get(args.command, {})}
        given = {a.split("=")[0].lstrip("-").replace("-", "_") for a in argv if a.startswith("--")}
        for key, value in section.items():
            key = key.replace("-", "_")
            if key not in given and hasattr(args, key):
                setattr(args, key, value)
    if args.command in ("kernelize", "validate") and args.eta is None:
        parser.error("--eta is required (on the command line or in the config file)")
    return args


def main(argv: list[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    argv = sys.argv[1:] if argv is None else argv
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args, out)
    except OracleLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ParseError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FvsKernelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
