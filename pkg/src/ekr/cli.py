"""Command-line front end: EKR checks, subgroup surveys and witness replay.

Exit codes: 0 property holds, 1 property fails, 2 not computed (a cap was
hit), 3 certificate replay failure, 64 usage or malformed spec, 74 I/O error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .action import build_coset_action
from .catalog import load_group
from .ekrgraph import (MAX_CLIQUE_VERTICES, MAX_EXTREMAL, build_graph, check_strong_ekr,
                       check_weak_ekr)
from .groupcore import (DEFAULT_ORDER_CAP, CapExceeded, Group, GroupError, subgroup_classes,
                        subgroup_from_spec)
from .witnesses import WITNESSES, WitnessCertificate, build_witness

logger = logging.getLogger("ekr")

EXIT_HOLDS, EXIT_FAILS, EXIT_NOT_COMPUTED, EXIT_REPLAY = 0, 1, 2, 3
EXIT_USAGE, EXIT_IO = 64, 74
SURVEY_ORDER_CAP = 2000
MODES = ("weak", "strong", "witness", "survey")


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    mode: str
    group: dict | None = None
    subgroup: list | None = None
    witness: str | None = None
    params: dict = field(default_factory=dict)
    certificate: dict | None = None
    threads: int = 1
    seed: int = 0
    max_order: int = DEFAULT_ORDER_CAP
    max_clique_vertices: int = MAX_CLIQUE_VERTICES
    max_extremal: int = MAX_EXTREMAL
    output: str | None = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise UsageError(f"unknown mode {self.mode!r}")
        if self.threads < 1:
            raise UsageError("--threads must be >= 1")
        for name in ("max_order", "max_clique_vertices", "max_extremal"):
            if getattr(self, name) < 1:
                raise UsageError(f"--{name.replace('_', '-')} must be positive")


def _verdict_code(value) -> int:
    if value is True or value == "true":
        return EXIT_HOLDS
    if value is False or value == "false":
        return EXIT_FAILS
    return EXIT_NOT_COMPUTED


def _spot_check_transitivity(graph, seed: int, samples: int = 200) -> bool:
    """Randomized tripwire: adjacency is invariant under left translation."""
    G = graph.group
    rng = np.random.default_rng(seed)
    g, a, b = rng.integers(0, G.order, size=(3, samples))
    inv = G.inverses
    lhs = graph.connection[G.mul_many(inv[a], b)]
    rhs = graph.connection[G.mul_many(inv[G.mul_many(g, a)], G.mul_many(g, b))]
    return bool(np.array_equal(lhs, rhs))


def _check(G: Group, H, config: RunConfig) -> dict:
    action = build_coset_action(G, H)
    if not _spot_check_transitivity(build_graph(action), config.seed):
        raise RuntimeError("derangement graph is not translation invariant")
    if config.mode == "weak":
        report = check_weak_ekr(action, threads=config.threads,
                                max_vertices=config.max_clique_vertices)
    else:
        report = check_strong_ekr(action, threads=config.threads,
                                  max_vertices=config.max_clique_vertices,
                                  max_extremal=config.max_extremal)
    return report.to_dict()


def run_check(config: RunConfig) -> tuple[int, dict]:
    if config.group is None or config.subgroup is None:
        raise UsageError(f"mode {config.mode} needs --group and a subgroup")
    G = load_group(config.group, config.max_order)
    H = subgroup_from_spec(G, config.subgroup)
    report = _check(G, H, config)
    key = "weak" if config.mode == "weak" else "strong"
    return _verdict_code(report[key]), report


def _survey_one(G: Group, H, config: RunConfig) -> dict:
    sub = RunConfig(mode="strong", threads=1, seed=config.seed,
                    max_clique_vertices=config.max_clique_vertices,
                    max_extremal=config.max_extremal)
    try:
        report = _check(G, H, sub)
    except CapExceeded as exc:
        report = {"weak": None, "strong": "not_computed", "diagnostic": str(exc)}
    return {"subgroup_order": H.order,
            "generators": [G.encode(g) for g in H.generators()],
            "report": report}


def run_survey(config: RunConfig) -> tuple[int, dict]:
    """Strong check for one subgroup per conjugacy class, plus the group-level
    aggregate (weak/strong EKR for every transitive action)."""
    if config.group is None:
        raise UsageError("survey needs --group")
    G = load_group(config.group, config.max_order)
    if G.order > SURVEY_ORDER_CAP:
        raise CapExceeded(f"survey is capped at |G| <= {SURVEY_ORDER_CAP}")
    classes = subgroup_classes(G)
    with ThreadPoolExecutor(max_workers=config.threads) as pool:
        rows = list(pool.map(lambda H: _survey_one(G, H, config), classes))
    weaks = [r["report"]["weak"] for r in rows]
    strongs = [r["report"]["strong"] for r in rows]
    if any(w is None for w in weaks):
        weak = None if all(w is not False for w in weaks) else False
    else:
        weak = all(weaks)
    if weak is False or "false" in strongs:
        strong = "false"
    elif "not_computed" in strongs:
        strong = "not_computed"
    else:
        strong = "true"
    report = {"group": G.name, "group_order": G.order, "subgroup_classes": rows,
              "weak": weak, "strong": strong}
    return _verdict_code(strong), report


def run_witness(config: RunConfig) -> tuple[int, dict]:
    """Build (or load) a certificate and replay it."""
    if config.certificate is not None:
        cert = WitnessCertificate.from_dict(config.certificate)
    else:
        if not config.witness:
            raise UsageError("witness mode needs --witness NAME or --certificate FILE")
        if config.witness not in WITNESSES:
            raise UsageError(f"unknown witness {config.witness!r}; "
                             f"known: {', '.join(sorted(WITNESSES))}")
        cert = build_witness(config.witness, config.params)
    checks = cert.replay(config.max_order)
    out = cert.to_dict()
    out["replay"] = checks
    if not all(checks.values()):
        bad = [k for k, v in checks.items() if not v]
        logger.error("REPLAY FAILED for %s %s: %s", cert.name, cert.params, ", ".join(bad))
        return EXIT_REPLAY, out
    return EXIT_HOLDS, out


# -- argument handling ---------------------------------------------------------

def _parse_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _parse_params(items: list[str]) -> dict:
    out = {}
    for item in items:
        if "=" not in item:
            raise UsageError(f"--params expects K=V, got {item!r}")
        k, v = item.split("=", 1)
        out[k] = _parse_value(v)
    return out


def _read_json(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="ekr", description="Erdos-Ko-Rado checks for transitive group actions.")
    ap.add_argument("--group", help="group spec JSON file")
    sub = ap.add_mutually_exclusive_group()
    sub.add_argument("--subgroup", help="JSON file with a list of subgroup generators")
    sub.add_argument("--subgroup-gens", help="inline JSON list of subgroup generators")
    ap.add_argument("--mode", choices=MODES, default="strong")
    ap.add_argument("--witness", help=f"witness name ({', '.join(sorted(WITNESSES))})")
    ap.add_argument("--params", nargs="*", default=[], metavar="K=V")
    ap.add_argument("--certificate", help="replay a saved certificate JSON file")
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-order", type=int, default=DEFAULT_ORDER_CAP)
    ap.add_argument("--max-clique-vertices", type=int, default=MAX_CLIQUE_VERTICES)
    ap.add_argument("--max-extremal", type=int, default=MAX_EXTREMAL)
    ap.add_argument("--output", help="write the JSON report here (default: stdout)")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def config_from_args(args: argparse.Namespace) -> RunConfig:
    group = _read_json(args.group) if args.group else None
    if args.subgroup:
        subgroup = _read_json(args.subgroup)
    elif args.subgroup_gens is not None:
        subgroup = _parse_value(args.subgroup_gens)
        if not isinstance(subgroup, list):
            raise UsageError("--subgroup-gens must be a JSON list")
    else:
        subgroup = None
    cert = _read_json(args.certificate) if args.certificate else None
    return RunConfig(mode=args.mode, group=group, subgroup=subgroup, witness=args.witness,
                     params=_parse_params(args.params), certificate=cert,
                     threads=args.threads, seed=args.seed, max_order=args.max_order,
                     max_clique_vertices=args.max_clique_vertices,
                     max_extremal=args.max_extremal, output=args.output)


def _summary(mode: str, report: dict) -> str:
    if mode == "survey":
        lines = [f"{'|K|':>6} {'weak':>6} {'strong':>13}  generators"]
        for row in report["subgroup_classes"]:
            r = row["report"]
            lines.append(f"{row['subgroup_order']:>6} {str(r['weak']):>6} {r['strong']:>13}  "
                         f"{len(row['generators'])}")
        lines.append(f"group {report['group']}: weak={report['weak']} strong={report['strong']}")
        return "\n".join(lines)
    if mode == "witness":
        return (f"{report['name']} {report['params']} kind={report['kind']} "
                f"sizes={report['claimed_sizes']} replay={'ok' if all(report['replay'].values()) else 'FAILED'}")
    return (f"|G|={report['group_order']} index={report['index']} |H|={report['stabilizer_size']} "
            f"max_clique={report['max_clique']} weak={report['weak']} strong={report['strong']}")


def run(config: RunConfig) -> tuple[int, dict]:
    if config.mode == "survey":
        return run_survey(config)
    if config.mode == "witness":
        return run_witness(config)
    return run_check(config)


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"ekr: {exc}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = config_from_args(args)
        code, report = run(config)
    except UsageError as exc:
        print(f"ekr: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapExceeded as exc:
        print(f"ekr: not computed: {exc}", file=sys.stderr)
        return EXIT_NOT_COMPUTED
    except (GroupError, KeyError, TypeError, ValueError) as exc:
        print(f"ekr: malformed input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"ekr: {exc}", file=sys.stderr)
        return EXIT_IO
    text = json.dumps(report, indent=1)
    try:
        if config.output:
            Path(config.output).write_text(text + "\n")
        else:
            sys.stdout.write(text + "\n")
    except OSError as exc:
        print(f"ekr: cannot write report: {exc}", file=sys.stderr)
        return EXIT_IO
    print(_summary(config.mode, report), file=sys.stderr)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
