"""Command-line interface.

Exit codes: 0 success (and verdict YES for `principal`), 1 verdict NO,
2 malformed input, 3 internal disagreement between decision routes (a bug).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import List, Optional

from . import checks, formats
from .checks import InstanceSeed, run_property_suite
from .errors import (
    AmbiguousMembership,
    HybridJacError,
    InputError,
    InternalDisagreement,
)
from .jacobian import (
    aj_hybrid,
    homology_rank,
    aj_preimage,
    is_principal_hybrid,
    lift_divisor,
)
from .complexes import gamma_part
from .tropical import decompose_chip_firing, period_matrix

EXIT_OK = 0
EXIT_NO = 1
EXIT_INPUT = 2
EXIT_DISAGREEMENT = 3

DEFAULT_FLOAT_EPSILON = Fraction(1, 10**9)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hybridjac",
        description="Exact divisor theory on metrized complexes of Riemann surfaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, **kwargs) -> argparse.ArgumentParser:
        p = sub.add_parser(name, **kwargs)
        p.add_argument("--instance", help="instance document (JSON file)")
        p.add_argument("--divisor", help="divisor document (JSON file)")
        p.add_argument("--function", help="function document (JSON file)")
        p.add_argument("--target", help="coordinates document (JSON file)")
        p.add_argument("--mode", choices=["exact", "float"])
        p.add_argument("--epsilon", help="float-mode tolerance (rational)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--cases", type=int, default=20)
        p.add_argument(
            "--algorithm", choices=["lattice", "proof", "both"], default="both"
        )
        p.add_argument("--json", action="store_true", dest="as_json")
        return p

    add("validate", help="parse and validate an instance")
    add("genus", help="total genus of an instance")
    add("periods", help="tropical period matrix")
    add("aj", help="Abel-Jacobi coordinates of a divisor")
    add("principal", help="decide whether a degree-0 divisor is principal")
    add("lift", help="lift a divisor on the graph to the complex")
    add("gamma-part", help="project a divisor to the underlying graph")
    add("decompose", help="chip-firing decomposition of a graph function")
    add("rank", help="rank of the first homology of an instance")
    add("preimage", help="divisor mapping to given Jacobian coordinates")
    check = add("check", help="run randomized property suites")
    check.add_argument("suites", nargs="*", help="suite names (default: all)")
    return parser


def _resolve_mode(args) -> str:
    mode = args.mode or os.environ.get("HYBRID_JACOBI_MODE") or "exact"
    if mode not in ("exact", "float"):
        raise InputError(f"HYBRID_JACOBI_MODE={mode!r} is not exact|float")
    return mode


def _epsilon(args, mode: str) -> Optional[Fraction]:
    if mode == "exact":
        return None
    if args.epsilon is None:
        return DEFAULT_FLOAT_EPSILON
    eps = formats.rat_from_json(args.epsilon, "--epsilon")
    if eps <= 0:
        raise InputError("--epsilon must be positive")
    return eps


def _require(args, name: str) -> str:
    value = getattr(args, name.lstrip("-").replace("-", "_"))
    if value is None:
        raise InputError(f"{args.command} requires {name}")
    return value


def _load(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return formats.load_document(fh.read())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _load_instance(args):
    return formats.instance_from_json(_load(_require(args, "--instance")))


def _emit(args, payload, human: str) -> None:
    if args.as_json:
        sys.stdout.write(formats.dump_canonical(payload))
    else:
        sys.stdout.write(human + "\n")


def _cmd_validate(args, mode) -> int:
    m = _load_instance(args)
    _emit(args, {"ok": True, "genus": m.genus}, f"ok (genus {m.genus})")
    return EXIT_OK


def _cmd_genus(args, mode) -> int:
    m = _load_instance(args)
    _emit(args, {"genus": m.genus}, str(m.genus))
    return EXIT_OK


def _cmd_periods(args, mode) -> int:
    m = _load_instance(args)
    pd = period_matrix(m.graph)
    payload = {
        "nontree_edges": list(pd.basis.nontree_edges),
        "matrix": [
            [formats.rat_to_json(x, mode) for x in row] for row in pd.matrix
        ],
    }
    human = "\n".join(" ".join(str(x) for x in row) for row in pd.matrix) or "[]"
    _emit(args, payload, human)
    return EXIT_OK


def _cmd_aj(args, mode) -> int:
    m = _load_instance(args)
    d = formats.hybrid_divisor_from_json(m, _load(_require(args, "--divisor")))
    pd = period_matrix(m.graph)
    coords = aj_hybrid(m, d, pd=pd)
    payload = formats.coordinates_to_json(m, coords, mode)
    _emit(args, payload, formats.dump_canonical(payload).rstrip("\n"))
    return EXIT_OK


def _cmd_principal(args, mode) -> int:
    m = _load_instance(args)
    d = formats.hybrid_divisor_from_json(m, _load(_require(args, "--divisor")))
    verdict = is_principal_hybrid(
        m, d, algorithm=args.algorithm, epsilon=_epsilon(args, mode)
    )
    payload = {
        "principal": verdict.is_principal,
        "routes": list(verdict.routes),
    }
    if verdict.cycle_coords is not None:
        payload["cycle_coords"] = list(verdict.cycle_coords)
    if verdict.surface_coords is not None:
        payload["surface_coords"] = {
            v: list(c) for v, c in sorted(verdict.surface_coords.items())
        }
    if verdict.reason:
        payload["reason"] = verdict.reason
    if verdict.witness is not None:
        payload["witness"] = formats.pl_to_json(verdict.witness, mode)
    human = "YES" if verdict.is_principal else f"NO ({verdict.reason})"
    _emit(args, payload, human)
    return EXIT_OK if verdict.is_principal else EXIT_NO


def _cmd_lift(args, mode) -> int:
    m = _load_instance(args)
    d = formats.tropical_divisor_from_json(m.graph, _load(_require(args, "--divisor")))
    lifted = lift_divisor(m, d)
    payload = formats.hybrid_divisor_to_json(lifted, mode)
    _emit(args, payload, formats.dump_canonical(payload).rstrip("\n"))
    return EXIT_OK


def _cmd_gamma_part(args, mode) -> int:
    m = _load_instance(args)
    d = formats.hybrid_divisor_from_json(m, _load(_require(args, "--divisor")))
    payload = formats.tropical_divisor_to_json(gamma_part(m, d), mode)
    _emit(args, payload, formats.dump_canonical(payload).rstrip("\n"))
    return EXIT_OK


def _cmd_decompose(args, mode) -> int:
    m = _load_instance(args)
    doc = _load(_require(args, "--function"))
    if isinstance(doc, dict):
        f = formats.hybrid_function_from_json(m, doc).f_gamma
    else:
        f = formats.pl_from_json(m.graph, doc)
    moves = decompose_chip_firing(f)
    payload = [
        {
            "low": formats.rat_to_json(mv.low_value, mode),
            "high": formats.rat_to_json(mv.high_value, mode),
            "function": formats.pl_to_json(mv.function, mode),
        }
        for mv in moves
    ]
    _emit(args, payload, f"{len(moves)} move(s)")
    return EXIT_OK


def _cmd_rank(args, mode) -> int:
    m = _load_instance(args)
    r = homology_rank(m)
    _emit(args, {"rank": r}, str(r))
    return EXIT_OK


def _cmd_preimage(args, mode) -> int:
    m = _load_instance(args)
    pd = period_matrix(m.graph)
    target = formats.coordinates_from_json(
        m, pd.genus, _load(_require(args, "--target"))
    )
    m2, d = aj_preimage(m, target, pd)
    payload = {
        "instance": formats.instance_to_json(m2, mode),
        "divisor": formats.hybrid_divisor_to_json(d, mode),
    }
    _emit(args, payload, formats.dump_canonical(payload).rstrip("\n"))
    return EXIT_OK


def _cmd_check(args, mode) -> int:
    names = args.suites or sorted(checks.SUITES)
    cfg = InstanceSeed(args.seed)
    results = [run_property_suite(name, cfg, args.cases) for name in names]
    payload = {"results": [r.to_json() for r in results]}
    lines = []
    for r in results:
        status = "ok" if r.ok else f"{len(r.failures)} FAILURE(S)"
        lines.append(f"{r.suite}: {r.cases} cases, {status} [{r.wall_time:.2f}s]")
        for seed, msg in r.failures:
            lines.append(f"  seed {seed}: {msg}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if all(r.ok for r in results) else EXIT_NO


_COMMANDS = {
    "validate": _cmd_validate,
    "genus": _cmd_genus,
    "periods": _cmd_periods,
    "aj": _cmd_aj,
    "principal": _cmd_principal,
    "lift": _cmd_lift,
    "gamma-part": _cmd_gamma_part,
    "decompose": _cmd_decompose,
    "rank": _cmd_rank,
    "preimage": _cmd_preimage,
    "check": _cmd_check,
}


def run_cli(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    try:
        mode = _resolve_mode(args)
        return _COMMANDS[args.command](args, mode)
    except InternalDisagreement as exc:
        sys.stderr.write(f"internal disagreement: {exc}\n")
        return EXIT_DISAGREEMENT
    except AmbiguousMembership as exc:
        sys.stderr.write(f"ambiguous membership: {exc}\n")
        return EXIT_INPUT
    except (InputError, HybridJacError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
