"""Command-line entry point.

Every subcommand prints one JSON document on stdout (or a plain table with
``--format table``). Errors go to stderr as ``{"error": code, "message": ...}``.

Exit codes: 0 success; 1 a property failed, or a critical or degenerate
verdict was met under ``--strict``; 2 malformed or unusable input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import reduction as dh
from . import geometry as geo
from .errors import DiagonalRay, MalformedInput, U2Error
from .rep import from_json, index_set, is_generic, is_uniform, moment_never_zero
from .verify import SampleConfig, run_suite

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise MalformedInput(message)


def _int_list(text: str, what: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",")]
    except ValueError:
        raise MalformedInput(f"{what} must be comma-separated integers, got {text!r}") from None


def parse_nu(text: str) -> tuple[tuple[int, int], geo.RayDir]:
    raw = _int_list(text, "--nu")
    if len(raw) != 2:
        raise MalformedInput(f"--nu takes exactly two integers, got {text!r}")
    return (raw[0], raw[1]), geo.RayDir.of(raw)


def load_rep(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise MalformedInput(f"cannot read {path}: {exc.strerror}") from None
    return from_json(text)


def _nu_json(raw, prim):
    return {"raw": list(raw), "primitive": list(prim)}


def _verdict_name(rep, nu, fn):
    try:
        return fn(rep, nu)
    except DiagonalRay as exc:
        return exc.code


def cmd_analyze(args):
    rep = load_rep(args.rep)
    return {
        "generic": is_generic(rep),
        "uniform": is_uniform(rep),
        "moment_never_zero": moment_never_zero(rep),
        "dim": rep.dim,
        "index_count": len(index_set(rep)),
    }, "ok"


def cmd_polytope(args):
    return geo.moment_polytope(load_rep(args.rep)).to_json(), "ok"


def cmd_rays(args):
    rep = load_rep(args.rep)
    rays = [{"ray": list(r), "witnesses": [list(w) for w in ws]} for r, ws in geo.critical_rays(rep).items()]
    return {"rays": rays, "wedges": [w.to_json() for w in geo.wedges(rep)]}, "ok"


def cmd_transversal(args):
    rep = load_rep(args.rep)
    raw, nu = parse_nu(args.nu)
    out = {}
    degenerate = False
    for key, fn in (("psi", geo.psi_transverse), ("phi", geo.phi_transverse)):
        v = _verdict_name(rep, nu, fn)
        if isinstance(v, str):
            out[key] = v
            degenerate = True
        else:
            out[key] = v.kind
            degenerate |= not v.transverse
            if v.witnesses:
                out[f"{key}_witnesses"] = [list(w) for w in v.witnesses]
    out["nu"] = _nu_json(raw, nu)
    return out, "degenerate" if degenerate else "ok"


def cmd_reduce(args):
    rep = load_rep(args.rep)
    raw, nu = parse_nu(args.nu)
    verdict = geo.psi_transverse(rep, nu)
    if not verdict.transverse:
        out = {"kind": "none", **verdict.to_json(), "nu": _nu_json(raw, nu)}
        return out, "degenerate"
    out = dh.classify(rep, nu).to_json()
    out["nu"] = _nu_json(raw, nu)
    if is_uniform(rep):
        q = dh.quotient_weights_uniform(rep)
        out["quotient_weights"] = [[a, j, w] for (a, j), w in q.items()]
    if rep.r == 1 and rep.summands[0].l == 0:
        k = rep.summands[0].k
        try:
            out["isotopy"] = dh.isotopy_endpoints(k, nu).to_json()
        except U2Error:
            pass  # outside nu1 > (k-1) nu2 > 0
    return out, "ok"


def cmd_betti(args):
    base = _int_list(args.base, "--base")
    if any(b < 0 for b in base):
        raise MalformedInput("Betti numbers must be nonnegative")
    conic = dh.betti_conic_reduction(base)
    product = dh.betti_product_P1(base)
    return {"base": base, "conic_reduction": conic, "product_P1": product, "agree": conic == product}, "ok"


def cmd_verify(args):
    rep = load_rep(args.rep)
    nu_out = None
    nu = None
    if args.nu is not None:
        raw, nu = parse_nu(args.nu)
        nu_out = _nu_json(raw, nu)
    try:
        cfg = SampleConfig(
            samples=args.samples, seed=args.seed, tol_alg=args.tol_alg,
            tol_eig=args.tol_eig, fd_step=args.fd_step,
        )
    except ValueError as exc:
        raise MalformedInput(str(exc)) from None
    reports = run_suite(rep, nu, cfg)
    failed = any(r.status == "fail" for r in reports)
    errored = any(r.status == "error" for r in reports)
    out = {
        "nu": nu_out,
        "samples": cfg.samples,
        "seed": cfg.seed,
        "reports": [r.to_json() for r in reports],
        "all_pass": not failed,
    }
    # failures always gate; errors (e.g. a critical nu) only in strict mode
    return out, "fail" if failed else ("degenerate" if errored else "ok")


COMMANDS = {
    "analyze": cmd_analyze,
    "polytope": cmd_polytope,
    "rays": cmd_rays,
    "transversal": cmd_transversal,
    "reduce": cmd_reduce,
    "betti": cmd_betti,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--strict", action="store_true", help="exit 1 on critical or degenerate verdicts")
    common.add_argument("--output", help="write the result here instead of stdout")
    common.add_argument("--format", choices=("json", "table"), default="json")

    p = _Parser(prog="u2reduce", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in ("analyze", "polytope", "rays"):
        sub.add_parser(name, parents=[common]).add_argument("rep")
    for name in ("transversal", "reduce"):
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("rep")
        sp.add_argument("--nu", required=True, metavar="X,Y")
    sub.add_parser("betti", parents=[common]).add_argument("--base", required=True, metavar="B0,B1,...")
    sp = sub.add_parser("verify", parents=[common])
    sp.add_argument("rep")
    sp.add_argument("--nu", metavar="X,Y")
    sp.add_argument("--samples", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--tol-alg", type=float, default=1e-12)
    sp.add_argument("--tol-eig", type=float, default=1e-9)
    sp.add_argument("--fd-step", type=float, default=1e-4)
    return p


def render_table(obj, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and any(isinstance(x, (dict, list)) for x in _values(v)):
                lines.append(f"{pad}{k}:")
                lines.append(render_table(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v)}")
    elif isinstance(obj, list):
        for item in obj:
            if isinstance(item, dict):
                lines.append(pad + "  ".join(f"{k}={json.dumps(v)}" for k, v in item.items()))
            else:
                lines.append(pad + json.dumps(item))
    else:
        lines.append(pad + json.dumps(obj))
    return "\n".join(lines)


def _values(v):
    return v.values() if isinstance(v, dict) else v


def _emit(text: str, output: str | None):
    if output:
        Path(output).write_text(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _exit_code(gate: str, strict: bool) -> int:
    if gate == "fail" or (gate == "degenerate" and strict):
        return EXIT_FAIL
    return EXIT_OK


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        out, gate = COMMANDS[args.command](args)
    except U2Error as exc:
        sys.stderr.write(json.dumps(exc.to_json()) + "\n")
        return EXIT_INPUT
    text = render_table(out) if args.format == "table" else json.dumps(out)
    try:
        _emit(text, args.output)
    except OSError as exc:
        sys.stderr.write(json.dumps({"error": "output_error", "message": str(exc)}) + "\n")
        return EXIT_INPUT
    return _exit_code(gate, args.strict)


def main() -> None:
    sys.exit(run())
