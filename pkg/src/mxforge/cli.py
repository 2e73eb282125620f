"""mxforge command line: build, transform, verify, and report.

Exit codes: 0 success, 1 verification failure, 2 usage or input error.
Reports go to stdout as text; ``--report PATH`` additionally writes the
text plus a machine-readable ``PATH.json`` sidecar.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import builders, constellation, cosi, hadamard, io, tangle
from .core import (
    DEFAULT_TOL,
    LaurentMatrix,
    MatrixError,
    ToleranceConfig,
    is_paraunitary,
    is_unitary,
    laurent_from_const,
)
from .cosi import CosiError
from .examples import Corruptor, UnknownExample, example_names, run_example

__all__ = ["build_parser", "run", "main"]

OK, VERIFY_FAIL, USAGE = 0, 1, 2


def _tolerances(args) -> ToleranceConfig:
    if args.tol is None:
        return DEFAULT_TOL
    tol = float(args.tol)
    return ToleranceConfig(verify_tol=tol, prune_tol=min(1e-12, tol * 1e-3))


def _resolve_cosi(source: str, cfg: ToleranceConfig) -> cosi.CosiSet:
    """COSI source: ``fourier:N``, ``rotation:THETA``, ``columns:FILE``,
    or a cosi-set JSON file."""
    if source.startswith("fourier:"):
        return cosi.fourier_cosi(int(source.split(":", 1)[1]))
    if source.startswith("rotation:"):
        return cosi.rotation_cosi(float(source.split(":", 1)[1]))
    if source.startswith("columns:"):
        u = io.load(source.split(":", 1)[1])
        return cosi.from_unitary_columns(u, cfg)
    loaded = io.load(source)
    if not isinstance(loaded, cosi.CosiSet):
        raise ValueError(f"{source} does not contain a cosi-set")
    return loaded


def _write_report(path, lines, payload):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    Path(str(path) + ".json").write_text(json.dumps(payload, indent=1) + "\n", encoding="utf-8")


def _emit(lines, report_path, payload):
    for line in lines:
        print(line)
    if report_path:
        _write_report(report_path, lines, payload)


def _save_out(value, path, default_name):
    target = Path(path) if path else Path(default_name)
    io.save(value, target)
    print(f"wrote {target}")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_cosi(args, cfg):
    if args.action == "validate":
        s = _resolve_cosi(args.source, cfg)
        print(f"valid COSI set: {s.size} projectors of dimension {s.dim}")
        return OK
    s = _resolve_cosi(args.source, cfg)
    if args.merge_conjugates:
        s = cosi.merge_conjugates(s, cfg)
    if args.merge:
        groups = [tuple(int(x) for x in part.split(",")) for part in args.merge.split(";")]
        s = cosi.merge(s, groups, cfg)
    _save_out(s, args.output, "cosi.json")
    return OK


def _cmd_build(args, cfg):
    s = _resolve_cosi(args.cosi, cfg)
    if args.what == "latin":
        square = builders.LatinSquare.parse(args.square)
        phases = None
        if args.phases:
            rows = [[complex(x) for x in part.split()] for part in args.phases.split(";")]
            phases = builders.PhaseGrid(np.array(rows))
        g = builders.block_latin_unitary(s, square, phases, cfg)
        _save_out(g, args.output, "latin.json")
        return OK
    if args.what == "poly":
        exps = tuple(int(x) for x in args.exps.split(",")) if args.exps else ()
        if args.mode == "signed":
            signs = tuple(1 if x.strip() in ("+", "+1", "1") else -1 for x in args.signs.split(","))
            mode = builders.SignedSingleVar(signs, exps)
        elif args.mode == "multivar":
            mode = builders.MultiVar()
        else:
            thetas = tuple(float(x) for x in args.thetas.split(","))
            mode = builders.Phased(thetas, exps)
        p = builders.cosi_poly(s, mode, cfg)
        _save_out(p, args.output, "poly.json")
        return OK
    if args.what == "nott":
        series = builders.nott_series(s[0], s[1], args.depth, cfg)
        outdir = Path(args.output or "nott")
        for level, u in enumerate(series):
            io.save(u, outdir / f"level_{level}.json")
        print(f"wrote {len(series)} matrices to {outdir}")
        return OK
    raise ValueError(f"unknown build target {args.what!r}")


def _cmd_filterbank(args, cfg):
    stages = []
    for part in args.stages.split(";"):
        theta, exps = part.split(":")
        t0, t1 = exps.split(",")
        stages.append((float(theta), (int(t0), int(t1))))
    p = builders.filterbank_cascade(stages, cfg)
    _save_out(p, args.output, "filterbank.json")
    return OK


def _cmd_tangle(args, cfg):
    if args.action == "det-check":
        spec = io.load(args.spec)
        if not isinstance(spec, tangle.TangleSpec):
            raise ValueError(f"{args.spec} does not contain a tangle-spec")
        predicted = tangle.det_predict(np.asarray(spec.shuffler), spec.tangles)
        direct = complex(np.linalg.det(np.asarray(spec.product(cfg), dtype=complex)))
        denom = max(abs(direct), 1e-300)
        rel = abs(predicted - direct) / denom
        lines = [
            f"predicted determinant: {predicted}",
            f"direct determinant:    {direct}",
            f"relative error:        {rel:.3e}",
        ]
        _emit(lines, args.report, {"predicted": [predicted.real, predicted.imag],
                                   "direct": [direct.real, direct.imag], "relative_error": rel})
        return OK if rel <= 1e-8 else VERIFY_FAIL

    shuffler = io.load(args.shuffler)
    tangles = [io.load(p) for p in args.tangles]
    if args.action == "left":
        product = tangle.left_tangle(shuffler, tangles, cfg)
    else:
        product = tangle.right_tangle(tangles, shuffler, cfg)
    _save_out(product, args.output, "tangle.json")
    return OK


def _cmd_grow(args, cfg):
    seeds = [io.load(p) for p in args.seeds]
    shufflers = [io.load(p) for p in args.shufflers] if args.shufflers else "cycle-seeds"
    prop = tangle.Property(args.property)
    series = tangle.grow_series(
        seeds, shufflers, args.depth, args.permutations, prop, args.side, cfg, args.seed
    )
    outdir = Path(args.output or "grown")
    for idx, m in enumerate(series):
        io.save(m, outdir / f"member_{idx:03d}.json")
    print(f"wrote {len(series)} {prop.value} matrices to {outdir}")
    return OK


def _hadamard_report_lines(rep: hadamard.HadamardReport):
    lines = [
        f"order:            {rep.order}",
        f"scale:            {rep.scale:.12g}",
        f"hadamard:         {rep.is_hadamard}",
        f"butson type p:    {rep.butson_p}",
        f"symmetric:        {rep.symmetric}",
        f"skew:             {rep.skew}",
        f"unimodular resid: {rep.unimodular_residual:.3e}",
        f"gram residual:    {rep.gram_residual:.3e}",
    ]
    payload = {
        "order": rep.order,
        "scale": rep.scale,
        "is_hadamard": rep.is_hadamard,
        "butson_p": rep.butson_p,
        "symmetric": rep.symmetric,
        "skew": rep.skew,
        "unimodular_residual": rep.unimodular_residual,
        "gram_residual": rep.gram_residual,
    }
    return lines, payload


def _cmd_hadamard(args, cfg):
    if args.action == "verify":
        rep = hadamard.verify_hadamard(io.load(args.matrix), cfg, args.pmax)
        lines, payload = _hadamard_report_lines(rep)
        _emit(lines, args.report, payload)
        return OK if rep.is_hadamard else VERIFY_FAIL
    if args.action == "sym-square":
        l = hadamard.symmetric_hadamard_square(io.load(args.matrix), cfg)
        _save_out(l, args.output, "sym-square.json")
        rep = hadamard.verify_hadamard(l, cfg)
        lines, payload = _hadamard_report_lines(rep)
        _emit(lines, args.report, payload)
        return OK if rep.is_hadamard and rep.symmetric else VERIFY_FAIL
    if args.action == "skew4":
        a1, a2, a3 = (float(x) for x in args.alphas.split(","))
        h = hadamard.skew4_family(a1, a2, a3)
        _save_out(h, args.output, "skew4.json")
        rep = hadamard.verify_hadamard(h, cfg)
        lines, payload = _hadamard_report_lines(rep)
        _emit(lines, args.report, payload)
        return OK if rep.is_hadamard and rep.skew else VERIFY_FAIL
    if args.action == "mub":
        bases = [io.load(p) for p in args.bases]
        ok = hadamard.mub_check(bases, cfg)
        n = bases[0].shape[0]
        lines = [f"bases: {len(bases)} of dimension {n}", f"mutually unbiased: {ok}"]
        _emit(lines, args.report, {"count": len(bases), "dim": n, "mub": ok})
        return OK if ok else VERIFY_FAIL
    raise ValueError(f"unknown hadamard action {args.action!r}")


def _quality_lines(v: constellation.Constellation, rep, predicted=None):
    lines = [
        f"constellation:  {v.label or '(unnamed)'}",
        f"L (members):    {len(v.members)}",
        f"M (size):       {v.size}",
        f"rate R:         {rep.rate:.6g}",
        f"zeta:           {rep.zeta:.10f}",
        f"argmin pair:    {rep.argmin}",
        f"full diversity: {rep.full_diversity}",
    ]
    payload = {
        "label": v.label,
        "L": len(v.members),
        "M": v.size,
        "rate": rep.rate,
        "zeta": rep.zeta,
        "argmin": list(rep.argmin),
        "full_diversity": rep.full_diversity,
        "min_abs_det": rep.min_abs_det,
    }
    if predicted is not None:
        lines.append(f"predicted zeta: {predicted:.10f}")
        payload["predicted_zeta"] = predicted
    return lines, payload


def _cmd_constellation(args, cfg):
    if args.action == "build":
        s = _resolve_cosi(args.cosi, cfg)
        v = constellation.build_diag_root_constellation(s, args.n, cfg)
        outdir = Path(args.output or "constellation")
        manifest = {"kind": "constellation", "label": v.label, "size": v.size, "members": []}
        for idx, m in enumerate(v.members):
            name = f"member_{idx:03d}.json"
            io.save(m, outdir / name)
            manifest["members"].append(name)
        (outdir / "constellation.json").write_text(json.dumps(manifest, indent=1) + "\n", encoding="utf-8")
        rep = constellation.quality(v, cfg)
        lines, payload = _quality_lines(v, rep, constellation.predicted_quality(args.n))
        _emit(lines, args.report, payload)
        print(f"wrote {len(v.members)} members to {outdir}")
        return OK
    if args.action == "quality":
        members = [io.load(p) for p in args.members]
        size = members[0].shape[0]
        v = constellation.Constellation(size=size, members=tuple(members), label=args.label or "")
        rep = constellation.quality(v, cfg)
        lines, payload = _quality_lines(v, rep)
        _emit(lines, args.report, payload)
        return OK if rep.full_diversity else VERIFY_FAIL
    if args.action == "lift":
        tangles = [io.load(p) for p in args.tangles]
        if args.mode == "derangement":
            shuffler = io.load(args.shuffler)
            base = constellation.Constellation(
                size=tangles[0].shape[0], members=tuple(tangles), label="base"
            )
            lifted = constellation.derangement_lift(tangles, shuffler, cfg)
        else:
            us_members = [io.load(p) for p in args.us]
            base = constellation.Constellation(
                size=us_members[0].shape[0], members=tuple(us_members), label="base shufflers"
            )
            lifted = constellation.shuffler_lift(base, tangles, cfg)
        base_rep = constellation.quality(base, cfg) if len(base.members) >= 2 else None
        lines = []
        payload = {}
        if base_rep is not None:
            lines.append(f"base zeta:     {base_rep.zeta:.10f}")
            payload["base_zeta"] = base_rep.zeta
        if len(lifted.members) >= 2:
            lift_rep = constellation.quality(lifted, cfg)
            more, payload_more = _quality_lines(lifted, lift_rep)
            lines.extend(more)
            payload.update(payload_more)
        else:
            lines.append(f"lift produced a single member of size {lifted.size} (quality undefined)")
            payload.update({"L": 1, "M": lifted.size})
        outdir = Path(args.output or "lifted")
        for idx, m in enumerate(lifted.members):
            io.save(m, outdir / f"member_{idx:03d}.json")
        _emit(lines, args.report, payload)
        return OK
    raise ValueError(f"unknown constellation action {args.action!r}")


def _cmd_verify(args, cfg):
    target = io.load(args.matrix)
    prop = args.property
    if prop == "unitary":
        ok = is_unitary(np.asarray(target, dtype=complex), cfg)
    elif prop == "paraunitary":
        p = target if isinstance(target, LaurentMatrix) else laurent_from_const(np.asarray(target, dtype=complex))
        ok = is_paraunitary(p, cfg)
    elif prop == "hadamard":
        ok = hadamard.verify_hadamard(target, cfg).is_hadamard
    elif prop == "skew":
        rep = hadamard.verify_hadamard(target, cfg)
        ok = rep.is_hadamard and rep.skew
    elif prop == "cosi":
        try:
            cosi.validate(list(target) if isinstance(target, cosi.CosiSet) else target, cfg)
            ok = True
        except CosiError as exc:
            print(exc)
            ok = False
    else:
        raise ValueError(f"unknown property {prop!r}")
    print(f"{prop}: {'ok' if ok else 'FAILED'}")
    return OK if ok else VERIFY_FAIL


def _cmd_example(args, cfg):
    if args.list:
        for name in example_names():
            print(name)
        return OK
    if not args.name:
        print("example name required (or --list)", file=sys.stderr)
        return USAGE
    entry = (0, 0)
    if args.corrupt_entry:
        i, j = args.corrupt_entry.split(",")
        entry = (int(i), int(j))
    corrupt = Corruptor(args.corrupt, entry)
    result = run_example(args.name, cfg, corrupt)
    lines = result.lines()
    outdir = Path(args.output or f"example-{args.name}")
    for key, value in result.artifacts.items():
        io.save(value, outdir / f"{key}.json")
    payload = {
        "example": result.name,
        "ok": result.ok,
        "checks": [{"name": c.name, "ok": c.ok, "detail": c.detail} for c in result.checks],
    }
    _write_report(outdir / "report.txt", lines, payload)
    for line in lines:
        print(line)
    return OK if result.ok else VERIFY_FAIL


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mxforge",
        description="Construct and verify entangled structured matrices: "
        "COSI builds, tangle products, Hadamard constructions, constellations.",
    )
    parser.add_argument("--tol", type=float, default=None, help="override the verification tolerance")
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized policies")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cosi", help="build or validate COSI sets")
    p.add_argument("action", choices=["build", "validate"])
    p.add_argument("source", help="fourier:N | rotation:THETA | columns:FILE | FILE.json")
    p.add_argument("--merge", help="index groups, e.g. '0;1,4;2,3'")
    p.add_argument("--merge-conjugates", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(fn=_cmd_cosi)

    p = sub.add_parser("build", help="block builds from a COSI set")
    p.add_argument("what", choices=["latin", "poly", "nott"])
    p.add_argument("--cosi", required=True, help="COSI source (see cosi subcommand)")
    p.add_argument("--square", default=None, help="latin square rows, e.g. '0 1;1 0'")
    p.add_argument("--phases", default=None, help="phase rows, e.g. '1 1;1 -1j'")
    p.add_argument("--mode", choices=["signed", "multivar", "phased"], default="signed")
    p.add_argument("--signs", default=None, help="comma list of +/-")
    p.add_argument("--exps", default=None, help="comma list of integer exponents")
    p.add_argument("--thetas", default=None, help="comma list of angles")
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("-o", "--output")
    p.set_defaults(fn=_cmd_build)

    p = sub.add_parser("filterbank", help="cascade of rotation-COSI factors")
    p.add_argument("--stages", required=True, help="e.g. '-0.785398:0,1;0.3:0,1'")
    p.add_argument("-o", "--output")
    p.set_defaults(fn=_cmd_filterbank)

    p = sub.add_parser("tangle", help="tangle products and the determinant law")
    tsub = p.add_subparsers(dest="action", required=True)
    for side in ("left", "right"):
        q = tsub.add_parser(side)
        q.add_argument("--shuffler", required=True)
        q.add_argument("--tangles", nargs="+", required=True)
        q.add_argument("-o", "--output")
    q = tsub.add_parser("det-check")
    q.add_argument("spec", help="tangle-spec JSON file")
    q.add_argument("--report")
    p.set_defaults(fn=_cmd_tangle)

    p = sub.add_parser("grow", help="grow a property-preserving series")
    p.add_argument("--seeds", nargs="+", required=True)
    p.add_argument("--shufflers", nargs="*", default=None)
    p.add_argument("--depth", type=int, default=1)
    p.add_argument("--property", choices=[pr.value for pr in tangle.Property], default="unitary")
    p.add_argument("--permutations", choices=["rotate", "random"], default="rotate")
    p.add_argument("--side", choices=["left", "right"], default="left")
    p.add_argument("-o", "--output")
    p.set_defaults(fn=_cmd_grow)

    p = sub.add_parser("hadamard", help="Hadamard verification and constructions")
    hsub = p.add_subparsers(dest="action", required=True)
    q = hsub.add_parser("verify")
    q.add_argument("matrix")
    q.add_argument("--pmax", type=int, default=64)
    q.add_argument("--report")
    q = hsub.add_parser("sym-square")
    q.add_argument("matrix")
    q.add_argument("-o", "--output")
    q.add_argument("--report")
    q = hsub.add_parser("skew4")
    q.add_argument("--alphas", required=True, help="a1,a2,a3 in radians")
    q.add_argument("-o", "--output")
    q.add_argument("--report")
    q = hsub.add_parser("mub")
    q.add_argument("bases", nargs="+")
    q.add_argument("--report")
    p.set_defaults(fn=_cmd_hadamard)

    p = sub.add_parser("constellation", help="build, score, and lift constellations")
    csub = p.add_subparsers(dest="action", required=True)
    q = csub.add_parser("build")
    q.add_argument("--cosi", required=True)
    q.add_argument("--n", type=int, required=True, help="number of roots of unity / members")
    q.add_argument("-o", "--output")
    q.add_argument("--report")
    q = csub.add_parser("quality")
    q.add_argument("members", nargs="+")
    q.add_argument("--label")
    q.add_argument("--report")
    q = csub.add_parser("lift")
    q.add_argument("--mode", choices=["derangement", "shuffler"], required=True)
    q.add_argument("--tangles", nargs="+", required=True)
    q.add_argument("--shuffler", help="shuffler matrix (derangement mode)")
    q.add_argument("--us", nargs="*", help="shuffler constellation members (shuffler mode)")
    q.add_argument("-o", "--output")
    q.add_argument("--report")
    p.set_defaults(fn=_cmd_constellation)

    p = sub.add_parser("verify", help="verify one property of a stored matrix")
    p.add_argument("--property", required=True,
                   choices=["unitary", "paraunitary", "hadamard", "skew", "cosi"])
    p.add_argument("matrix")
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("example", help="run a named worked example")
    p.add_argument("name", nargs="?")
    p.add_argument("--list", action="store_true")
    p.add_argument("--corrupt", type=float, default=0.0,
                   help="perturb one input entry by this amount (verification must fail)")
    p.add_argument("--corrupt-entry", default=None, help="entry to perturb, e.g. '0,1'")
    p.add_argument("-o", "--output")
    p.set_defaults(fn=_cmd_example)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code not in (0, None) else OK
    try:
        cfg = _tolerances(args)
        return args.fn(args, cfg)
    except UnknownExample as exc:
        print(exc, file=sys.stderr)
        return USAGE
    except (CosiError, MatrixError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
