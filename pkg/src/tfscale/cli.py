"""Command-line interface.

Exit codes: 0 affirmative (tight, strictly scalable, verified, no violation),
1 negative, 2 borderline, 3 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import io
from .config import DEFAULT, Config
from .cones import (
    cone_violation_r2,
    cone_violation_search,
    export_cone_samples,
    format_samples,
    perturbed_frame,
)
from .diagram import diagram_gramian, diagram_matrix
from .errors import AccumulationFailed, EmptyNullSpace, FrameError, PropertyQViolated
from .frames import check_tight, gramian
from .planar import planar_scaling
from .scaling import Verdict, decide_scaling, solution_region, verify_scaling

OK, NEGATIVE, BORDERLINE, USAGE = 0, 1, 2, 3

_TOL_FLAGS = {
    "tau_unit": "--tol-unit",
    "tau_sym": "--tol-sym",
    "tau_tight": "--tol-tight",
    "tau_psd": "--tol-psd",
    "tau_rank": "--tol-rank",
    "tau_null": "--tol-null",
    "tau_hull": "--tol-hull",
    "tau_orth": "--tol-orth",
    "borderline_factor": "--tol-borderline",
}

_VERDICT_CODE = {
    Verdict.STRICTLY_SCALABLE: OK,
    Verdict.SUBSET_SCALABLE: NEGATIVE,
    Verdict.NOT_SCALABLE: NEGATIVE,
    Verdict.BORDERLINE: BORDERLINE,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE, f"{self.prog}: error: {message}\n")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("output and tolerances")
    g.add_argument("--json", action="store_true", help="emit a JSON result document")
    g.add_argument("--quiet", action="store_true", help="print nothing; rely on the exit code")
    g.add_argument("--config", metavar="PATH", help="JSON file of tolerance overrides")
    g.add_argument("--renormalize", action="store_true", help="rescale vectors of a unit_norm file that miss unit norm")
    for name, flag in _TOL_FLAGS.items():
        g.add_argument(flag, dest=name, type=float, metavar="X", default=None)
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="tfscale", description="Tight scaling of finite frames.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text, description=help_text)

    add("diagram", "print the diagram vector of every frame vector").add_argument("file")
    add("gram", "print the Gramian and the diagram Gramian").add_argument("file")
    add("check-tight", "test whether the frame is tight").add_argument("file")
    p = add("scale", "decide tight scalability and compute coefficients")
    p.add_argument("file", nargs="?")
    p.add_argument("--batch", metavar="DIR", help="process every *.json frame file in DIR")
    p.add_argument("--jobs", type=int, default=1, help="worker threads for --batch")
    add("scale2d", "planar pair/triple scaling").add_argument("file")
    p = add("verify", "check given coefficients")
    p.add_argument("file")
    p.add_argument("--coeffs", required=True, metavar="PATH", help="JSON list or result document with coefficients")
    p.add_argument("--lambda", dest="lam", type=float, default=None, help="tightness constant (default sum c^2 / n)")
    p = add("cones", "search for a vector in every cone, or export grid samples")
    p.add_argument("file")
    p.add_argument("--subset", default=None, help="1-based indices, comma separated, for sample export")
    p.add_argument("--grid", type=int, default=None, metavar="N", help="export grid samples at resolution N")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=64, help="restarts for the n >= 3 search")
    p.add_argument("--output", metavar="PATH", help="write exported samples here")
    add("region", "describe every tight scaling").add_argument("file")
    p = add("perturbed", "emit the perturbed two-bases frame")
    p.add_argument("--v", type=float, required=True)
    p.add_argument("--output", metavar="PATH")
    return parser


def load_config(args) -> Config:
    cfg = DEFAULT
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text(encoding="utf-8"))
            cfg = Config.from_dict(data)
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"cannot use config file {args.config}: {exc}") from None
    changes = {k: getattr(args, k) for k in _TOL_FLAGS if getattr(args, k) is not None}
    for k, v in changes.items():
        if not math.isfinite(v) or v <= 0:
            raise UsageError(f"{_TOL_FLAGS[k]} must be a positive number")
    return cfg.replace(**changes) if changes else cfg


def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load_frame(path, args, cfg):
    raw = _read(path)
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError:
        raise UsageError(f"{path} is not UTF-8 text") from None
    return raw, io.parse_frame(text, renormalize=args.renormalize, config=cfg)


def _fmt(x) -> str:
    return np.array2string(np.asarray(x), precision=17, max_line_width=120, separator=", ")


class _Out:
    def __init__(self, args):
        self.args = args
        self.lines: list[str] = []

    def say(self, *parts):
        self.lines.append(" ".join(str(p) for p in parts))

    def finish(self, doc: dict | None, code: int) -> int:
        if self.args.quiet:
            return code
        if self.args.json and doc is not None:
            sys.stdout.write(io.dumps_document(doc))
        else:
            for line in self.lines:
                print(line)
        return code


def cmd_diagram(args, cfg):
    raw, frame = _load_frame(args.file, args, cfg)
    d = diagram_matrix(frame)
    out = _Out(args)
    for i, row in enumerate(d):
        out.say(f"f~[{i + 1}] =", _fmt(row))
    doc = io.result_document("diagram", raw, cfg, field=frame.field.value, n=frame.n, diagram_vectors=d)
    return out.finish(doc, OK)


def cmd_gram(args, cfg):
    raw, frame = _load_frame(args.file, args, cfg)
    g = gramian(frame).matrix
    out = _Out(args)
    out.say("G =")
    out.say(_fmt(g))
    payload = {"gramian": g}
    if frame.unit_norm:
        gt = diagram_gramian(frame, cfg).matrix
        out.say("diagram G =")
        out.say(_fmt(gt))
        payload["diagram_gramian"] = gt
    else:
        out.say("diagram Gramian skipped: frame is not flagged unit_norm")
    return out.finish(io.result_document("gram", raw, cfg, **payload), OK)


def cmd_check_tight(args, cfg):
    raw, frame = _load_frame(args.file, args, cfg)
    rep = check_tight(frame, config=cfg)
    out = _Out(args)
    out.say("tight" if rep.is_tight else "not tight")
    out.say("is_frame:", rep.is_frame, " rank:", rep.rank)
    out.say("lambda:", repr(rep.lam))
    out.say("residual:", repr(rep.residual))
    doc = io.result_document(
        "check-tight", raw, cfg,
        verdict="Tight" if rep.is_tight else "NotTight",
        is_frame=rep.is_frame, rank=rep.rank, residuals={"tight": rep.residual},
        **{"lambda": rep.lam},
    )
    return out.finish(doc, OK if rep.is_tight else NEGATIVE)


def _scale_one(path, args, cfg):
    raw, frame = _load_frame(path, args, cfg)
    res = decide_scaling(frame, cfg)
    return io.result_document("scale", raw, cfg, **io.scaling_payload(res)), _VERDICT_CODE[res.verdict], res


def _describe_scaling(out: _Out, res):
    out.say("verdict:", res.verdict.value)
    if res.coefficients is not None:
        out.say("coefficients:", _fmt(res.coefficients))
        out.say("lambda:", repr(res.lam))
        v = res.verification
        out.say(f"residuals: gdg={v.gdg_residual!r} tight={v.tight_residual!r} trace={v.trace_residual!r}")
    if res.certificate is not None:
        out.say("certificate:", res.certificate.kind.value)
        if res.certificate.vector is not None:
            out.say("  vector:", _fmt(res.certificate.vector))
        for k, v in res.certificate.detail.items():
            out.say(f"  {k}: {v!r}")
    if "error" in res.diagnostics:
        out.say("note:", res.diagnostics["error"])
    out.say("rank:", res.diagnostics["rank"], " nullity:", res.diagnostics["nullity"])


def _batch(args, cfg):
    root = Path(args.batch)
    if not root.is_dir():
        raise UsageError(f"{args.batch} is not a directory")
    files = sorted(p for p in root.iterdir() if p.suffix == ".json" and p.is_file())

    def run(path):
        try:
            doc, code, _ = _scale_one(str(path), args, cfg)
            return doc, code
        except (FrameError, UsageError) as exc:
            return {"file": path.name, "error": f"{type(exc).__name__}: {exc}"}, USAGE

    with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
        results = list(pool.map(run, files))
    out = _Out(args)
    counts: dict[str, int] = {}
    for path, (doc, code) in zip(files, results):
        label = doc.get("verdict", "Error")
        counts[label] = counts.get(label, 0) + 1
        out.say(f"{path.name}: {label}" + (f" ({doc['error']})" if "error" in doc else ""))
        doc["file"] = path.name
    summary = ", ".join(f"{k}={counts[k]}" for k in sorted(counts))
    out.say(f"summary: {len(files)} files; {summary}")
    codes = [c for _, c in results]
    if USAGE in codes:
        code = USAGE
    elif BORDERLINE in codes:
        code = BORDERLINE
    elif NEGATIVE in codes:
        code = NEGATIVE
    else:
        code = OK
    doc = io.jsonable({"tool": io.TOOL, "version": io.tool_version(), "command": "scale --batch",
                       "results": [d for d, _ in results], "summary": counts})
    return out.finish(doc, code)


def cmd_scale(args, cfg):
    if args.batch:
        if args.file:
            raise UsageError("give either a file or --batch, not both")
        return _batch(args, cfg)
    if not args.file:
        raise UsageError("scale needs a frame file or --batch DIR")
    doc, code, res = _scale_one(args.file, args, cfg)
    out = _Out(args)
    _describe_scaling(out, res)
    return out.finish(doc, code)


def cmd_scale2d(args, cfg):
    raw, frame = _load_frame(args.file, args, cfg)
    out = _Out(args)
    try:
        dec = planar_scaling(frame, require_q=True, config=cfg)
    except PropertyQViolated as exc:
        out.say("property (Q) fails:", exc)
        return out.finish(io.result_document("scale2d", raw, cfg, verdict="PropertyQViolated"), NEGATIVE)
    except AccumulationFailed as exc:
        out.say("accumulation failed:", exc)
        doc = io.result_document("scale2d", raw, cfg, verdict="AccumulationFailed", residuals={"diagram_sum": exc.residual})
        return out.finish(doc, BORDERLINE)
    c = dec.coefficients
    rep = verify_scaling(frame, c, dec.lam, cfg)
    out.say("verdict:", "StrictlyScalable" if rep.passed else "VerificationFailed")
    out.say("coefficients:", _fmt(c))
    out.say("lambda:", repr(dec.lam))
    out.say("pairs:", [(a + 1, b + 1) for a, b in dec.pairs])
    out.say("triples:", [tuple(i + 1 for i in t) for t, _ in dec.triples])
    doc = io.result_document(
        "scale2d", raw, cfg,
        verdict="StrictlyScalable" if rep.passed else "VerificationFailed",
        coefficients=c, accumulated=dec.accumulated,
        pairs=[[a + 1, b + 1] for a, b in dec.pairs],
        triples=[{"indices": [i + 1 for i in t], "coefficients": list(s)} for t, s in dec.triples],
        residuals={"gdg": rep.gdg_residual, "tight": rep.tight_residual, "trace": rep.trace_residual},
        **{"lambda": dec.lam},
    )
    return out.finish(doc, OK if rep.passed else BORDERLINE)


def _read_coeffs(path: str) -> np.ndarray:
    try:
        data = json.loads(_read(path).decode("utf-8"))
    except (ValueError, UnicodeDecodeError) as exc:
        raise UsageError(f"cannot parse coefficients in {path}: {exc}") from None
    if isinstance(data, dict):
        data = data.get("coefficients")
    if not isinstance(data, list) or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in data):
        raise UsageError(f"{path} holds no list of numeric coefficients")
    return np.array(data, dtype=float)


def cmd_verify(args, cfg):
    raw, frame = _load_frame(args.file, args, cfg)
    c = _read_coeffs(args.coeffs)
    rep = verify_scaling(frame, c, args.lam, cfg)
    out = _Out(args)
    out.say("pass" if rep.passed else "fail")
    out.say(f"(a) GDG = lambda G: {rep.gdg_ok} residual {rep.gdg_residual!r}")
    out.say(f"(b) S = lambda I:   {rep.tight_ok} residual {rep.tight_residual!r}")
    out.say(f"(c) trace:          {rep.trace_ok} residual {rep.trace_residual!r}")
    out.say("lambda:", repr(rep.lam))
    doc = io.result_document(
        "verify", raw, cfg,
        verdict="Pass" if rep.passed else "Fail", coefficients=c,
        checks={"gdg": rep.gdg_ok, "tight": rep.tight_ok, "trace": rep.trace_ok},
        residuals={"gdg": rep.gdg_residual, "tight": rep.tight_residual, "trace": rep.trace_residual},
        **{"lambda": rep.lam},
    )
    return out.finish(doc, OK if rep.passed else NEGATIVE)


def _parse_subset(text: str | None, k: int) -> list[int]:
    if not text:
        return []
    try:
        idx = [int(t) - 1 for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"--subset must be comma-separated integers, got {text!r}") from None
    bad = [i + 1 for i in idx if not 0 <= i < k]
    if bad:
        raise UsageError(f"--subset indices {bad} outside 1..{k}")
    return idx


def cmd_cones(args, cfg):
    raw, frame = _load_frame(args.file, args, cfg)
    out = _Out(args)
    subset = _parse_subset(args.subset, frame.k)
    if args.grid is not None:
        if args.grid < 1:
            raise UsageError("--grid must be positive")
        pts = export_cone_samples(frame, subset, args.grid)
        text = format_samples(pts, frame.n, subset)
        if args.output:
            Path(args.output).write_text(text, encoding="utf-8")
            out.say(f"wrote {len(pts)} points to {args.output}")
        else:
            out.lines.append(text.rstrip("\n"))
        doc = io.result_document("cones", raw, cfg, subset=[i + 1 for i in subset], grid=args.grid, points=pts)
        return out.finish(doc, OK)
    if subset:
        raise UsageError("--subset is only used together with --grid")
    if frame.n == 2:
        rep = cone_violation_r2(frame, cfg)
    else:
        rep = cone_violation_search(frame, seed=args.seed, budget=args.budget, config=cfg)
    out.say(rep.label + (" (boundary contact)" if rep.boundary_contact else ""))
    if rep.f is not None:
        out.say("f:", _fmt(rep.f))
        out.say("margins:", _fmt(rep.margins))
    doc = io.result_document(
        "cones", raw, cfg,
        verdict="ViolationFound" if rep.found else ("NoViolation" if rep.exact else "NoViolationFound"),
        exact=rep.exact, f=rep.f, margins=rep.margins, boundary_contact=rep.boundary_contact, detail=rep.detail,
    )
    return out.finish(doc, NEGATIVE if rep.found else OK)


def cmd_region(args, cfg):
    raw, frame = _load_frame(args.file, args, cfg)
    out = _Out(args)
    try:
        reg = solution_region(frame, cfg)
    except EmptyNullSpace as exc:
        out.say("empty:", exc)
        return out.finish(io.result_document("region", raw, cfg, verdict="Empty"), NEGATIVE)
    out.say(f"scalings: c_i = sqrt(<y, r_i>) for y in R^{reg.dimension} with every <y, r_i> >= 0")
    for i, r in enumerate(reg.normals):
        out.say(f"r[{i + 1}] =", _fmt(r))
    if reg.interior_point is not None:
        out.say("interior point y =", _fmt(reg.interior_point))
        out.say("coefficients at y:", _fmt(reg.coefficients(reg.interior_point)))
    else:
        out.say("no strictly interior point")
    doc = io.result_document(
        "region", raw, cfg,
        verdict="Interior" if reg.interior_point is not None else "NoInterior",
        normals=reg.normals, interior_point=reg.interior_point,
    )
    return out.finish(doc, OK if reg.interior_point is not None else NEGATIVE)


def cmd_perturbed(args, cfg):
    frame = perturbed_frame(args.v)
    text = io.emit_frame(frame)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    elif not args.quiet:
        sys.stdout.write(text)
    return OK


COMMANDS = {
    "diagram": cmd_diagram,
    "gram": cmd_gram,
    "check-tight": cmd_check_tight,
    "scale": cmd_scale,
    "scale2d": cmd_scale2d,
    "verify": cmd_verify,
    "cones": cmd_cones,
    "region": cmd_region,
    "perturbed": cmd_perturbed,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else USAGE
    try:
        cfg = load_config(args)
        return COMMANDS[args.command](args, cfg)
    except (FrameError, UsageError) as exc:
        print(f"tfscale {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
