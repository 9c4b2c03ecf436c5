"""Command-line driver.

Exit codes: 0 success / affirmative answer, 1 analysis completed with a
negative answer (not a frame, not exact, ...), 2 input or precondition
error. Reports go to stdout, diagnostics to stderr. Frame indices on the
command line and in reports are 1-based.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import frames as fr
from . import potential as pot
from . import structure as st
from .documents import (
    dumps,
    encode_matrix,
    encode_scalar,
    frame_document,
    load_document,
    parse_coords,
)
from .errors import KreinFrameError, ParseError, SignatureMismatch
from .kspace import KreinSpace, gram

FRAME_TOL = 1e-9
FF_TOL = 1e-8
OPTIMIZE_TOL = 1e-6


class Outcome:
    def __init__(self, report: dict, code: int = 0):
        self.report = report
        self.code = code


def _bounds_dict(b: fr.FrameBounds) -> dict:
    return {"A1": b.A1, "B1": b.B1, "A2": b.A2, "B2": b.B2}


def _floats(values) -> list:
    return [encode_scalar(v) for v in values]


def _parse_list(text: str, what: str):
    text = text.strip()
    try:
        if text.startswith("["):
            return json.loads(text)
        return [float(t) if any(c in t for c in ".eE") else int(t) for t in text.split(",") if t.strip()]
    except (ValueError, json.JSONDecodeError) as exc:
        raise ParseError(f"--{what}: cannot parse {text!r}") from exc


def _parse_indices(text: str, what: str, k: int) -> list:
    vals = _parse_list(text, what)
    if not vals or any(isinstance(v, float) or not isinstance(v, int) or v < 1 or v > k for v in vals):
        raise ParseError(f"--{what}: expected 1-based indices in 1..{k}, got {text!r}")
    return [v - 1 for v in vals]


def _frame_tol(args) -> float:
    return args.tol if args.tol is not None else FRAME_TOL


def _load(args):
    return load_document(args.file)


# -- commands ---------------------------------------------------------------


def cmd_verify(args) -> Outcome:
    F = _load(args).frame()
    tol = _frame_tol(args)
    b = fr.optimal_bounds(F, tol)
    rep = {"command": "verify", "signature": {"p": F.space.p, "q": F.space.q}, "k": F.k}
    if isinstance(b, fr.NotAFrame):
        rep.update(is_frame=False, reason=b.reason, is_spanning=fr.is_spanning(F, tol))
        return Outcome(rep, 1)
    rep.update(is_frame=True, bounds=_bounds_dict(b), is_spanning=fr.is_spanning(F, tol))
    return Outcome(rep)


def cmd_bounds(args) -> Outcome:
    F = _load(args).frame()
    b = fr.optimal_bounds(F, _frame_tol(args))
    if isinstance(b, fr.NotAFrame):
        return Outcome({"command": "bounds", "is_frame": False, "reason": b.reason}, 1)
    ops = fr.component_operators(F)
    return Outcome({"command": "bounds", "is_frame": True, "bounds": _bounds_dict(b),
                    "S1": encode_matrix(ops.S1) if F.space.p else [],
                    "S2": encode_matrix(ops.S2) if F.space.q else []})


def cmd_tight(args) -> Outcome:
    F = _load(args).frame()
    tol = _frame_tol(args)
    b = fr.optimal_bounds(F, tol)
    if isinstance(b, fr.NotAFrame):
        raise fr.NotAFrameError(b.reason)
    D = fr.tight_constant(b, tol)
    parseval = D is not None and abs(D - 1.0) <= tol
    rep = {"command": "tight", "bounds": _bounds_dict(b), "is_tight": D is not None,
           "constant": D, "is_parseval": parseval}
    return Outcome(rep, 0 if D is not None else 1)


def cmd_reconstruct(args) -> Outcome:
    F = _load(args).frame()
    tol = _frame_tol(args)
    f = parse_coords(_parse_list(args.vector, "vector"), "--vector")
    cp, cm = fr.coefficients(F, f, tol)
    g = fr.synthesize(F, cp, cm)
    nrm = float(np.linalg.norm(f))
    err = float(np.linalg.norm(g - f)) / (nrm if nrm > 0 else 1.0)
    rep = {"command": "reconstruct", "vector": _floats(f), "c_plus": _floats(cp), "c_minus": _floats(cm),
           "reconstructed": _floats(g), "relative_error": err}
    return Outcome(rep, 0 if err <= tol else 1)


def cmd_grammian(args) -> Outcome:
    F = _load(args).frame()
    G1, G2 = fr.grammian(F)
    return Outcome({"command": "grammian", "G1": encode_matrix(G1), "G2": encode_matrix(G2)})


def cmd_decompose3(args) -> Outcome:
    F = _load(args).frame()
    dec = st.decompose_three_bases(F, args.epsilon)
    resid = float(np.max(np.abs(dec.resynthesize() - F.vectors)))
    target = np.diag(F.space.signs)
    gram_err = max(float(np.max(np.abs(gram(B, F.space.signs) - target))) for B in dec.bases)
    rep = {"command": "decompose3", "epsilon": dec.epsilon, "scale_plus": dec.scale_plus,
           "scale_minus": dec.scale_minus,
           "bases": [frame_document(fr.Frame(F.space, B)) for B in dec.bases],
           "resynthesis_residual": resid, "gram_error": gram_err}
    return Outcome(rep, 0 if max(resid, gram_err) <= max(_frame_tol(args), 1e-10) * max(1.0, dec.scale_plus, dec.scale_minus) else 1)


def cmd_split(args) -> Outcome:
    F = _load(args).frame()
    mask = _parse_list(args.mask, "mask")
    if len(mask) != F.space.n or any(v not in (0, 1) for v in mask):
        raise ParseError(f"--mask: expected {F.space.n} entries of 0 or 1")
    res = st.split_by_projection(F, st.mask_projection(mask))
    tol = _frame_tol(args)
    parent_b = fr.optimal_bounds(F, tol)
    rep = {"command": "split", "mask": [int(v) for v in mask]}
    code = 0
    for name, part, m in (("inside", res.inside, res.mask), ("outside", res.outside, ~res.mask)):
        if part is None:
            rep[name] = None
            continue
        b = fr.optimal_bounds(part, tol)
        entry = {"document": frame_document(part, m, F.space), "is_frame": isinstance(b, fr.FrameBounds)}
        if isinstance(b, fr.FrameBounds):
            entry["bounds"] = _bounds_dict(b)
        else:
            entry["reason"] = b.reason
            code = 1
        rep[name] = entry
        if args.write:
            Path(f"{args.write}_{name}.json").write_text(dumps(entry["document"]) + "\n", encoding="utf-8")
    if isinstance(parent_b, fr.FrameBounds):
        rep["parent_bounds"] = _bounds_dict(parent_b)
    return Outcome(rep, code)


def cmd_merge(args) -> Outcome:
    A, B = load_document(args.file_a), load_document(args.file_b)
    parent = A.parent or B.parent
    if A.parent and B.parent and (A.parent != B.parent):
        raise SignatureMismatch("documents name different parent signatures")
    M = st.merge_frames(A.frame(), B.frame(), A.mask, B.mask, parent)
    b = fr.optimal_bounds(M, _frame_tol(args))
    rep = {"command": "merge", "merged": frame_document(M), "is_frame": isinstance(b, fr.FrameBounds)}
    if isinstance(b, fr.FrameBounds):
        rep["bounds"] = _bounds_dict(b)
        return Outcome(rep)
    rep["reason"] = b.reason
    return Outcome(rep, 1)


def cmd_transfer(args) -> Outcome:
    F = _load(args).frame()
    n = _parse_indices(args.n, "n", F.k)
    m = _parse_indices(args.m, "m", F.k)
    res = st.coefficient_transfer(F, n, m, _frame_tol(args))
    rep = {"command": "transfer", "n": [i + 1 for i in n], "m": [i + 1 for i in m],
           "transferable": bool(res), "residual_plus": res.residual_plus, "residual_minus": res.residual_minus}
    if res:
        rep["S1"] = encode_matrix(res.S1)
        rep["S2"] = encode_matrix(res.S2)
    return Outcome(rep, 0 if res else 1)


def cmd_sequence(args) -> Outcome:
    F = _load(args).frame()
    idx = _parse_indices(args.idx, "idx", F.k)
    r = st.is_frame_sequence(F, idx, _frame_tol(args))
    return Outcome({"command": "sequence", "idx": [i + 1 for i in idx], "is_frame_sequence": r.is_frame_sequence,
                    "plus_rank": r.plus_rank, "minus_rank": r.minus_rank,
                    "plus_bounds": list(r.plus_bounds) if r.plus_bounds else None,
                    "minus_bounds": list(r.minus_bounds) if r.minus_bounds else None},
                   0 if r.is_frame_sequence else 1)


def cmd_exact(args) -> Outcome:
    F = _load(args).frame()
    ex = st.is_exact(F, _frame_tol(args))
    return Outcome({"command": "exact", "is_exact": ex}, 0 if ex else 1)


def cmd_near_exact(args) -> Outcome:
    F = _load(args).frame()
    r = st.near_exact_excess(F, _frame_tol(args))
    return Outcome({"command": "near-exact", "count": r.count, "removed": [i + 1 for i in r.removed],
                    "proper": r.proper})


def cmd_potential(args) -> Outcome:
    F = _load(args).frame()
    P = pot.frame_potential(F)
    ops = fr.component_operators(F)
    trace_form = float(np.sum(np.abs(ops.S1) ** 2) + np.sum(np.abs(ops.S2) ** 2))
    rep = {"command": "potential", "k": F.k, "n": F.space.n, "potential": P, "trace_form": trace_form}
    if F.k >= F.space.n:
        rep["minimum"] = pot.minimum_potential(F.space.n, F.k)
        rep["excess"] = P - rep["minimum"]
    return Outcome(rep)


def cmd_optimize(args) -> Outcome:
    space = KreinSpace(args.p, args.q)
    opts = pot.OptimizerOptions()
    if args.max_iters is not None:
        opts.max_iters = args.max_iters
    if args.step0 is not None:
        opts.step0 = args.step0
    if args.grad_tol is not None:
        opts.grad_tol = args.grad_tol
    r = pot.minimize_potential(space, args.k, args.seed, opts)
    target = pot.minimum_potential(space.n, args.k)
    tight = fr.is_tight(r.frame, 1e-5) if fr.is_frame(r.frame) else False
    rep = {"command": "optimize", "signature": {"p": args.p, "q": args.q}, "k": args.k, "seed": args.seed,
           "potential": r.potential, "minimum": target, "iterations": r.iterations,
           "converged": r.converged, "no_descent": r.no_descent, "is_tight": tight,
           "frame": frame_document(r.frame)}
    return Outcome(rep, 0 if abs(r.potential - target) <= OPTIMIZE_TOL else 1)


def cmd_ff_partition(args) -> Outcome:
    F = _load(args).frame()
    tol = args.tol if args.tol is not None else FF_TOL
    if not pot.is_ff_critical(F, tol):
        return Outcome({"command": "ff-partition", "is_ff_critical": False}, 1)
    part = pot.ff_partition(F, tol)

    def classes(cs):
        return [{"lambda": lam, "members": [i + 1 for i in idx]} for lam, idx in cs]

    return Outcome({"command": "ff-partition", "is_ff_critical": True,
                    "plus_classes": classes(part.plus_classes), "minus_classes": classes(part.minus_classes),
                    "excluded_plus": [i + 1 for i in part.excluded_plus],
                    "excluded_minus": [i + 1 for i in part.excluded_minus]})


# -- argument parsing -------------------------------------------------------


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--tol", type=float, default=d(None),
                        help="relative tolerance (default 1e-9; 1e-8 for ff-partition)")
    parser.add_argument("--output", choices=("json", "text"), default=d("text"))
    parser.add_argument("--max-iters", type=int, default=d(None), help="optimizer iteration cap")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kreinframes", description="Frames on finite-dimensional Krein spaces")
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_, file=True):
        sp = sub.add_parser(name, help=help_)
        _global_flags(sp, suppress=True)
        if file:
            sp.add_argument("file", help="frame document (JSON)")
        sp.set_defaults(func=func)
        return sp

    add("verify", cmd_verify, "frame test and optimal bounds")
    add("bounds", cmd_bounds, "optimal bounds and component frame operators")
    add("tight", cmd_tight, "tight / Parseval classification")
    sp = add("reconstruct", cmd_reconstruct, "dual-frame coefficients and round trip")
    sp.add_argument("--vector", required=True, help="coordinates: 1,2,3 or JSON [1,[0,1],3]")
    add("grammian", cmd_grammian, "component Grammian matrices")
    sp = add("decompose3", cmd_decompose3, "three J-orthonormal bases")
    sp.add_argument("--epsilon", type=float, required=True)
    sp = add("split", cmd_split, "split along a coordinate projection")
    sp.add_argument("--mask", required=True, help="0/1 per coordinate, e.g. 1,0,1")
    sp.add_argument("--write", metavar="PREFIX", help="also write PREFIX_inside.json and PREFIX_outside.json")
    sp = add("merge", cmd_merge, "union of frames on complementary subspaces", file=False)
    sp.add_argument("file_a")
    sp.add_argument("file_b")
    sp = add("transfer", cmd_transfer, "coefficient transfer operators")
    sp.add_argument("--n", required=True, help="1-based indices")
    sp.add_argument("--m", required=True, help="1-based indices")
    sp = add("sequence", cmd_sequence, "frame-sequence bounds of a subfamily")
    sp.add_argument("--idx", required=True, help="1-based indices")
    add("exact", cmd_exact, "exactness test")
    add("near-exact", cmd_near_exact, "smallest removal set leaving an exact frame")
    add("potential", cmd_potential, "frame potential of a unit-norm family")
    sp = add("optimize", cmd_optimize, "minimize the frame potential", file=False)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--step0", type=float, default=None)
    sp.add_argument("--grad-tol", type=float, default=None)
    add("ff-partition", cmd_ff_partition, "eigenvalue classes of an FF-critical family")
    return parser


def _text(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    for key, val in obj.items():
        if isinstance(val, dict):
            lines.append(f"{pad}{key}:")
            lines.extend(_text(val, indent + 1))
        elif isinstance(val, list) and val and isinstance(val[0], dict):
            lines.append(f"{pad}{key}:")
            for i, item in enumerate(val):
                lines.append(f"{pad}  [{i + 1}]")
                lines.extend(_text(item, indent + 2))
        elif isinstance(val, list) and val and isinstance(val[0], list):
            lines.append(f"{pad}{key}:")
            lines.extend(f"{pad}  {dumps(row)}" for row in val)
        else:
            lines.append(f"{pad}{key}: {val if isinstance(val, str) else dumps(val)}")
    return lines


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        out = args.func(args)
    except KreinFrameError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.output == "json":
        sys.stdout.write(dumps(out.report) + "\n")
    else:
        sys.stdout.write("\n".join(_text(out.report)) + "\n")
    return out.code


if __name__ == "__main__":
    sys.exit(main())
