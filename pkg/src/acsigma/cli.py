"""Command-line front end (``acsigma``)."""

from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources
from pathlib import Path

from .errors import AcSigmaError, ParseError, UnknownId, ViolationFound
from .experiments import (
    RATIO_TOL,
    cn_experiment,
    disk_square_growth,
    fuzz_hpa,
    fuzz_lpa,
    norm_examples,
)
from .geometry import Line, fmt_q
from .maps import map_polygon
from .polygons import reduce_polygon_to_triangle
from .regions import map_region, normalize_genus_region
from .serialize import (
    Scene,
    certificate_doc,
    dump_json,
    load_chain,
    load_json,
    load_scene,
    scene_from_doc,
    scene_to_doc,
)
from .svg import ratio_plot, stage_figure
from .variation import crossing_segments, var_lower_bound, vf_on_line, vf_witness

SAMPLES = ("genus1", "genus2", "genus3")


def load_sample(name: str) -> Scene:
    """A bundled region as a scene whose only region is called ``name``."""
    if name not in SAMPLES:
        raise UnknownId(f"no bundled sample {name!r}; choose from {', '.join(SAMPLES)}")
    text = resources.files("acsigma").joinpath("data", f"{name}.json").read_text(encoding="utf-8")
    doc = load_json(text, name)
    return scene_from_doc({"regions": {name: {"outer": doc["outer"], "windows": doc["windows"]}}})


def _scene(arg: str) -> Scene:
    if arg.startswith("sample:"):
        return load_sample(arg[len("sample:") :])
    try:
        return load_scene(arg)
    except OSError as exc:
        raise ParseError(f"cannot read {arg}: {exc.strerror}") from exc


def _seed(args) -> int:
    env = os.environ.get("ACSIGMA_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ParseError(f"ACSIGMA_SEED must be an integer, got {env!r}") from None
    return args.seed


def _write(path: str | None, text: str):
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _frames(svg_dir: str | None, cert):
    if not svg_dir:
        return
    d = Path(svg_dir)
    d.mkdir(parents=True, exist_ok=True)
    for k, stage in enumerate(cert.stages):
        cells = []
        if k < len(cert.chain.steps):
            cells = [getattr(cert.chain.steps[k], "cell_polygon", ())]
            cells = [c for c in cells if c]
        (d / f"frame_{k:03d}.svg").write_text(stage_figure(stage, cells), encoding="utf-8")


def cmd_vf(args) -> int:
    S = _scene(args.scene).point_list(args.list)
    if args.line:
        line = Line.from_coeffs(*args.line)
        cross = crossing_segments(S, line) if len(S) >= 2 else []
        print(f"vf={vf_on_line(S, line)}; crossing=[{','.join(map(str, cross))}]")
        return 0
    w = vf_witness(tuple(S))
    parts = [f"vf={w.value}", f"labels=[{','.join(str(v) for v in w.labels)}]"]
    if w.line is not None:
        parts.append(f"line={w.line.a} {w.line.b} {w.line.c}")
        parts.append(f"move={w.move}")
        if w.move != "exact":
            parts.append(f"sign={w.sign:+d}")
        if w.pivot is not None:
            parts.append(f"pivot={fmt_q(w.pivot)}")
    print("; ".join(parts))
    return 0


def cmd_var(args) -> int:
    sc = _scene(args.scene)
    f = sc.function(args.function)
    est = var_lower_bound(f, f.domain, args.max_len, args.strategy)
    witness = " ".join(f"({fmt_q(p.x)},{fmt_q(p.y)})" for p in est.witness)
    exact = "exact" if est.exact else f"approximate (error <= {float(est.error_bound):.3g})"
    print(f"var>={fmt_q(est.lower_bound)}; L={est.max_len}; strategy={est.strategy}; {exact}")
    print(f"witness={witness}")
    return 0


def cmd_reduce(args) -> int:
    P = _scene(args.scene).polygon(args.polygon)
    cert = reduce_polygon_to_triangle(P)
    _write(args.out, dump_json(certificate_doc(cert)))
    _frames(args.svg, cert)
    if args.out:
        print(f"steps={len(cert.chain)}")
    return 0


def cmd_normalize(args) -> int:
    reg = _scene(args.scene).region(args.region)
    cert = normalize_genus_region(reg)
    _write(args.out, dump_json(certificate_doc(cert)))
    _frames(args.svg, cert)
    if args.out:
        print(f"genus={reg.genus}; steps={len(cert.chain)}")
    return 0


def cmd_apply(args) -> int:
    try:
        chain = load_chain(args.chain)
    except OSError as exc:
        raise ParseError(f"cannot read {args.chain}: {exc.strerror}") from exc
    if args.inverse:
        chain = chain.inverse()
    sc = _scene(args.scene)
    out = Scene(
        points=[chain(p) for p in sc.points],
        lists=dict(sc.lists),
        functions=dict(sc.functions),
        polygons={k: map_polygon(chain, P) for k, P in sc.polygons.items()},
        regions={k: map_region(chain, r) for k, r in sc.regions.items()},
    )
    _write(args.out, dump_json(scene_to_doc(out)))
    return 0


def cmd_experiment(args) -> int:
    seed = _seed(args)
    kind = args.kind
    if kind == "disk-square":
        n_max = args.n if args.n is not None else 20
        rows = disk_square_growth(n_max)
        print("n  ratio  n/2  delta  convex")
        bad = []
        for t in rows:
            print(f"{t.n}  {t.ratio:.12g}  {t.n / 2:g}  {t.delta:.6g}  {'yes' if t.convex_certified else 'no'}")
            if t.ratio < t.n / 2 - RATIO_TOL or not t.convex_certified:
                bad.append(t.n)
        if args.svg:
            Path(args.svg).write_text(ratio_plot([(t.n, t.ratio) for t in rows], reference=2.0), encoding="utf-8")
        if bad:
            raise ViolationFound(f"growth below n/2 at n={bad}")
        return 0
    if kind in ("fuzz-hpa", "fuzz-lpa"):
        trials = args.trials if args.trials is not None else 1000
        rep = (fuzz_hpa if kind == "fuzz-hpa" else fuzz_lpa)(trials, seed)
        print(
            f"kind={rep.kind}; trials={rep.trials}; violations={len(rep.violations)}; "
            f"worst_ratio={fmt_q(rep.worst_ratio)}; worst_trial={rep.worst_trial}; seed={rep.seed}"
        )
        for n in sorted(rep.by_n):
            print(f"cells={n}; worst_ratio={fmt_q(rep.by_n[n])}; bound={(n + 1) ** 2}")
        return 0
    if kind == "cn":
        n = args.n if args.n is not None else 3
        trials = args.trials if args.trials is not None else 1000
        obs = cn_experiment(n, trials, seed)
        print(
            f"n={obs.n}; observed_ratio={fmt_q(obs.observed_ratio)}; trials={obs.trial_count}; "
            f"proven_bound={(n + 1) ** 2}; within_n_plus_1={'yes' if obs.within_conjecture else 'no'}; seed={seed}"
        )
        if not obs.within_proven_bound:
            raise ViolationFound("observed ratio exceeds (n+1)^2", seed=seed)
        return 0
    if kind == "norm-examples":
        ex = norm_examples()
        a, b = ex.idempotent_gap
        print(f"idempotent_var_collinear={fmt_q(a)}; idempotent_var_triangle_max={fmt_q(b)}")
        print(f"dart_norm={fmt_q(ex.quad_norm)}; dart_var={fmt_q(ex.quad_var)}")
        print(f"transferred_var_lower={fmt_q(ex.transferred_var_lower)}")
        print(f"constant_norms={fmt_q(ex.constant_norms[0])},{fmt_q(ex.constant_norms[1])}")
        return 0
    raise UnknownId(f"unknown experiment {kind!r}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="acsigma", description="Exact variation and homeomorphism tools for planar sets.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("vf", help="variation factor of a point list")
    s.add_argument("scene", help="scene file, or sample:<name>")
    s.add_argument("list")
    s.add_argument("--line", nargs=3, metavar=("A", "B", "C"), help="evaluate on the line a x + b y + c = 0")
    s.set_defaults(func=cmd_vf)

    s = sub.add_parser("var", help="lower bound for the variation of a sampled function")
    s.add_argument("scene")
    s.add_argument("function")
    s.add_argument("--max-len", type=int, default=4)
    s.add_argument("--strategy", choices=("auto", "exhaustive", "beam"), default="auto")
    s.set_defaults(func=cmd_var)

    s = sub.add_parser("reduce", help="reduce a polygon to a triangle")
    s.add_argument("scene")
    s.add_argument("polygon")
    s.add_argument("--out")
    s.add_argument("--svg", metavar="DIR")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("normalize", help="normalise a region with windows")
    s.add_argument("scene")
    s.add_argument("region")
    s.add_argument("--out")
    s.add_argument("--svg", metavar="DIR")
    s.set_defaults(func=cmd_normalize)

    s = sub.add_parser("apply", help="apply a chain file to a scene")
    s.add_argument("chain")
    s.add_argument("scene")
    s.add_argument("--inverse", action="store_true")
    s.add_argument("--out")
    s.set_defaults(func=cmd_apply)

    s = sub.add_parser("experiment", help="run a numerical experiment")
    s.add_argument("kind", choices=("disk-square", "fuzz-hpa", "fuzz-lpa", "cn", "norm-examples"))
    s.add_argument("--n", type=int)
    s.add_argument("--trials", type=int)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--svg", metavar="FILE")
    s.set_defaults(func=cmd_experiment)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ViolationFound as exc:
        extra = ""
        if exc.seed is not None:
            extra = f" (seed={exc.seed}" + (f", trial={exc.trial}" if exc.trial is not None else "") + ")"
        print(f"violation: {exc}{extra}", file=sys.stderr)
        return 2
    except (AcSigmaError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
