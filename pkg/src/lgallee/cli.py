"""Command-line entry point: ``lgallee <command> [options]``.

Every command writes its artifacts (CSV tables, flat JSON documents and
optional SVG figures) into ``--out-dir``, which defaults to the directory
named by ``$LGALLEE_OUTPUT_DIR`` or the working directory. Model errors map
to distinct exit codes; artifacts of a failed run are removed.
"""
from __future__ import annotations

import argparse
import contextlib
import sys
from pathlib import Path

from .bifurcation import fold_curves, sweep
from .classification import classify, snap_to_triple_point
from .equilibria import degenerate_point, interior_equilibria
from .errors import ClassificationError, ModelError
from .io import (
    EQUILIBRIA_COLUMNS,
    FOLD_COLUMNS,
    SWEEP_COLUMNS,
    TRAJECTORY_COLUMNS,
    atomic_write,
    csv_text,
    default_output_dir,
    document_text,
    equilibria_rows,
    fold_rows,
    params_from_mapping,
    read_param_document,
    sweep_rows,
    trajectory_rows,
)
from .model import RAW_KEYS, SCALED_KEYS, ScaledParams, State
from .normal_form import analyze
from .simulation import SolverConfig, integrate, phase_portrait

COMMANDS = ("equilibria", "classify", "degenerate", "normal-form", "simulate",
            "portrait", "sweep", "folds", "verify")

EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 11


class Artifacts:
    """Tracks files written by a run so a failure can remove them."""

    def __init__(self, out_dir: Path):
        self.out_dir = out_dir
        self.written: list[Path] = []

    def path(self, name, override=None) -> Path:
        return Path(override) if override else self.out_dir / name

    def text(self, path: Path, text: str) -> Path:
        atomic_write(path, text)
        self.written.append(path)
        return path

    def figure(self, render, path: Path, *args, **kwargs) -> Path:
        path.parent.mkdir(parents=True, exist_ok=True)
        self.written.append(path)
        render(*args, path, **kwargs)
        return path

    def remove_all(self):
        for path in self.written:
            with contextlib.suppress(FileNotFoundError):
                path.unlink()
        self.written.clear()


def _add_param_flags(sp):
    g = sp.add_argument_group("parameters")
    g.add_argument("--params", metavar="FILE", help="flat JSON parameter document")
    for key in SCALED_KEYS:
        g.add_argument(f"--{key}", dest=f"p_{key}", type=float, metavar="V")
    for key in RAW_KEYS:
        g.add_argument(f"--{key.replace('_', '-')}", dest=f"p_{key}", type=float, metavar="V")


def _add_output_flags(sp, figure=True):
    sp.add_argument("--out-dir", type=Path, default=None,
                    help="output directory (default: $LGALLEE_OUTPUT_DIR or .)")
    sp.add_argument("--output", metavar="FILE", help="path of the main table or document")
    if figure:
        sp.add_argument("--figure", action="store_true", help="also render an SVG figure")


def _add_solver_flags(sp, t_end):
    g = sp.add_argument_group("solver")
    g.add_argument("--t-end", type=float, default=t_end)
    g.add_argument("--rel-tol", type=float, default=SolverConfig.rel_tol)
    g.add_argument("--abs-tol", type=float, default=SolverConfig.abs_tol)
    g.add_argument("--max-step", type=float, default=SolverConfig.max_step)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lgallee",
        description="Equilibria, normal forms and bifurcations of the scaled "
                    "Leslie-Gower model with Allee effect, cooperative hunting and stocking.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    for name, helptext in (
        ("equilibria", "interior equilibria with their classification"),
        ("classify", "classification with certificates"),
        ("normal-form", "normal-form report at the degenerate equilibrium"),
    ):
        sp = sub.add_parser(name, help=helptext)
        _add_param_flags(sp)
        _add_output_flags(sp, figure=False)
        sp.add_argument("--snap-tol", type=float, default=1e-8,
                        help="relative distance within which (a, h, s) snap to the "
                             "triple point; 0 disables")

    sp = sub.add_parser("degenerate", help="triple-point parameters for (m, lambda)")
    _add_param_flags(sp)
    _add_output_flags(sp, figure=False)

    sp = sub.add_parser("simulate", help="integrate one trajectory")
    _add_param_flags(sp)
    _add_output_flags(sp)
    sp.add_argument("--x0", type=float, required=True)
    sp.add_argument("--y0", type=float, required=True)
    _add_solver_flags(sp, t_end=100.0)

    sp = sub.add_parser("portrait", help="trajectory bundle, nullclines and equilibria")
    _add_param_flags(sp)
    _add_output_flags(sp)
    sp.add_argument("--window", type=float, nargs=4, default=(0.01, 1.0, 0.0, 1.0),
                    metavar=("XLO", "XHI", "YLO", "YHI"))
    sp.add_argument("--grid", type=int, nargs=2, default=(5, 5), metavar=("NX", "NY"))
    _add_solver_flags(sp, t_end=200.0)

    sp = sub.add_parser("sweep", help="root counts and kinds over an (a, h) grid")
    _add_param_flags(sp)
    _add_output_flags(sp)
    sp.add_argument("--a-range", type=float, nargs=2, default=(1.5, 1.9), metavar=("LO", "HI"))
    sp.add_argument("--h-range", type=float, nargs=2, default=(0.002, 0.006), metavar=("LO", "HI"))
    sp.add_argument("--resolution", type=int, nargs=2, default=(21, 21), metavar=("NA", "NH"))

    sp = sub.add_parser("folds", help="fold branches in the (a, h) plane")
    _add_param_flags(sp)
    _add_output_flags(sp)
    sp.add_argument("--a-range", type=float, nargs=2, default=(1.5, 1.9), metavar=("LO", "HI"))
    sp.add_argument("--resolution", type=int, default=201, metavar="N")

    sp = sub.add_parser("verify", help="run the analytic-claim checks")
    _add_output_flags(sp, figure=False)
    sp.add_argument("--only", type=int, nargs="+", metavar="N",
                    help="run only the listed checks (1-8)")
    return parser


def _param_doc(args) -> dict:
    doc = read_param_document(args.params) if args.params else {}
    for key in SCALED_KEYS + RAW_KEYS:
        value = getattr(args, f"p_{key}", None)
        if value is not None:
            doc[key] = value
    return doc


def _scaled(args) -> ScaledParams:
    return params_from_mapping(_param_doc(args))


def _partial(args, keys) -> dict:
    """Only the scaled ``keys``; raw documents are converted first."""
    doc = _param_doc(args)
    if any(k in doc for k in RAW_KEYS):
        return {k: v for k, v in params_from_mapping(doc).to_dict().items() if k in keys}
    missing = [k for k in keys if k not in doc]
    if missing:
        raise _Usage(f"missing parameter flag(s): {', '.join('--' + k for k in missing)}")
    return {k: float(doc[k]) for k in keys}


class _Usage(Exception):
    pass


def _solver(args) -> SolverConfig:
    return SolverConfig(rel_tol=args.rel_tol, abs_tol=args.abs_tol,
                        max_step=args.max_step, t_end=args.t_end)


def _classified(p):
    return [(eq, classify(p, eq)) for eq in interior_equilibria(p)]


def _snap(args, p, out):
    q, snapped = snap_to_triple_point(p, args.snap_tol)
    if snapped and q != p:
        print("note: parameters snapped to the exact triple point", file=out)
    return q


def cmd_equilibria(args, art, out):
    p = _snap(args, _scaled(args), out)
    pairs = _classified(p)
    path = art.text(art.path("equilibria.csv", args.output),
                    csv_text(EQUILIBRIA_COLUMNS, equilibria_rows(pairs)))
    for eq, cl in pairs:
        print(f"x={eq.x!r} y={eq.y!r} multiplicity={eq.multiplicity} kind={cl.kind}", file=out)
    print(f"wrote {path}", file=out)


def cmd_classify(args, art, out):
    p = _snap(args, _scaled(args), out)
    pairs = _classified(p)
    art.text(art.path("classify.csv", args.output),
             csv_text(EQUILIBRIA_COLUMNS, equilibria_rows(pairs)))
    doc = {"n_equilibria": len(pairs)}
    for i, (eq, cl) in enumerate(pairs):
        doc[f"eq{i}_kind"] = cl.kind
        doc[f"eq{i}_borderline"] = cl.borderline
        for name, value in cl.certificates:
            doc[f"eq{i}_{name}"] = value
    stem = art.path("classify.csv", args.output).with_suffix(".json")
    art.text(stem, document_text(doc))
    for eq, cl in pairs:
        print(f"x={eq.x!r} multiplicity={eq.multiplicity} kind={cl.kind}", file=out)


def cmd_degenerate(args, art, out):
    mp = _partial(args, ("m", "lambda"))
    dp = degenerate_point(mp["m"], mp["lambda"])
    s1 = dp.x1 * (2 * dp.a1 * dp.x1 + mp["lambda"])
    doc = {"m": mp["m"], "lambda": mp["lambda"], "a1": dp.a1, "h1": dp.h1,
           "x1": dp.x1, "s1": s1, "lambda_max": dp.lambda_max}
    path = art.text(art.path("degenerate.json", args.output), document_text(doc))
    print(f"a1={dp.a1!r} h1={dp.h1!r} x1={dp.x1!r} s1={s1!r}", file=out)
    print(f"wrote {path}", file=out)


def cmd_normal_form(args, art, out):
    p = _snap(args, _scaled(args), out)
    degenerate = [eq for eq in interior_equilibria(p) if eq.multiplicity == 3]
    if not degenerate:
        raise ClassificationError("no triple equilibrium at these parameters")
    eq = degenerate[0]
    report = analyze(p, State(eq.x, eq.y))
    doc = {"x": eq.x, "y": eq.y, **report.to_flat()}
    path = art.text(art.path("normal_form.json", args.output), document_text(doc))
    print(f"case={report.case} wrote {path}", file=out)


def cmd_simulate(args, art, out):
    p = _scaled(args)
    traj = integrate(p, State(args.x0, args.y0), _solver(args))
    path = art.text(art.path("trajectory.csv", args.output),
                    csv_text(TRAJECTORY_COLUMNS, trajectory_rows(traj)))
    if args.figure:
        from .plotting import trajectory_figure
        art.figure(trajectory_figure, path.with_suffix(".svg"), traj)
    print(f"terminated={traj.terminated} final=({traj.final.x!r}, {traj.final.y!r})", file=out)


def cmd_portrait(args, art, out):
    p = _scaled(args)
    data = phase_portrait(p, window=tuple(args.window), grid=tuple(args.grid), cfg=_solver(args))
    main = art.path("portrait.csv", args.output)
    rows = ((i, *row) for i, tr in enumerate(data.trajectories) for row in trajectory_rows(tr))
    art.text(main, csv_text(("seed",) + TRAJECTORY_COLUMNS, rows))
    null_rows = [("prey", float(x), float(y)) for x, y in data.prey_nullcline]
    null_rows += [("predator", float(x), float(y)) for x, y in data.predator_nullcline]
    art.text(main.with_name(main.stem + "_nullclines.csv"),
             csv_text(("curve", "x", "y"), null_rows))
    pairs = [(eq, classify(p, eq)) for eq in data.equilibria]
    art.text(main.with_name(main.stem + "_equilibria.csv"),
             csv_text(EQUILIBRIA_COLUMNS, equilibria_rows(pairs)))
    if args.figure:
        from .plotting import portrait_figure
        art.figure(portrait_figure, main.with_suffix(".svg"), data)
    print(f"trajectories={len(data.trajectories)} equilibria={len(pairs)}", file=out)


def cmd_sweep(args, art, out):
    mp = _partial(args, ("m", "lambda", "s"))
    if min(args.resolution) < 2:
        raise _Usage("--resolution needs at least 2 points per axis")
    grid = sweep(mp["m"], mp["lambda"], mp["s"], tuple(args.a_range), tuple(args.h_range),
                 tuple(args.resolution))
    path = art.text(art.path("sweep.csv", args.output), csv_text(SWEEP_COLUMNS, sweep_rows(grid)))
    if args.figure:
        from .plotting import sweep_figure
        try:
            folds = fold_curves(mp["m"], mp["lambda"], tuple(args.a_range))
        except ModelError:
            folds = None
        art.figure(sweep_figure, path.with_suffix(".svg"), grid, folds=folds)
    print(f"cells={sum(len(r) for r in grid)} wrote {path}", file=out)


def cmd_folds(args, art, out):
    mp = _partial(args, ("m", "lambda"))
    folds = fold_curves(mp["m"], mp["lambda"], tuple(args.a_range), resolution=args.resolution)
    path = art.text(art.path("folds.csv", args.output), csv_text(FOLD_COLUMNS, fold_rows(folds)))
    if args.figure:
        from .plotting import folds_figure
        art.figure(folds_figure, path.with_suffix(".svg"), folds)
    print(f"lower={len(folds.lower)} upper={len(folds.upper)} cusp=({folds.a1!r}, {folds.h1!r})",
          file=out)


def cmd_verify(args, art, out):
    from .verify import CHECKS, run_all

    select = set(args.only) if args.only else None
    if select and not select <= set(range(1, len(CHECKS) + 1)):
        raise _Usage(f"--only accepts 1..{len(CHECKS)}")
    checks = run_all(select)
    rows = [(c.criterion, c.name, c.passed, c.detail) for c in checks]
    main = art.path("verify_report.csv", args.output)
    art.text(main, csv_text(("criterion", "name", "passed", "detail"), rows))
    summary = {"n_checks": len(checks), "n_passed": sum(c.passed for c in checks),
               "all_passed": all(c.passed for c in checks)}
    summary.update({f"check{c.criterion}_passed": c.passed for c in checks})
    art.text(main.with_name("verify_summary.json"), document_text(summary))
    width = max(len(c.name) for c in checks)
    for c in checks:
        print(f"[{'PASS' if c.passed else 'FAIL'}] {c.criterion} {c.name:<{width}}  {c.detail}",
              file=out)
    print(f"{summary['n_passed']}/{summary['n_checks']} checks passed", file=out)
    return 0 if summary["all_passed"] else EXIT_VERIFY_FAILED


HANDLERS = {
    "equilibria": cmd_equilibria,
    "classify": cmd_classify,
    "degenerate": cmd_degenerate,
    "normal-form": cmd_normal_form,
    "simulate": cmd_simulate,
    "portrait": cmd_portrait,
    "sweep": cmd_sweep,
    "folds": cmd_folds,
    "verify": cmd_verify,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    art = Artifacts(args.out_dir if args.out_dir is not None else default_output_dir())
    try:
        status = HANDLERS[args.command](args, art, out) or 0
    except _Usage as exc:
        art.remove_all()
        parser.print_usage(sys.stderr)
        print(f"lgallee {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ModelError as exc:
        art.remove_all()
        print(f"lgallee {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        art.remove_all()
        print(f"lgallee {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except BaseException:
        art.remove_all()
        raise
    return status


if __name__ == "__main__":
    sys.exit(main())
