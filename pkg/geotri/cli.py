"""
geotri command line.

    geotri generate --model hyperbolic --alpha 0.45 --layers 200 --out m.json
    geotri validate m.json --checks degree,crossing,euler,disk
    geotri stats m.json --fit type1 --range 50:200
    geotri render m.json --disk-model poincare --out m.svg

Exit codes: 0 ok, 1 a validation check failed, 2 usage or file error,
3 the radius schedule failed validation.
"""
import argparse
import json
import logging
import sys

from . import config
from .analysis import (
    edge_length_stats,
    edge_lengths,
    loglog_slope,
    stats_rows,
    type_series,
    write_csv,
    write_json,
)
from .errors import GeotriError, MeshFileError, ScheduleValidationError
from .generators.euclidean import EuclideanParams, Schedule, generate_euclidean
from .generators.hyperbolic import (
    HyperbolicParams,
    RadiusSchedule,
    generate_hyperbolic,
    margin_series,
    validate_schedule,
)
from .generators.lattice import generate_torus
from .generators.sphere import generate_sphere
from .mesh import EdgeType, Geometry, feasibility
from .mesh_file import load_mesh, save_mesh
from .render import DISK_MODELS, render_to_file
from .validation import CHECK_NAMES, available_checks, run_checks

logger = logging.getLogger(__name__)

MODELS = ('euclidean', 'hyperbolic', 'sphere', 'torus')
FITS = ('type1', 'margin-lhs', 'margin-rhs')


class UsageError(Exception):
    """Flag combination that argparse alone cannot reject."""


def _fail(message: str, code: str = 'usage') -> int:
    print(f"geotri: error: {message}", file=sys.stderr)
    return config.EXIT_CODES[code]


# --- generate ---

def _schedule_from_args(args) -> RadiusSchedule:
    alpha = config.DEFAULT_ALPHA if args.alpha is None else args.alpha
    layers = config.DEFAULT_BOOTSTRAP_LAYERS if args.bootstrap_layers is None else args.bootstrap_layers
    if layers == 0:
        return RadiusSchedule.pure(alpha)
    return RadiusSchedule.default(alpha, layers)


def _build_from_args(args):
    model = args.model
    given = {name for name in ('k', 'alpha', 'layers', 'schedule', 'base', 'bootstrap_layers')
             if getattr(args, name) is not None}
    allowed = {
        'euclidean': {'k', 'layers', 'schedule', 'base'},
        'hyperbolic': {'k', 'alpha', 'layers', 'bootstrap_layers'},
        'sphere': {'k'},
        'torus': set(),
    }[model]
    extra = sorted(given - allowed)
    if extra:
        raise UsageError(f"--{extra[0].replace('_', '-')} does not apply to --model {model}")

    if model == 'torus':
        return generate_torus()
    if model == 'sphere':
        if args.k is None:
            raise UsageError("--model sphere needs --k (3, 4 or 5)")
        return generate_sphere(args.k)
    if args.layers is None:
        raise UsageError(f"--model {model} needs --layers")
    if model == 'hyperbolic':
        if args.k not in (None, 6):
            raise UsageError("the hyperbolic construction is 6-regular; --k must be 6")
        return generate_hyperbolic(HyperbolicParams(_schedule_from_args(args), args.layers))
    if args.k is None:
        raise UsageError("--model euclidean needs --k")
    params = EuclideanParams(args.k, args.layers, Schedule(args.schedule or 'unit'),
                             2.0 if args.base is None else args.base)
    return generate_euclidean(params)


def cmd_generate(args) -> int:
    try:
        mesh = _build_from_args(args)
    except ScheduleValidationError as exc:
        return _fail(str(exc), 'schedule')
    except (UsageError, GeotriError, ValueError) as exc:
        return _fail(str(exc))
    try:
        save_mesh(mesh, args.out)
    except OSError as exc:
        return _fail(f"cannot write {args.out}: {exc}")
    if mesh.geometry is Geometry.COMBINATORIAL or mesh.num_edges == 0:
        longest = 'n/a'
    else:
        longest = repr(float(edge_lengths(mesh).max()))
    print(f"V={mesh.num_vertices} E={mesh.num_edges} F={mesh.num_faces} max_edge={longest}")
    return config.EXIT_CODES['ok']


# --- validate ---

def cmd_validate(args) -> int:
    try:
        mesh = load_mesh(args.path)
    except MeshFileError as exc:
        return _fail(str(exc))
    if args.checks:
        checks = [c.strip() for c in args.checks.split(',') if c.strip()]
        unknown = [c for c in checks if c not in CHECK_NAMES]
        if unknown:
            return _fail(f"unknown check {unknown[0]!r}; choose from {','.join(CHECK_NAMES)}")
    else:
        checks = list(available_checks(mesh))
    reports = run_checks(mesh, checks, k=args.k)
    for report in reports:
        print(json.dumps(report.to_dict(), sort_keys=True))
    ok = all(r.passed for r in reports)
    return config.EXIT_CODES['ok' if ok else 'validation_failed']


# --- stats ---

def parse_range(text: str) -> tuple:
    try:
        lo, hi = (int(part) for part in text.split(':'))
    except ValueError:
        raise UsageError(f"range must look like LO:HI, got {text!r}") from None
    if not hi > lo >= 1:
        raise UsageError(f"range needs HI > LO >= 1, got {lo}:{hi}")
    return lo, hi


def _fit(mesh, stats, kind: str, rng):
    if kind == 'type1':
        series = type_series(stats, EdgeType.TYPE1, 'max')
        if not series:
            raise UsageError("mesh has no Type1 edges to fit")
        if rng is None:
            top = max(n for n, _ in series)
            rng = (max(1, top // 10), top)
        return loglog_slope(series, *rng)

    if mesh.geometry is not Geometry.HYPERBOLIC or 'alpha' not in mesh.params:
        raise UsageError(f"--fit {kind} needs a hyperbolic mesh with a recorded schedule")
    schedule = RadiusSchedule(mesh.params['alpha'], tuple(mesh.params.get('bootstrap', ())))
    if rng is None:
        top = int(mesh.params.get('layers', 1))
        rng = (max(1, top // 10), top)
    n, lhs, rhs = margin_series(schedule, rng[1])
    values = lhs if kind == 'margin-lhs' else rhs
    return loglog_slope(list(zip(n.tolist(), values.tolist())), *rng)


def cmd_stats(args) -> int:
    try:
        rng = parse_range(args.range) if args.range else None
        mesh = load_mesh(args.path)
        stats = edge_length_stats(mesh)
        fit = _fit(mesh, stats, args.fit, rng) if args.fit else None
    except (UsageError, GeotriError) as exc:
        return _fail(str(exc))
    rows = stats_rows(stats)
    if rng is not None and fit is None:
        rows = [r for r in rows if rng[0] <= r['layer'] <= rng[1]]
    writer = write_csv if args.format == 'csv' else write_json
    writer(rows, sys.stdout, fit)
    return config.EXIT_CODES['ok']


# --- render ---

def cmd_render(args) -> int:
    try:
        mesh = load_mesh(args.path)
        stroke = args.stroke_width
        if stroke is None:
            span = 2.1 if mesh.geometry is not Geometry.EUCLIDEAN else float(
                (mesh.positions.max(axis=0) - mesh.positions.min(axis=0)).max() or 1.0)
            stroke = span / 1000.0
        render_to_file(mesh, args.out, args.format, args.disk_model, stroke, args.size)
    except GeotriError as exc:
        return _fail(str(exc))
    except OSError as exc:
        return _fail(f"cannot write {args.out}: {exc}")
    return config.EXIT_CODES['ok']


# --- extras ---

def cmd_feasibility(args) -> int:
    try:
        result = feasibility(args.k, args.genus)
    except ValueError as exc:
        return _fail(str(exc))
    print(json.dumps(result.to_dict(), sort_keys=True))
    return config.EXIT_CODES['ok']


def cmd_schedule(args) -> int:
    try:
        report = validate_schedule(_schedule_from_args(args), args.layers)
    except (GeotriError, ValueError) as exc:
        return _fail(str(exc))
    print(json.dumps(report.to_dict(), sort_keys=True))
    return config.EXIT_CODES['ok' if report.ok else 'schedule']


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='geotri', description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument('-v', '--verbose', action='count', default=0, help='more log output on stderr')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('generate', help='generate a mesh file')
    p.add_argument('--model', choices=MODELS, required=True)
    p.add_argument('--k', type=int)
    p.add_argument('--alpha', type=float)
    p.add_argument('--layers', type=int)
    p.add_argument('--schedule', choices=[s.value for s in Schedule])
    p.add_argument('--base', type=float, help='geometric schedule base (default 2)')
    p.add_argument('--bootstrap-layers', type=int,
                   help=f'hyperbolic rings with shifted radii (default {config.DEFAULT_BOOTSTRAP_LAYERS}, 0 = pure log rule)')
    p.add_argument('--out', required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser('validate', help='run validation checks on a mesh file')
    p.add_argument('path')
    p.add_argument('--checks', help=f"comma list of {','.join(CHECK_NAMES)}")
    p.add_argument('--k', type=int, help='degree for the degree check (default from the file)')
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser('stats', help='edge length and angle statistics per layer')
    p.add_argument('path')
    p.add_argument('--by', choices=['layer'], default='layer')
    p.add_argument('--fit', choices=FITS)
    p.add_argument('--range', help='LO:HI layer range')
    p.add_argument('--format', choices=['csv', 'json'], default='csv')
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser('render', help='draw a mesh file')
    p.add_argument('path')
    p.add_argument('--format', choices=['svg', 'png'], default='svg')
    p.add_argument('--disk-model', choices=DISK_MODELS, default='klein')
    p.add_argument('--out', required=True)
    p.add_argument('--stroke-width', type=float)
    p.add_argument('--size', type=int, default=1024, help='image size in pixels')
    p.set_defaults(func=cmd_render)

    p = sub.add_parser('feasibility', help='vertex/edge/face counts for a closed surface')
    p.add_argument('--k', type=int, required=True)
    p.add_argument('--genus', type=int, default=0)
    p.set_defaults(func=cmd_feasibility)

    p = sub.add_parser('schedule', help='check the validity inequality of a radius schedule')
    p.add_argument('--alpha', type=float)
    p.add_argument('--layers', type=int, required=True)
    p.add_argument('--bootstrap-layers', type=int)
    p.set_defaults(func=cmd_schedule)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = config.LOG_LEVEL if not args.verbose else ('INFO' if args.verbose == 1 else 'DEBUG')
    logging.basicConfig(level=level, format='[%(name)s] %(levelname)s %(message)s', stream=sys.stderr)
    return args.func(args)


if __name__ == '__main__':
    sys.exit(main())
