"""
Command-line interface for the triangular ratio metric toolkit
"""

import argparse
import math
import os
import sys
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Union

# Add project root to Python path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from config.config import (
    A_STRATA, DEFAULT_SCAN_STEPS, DEFAULT_SEED, DEFAULT_TOLERANCE, DEFAULT_TRIALS,
    SHARPNESS_BUDGET, THREADS, TWO_PI
)
from src.distortion import refined_constant, refined_trial, sharpness_search
from src.domains import Disk, MetricDomain, UnitDisk, UpperHalfPlane, create_domain, signed_area
from src.ellipse import max_modulus, maximal_inscribed_ellipse, proof_ellipse
from src.errors import InvalidInputError, TrimetricError
from src.geometry import (
    DiskAutomorphism, MoebiusMap, TangencyKind, circle_radius_R, classify_tangency,
    point_to_dict, theta_from_phi, unit
)
from src.hyperbolic import (
    rho_from_tanh_half, tanh_half_rho_disk, tanh_half_rho_halfplane, tanh_half_rho_unit_disk
)
from src.logger import logger
from src.report import OUTPUT_FORMATS, RunReport
from src.trimetric import (
    BoundaryInfResult, s_convex_polygon, s_halfplane, s_unit_disk, s_via_supporting_halfplanes
)
from src.verifier import VerificationSuite, resolve_threads

# Options whose values may start with a minus sign
POINT_OPTIONS = ('--z1', '--z2', '--center', '--vertices', '--map-center')

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2


def parse_point(text: str) -> complex:
    """'re,im' -> complex"""
    parts = text.split(',')
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected 're,im', got {text!r}")
    try:
        z = complex(float(parts[0]), float(parts[1]))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 're,im', got {text!r}")
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise argparse.ArgumentTypeError(f"point must be finite, got {text!r}")
    return z


def parse_vertices(text: str) -> List[complex]:
    """'x1,y1;x2,y2;...' -> list of complex"""
    return [parse_point(item) for item in text.split(';') if item.strip()]


def _attach_option_values(argv: List[str]) -> List[str]:
    # argparse reads "-0.5,0" as an option flag; glue such values to their option
    result = []
    i = 0
    while i < len(argv):
        token = argv[i]
        if (token in POINT_OPTIONS and i + 1 < len(argv)
                and argv[i + 1].startswith('-') and argv[i + 1][1:2] in '0123456789.'):
            result.append(f"{token}={argv[i + 1]}")
            i += 2
            continue
        result.append(token)
        i += 1
    return result


@dataclass
class RunConfig:
    """Validated settings of one run; threads and --out never reach the report"""

    command: str
    a: Optional[float] = None
    points: List[complex] = field(default_factory=list)
    trials: int = DEFAULT_TRIALS
    seed: int = DEFAULT_SEED
    tolerance: float = DEFAULT_TOLERANCE
    output_format: str = 'json'
    domain_spec: Optional[Dict[str, Any]] = None
    budget: Optional[int] = None
    steps: Optional[int] = None
    all_a: bool = False
    threads: Union[int, str] = THREADS
    out: Optional[str] = None

    def __post_init__(self):
        if self.trials < 1:
            raise InvalidInputError(f"--trials must be at least 1, got {self.trials}")
        if not self.tolerance > 0.0:
            raise InvalidInputError(f"--tol must be positive, got {self.tolerance}")
        if self.a is not None and not 0.0 <= self.a < 1.0:
            raise InvalidInputError(f"--a must lie in [0, 1), got {self.a}")
        if self.command == 'verify':
            self.threads = resolve_threads(self.threads)
        if self.output_format not in OUTPUT_FORMATS:
            raise InvalidInputError(f"Unknown output format: {self.output_format}")

    def to_dict(self) -> Dict[str, Any]:
        data = {
            'command': self.command,
            'a': self.a,
            'points': [point_to_dict(p) for p in self.points],
            'trials': self.trials,
            'seed': self.seed,
            'tolerance': self.tolerance,
            'output_format': self.output_format,
            'domain': self.domain_spec,
        }
        if self.command == 'verify':
            data['a_values'] = list(A_STRATA) if self.all_a else [self.a]
        if self.budget is not None:
            data['budget'] = self.budget
        if self.steps is not None:
            data['steps'] = self.steps
        return data


def create_parser():
    """Create argument parser for CLI"""
    parser = argparse.ArgumentParser(
        prog='trimetric',
        description="Triangular ratio metric and Moebius distortion toolkit",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  trimetric compute --domain unit-disk --z1 0,0 --z2 0.5,0
  trimetric compute --domain polygon --vertices "-1,-1;1,-1;1,1;-1,1" --z1 -0.5,0 --z2 0.5,0
  trimetric compute --z1 0.2,0.1 --z2 -0.3,0.4 --a 0.5
  trimetric verify --a 0.5 --trials 100000 --seed 7 --tol 1e-9
  trimetric verify --all-a --trials 10000
  trimetric sharpness --a 0.5 --budget 100000 --seed 42
  trimetric scan --a 0.3 --steps 360
        """
    )

    subparsers = parser.add_subparsers(dest='command', help='Available commands')

    def add_output_options(sub, default_format='json'):
        sub.add_argument('--format', choices=OUTPUT_FORMATS, default=default_format,
                         help=f'Report format (default: {default_format})')
        sub.add_argument('--out', type=str, help='Write the report to FILE instead of stdout')

    # Compute command
    compute_parser = subparsers.add_parser('compute', help='Compute metric values for two points')
    compute_parser.add_argument('--domain', choices=['unit-disk', 'halfplane', 'disk', 'polygon'],
                                default='unit-disk', help='Domain (default: unit-disk)')
    compute_parser.add_argument('--z1', type=parse_point, required=True, help='First point as re,im')
    compute_parser.add_argument('--z2', type=parse_point, required=True, help='Second point as re,im')
    compute_parser.add_argument('--vertices', type=parse_vertices,
                                help='Polygon vertices as "x1,y1;x2,y2;..."')
    compute_parser.add_argument('--center', type=parse_point, default=0j, help='Disk center (default: 0,0)')
    compute_parser.add_argument('--radius', type=float, default=1.0, help='Disk radius (default: 1)')
    compute_parser.add_argument('--a', type=float, help='Apply f(z) = (z + a) / (1 + a z) and report the distortion')
    compute_parser.add_argument('--map-center', type=parse_point,
                                help='Apply the automorphism with this center and report the distortion')
    compute_parser.add_argument('--map-rotation', type=float, default=0.0,
                                help='Rotation of the automorphism (default: 0)')
    add_output_options(compute_parser)

    # Verify command
    verify_parser = subparsers.add_parser('verify', help='Run the randomized distortion suites')
    a_group = verify_parser.add_mutually_exclusive_group(required=True)
    a_group.add_argument('--a', type=float, help='Parameter of the canonical map')
    a_group.add_argument('--all-a', action='store_true', help='Run every a-stratum')
    verify_parser.add_argument('--trials', type=int, default=DEFAULT_TRIALS,
                               help=f'Trials per a-stratum (default: {DEFAULT_TRIALS})')
    verify_parser.add_argument('--seed', type=int, default=DEFAULT_SEED,
                               help=f'Random seed (default: {DEFAULT_SEED})')
    verify_parser.add_argument('--tol', type=float, default=DEFAULT_TOLERANCE,
                               help=f'Violation tolerance (default: {DEFAULT_TOLERANCE})')
    verify_parser.add_argument('--threads', type=int, default=None,
                               help='Worker threads, 0 = one per CPU (default: TRIMETRIC_THREADS or 0)')
    add_output_options(verify_parser)

    # Sharpness command
    sharpness_parser = subparsers.add_parser('sharpness', help='Search for the largest distortion ratio')
    sharpness_parser.add_argument('--a', type=float, required=True, help='Parameter in (0, 1)')
    sharpness_parser.add_argument('--budget', type=int, default=SHARPNESS_BUDGET,
                                  help=f'Objective evaluations (default: {SHARPNESS_BUDGET})')
    sharpness_parser.add_argument('--seed', type=int, default=0, help='Random seed (default: 0)')
    add_output_options(sharpness_parser)

    # Scan command
    scan_parser = subparsers.add_parser('scan', help='Tabulate the refined constant over the contact angle')
    scan_parser.add_argument('--a', type=float, required=True, help='Parameter in (0, 1)')
    scan_parser.add_argument('--steps', type=int, default=DEFAULT_SCAN_STEPS,
                             help=f'Number of angles (default: {DEFAULT_SCAN_STEPS})')
    add_output_options(scan_parser, default_format='csv')

    return parser


def build_domain(args) -> MetricDomain:
    """Domain from compute flags; clockwise polygons are reversed"""
    if args.domain == 'polygon':
        if not args.vertices:
            raise InvalidInputError("--vertices is required for the polygon domain")
        vertices = list(args.vertices)
        if signed_area(vertices) < 0.0:
            vertices.reverse()
        return create_domain('polygon', vertices=vertices)
    if args.domain == 'disk':
        return create_domain('disk', center=args.center, radius=args.radius)
    return create_domain(args.domain)


def _halfplane_witness(u: complex, v: complex) -> complex:
    # the segment from u to conj(v) crosses the real axis here
    t = u.imag / (u.imag + v.imag)
    return complex(u.real + t * (v.real - u.real), 0.0)


def metric_record(domain: MetricDomain, z1: complex, z2: complex) -> Dict[str, Any]:
    """s-value, boundary witness, hyperbolic value and ellipse data for one pair"""
    record: Dict[str, Any] = {'domain': domain.describe(), 'z1': point_to_dict(z1), 'z2': point_to_dict(z2)}

    if isinstance(domain, UnitDisk):
        value, contact = s_unit_disk(z1, z2)
        tanh_half = tanh_half_rho_unit_disk(z1, z2)
    elif isinstance(domain, Disk):
        scale = domain.radius
        z1, z2 = domain.validate_points(z1, z2)
        value, local = s_unit_disk((z1 - domain.center) / scale, (z2 - domain.center) / scale)
        contact = BoundaryInfResult(local.value * scale, domain.center + scale * local.witness,
                                    local.witness_angle)
        tanh_half = tanh_half_rho_disk(domain.disk, z1, z2)
    elif isinstance(domain, UpperHalfPlane):
        value = s_halfplane(z1, z2)
        w = _halfplane_witness(z1, z2)
        contact = BoundaryInfResult(abs(z1 - w) + abs(w - z2), w)
        tanh_half = tanh_half_rho_halfplane(z1, z2)
    else:
        value, contact = s_convex_polygon(domain, z1, z2)
        tanh_half = None
        record['supporting_halfplane_sup'] = s_via_supporting_halfplanes(domain, z1, z2)

    record['s'] = value
    record['contact'] = contact.to_dict()
    record['tanh_half_rho'] = tanh_half
    record['rho'] = rho_from_tanh_half(tanh_half) if tanh_half is not None else None

    if isinstance(domain, UnitDisk):
        inscribed = maximal_inscribed_ellipse(z1, z2)
        ellipse = inscribed.to_dict()
        ellipse['max_modulus'] = max_modulus(inscribed.ellipse)
        record['ellipse'] = ellipse
        record['proof_ellipse'] = proof_ellipse(z1, z2).to_dict()
    return record


def distortion_record(args, z1: complex, z2: complex) -> Dict[str, Any]:
    """Images and distortion ratio under the requested automorphism"""
    if args.map_center is not None:
        g = DiskAutomorphism(args.map_rotation, args.map_center)
        pre, m, post = g.canonical()
        images = (g.apply(z1), g.apply(z2))
        description = {'center': point_to_dict(g.center), 'rotation': g.rotation, 'a': m.a,
                       'pre_rotation': pre, 'post_rotation': post}
    else:
        m = MoebiusMap(args.a)
        pre = 0.0
        images = (m(z1), m(z2))
        description = {'a': m.a}

    # rotations preserve s_U, so the canonical map sees the rotated pair
    report = refined_trial(m.a, unit(pre) * z1, unit(pre) * z2)
    data = report.to_dict()
    data['w1'], data['w2'] = point_to_dict(images[0]), point_to_dict(images[1])
    return {'map': description, **data}


def handle_compute_command(cfg: RunConfig, args) -> RunReport:
    """Handle compute command"""
    domain = build_domain(args)
    cfg.domain_spec = domain.describe()
    z1, z2 = cfg.points
    record = metric_record(domain, z1, z2)

    report = RunReport('compute', cfg.to_dict())
    if args.a is not None or args.map_center is not None:
        if not isinstance(domain, UnitDisk):
            raise InvalidInputError("Distortion is only defined for the unit-disk domain")
        distortion = distortion_record(args, z1, z2)
        record['distortion'] = distortion
        for name in distortion['violations']:
            report.add_violation({'check': name, 'report': distortion})
    report.add_result(record)
    report.summary = {'s': record['s'], 'passed': report.passed}
    return report


def handle_verify_command(cfg: RunConfig, args) -> RunReport:
    """Handle verify command"""
    a_values = list(A_STRATA) if cfg.all_a else [cfg.a]
    suite = VerificationSuite(a_values, cfg.trials, seed=cfg.seed, tolerance=cfg.tolerance,
                              threads=cfg.threads)
    result = suite.run()

    report = RunReport('verify', cfg.to_dict())
    for stratum in result.strata:
        report.add_result(stratum.to_dict())
    for outcome in result.violations:
        report.add_violation(outcome.to_dict())
    report.summary = result.summary()
    return report


def handle_sharpness_command(cfg: RunConfig, args) -> RunReport:
    """Handle sharpness command"""
    if not 0.0 < cfg.a < 1.0:
        raise InvalidInputError(f"Sharpness search needs 0 < a < 1, got {cfg.a}")
    result = sharpness_search(cfg.a, budget=cfg.budget, seed=cfg.seed)

    report = RunReport('sharpness', cfg.to_dict())
    data = result.to_dict()
    report.add_result(data)
    report.summary = {'best_ratio': result.best_ratio, 'bound_upper': 1.0 + result.a, 'gap': result.gap}
    if result.best_ratio > 1.0 + result.a + cfg.tolerance:
        report.add_violation({'check': 'upper_bound', 'result': data})
    return report


def scan_rows(a: float, steps: int) -> List[Dict[str, Any]]:
    """Contact angle grid: refined constant, tangency and preimage radius"""
    m = MoebiusMap(a)
    rows = []
    for k in range(steps):
        phi = TWO_PI * k / steps
        tangency = classify_tangency(m, phi)
        theta = theta_from_phi(m, phi)
        R = circle_radius_R(m, theta) if tangency is TangencyKind.INTERNAL else None
        rows.append({
            'phi': phi,
            'cos_phi': math.cos(phi),
            'tangency': tangency.value,
            'refined_constant': refined_constant(a, phi),
            'theta': theta,
            'R': R,
        })
    return rows


def handle_scan_command(cfg: RunConfig, args) -> RunReport:
    """Handle scan command"""
    if not 0.0 < cfg.a < 1.0:
        raise InvalidInputError(f"Scan needs 0 < a < 1, got {cfg.a}")
    if cfg.steps < 1:
        raise InvalidInputError(f"--steps must be at least 1, got {cfg.steps}")

    report = RunReport('scan', cfg.to_dict())
    for row in scan_rows(cfg.a, cfg.steps):
        report.add_result(row)
    constants = [row['refined_constant'] for row in report.results]
    peak = max(range(len(constants)), key=constants.__getitem__)
    report.summary = {
        'rows': len(report.results),
        'max_refined_constant': constants[peak],
        'argmax_phi': report.results[peak]['phi'],
        'internal': sum(row['tangency'] == TangencyKind.INTERNAL.value for row in report.results),
        'external': sum(row['tangency'] == TangencyKind.EXTERNAL.value for row in report.results),
    }
    return report


def build_config(args) -> RunConfig:
    """RunConfig from parsed arguments"""
    if args.command == 'compute':
        if args.a is not None and args.map_center is not None:
            raise InvalidInputError("--a and --map-center are mutually exclusive")
        return RunConfig(command='compute', a=args.a, points=[args.z1, args.z2],
                         output_format=args.format, out=args.out)
    if args.command == 'verify':
        return RunConfig(command='verify', a=args.a, trials=args.trials, seed=args.seed,
                         tolerance=args.tol, output_format=args.format, all_a=args.all_a,
                         threads=THREADS if args.threads is None else args.threads, out=args.out)
    if args.command == 'sharpness':
        return RunConfig(command='sharpness', a=args.a, seed=args.seed, budget=args.budget,
                         output_format=args.format, out=args.out)
    return RunConfig(command='scan', a=args.a, steps=args.steps, output_format=args.format, out=args.out)


def main(argv: Optional[List[str]] = None) -> int:
    """Main CLI entry point; returns the exit code"""
    parser = create_parser()
    args = parser.parse_args(_attach_option_values(list(sys.argv[1:] if argv is None else argv)))

    if not args.command:
        parser.print_help()
        return EXIT_USAGE

    # Route to appropriate handler
    handlers = {
        'compute': handle_compute_command,
        'verify': handle_verify_command,
        'sharpness': handle_sharpness_command,
        'scan': handle_scan_command,
    }

    try:
        cfg = build_config(args)
        report = handlers[args.command](cfg, args)
        report.export(cfg.output_format, cfg.out)
    except TrimetricError as e:
        logger.error(f"{args.command} failed: {e}")
        return EXIT_USAGE
    except OSError as e:
        logger.error(f"Failed to write report: {e}")
        return EXIT_USAGE

    stats = report.get_statistics()
    if not report.passed:
        logger.warning(f"{stats['violations']} violation(s) found")
        return EXIT_VIOLATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
