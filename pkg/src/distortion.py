"""
Distortion of the triangular ratio metric of the unit disk under the
canonical Moebius map f(z) = (z + a) / (1 + a z)

Every trial compares s_U(f(z1), f(z2)) with s_U(z1, z2) against the
upper bound 1 + a, the lower bound 1 / (1 + a), and the refined bound
that depends on where the image ellipse touches the unit circle.
"""

import math
import os
import sys
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from scipy.optimize import minimize

# Add project root to Python path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from config.config import (
    DEGENERATE_S, PROOF_TERM_TOL, SHARPNESS_BUDGET, SHARPNESS_CHUNK,
    SHARPNESS_MIN_BUDGET, TANGENCY_EPS, TWO_PI, VIOLATION_TOL
)
from src.ellipse import maximal_inscribed_ellipse, proof_ellipse, zeta
from src.errors import DegenerateTrialError, InvalidInputError, NotApplicableError
from src.geometry import (
    MoebiusMap, PointLike, TangencyKind, as_real, circle_radius_R, classify_tangency,
    point_to_dict, theta_from_phi
)
from src.logger import logger
from src.trimetric import UNIT_DISK, ContactTable, s_unit_disk, s_unit_disk_batch

_MAX_SEARCH_MODULUS = 1.0 - 1e-12


@dataclass
class DistortionReport:
    """One trial: a pair, its image under f, and every bound checked on it"""

    a: float
    z1: complex
    z2: complex
    w1: complex
    w2: complex
    s_before: float
    s_after: float
    ratio: float
    bound_upper: float
    bound_refined: float
    phi: float
    contacts: List[float]
    tangency: TangencyKind
    margin: float
    margin_refined: float
    violations: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> Dict[str, Any]:
        return {
            'a': self.a,
            'z1': point_to_dict(self.z1),
            'z2': point_to_dict(self.z2),
            'w1': point_to_dict(self.w1),
            'w2': point_to_dict(self.w2),
            's_before': self.s_before,
            's_after': self.s_after,
            'ratio': self.ratio,
            'bound_upper': self.bound_upper,
            'bound_refined': self.bound_refined,
            'phi': self.phi,
            'contacts': list(self.contacts),
            'tangency': self.tangency.value,
            'margin': self.margin,
            'margin_refined': self.margin_refined,
            'violations': list(self.violations),
        }


@dataclass
class ProofTermReport:
    """Quantities from the internal-tangency estimate, each inequality checked numerically"""

    phi: float
    theta: float
    psi: float
    R: float
    r: float
    a_modulus: float
    a_lower: float
    b_modulus: float
    b_upper: float
    difference_modulus: float
    radius_residual: float
    radius_floor: float
    constant: float
    preimage_value: float
    image_value: float
    halfplane_value: float
    s_before: float
    failed_checks: List[str] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return not self.failed_checks

    def to_dict(self) -> Dict[str, Any]:
        data = {name: getattr(self, name) for name in self.__dataclass_fields__}
        data['failed_checks'] = list(self.failed_checks)
        return data


@dataclass
class SharpnessResult:
    """Best distortion ratio found by the multistart search"""

    a: float
    best_ratio: float
    z1: complex
    z2: complex
    evaluations: int
    starts: int
    trace: List[Tuple[int, float]] = field(default_factory=list)

    @property
    def gap(self) -> float:
        return 1.0 + self.a - self.best_ratio

    def to_dict(self) -> Dict[str, Any]:
        return {
            'a': self.a,
            'best_ratio': self.best_ratio,
            'argmax': [point_to_dict(self.z1), point_to_dict(self.z2)],
            'gap': self.gap,
            'evaluations': self.evaluations,
            'starts': self.starts,
            'trace': [{'evaluations': n, 'best_ratio': r} for n, r in self.trace],
        }


def refined_constant(a: float, phi: float) -> float:
    """
    Distortion constant when the image ellipse touches the circle at e^{i phi}

    1 + a (cos(phi) - a) / (1 - a cos(phi)) if cos(phi) >= a, else 1.
    """
    a = as_real(a, 'a')
    c = math.cos(as_real(phi, 'phi'))
    if c < a:
        return 1.0
    return 1.0 + a * (c - a) / (1.0 - a * c)


def _prepare(a: float, z1: PointLike, z2: PointLike):
    m = MoebiusMap(a)
    z1, z2 = UNIT_DISK.validate_points(z1, z2)
    if z1 == z2:
        raise InvalidInputError("Distortion trials need distinct points")
    return m, z1, z2


def _evaluate(a: float, z1: PointLike, z2: PointLike, tol: float) -> DistortionReport:
    m, z1, z2 = _prepare(a, z1, z2)
    s_before, _ = s_unit_disk(z1, z2)
    if s_before < DEGENERATE_S:
        raise DegenerateTrialError(f"s_U(z1, z2) = {s_before} is below {DEGENERATE_S}")

    w1, w2 = m(z1), m(z2)
    image = maximal_inscribed_ellipse(w1, w2)
    s_after = abs(w1 - w2) / image.ellipse.distance_sum
    ratio = s_after / s_before
    phi = image.contacts[0]
    # every contact gives a valid bound; keep the most permissive
    bound_refined = max(refined_constant(m.a, c) for c in image.contacts)
    bound_upper = 1.0 + m.a

    violations = []
    if ratio > bound_upper + tol:
        violations.append('upper_bound')
    if ratio < 1.0 / bound_upper - tol:
        violations.append('lower_bound')

    return DistortionReport(
        a=m.a, z1=z1, z2=z2, w1=w1, w2=w2,
        s_before=s_before, s_after=s_after, ratio=ratio,
        bound_upper=bound_upper, bound_refined=bound_refined,
        phi=phi, contacts=list(image.contacts), tangency=classify_tangency(m, phi),
        margin=bound_upper - ratio, margin_refined=bound_refined - ratio,
        violations=violations,
    )


def distortion_trial(a: float, z1: PointLike, z2: PointLike, tol: float = VIOLATION_TOL) -> DistortionReport:
    """Check 1/(1+a) <= s_U(w1, w2) / s_U(z1, z2) <= 1 + a for one pair"""
    return _evaluate(a, z1, z2, tol)


def refined_trial(a: float, z1: PointLike, z2: PointLike, tol: float = VIOLATION_TOL) -> DistortionReport:
    """distortion_trial plus the contact-dependent bound"""
    report = _evaluate(a, z1, z2, tol)
    if report.bound_refined > report.bound_upper + 1e-12:
        report.violations.append('refined_exceeds_upper')
    if report.ratio > report.bound_refined + tol:
        report.violations.append('refined_bound')
    if report.bound_refined == 1.0 and report.ratio > 1.0 + tol:
        report.violations.append('external_contraction')
    return report


def _proof_quantities(a: float, z1, z2, theta, R, psi, r, image_value, s_before) -> Dict[str, Any]:
    # elementwise; z1, z2 and the angles may be scalars or arrays of equal shape
    k = 2.0 * R - 1.0
    zeta1_psi = zeta(z1, psi)
    zeta2_psi_bar = np.conj(zeta(z2, psi))
    sum_theta = zeta(z1, theta) + np.conj(zeta(z2, theta))
    sum_psi = zeta1_psi + zeta2_psi_bar
    A = ((R - 1.0) * sum_theta + sum_psi) / k
    B = zeta1_psi * zeta2_psi_bar / k

    e = np.exp(1j * np.asarray(theta, dtype=float))
    distance = np.abs(z1 - z2)
    # R^2 - (z1 - z0)(conj z2 - conj z0) with z0 = (1 - R) e^{i theta}, expanded to avoid cancellation
    preimage_value = R * distance / np.abs(k - (R - 1.0) * (z1 / e + e * np.conj(z2)) - z1 * np.conj(z2))
    return {
        'R': R,
        'r': r,
        'a_modulus': np.abs(A),
        'a_lower': R * r / k,
        'b_modulus': np.abs(B),
        'b_upper': r / (2.0 * k),
        'difference_modulus': np.abs(A - B),
        'radius_residual': np.abs(np.abs((1.0 - R) * e + 1.0 / a) - R),
        'radius_floor': 0.5 * (1.0 + 1.0 / a),
        'constant': 2.0 * R / k,
        'preimage_value': preimage_value,
        'image_value': image_value,
        'halfplane_value': distance / r,
        's_before': s_before,
    }


def _proof_checks(a: float, q: Dict[str, Any], tol: float) -> Dict[str, Any]:
    scale = np.maximum(1.0, q['R'])
    return {
        'radius_equation': q['radius_residual'] <= tol * scale,
        'radius_floor': q['R'] >= q['radius_floor'] - tol * scale,
        'constant_bound': 1.0 + a >= q['constant'] - tol,
        'a_lower': q['a_modulus'] >= q['a_lower'] - tol,
        'b_upper': q['b_modulus'] <= q['b_upper'] + tol,
        'difference_lower': q['difference_modulus'] >= 0.5 * q['r'] - tol,
        'conformal_identity': np.abs(q['preimage_value'] - q['image_value']) <= tol * scale,
        'intermediate_bound': q['preimage_value'] <= q['constant'] * q['halfplane_value'] + tol,
        'preimage_bound': q['preimage_value'] <= (1.0 + a) * q['s_before'] + tol,
    }


def proof_terms(a: float, z1: PointLike, z2: PointLike, tol: float = PROOF_TERM_TOL) -> ProofTermReport:
    """
    Recompute the internal-tangency estimate for one pair

    With e^{i phi} the image contact, theta = arg f^{-1}(e^{i phi}), R the
    radius of the preimage circle and (psi, r) the closest approach of
    zeta1 + conj(zeta2), the quantities

        A = ((R - 1) (zeta1(theta) + conj zeta2(theta)) + zeta1(psi) + conj zeta2(psi)) / (2R - 1)
        B = zeta1(psi) conj zeta2(psi) / (2R - 1)

    satisfy |A| >= R r / (2R - 1), |B| <= r / (2 (2R - 1)) and so
    |A - B| >= r / 2. The hyperbolic value of the preimage disk must also
    match the half-plane value of the image pair.

    Raises:
        NotApplicableError: the image contact is not an internal tangency
    """
    m, z1, z2 = _prepare(a, z1, z2)
    w1, w2 = m(z1), m(z2)
    image = maximal_inscribed_ellipse(w1, w2)
    phi = image.contacts[0]
    if classify_tangency(m, phi) is not TangencyKind.INTERNAL:
        raise NotApplicableError(f"contact angle {phi} is not an internal tangency for a = {m.a}")

    theta = theta_from_phi(m, phi)
    R = circle_radius_R(m, theta)
    ellipse_data = proof_ellipse(z1, z2)
    image_value = abs(w1 - w2) / image.ellipse.distance_sum
    s_before, _ = s_unit_disk(z1, z2)
    quantities = _proof_quantities(m.a, z1, z2, theta, R, ellipse_data.psi, ellipse_data.r, image_value, s_before)

    report = ProofTermReport(phi=phi, theta=theta, psi=ellipse_data.psi,
                             **{name: float(value) for name, value in quantities.items()})
    checks = _proof_checks(m.a, quantities, tol)
    report.failed_checks = [name for name, ok in checks.items() if not ok]
    return report


@dataclass
class DistortionBatch:
    """Refined trials over arrays of pairs for one value of a, with a failure mask per check"""

    a: float
    s_before: np.ndarray
    s_after: np.ndarray
    ratio: np.ndarray
    bound_refined: np.ndarray
    phi: np.ndarray
    internal: np.ndarray
    external: np.ndarray
    failures: Dict[str, np.ndarray]
    proof_checked: np.ndarray
    proof_failed: np.ndarray

    @property
    def margin(self) -> np.ndarray:
        return 1.0 + self.a - self.ratio

    @property
    def margin_refined(self) -> np.ndarray:
        return self.bound_refined - self.ratio

    @property
    def failed(self) -> np.ndarray:
        failed = self.proof_failed.copy()
        for mask in self.failures.values():
            failed |= mask
        return failed

    def failed_checks(self, row: int) -> List[str]:
        names = [name for name, mask in self.failures.items() if mask[row]]
        if self.proof_failed[row]:
            names.append('proof_terms')
        return names


def refined_trials_batch(a: float, z1: np.ndarray, z2: np.ndarray, tol: float = VIOLATION_TOL,
                         before: Optional[Tuple[np.ndarray, ContactTable]] = None,
                         check_proof_terms: bool = True,
                         proof_tol: float = PROOF_TERM_TOL) -> DistortionBatch:
    """
    refined_trial and proof_terms over arrays of distinct pairs in the unit disk

    Points are not validated. `before` reuses s_unit_disk_batch(z1, z2)
    when the caller already has it. Proof terms are evaluated on the rows
    whose image contact is an internal tangency.
    """
    m = MoebiusMap(a)
    a = m.a
    z1 = np.atleast_1d(np.asarray(z1, dtype=complex))
    z2 = np.atleast_1d(np.asarray(z2, dtype=complex))
    s_before, table_before = before if before is not None else s_unit_disk_batch(z1, z2)

    w1 = (z1 + a) / (1.0 + a * z1)
    w2 = (z2 + a) / (1.0 + a * z2)
    s_after, table_after = s_unit_disk_batch(w1, w2)
    ratio = s_after / s_before
    phi = table_after.first_angle

    c = np.cos(table_after.angles)
    constants = np.where(c < a, 1.0, 1.0 + a * (c - a) / (1.0 - a * c))
    bound_refined = np.max(np.where(table_after.contacts, constants, -np.inf), axis=1)
    bound_upper = 1.0 + a

    gap = np.cos(phi) - a
    internal = (gap > TANGENCY_EPS) & (a > 0.0)
    external = (gap < -TANGENCY_EPS) & (a > 0.0)

    failures = {
        'upper_bound': ratio > bound_upper + tol,
        'lower_bound': ratio < 1.0 / bound_upper - tol,
        'refined_exceeds_upper': bound_refined > bound_upper + 1e-12,
        'refined_bound': ratio > bound_refined + tol,
        'external_contraction': (bound_refined == 1.0) & (ratio > 1.0 + tol),
    }

    proof_checked = internal & check_proof_terms
    proof_failed = np.zeros_like(proof_checked)
    rows = np.flatnonzero(proof_checked)
    if rows.size:
        contact = np.exp(1j * phi[rows])
        theta = np.mod(np.angle((contact - a) / (1.0 - a * contact)), TWO_PI)
        cos_theta = np.cos(theta)
        R = (1.0 + 2.0 * a * cos_theta + a * a) / (2.0 * a * (a + cos_theta))
        quantities = _proof_quantities(a, z1[rows], z2[rows], theta, R,
                                       table_before.first_angle[rows], table_before.first_value[rows],
                                       s_after[rows], s_before[rows])
        passed = np.ones(rows.size, dtype=bool)
        for ok in _proof_checks(a, quantities, proof_tol).values():
            passed &= ok
        proof_failed[rows] = ~passed

    return DistortionBatch(
        a=a, s_before=s_before, s_after=s_after, ratio=ratio, bound_refined=bound_refined,
        phi=phi, internal=internal, external=external, failures=failures,
        proof_checked=proof_checked, proof_failed=proof_failed,
    )


def _search_start(rng: np.random.Generator, index: int) -> np.ndarray:
    if index % 2 == 0:
        # conjugate-symmetric pair on the radius towards +1, image contact at +1
        x = 0.999 * 10.0 ** rng.uniform(-4.0, 0.0)
        y = x * 10.0 ** rng.uniform(-2.0, 0.0)
        return np.array([x, y, x, -y])
    radius = np.sqrt(rng.uniform(0.0, 1.0, size=2)) * 0.999
    angle = rng.uniform(0.0, 2.0 * math.pi, size=2)
    z = radius * np.exp(1j * angle)
    return np.array([z[0].real, z[0].imag, z[1].real, z[1].imag])


def sharpness_search(a: float, budget: int = SHARPNESS_BUDGET, seed: int = 0) -> SharpnessResult:
    """
    Multistart Nelder-Mead search for the largest distortion ratio

    The budget is spent in fixed chunks of SHARPNESS_CHUNK evaluations,
    one local search per chunk, with starts drawn in a fixed order from
    the seed; a larger budget only appends starts, so the best ratio is
    nondecreasing in the budget.
    """
    a = as_real(a, 'a')
    if not 0.0 < a < 1.0:
        raise InvalidInputError(f"Sharpness search needs 0 < a < 1, got {a}")
    if budget < SHARPNESS_MIN_BUDGET:
        raise InvalidInputError(f"Sharpness budget must be at least {SHARPNESS_MIN_BUDGET}, got {budget}")
    m = MoebiusMap(a)

    def negative_ratio(x):
        z1, z2 = complex(x[0], x[1]), complex(x[2], x[3])
        if abs(z1) >= _MAX_SEARCH_MODULUS or abs(z2) >= _MAX_SEARCH_MODULUS or z1 == z2:
            return 0.0
        s_before = s_unit_disk(z1, z2)[0]
        if s_before < DEGENERATE_S:
            return 0.0
        return -s_unit_disk(m(z1), m(z2))[0] / s_before

    rng = np.random.default_rng(seed)
    starts = max(1, budget // SHARPNESS_CHUNK)
    best = SharpnessResult(a=a, best_ratio=0.0, z1=0j, z2=0j, evaluations=0, starts=starts)
    for index in range(starts):
        x0 = _search_start(rng, index)
        res = minimize(negative_ratio, x0, method='Nelder-Mead',
                       options={'maxfev': SHARPNESS_CHUNK, 'xatol': 1e-14, 'fatol': 1e-15})
        best.evaluations += int(res.nfev)
        if -res.fun > best.best_ratio:
            best.best_ratio = float(-res.fun)
            best.z1 = complex(res.x[0], res.x[1])
            best.z2 = complex(res.x[2], res.x[3])
        best.trace.append((best.evaluations, best.best_ratio))
        logger.debug(f"start {index + 1}/{starts}: ratio {-res.fun:.12f}, best {best.best_ratio:.12f}")

    logger.info(f"Sharpness search a={a}: best ratio {best.best_ratio:.12f} (gap {best.gap:.3e})")
    return best
