"""
Randomized verification suites for the distortion bounds
"""

import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

# Add project root to Python path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from config.config import DEFAULT_SEED, DEGENERATE_S, MIN_LOG_GAP, THREADS, TRIAL_CHUNK, TWO_PI, VIOLATION_TOL
from src.distortion import (
    DistortionBatch, DistortionReport, ProofTermReport, proof_terms, refined_trial, refined_trials_batch
)
from src.errors import InvalidInputError
from src.geometry import MoebiusMap, TangencyKind
from src.logger import logger
from src.trimetric import ContactTable, s_unit_disk_batch


def resolve_threads(threads: Union[int, str]) -> int:
    """0 means one worker per CPU; strings come from TRIMETRIC_THREADS"""
    try:
        count = int(threads)
    except (TypeError, ValueError):
        raise InvalidInputError(f"Thread count must be an integer, got {threads!r}") from None
    if count < 0:
        raise InvalidInputError(f"Thread count must be non-negative, got {count}")
    return count or os.cpu_count() or 1


def sample_points(rng: np.random.Generator, n: int) -> np.ndarray:
    """Uniform angles, 1 - |z| log-uniform on [MIN_LOG_GAP, 1]"""
    gap = 10.0 ** rng.uniform(math.log10(MIN_LOG_GAP), 0.0, size=n)
    angle = rng.uniform(0.0, TWO_PI, size=n)
    return (1.0 - gap) * np.exp(1j * angle)


def sample_point(rng: np.random.Generator) -> complex:
    return complex(sample_points(rng, 1)[0])


@dataclass
class TrialOutcome:
    """Result of one trial, tagged with its position in the suite"""

    stratum: int
    index: int
    report: DistortionReport
    proof: Optional[ProofTermReport] = None
    resampled: int = 0

    def to_dict(self) -> Dict[str, Any]:
        data = {'stratum': self.stratum, 'trial': self.index, 'report': self.report.to_dict()}
        if self.proof is not None:
            data['proof_terms'] = self.proof.to_dict()
        return data


@dataclass
class TrialChunk:
    """Pairs of one block of trials after degenerate pairs were redrawn"""

    stratum: int
    start: int
    z1: np.ndarray
    z2: np.ndarray
    resampled: np.ndarray
    before: Tuple[np.ndarray, ContactTable]


@dataclass
class StratumSummary:
    """Aggregates over all trials that share one value of a"""

    a: float
    trials: int = 0
    max_ratio: float = -math.inf
    min_ratio: float = math.inf
    min_margin: float = math.inf
    min_margin_refined: float = math.inf
    max_external_ratio: float = -math.inf
    internal: int = 0
    external: int = 0
    line: int = 0
    proof_checked: int = 0
    proof_failures: int = 0
    resampled: int = 0
    violations: int = 0

    def add(self, outcome: TrialOutcome):
        report = outcome.report
        self.trials += 1
        self.max_ratio = max(self.max_ratio, report.ratio)
        self.min_ratio = min(self.min_ratio, report.ratio)
        self.min_margin = min(self.min_margin, report.margin)
        self.min_margin_refined = min(self.min_margin_refined, report.margin_refined)
        if report.tangency is TangencyKind.INTERNAL:
            self.internal += 1
        elif report.tangency is TangencyKind.EXTERNAL:
            self.external += 1
            self.max_external_ratio = max(self.max_external_ratio, report.ratio)
        else:
            self.line += 1
        if outcome.proof is not None:
            self.proof_checked += 1
            self.proof_failures += int(not outcome.proof.holds)
        self.resampled += outcome.resampled
        self.violations += int(not report.passed)

    def add_batch(self, batch: DistortionBatch, resampled: np.ndarray):
        """Same aggregates as add, for a whole block of trials"""
        count = batch.ratio.size
        internal = int(np.count_nonzero(batch.internal))
        external = int(np.count_nonzero(batch.external))
        self.trials += count
        self.max_ratio = max(self.max_ratio, float(np.max(batch.ratio)))
        self.min_ratio = min(self.min_ratio, float(np.min(batch.ratio)))
        self.min_margin = min(self.min_margin, float(np.min(batch.margin)))
        self.min_margin_refined = min(self.min_margin_refined, float(np.min(batch.margin_refined)))
        self.internal += internal
        self.external += external
        self.line += count - internal - external
        if external:
            self.max_external_ratio = max(self.max_external_ratio, float(np.max(batch.ratio[batch.external])))
        self.proof_checked += int(np.count_nonzero(batch.proof_checked))
        self.proof_failures += int(np.count_nonzero(batch.proof_failed))
        self.resampled += int(np.sum(resampled))
        self.violations += int(np.count_nonzero(batch.failed))

    def to_dict(self) -> Dict[str, Any]:
        data = dict(self.__dict__)
        if self.max_external_ratio == -math.inf:
            data['max_external_ratio'] = None
        return data


@dataclass
class SuiteResult:
    """Per-stratum summaries and every violating trial, in suite order"""

    strata: List[StratumSummary] = field(default_factory=list)
    violations: List[TrialOutcome] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    @property
    def trials(self) -> int:
        return sum(s.trials for s in self.strata)

    def summary(self) -> Dict[str, Any]:
        return {
            'passed': self.passed,
            'trials': self.trials,
            'violations': len(self.violations),
            'max_ratio': max(s.max_ratio for s in self.strata),
            'min_margin': min(s.min_margin for s in self.strata),
            'min_margin_refined': min(s.min_margin_refined for s in self.strata),
            'proof_checked': sum(s.proof_checked for s in self.strata),
            'proof_failures': sum(s.proof_failures for s in self.strata),
        }


class VerificationSuite:
    """
    Runs refined distortion trials, and proof terms on internal tangencies

    Trials are drawn and evaluated in blocks of TRIAL_CHUNK; block k of
    stratum s draws from default_rng([seed, s, k]), so results do not
    depend on the number of threads. Violating trials are re-run one by
    one to produce their full reports.
    """

    def __init__(self, a_values: Sequence[float], trials: int, seed: int = DEFAULT_SEED,
                 tolerance: float = VIOLATION_TOL, threads: Union[int, str] = THREADS,
                 check_proof_terms: bool = True):
        if trials < 1:
            raise InvalidInputError(f"Number of trials must be at least 1, got {trials}")
        if not tolerance > 0.0:
            raise InvalidInputError(f"Tolerance must be positive, got {tolerance}")
        if not a_values:
            raise InvalidInputError("At least one value of a is required")
        self.a_values = [MoebiusMap(a).a for a in a_values]
        self.trials = trials
        self.seed = seed
        self.tolerance = tolerance
        self.threads = resolve_threads(threads)
        self.check_proof_terms = check_proof_terms

        # Throughput tracking
        self.trial_count = 0
        self.start_time = None
        self.rate = 0.0

    @property
    def chunk_count(self) -> int:
        return -(-self.trials // TRIAL_CHUNK)

    def draw_chunk(self, stratum: int, chunk: int) -> TrialChunk:
        """Pairs of one block; pairs with s_U below DEGENERATE_S are redrawn from the same stream"""
        start = chunk * TRIAL_CHUNK
        size = min(TRIAL_CHUNK, self.trials - start)
        rng = np.random.default_rng([self.seed, stratum, chunk])
        z1, z2 = sample_points(rng, size), sample_points(rng, size)
        resampled = np.zeros(size, dtype=int)
        s_before, table = s_unit_disk_batch(z1, z2)

        rows = np.flatnonzero(s_before < DEGENERATE_S)
        while rows.size:
            z1[rows], z2[rows] = sample_points(rng, rows.size), sample_points(rng, rows.size)
            resampled[rows] += 1
            s_new, table_new = s_unit_disk_batch(z1[rows], z2[rows])
            s_before[rows] = s_new
            table.angles[rows] = table_new.angles
            table.values[rows] = table_new.values
            table.contacts[rows] = table_new.contacts
            rows = rows[s_new < DEGENERATE_S]

        return TrialChunk(stratum, start, z1, z2, resampled, (s_before, table))

    def evaluate_chunk(self, stratum: int, chunk: int) -> Tuple[TrialChunk, DistortionBatch]:
        points = self.draw_chunk(stratum, chunk)
        batch = refined_trials_batch(self.a_values[stratum], points.z1, points.z2, self.tolerance,
                                     before=points.before, check_proof_terms=self.check_proof_terms)
        return points, batch

    def run_trial(self, stratum: int, index: int) -> TrialOutcome:
        """One trial with its full report; its pair depends only on (seed, stratum, index)"""
        if not 0 <= index < self.trials:
            raise InvalidInputError(f"Trial index must lie in [0, {self.trials}), got {index}")
        chunk, row = divmod(index, TRIAL_CHUNK)
        points = self.draw_chunk(stratum, chunk)
        a = self.a_values[stratum]
        z1, z2 = complex(points.z1[row]), complex(points.z2[row])
        report = refined_trial(a, z1, z2, self.tolerance)

        proof = None
        if self.check_proof_terms and report.tangency is TangencyKind.INTERNAL:
            proof = proof_terms(a, z1, z2)
            if not proof.holds:
                report.violations.append('proof_terms')
        return TrialOutcome(stratum, index, report, proof, int(points.resampled[row]))

    def _chunks(self, stratum: int) -> Iterator[Tuple[TrialChunk, DistortionBatch]]:
        chunks = range(self.chunk_count)
        if self.threads == 1:
            for chunk in chunks:
                yield self.evaluate_chunk(stratum, chunk)
            return
        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            try:
                # map keeps submission order, so aggregation is independent of scheduling
                yield from pool.map(lambda chunk: self.evaluate_chunk(stratum, chunk), chunks)
            except BaseException:
                pool.shutdown(wait=False, cancel_futures=True)
                raise

    def _violation(self, points: TrialChunk, batch: DistortionBatch, row: int) -> TrialOutcome:
        outcome = self.run_trial(points.stratum, points.start + row)
        for name in batch.failed_checks(row):
            if name not in outcome.report.violations:
                outcome.report.violations.append(name)
        return outcome

    def run(self) -> SuiteResult:
        """Run every stratum and aggregate in trial order"""
        logger.info(f"Running {self.trials} trials for {len(self.a_values)} value(s) of a "
                    f"(seed {self.seed}, {self.threads} thread(s))")
        self.start_time = time.time()
        self.trial_count = 0
        result = SuiteResult()

        for stratum, a in enumerate(self.a_values):
            summary = StratumSummary(a=a)
            for points, batch in self._chunks(stratum):
                summary.add_batch(batch, points.resampled)
                for row in np.flatnonzero(batch.failed):
                    outcome = self._violation(points, batch, int(row))
                    logger.warning(f"Violation at a={a}, trial {outcome.index}: {outcome.report.violations}")
                    result.violations.append(outcome)
            result.strata.append(summary)

            self.trial_count += summary.trials
            elapsed_time = time.time() - self.start_time
            if elapsed_time > 0:
                self.rate = self.trial_count / elapsed_time
            logger.info(f"a={a}: max ratio {summary.max_ratio:.12f}, "
                        f"{summary.violations} violation(s), {self.rate:.0f} trials/s")

        return result
