"""
Unit tests for the randomized verification suites
"""

import math
import threading
import time

import numpy as np
import pytest

from config.config import A_STRATA, MIN_LOG_GAP, TRIAL_CHUNK
import src.verifier
from src.errors import InvalidInputError
from src.geometry import TangencyKind
from src.verifier import (
    StratumSummary, SuiteResult, VerificationSuite, resolve_threads, sample_point, sample_points
)


class TestSampling:
    """Test point sampling"""

    def test_points_inside_disk(self):
        """Test 1 - |z| within [1e-3, 1]"""
        rng = np.random.default_rng(0)
        moduli = np.array([abs(sample_point(rng)) for _ in range(2000)])
        assert np.all(moduli <= 0.999 + 1e-12)
        assert np.all(moduli >= 0.0)
        # log-uniform gaps put many points near the boundary
        assert np.mean(moduli > 0.9) > 0.5

    def test_sample_points(self):
        """Test the vectorized sampler against its range"""
        points = sample_points(np.random.default_rng(1), 5000)
        assert points.shape == (5000,)
        gaps = 1.0 - np.abs(points)
        assert np.all(gaps >= MIN_LOG_GAP - 1e-12)
        assert np.all(gaps <= 1.0 + 1e-12)
        # log-uniform: about a third of the gaps below 1e-2
        assert 0.25 < np.mean(gaps < 1e-2) < 0.42

    def test_resolve_threads(self):
        """Test that 0 means one worker per CPU"""
        assert resolve_threads(3) == 3
        assert resolve_threads(0) >= 1
        with pytest.raises(InvalidInputError):
            resolve_threads(-1)

    def test_resolve_threads_from_strings(self):
        """Test values as they arrive from TRIMETRIC_THREADS"""
        assert resolve_threads("3") == 3
        assert resolve_threads(" 2 ") == 2
        assert resolve_threads("0") >= 1
        for bad in ("abc", "1.5", "", "-1", None):
            with pytest.raises(InvalidInputError):
                resolve_threads(bad)


class TestVerificationSuite:
    """Test VerificationSuite"""

    def test_initialization(self):
        """Test argument validation"""
        suite = VerificationSuite([0.5], trials=10, seed=3, threads=1)
        assert suite.a_values == [0.5]
        assert suite.trials == 10
        assert suite.trial_count == 0
        with pytest.raises(InvalidInputError):
            VerificationSuite([0.5], trials=0)
        with pytest.raises(InvalidInputError):
            VerificationSuite([0.5], trials=10, tolerance=0.0)
        with pytest.raises(InvalidInputError):
            VerificationSuite([1.0], trials=10)
        with pytest.raises(InvalidInputError):
            VerificationSuite([], trials=10)

    def test_trial_is_reproducible(self):
        """Test that a trial depends only on (seed, stratum, index)"""
        suite = VerificationSuite([0.2, 0.5], trials=5, seed=11, threads=1)
        first = suite.run_trial(1, 3)
        second = suite.run_trial(1, 3)
        assert first.report.z1 == second.report.z1
        assert first.report.ratio == second.report.ratio
        assert first.report.a == 0.5
        other = suite.run_trial(0, 3)
        assert other.report.z1 != first.report.z1

    def test_internal_trials_check_proof_terms(self):
        """Test that internal tangencies carry proof terms"""
        suite = VerificationSuite([0.5], trials=40, seed=2, threads=1)
        for index in range(40):
            outcome = suite.run_trial(0, index)
            if outcome.report.tangency is TangencyKind.INTERNAL:
                assert outcome.proof is not None
                assert outcome.proof.holds
            else:
                assert outcome.proof is None

    def test_run_passes(self):
        """Test a short suite over two strata"""
        result = VerificationSuite([0.3, 0.8], trials=200, seed=7, threads=1).run()
        assert isinstance(result, SuiteResult)
        assert result.passed
        assert result.trials == 400
        assert [s.a for s in result.strata] == [0.3, 0.8]
        for s in result.strata:
            assert s.max_ratio <= 1 + s.a + 1e-9
            assert s.min_ratio >= 1 / (1 + s.a) - 1e-9
            assert s.internal + s.external + s.line == s.trials
            assert s.proof_checked == s.internal
            assert s.proof_failures == 0
        summary = result.summary()
        assert summary['violations'] == 0
        assert summary['max_ratio'] == max(s.max_ratio for s in result.strata)

    def test_deterministic_across_threads(self):
        """Test that thread count does not change the results"""
        trials = 2 * TRIAL_CHUNK + 50
        serial = VerificationSuite([0.2, 0.5], trials=trials, seed=7, threads=1).run()
        parallel = VerificationSuite([0.2, 0.5], trials=trials, seed=7, threads=4).run()
        assert [s.to_dict() for s in serial.strata] == [s.to_dict() for s in parallel.strata]
        assert serial.summary() == parallel.summary()

    def test_throughput_tracking(self):
        """Test the trial counter after a run"""
        suite = VerificationSuite([0.5], trials=20, threads=1)
        suite.run()
        assert suite.trial_count == 20
        assert suite.rate >= 0.0

    def test_trial_index_range(self):
        """Test that indices outside the suite are refused"""
        suite = VerificationSuite([0.5], trials=5, threads=1)
        for index in (-1, 5):
            with pytest.raises(InvalidInputError):
                suite.run_trial(0, index)

    def test_trial_in_second_chunk(self):
        """Test that run_trial reads the pair from its block"""
        suite = VerificationSuite([0.5], trials=TRIAL_CHUNK + 5, seed=4, threads=1)
        points = suite.draw_chunk(0, 1)
        assert points.start == TRIAL_CHUNK
        assert points.z1.size == 5
        outcome = suite.run_trial(0, TRIAL_CHUNK + 2)
        assert outcome.index == TRIAL_CHUNK + 2
        assert outcome.report.z1 == complex(points.z1[2])
        assert outcome.report.z2 == complex(points.z2[2])

    def test_batch_aggregates_match_single_trials(self):
        """Test run() against add() over every trial"""
        suite = VerificationSuite([0.6], trials=60, seed=5, threads=1)
        summary = suite.run().strata[0]
        expected = StratumSummary(a=0.6)
        for index in range(60):
            expected.add(suite.run_trial(0, index))
        assert summary.trials == expected.trials
        assert summary.internal == expected.internal
        assert summary.external == expected.external
        assert summary.line == expected.line
        assert summary.proof_checked == expected.proof_checked
        assert summary.resampled == expected.resampled
        assert summary.violations == expected.violations == 0
        assert summary.max_ratio == pytest.approx(expected.max_ratio, abs=1e-12)
        assert summary.min_ratio == pytest.approx(expected.min_ratio, abs=1e-12)
        assert summary.min_margin_refined == pytest.approx(expected.min_margin_refined, abs=1e-12)

    def test_violations_are_reported(self, monkeypatch):
        """Test that a failing row becomes a full outcome with the batch's check names"""
        evaluate = src.verifier.refined_trials_batch

        def failing_batch(*args, **kwargs):
            batch = evaluate(*args, **kwargs)
            batch.failures['refined_bound'][3] = True
            return batch

        monkeypatch.setattr(src.verifier, 'refined_trials_batch', failing_batch)
        result = VerificationSuite([0.5], trials=10, seed=6, threads=1).run()
        assert not result.passed
        assert result.strata[0].violations == 1
        assert [v.index for v in result.violations] == [3]
        assert 'refined_bound' in result.violations[0].report.violations
        assert result.violations[0].to_dict()['trial'] == 3

    def test_failed_chunk_cancels_pending_chunks(self, monkeypatch):
        """Test that an error stops the pool instead of running every queued block"""
        suite = VerificationSuite([0.5], trials=20 * TRIAL_CHUNK, threads=2)
        started = []
        release = threading.Event()

        def evaluate_chunk(stratum, chunk):
            started.append(chunk)
            if chunk == 0:
                raise RuntimeError("chunk failed")
            release.wait(0.5)
            raise RuntimeError("chunk not consumed")

        monkeypatch.setattr(suite, 'evaluate_chunk', evaluate_chunk)
        with pytest.raises(RuntimeError, match="chunk failed"):
            suite.run()
        assert len(started) < suite.chunk_count

    @pytest.mark.slow
    def test_stratified_suite(self):
        """Test every a-stratum with 10^4 trials each"""
        result = VerificationSuite(A_STRATA, trials=10000, seed=7).run()
        assert result.passed
        assert result.summary()['proof_failures'] == 0

    @pytest.mark.slow
    def test_large_single_stratum(self):
        """Test 10^5 trials at a = 0.5"""
        result = VerificationSuite([0.5], trials=100000, seed=7).run()
        assert result.passed
        assert result.summary()['max_ratio'] <= 1.5 + 1e-9

    @pytest.mark.slow
    def test_full_suite_runtime(self):
        """Test 10^5 trials in each of the 19 strata within a minute"""
        start = time.perf_counter()
        result = VerificationSuite(A_STRATA, trials=100000, seed=7).run()
        elapsed = time.perf_counter() - start
        assert result.trials == 100000 * len(A_STRATA)
        assert result.passed
        assert result.summary()['proof_failures'] == 0
        assert result.summary()['proof_checked'] > 0
        assert elapsed <= 60.0


class TestStratumSummary:
    """Test aggregation"""

    def test_empty_external_ratio_serializes_as_none(self):
        """Test that an unused maximum is not emitted as -inf"""
        summary = StratumSummary(a=0.5)
        assert summary.to_dict()['max_external_ratio'] is None
        assert summary.to_dict()['trials'] == 0

    def test_add(self):
        """Test that outcomes update the aggregates"""
        suite = VerificationSuite([0.5], trials=3, seed=1, threads=1)
        summary = StratumSummary(a=0.5)
        outcomes = [suite.run_trial(0, i) for i in range(3)]
        for outcome in outcomes:
            summary.add(outcome)
        assert summary.trials == 3
        assert summary.max_ratio == max(o.report.ratio for o in outcomes)
        assert summary.min_margin == min(o.report.margin for o in outcomes)
        assert not math.isinf(summary.min_ratio)
