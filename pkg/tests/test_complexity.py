"""Tests for the operation counter and the complexity model."""

import pytest

from complexity.counter import FlopCounter, FlopSnapshot
from complexity.model import (
    Phase, PhaseCounts, Workload, chained_matvec_counts, crossover_report, divisors, kron_matvec_counts,
    measured_counts, theoretical_counts,
)
from estimators.estimator import EstimatorKind
from utils.errors import InvalidInputError


# ============================================================================
# COUNTER
# ============================================================================


class TestFlopCounter:
    def test_matmul(self):
        counter = FlopCounter()
        counter.matmul(2, 3, 4)
        assert counter.snapshot() == FlopSnapshot(24, 16)

    def test_fft(self):
        counter = FlopCounter()
        counter.fft(8, 2)
        assert (counter.multiplies, counter.additions) == (24, 48)

    def test_length_one_fft_is_free(self):
        counter = FlopCounter()
        counter.fft(1)
        assert counter.snapshot() == FlopSnapshot(0, 0)

    def test_triangular_solve(self):
        counter = FlopCounter()
        counter.triangular_solve(3)
        assert counter.snapshot() == FlopSnapshot(6, 3)

    def test_reset(self):
        counter = FlopCounter()
        counter.scale(10)
        counter.reset()
        assert counter.snapshot() == FlopSnapshot(0, 0)


# ============================================================================
# THEORETICAL COUNTS
# ============================================================================


class TestTheoreticalCounts:
    @pytest.mark.parametrize("n_h", [8, 16, 32, 64, 128, 256, 512])
    def test_kba_build_cheaper_in_the_middle(self, n_h):
        n_v = 4096 // n_h
        kba = theoretical_counts("kba", n_h, n_v).build_a
        mmse = theoretical_counts("mmse", n_h, n_v).build_a
        assert kba < mmse

    @pytest.mark.parametrize("n_h", [1, 2, 4, 1024, 2048, 4096])
    def test_mmse_build_cheaper_at_the_edges(self, n_h):
        n_v = 4096 // n_h
        assert theoretical_counts("mmse", n_h, n_v).build_a < theoretical_counts("kba", n_h, n_v).build_a

    def test_dft_build_orders_of_magnitude_below_kba(self):
        dft = theoretical_counts("dft", 4096, 1).build_a
        kba = theoretical_counts("kba", 4096, 1).build_a
        assert kba / dft > 1e3

    def test_apply_orders(self):
        counts = {kind: theoretical_counts(kind, 16, 16).apply_a for kind in ("mmse", "kba", "kba_dft", "ls")}
        assert counts["ls"] < counts["kba_dft"] < counts["kba"] < counts["mmse"]

    def test_phases_without_statistics(self):
        counts = theoretical_counts("ls", 4, 4)
        assert counts.build_q_hat is None and counts.build_a is None
        assert counts.count("apply_a") == 16

    def test_sample_covariance_cost(self):
        assert theoretical_counts(EstimatorKind.NKP, 4, 4, m_obs=10).count(Phase.BUILD_Q_HAT) == 10 * 16 ** 2

    def test_nonpositive_sizes_rejected(self):
        with pytest.raises(InvalidInputError, match="positive"):
            theoretical_counts("kba", 0, 4)


# ============================================================================
# MEASURED COUNTS
# ============================================================================


class TestMeasuredCounts:
    @pytest.mark.parametrize("n", [16, 64, 256])
    def test_kba_apply_below_dense_for_every_shape(self, n):
        for n_h in divisors(n):
            kba = measured_counts(Workload(EstimatorKind.KBA, n_h, n // n_h))
            mmse = measured_counts(Workload(EstimatorKind.MMSE, n_h, n // n_h))
            assert kba.multiplies < mmse.multiplies, (n_h, kba, mmse)

    def test_mmse_apply(self):
        assert measured_counts(Workload(EstimatorKind.MMSE, 4, 4)).multiplies == 2 * 16 ** 2 + 16

    def test_sample_covariance_matches_model(self):
        workload = Workload(EstimatorKind.MMSE, 4, 4, Phase.BUILD_Q_HAT, m_observations=10)
        assert measured_counts(workload).multiplies == theoretical_counts("mmse", 4, 4, 10).build_q_hat

    def test_structured_averaging_adds_only_additions(self):
        mmse = measured_counts(Workload(EstimatorKind.MMSE, 4, 4, Phase.BUILD_Q_HAT, m_observations=10))
        kba = measured_counts(Workload(EstimatorKind.KBA, 4, 4, Phase.BUILD_Q_HAT, m_observations=10))
        assert kba.multiplies == mmse.multiplies
        assert kba.additions > mmse.additions

    def test_build_phase_is_not_measured(self):
        with pytest.raises(InvalidInputError, match="modeled"):
            measured_counts(Workload(EstimatorKind.KBA, 4, 4, Phase.BUILD_A))

    def test_chained_matvec(self):
        chained, product_first = chained_matvec_counts(8)
        assert chained.multiplies == 2 * 8 ** 2
        assert product_first.multiplies == 8 ** 3 + 8 ** 2

    def test_kron_matvec(self):
        fast, dense = kron_matvec_counts(3, 5)
        assert fast.multiplies == 3 * 5 * (3 + 5)
        assert dense.multiplies == 15 ** 2


# ============================================================================
# CROSSOVER REPORT
# ============================================================================


class TestCrossoverReport:
    def test_rows_for_small_array(self):
        rows = crossover_report(64)
        shapes = {(row["n_h"], row["n_v"]) for row in rows}
        assert shapes == {(2 ** k, 64 // 2 ** k) for k in range(7)}
        assert len(rows) == (7 * 4 + 1) * len(Phase)
        for row in rows:
            assert row["modeled"] == (row["phase"] != "apply_a")
        dft = [row for row in rows if row["scheme"] == "dft"]
        assert {row["n_v"] for row in dft} == {1}

    def test_large_array_is_modeled_only(self):
        rows = crossover_report(4096, n_h_grid=[64])
        assert all(row["modeled"] and row["measured_multiplies"] == "" for row in rows)

    def test_measured_kba_below_mmse(self):
        rows = crossover_report(256, n_h_grid=[16])
        measured = {row["scheme"]: row["measured_multiplies"] for row in rows if row["phase"] == "apply_a"}
        assert measured["kba"] < measured["mmse"]

    def test_non_divisor_rejected(self):
        with pytest.raises(InvalidInputError, match="divide"):
            crossover_report(64, n_h_grid=[3])

    def test_phase_counts_lookup(self):
        counts = PhaseCounts(EstimatorKind.DFT, 1.0, 2.0, 3.0)
        assert [counts.count(phase) for phase in Phase] == [1.0, 2.0, 3.0]
