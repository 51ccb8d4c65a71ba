import math
from fractions import Fraction

import pytest

from phylorank.errors import DomainError
from phylorank.exactcount import CountTable, rank_eq_limit
from phylorank.stats import (
    chi_square_critical,
    chi_square_uniformity,
    convergence_table,
    estimate_rank_distribution,
)


@pytest.fixture(scope="module")
def table():
    return CountTable(2, 40)


# ---------------------------------------------------------------- estimates


def test_estimate_single_leaf():
    report = estimate_rank_distribution(2, 1, samples=1, base_seed=0, max_rank=2)
    assert report.rows[0].frequency == 1
    assert report.rows[1].count == 0
    assert report.total_vertices == 1


def test_estimate_reproducible(table):
    a = estimate_rank_distribution(2, 9, 50, base_seed=3, max_rank=2, table=table)
    b = estimate_rank_distribution(2, 9, 50, base_seed=3, max_rank=2, table=table)
    assert [r.count for r in a.rows] == [r.count for r in b.rows]


def test_estimate_counts_add_up(table):
    report = estimate_rank_distribution(2, 17, 40, base_seed=5, max_rank=3, table=table)
    assert report.total_vertices == 40 * (2 * 17 - 1)
    assert sum(r.count for r in report.rows) + report.tail_count == report.total_vertices
    assert sum(r.frequency for r in report.rows) + Fraction(
        report.tail_count, report.total_vertices
    ) == 1


def test_estimate_matches_limits_roughly(table):
    report = estimate_rank_distribution(2, 33, 400, base_seed=12, max_rank=1, table=table)
    assert abs(float(report.rows[0].frequency) - 0.5) < 0.05
    assert abs(float(report.rows[1].frequency) - 0.375) < 0.05


def test_estimate_consistency_under_doubling(table):
    # doubling the sample count moves each frequency by less than the two
    # runs' combined 3-sigma binomial bound (computed over trees)
    n, max_rank = 17, 2
    small = estimate_rank_distribution(2, n, 100, base_seed=21, max_rank=max_rank, table=table)
    large = estimate_rank_distribution(2, n, 200, base_seed=21, max_rank=max_rank, table=table)
    for r_small, r_large in zip(small.rows, large.rows):
        p = float(rank_eq_limit(2, r_small.rank))
        bound = 3 * math.sqrt(p * (1 - p) / 100) + 3 * math.sqrt(p * (1 - p) / 200)
        assert abs(float(r_small.frequency) - float(r_large.frequency)) <= bound


def test_estimate_domain_errors(table):
    with pytest.raises(DomainError):
        estimate_rank_distribution(2, 9, 0, base_seed=1, max_rank=2, table=table)
    with pytest.raises(DomainError):
        estimate_rank_distribution(3, 4, 5, base_seed=1, max_rank=2)


def test_estimate_serialization(table):
    report = estimate_rank_distribution(2, 9, 20, base_seed=3, max_rank=1, table=table)
    payload = report.to_json_dict()
    assert payload["rows"][0]["limit"] == "1/2"
    tsv = report.to_tsv()
    assert tsv.splitlines()[0].startswith("rank\tcount")
    assert len(tsv.splitlines()) == 3


# --------------------------------------------------------------- chi-square


def test_chi_square_critical_values():
    # frozen from the standard quantile routine before the build
    assert chi_square_critical(0.001, 2) == pytest.approx(13.8155, abs=2e-4)
    assert chi_square_critical(0.001, 14) == pytest.approx(36.1233, abs=2e-4)
    assert chi_square_critical(0.001, 104) == pytest.approx(154.3141, abs=2e-4)


def test_chi_square_single_support_trivial_pass(table):
    report = chi_square_uniformity(2, 2, samples=10, base_seed=1, table=table)
    assert report.support == 1 and report.df == 0
    assert report.passed and report.statistic == 0.0


def test_chi_square_n3(table):
    report = chi_square_uniformity(2, 3, samples=3000, base_seed=1, table=table)
    assert report.df == 2
    assert report.critical == pytest.approx(13.8155, abs=2e-4)
    assert report.passed


def test_chi_square_exact_statistic(table):
    report = chi_square_uniformity(2, 4, samples=1500, base_seed=2, table=table)
    assert report.df == 14
    assert report.statistic == pytest.approx(float(report.statistic_exact))
    # statistic is a sum of (obs-expected)^2/expected with expected = 100
    assert report.statistic_exact >= 0


def test_chi_square_statistic_flags_degenerate_source():
    # the same Pearson formula applied to a source that always emits one of
    # the 15 trees: statistic = 1500*14 + 14*100, far above the critical value
    expected = Fraction(1500, 15)
    counts = [1500] + [0] * 14
    stat = sum((obs - expected) ** 2 / expected for obs in counts)
    assert float(stat) > chi_square_critical(0.001, 14)


def test_chi_square_support_cap(table):
    with pytest.raises(DomainError):
        chi_square_uniformity(2, 9, samples=10, base_seed=1, support_cap=100, table=table)


def test_chi_square_inadmissible():
    with pytest.raises(DomainError):
        chi_square_uniformity(3, 4, samples=10, base_seed=1)


def test_chi_square_serialization(table):
    report = chi_square_uniformity(2, 3, samples=300, base_seed=4, table=table)
    payload = report.to_json_dict()
    assert payload["df"] == 2 and isinstance(payload["passed"], bool)
    assert report.to_tsv().count("\n") == 2


# -------------------------------------------------------------- convergence


def test_convergence_first_ratios(table):
    report = convergence_table(2, 1, [3, 4], table=table)
    assert report.limit == Fraction(1, 2)
    assert report.rows[0].ratio == Fraction(6, 15)
    assert report.rows[1].ratio == Fraction(45, 105)


def test_convergence_rank_zero_is_exactly_one(table):
    report = convergence_table(2, 0, [1, 5, 9, 33], table=table)
    assert all(row.ratio == 1 for row in report.rows)
    assert all(row.gap == 0 for row in report.rows)


def test_convergence_gap_shrinks(table):
    report = convergence_table(2, 1, [3, 9, 17, 33], table=table)
    gaps = [row.gap for row in report.rows]
    assert all(a > b for a, b in zip(gaps, gaps[1:]))


def test_convergence_ternary(table_k3):
    report = convergence_table(3, 1, [3, 21, 45], table=table_k3)
    assert report.limit == Fraction(1, 3)
    gaps = [row.gap for row in report.rows]
    assert all(a > b for a, b in zip(gaps, gaps[1:]))


def test_convergence_ternary_rank_two(table_k3):
    # k=3, i=2 needs at least 9 leaves; the gap to 1/81 shrinks along the grid
    report = convergence_table(3, 2, [9, 21, 45, 63], table=table_k3)
    assert report.limit == Fraction(1, 81)
    gaps = [row.gap for row in report.rows]
    assert all(a > b for a, b in zip(gaps, gaps[1:]))


def test_convergence_negligibility_columns(table):
    report = convergence_table(2, 1, [3, 9], table=table, negligibility_powers=(2, 3))
    assert report.rows[0].negligibility[2] == Fraction(2, 5)
    assert set(report.rows[1].negligibility) == {2, 3}


def test_convergence_rejects_inadmissible_grid():
    with pytest.raises(DomainError):
        convergence_table(3, 1, [3, 4])


def test_convergence_requires_nonempty_grid(table):
    with pytest.raises(DomainError):
        convergence_table(2, 1, [], table=table)


def test_convergence_serialization(table):
    report = convergence_table(2, 1, [3, 9], table=table, negligibility_powers=(2,))
    payload = report.to_json_dict()
    assert payload["limit"] == "1/2"
    assert payload["rows"][0]["negligibility"]["2"] == "2/5"
    tsv = report.to_tsv()
    assert "neg_T^2" in tsv.splitlines()[0]
