from collections import Counter

import pytest

from phylorank.errors import ConsistencyError, DomainError, TableCoverageError
from phylorank.exactcount import CountTable
from phylorank.sampler import SamplerState, sample_batch, sample_uniform
from phylorank.treecore import to_newick, validate

FIGURE_ONE = {"((1,2),3);", "((1,3),2);", "((2,3),1);"}


@pytest.fixture(scope="module")
def table():
    return CountTable(2, 40)


def test_single_leaf(table):
    state = SamplerState(table, seed=5)
    tree = sample_uniform(2, 1, state)
    assert to_newick(tree) == "1;"


def test_n3_support(table):
    state = SamplerState(table, seed=5)
    for _ in range(30):
        assert to_newick(sample_uniform(2, 3, state)) in FIGURE_ONE


def test_state_counter_advances_and_determines(table):
    s1 = SamplerState(table, seed=123)
    first = [to_newick(sample_uniform(2, 9, s1)) for _ in range(5)]
    assert s1.counter == 5
    s2 = SamplerState(table, seed=123)
    again = [to_newick(sample_uniform(2, 9, s2)) for _ in range(5)]
    assert first == again
    # different counters generally give different trees at this size
    assert len(set(first)) > 1


def test_state_counter_offset(table):
    s1 = SamplerState(table, seed=123, counter=3)
    s2 = SamplerState(table, seed=123)
    for _ in range(3):
        sample_uniform(2, 9, s2)
    assert to_newick(sample_uniform(2, 9, s1)) == to_newick(sample_uniform(2, 9, s2))


def test_batch_equals_state_sequence(table):
    batch = [to_newick(t) for t in sample_batch(2, 9, 8, base_seed=4, table=table)]
    state = SamplerState(table, seed=4)
    seq = [to_newick(sample_uniform(2, 9, state)) for _ in range(8)]
    assert batch == seq


def test_batch_empty(table):
    assert list(sample_batch(2, 5, 0, base_seed=1, table=table)) == []


def test_batch_worker_invariance(table):
    one = [to_newick(t) for t in sample_batch(2, 17, 60, base_seed=99, workers=1, table=table)]
    eight = [to_newick(t) for t in sample_batch(2, 17, 60, base_seed=99, workers=8, table=table)]
    assert one == eight  # even the order matches, not just the multiset


def test_batch_builds_table_when_missing():
    trees = list(sample_batch(3, 7, 4, base_seed=2))
    assert len(trees) == 4
    for t in trees:
        assert validate(t) is None


def test_samples_are_valid_trees(table):
    for t in sample_batch(2, 33, 25, base_seed=0, table=table):
        assert validate(t) is None
        assert sorted(t.leaf_labels()) == list(range(1, 34))
        assert t.n_vertices == 2 * 33 - 1


def test_samples_are_valid_ternary():
    table3 = CountTable(3, 15)
    for t in sample_batch(3, 15, 25, base_seed=0, table=table3):
        assert validate(t) is None
        assert t.n_vertices == 3 * 7 + 1


def test_every_support_tree_reachable(table):
    # 15 trees at n=4; 600 draws miss one with prob ~ (14/15)^600 ~ 1e-18
    seen = Counter(to_newick(t) for t in sample_batch(2, 4, 600, base_seed=13, table=table))
    assert len(seen) == 15
    assert min(seen.values()) > 10


def test_inadmissible_rejected(table):
    state = SamplerState(CountTable(3, 8), seed=1)
    with pytest.raises(DomainError):
        sample_uniform(3, 4, state)
    with pytest.raises(DomainError):
        list(sample_batch(3, 4, 2, base_seed=1))


def test_table_too_small(table):
    with pytest.raises(TableCoverageError):
        list(sample_batch(2, 99, 1, base_seed=1, table=table))


def test_k_mismatch(table):
    state = SamplerState(table, seed=1)
    with pytest.raises(DomainError):
        sample_uniform(3, 7, state)


def test_bad_arguments(table):
    with pytest.raises(DomainError):
        list(sample_batch(2, 5, -1, base_seed=1, table=table))
    with pytest.raises(DomainError):
        list(sample_batch(2, 5, 5, base_seed=1, workers=0, table=table))


def test_composition_total_tripwire():
    # corrupting the table's forest weights must be caught before sampling
    bad = CountTable(2, 12)
    bad._g[2][6] += 1
    with pytest.raises(ConsistencyError):
        list(sample_batch(2, 6, 1, base_seed=1, table=bad))
