import numpy as np
import pytest
from scipy.stats import chisquare

from grouptest import InvalidParameterError
from grouptest.designs import BERNOULLI, BLOCK, CONSTANT, DESIGN_KINDS, NEAR_CONSTANT
from grouptest.designs.design_config import DESIGN_PARAM_DICT, read_design_param_dict
from grouptest.designs.design_dict import make_design
from grouptest.designs.design_io import read_design, write_design
from grouptest.designs.test_design import (
    gen_bernoulli,
    gen_block_doubly_regular,
    gen_constant_column,
    gen_near_constant_column,
)


def partition_of(design, block=0):
    start, stop = design.block_boundaries[block]
    return tuple(sorted(tuple(design.items_of_test(t)) for t in range(start, stop)))


def test_single_test_block():
    design = gen_block_doubly_regular(n=4, s=4, r=1, seed=3)
    assert design.num_tests == 1
    np.testing.assert_array_equal(design.items_of_test(0), [0, 1, 2, 3])


def test_block_with_remainder():
    design = gen_block_doubly_regular(n=5, s=2, r=2, seed=11)
    assert design.num_tests == 6
    assert design.block_boundaries == ((0, 3), (3, 6))
    np.testing.assert_array_equal(design.row_weights(), [2, 2, 1, 2, 2, 1])
    np.testing.assert_array_equal(design.column_weights(), [2] * 5)


def test_block_item_once_per_block(block_design):
    assert block_design.is_consistent()
    np.testing.assert_array_equal(block_design.column_weights(), np.full(60, 3))
    np.testing.assert_array_equal(block_design.row_weights(), np.full(30, 6))
    for start, stop in block_design.block_boundaries:
        items = np.concatenate([block_design.items_of_test(t) for t in range(start, stop)])
        np.testing.assert_array_equal(np.sort(items), np.arange(60))


@pytest.mark.slow
@pytest.mark.parametrize("n, num_partitions", [(4, 3), (6, 15)])
def test_block_partitions_uniform(n, num_partitions):
    counts = {}
    for seed in range(100000):
        key = partition_of(gen_block_doubly_regular(n=n, s=2, r=1, seed=seed))
        counts[key] = counts.get(key, 0) + 1
    assert len(counts) == num_partitions
    assert chisquare(list(counts.values())).pvalue > 0.001


@pytest.mark.slow
def test_pair_partition_frequencies():
    trials = 300000
    counts = {}
    for seed in range(trials):
        key = partition_of(gen_block_doubly_regular(n=4, s=2, r=1, seed=seed))
        counts[key] = counts.get(key, 0) + 1
    assert set(counts) == {
        ((0, 1), (2, 3)),
        ((0, 2), (1, 3)),
        ((0, 3), (1, 2)),
    }
    for count in counts.values():
        assert abs(count / trials - 1 / 3) < 0.005


def test_blocks_use_distinct_substreams():
    design = gen_block_doubly_regular(n=40, s=4, r=5, seed=99)
    partitions = {partition_of(design, j) for j in range(5)}
    assert len(partitions) == 5


@pytest.mark.parametrize(
    "kwargs",
    [
        {"n": 4, "s": 5, "r": 1},
        {"n": 4, "s": 0, "r": 1},
        {"n": 4, "s": 2, "r": 0},
        {"n": 0, "s": 1, "r": 1},
        {"n": 4, "s": 2.0, "r": 1},
    ],
)
def test_block_invalid(kwargs):
    with pytest.raises(InvalidParameterError):
        gen_block_doubly_regular(seed=1, **kwargs)


def test_bernoulli_extremes():
    empty = gen_bernoulli(n=7, T=5, q=0.0, seed=1)
    assert empty.num_edges == 0
    assert empty.num_tests == 5
    full = gen_bernoulli(n=7, T=5, q=1.0, seed=1)
    np.testing.assert_array_equal(full.row_weights(), np.full(5, 7))
    assert full.is_consistent()


def test_bernoulli_cell_count():
    counts = np.array(
        [gen_bernoulli(n=100, T=50, q=0.1, seed=seed).num_edges for seed in range(2000)]
    )
    sigma = np.sqrt(5000 * 0.1 * 0.9)
    assert abs(counts.mean() - 500) < 4 * sigma / np.sqrt(len(counts))
    assert abs(counts.std() - sigma) < 0.1 * sigma


@pytest.mark.parametrize("q", [-0.1, 1.5])
def test_bernoulli_invalid_q(q):
    with pytest.raises(InvalidParameterError):
        gen_bernoulli(n=3, T=2, q=q, seed=1)


def test_near_constant_collisions():
    weights = np.concatenate(
        [
            gen_near_constant_column(n=20, T=6, L=6, seed=seed).column_weights()
            for seed in range(20)
        ]
    )
    assert weights.max() <= 6
    assert weights.min() < 6


def test_near_constant_single_draw():
    design = gen_near_constant_column(n=10, T=5, L=1, seed=5)
    np.testing.assert_array_equal(design.column_weights(), np.ones(10))
    assert design.is_consistent()


@pytest.mark.slow
def test_near_constant_uniform_test():
    trials = 100000
    hits = sum(
        int(gen_near_constant_column(n=1, T=2, L=1, seed=seed).tests_of_item(0)[0])
        for seed in range(trials)
    )
    assert abs(hits / trials - 0.5) < 0.01


def test_near_constant_invalid():
    with pytest.raises(InvalidParameterError):
        gen_near_constant_column(n=3, T=2, L=0, seed=1)


def test_constant_column_full():
    design = gen_constant_column(n=6, T=4, L=4, seed=2)
    np.testing.assert_array_equal(design.to_dense(), np.ones((4, 6), dtype=np.uint8))


def test_constant_column_weights():
    design = gen_constant_column(n=10, T=4, L=1, seed=8)
    np.testing.assert_array_equal(design.column_weights(), np.ones(10))
    design = gen_constant_column(n=50, T=9, L=3, seed=8)
    np.testing.assert_array_equal(design.column_weights(), np.full(50, 3))
    assert design.is_consistent()


@pytest.mark.slow
def test_constant_column_uniform_subsets():
    trials = 300000
    counts = {}
    for seed in range(trials):
        key = tuple(gen_constant_column(n=1, T=3, L=2, seed=seed).tests_of_item(0))
        counts[key] = counts.get(key, 0) + 1
    assert set(counts) == {(0, 1), (0, 2), (1, 2)}
    for count in counts.values():
        assert abs(count / trials - 1 / 3) < 0.005


def test_constant_column_invalid():
    with pytest.raises(InvalidParameterError):
        gen_constant_column(n=3, T=2, L=3, seed=1)


@pytest.mark.parametrize("kind", DESIGN_KINDS)
def test_consistent_and_deterministic(kind):
    params = DESIGN_PARAM_DICT[kind]
    for seed in range(5):
        first = make_design(kind, 150, seed, **params)
        second = make_design(kind, 150, seed, **params)
        assert first.is_consistent()
        assert first == second
        np.testing.assert_array_equal(first.item_tests, second.item_tests)
    assert make_design(kind, 150, 0, **params) != make_design(kind, 150, 1, **params)


def test_adjacency_read_only(block_design):
    with pytest.raises(ValueError):
        block_design.test_items[0] = 1


def test_make_design_errors():
    with pytest.raises(InvalidParameterError):
        make_design("uniform", 10, 1, s=2, r=1)
    with pytest.raises(InvalidParameterError):
        make_design(BLOCK, 10, 1, T=2, r=1)


def test_dense_matches_adjacency(block_design):
    dense = block_design.to_dense()
    for t in range(block_design.num_tests):
        np.testing.assert_array_equal(np.flatnonzero(dense[t]), block_design.items_of_test(t))


@pytest.mark.parametrize(
    "kind, params",
    [
        (BLOCK, {"s": 4, "r": 3}),
        (BERNOULLI, {"T": 12, "q": 0.05}),
        (NEAR_CONSTANT, {"T": 12, "L": 2}),
        (CONSTANT, {"T": 12, "L": 3}),
    ],
)
def test_design_dump(tmp_path, kind, params):
    design = make_design(kind, 30, 42, **params)
    path = tmp_path / f"{kind}.txt"
    write_design(design, path)
    header = path.read_text().split("\n")[0]
    assert header.startswith(f"30 {design.num_tests} {kind} ")
    assert header.endswith(" 42")
    restored = read_design(path)
    assert restored == design
    assert restored.seed == 42
    assert restored.is_consistent()


def test_design_dump_layout(tmp_path, pair_design):
    path = tmp_path / "pairs.txt"
    write_design(pair_design, path)
    assert path.read_text() == "4 2 block s=2,r=1 -\n0 1\n2 3\n"


def test_design_dump_rejects_bad_item(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("3 1 bernoulli q=0.5 -\n0 3\n")
    with pytest.raises(InvalidParameterError):
        read_design(path)


def test_read_design_param_dict(tmp_path):
    path = tmp_path / "param.yaml"
    path.write_text("block:\n  s: 20\n")
    params = read_design_param_dict(str(path))
    assert params[BLOCK] == {"s": 20, "r": 3}
    assert params[BERNOULLI] == DESIGN_PARAM_DICT[BERNOULLI]
    assert read_design_param_dict(str(tmp_path / "missing.yaml")) is DESIGN_PARAM_DICT


def test_packaged_param_file_matches_defaults():
    assert read_design_param_dict() == DESIGN_PARAM_DICT
