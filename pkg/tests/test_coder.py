import math
import random

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from markovstego.bits import BitReader
from markovstego.coder import (
    WINDOW_BITS,
    CandidatePool,
    HuffmanTree,
    PrefixTable,
    build_candidate_pool,
    build_huffman_tree,
    codeword_of,
    decode_word,
    fixed_length_codebook,
    make_code,
)
from markovstego.corpus import UNK
from markovstego.errors import EmptyPool, NotInPool
from markovstego.markov import Distribution

import oracles

A, B, C, D, E, F, X = 10, 11, 12, 13, 14, 15, 16


def dist(pairs):
    return Distribution.from_counts((3,), dict(pairs))


def pool(pairs):
    return CandidatePool(tuple(pairs))


def test_pool_truncation():
    assert build_candidate_pool(dist([(C, 2), (D, 1)]), 8).entries == ((C, 2), (D, 1))


def test_pool_tie_break_by_id():
    d = dist([(A, 5), (E, 3), (B, 3), (F, 1)])
    assert build_candidate_pool(d, 2).entries == ((A, 5), (B, 3))


def test_pool_excludes_unk():
    assert build_candidate_pool(dist([(UNK, 9), (X, 1)]), 2).entries == ((X, 1),)
    with pytest.raises(EmptyPool):
        build_candidate_pool(dist([(UNK, 4)]), 2)


def test_pool_rejects_small_cps():
    with pytest.raises(ValueError):
        build_candidate_pool(dist([(A, 1)]), 1)


def test_worked_huffman_example():
    tree = build_huffman_tree(pool([(A, 4), (B, 2), (C, 1), (D, 1)]))
    assert tree.codes == {A: "0", B: "10", C: "110", D: "111"}
    assert codeword_of(tree, C) == "110"
    with pytest.raises(NotInPool):
        codeword_of(tree, X)


def test_uniform_four():
    tree = build_huffman_tree(pool([(A, 1), (B, 1), (C, 1), (D, 1)]))
    assert [tree.codes[w] for w in (A, B, C, D)] == ["00", "01", "10", "11"]


def test_single_leaf():
    tree = build_huffman_tree(pool([(A, 7)]))
    assert codeword_of(tree, A) == ""
    assert decode_word(tree, "1011") == (A, 0)


def test_empty_pool_tree():
    with pytest.raises(EmptyPool):
        build_huffman_tree(pool([]))


def test_decode_examples():
    tree = build_huffman_tree(pool([(A, 4), (B, 2), (C, 1), (D, 1)]))
    assert decode_word(tree, "110") == (C, 3)
    assert decode_word(tree, "1101") == (C, 3)
    assert decode_word(tree, "") == (A, 0)
    # Exhausted mid-walk: the missing bits default to 0.
    assert decode_word(tree, "11") == (C, 2)
    reader = BitReader("10111")
    assert tree.decode(reader) == (B, 2)
    assert tree.decode(reader) == (D, 3)
    assert reader.exhausted


def test_fixed_length_codebook():
    assert fixed_length_codebook(pool([(A, 4), (B, 3), (C, 2), (D, 1)])) == {A: "00", B: "01", C: "10", D: "11"}
    assert fixed_length_codebook(pool([(A, 4), (B, 3), (C, 2)])) == {A: "0", B: "1"}
    assert fixed_length_codebook(pool([(A, 1), (B, 1)])) == {A: "0", B: "1"}
    with pytest.raises(ValueError):
        fixed_length_codebook(pool([(A, 1)]))


def test_fixed_decode_and_single():
    code = make_code(pool([(A, 4), (B, 3), (C, 2), (D, 1), (E, 1)]), "fixed")
    assert len(code) == 4
    assert code.decode(BitReader("10")) == (C, 2)
    assert code.decode(BitReader("1")) == (C, 1)
    single = make_code(pool([(A, 4)]), "fixed")
    assert single.decode(BitReader("1")) == (A, 0) and single.codeword(A) == ""
    with pytest.raises(ValueError):
        make_code(pool([(A, 4)]), "arithmetic")


counts_strategy = st.lists(st.integers(1, 1000), min_size=1, max_size=64)


def _tree(counts):
    return HuffmanTree(list(range(100, 100 + len(counts))), counts)


@given(counts_strategy)
def test_prefix_property(counts):
    codes = sorted(_tree(counts).codes.values())
    for a, b in zip(codes, codes[1:]):
        assert not b.startswith(a)


@given(st.lists(st.integers(1, 1000), min_size=2, max_size=64))
def test_kraft_equality(counts):
    tree = _tree(counts)
    assert sum(2.0 ** -len(c) for c in tree.codes.values()) == 1.0
    assert len(tree.left) == 2 * len(counts) - 1


@given(counts_strategy)
def test_more_probable_never_longer(counts):
    tree = _tree(counts)
    lengths = [len(tree.codes[100 + i]) for i in range(len(counts))]
    for i, ci in enumerate(counts):
        for j, cj in enumerate(counts):
            if ci > cj:
                assert lengths[i] <= lengths[j]


@given(counts_strategy)
def test_entropy_bounds(counts):
    total = sum(counts)
    h = -sum(c / total * math.log2(c / total) for c in counts)
    exp_len = _tree(counts).expected_length()
    assert h - 1e-9 <= exp_len < h + 1


@settings(max_examples=200)
@given(st.lists(st.integers(1, 50), min_size=1, max_size=12))
def test_matches_exhaustive_optimum(counts):
    tree = _tree(counts)
    cost = sum(c * len(tree.codes[100 + i]) for i, c in enumerate(counts))
    assert cost == oracles.exhaustive_optimal_cost(counts)


def test_matches_package_merge_on_random_pools():
    rng = random.Random(42)
    for _ in range(1000):
        counts = [rng.randint(1, 500) for _ in range(rng.randint(2, 64))]
        tree = _tree(counts)
        cost = sum(c * len(tree.codes[100 + i]) for i, c in enumerate(counts))
        assert cost == oracles.package_merge_cost(counts)


@given(counts_strategy, st.text(alphabet="01", max_size=20))
def test_decode_inverts_codeword(counts, tail):
    tree = _tree(counts)
    for w, code in tree.codes.items():
        assert decode_word(tree, code + tail) == (w, len(code))


def test_tie_heavy_pool_traced_by_hand():
    # Merges: (5,6) (7,8) (9,10) (2,3) (4,11) (0,1) (12,13) (14,15).
    counts = [5, 5, 3, 3, 3, 1, 1, 1, 1]
    assert _tree(counts).codes == {
        100: "00", 101: "01", 102: "100", 103: "101", 104: "110",
        105: "11100", 106: "11101", 107: "11110", 108: "11111",
    }


@settings(max_examples=300)
@given(
    st.lists(st.integers(1, 10_000), min_size=1, max_size=64),
    st.sampled_from(["huffman", "fixed"]),
    st.text(alphabet="01", max_size=40),
    st.integers(0, 45),
)
def test_prefix_table_agrees_with_tree_walk(counts, coding, bits, pos):
    pool = CandidatePool(tuple((100 + i, c) for i, c in enumerate(counts)))
    code = make_code(pool, coding)
    table = PrefixTable(code)
    pos = min(pos, len(bits))
    reader = BitReader(bits, pos)
    want, _ = code.decode(reader)
    got, n = table.decode(bits, pos)
    assert (got, n) == (want, len(code.codes[want]))
    if table.window is not None:
        padded = bits + "0" * WINDOW_BITS
        assert table.window[padded[pos : pos + table.width]] == (want, n)


def test_deep_code_has_no_window():
    counts = [2**i for i in range(WINDOW_BITS + 3)]
    table = PrefixTable(HuffmanTree(list(range(len(counts))), counts))
    assert table.width > WINDOW_BITS and table.window is None
    assert table.decode("", 0) == (0, table.width)

