import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phonembed.errors import BadFeatureValue, DuplicateSegment, MalformedRow, UnknownSegment
from phonembed.phonology import (
    N_FEATURES,
    EditCosts,
    distances_to_many,
    feature_edit_distance,
    load_feature_table,
    segment_ipa,
    substitution_cost,
)
from tests.oracles import brute_force_distance

HEADER = "segment\t" + "\t".join(f"f{i}" for i in range(N_FEATURES))


def _row(seg, values):
    return seg + "\t" + "\t".join(values)


def _write(tmp_path, lines):
    path = tmp_path / "table.tsv"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


class TestLoadFeatureTable:
    def test_two_rows(self, tmp_path):
        p = ["-"] * N_FEATURES
        b = ["-"] * 8 + ["+"] + ["-"] * 15
        table = load_feature_table(_write(tmp_path, [HEADER, _row("p", p), _row("b", b)]))
        assert table.segments == ("p", "b")
        assert table.matrix.shape == (2, N_FEATURES)
        assert table.vector("b")[8] == 1

    def test_numeric_values_and_bare_header(self, tmp_path):
        header = "\t".join(f"f{i}" for i in range(N_FEATURES))
        vals = ["-1", "0", "1"] * 8
        table = load_feature_table(_write(tmp_path, [header, _row("a", vals)]))
        assert table.vector("a").tolist() == [-1, 0, 1] * 8

    def test_duplicate_segment(self, tmp_path):
        vals = ["0"] * N_FEATURES
        with pytest.raises(DuplicateSegment):
            load_feature_table(_write(tmp_path, [HEADER, _row("a", vals), _row("a", vals)]))

    def test_short_row(self, tmp_path):
        with pytest.raises(MalformedRow):
            load_feature_table(_write(tmp_path, [HEADER, _row("a", ["0"] * 23)]))

    def test_bad_value(self, tmp_path):
        with pytest.raises(BadFeatureValue):
            load_feature_table(_write(tmp_path, [HEADER, _row("a", ["2"] + ["0"] * 23)]))

    def test_bundled_invariants(self, table):
        assert len(table.feature_names) == N_FEATURES
        assert set(np.unique(table.matrix)) <= {-1, 0, 1}
        assert len(set(table.segments)) == len(table.segments)
        assert all(table.segments)


class TestSegmentation:
    def test_longest_match(self, table):
        assert segment_ipa("tʃæt", table).segments == ("tʃ", "æ", "t")

    def test_empty(self, table):
        word = segment_ipa("", table)
        assert len(word) == 0
        assert word.features.shape == (0, N_FEATURES)

    def test_unknown_segment_offset(self, table):
        with pytest.raises(UnknownSegment) as info:
            segment_ipa("aQ", table)
        assert info.value.offset == 1

    def test_marks_are_annotations(self, table):
        word = segment_ipa("ˈɡroʊn", table)
        assert word.segments == ("ɡ", "r", "o", "ʊ", "n")
        assert word.stressed() == (True, False, False, False, False)
        assert word.to_string() == "ˈɡroʊn"

    def test_length_mark_attaches_to_previous(self, table):
        word = segment_ipa("aːb.", table)
        assert word.segments == ("a", "b")
        assert word.suffixes == ("ː", "")
        assert word.trailing == "."

    @settings(max_examples=200, deadline=None)
    @given(st.data())
    def test_round_trip(self, table, data):
        pieces = data.draw(st.lists(st.sampled_from(list(table.segments) + ["ˈ", "ˌ", "ː", "."]), max_size=12))
        text = "".join(pieces)
        word = segment_ipa(text, table)
        assert word.to_string() == text
        assert "".join(word.segments) == "".join(ch for ch in text if ch not in "ˈˌː.")


class TestSubstitutionCost:
    def test_identity(self, table):
        assert substitution_cost(table.vector("p"), table.vector("p")) == 0

    def test_voicing(self, table):
        assert substitution_cost(table.vector("p"), table.vector("b")) == 2 / 24

    def test_zero_vs_one(self):
        u = np.zeros(N_FEATURES, dtype=np.int8)
        v = u.copy()
        v[3] = 1
        assert substitution_cost(u, v) == 1 / 24

    def test_pseudometric(self, table, rng):
        m = table.matrix
        for _ in range(500):
            a, b, c = m[rng.integers(len(m), size=3)]
            assert substitution_cost(a, b) == substitution_cost(b, a)
            assert 0 <= substitution_cost(a, b) <= 2
            assert substitution_cost(a, c) <= substitution_cost(a, b) + substitution_cost(b, c) + 1e-15


def _random_word(table, rng, max_len=8, alphabet=None):
    alphabet = alphabet or table.segments
    n = int(rng.integers(0, max_len + 1))
    return segment_ipa("".join(alphabet[i] for i in rng.integers(len(alphabet), size=n)), table)


class TestFeatureEditDistance:
    def test_self_distance(self, table, rng):
        for _ in range(50):
            w = _random_word(table, rng)
            assert feature_edit_distance(w, w) == 0

    def test_pat_bat(self, table):
        assert feature_edit_distance(segment_ipa("pæt", table), segment_ipa("bæt", table)) == 2 / 24

    def test_pat_closer_to_bat_than_hat(self, table):
        pat, bat, hat = (segment_ipa(w, table) for w in ("pæt", "bæt", "hæt"))
        assert feature_edit_distance(pat, bat) < feature_edit_distance(pat, hat)

    def test_empty(self, table):
        empty = segment_ipa("", table)
        w = segment_ipa("kæt", table)
        assert feature_edit_distance(empty, w) == 3
        assert feature_edit_distance(w, empty, EditCosts(insertion=1, deletion=0.5)) == 1.5

    def test_symmetry_and_bounds(self, table, rng):
        for _ in range(1000):
            x, y = _random_word(table, rng), _random_word(table, rng)
            d = feature_edit_distance(x, y)
            assert d == feature_edit_distance(y, x)
            assert 0 <= d <= len(x) + len(y)
            if d == 0:
                assert np.array_equal(x.features, y.features)

    def test_asymmetric_costs(self, table):
        x, y = segment_ipa("pæt", table), segment_ipa("pæ", table)
        costs = EditCosts(insertion=2, deletion=0.5)
        assert feature_edit_distance(x, y, costs) == 0.5
        assert feature_edit_distance(y, x, costs) == 2

    def test_matches_brute_force_small(self, table):
        alphabet = ["p", "b", "s", "a", "i", "tʃ"]
        words = [segment_ipa("".join(w), table) for n in range(3) for w in itertools.product(alphabet, repeat=n)]
        for x in words:
            for y in words:
                expected = brute_force_distance(x.features, y.features)
                assert feature_edit_distance(x, y) == float(expected)

    def test_brute_force_custom_costs(self, table, rng):
        costs = EditCosts(insertion=2, deletion=3)
        for _ in range(200):
            x = _random_word(table, rng, 3)
            y = _random_word(table, rng, 3)
            expected = brute_force_distance(x.features, y.features, insertion=2, deletion=3)
            assert feature_edit_distance(x, y, costs) == float(expected)

    def test_batched_matches_scalar(self, table, rng):
        for _ in range(30):
            x = _random_word(table, rng)
            ys = [_random_word(table, rng) for _ in range(40)]
            batched = distances_to_many(x, ys, table)
            assert batched.tolist() == [feature_edit_distance(x, y) for y in ys]

    def test_batched_empty_query(self, table):
        x = segment_ipa("", table)
        ys = [segment_ipa(w, table) for w in ("a", "tʃa", "")]
        assert distances_to_many(x, ys, table).tolist() == [1.0, 2.0, 0.0]

    def test_exact_units(self, table):
        # integer-unit accumulation: the float is exactly the rational value
        x, y = segment_ipa("pætʃɪŋ", table), segment_ipa("bɛtsin", table)
        expected = brute_force_distance(x.features, y.features)
        assert Fraction(feature_edit_distance(x, y)) == Fraction(float(expected))
