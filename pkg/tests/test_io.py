import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from ljmin.distgeom import ConstraintSet, complete_constraints
from ljmin.globalopt import random_configuration
from ljmin.io import (
    FormatError,
    format_constraints,
    format_xyz,
    parse_constraints,
    parse_xyz,
    read_constraints,
    read_xyz,
    write_constraints,
    write_xyz,
)
from ljmin.potential import Configuration

finite = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)


class TestXYZ:
    @given(arrays(float, st.tuples(st.integers(1, 12), st.just(3)), elements=finite))
    @settings(max_examples=60)
    def test_round_trip_exact(self, pos):
        elements, config, comment = parse_xyz(format_xyz(pos, comment="t"))
        np.testing.assert_array_equal(config.positions, pos)
        assert comment == "t"
        assert elements == ["X"] * len(pos)

    def test_file_round_trip(self, tmp_path):
        config = random_configuration(13, 1)
        path = tmp_path / "c.xyz"
        write_xyz(path, config, ["Ar"] * 13, "LJ13")
        elements, back, comment = read_xyz(path)
        assert back == config
        assert elements == ["Ar"] * 13 and comment == "LJ13"

    def test_comment_newlines_flattened(self):
        text = format_xyz(np.zeros((1, 3)), comment="a\nb")
        assert parse_xyz(text)[2] == "a b"

    @pytest.mark.parametrize("text,line", [
        ("", 1), ("two\n\n", 1), ("2\nc\nX 0 0 0\n", 3), ("1\nc\nX 0 zero 0\n", 3),
        ("1\nc\nX 0 0\n", 3), ("0\nc\n", 1),
    ])
    def test_errors(self, text, line):
        with pytest.raises(FormatError) as info:
            parse_xyz(text)
        assert info.value.lineno == line

    def test_element_count_checked(self):
        with pytest.raises(ValueError):
            format_xyz(np.zeros((2, 3)), ["C"])


class TestConstraints:
    def test_round_trip_exact(self, rng, tmp_path):
        s = complete_constraints(rng.uniform(0, 1, (6, 3)), weight=0.3)
        assert parse_constraints(format_constraints(s)) == s
        path = tmp_path / "s.txt"
        write_constraints(path, s)
        assert read_constraints(path) == s

    @given(st.lists(st.tuples(st.floats(1e-3, 1e3), st.floats(1e-3, 1e3)), min_size=1, max_size=10))
    @settings(max_examples=40)
    def test_random_values_round_trip(self, values):
        entries = [(0, k + 1, r, w) for k, (r, w) in enumerate(values)]
        s = ConstraintSet(len(values) + 1, entries)
        assert parse_constraints(format_constraints(s)) == s

    def test_comments_and_default_weight(self):
        s = parse_constraints("# triangle\natoms 3\n0 1 1.0  # first\n\n1 2 1.5 2\n")
        assert [(c.i, c.j, c.r, c.w) for c in s] == [(0, 1, 1.0, 1.0), (1, 2, 1.5, 2.0)]

    @pytest.mark.parametrize("text,line", [
        ("0 1 1.0\n", 1),
        ("atoms 3\n0 1\n", 2),
        ("atoms 3\n0 1 one\n", 2),
        ("atoms x\n", 1),
        ("atoms 3\n0 1 1.0\natoms 3\n", 3),
        ("atoms 3\n0 1 1.0\n0 2 1.0\n1 1 1.0\n", 4),
        ("atoms 3\n0 1 1.0\n0 5 1.0\n", 3),
        ("atoms 3\n0 1 1.0\n1 0 2.0\n", 3),
        ("atoms 3\n0 1 -1.0\n", 2),
        ("# only a comment\n", 1),
    ])
    def test_errors_carry_line(self, text, line):
        with pytest.raises(FormatError) as info:
            parse_constraints(text, source="c.txt")
        assert info.value.lineno == line
        assert f"c.txt:{line}:" in str(info.value)
