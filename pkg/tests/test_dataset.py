import pytest
from hypothesis import given, strategies as st

from cometforensics.dataset import (
    CalibrationScale,
    CategoryCounts,
    Dataset,
    DatasetFormatError,
    DEFAULT_SCALE,
    DuplicatePoint,
    EMPTY,
    SUM_MISMATCH,
    TOTAL_MISMATCH,
    category_column,
    parse_dataset,
    serialize_dataset,
    validate_dataset,
)

TWO_ROWS = "label,A,B,C,D,E\nexp4h,442,40,12,3,3\nexp4h,430,48,14,4,4\n"


class TestCalibrationScale:
    def test_default(self):
        assert DEFAULT_SCALE.weights == (2.5, 12.5, 30.0, 67.5, 97.5)

    def test_must_increase(self):
        with pytest.raises(ValueError):
            CalibrationScale((2.5, 2.5, 30.0, 67.5, 97.5))

    def test_must_be_positive(self):
        with pytest.raises(ValueError):
            CalibrationScale((-1.0, 12.5, 30.0, 67.5, 97.5))

    def test_arity(self):
        with pytest.raises(ValueError):
            CalibrationScale((1.0, 2.0, 3.0))


class TestParse:
    def test_single_point(self):
        d = parse_dataset(TWO_ROWS, DEFAULT_SCALE)
        assert len(d.points) == 1
        assert d.points[0].slide_a.counts == (442, 40, 12, 3, 3)
        assert d.points[0].slide_b.counts == (430, 48, 14, 4, 4)
        assert d.points[0].label == "exp4h"
        assert d.slide_total == 500

    def test_header_only_is_empty(self):
        with pytest.raises(DatasetFormatError, match="empty"):
            parse_dataset("label,A,B,C,D,E\n")

    def test_no_header_is_empty(self):
        with pytest.raises(DatasetFormatError, match="header"):
            parse_dataset("")

    def test_malformed_row_arity(self):
        with pytest.raises(DatasetFormatError, match="malformed"):
            parse_dataset("label,A,B,C,D,E\nexp4h,442,40,12,3\n")

    def test_non_integer_count(self):
        with pytest.raises(DatasetFormatError, match="non-integer"):
            parse_dataset("label,A,B,C,D,E\nexp4h,442,40,12,3,x\n")

    def test_negative_count_rejected(self):
        with pytest.raises(DatasetFormatError, match="negative"):
            parse_dataset("label,A,B,C,D,E\nexp4h,442,40,12,3,-3\nexp4h,430,48,14,4,4\n")

    def test_odd_number_of_slides(self):
        with pytest.raises(DatasetFormatError, match="even"):
            parse_dataset("label,A,B,C,D,E\nexp4h,442,40,12,3,3\n")

    def test_zero_cell_slide_rejected(self):
        with pytest.raises(DatasetFormatError, match="zero cells"):
            parse_dataset("label,A,B,C,D,E\nexp4h,0,0,0,0,0\nexp4h,430,48,14,4,4\n")

    def test_comments_and_crlf(self):
        text = "label,A,B,C,D,E\r\n# a comment\r\nexp4h,442,40,12,3,3\r\nexp4h,430,48,14,4,4\r\n"
        d = parse_dataset(text)
        assert len(d.points) == 1

    def test_four_rows_same_label_pair_consecutively(self):
        text = (
            "label,A,B,C,D,E\n"
            "s,442,40,12,3,3\ns,430,48,14,4,4\ns,440,42,12,3,3\ns,432,46,14,4,4\n"
        )
        d = parse_dataset(text)
        assert len(d.points) == 2
        assert all(p.label == "s" for p in d.points)


class TestRoundTrip:
    def test_canonical_round_trip_is_byte_identical(self):
        assert serialize_dataset(parse_dataset(TWO_ROWS)) == TWO_ROWS

    @given(
        st.lists(
            st.tuples(
                st.integers(0, 3),
                st.lists(st.integers(0, 400), min_size=5, max_size=5),
                st.lists(st.integers(0, 400), min_size=5, max_size=5),
            ),
            min_size=1,
            max_size=6,
        )
    )
    def test_parse_accepts_then_validates_clean(self, rows):
        # equal slide totals per point are not required by the parser, so
        # normalise every generated slide to a common total by padding A
        lines = ["label,A,B,C,D,E"]
        for i, (label_i, ca, cb) in enumerate(rows):
            for counts in (ca, cb):
                padded = list(counts)
                padded[0] += 2000 - sum(padded)
                lines.append(",".join([f"p{i}-{label_i}", *map(str, padded)]))
        d = parse_dataset("\n".join(lines) + "\n")
        assert validate_dataset(d) == []
        assert serialize_dataset(parse_dataset(serialize_dataset(d))) == serialize_dataset(d)


class TestValidate:
    def test_well_formed_dataset_has_no_issues(self):
        assert validate_dataset(parse_dataset(TWO_ROWS)) == []

    def test_sum_mismatch(self):
        slide = CategoryCounts((441, 40, 12, 3, 3), total=500)  # sums to 499
        point = DuplicatePoint("x", slide, CategoryCounts((442, 40, 12, 3, 3)))
        issues = validate_dataset(Dataset((point,)))
        assert [i.kind for i in issues] == [SUM_MISMATCH]
        assert issues[0].point_index == 0

    def test_total_mismatch_within_point(self):
        a = CategoryCounts((442, 40, 12, 3, 3))  # 500
        b = CategoryCounts((884, 80, 24, 6, 6))  # 1000
        issues = validate_dataset(Dataset((DuplicatePoint("x", a, b),)))
        assert [i.kind for i in issues] == [TOTAL_MISMATCH]

    def test_total_mismatch_across_points(self):
        p1 = DuplicatePoint("x", CategoryCounts((500, 0, 0, 0, 0)), CategoryCounts((500, 0, 0, 0, 0)))
        p2 = DuplicatePoint(
            "y", CategoryCounts((1000, 0, 0, 0, 0)), CategoryCounts((1000, 0, 0, 0, 0))
        )
        issues = validate_dataset(Dataset((p1, p2)))
        assert [(i.point_index, i.kind) for i in issues] == [(1, TOTAL_MISMATCH)]

    def test_empty_dataset(self):
        issues = validate_dataset(Dataset(()))
        assert [i.kind for i in issues] == [EMPTY]
        assert issues[0].point_index == -1


def test_category_column_order():
    d = parse_dataset(TWO_ROWS)
    assert category_column(d, "A") == [442, 430]
    assert category_column(d, "E") == [3, 4]
    with pytest.raises(ValueError):
        category_column(d, "F")


def test_fixture_is_valid(sham_dataset):
    assert validate_dataset(sham_dataset) == []
    assert len(sham_dataset.points) == 12
    assert sham_dataset.slide_total == 500


def test_bundled_csv_matches_fixture_source():
    from pathlib import Path

    from cometforensics.fixtures import sham_table_csv

    bundled = Path(__file__).parent.parent / "data" / "reconstructed_sham.csv"
    assert bundled.read_text() == sham_table_csv()
