import pytest
from hypothesis import given
from hypothesis import strategies as st

from cardiohybrid.errors import CSVFormatError
from cardiohybrid.ingest import (
    MISSING,
    ColumnKind,
    DatasetDescriptor,
    builtin_descriptor,
    load_csv,
    parse_csv_text,
    row_count_of_file,
    synth_generate,
    table_to_csv_text,
    tables_equal,
    write_csv,
)


def test_dataset1_descriptor_schema():
    d = builtin_descriptor("dataset1")
    assert d.target == "cardio"
    assert d.names == ["id", "age", "gender", "height", "weight", "ap_hi", "ap_lo", "cholesterol", "gluc",
                       "smoke", "alco", "active", "cardio"]
    # id is parsed but not counted as an attribute
    assert d.attribute_count == 12
    assert d.kind("id") is ColumnKind.IDENTIFIER
    assert len(d.feature_columns) == 11


def test_dataset2_descriptor_schema():
    d = builtin_descriptor("dataset2")
    assert d.target == "HeartDisease"
    assert len(d.feature_columns) == 11
    assert d.attribute_count == 12


def test_unknown_builtin():
    with pytest.raises(ValueError):
        builtin_descriptor("dataset3")


def test_descriptor_rejects_duplicate_names_and_two_targets():
    with pytest.raises(ValueError):
        DatasetDescriptor("x", (("a", ColumnKind.CONTINUOUS), ("a", ColumnKind.TARGET)), 2)
    with pytest.raises(ValueError):
        DatasetDescriptor("x", (("a", ColumnKind.TARGET), ("b", ColumnKind.TARGET)), 2)


def test_descriptor_json_round_trip():
    d = builtin_descriptor("dataset2")
    assert DatasetDescriptor.from_json(d.to_json()) == d


def test_header_only_file_gives_empty_table(tmp_path):
    d = builtin_descriptor("dataset2")
    p = tmp_path / "h.csv"
    p.write_text(",".join(d.names) + "\n")
    t = load_csv(p, d)
    assert t.row_count == 0


def test_bad_cell_reports_row_and_column(tmp_path):
    d = builtin_descriptor("dataset2")
    rows = [
        "40,M,ATA,140,289,0,Normal,172,N,0,Up,0",
        "abc,F,NAP,160,180,0,Normal,156,N,1,Flat,1",
        "37,M,ATA,130,283,0,ST,98,N,0,Up,0",
    ]
    p = tmp_path / "bad.csv"
    p.write_text(",".join(d.names) + "\n" + "\n".join(rows) + "\n")
    with pytest.raises(CSVFormatError) as err:
        load_csv(p, d)
    assert err.value.row == 2
    assert err.value.column == "Age"
    assert "row 2" in str(err.value) and "'Age'" in str(err.value)


def test_missing_and_extra_columns():
    d = builtin_descriptor("dataset2")
    with pytest.raises(CSVFormatError, match="missing column"):
        parse_csv_text(",".join(d.names[:-1]) + "\n", d)
    with pytest.raises(CSVFormatError, match="unexpected column"):
        parse_csv_text(",".join(d.names + ["extra"]) + "\n", d)


def test_empty_file(tmp_path):
    p = tmp_path / "e.csv"
    p.write_text("")
    with pytest.raises(CSVFormatError, match="empty"):
        load_csv(p, builtin_descriptor("dataset2"))


def test_semicolon_file_with_missing_tokens():
    d = builtin_descriptor("dataset1")
    text = ";".join(d.names) + "\n" + "0;18393;2;168;62;110;80;1;1;0;0;1;0\n" + "1;NA;1;?;;140;90;3;1;0;0;1;1\n"
    t = parse_csv_text(text, d)
    assert t.row_count == 2
    assert t.rows[0][1] == 18393.0
    assert t.rows[1][1] is MISSING and t.rows[1][3] is MISSING and t.rows[1][4] is MISSING
    assert t.labels().tolist() == [0, 1]


def test_binary_and_target_values_checked():
    d = builtin_descriptor("dataset2")
    with pytest.raises(CSVFormatError) as err:
        parse_csv_text(",".join(d.names) + "\n40,M,ATA,140,289,0,Normal,172,N,0,Up,2\n", d)
    assert err.value.column == "HeartDisease"


def test_synth_empty_and_deterministic():
    d = builtin_descriptor("dataset1")
    assert synth_generate(d, 0, 0.5, 1).row_count == 0
    a = synth_generate(d, 100, 0.5, 7)
    b = synth_generate(d, 100, 0.5, 7)
    assert table_to_csv_text(a) == table_to_csv_text(b)


def test_synth_class_balance():
    t = synth_generate(builtin_descriptor("dataset2"), 1000, 0.3, 1)
    assert abs(int(t.labels().sum()) - 300) <= 1


@pytest.mark.parametrize("which", ["dataset1", "dataset2"])
@given(seed=st.integers(0, 2**31), n=st.integers(0, 40))
def test_csv_round_trip(tmp_path_factory, which, seed, n):
    t = synth_generate(builtin_descriptor(which), n, 0.4, seed)
    p = tmp_path_factory.mktemp("rt") / "t.csv"
    write_csv(t, p)
    back = load_csv(p, t.descriptor)
    assert tables_equal(back, t)
    assert back.row_count == row_count_of_file(p) == n


def test_generic_schema_synth():
    d = DatasetDescriptor("mine", (("x", ColumnKind.CONTINUOUS), ("c", ColumnKind.NOMINAL),
                                   ("y", ColumnKind.TARGET)), 3)
    t = synth_generate(d, 50, 0.5, 3)
    assert t.row_count == 50 and set(t.column("c")) <= {"A", "B", "C"}
