import pytest

from lfsr_debruijn import goldens
from lfsr_debruijn.fsr import from_bitstring, shift_int
from lfsr_debruijn.goldens import GoldenLoadError, load_golden


def test_table3_rows():
    assert len(load_golden("table3").rows) == 5


def test_table1_row_six():
    row = load_golden("table1").rows[5]
    assert (row["cycle"], row["index"], row["tail"], row["l"], row["path_states"]) == (1, 6, "011010", 1, 1)


def test_table1_label_corrections():
    rows = load_golden("table1").rows
    fixed = [(r["index"], r["printed_label"], r["label"]) for r in rows if r.get("corrected")]
    assert fixed == [
        (9, "p_{1,1}", "p_{1,9}"),
        (10, "p_{1,2}", "p_{1,10}"),
        (11, "p_{1,3}", "p_{1,11}"),
        (12, "p_{1,4}", "p_{1,12}"),
    ]
    assert len({r["label"] for r in rows}) == 32


def test_table2_empty_cell():
    rows = {r["class"]: r for r in load_golden("table2").rows}
    assert rows["111"]["C2"] == []


def test_unknown_table():
    with pytest.raises(GoldenLoadError):
        load_golden("table9")


def test_corrupt_fixture(tmp_path, monkeypatch):
    (tmp_path / "table3.json").write_text("{not json")
    monkeypatch.setattr(goldens.resources, "files", lambda _: tmp_path)
    with pytest.raises(GoldenLoadError):
        load_golden("table3")
    (tmp_path / "table3.json").write_text('{"schema": 1, "id": "table3", "n": 6, "rows": []}')
    with pytest.raises(GoldenLoadError, match="expected 5 rows"):
        load_golden("table3")


def _expanded_cycles():
    """Cycle membership implied by table1 alone: tail plus its successors."""
    member = {}
    for row in load_golden("table1").rows:
        s = from_bitstring(row["tail"])
        for k in range(row["path_states"]):
            state = shift_int(s, 6, k)
            assert state not in member
            member[state] = row["cycle"]
    return member


def test_table1_covers_state_space():
    assert sorted(_expanded_cycles()) == list(range(64))


def test_table2_matches_table1():
    t1 = {(r["cycle"], r["index"]): r for r in load_golden("table1").rows}
    cells = []
    for row in load_golden("table2").rows:
        for col, cycle in (("C1", 1), ("C2", 2)):
            for ref in row.get(col + "_corrected", row[col]):
                ref = tuple(ref)
                assert ref[0] == cycle
                assert t1[ref]["tail"][-3:] == row["class"]
                cells.append(ref)
    assert sorted(cells) == sorted(t1)


def test_table3_straddles_cycles():
    member = _expanded_cycles()
    for a, b in load_golden("table3").rows:
        assert from_bitstring(a) ^ from_bitstring(b) == 0b100000
        assert {member[from_bitstring(a)], member[from_bitstring(b)]} == {1, 2}


def test_table2_printed_c2_cells_exchanged():
    t1 = {(r["cycle"], r["index"]): r["tail"] for r in load_golden("table1").rows}
    rows = {r["class"]: r for r in load_golden("table2").rows}
    assert [t1[tuple(ref)][-3:] for ref in rows["100"]["C2"]] == ["010", "010"]
    assert [t1[tuple(ref)][-3:] for ref in rows["010"]["C2"]] == ["100", "100"]
    assert rows["100"]["C2_corrected"] == rows["010"]["C2"]
    assert rows["010"]["C2_corrected"] == rows["100"]["C2"]
    assert [c for c, r in rows.items() if r.get("corrected")] == ["100", "010"]
