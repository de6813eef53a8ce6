import json
from fractions import Fraction

import pytest

from teamblotto.cli import (
    CSV_COLUMNS,
    SweepInvariantError,
    SweepRecord,
    _band_for,
    main,
    records_from_csv,
    records_to_csv,
    sweep_records,
)
from teamblotto.construct import comb_centralized
from teamblotto.core import GameConfig, partition_of
from teamblotto.distributions import AtomicStrategy, strategy_to_dict

F = Fraction


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def write_strategy(path, G):
    path.write_text(json.dumps(strategy_to_dict(G)))
    return str(path)


def test_record_round_trip():
    records = [
        SweepRecord(1, F(5, 6), F(5, 6), True, 1, F(5, 6)),
        SweepRecord(0, F(5, 6), F(5, 6), True, 1, F(5, 6)),
        SweepRecord(5, F(4, 5), F(5, 6), False),
    ]
    text = records_to_csv(records)
    assert text.splitlines()[0] == ",".join(CSV_COLUMNS)
    assert [r.B1 for r in records_from_csv(text)] == [0, 1, 5]
    assert records_from_csv(text) == sorted(records, key=lambda r: r.B1)
    with pytest.raises(ValueError):
        records_from_csv("b1,lb\n0,1\n")


def test_record_invariants():
    with pytest.raises(SweepInvariantError):
        SweepRecord(3, F(1), F(5, 6), False).check()
    with pytest.raises(SweepInvariantError):
        SweepRecord(0, F(1, 2), F(5, 6), False).check()
    with pytest.raises(SweepInvariantError):
        SweepRecord(2, F(1, 2), F(5, 6), True, 1, F(2, 3)).check()


def test_small_sweep_is_deterministic():
    a = sweep_records(5, 8, 2, starts=4, seed=1)
    b = sweep_records(5, 8, 2, starts=4, seed=1)
    assert records_to_csv(a) == records_to_csv(b)
    assert a[0].lower_bound == a[0].centralized_value_int


def test_sweep_command_writes_csv(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    code, _, _ = run(["sweep", "--b", "5", "--e", "8", "--starts", "2", "--out", str(out)], capsys)
    assert code == 0
    rows = records_from_csv(out.read_text())
    assert [r.B1 for r in rows] == [0, 1, 2]


def test_sweep_rejects_large_b1_max(capsys):
    code, _, err = run(["sweep", "--b", "42", "--e", "50", "--b1-max", "30"], capsys)
    assert code == 2 and "b1-max" in err


def test_verify_comb_and_dirac(tmp_path, capsys):
    comb = comb_centralized(partition_of(GameConfig(36, 50)))
    code, out, _ = run(["verify", "--b", "36", "--e", "50", write_strategy(tmp_path / "c.json", comb)], capsys)
    report = json.loads(out)
    assert code == 0
    assert report["ss1_ok"] and report["ss2_ok"] and report["value"] == "2/3" and report["agrees"]

    strict = run(
        ["verify", "--b", "36", "--e", "50", "--ss2-reading", "strict", str(tmp_path / "c.json")], capsys
    )
    assert strict[0] == 0 and not json.loads(strict[1])["ss2_ok"]

    path = write_strategy(tmp_path / "d.json", AtomicStrategy.dirac(18, 36))
    code, out, _ = run(["verify", "--b", "36", "--e", "50", path], capsys)
    report = json.loads(out)
    assert code == 0 and not report["ss1_ok"] and report["value"] == "0"


def test_verify_bad_inputs(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"budget": "36", "atoms": [{"x": "0", "w": "9/10"}]}))
    code, _, err = run(["verify", "--b", "36", "--e", "50", str(bad)], capsys)
    assert code == 2 and "weights sum to 1" in err
    code, _, err = run(["verify", "--b", "36", "--e", "50", str(tmp_path / "missing.json")], capsys)
    assert code == 2 and "missing.json" in err


def test_construct(tmp_path, capsys):
    code, out, _ = run(["construct", "--b", "42", "--e", "50", "--k1", "2", "--b1", "9"], capsys)
    assert code == 0
    data = json.loads(out)
    assert set(data) == {"F1", "F2"} and data["F1"]["budget"] == "9"
    code, _, _ = run(
        ["construct", "--b", "42", "--e", "50", "--k1", "2", "--b1", "9", "--out", str(tmp_path / "p")], capsys
    )
    assert code == 0 and (tmp_path / "p_F1.json").exists() and (tmp_path / "p_F2.json").exists()
    code, _, err = run(["construct", "--b", "42", "--e", "50", "--k1", "2", "--b1", "11"], capsys)
    assert code == 3 and "infeasible" in err


def test_bands_and_centralized(capsys):
    code, out, err = run(["bands", "--b", "42", "--e", "50"], capsys)
    assert code == 0 and json.loads(out) == [["0", "2"], ["8", "10"], ["16", "18"]]
    assert "k1=6" in err
    code, out, _ = run(["centralized", "--b", "36", "--e", "50"], capsys)
    assert code == 0 and json.loads(out)["formula"] == "2/3"
    code, out, _ = run(["centralized", "--b", "73/2", "--e", "50"], capsys)
    assert code == 0 and json.loads(out)["lp"] is None


def test_usage_errors(capsys):
    assert run(["nope"], capsys)[0] == 2
    assert run(["bands", "--b", "x", "--e", "50"], capsys)[0] == 2
    assert run(["bands", "--b", "50", "--e", "50"], capsys)[0] == 3


def test_in_band_rows_for_42_50():
    rows = [b1 for b1 in range(19) if _band_for(42, 50, b1) is not None]
    assert rows == [0, 1, 2, 8, 9, 10, 16, 17, 18]
    assert _band_for(36, 50, 9) is None and _band_for(36, 50, 8) is not None
