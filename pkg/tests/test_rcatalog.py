import json
from fractions import Fraction

import pytest

from qcapelli.qlinalg import QMatrix
from qcapelli.rcatalog import (
    CatalogError,
    CatalogValidationError,
    dj,
    flip,
    load,
)
from qcapelli.scalar import QConfig


def test_dj_small_matrices():
    s1 = dj(1)
    assert s1.R.rows == [[s1.q_config.qpow(1)]]
    s2 = dj(2)
    cfg = s2.q_config
    q = cfg.qpow(1)
    hop = q - cfg.qpow(-1)
    expect = QMatrix(2, 2, [
        [q, 0, 0, 0],
        [0, hop, cfg.one(), 0],
        [0, cfg.one(), 0, 0],
        [0, 0, 0, q],
    ])
    assert s2.R == expect
    assert s2.rank == 2


def test_dj3_rank():
    sym = dj(3, QConfig.fixed(Fraction(3, 5)))
    assert sym.rank == 3
    assert sym.rank_report.dims == [3, 3, 1, 0]


def test_flip_is_involutive_at_unit_q():
    f = flip(2)
    assert f.q_config.q_value == 1
    assert f.R * f.R == QMatrix.identity(2, 2)
    assert f.rank == 2


def test_hecke_shortcut_consequence():
    # R^(-1) = R - (q - q^(-1)) I follows from the Hecke condition
    for sym in (dj(2), dj(3, QConfig.fixed(Fraction(2)))):
        cfg = sym.q_config
        hop = cfg.qpow(1) - cfg.qpow(-1)
        assert sym.R_inv == sym.R - QMatrix.identity(sym.N, 2).scale(hop)


def test_rebuild_at_other_q():
    sym = dj(2, QConfig.fixed(Fraction(3, 5)))
    other = sym.rebuild_at(Fraction(7, 2))
    assert other.q_config.q_value == Fraction(7, 2)
    assert other.R.rows[0][0] == Fraction(7, 2)
    assert flip(2).rebuild_at(Fraction(2)) is None


def _dj2_record(qspec):
    entries = []
    vals = {
        (1, 1, 1, 1): "q", (2, 2, 2, 2): "q",
        (1, 2, 1, 2): "q - q^(-1)", (1, 2, 2, 1): "1", (2, 1, 1, 2): "1",
    }
    for (i, j, k, l), v in vals.items():
        entries.append({"i": i, "j": j, "k": k, "l": l, "value": v})
    return {"N": 2, "q": qspec, "entries": entries}


def test_load_round_trip(tmp_path):
    path = tmp_path / "dj2.rmx"
    path.write_text(json.dumps(_dj2_record("symbolic")))
    sym = load(str(path))
    assert sym.R == dj(2).R
    assert sym.name == "file:dj2.rmx"
    path2 = tmp_path / "dj2q.rmx"
    path2.write_text(json.dumps(_dj2_record("3/5")))
    sym2 = load(str(path2))
    assert sym2.q_config.q_value == Fraction(3, 5)
    assert sym2.R == dj(2, QConfig.fixed(Fraction(3, 5))).R


def test_load_rejects_non_hecke(tmp_path):
    # identity braids but is not Hecke
    rec = {"N": 2, "q": "symbolic", "entries": [
        {"i": i, "j": j, "k": i, "l": j, "value": "1"}
        for i in (1, 2) for j in (1, 2)]}
    path = tmp_path / "bad.rmx"
    path.write_text(json.dumps(rec))
    with pytest.raises(CatalogValidationError) as err:
        load(str(path))
    assert err.value.check == "hecke"


def test_load_rejects_non_braid(tmp_path):
    rec = _dj2_record("symbolic")
    rec["entries"][0]["value"] = "q^2"
    path = tmp_path / "bad2.rmx"
    path.write_text(json.dumps(rec))
    with pytest.raises(CatalogValidationError) as err:
        load(str(path))
    assert err.value.check == "braid"


def test_load_structural_errors(tmp_path):
    path = tmp_path / "broken.rmx"
    path.write_text("{not json")
    with pytest.raises(CatalogError):
        load(str(path))
    path.write_text(json.dumps({"N": 2, "entries": []}))
    with pytest.raises(CatalogError):
        load(str(path))
    rec = _dj2_record("symbolic")
    rec["entries"][0]["i"] = 5
    path.write_text(json.dumps(rec))
    with pytest.raises(CatalogError):
        load(str(path))
