import pytest

from qweyl.catalogs import (
    list_catalogs,
    load_catalog,
    verify_catalog,
    verify_identity,
)
from qweyl.presentations import oq_gl2_plus


def test_all_catalogs_pass_at_standard_bounds():
    for name in list_catalogs():
        report = verify_catalog(name, n_max=4, m_max=4)
        assert report.ok, str(report)
        assert report.failed == 0
        assert report.passed == len(report.rows) > 0


def test_bn_a_family_up_to_five():
    report = verify_catalog("oq-gl2", n_max=5, m_max=2)
    rows = [r for r in report.rows if r["identity"] == "bn-a"]
    assert len(rows) == 5
    assert all(r["ok"] for r in rows)


def test_verify_identity_reports_failures():
    p = oq_gl2_plus()
    ok, detail = verify_identity(p, "d^n*b", "b*d^n", {"n": 2})
    assert not ok
    assert "difference" in detail
    ok, _ = verify_identity(p, "d^n*b", "q^(2*n)*b*d^n", {"n": 2})
    assert ok


def test_catalog_loading_and_unknown_name():
    data = load_catalog("oq-gl2")
    assert data["algebra"] == "oq_gl2"
    assert any(rec["name"] == "cn-b" for rec in data["identities"])
    with pytest.raises(KeyError):
        load_catalog("nope")


def test_catalogs_pass_at_root_of_unity():
    report = verify_catalog("dq3-beta", n_max=3, mode=3)
    assert report.ok, str(report)
