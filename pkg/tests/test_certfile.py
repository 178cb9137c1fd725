import json
from fractions import Fraction

import pytest

from defectlab.artin import as_extension, as_family
from defectlab.certfile import (
    SessionConfig,
    cert_from_json,
    cert_to_json,
    make_certificate_file,
    read_certificate_file,
    series_from_json,
    series_to_json,
    verify_certificate,
    write_certificate_file,
)
from defectlab.fields import preset_field
from defectlab.kummer import kummer_family, lab_superdependent_unit
from defectlab.series import Series, make_equal_context


def q(n, d=1):
    return Fraction(n, d)


K2 = preset_field("fp_t", 2)
T2 = preset_field("pdiv_tower", 2)
QT2 = preset_field("qp_pdiv_tower", 2, D=2 ** 16)


def _as_certs():
    eta = Series.monomial(K2.ctx, q(1, 2))
    d = Series.monomial(K2.ctx, 1)
    return as_family(eta, K2, d, 3, 3)


def test_series_json_roundtrip():
    ctx = make_equal_context(2, 2)
    s = Series.make(ctx, {q(1, 2): 2, q(3): 3}, q(5))
    back = series_from_json(series_to_json(s), ctx)
    assert back == s


def test_cert_json_roundtrip():
    certs = _as_certs()
    for cert in certs:
        back = cert_from_json(cert_to_json(cert))
        assert back.kind == cert.kind
        assert back.generator == cert.generator
        assert back.sample.realized == cert.sample.realized
        assert back.claims == cert.claims
        assert back.dist == cert.dist


def test_file_roundtrip_and_verify(tmp_path):
    certs = _as_certs()
    cf = make_certificate_file(K2, SessionConfig.for_field(K2, 3), certs)
    path = tmp_path / "out.json"
    write_certificate_file(str(path), cf)
    loaded = read_certificate_file(str(path))
    report = verify_certificate(loaded)
    assert report.ok, report.diffs
    assert json.dumps(loaded.to_json(), sort_keys=True) == json.dumps(
        cf.to_json(), sort_keys=True
    )


def test_determinism(tmp_path):
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    for path in (p1, p2):
        certs = _as_certs()
        cf = make_certificate_file(K2, SessionConfig.for_field(K2, 3), certs)
        write_certificate_file(str(path), cf)
    assert p1.read_bytes() == p2.read_bytes()


def test_tamper_detection_value(tmp_path):
    certs = _as_certs()
    cf = make_certificate_file(K2, SessionConfig.for_field(K2, 3), certs)
    path = tmp_path / "out.json"
    write_certificate_file(str(path), cf)
    obj = json.loads(path.read_text())
    obj["certs"][0]["sample"]["realized"][0]["value"] = "-77/1"
    path.write_text(json.dumps(obj))
    report = verify_certificate(read_certificate_file(str(path)))
    assert not report.ok
    assert any("witness re-evaluation" in d for d in report.diffs)


def test_tamper_detection_claim(tmp_path):
    certs = _as_certs()
    cf = make_certificate_file(K2, SessionConfig.for_field(K2, 3), certs)
    path = tmp_path / "out.json"
    write_certificate_file(str(path), cf)
    obj = json.loads(path.read_text())
    obj["certs"][1]["claims"]["defect"] = [2, "ramified"]
    path.write_text(json.dumps(obj))
    report = verify_certificate(read_certificate_file(str(path)))
    assert not report.ok
    assert any("defect" in d for d in report.diffs)


def test_config_mismatch_rejected(tmp_path):
    certs = _as_certs()
    cf = make_certificate_file(K2, SessionConfig.for_field(K2, 3), certs)
    path = tmp_path / "out.json"
    write_certificate_file(str(path), cf)
    obj = json.loads(path.read_text())
    obj["config"]["D"] = 16
    path.write_text(json.dumps(obj))
    report = verify_certificate(read_certificate_file(str(path)))
    assert not report.ok
    assert any("config-mismatch" in d for d in report.diffs)


def test_kummer_cert_verifies(tmp_path):
    eta, tail = lab_superdependent_unit(QT2)
    certs = kummer_family(eta, QT2, 2, 5, tail)
    cf = make_certificate_file(QT2, SessionConfig.for_field(QT2, 5), certs)
    path = tmp_path / "ku.json"
    write_certificate_file(str(path), cf)
    report = verify_certificate(read_certificate_file(str(path)))
    assert report.ok, report.diffs


def test_classical_cert_verifies(tmp_path):
    cert = as_extension(Series.monomial(T2.ctx, -1), T2, 3)
    cf = make_certificate_file(T2, SessionConfig.for_field(T2, 3), [cert])
    path = tmp_path / "cl.json"
    write_certificate_file(str(path), cf)
    report = verify_certificate(read_certificate_file(str(path)))
    assert report.ok, report.diffs


def test_unsupported_version(tmp_path):
    certs = _as_certs()
    cf = make_certificate_file(K2, SessionConfig.for_field(K2, 3), certs)
    path = tmp_path / "v.json"
    write_certificate_file(str(path), cf)
    obj = json.loads(path.read_text())
    obj["version"] = 99
    path.write_text(json.dumps(obj))
    with pytest.raises(ValueError):
        read_certificate_file(str(path))
