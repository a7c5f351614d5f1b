from dataclasses import replace
from fractions import Fraction

import pytest

from hemisum.certificate import (
    GLOBAL_HEADER,
    LOCAL_HEADER,
    CertificateError,
    GlobalCertificate,
    check_global,
    parse_global,
    parse_local,
    rle_counts,
    serialize_global,
    serialize_local,
)
from hemisum.local import verify_local


def test_local_roundtrip(local_cert):
    text = serialize_local(local_cert)
    back = parse_local(text)
    assert serialize_local(back) == text
    assert back.valid and back.res5 == local_cert.res5
    assert back.K2_report == local_cert.K2_report


def test_local_roundtrip_with_witness():
    c = verify_local(Fraction(1), samples=3000)
    back = parse_local(serialize_local(c))
    assert back.witness == c.witness and not back.valid


def test_local_malformed():
    with pytest.raises(CertificateError) as e:
        parse_local("nonsense\n")
    assert e.value.line == 1
    with pytest.raises(CertificateError) as e:
        parse_local(LOCAL_HEADER + "\nr0: 1/7\nno separator here\n")
    assert e.value.line == 3
    with pytest.raises(CertificateError):
        parse_local(LOCAL_HEADER + "\nr0: 1/7\n")


def test_global_roundtrip(global_run):
    cert = GlobalCertificate.from_result(global_run)
    text = serialize_global(cert)
    back = parse_global(text)
    assert back == cert
    assert serialize_global(back) == text
    assert back.search_config() == global_run.cfg
    assert "seconds:" in serialize_global(cert, include_timing=True)


def test_global_malformed():
    with pytest.raises(CertificateError) as e:
        parse_global(GLOBAL_HEADER + "\nvalid: true\nroot d1\nnode 0 1 2 3\n")
    assert e.value.line == 4
    with pytest.raises(CertificateError):
        parse_global(GLOBAL_HEADER + "\nroot d1\n")
    with pytest.raises(CertificateError) as e:
        parse_global(GLOBAL_HEADER + "\nbogus record\n")
    assert e.value.line == 2


def test_check_detects_tampering(global_run):
    cert = GlobalCertificate.from_result(global_run)
    rec = cert.records[0]
    bad = replace(cert, records=[replace(rec, children="d4096")] + cert.records[1:])
    res = check_global(bad, max_problems=1)
    assert not res.ok and "child verdicts differ" in res.problems[0]
    res = check_global(replace(cert, root="d806400"), max_problems=1)
    assert not res.ok and res.problems[0] == "root verdicts differ"


def test_rle_counts_of_root(global_run):
    counts = rle_counts(global_run.root_codes)
    assert sum(counts.values()) == 806_400
