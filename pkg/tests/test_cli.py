import json
from dataclasses import replace

import pytest

from hemisum import cli
from hemisum.certificate import GlobalCertificate, serialize_global


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_local_ok(tmp_path, capsys):
    path = tmp_path / "local.cert"
    code, out, _ = run(["verify-local", "--samples", "100", "-o", str(path)], capsys)
    assert code == 0 and "local certificate valid" in out
    assert path.read_text().startswith("hemisum-local-certificate v1")


def test_verify_local_control_r0_one(capsys):
    code, out, err = run(["verify-local", "--r0", "1", "--samples", "3000"], capsys)
    assert code == 1
    assert "witness: J > 0" in out and "control" in err


def test_verify_local_usage_errors(capsys):
    with pytest.raises(SystemExit) as e:
        cli.main(["verify-local", "--r0", "0.142857"])
    assert e.value.code == 2
    assert run(["verify-local", "--r0", "0"], capsys)[0] == 2
    with pytest.raises(SystemExit) as e:
        cli.main(["verify-local", "--majorizer", "nope"])
    assert e.value.code == 2


def test_rational_parser():
    assert cli.rational("1/7").denominator == 7
    for bad in ("0.5", "1e-3", "abc"):
        with pytest.raises(Exception):
            cli.rational(bad)


class Stop(Exception):
    pass


def test_config_file_precedence(tmp_path, monkeypatch):
    seen = {}

    def fake_run(cfg, progress=False):
        seen["cfg"] = cfg
        raise Stop

    monkeypatch.setattr(cli, "run_global", fake_run)
    conf = tmp_path / "c.json"
    conf.write_text(json.dumps({"mode": "paper", "precision": 20, "exclude_neighborhood": "off",
                                "max_edge": "1/128"}))
    with pytest.raises(Stop):
        cli.main(["verify-global", "--config", str(conf), "--precision", "25"])
    cfg = seen["cfg"]
    assert cfg.use_bound_filter and cfg.sqrt_precision == 25
    assert not cfg.exclude_neighborhood and cfg.canonical_labels
    assert str(cfg.dfs_max_edge) == "1/128"


def test_config_file_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["verify-global", "--config", str(bad)], capsys)[0] == 2
    bad.write_text(json.dumps({"mode": "fast"}))
    assert run(["verify-global", "--config", str(bad)], capsys)[0] == 2


def test_verify_global_exit_codes(global_run, tmp_path, monkeypatch, capsys):
    monkeypatch.setattr(cli, "run_global", lambda cfg, progress=False: global_run)
    out_path = tmp_path / "g.cert"
    code, out, _ = run(["verify-global", "-o", str(out_path)], capsys)
    assert code == 0 and "global: failures: 0 [exact-match]" in out
    broken = replace(global_run, failures=[(3, (1023, 512, 0, 512, 512, 1023))])
    monkeypatch.setattr(cli, "run_global", lambda cfg, progress=False: broken)
    code, out, _ = run(["verify-global"], capsys)
    assert code == 1 and "failure witnesses" in out and "distance to square" in out


def test_report_command(global_run, local_cert, tmp_path, capsys):
    from hemisum.certificate import serialize_local
    lp, gp, tp = tmp_path / "l.cert", tmp_path / "g.cert", tmp_path / "t.tsv"
    lp.write_text(serialize_local(local_cert))
    gp.write_text(serialize_global(GlobalCertificate.from_result(global_run)))
    code, out, _ = run(["report", str(lp), str(gp), "--table", str(tp)], capsys)
    assert code == 0 and "local: 1288 monomials [exact-match]" in out
    assert tp.read_text().startswith("name\tours")
    junk = tmp_path / "junk.cert"
    junk.write_text("garbage\n")
    code, _, err = run(["report", str(junk)], capsys)
    assert code == 2 and "line 1" in err
    assert run(["report", str(tmp_path / "missing")], capsys)[0] == 2


def test_oracle_command(capsys):
    code, out, _ = run(["oracle", "--restarts", "3"], capsys)
    assert code == 0 and "best value" in out
