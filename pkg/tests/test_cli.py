import json

from delpezzo.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_verify_type_a5(capsys):
    code, out, _ = run(capsys, "verify-type", "--type", "A5", "--a", "5")
    assert code == 0
    assert "54/5" in out
    assert "index 5" in out
    assert "certificates: pass" in out


def test_verify_type_a5_wrong_index(capsys):
    code, _, err = run(capsys, "verify-type", "--type", "A5", "--a", "6")
    assert code == 2
    assert "A5" in err


def test_verify_type_covers_both_double_point_configurations(capsys):
    code, out, _ = run(capsys, "verify-type", "--type", "II", "--a", "7")
    assert code == 0
    assert "II_1" in out and "II_2" in out


def test_verify_type_unknown(capsys):
    code, _, err = run(capsys, "verify-type", "--type", "Z9", "--a", "4")
    assert code == 2


def test_toric_family_one(capsys):
    code, out, _ = run(capsys, "toric", "--family", "I", "--a", "4")
    assert code == 0
    assert "23/2" in out
    assert "(0, -1)" in out
    assert "relative anticanonical coefficient 3" in out
    assert "index 4" in out


def test_toric_bad_family(capsys):
    code, _, _ = run(capsys, "toric", "--family", "X", "--a", "4")
    assert code == 2


def test_toric_json_error_channel(capsys, tmp_path):
    out_path = tmp_path / "r.json"
    code, _, err = run(capsys, "toric", "--family", "P113", "--a", "4", "--json", str(out_path))
    assert code == 2
    assert json.loads(err.strip()) == {"error": "family P113 is the index-3 model; pass --a 3"}


def test_classify_json_and_exit(capsys, tmp_path):
    out_path = tmp_path / "c.json"
    code, out, _ = run(capsys, "classify", "--a", "4", "--json", str(out_path))
    assert code == 0
    assert "catalog match: yes" in out
    data = json.loads(out_path.read_text())
    assert data["catalog_match"] is True
    assert data["a"] == 4
    assert len(data["survivors"]) == 14


def test_classify_threads_byte_stable(capsys):
    _, out1, _ = run(capsys, "classify", "--a", "4", "--threads", "1")
    _, out2, _ = run(capsys, "classify", "--a", "4", "--threads", "2")
    assert out1 == out2


def test_classify_low_index_warns(capsys):
    code, out, _ = run(capsys, "classify", "--a", "2")
    assert code == 0
    assert "outside the theorem hypotheses" in out


def test_dualgraph_dot(capsys, tmp_path):
    out_path = tmp_path / "g.dot"
    code, _, _ = run(capsys, "dualgraph", "--type", "B4", "--a", "4", "--format", "dot", "--out", str(out_path))
    assert code == 0
    text = out_path.read_text()
    assert text.startswith("graph dual {")
    assert 'label="sigma\\n(s=-6, c=3)"' in text


def test_dualgraph_json(capsys, tmp_path):
    out_path = tmp_path / "g.json"
    code, _, _ = run(capsys, "dualgraph", "--type", "C4", "--a", "4", "--format", "json", "--out", str(out_path))
    assert code == 0
    data = json.loads(out_path.read_text())
    names = {v["name"] for v in data["vertices"]}
    assert names == {"sigma", "l_1", "Gamma_P2_1", "Gamma_P2_2"}
    assert len(data["edges"]) == 2


def test_audit_cli(capsys):
    code, out, _ = run(capsys, "audit", "--a", "4", "--nmax", "8")
    assert code == 0
    assert "clean: yes" in out


def test_audit_with_h0(capsys):
    code, out, _ = run(capsys, "audit", "--a", "5", "--nmax", "10", "--h0", "5")
    assert code == 0
    assert "survivors outside the catalog: 0" in out


def test_index_too_small(capsys):
    code, _, err = run(capsys, "classify", "--a", "1")
    assert code == 2


def test_missing_flags_exit_two(capsys):
    assert main(["classify"]) == 2
    capsys.readouterr()


def test_verification_failure_exits_one(capsys, monkeypatch):
    # force a certificate failure to exercise the nonzero verification path
    import delpezzo.cli as cli
    from delpezzo.multiplet import CertificateReport

    monkeypatch.setattr(
        cli, "certify_ladder", lambda ladder: CertificateReport(False, ("forced",), {})
    )
    code, out, _ = run(capsys, "verify-type", "--type", "O", "--a", "4")
    assert code == 1
    assert "FAIL forced" in out


def test_threads_env_default(monkeypatch):
    from delpezzo.cli import build_parser

    monkeypatch.setenv("DELPEZZO_THREADS", "3")
    args = build_parser().parse_args(["classify", "--a", "4"])
    assert args.threads == 3
    monkeypatch.setenv("DELPEZZO_THREADS", "not-a-number")
    args = build_parser().parse_args(["classify", "--a", "4"])
    assert args.threads == 1
