import json

import numpy as np
import pytest

from defectchain.cli import main

GAMMA_QUARTER_RATIO = 2.9586751191886389


def run(args):
    return main(args)


def read_jsonl(path):
    lines = path.read_text().strip().splitlines()
    header = json.loads(lines[0])["header"]
    records = [json.loads(line) for line in lines[1:]]
    return header, records


def read_csv(path):
    lines = path.read_text().strip().splitlines()
    header = json.loads(lines[0][2:])
    cols = lines[1].split(",")
    rows = [dict(zip(cols, line.split(","))) for line in lines[2:]]
    return header, rows


def test_verify_default_xxx_all_pass(tmp_path):
    out = tmp_path / "report.jsonl"
    code = run(["verify", "--regime", "xxx", "--out", str(out)])
    assert code == 0
    header, records = read_jsonl(out)
    assert header["regime"] == "xxx"
    assert header["seed"] == 7
    assert len(records) >= 25
    assert all(r["pass"] for r in records)


def test_verify_zero_tolerance_fails_everything(tmp_path):
    out = tmp_path / "report.jsonl"
    code = run(["verify", "--regime", "xxx", "--tol", "0", "--out", str(out)])
    assert code == 1
    _, records = read_jsonl(out)
    assert records and not any(r["pass"] for r in records)


def test_verify_critical_includes_breather_record(tmp_path):
    out = tmp_path / "report.jsonl"
    code = run(["verify", "--regime", "critical", "--mu", "0.7",
                "--out", str(out)])
    assert code == 0
    _, records = read_jsonl(out)
    names = {r["name"] for r in records}
    assert "breather-crossing" in names


@pytest.mark.parametrize("args", [
    ["--regime", "noncritical", "--eta", "0.5"],
    ["--regime", "critical", "--mu", "0.7"],
], ids=["nc", "crit"])
def test_verify_deterministic_output(tmp_path, args):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    run(["verify", *args, "--out", str(a)])
    run(["verify", *args, "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_amplitude_table_xxx(tmp_path):
    out = tmp_path / "amp.csv"
    code = run(["amplitude", "--regime", "xxx", "--grid=-2:2:41",
                "--out", str(out)])
    assert code == 0
    header, rows = read_csv(out)
    assert len(rows) == 41
    assert all(float(r["route_discrepancy"]) < 1e-6 for r in rows)


def test_amplitude_single_point_value(tmp_path):
    out = tmp_path / "amp.csv"
    run(["amplitude", "--regime", "xxx", "--grid", "0:0:1", "--out", str(out)])
    _, rows = read_csv(out)
    assert float(rows[0]["re_t_plus"]) == pytest.approx(GAMMA_QUARTER_RATIO, rel=1e-10)
    assert float(rows[0]["im_t_plus"]) == pytest.approx(0.0, abs=1e-10)


def test_amplitude_breather_fusion_table(tmp_path):
    out1 = tmp_path / "b1.csv"
    out2 = tmp_path / "b2.csv"
    base = ["amplitude", "--regime", "critical", "--mu", "0.7",
            "--family", "breather", "--grid=-1:1:5"]
    run(base + ["--breather-n", "1", "--out", str(out1)])
    run(base + ["--breather-n", "2", "--out", str(out2)])
    _, rows1 = read_csv(out1)
    _, rows2 = read_csv(out2)
    # n = 2 equals the product of two shifted n = 1 evaluations; the minus
    # amplitude poles at lam_hat = 0 and that row must be marked, not fatal
    from defectchain.transmission_amplitudes import breather_amplitude
    gamma = np.pi / 0.7 - 1.0
    checked = 0
    for row in rows2:
        lh = float(row["lam_hat"])
        if row["note"].startswith("pole"):
            assert lh == pytest.approx(0.0)
            continue
        want = (breather_amplitude("+", 1, lh + 0.5j, gamma).value
                * breather_amplitude("+", 1, lh - 0.5j, gamma).value)
        got = complex(float(row["re_t_plus"]), float(row["im_t_plus"]))
        assert got == pytest.approx(want, rel=1e-12)
        checked += 1
    assert checked >= 4


def test_spectrum_reference_check_and_n0(tmp_path):
    out = tmp_path / "spec.csv"
    code = run(["spectrum", "--regime", "xxx", "--sites", "2",
                "--defect-site", "1", "--fock-dim", "4", "--theta", "0.2",
                "--grid", "0.7:0.7:1", "--out", str(out)])
    assert code == 0
    _, rows = read_csv(out)
    assert all(float(r["reference_check"]) < 1e-10 for r in rows)


def test_spectrum_commutator_column(tmp_path):
    out = tmp_path / "spec.csv"
    run(["spectrum", "--regime", "xxx", "--sites", "2", "--defect-site", "1",
         "--fock-dim", "4", "--theta", "0.2", "--grid=-0.8:0.9:3",
         "--out", str(out)])
    _, rows = read_csv(out)
    assert all(float(r["commutator_check"]) < 1e-10 for r in rows)
    assert any(float(r["lam"]) != -0.8 for r in rows)
    # defect-only chain: t(lam) = (lam - th + i N + i) + i, eigenvalues read
    # off the diagonal
    out0 = tmp_path / "spec0.csv"
    run(["spectrum", "--regime", "xxx", "--sites", "0", "--defect-site", "1",
         "--fock-dim", "4", "--theta", "0.2", "--grid", "0.7:0.7:1",
         "--out", str(out0)])
    _, rows0 = read_csv(out0)
    lam, th = 0.7, 0.2
    key = lambda z: (round(z.real, 9), round(z.imag, 9))
    want = sorted(((lam - th + 1j * (-n) + 2j) for n in range(4)), key=key)
    got = sorted((complex(float(r["re_eig"]), float(r["im_eig"])) for r in rows0),
                 key=key)
    for g, w in zip(got, want):
        assert g == pytest.approx(w, rel=1e-12)


def test_spectrum_oversize_rejected(capsys):
    code = run(["spectrum", "--regime", "xxx", "--sites", "12",
                "--fock-dim", "8", "--grid", "0:0:1"])
    assert code == 2


def test_bae_command(tmp_path):
    out = tmp_path / "bae.csv"
    code = run(["bae", "--regime", "xxx", "--theta", "0.3", "--out", str(out)])
    assert code == 0
    _, rows = read_csv(out)
    assert {r["sign"] for r in rows} == {"+", "-"}
    assert all(float(r["residual"]) < 1e-10 for r in rows)


def test_usage_errors():
    assert run(["verify", "--regime", "bogus"]) == 2
    assert run(["amplitude", "--grid", "nonsense"]) == 2
    assert run([]) == 2
    assert run(["--help"]) == 0
