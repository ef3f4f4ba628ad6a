import json
import os
import subprocess
import sys

PKG_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def run_cli(*args, env_extra=None):
    env = dict(os.environ)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [sys.executable, "-m", "sigcurve.cli", *args],
        capture_output=True,
        text=True,
        env=env,
        cwd=PKG_ROOT,
        timeout=300,
    )


def test_signature_ellipse_text():
    r = run_cli("signature", "--curve", "x^2+x*y+y^2-1", "--group", "SE2")
    assert r.returncode == 0
    assert (
        r.stdout.strip()
        == "S = 2916*k1^6 + 972*k1^4*k2^2 + 108*k1^2*k2^4 + 4*k2^6"
        " - 13608*k1^5 + 1944*k1^3*k2^2 + 2187*k1^4"
    )


def test_signature_point_constant():
    r = run_cli("signature", "--curve", "x^2+y^2-1", "--group", "SE2")
    assert r.returncode == 0
    assert r.stdout.strip() == "point signature: 1"


def test_degree_json_schema():
    r = run_cli(
        "--format",
        "json",
        "degree",
        "--curve",
        "x^2*y+y^2+y+64/121",
        "--group",
        "A2",
        "--n",
        "2",
    )
    assert r.returncode == 0
    payload = json.loads(r.stdout)
    schema = json.load(open(os.path.join(PKG_ROOT, "docs", "schema.json")))
    required = schema["commands"]["degree"]["required"]
    assert all(k in payload for k in required)
    assert payload["deg_S_predicted"] == 24
    assert payload["schema_version"] == schema["version"]


def test_theta_command():
    r = run_cli("theta", "--curve", "x^2+y^2-1", "--index", "2")
    assert r.returncode == 0
    assert "d_i = 3" in r.stdout and "tau_i = 2" in r.stdout


def test_invariants_command():
    r = run_cli("invariants", "--curve", "x^2+x*y+y^2-1", "--group", "SE2")
    assert r.returncode == 0
    # K1 numerator 36(x^2+xy+y^2)^2 and denominator (5x^2+8xy+5y^2)^3, expanded
    assert "36*x^4" in r.stdout and "125*x^6" in r.stdout and "1712*x^3*y^3" in r.stdout


def test_symmetry_command():
    r = run_cli("symmetry", "--curve", "y^2-x^3", "--group", "SE2")
    assert r.returncode == 0
    assert r.stdout.strip() == "symmetry order: 1"


def test_equiv_command():
    r = run_cli(
        "equiv",
        "--curve",
        "x^2+x*y+y^2-1",
        "--curve2",
        "x^2+y^2-1",
        "--group",
        "SE2",
    )
    assert r.returncode == 0
    assert "False" in r.stdout and "constant-vs-curve" in r.stdout


def test_samples_csv():
    r = run_cli(
        "samples", "--curve", "x^2+y^2-1", "--group", "SE2", "--count", "5", "--seed", "1"
    )
    assert r.returncode == 0
    lines = r.stdout.strip().splitlines()
    assert lines[0] == "x,y,k1,k2"
    assert len(lines) == 6
    for row in lines[1:]:
        vals = [float(v) for v in row.split(",")]
        assert abs(vals[0] ** 2 + vals[1] ** 2 - 1) < 1e-9
        assert abs(vals[2] - 1) < 1e-9  # unit circle curvature constant


def test_fermat_symmetry_command():
    r = run_cli("fermat", "--d", "4", "--group", "A2", "--what", "symmetry")
    assert r.returncode == 0
    assert "n = 32" in r.stdout


def test_fermat_signature_json():
    r = run_cli(
        "--format", "json", "fermat", "--d", "3", "--group", "A2", "--what", "signature"
    )
    assert r.returncode == 0
    payload = json.loads(r.stdout)
    assert payload["degree"] == 2
    assert payload["verified"] is True
    assert payload["verification"] in ("elimination", "exact sample-fit")


def test_exit_code_parse_error():
    r = run_cli("signature", "--curve", "x^2 + $", "--group", "SE2")
    assert r.returncode == 4
    assert "parse error" in r.stderr
    assert r.stdout == ""


def test_exit_code_exceptional():
    r = run_cli("signature", "--curve", "x+y-1", "--group", "SE2")
    assert r.returncode == 2
    assert "exceptional" in r.stderr


def test_exit_code_budget_env():
    r = run_cli(
        "signature",
        "--curve",
        "x^2+x*y+y^2-1",
        "--group",
        "SE2",
        env_extra={"SIGCURVE_BUDGET": "2,400"},
    )
    assert r.returncode == 3
    assert "budget" in r.stderr.lower()


def test_out_file(tmp_path):
    out = tmp_path / "sig.txt"
    r = run_cli(
        "--out", str(out), "signature", "--curve", "x^2+x*y+y^2-1", "--group", "SE2"
    )
    assert r.returncode == 0
    assert r.stdout == ""
    assert out.read_text().startswith("S = 2916*k1^6")
