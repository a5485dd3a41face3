import json
import os
import subprocess
import sys


def run_cli(tmp_path, command, payload, *extra, name="input.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload), encoding="utf-8")
    env = dict(os.environ)
    proc = subprocess.run(
        [sys.executable, "-m", "haarlab.cli", command, "--input", str(path), *extra],
        capture_output=True,
        text=True,
        env=env,
    )
    try:
        report = json.loads(proc.stdout)
    except json.JSONDecodeError:
        report = None
    return proc, report


Z4_COSET = {
    "group": {"family": "cyclic", "params": {"n": 4}},
    "topology": {"normal_subgroup": [0, 2]},
}


def test_verify_haar_pass(tmp_path):
    payload = dict(Z4_COSET, measure={"atom_masses": ["1/1", "1/1"]})
    proc, report = run_cli(tmp_path, "verify-haar", payload)
    assert proc.returncode == 0
    assert report["passed"] is True
    assert report["results"]["is_haar"] is True
    assert report["schema_version"] == "1"

def test_verify_haar_fail_with_witness(tmp_path):
    payload = dict(Z4_COSET, measure={"atom_masses": ["1/1", "2/1"]})
    proc, report = run_cli(tmp_path, "verify-haar", payload)
    assert proc.returncode == 1
    assert report["passed"] is False
    w = report["results"]["witnesses"][0]
    assert w["set"] == [0, 2]
    assert w["element"] == 1

def test_counterexample_zero_mass(tmp_path):
    proc, report = run_cli(tmp_path, "counterexample", {"c": "0/1"})
    assert proc.returncode == 0
    assert report["results"]["verdict"] == "NonzeroViolated"
    assert report["results"]["verified"] is True

def test_counterexample_probe_bound_flag(tmp_path):
    proc, report = run_cli(
        tmp_path, "counterexample", {"c": "1/1"}, "--probe-bound", "10/1"
    )
    assert proc.returncode == 0
    assert report["results"]["verdict"] == "FinitenessViolated"
    assert report["results"]["translate_count"] == 11

def test_enumerate_z4(tmp_path):
    proc, report = run_cli(
        tmp_path, "enumerate", {"group": {"family": "cyclic", "params": {"n": 4}}}
    )
    assert proc.returncode == 0
    topos = report["results"]["topologies"]
    assert len(topos) == 3
    assert all(t["haar_dimension"] == 1 for t in topos)

def test_enumerate_custom_table(tmp_path):
    payload = {"group": {"order": 2, "table": [[0, 1], [1, 0]]}}
    proc, report = run_cli(tmp_path, "enumerate", payload)
    assert proc.returncode == 0
    assert len(report["results"]["topologies"]) == 2

def test_construct_examples(tmp_path):
    payload = dict(Z4_COSET, k0=[0, 2])
    proc, report = run_cli(tmp_path, "construct", payload)
    assert proc.returncode == 0
    assert report["results"]["measure"] == ["1/1", "1/1"]
    assert report["results"]["canonical_scalar"] == "1/1"
    payload = dict(Z4_COSET, k0=[0, 1, 2, 3])
    proc, report = run_cli(tmp_path, "construct", payload)
    assert proc.returncode == 0
    assert report["results"]["canonical_scalar"] == "1/2"

def test_quotient(tmp_path):
    proc, report = run_cli(tmp_path, "quotient", dict(Z4_COSET))
    assert proc.returncode == 0
    r = report["results"]
    assert r["quotient_order"] == 2
    assert r["projection"] == [0, 1, 0, 1]
    assert r["pullback_roundtrip_ok"] is True

def test_fubini(tmp_path):
    payload = {
        "group1": dict(Z4_COSET),
        "group2": {
            "group": {"family": "cyclic", "params": {"n": 2}},
            "topology": {"normal_subgroup": [0]},
        },
    }
    proc, report = run_cli(tmp_path, "fubini", payload)
    assert proc.returncode == 0
    assert all(c["equal"] for c in report["results"]["checks"])

def test_plane(tmp_path):
    payload = {
        "intervals": [{"lo": "0/1", "hi": "1/1", "lo_closed": False, "hi_closed": False}],
        "shift": ["3/1", "-7/1"],
        "eps": "1/10",
    }
    proc, report = run_cli(tmp_path, "plane", payload)
    assert proc.returncode == 0
    r = report["results"]
    assert r["mass"] == "1/1"
    assert r["shifted_mass"] == "1/1"
    assert r["inner"] == [
        {"lo": "1/20", "hi": "19/20", "lo_closed": True, "hi_closed": True}
    ]
    assert r["outer"] == [
        {"lo": "-1/20", "hi": "21/20", "lo_closed": False, "hi_closed": False}
    ]


# -- input errors -> exit 2 ---------------------------------------------------

def test_malformed_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json", encoding="utf-8")
    proc = subprocess.run(
        [sys.executable, "-m", "haarlab.cli", "verify-haar", "--input", str(path)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 2
    assert "error" in json.loads(proc.stdout)

def test_unknown_field_rejected(tmp_path):
    payload = dict(Z4_COSET, measure={"atom_masses": ["1/1", "1/1"]}, bogus=1)
    proc, report = run_cli(tmp_path, "verify-haar", payload)
    assert proc.returncode == 2
    assert "bogus" in report["error"]

def test_bad_rational(tmp_path):
    payload = dict(Z4_COSET, measure={"atom_masses": ["1/1", "one"]})
    proc, report = run_cli(tmp_path, "verify-haar", payload)
    assert proc.returncode == 2

def test_incompatible_topology(tmp_path):
    payload = {
        "group": {"family": "cyclic", "params": {"n": 4}},
        "topology": {"opens": [[], [0], [0, 1, 2, 3]]},
        "measure": {"atom_masses": ["1/1"]},
    }
    proc, report = run_cli(tmp_path, "verify-haar", payload)
    assert proc.returncode == 2
    assert "incompatible" in report["error"]

def test_order_cap(tmp_path):
    payload = {"group": {"family": "cyclic", "params": {"n": 5}}}
    proc, report = run_cli(tmp_path, "enumerate", payload, "--max-order", "4")
    assert proc.returncode == 2
    assert "cap" in report["error"]

def test_env_order_cap(tmp_path):
    path = tmp_path / "in.json"
    path.write_text(
        json.dumps({"group": {"family": "cyclic", "params": {"n": 5}}}),
        encoding="utf-8",
    )
    env = dict(os.environ, HAARLAB_MAX_ORDER="4")
    proc = subprocess.run(
        [sys.executable, "-m", "haarlab.cli", "enumerate", "--input", str(path)],
        capture_output=True,
        text=True,
        env=env,
    )
    assert proc.returncode == 2

def test_construct_bad_k0(tmp_path):
    payload = dict(Z4_COSET, k0=[0])
    proc, report = run_cli(tmp_path, "construct", payload)
    assert proc.returncode == 2


# -- determinism --------------------------------------------------------------

def test_byte_identical_reports(tmp_path):
    payload = dict(Z4_COSET, measure={"atom_masses": ["1/1", "1/1"]})
    path = tmp_path / "input.json"
    path.write_text(json.dumps(payload), encoding="utf-8")
    outputs = []
    for seed in ("0", "1", "12345"):
        out = tmp_path / f"out-{seed}.json"
        env = dict(os.environ, PYTHONHASHSEED=seed)
        proc = subprocess.run(
            [
                sys.executable, "-m", "haarlab.cli", "verify-haar",
                "--input", str(path), "--output", str(out),
            ],
            capture_output=True,
            env=env,
        )
        assert proc.returncode == 0
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1] == outputs[2]
    assert outputs[0].endswith(b"\n")
    assert b"\r" not in outputs[0]
