"""End-to-end CLI runs compared byte-for-byte against golden transcripts."""

import os
import subprocess
import sys
from pathlib import Path

import pytest

PKG_ROOT = Path(__file__).resolve().parent.parent
GOLDEN = PKG_ROOT / "tests" / "golden"
SPECS = PKG_ROOT / "specs"


def run_cli(*args):
    env = dict(os.environ)
    env["PYTHONPATH"] = str(PKG_ROOT / "src") + os.pathsep + env.get("PYTHONPATH", "")
    return subprocess.run(
        [sys.executable, "-m", "moranlab", *args],
        capture_output=True,
        text=True,
        cwd=PKG_ROOT,
        env=env,
    )


GOLDEN_CASES = [
    ("pressure_zero_cantor.json", 0,
     ["pressure", "specs/cantor.json", "--zero", "--depth", "16"]),
    ("pressure_curve_cantor.csv", 0,
     ["pressure", "specs/cantor.json", "--t-grid", "0.4:0.8:5", "--depth", "10"]),
    ("validate_wcmc_cantor.json", 0,
     ["validate", "specs/cantor.json", "--depth", "10"]),
    ("validate_cmc_nsq.json", 1,
     ["validate", "specs/nsq.json", "--axioms", "cmc", "--depth", "12"]),
    ("validate_cmsc_cantor.json", 0,
     ["validate", "specs/cantor.json", "--axioms", "cmsc", "--t", "0.4",
      "--depth", "10", "--subtree", "greedy", "-C", "4"]),
    ("generate_cantor_d3.csv", 0,
     ["generate", "specs/cantor.json", "--depth", "3"]),
    ("generate_selfaffine_d2.svg", 0,
     ["generate", "specs/selfaffine.json", "--depth", "2", "--out", "svg"]),
    ("generate_comb_d2.ppm", 0,
     ["generate", "specs/comb.json", "--depth", "2", "--out", "ppm",
      "--pixels", "16"]),
    ("dimension_cantor.json", 0,
     ["dimension", "specs/cantor.json", "--depth", "10", "--scales", "4"]),
    ("probe_epsilon_cantor.json", 0,
     ["probe", "specs/cantor.json", "--probe", "epsilon", "--x", "0.5",
      "--depth", "6"]),
    ("probe_osc_comb.json", 0,
     ["probe", "specs/comb.json", "--probe", "osc-collisions", "--depth", "8"]),
    ("probe_ball_cantor.json", 0,
     ["probe", "specs/cantor.json", "--probe", "ball", "--r", "0.33",
      "--x", "0.0", "--depth", "6"]),
    ("probe_clustering_cantor.json", 0,
     ["probe", "specs/cantor.json", "--probe", "clustering", "--depth", "6",
      "--x-samples", "50", "--scales", "0.2,0.1"]),
    ("beta_heisenberg.json", 0,
     ["beta", "--layers", "2,1", "--alpha", "2.5"]),
]


@pytest.mark.parametrize(
    "golden,code,args", GOLDEN_CASES, ids=[c[0] for c in GOLDEN_CASES]
)
def test_output_matches_golden(golden, code, args):
    result = run_cli(*args)
    assert result.returncode == code, result.stderr
    assert result.stdout == (GOLDEN / golden).read_text()


@pytest.mark.parametrize(
    "args",
    [
        ["pressure", "specs/cantor.json", "--zero", "--depth", "12"],
        ["generate", "specs/comb.json", "--depth", "3"],
        ["probe", "specs/comb.json", "--probe", "osc-collisions", "--depth", "7"],
    ],
    ids=["pressure", "generate", "collisions"],
)
def test_repeat_runs_are_byte_identical(args):
    first = run_cli(*args)
    second = run_cli(*args)
    assert first.returncode == second.returncode == 0
    assert first.stdout == second.stdout


# -- exit code contract ---------------------------------------------------------


USAGE_ERRORS = [
    ["pressure", "specs/missing.json", "--zero"],
    ["pressure", "specs/cantor.json", "--t-grid", "1:2"],
    ["validate", "specs/cantor.json", "--axioms", "cmsc", "--depth", "10"],
    ["generate", "specs/symbolifs.json", "--out", "svg", "--depth", "3"],
    ["probe", "specs/cantor.json", "--probe", "osc-collisions", "--depth", "6"],
]

DOMAIN_ERRORS = [
    ["dimension", "specs/cantor.json", "--depth", "2", "--scales", "6"],
    ["probe", "specs/cantor.json", "--probe", "epsilon", "--x", "0.5",
     "--depth", "0"],
    ["probe", "specs/cantor.json", "--probe", "osc-collisions", "--r", "0.4",
     "--depth", "6"],
    ["beta", "--layers", "2,1", "--alpha", "9"],
]


@pytest.mark.parametrize("args", USAGE_ERRORS, ids=lambda a: " ".join(a[:3]))
def test_spec_and_usage_failures_exit_2(args):
    result = run_cli(*args)
    assert result.returncode == 2
    assert result.stderr.startswith("error:")
    assert result.stdout == ""


@pytest.mark.parametrize("args", DOMAIN_ERRORS, ids=lambda a: " ".join(a[:3]))
def test_domain_failures_exit_3(args):
    result = run_cli(*args)
    assert result.returncode == 3
    assert result.stderr.startswith("error:")
    assert result.stdout == ""


def test_unknown_subcommand_exits_2():
    result = run_cli("frobnicate", "specs/cantor.json")
    assert result.returncode == 2


def test_help_exits_0():
    result = run_cli("--help")
    assert result.returncode == 0
    for name in ("pressure", "validate", "generate", "dimension", "probe", "beta"):
        assert name in result.stdout
