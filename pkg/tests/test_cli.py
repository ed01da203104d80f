"""Command line interface: output, exit codes, cache and manifests."""

import io
import json
import os
import subprocess
import sys

import pytest

from vassiliev.cli import main
from vassiliev.invariants import InvariantSpec, vassiliev_eval
from vassiliev.knots import SingularKnotDiagram
from vassiliev.quotients import build_quotient

from oracles import DIM_AW

TREFOIL = "O1+ U2+ O3+ U1+ O2+ U3+"


def run_cli(argv, tmp_path, monkeypatch):
    monkeypatch.setenv("VASSILIEV_CACHE_DIR", str(tmp_path / "cache"))
    out = io.StringIO()
    code = main(argv, out=out)
    return code, out.getvalue()


def test_dims_matches_library(tmp_path, monkeypatch):
    code, text = run_cli(["dims", "--flavor", "aw", "--max-degree", "3"],
                         tmp_path, monkeypatch)
    assert code == 0
    lines = text.strip().split("\n")
    assert lines[0] == "degree\tdim"
    dims = [int(l.split("\t")[1]) for l in lines[1:]]
    assert dims == DIM_AW[:4]
    assert dims[2] == dims[3] == 0


def test_dims_library_agreement_plain(tmp_path, monkeypatch):
    code, text = run_cli(["dims", "--flavor", "a", "--max-degree", "4"],
                         tmp_path, monkeypatch)
    assert code == 0
    dims = [int(l.split("\t")[1]) for l in text.strip().split("\n")[1:]]
    assert dims == [build_quotient(n, "A").dim for n in range(5)]


def test_axioms_exit_code_and_report(tmp_path, monkeypatch):
    code, text = run_cli(["axioms", "--max-degree", "3"],
                         tmp_path, monkeypatch)
    assert code == 0
    report = json.loads(text)
    assert all(v for v in report.values() if isinstance(v, bool))


def test_eval_v2_trefoil(tmp_path, monkeypatch):
    code, text = run_cli(["eval", "--invariant", "v2", "--knot", TREFOIL],
                         tmp_path, monkeypatch)
    assert code == 0
    assert text == "1\n"


def test_eval_conway_polynomial(tmp_path, monkeypatch):
    code, text = run_cli(["eval", "--invariant", "conway", "--knot", ""],
                         tmp_path, monkeypatch)
    assert code == 0
    assert text == "1\n"
    code, text = run_cli(
        ["eval", "--invariant", "conway",
         "--knot", "O1+ U2+ O3- U4- O2+ U1+ O4- U3-"],
        tmp_path, monkeypatch)
    assert code == 0
    assert text == "1 - z^2\n"


def test_eval_singular_skein_difference(tmp_path, monkeypatch):
    # on a 1-singular knot the CLI value is v(K+) - v(K-)
    k = SingularKnotDiagram.parse(TREFOIL)
    # make the first crossing singular by hand
    verts = list(k.verts)
    verts[0] = ("s", verts[0][1], 1)
    sing = SingularKnotDiagram(k.seq, verts, k.base)
    code, text = run_cli(["eval", "--invariant", "v2",
                          "--knot", sing.to_gauss_code()],
                         tmp_path, monkeypatch)
    assert code == 0
    spec = InvariantSpec.v2_spec()
    expect = (vassiliev_eval(spec, sing.resolve(1, 1))
              - vassiliev_eval(spec, sing.resolve(1, -1)))
    assert text.strip() == str(expect)


def test_eval_reads_knot_from_file(tmp_path, monkeypatch):
    path = tmp_path / "knot.txt"
    path.write_text(TREFOIL + "\n")
    code, text = run_cli(["eval", "--invariant", "c2", "--knot", str(path)],
                         tmp_path, monkeypatch)
    assert code == 0
    assert text == "1\n"


def test_certify_json(tmp_path, monkeypatch):
    code, text = run_cli(["certify", "--family", "v2power", "--n", "1"],
                         tmp_path, monkeypatch)
    assert code == 0
    certs = json.loads(text)
    assert len(certs) == 1
    cert = certs[0]
    assert cert["nontrivial"] and cert["boundary_zero"]
    assert cert["value"] == "1/1"
    assert all(p["tier"] in ("canonical", "move-path")
               for p in cert["pairs"])


def test_certify_yasuhara_single_diagram(tmp_path, monkeypatch):
    code, text = run_cli(["certify", "--family", "yasuhara", "--n", "1",
                          "--diagram", "0", "--pattern", "x"],
                         tmp_path, monkeypatch)
    assert code == 0
    cert = json.loads(text)[0]
    assert cert["pattern"] == ["crossed"]
    assert cert["nontrivial"]


def test_exit_code_resource_cap(tmp_path, monkeypatch):
    code, _ = run_cli(["certify", "--family", "v2power", "--n", "4"],
                      tmp_path, monkeypatch)
    assert code == 3


def test_exit_code_usage_errors(tmp_path, monkeypatch):
    code, _ = run_cli(["eval", "--invariant", "nope", "--knot", TREFOIL],
                      tmp_path, monkeypatch)
    assert code == 2
    code, _ = run_cli(["eval", "--invariant", "conway",
                       "--knot", "X1a X2a O1+ X1b X2b U1+"],
                      tmp_path, monkeypatch)
    assert code == 2
    code, _ = run_cli(["nope"], tmp_path, monkeypatch)
    assert code == 2


def test_manifest_written_and_cache_reused(tmp_path, monkeypatch):
    cache = tmp_path / "cache"
    code, first = run_cli(["dims", "--flavor", "a0", "--max-degree", "3"],
                          tmp_path, monkeypatch)
    assert code == 0
    manifests = list((cache / "manifests").iterdir())
    objects = list((cache / "obj").iterdir())
    assert manifests and objects
    # rerun: cached objects are reused (no new files), output identical,
    # and the manifest digest (same content) lands on the same path
    code, second = run_cli(["dims", "--flavor", "a0", "--max-degree", "3"],
                           tmp_path, monkeypatch)
    assert code == 0
    assert second == first
    assert sorted(p.name for p in (cache / "obj").iterdir()) \
        == sorted(p.name for p in objects)
    manifest = json.loads(manifests[0].read_text())
    assert manifest["command"] == "dims"
    assert "output_sha256" in manifest and "caps" in manifest


def test_deterministic_across_hash_seeds(tmp_path):
    # byte-identical stdout under different interpreter hash seeds
    outs = []
    for seed in ("1", "2"):
        env = dict(os.environ, PYTHONHASHSEED=seed,
                   VASSILIEV_CACHE_DIR=str(tmp_path / ("c" + seed)))
        r = subprocess.run(
            [sys.executable, "-m", "vassiliev", "dims", "--flavor", "a",
             "--max-degree", "4"],
            capture_output=True, text=True, env=env, check=True)
        outs.append(r.stdout)
        r = subprocess.run(
            [sys.executable, "-m", "vassiliev", "certify", "--family",
             "v2power", "--n", "1"],
            capture_output=True, text=True, env=env, check=True)
        outs[-1] += r.stdout
    assert outs[0] == outs[1]
