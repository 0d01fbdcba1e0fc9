import json
from importlib.resources import files

import numpy as np
import pytest

from pbitsim.cli import EXIT_FORMAT, EXIT_GUARD, EXIT_OK, EXIT_USAGE, bench, main, read_pgm, write_pgm
from pbitsim.core import PBitNetwork
from pbitsim.quantum import QuantumHamiltonian, fig7_hamiltonian

UF20 = str(files("pbitsim.data") / "uf20-91-standin.cnf")


@pytest.fixture
def work(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    (tmp_path / "part.json").write_text(json.dumps({"values": [4, 5, 6, 7, 8]}))
    (tmp_path / "knap.json").write_text(json.dumps({"values": [6, 10, 12], "weights": [1, 2, 3], "capacity": 5}))
    QuantumHamiltonian.chain(4, Jz=1.0, gamma=1.0).save(tmp_path / "tfim.json")
    fig7_hamiltonian(4).save(tmp_path / "fig7.json")
    QuantumHamiltonian.chain(3, Jz=1.0, Jxy=-0.5, gamma=1.0).save(tmp_path / "bad_sign.json")
    return tmp_path


def run(*argv):
    return main([str(a) for a in argv])


def report(path):
    return json.loads(open(path).read())


def test_encode_sparsify_solve(work):
    assert run("encode", "partition", "part.json", "p.json", "--quiet") == EXIT_OK
    assert run("solve", "--problem", "p.json", "--restarts", 5, "--report", "r.json", "--quiet") == EXIT_OK
    rep = report("r.json")
    assert rep["schedule"] == {"steps": 41, "total_sweeps": 410}
    assert rep["success_probability"] >= 0.8 and rep["best_objective"]["residue"] == 0
    assert "flips_per_second" in rep["timing"]
    trace = (work / "r.trace.csv").read_text().splitlines()
    assert trace[0] == "step,beta,sweeps,energy,best_energy" and len(trace) == 42
    assert run("encode", "maxsat", UF20, "s.json", "--max-degree", 4, "--report", "e.json", "--quiet") == EXIT_OK
    rep = report("e.json")
    assert rep["max_degree"] == 4 and rep["density"] < 0.015 and rep["pbits"] > rep["pbits_before_sparsify"]
    assert run("encode", "knapsack", "knap.json", "k.json", "--quiet") == EXIT_OK
    assert run("sparsify", "k.json", "ks.json", "--plan", "plan.json", "--report", "sp.json", "--quiet") == EXIT_OK
    assert report("sp.json")["max_degree_after"] <= 4 and (work / "plan.json").exists()


def test_sparsify_plain_network(work):
    gen = np.random.default_rng(0)
    W = np.triu(gen.uniform(-1, 1, (8, 8)), 1)
    PBitNetwork.from_dense(W + W.T, np.zeros(8)).save(work / "n.json")
    assert run("sparsify", "n.json", "ns.json", "--max-degree", 3, "--report", "s.json", "--quiet") == EXIT_OK
    assert PBitNetwork.load(work / "ns.json").degree().max() <= 3


def test_exit_codes(work):
    assert run("solve") == EXIT_USAGE
    assert run("nonsense") == EXIT_USAGE
    assert run("solve", "--problem", "missing.json") == EXIT_USAGE
    assert run("solve", "--problem", "part.json", "--schedule", "fast", "--quiet") in (EXIT_USAGE, EXIT_FORMAT)
    (work / "broken.json").write_text("{not json")
    assert run("solve", "--problem", "broken.json") == EXIT_FORMAT
    (work / "bad.cnf").write_text("p cnf 2 1\n1 5 0\n")
    assert run("encode", "maxsat", "bad.cnf", "x.json") == EXIT_FORMAT
    assert run("vmc", "--ham", "bad_sign.json", "--iters", 2, "--quiet") == EXIT_GUARD
    assert run("trotter", "--ham", "fig7.json", "--quiet") == EXIT_USAGE
    assert run("generate", "--model", "m.json") == EXIT_USAGE


def test_config_precedence(work):
    run("encode", "partition", "part.json", "p.json", "--quiet")
    (work / "cfg.json").write_text(json.dumps({"restarts": 3, "seed": 5, "schedule": "0:1:0.5x2"}))
    assert run("solve", "--problem", "p.json", "--config", "cfg.json", "--restarts", 2,
               "--report", "r.json", "--quiet") == EXIT_OK
    rep = report("r.json")
    assert rep["restarts"] == 2 and rep["seed"] == 5 and rep["schedule"]["steps"] == 3
    (work / "bad_cfg.json").write_text(json.dumps({"restartz": 3}))
    assert run("solve", "--problem", "p.json", "--config", "bad_cfg.json") == EXIT_USAGE


def _twice(work, argv, outputs):
    texts = []
    for k in range(2):
        assert run(*argv, "--no-timing", "--quiet") == EXIT_OK
        texts.append([(work / o).read_bytes() for o in outputs])
    return texts[0] == texts[1]


def test_reports_byte_identical(work):
    run("encode", "knapsack", "knap.json", "k.json", "--quiet")
    assert _twice(work, ["solve", "--problem", "k.json", "--restarts", 3, "--seed", 7, "--report", "r.json"],
                  ["r.json", "r.trace.csv"])
    assert "timing" not in report("r.json")
    assert _twice(work, ["train", "--model", "m.json", "--data", "builtin:bars", "--hidden", 16, "--epochs", 2,
                         "--out", "m2.json", "--report", "t.json"], ["t.json", "m2.json"])
    assert _twice(work, ["generate", "--model", "m2.json", "--label", 1, "--out", "g.pgm", "--report", "g.json"],
                  ["g.json", "g.pgm"])
    assert _twice(work, ["classify", "--model", "m2.json", "--image", "g.pgm", "--sweeps", 50, "--report", "c.json"],
                  ["c.json"])
    assert _twice(work, ["trotter", "--ham", "tfim.json", "--replicas", 8, "--sweeps", 200, "--chains", 4,
                         "--report", "q.json"], ["q.json"])
    assert _twice(work, ["vmc", "--ham", "fig7.json", "--hidden", 4, "--iters", 5, "--samples", 20,
                         "--report", "v.csv", "--summary", "v.json"], ["v.csv", "v.json"])
    assert _twice(work, ["embed", "--visible", 12, "--hidden", 48, "--map", "map.json", "--report", "em.json"],
                  ["map.json", "em.json"])


def test_train_generate_classify_round_trip(work):
    assert run("train", "--model", "m.json", "--data", "builtin:digits", "--per-class", 60, "--epochs", 30,
               "--lr", 0.05, "--report", "t.json", "--quiet") == EXIT_OK
    assert report("t.json")["train_accuracy"] >= 0.8
    assert run("generate", "--model", "m.json", "--label", 2, "--out", "two.pgm", "--quiet") == EXIT_OK
    assert read_pgm("two.pgm").shape == (8, 8)
    assert run("classify", "--model", "m.json", "--image", "two.pgm", "--report", "c.json", "--quiet") == EXIT_OK
    assert report("c.json")["prediction"] == 2
    assert run("generate", "--model", "m.json", "--label", 7, "--out", "x.pgm") == EXIT_USAGE


def test_quantum_subcommands(work):
    assert run("trotter", "--ham", "tfim.json", "--beta", 1.0, "--replicas", 16, "--sweeps", 2000, "--chains", 16,
               "--report", "q.json", "--quiet") == EXIT_OK
    rep = report("q.json")
    assert rep["pbits"] == 64 and rep["energy_relative_error"] < 0.05
    assert run("vmc", "--ham", "fig7.json", "--hidden", 8, "--iters", 300, "--samples", 200, "--report", "v.csv",
               "--summary", "v.json", "--model-out", "rbm.json", "--quiet") == EXIT_OK
    assert report("v.json")["relative_error"] < 0.02
    assert (work / "v.csv").read_text().startswith("iteration,energy,energy_se,exact_energy")
    assert run("embed", "--rbm", "rbm.json", "--cell", 2, "--out", "phys.json", "--report", "e.json", "--quiet") == 0
    rep = report("e.json")
    assert rep["n_visible"] == 4 and rep["n_hidden"] == 8 and rep["grid"] == [2, 4]
    assert PBitNetwork.load(work / "phys.json").n == rep["physical_pbits"]
    assert run("embed", "--visible", 2) == EXIT_USAGE


def test_plots_written(work):
    run("encode", "partition", "part.json", "p.json", "--quiet")
    assert run("solve", "--problem", "p.json", "--restarts", 2, "--report", "r.json", "--plot", "--quiet") == 0
    assert (work / "r.anneal.png").stat().st_size > 1000
    assert run("embed", "--visible", 4, "--hidden", 8, "--report", "e.json", "--plot", "--quiet") == 0
    assert (work / "e.chimera.png").exists()
    assert run("vmc", "--ham", "fig7.json", "--hidden", 4, "--iters", 10, "--samples", 20, "--report", "v.csv",
               "--plot", "--quiet") == 0
    assert (work / "v.energy.png").exists()


def test_pgm_round_trip(tmp_path):
    img = np.where(np.random.default_rng(0).random((5, 7)) < 0.5, -1, 1)
    write_pgm(tmp_path / "a.pgm", img, img.shape)
    assert (tmp_path / "a.pgm").read_bytes().startswith(b"P5")
    assert np.array_equal(read_pgm(tmp_path / "a.pgm"), img)


def test_bench(work, capsys):
    rows = bench(PBitNetwork.from_edges(1000, []), ["colored", "serial"], duration=0.05)
    col = rows[0]
    assert col["colors"] == 1 and col["flips_per_sweep"] == 1000 and col["flips_per_step"] == 1000
    assert rows[1]["flips_per_step"] == 1.0
    assert run("bench", "--sizes", "200,400", "--duration", 0.02, "--csv", "b.csv", "--quiet") == EXIT_OK
    lines = (work / "b.csv").read_text().splitlines()
    assert lines[0].startswith("sampler,n,colors") and len(lines) == 5
    assert run("bench", "--sizes", "ten") == EXIT_USAGE
