"""Command-line entry point: ``pbitsim <subcommand> ...``.

Exit codes: 0 success, 2 usage error, 3 input-format error, 4 runtime guard
(size limits, sign problem).  Every random choice is derived from ``--seed``.
Reports are JSON with sorted keys; wall-clock numbers live in a ``timing``
block that ``--no-timing`` drops, leaving reports byte-identical across runs.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

EXIT_OK, EXIT_USAGE, EXIT_FORMAT, EXIT_GUARD = 0, 2, 3, 4


class UsageError(Exception):
    pass


# ------------------------------------------------------------------ helpers


def _dump(doc) -> str:
    return json.dumps(doc, indent=1, sort_keys=True, default=_jsonable) + "\n"


def _jsonable(x):
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (np.bool_,)):
        return bool(x)
    raise TypeError(f"cannot serialise {type(x).__name__}")


def _emit(args, doc: dict, timing: dict | None = None, path=None) -> None:
    if timing and not args.no_timing:
        doc = dict(doc, timing=timing)
    text = _dump(doc)
    path = path if path is not None else getattr(args, "report", None)
    if path:
        Path(path).write_text(text)
    if not args.quiet:
        sys.stdout.write(text)


def _need(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        flags = ", ".join("--" + n.replace("_", "-") for n in missing)
        raise UsageError(f"{args.command}: missing required {flags}")


def _existing(path, what="input") -> Path:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"{what} file {path} does not exist")
    return p


def _write_csv(path, rows, fields) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: r.get(k, "") for k in fields})


def _read_json(path):
    try:
        return json.loads(_existing(path).read_text())
    except json.JSONDecodeError as exc:
        from .core import NetworkFormatError

        raise NetworkFormatError(f"{path}: not JSON ({exc})") from exc


def _load_network(path):
    from .core import PBitNetwork

    doc = _read_json(path)
    if isinstance(doc, dict) and "network" in doc and "kind" in doc:
        return None, doc
    return PBitNetwork.from_dict(doc), doc


def write_pgm(path, image, shape) -> None:
    """+1 pixels black, -1 white, as a binary PGM."""
    from PIL import Image

    a = np.asarray(image).reshape(shape)
    Image.fromarray(np.where(a > 0, 0, 255).astype(np.uint8), mode="L").save(path, format="PPM")


def read_pgm(path) -> np.ndarray:
    from PIL import Image, UnidentifiedImageError

    from .core import NetworkFormatError

    try:
        img = Image.open(_existing(path, "image"))
        a = np.asarray(img.convert("L"), dtype=np.int64)
    except (UnidentifiedImageError, OSError) as exc:
        raise NetworkFormatError(f"{path}: cannot read image ({exc})") from exc
    return np.where(a < 128, 1, -1).astype(np.int8)


def _image_shape(model):
    if model.image_shape:
        return tuple(model.image_shape)
    nv = len(model.visible)
    s = int(round(math.sqrt(nv)))
    return (s, s) if s * s == nv else (1, nv)


# ------------------------------------------------------------------ subcommands


def cmd_encode(args) -> int:
    from .logic import (
        encode_knapsack,
        encode_maxsat,
        encode_number_partitioning,
        encode_number_partitioning_circuit,
        read_dimacs,
    )
    from .logic.encoders import load_problem_file
    from .sparsify import graph_density

    src = _existing(args.input)
    if args.kind == "maxsat":
        enc = encode_maxsat(read_dimacs(src), clause_weight=args.clause_weight, gate_scale=args.gate_scale)
    else:
        doc = load_problem_file(src)
        if args.kind == "partition":
            enc = (encode_number_partitioning_circuit if args.circuit else encode_number_partitioning)(doc["values"])
        else:
            if "weights" not in doc or "capacity" not in doc:
                from .core import NetworkFormatError

                raise NetworkFormatError(f"{src}: knapsack needs 'weights' and 'capacity'")
            enc = encode_knapsack(doc["values"], doc["weights"], doc["capacity"])
    dense_n = enc.network.n
    if args.max_degree:
        enc = enc.sparsified(args.max_degree)
    enc.save(args.output)
    net = enc.network
    _emit(args, {
        "kind": enc.kind,
        "pbits": net.n,
        "pbits_before_sparsify": dense_n,
        "edges": net.num_edges,
        "max_degree": int(net.degree().max()) if net.n else 0,
        "density": graph_density(net),
        "optimum": enc.meta.get("optimum"),
        "output": str(args.output),
    })
    return EXIT_OK


def cmd_sparsify(args) -> int:
    from .logic import ProblemEncoding
    from .sparsify import graph_density, sparsify

    net, doc = _load_network(args.input)
    if net is None:
        enc = ProblemEncoding.from_dict(doc).sparsified(args.max_degree, copy_strength=args.copy_strength)
        enc.save(args.output)
        snet, plan = enc.network, enc.plan
        before = ProblemEncoding.from_dict(doc).network
    else:
        snet, plan = sparsify(net, args.max_degree, copy_strength=args.copy_strength)
        snet.save(args.output)
        before = net
    if args.plan and plan is not None:
        plan.save(args.plan)
    _emit(args, {
        "pbits_before": before.n,
        "pbits_after": snet.n,
        "max_degree_before": int(before.degree().max()) if before.n else 0,
        "max_degree_after": int(snet.degree().max()) if snet.n else 0,
        "density_before": graph_density(before),
        "density_after": graph_density(snet),
        "copy_edges": len(plan.copy_edges) if plan is not None else 0,
    })
    return EXIT_OK


def cmd_solve(args) -> int:
    from .anneal import anneal, parse_schedule
    from .logic import ProblemEncoding

    _need(args, "problem")
    net, doc = _load_network(args.problem)
    enc = None
    if net is None:
        enc = ProblemEncoding.from_dict(doc)
        net = enc.network
    try:
        schedule = parse_schedule(args.schedule)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    run = anneal(net, schedule, args.sampler, args.restarts, args.seed, enc, threads=args.threads)
    rep = run.report()
    timing = {"flips_per_second": rep.pop("flips_per_second"),
              "wall_time": float(sum(r.wall_time for r in run.restarts))}
    rep["best_state"] = run.best_state.tolist()
    if args.report:
        trace = Path(args.trace) if args.trace else Path(args.report).with_suffix(".trace.csv")
        rows = [{"step": k, "beta": b, "sweeps": s, "energy": float(e), "best_energy": float(bb)}
                for k, (b, s, e, bb) in enumerate(zip(schedule.betas, schedule.sweeps, run.energy_trace, run.best_trace))]
        _write_csv(trace, rows, ["step", "beta", "sweeps", "energy", "best_energy"])
        rep["energy_trace_csv"] = trace.name
        if args.plot:
            from .plotting import figure_path, plot_anneal

            rep["figure"] = plot_anneal(run, figure_path(args.report, "anneal")).name
    _emit(args, rep, timing)
    return EXIT_OK


def _dataset(args):
    from .learn import bars_and_stripes, load_dataset, toy_digits

    if args.data == "builtin:digits":
        X, y = toy_digits(args.per_class, rng=args.seed)
        return X, y, (8, 8)
    if args.data == "builtin:bars":
        X, y = bars_and_stripes(4)
        return X, y, (4, 4)
    return load_dataset(_existing(args.data, "dataset"))


def cmd_train(args) -> int:
    from .learn import SparseDBM, TrainConfig, accuracy, build_sparse_dbm, train

    _need(args, "model", "data")
    X, y, shape = _dataset(args)
    n_classes = int(y.max()) + 1
    path = Path(args.model)
    if path.is_file():
        model = SparseDBM.load(path)
        if len(model.visible) != X.shape[1]:
            from .core import NetworkFormatError

            raise NetworkFormatError(f"model has {len(model.visible)} visible units, data has {X.shape[1]} pixels")
    else:
        labels = args.labels if args.labels is not None else 3 * n_classes
        model = build_sparse_dbm(X.shape[1], args.hidden, labels, rng=args.seed, max_degree=args.max_degree,
                                 n_classes=n_classes, image_shape=shape, graph=args.graph)
    cfg = TrainConfig(minibatch_size=args.batch, learning_rate=args.lr, cd_steps=args.cd_steps,
                      epochs=args.epochs, seed=args.seed, anneal_negative=args.anneal_negative)
    t0 = time.perf_counter()
    res = train(model, X, y, cfg)
    wall = time.perf_counter() - t0
    out = Path(args.out) if args.out else path
    res.model.save(out)
    rep = {"model": str(out), "epochs": args.epochs, "reconstruction": res.reconstruction,
           "summary": res.model.summary(), "train_accuracy": accuracy(res.model, X, y, rng=args.seed)}
    if args.report and args.plot:
        from .plotting import figure_path, plot_training

        rep["figure"] = plot_training(res.reconstruction, figure_path(args.report, "training")).name
    _emit(args, rep, {"wall_time": wall})
    return EXIT_OK


def cmd_generate(args) -> int:
    from .learn import SparseDBM, generate

    _need(args, "model", "label", "out")
    model = SparseDBM.load(_existing(args.model, "model"))
    if not 0 <= args.label < model.n_classes:
        raise UsageError(f"label must lie in [0, {model.n_classes})")
    imgs = generate(model, args.label, args.schedule, rng=args.seed, count=args.count)
    shape = _image_shape(model)
    if args.count == 1:
        write_pgm(args.out, imgs[0], shape)
    else:
        tiled = np.concatenate([im.reshape(shape) for im in imgs], axis=1)
        write_pgm(args.out, tiled, tiled.shape)
    rep = {"label": args.label, "count": args.count, "image": str(args.out), "shape": list(shape)}
    if args.report and args.plot:
        from .plotting import figure_path, plot_images

        rep["figure"] = plot_images(imgs, shape, figure_path(args.report, "generated")).name
    _emit(args, rep)
    return EXIT_OK


def cmd_classify(args) -> int:
    from .core import NetworkFormatError
    from .learn import SparseDBM, classify

    _need(args, "model", "image")
    model = SparseDBM.load(_existing(args.model, "model"))
    img = read_pgm(args.image).ravel()
    if len(img) != len(model.visible):
        raise NetworkFormatError(f"image has {len(img)} pixels, model expects {len(model.visible)}")
    res = classify(model, img, sweeps=args.sweeps, rng=args.seed)
    _emit(args, res.to_dict())
    return EXIT_OK


def _hamiltonian(args):
    from .quantum import QuantumHamiltonian

    return QuantumHamiltonian.load(_existing(args.ham, "Hamiltonian"))


def cmd_trotter(args) -> int:
    from .quantum import sample_trotter, thermal_averages, trotterize_tfim
    from .quantum.hamiltonian import DENSE_LIMIT

    _need(args, "ham")
    h = _hamiltonian(args)
    if args.replicas < 2 or args.beta <= 0:
        raise UsageError("need --replicas >= 2 and --beta > 0")
    lat = trotterize_tfim(h, args.beta, args.replicas)
    t0 = time.perf_counter()
    est = sample_trotter(lat, args.sweeps, rng=args.seed, chains=args.chains)
    wall = time.perf_counter() - t0
    rep = {"n_qubits": h.n, "beta": args.beta, "replicas": args.replicas, "pbits": lat.network.n,
           "j_perp": lat.j_perp.tolist(), **est.to_dict()}
    exact = None
    if h.n <= DENSE_LIMIT and not args.no_exact:
        exact = thermal_averages(h, args.beta)
        rep["exact"] = {"energy": exact.energy, "sigma_x": exact.sigma_x.tolist()}
        rep["energy_relative_error"] = abs(est.energy - exact.energy) / max(abs(exact.energy), 1e-300)
    if args.report and args.plot:
        from .plotting import figure_path, plot_trotter

        rep["figure"] = plot_trotter(est, exact, figure_path(args.report, "sigma_x")).name
    _emit(args, rep, {"wall_time": wall})
    return EXIT_OK


def cmd_vmc(args) -> int:
    from .quantum import RBMWavefunction, vmc_train

    _need(args, "ham")
    h = _hamiltonian(args)
    h.require_stoquastic()
    rbm = RBMWavefunction.random(h.n, args.hidden, rng=args.seed)
    t0 = time.perf_counter()
    res = vmc_train(h, rbm, args.iters, args.samples, args.step, args.sampler, sr=args.sr, rng=args.seed)
    wall = time.perf_counter() - t0
    rep = res.report()
    if args.report:
        rows = list(res.trace_rows())
        _write_csv(args.report, rows, list(rows[0].keys()))
        rep["trace_csv"] = Path(args.report).name
        if args.plot:
            from .plotting import figure_path, plot_vmc

            rep["figure"] = plot_vmc(res, figure_path(args.report, "energy")).name
    if args.model_out:
        res.rbm.save(args.model_out)
    _emit(args, rep, {"wall_time": wall}, path=args.summary)
    return EXIT_OK


def cmd_embed(args) -> int:
    from .quantum import RBMWavefunction, embed_bipartite_chimera

    W = a = b = None
    if args.rbm:
        rbm = RBMWavefunction.load(_existing(args.rbm, "RBM"))
        W, a, b = rbm.W, rbm.a, rbm.b
        if args.visible is None:
            args.visible, args.hidden = rbm.n_visible, rbm.n_hidden
    _need(args, "visible", "hidden")
    emb, net = embed_bipartite_chimera(args.visible, args.hidden, args.cell, args.chain_coupling, W, a, b)
    if args.out:
        net.save(args.out)
    if args.map:
        Path(args.map).write_text(_dump({**emb.summary(), "chains": emb.chains}))
    rep = emb.summary()
    rep["degree_max"] = int(net.degree().max())
    if args.report and args.plot:
        from .plotting import figure_path, plot_embedding

        rep["figure"] = plot_embedding(emb, figure_path(args.report, "chimera")).name
    _emit(args, rep)
    return EXIT_OK


def bench(net, samplers, duration: float = 1.0, seed: int = 0, beta: float = 1.0) -> list[dict]:
    """Flips/s table: sweeps are repeated in batches until ``duration`` seconds have elapsed.

    ``flips_per_sweep`` is the measured count of attempted p-bit updates per
    sweep.  ``flips_per_step`` divides it by the parallel steps in a sweep
    (one per color class; one per p-bit for the serial sampler), i.e. the
    updates a parallel machine would issue per clock.
    """
    from .rng import RandomStream
    from .samplers import color_graph, sample

    rows = []
    plan = color_graph(net) if "colored" in samplers else None
    for name in samplers:
        if name not in ("serial", "colored"):
            raise UsageError(f"bench supports serial and colored samplers, not {name!r}")
        stream = RandomStream(seed, net.n)
        sample(net, beta, 1, stream, name, burn_in=0, plan=plan, histogram=False, marginals=False)  # compile
        sweeps = wall = attempted = 0
        batch = 1
        state = None
        while wall < duration:
            rec = sample(net, beta, batch, stream, name, state=state, burn_in=0, plan=plan,
                         histogram=False, marginals=False)
            state = rec.final_state
            attempted += rec.attempted_flips
            sweeps += batch
            wall += rec.wall_time
            batch *= 2
        steps = plan.num_colors if name == "colored" else net.n
        rows.append({
            "sampler": name,
            "n": net.n,
            "colors": steps,
            "sweeps": sweeps,
            "flips_per_sweep": attempted / sweeps,
            "flips_per_step": attempted / sweeps / max(steps, 1),
            "flips_per_second": attempted / wall if wall > 0 else 0.0,
            "wall_time": wall,
        })
    return rows


def cmd_bench(args) -> int:
    from .core import random_regular_network

    samplers = [s.strip() for s in args.samplers.split(",") if s.strip()]
    nets = []
    if args.net:
        net, doc = _load_network(args.net)
        if net is None:
            from .logic import ProblemEncoding

            net = ProblemEncoding.from_dict(doc).network
        nets.append(net)
    else:
        try:
            sizes = [int(float(s)) for s in args.sizes.split(",")]
        except ValueError:
            raise UsageError("--sizes is a comma-separated list of integers") from None
        gen = np.random.default_rng(args.seed)
        nets = [random_regular_network(n, args.degree, gen) for n in sizes]
    rows = []
    for net in nets:
        rows += bench(net, samplers, args.duration, args.seed)
    fields = ["sampler", "n", "colors", "sweeps", "flips_per_sweep", "flips_per_step", "flips_per_second", "wall_time"]
    if args.csv:
        _write_csv(args.csv, rows, fields)
        if args.plot:
            from .plotting import figure_path, plot_bench

            plot_bench(rows, figure_path(args.csv, "throughput"))
    if not args.quiet:
        w = csv.DictWriter(sys.stdout, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    return EXIT_OK


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    from .anneal import DEFAULT_SCHEDULE

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="run seed; all randomness derives from it")
    common.add_argument("--config", help="JSON file of flag defaults (explicit flags win)")
    common.add_argument("--quiet", action="store_true", help="do not echo the report to stdout")
    common.add_argument("--no-timing", action="store_true", help="omit wall-clock figures from reports")
    common.add_argument("--plot", action="store_true", help="also render figures next to the report")

    p = argparse.ArgumentParser(prog="pbitsim", description="Software p-bit probabilistic computer.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("encode", parents=[common], help="encode a Max-SAT/partition/knapsack instance")
    s.add_argument("kind", choices=["maxsat", "partition", "knapsack"])
    s.add_argument("input")
    s.add_argument("output")
    s.add_argument("--max-degree", type=int, default=0, help="sparsify to this degree (0 = dense)")
    s.add_argument("--circuit", action="store_true", help="partition via an invertible adder tree")
    s.add_argument("--clause-weight", type=float, default=1.0)
    s.add_argument("--gate-scale", type=float, default=0.6)
    s.add_argument("--report")
    s.set_defaults(func=cmd_encode)

    s = sub.add_parser("sparsify", parents=[common], help="bound the degree with COPY chains")
    s.add_argument("input")
    s.add_argument("output")
    s.add_argument("--max-degree", type=int, default=4)
    s.add_argument("--plan", help="write the copy plan here")
    s.add_argument("--copy-strength", type=float, default=None, help="uniform COPY coupling (default exact per link)")
    s.add_argument("--report")
    s.set_defaults(func=cmd_sparsify)

    s = sub.add_parser("solve", parents=[common], help="anneal an encoded problem or network")
    s.add_argument("--problem")
    s.add_argument("--schedule", default=DEFAULT_SCHEDULE)
    s.add_argument("--restarts", type=int, default=20)
    s.add_argument("--sampler", choices=["serial", "colored"], default="colored")
    s.add_argument("--threads", type=int, default=None)
    s.add_argument("--report")
    s.add_argument("--trace", help="energy trace CSV (default: next to the report)")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("train", parents=[common], help="contrastive-divergence training of a sparse DBM")
    s.add_argument("--model", help="model JSON; created if missing")
    s.add_argument("--data", help="dataset file, or builtin:digits / builtin:bars")
    s.add_argument("--out", help="write the trained model here (default: --model)")
    s.add_argument("--epochs", type=int, default=10)
    s.add_argument("--lr", type=float, default=0.01)
    s.add_argument("--batch", type=int, default=20)
    s.add_argument("--cd-steps", type=int, default=5)
    s.add_argument("--anneal-negative", action="store_true")
    s.add_argument("--hidden", type=int, default=64)
    s.add_argument("--labels", type=int, default=None, help="label p-bits (default 3 per class)")
    s.add_argument("--max-degree", type=int, default=6)
    s.add_argument("--graph", choices=["random", "layered"], default="layered")
    s.add_argument("--per-class", type=int, default=100, help="examples per class for builtin:digits")
    s.add_argument("--report")
    s.set_defaults(func=cmd_train)

    s = sub.add_parser("generate", parents=[common], help="label-clamped annealed generation")
    s.add_argument("--model")
    s.add_argument("--label", type=int)
    s.add_argument("--out", help="PGM image path")
    s.add_argument("--count", type=int, default=1)
    s.add_argument("--schedule", default=DEFAULT_SCHEDULE)
    s.add_argument("--report")
    s.set_defaults(func=cmd_generate)

    s = sub.add_parser("classify", parents=[common], help="classify a PGM image")
    s.add_argument("--model")
    s.add_argument("--image")
    s.add_argument("--sweeps", type=int, default=200)
    s.add_argument("--report")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("trotter", parents=[common], help="Suzuki-Trotter sampling of a transverse-field Ising model")
    s.add_argument("--ham")
    s.add_argument("--beta", type=float, default=1.0)
    s.add_argument("--replicas", type=int, default=64)
    s.add_argument("--sweeps", type=int, default=10000)
    s.add_argument("--chains", type=int, default=64)
    s.add_argument("--no-exact", action="store_true", help="skip the exact-diagonalization comparison")
    s.add_argument("--report")
    s.set_defaults(func=cmd_trotter)

    s = sub.add_parser("vmc", parents=[common], help="RBM variational ground-state search")
    s.add_argument("--ham")
    s.add_argument("--hidden", type=int, default=48)
    s.add_argument("--iters", type=int, default=2000)
    s.add_argument("--samples", type=int, default=200)
    s.add_argument("--step", type=float, default=0.05)
    s.add_argument("--sampler", choices=["direct", "embedded"], default="direct")
    s.add_argument("--sr", action="store_true", help="stochastic reconfiguration preconditioning")
    s.add_argument("--report", help="energy trace CSV")
    s.add_argument("--summary", help="summary JSON")
    s.add_argument("--model-out", help="write the trained RBM here")
    s.set_defaults(func=cmd_vmc)

    s = sub.add_parser("embed", parents=[common], help="embed a bipartite RBM on a chimera grid")
    s.add_argument("--visible", type=int)
    s.add_argument("--hidden", type=int)
    s.add_argument("--cell", type=int, default=4)
    s.add_argument("--chain-coupling", type=float, default=1.0)
    s.add_argument("--rbm", help="RBM JSON whose weights are placed on the embedding")
    s.add_argument("--out", help="physical network JSON")
    s.add_argument("--map", help="chain map JSON")
    s.add_argument("--report")
    s.set_defaults(func=cmd_embed)

    s = sub.add_parser("bench", parents=[common], help="sampler throughput table")
    s.add_argument("--net", help="network or encoding JSON (default: random regular nets)")
    s.add_argument("--sizes", default="1000,10000,100000")
    s.add_argument("--degree", type=int, default=4)
    s.add_argument("--samplers", default="serial,colored")
    s.add_argument("--duration", type=float, default=1.0, help="seconds per sampler and size")
    s.add_argument("--csv")
    s.set_defaults(func=cmd_bench)
    return p


def parse_args(argv=None) -> argparse.Namespace:
    """Parse flags, filling unset ones from ``--config``; exits 2 on usage errors."""
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    args = parser.parse_args(argv)
    if args.config:
        try:
            cfg = json.loads(_existing(args.config, "config").read_text())
        except json.JSONDecodeError as exc:
            raise UsageError(f"config {args.config}: {exc}") from None
        if not isinstance(cfg, dict):
            raise UsageError("config must be a JSON object")
        sub = parser._subparsers._group_actions[0].choices[args.command]
        known = {a.dest for a in sub._actions}
        unknown = set(k.replace("-", "_") for k in cfg) - known
        if unknown:
            raise UsageError(f"config has unknown keys: {', '.join(sorted(unknown))}")
        sub.set_defaults(**{k.replace("-", "_"): v for k, v in cfg.items()})
        args = parser.parse_args(argv)
    return args


def main(argv=None) -> int:
    from .core import NetworkFormatError, SizeGuardError
    from .quantum import EmbeddingError, SignProblemError

    try:
        args = parse_args(argv)
        return args.func(args)
    except SystemExit as exc:  # argparse usage errors
        return int(exc.code) if exc.code is not None else EXIT_OK
    except UsageError as exc:
        print(f"pbitsim: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NetworkFormatError, json.JSONDecodeError) as exc:
        print(f"pbitsim: input error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except (SizeGuardError, SignProblemError, EmbeddingError) as exc:
        print(f"pbitsim: guard: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except ValueError as exc:  # parameter values rejected by the library
        print(f"pbitsim: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
