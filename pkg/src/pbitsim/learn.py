"""Sparse deep Boltzmann machines: CD training, label-clamped generation, classification."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

import networkx as nx
import numpy as np

from .anneal import DEFAULT_SCHEDULE, AnnealSchedule, parse_schedule
from .core import NetworkFormatError, PBitNetwork
from .rng import RandomStream, derive_seed
from .samplers import ChainBatch, ColoringPlan, color_graph

VISIBLE, HIDDEN, LABEL = 0, 1, 2
ROLE_NAMES = ("visible", "hidden", "label")


@dataclass(eq=False)
class SparseDBM:
    """A sparse Boltzmann machine whose p-bits are tagged visible, hidden or label.

    Any edge is allowed, inside a layer or across layers.  Label unit ``u``
    (in index order among label units) stands for class ``u % n_classes``.
    """

    network: PBitNetwork
    roles: np.ndarray
    n_classes: int
    image_shape: tuple | None = None
    plan: ColoringPlan | None = field(default=None, repr=False)

    def __post_init__(self):
        self.roles = np.asarray(self.roles, dtype=np.int8)
        if self.roles.shape != (self.network.n,):
            raise ValueError("one role per p-bit")
        if np.any((self.roles < VISIBLE) | (self.roles > LABEL)):
            raise ValueError("roles are 0 (visible), 1 (hidden) or 2 (label)")
        if not self.network.symmetric:
            raise ValueError("a Boltzmann machine needs a symmetric network")
        n_label = int(np.sum(self.roles == LABEL))
        if n_label and not 1 <= self.n_classes <= n_label:
            raise ValueError("need at least one label unit per class")
        if self.image_shape is not None and int(np.prod(self.image_shape)) != len(self.visible):
            raise ValueError("image shape does not match the visible count")
        if self.plan is None:
            self.plan = color_graph(self.network)
        self.plan.validate(self.network)

    @property
    def visible(self) -> np.ndarray:
        return np.flatnonzero(self.roles == VISIBLE)

    @property
    def hidden(self) -> np.ndarray:
        return np.flatnonzero(self.roles == HIDDEN)

    @property
    def label(self) -> np.ndarray:
        return np.flatnonzero(self.roles == LABEL)

    @property
    def clamp_units(self) -> np.ndarray:
        """Units fixed by a training example: visibles then labels."""
        return np.concatenate([self.visible, self.label])

    def label_code(self, k: int) -> np.ndarray:
        if not 0 <= k < self.n_classes:
            raise ValueError(f"label {k} outside 0..{self.n_classes - 1}")
        return np.where(np.arange(len(self.label)) % self.n_classes == k, 1, -1).astype(np.int8)

    def examples(self, images, labels) -> np.ndarray:
        """Clamp vectors (visible then label values) for a batch of images and labels."""
        X = np.asarray(images, dtype=np.int8).reshape(len(labels), -1)
        if X.shape[1] != len(self.visible):
            raise ValueError(f"images have {X.shape[1]} pixels, model has {len(self.visible)} visibles")
        codes = np.stack([self.label_code(int(k)) for k in labels]) if len(self.label) else np.zeros((len(X), 0), np.int8)
        return np.concatenate([X, codes], axis=1)

    def with_parameters(self, weights, bias) -> "SparseDBM":
        return replace(self, network=self.network.with_parameters(weights, bias))

    def summary(self) -> dict:
        return {
            "units": self.network.n,
            "visible": len(self.visible),
            "hidden": len(self.hidden),
            "label": len(self.label),
            "edges": self.network.num_edges,
            "max_degree": int(self.network.degree().max()) if self.network.n else 0,
            "colors": self.plan.num_colors,
        }

    # persistence
    def to_dict(self) -> dict:
        return {
            "network": self.network.to_dict(),
            "roles": [ROLE_NAMES[r] for r in self.roles],
            "n_classes": self.n_classes,
            "image_shape": list(self.image_shape) if self.image_shape else None,
            "colors": self.plan.colors.tolist(),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "SparseDBM":
        try:
            net = PBitNetwork.from_dict(doc["network"])
            roles = [ROLE_NAMES.index(r) for r in doc["roles"]]
            shape = tuple(doc["image_shape"]) if doc.get("image_shape") else None
            plan = ColoringPlan.from_colors(doc["colors"]) if "colors" in doc else None
            return cls(net, np.array(roles), int(doc["n_classes"]), shape, plan)
        except (KeyError, TypeError, ValueError) as exc:
            raise NetworkFormatError(f"invalid model file: {exc}") from exc

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict()))

    @classmethod
    def load(cls, path) -> "SparseDBM":
        try:
            doc = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise NetworkFormatError(f"{path}: not JSON ({exc})") from exc
        return cls.from_dict(doc)


def build_sparse_dbm(
    n_visible: int,
    n_hidden: int,
    n_label: int = 0,
    rng: RandomStream | int = 0,
    max_degree: int = 6,
    n_classes: int | None = None,
    edges=None,
    image_shape=None,
    init_scale: float = 0.1,
    graph: str = "random",
) -> SparseDBM:
    """Sparse graph of degree at most ``max_degree`` with roles placed at random.

    ``graph="random"`` scatters the roles over a random ``max_degree``-regular
    graph (one node short of regular when the stub count is odd).
    ``graph="layered"`` wires visible and label units only to hidden units,
    spreading the hidden capacity evenly, and spends what is left on
    hidden-hidden edges.  Explicit ``edges`` override both.  Weights start
    uniform in ``[-init_scale, init_scale]``, biases at zero.
    """
    n = n_visible + n_hidden + n_label
    if min(n_visible, n_hidden, n_label) < 0 or n == 0:
        raise ValueError("unit counts must be non-negative and not all zero")
    seed = rng.seed if isinstance(rng, RandomStream) else int(rng)
    gen = np.random.default_rng(derive_seed(seed, 0xDB))
    roles = np.array([VISIBLE] * n_visible + [HIDDEN] * n_hidden + [LABEL] * n_label, dtype=np.int8)
    roles = roles[gen.permutation(n)]
    if edges is None:
        if graph == "random":
            edges = _random_regular_edges(n, min(max_degree, n - 1), gen)
        elif graph == "layered":
            edges = _layered_edges(roles, max_degree, gen)
        else:
            raise ValueError("graph is 'random' or 'layered'")
    edges = np.array([(int(a), int(b)) for a, b, *_ in edges], dtype=np.int64).reshape(-1, 2)
    w = gen.uniform(-init_scale, init_scale, len(edges))
    net = PBitNetwork.from_edges(n, [(a, b, x) for (a, b), x in zip(edges, w)], np.zeros(n))
    return SparseDBM(net, roles, n_classes or max(n_label, 1), tuple(image_shape) if image_shape else None)


def _random_regular_edges(n: int, d: int, gen: np.random.Generator):
    if d <= 0:
        return []
    if (n * d) % 2:
        g = nx.random_regular_graph(d, n + 1, seed=int(gen.integers(2**31)))
        g.remove_node(n)
    else:
        g = nx.random_regular_graph(d, n, seed=int(gen.integers(2**31)))
    return sorted((min(a, b), max(a, b)) for a, b in g.edges())


def _layered_edges(roles: np.ndarray, d: int, gen: np.random.Generator):
    hidden = np.flatnonzero(roles == HIDDEN)
    outer = np.flatnonzero(roles != HIDDEN)
    if len(hidden) == 0:
        return _random_regular_edges(len(roles), min(d, len(roles) - 1), gen)
    spare = np.full(len(hidden), d)
    edges = set()

    def attach(u, count):
        for _ in range(count):
            taken = {b if a == u else a for a, b in edges if u in (a, b)}
            ok = [k for k in range(len(hidden)) if spare[k] > 0 and hidden[k] not in taken]
            if not ok:
                return
            top = max(spare[k] for k in ok)
            k = gen.choice([k for k in ok if spare[k] == top])
            spare[k] -= 1
            edges.add((min(u, hidden[k]), max(u, hidden[k])))

    labels = [u for u in outer if roles[u] == LABEL]
    visibles = [u for u in outer if roles[u] == VISIBLE]
    per_label = min(d, len(hidden))
    for u in labels:
        attach(u, per_label)
    if visibles:
        per_visible = max(1, min(d, len(hidden), int(spare.sum()) // len(visibles)))
        for u in visibles:
            attach(u, per_visible)
    # leftover hidden capacity becomes hidden-hidden edges
    for _ in range(int(spare.sum())):
        ok = np.flatnonzero(spare > 0)
        if len(ok) < 2:
            break
        a, b = gen.choice(ok, size=2, replace=False)
        key = (min(hidden[a], hidden[b]), max(hidden[a], hidden[b]))
        if key not in edges:
            edges.add(key)
            spare[a] -= 1
            spare[b] -= 1
    return sorted(edges)


# ------------------------------------------------------------------ chains


def _start_states(model: SparseDBM, clamp_values, gen: np.random.Generator, clamp_units=None) -> np.ndarray:
    clamp_units = model.clamp_units if clamp_units is None else clamp_units
    B = len(clamp_values)
    M = np.where(gen.random((B, model.network.n)) < 0.5, -1, 1).astype(np.int8)
    M[:, clamp_units] = clamp_values
    return M


def _free_mask(n, clamped) -> np.ndarray:
    free = np.ones(n, dtype=np.bool_)
    free[clamped] = False
    return free


# ------------------------------------------------------------------ contrastive divergence


@dataclass
class CDGradient:
    """Log-likelihood gradient estimate ``<.>_clamped - <.>_free`` per edge and unit.

    The ``*_se`` fields are standard errors over the chains of each phase.
    ``reconstruction`` is the mean probability that a visible p-bit, resampled
    once from the clamped configuration, disagrees with the data.
    """

    dW: np.ndarray
    dh: np.ndarray
    pos_w: np.ndarray
    neg_w: np.ndarray
    pos_h: np.ndarray
    neg_h: np.ndarray
    neg_w_se: np.ndarray
    neg_h_se: np.ndarray
    reconstruction: float


def _edge_stats(model: SparseDBM, M: np.ndarray):
    net = model.network
    mm = M[:, net.rows].astype(np.float64) * M[:, net.cols]
    mf = M.astype(np.float64)
    se = lambda a: a.std(axis=0, ddof=1) / np.sqrt(len(a)) if len(a) > 1 else np.full(a.shape[1], np.inf)
    return mm.mean(axis=0), mf.mean(axis=0), se(mm), se(mf)


def _reconstruction_error(model: SparseDBM, M: np.ndarray, beta: float) -> float:
    net = model.network
    vis = model.visible
    if len(vis) == 0:
        return 0.0
    W = net.dense()
    fields = M.astype(np.float64) @ W[:, vis] + net.bias[vis]
    return float(np.mean(0.5 * (1.0 - M[:, vis] * np.tanh(beta * fields))))


def cd_gradient(
    model: SparseDBM,
    batch,
    cd_steps: int = 5,
    rng: RandomStream | int = 0,
    beta: float = 1.0,
    positive_sweeps: int | None = None,
    anneal_negative: bool = False,
) -> CDGradient:
    """CD-k gradient for a minibatch of clamp vectors (visible values then label values).

    Positive phase: hidden units sampled for ``positive_sweeps`` colored
    sweeps (default ``cd_steps``) with visibles and labels frozen to the data.
    Negative phase: every unit runs ``cd_steps`` sweeps from that clamped
    configuration; with ``anneal_negative`` the sweeps ramp beta up from 0.
    """
    batch = np.asarray(batch)
    clamp = model.clamp_units
    if batch.ndim != 2 or batch.shape[1] != len(clamp):
        raise ValueError(f"minibatch rows must have {len(clamp)} entries (visible + label)")
    if not np.all(np.abs(batch) == 1):
        raise ValueError("minibatch values must be +-1")
    if cd_steps < 1:
        raise ValueError("cd_steps must be positive")
    seed = rng.seed if isinstance(rng, RandomStream) else int(rng)
    n = model.network.n
    M = _start_states(model, batch, np.random.default_rng(derive_seed(seed, 1)))
    chains = ChainBatch(model.network, model.plan, M, derive_seed(seed, 2))
    pos_sweeps = cd_steps if positive_sweeps is None else positive_sweeps
    if len(model.hidden):
        chains.run(np.full(pos_sweeps, beta), _free_mask(n, clamp))
    pos_w, pos_h, _, _ = _edge_stats(model, chains.M)
    recon = _reconstruction_error(model, chains.M, beta)
    if anneal_negative:
        betas = beta * np.arange(1, cd_steps + 1) / cd_steps
    else:
        betas = np.full(cd_steps, beta)
    chains.run(betas, np.ones(n, dtype=np.bool_))
    neg_w, neg_h, neg_w_se, neg_h_se = _edge_stats(model, chains.M)
    return CDGradient(pos_w - neg_w, pos_h - neg_h, pos_w, neg_w, pos_h, neg_h, neg_w_se, neg_h_se, recon)


def model_expectations(model: SparseDBM, beta: float = 1.0, sweeps: int = 200, chains: int = 1000, rng=0):
    """Sampled ``<m_i m_j>`` per edge and ``<m_i>`` per unit with standard errors (free running)."""
    seed = rng.seed if isinstance(rng, RandomStream) else int(rng)
    n = model.network.n
    M = np.where(np.random.default_rng(derive_seed(seed, 3)).random((chains, n)) < 0.5, -1, 1).astype(np.int8)
    c = ChainBatch(model.network, model.plan, M, derive_seed(seed, 4))
    c.run(np.full(sweeps, beta), np.ones(n, dtype=np.bool_))
    return _edge_stats(model, c.M)


@dataclass(frozen=True)
class TrainConfig:
    minibatch_size: int = 20
    num_batches: int | None = None
    learning_rate: float = 0.01
    cd_steps: int = 5
    epochs: int = 10
    anneal_negative: bool = False
    seed: int = 0
    beta: float = 1.0

    def __post_init__(self):
        if self.minibatch_size < 1 or self.cd_steps < 1 or self.epochs < 1:
            raise ValueError("minibatch_size, cd_steps and epochs must be positive")
        if self.num_batches is not None and self.num_batches < 1:
            raise ValueError("num_batches must be positive")
        if self.learning_rate < 0 or self.beta <= 0:
            raise ValueError("learning_rate must be >= 0 and beta > 0")

    @classmethod
    def from_dict(cls, doc: dict) -> "TrainConfig":
        known = {k: doc[k] for k in cls.__dataclass_fields__ if k in doc}
        return cls(**known)


@dataclass
class TrainResult:
    model: SparseDBM
    reconstruction: list[float]
    config: TrainConfig


def train(model: SparseDBM, images, labels, cfg: TrainConfig = TrainConfig(), callback=None) -> TrainResult:
    """Minibatch CD training; returns the trained model and per-epoch reconstruction error.

    Each epoch shuffles the data with a seed derived from ``cfg.seed`` and the
    epoch, so runs are reproducible bit for bit.  ``callback(epoch, error)``
    is called after every epoch.
    """
    data = model.examples(images, labels)
    N = len(data)
    if N == 0:
        raise ValueError("empty dataset")
    weights = model.network.weights.copy()
    bias = model.network.bias.copy()
    current = model
    trace = []
    per_epoch = -(-N // cfg.minibatch_size)
    if cfg.num_batches is not None:
        per_epoch = min(per_epoch, cfg.num_batches)
    for epoch in range(cfg.epochs):
        perm = np.random.default_rng(derive_seed(cfg.seed, 0xE0, epoch)).permutation(N)
        errs = []
        for b in range(per_epoch):
            idx = perm[b * cfg.minibatch_size: (b + 1) * cfg.minibatch_size]
            if len(idx) == 0:
                break
            g = cd_gradient(current, data[idx], cfg.cd_steps, derive_seed(cfg.seed, epoch, b), cfg.beta,
                            anneal_negative=cfg.anneal_negative)
            errs.append(g.reconstruction)
            if cfg.learning_rate:
                weights += cfg.learning_rate * g.dW
                bias += cfg.learning_rate * g.dh
                current = current.with_parameters(weights.copy(), bias.copy())
        trace.append(float(np.mean(errs)))
        if callback is not None:
            callback(epoch, trace[-1])
    return TrainResult(current, trace, cfg)


# ------------------------------------------------------------------ inference


def generate(model: SparseDBM, label: int, schedule: AnnealSchedule | str | None = None, rng=0,
             count: int = 1) -> np.ndarray:
    """Clamp the label p-bits to ``label`` and anneal the rest; return final visible states.

    The default schedule is beta 0 to 5 in steps of 0.125 with 10 sweeps each.
    Returns shape ``(count, n_visible)``.
    """
    if schedule is None:
        schedule = DEFAULT_SCHEDULE
    if isinstance(schedule, str):
        schedule = parse_schedule(schedule)
    seed = rng.seed if isinstance(rng, RandomStream) else int(rng)
    code = model.label_code(label)
    gen = np.random.default_rng(derive_seed(seed, 5, label))
    M = _start_states(model, np.tile(code, (count, 1)), gen, model.label)
    chains = ChainBatch(model.network, model.plan, M, derive_seed(seed, 6, label))
    betas = np.repeat(np.asarray(schedule.betas), np.asarray(schedule.sweeps))
    chains.run(betas, _free_mask(model.network.n, model.label))
    return chains.M[:, model.visible].copy()


@dataclass
class Classification:
    probabilities: np.ndarray
    marginals: np.ndarray
    prediction: int
    low_confidence: bool

    def to_dict(self) -> dict:
        return {
            "prediction": self.prediction,
            "probabilities": [float(p) for p in self.probabilities],
            "label_marginals": [float(p) for p in self.marginals],
            "low_confidence": self.low_confidence,
        }


def classify(model: SparseDBM, image, beta: float = 1.0, sweeps: int = 200, rng=0, chains: int = 8) -> Classification:
    """Clamp the image, sample hidden and label p-bits, and read label marginals.

    ``marginals[k]`` is the mean probability that class ``k``'s label units
    are +1, averaged from each sample's conditional p-bit probabilities; ``probabilities`` normalizes them.  The first tenth of the sweeps
    is discarded.  ``low_confidence`` flags a top marginal below 0.5.
    """
    x = np.asarray(image, dtype=np.int8).reshape(-1)
    if x.shape != (len(model.visible),):
        raise ValueError(f"image has {x.size} pixels, model has {len(model.visible)} visibles")
    if not np.all(np.abs(x) == 1):
        raise ValueError("image values must be +-1")
    if len(model.label) == 0:
        raise ValueError("model has no label units")
    seed = rng.seed if isinstance(rng, RandomStream) else int(rng)
    n = model.network.n
    gen = np.random.default_rng(derive_seed(seed, 7))
    M = _start_states(model, np.tile(x, (chains, 1)), gen, model.visible)
    c = ChainBatch(model.network, model.plan, M, derive_seed(seed, 8))
    free = _free_mask(n, model.visible)
    burn = max(sweeps // 10, 1)
    c.run(np.full(burn, beta), free)
    # average the conditional probability of +1 rather than the sampled bit
    W_lab = model.network.dense()[:, model.label]
    h_lab = model.network.bias[model.label]
    up = np.zeros(len(model.label))
    kept = max(sweeps - burn, 1)
    for _ in range(kept):
        c.run(np.array([beta]), free)
        up += (0.5 * (1.0 + np.tanh(beta * (c.M @ W_lab + h_lab)))).mean(axis=0)
    up /= kept
    cls = np.arange(len(model.label)) % model.n_classes
    marg = np.array([up[cls == k].mean() for k in range(model.n_classes)])
    total = marg.sum()
    probs = marg / total if total > 0 else np.full(model.n_classes, 1.0 / model.n_classes)
    pred = int(np.argmax(marg))
    return Classification(probs, marg, pred, bool(marg[pred] < 0.5))


def accuracy(model: SparseDBM, images, labels, rng=0, **kw) -> float:
    """Fraction of images whose predicted class equals the label."""
    seed = rng.seed if isinstance(rng, RandomStream) else int(rng)
    hits = [classify(model, x, rng=derive_seed(seed, k), **kw).prediction == int(y)
            for k, (x, y) in enumerate(zip(np.asarray(images), labels))]
    return float(np.mean(hits))


# ------------------------------------------------------------------ datasets


def bars_and_stripes(size: int = 4) -> tuple[np.ndarray, np.ndarray]:
    """Every bars (label 0) and stripes (label 1) pattern; the two constant images are left out.

    Returns ``(images, labels)`` with images of shape ``(N, size * size)`` in +-1.
    """
    images, labels = [], []
    for bits in range(1, 2**size - 1):
        row = np.array([1 if (bits >> k) & 1 else -1 for k in range(size)], dtype=np.int8)
        images.append(np.tile(row, (size, 1)).reshape(-1))  # columns constant: vertical bars
        labels.append(0)
        images.append(np.repeat(row, size).reshape(-1))  # rows constant: horizontal stripes
        labels.append(1)
    return np.array(images), np.array(labels)


_GLYPHS = {
    0: ["..####..",
        ".#....#.",
        ".#....#.",
        ".#....#.",
        ".#....#.",
        ".#....#.",
        ".#....#.",
        "..####.."],
    1: ["...##...",
        "..###...",
        "...##...",
        "...##...",
        "...##...",
        "...##...",
        "...##...",
        "..####.."],
    2: ["..####..",
        ".#....#.",
        "......#.",
        ".....#..",
        "....#...",
        "...#....",
        "..#.....",
        ".######."],
}


def digit_templates() -> np.ndarray:
    """The three 8x8 glyphs (0, 1, 2) as +-1 arrays of shape (3, 8, 8)."""
    return np.array([[[1 if ch == "#" else -1 for ch in row] for row in _GLYPHS[k]] for k in range(3)], dtype=np.int8)


def toy_digits(per_class: int = 100, rng=0, flip: float = 0.05, shift: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Noisy 8x8 digits 0-2: each glyph shifted by up to ``shift`` pixels, then pixels flipped with prob ``flip``."""
    gen = np.random.default_rng(derive_seed(rng.seed if isinstance(rng, RandomStream) else int(rng), 0xD161))
    T = digit_templates()
    images, labels = [], []
    for k in range(3):
        for _ in range(per_class):
            dy, dx = gen.integers(-shift, shift + 1, size=2)
            img = np.full((8, 8), -1, dtype=np.int8)
            src = T[k][max(0, -dy): 8 - max(0, dy), max(0, -dx): 8 - max(0, dx)]
            img[max(0, dy): max(0, dy) + src.shape[0], max(0, dx): max(0, dx) + src.shape[1]] = src
            noise = gen.random((8, 8)) < flip
            img[noise] *= -1
            images.append(img.reshape(-1))
            labels.append(k)
    order = gen.permutation(len(labels))
    return np.array(images)[order], np.array(labels)[order]


def load_dataset(path) -> tuple[np.ndarray, np.ndarray, tuple | None]:
    """Read images and labels from JSON or CSV; 0/1 pixels are converted to -1/+1.

    JSON: ``{"images": [[...], ...], "labels": [...], "shape": [h, w]}``.
    CSV: one example per line, label first, then pixels.
    """
    path = Path(path)
    text = path.read_text()
    shape = None
    try:
        if path.suffix.lower() == ".json":
            doc = json.loads(text)
            X = np.array(doc["images"], dtype=np.int64)
            y = np.array(doc["labels"], dtype=np.int64)
            shape = tuple(doc["shape"]) if doc.get("shape") else None
        else:
            rows = [line.split(",") for line in text.splitlines() if line.strip() and not line.startswith("#")]
            arr = np.array([[int(float(v)) for v in r] for r in rows], dtype=np.int64)
            y, X = arr[:, 0], arr[:, 1:]
    except (KeyError, ValueError, json.JSONDecodeError) as exc:
        raise NetworkFormatError(f"{path}: cannot read dataset ({exc})") from exc
    if X.ndim != 2 or len(X) != len(y):
        raise NetworkFormatError(f"{path}: images and labels do not line up")
    if np.all(np.isin(X, (0, 1))):
        X = 2 * X - 1
    if not np.all(np.isin(X, (-1, 1))):
        raise NetworkFormatError(f"{path}: pixels must be 0/1 or -1/+1")
    return X.astype(np.int8), y, shape


def save_dataset(path, images, labels, shape=None) -> None:
    path = Path(path)
    images = np.asarray(images, dtype=int)
    if path.suffix.lower() == ".json":
        doc = {"images": images.tolist(), "labels": [int(k) for k in labels]}
        if shape is not None:
            doc["shape"] = list(shape)
        path.write_text(json.dumps(doc))
    else:
        lines = [",".join(map(str, [int(k), *row])) for k, row in zip(labels, images)]
        path.write_text("\n".join(lines) + "\n")
