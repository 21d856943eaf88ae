"""Seeded random sweeps over networks.

Each instance draws from its own generator seeded by ``(seed, index)``, so
results do not depend on how many worker processes run or in which order
they finish.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any

from .expressivity import check_dim_bound
from .network import ArchitectureSpec, net_eval, newton_extract, random_network, random_point
from .virtual import v_support

_RANGES = ("n", "depth", "d", "r", "width")


@dataclass(frozen=True)
class ExperimentConfig:
    seed: int = 0
    networks: int = 200
    points: int = 50
    n: tuple = (1, 6)
    depth: tuple = (0, 3)
    d: tuple = (1, 3)
    r: tuple = (1, 3)
    width: tuple = (1, 3)
    out: str | None = None

    def __post_init__(self):
        for name in _RANGES:
            lo, hi = getattr(self, name)
            if lo > hi:
                raise ValueError(f"range {name} is empty: [{lo}, {hi}]")
        if self.n[0] < 1 or self.d[0] < 1 or self.r[0] < 1 or self.width[0] < 1 or self.depth[0] < 0:
            raise ValueError("ranges must be positive (depth nonnegative)")
        if self.networks < 0 or self.points < 0:
            raise ValueError("counts must be nonnegative")

    @classmethod
    def from_json(cls, data: dict) -> "ExperimentConfig":
        known = {"seed", "networks", "points", "out", *_RANGES}
        extra = set(data) - known
        if extra:
            raise ValueError(f"unknown config keys: {sorted(extra)}")
        kw: dict[str, Any] = {}
        for key, value in data.items():
            if key in _RANGES:
                if isinstance(value, int):
                    value = (value, value)
                if not (isinstance(value, list) and len(value) == 2 and all(isinstance(v, int) for v in value)):
                    raise ValueError(f"{key} must be an integer or a [lo, hi] pair")
                value = tuple(value)
            elif key in ("seed", "networks", "points") and not isinstance(value, int):
                raise ValueError(f"{key} must be an integer")
            kw[key] = value
        return cls(**kw)


def instance_rng(seed: int, index: int) -> random.Random:
    return random.Random(f"{seed}/{index}")


def make_instance(cfg: ExperimentConfig, index: int):
    """The ``index``-th network of the sweep and its sample points."""
    rng = instance_rng(cfg.seed, index)
    n = rng.randint(*cfg.n)
    depth = rng.randint(*cfg.depth)
    d = (n,) + tuple(rng.randint(*cfg.d) for _ in range(depth - 1)) if depth else ()
    r = tuple(rng.randint(*cfg.r) for _ in range(depth))
    spec = ArchitectureSpec(n, depth, d, r)
    net = random_network(rng, n, depth, spec.d, spec.r, width=cfg.width)
    pts = [random_point(rng, n) for _ in range(cfg.points)]
    return net, pts


def run_instance(args: tuple) -> dict:
    cfg, index = args
    net, pts = make_instance(cfg, index)
    V, witness = newton_extract(net)
    agree = sum(1 for x in pts if v_support(V, x) == net_eval(net, x))
    report = check_dim_bound(net, strict=False)
    return {
        "index": index,
        "spec": net.spec.to_json(),
        "duality_checks": len(pts),
        "duality_agree": agree,
        "witness_ok": witness.verify(),
        "report": report.to_json(),
    }


def run_sweep(cfg: ExperimentConfig, jobs: int = 1) -> list:
    work = [(cfg, i) for i in range(cfg.networks)]
    if jobs <= 1:
        return [run_instance(w) for w in work]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(run_instance, work, chunksize=4))
