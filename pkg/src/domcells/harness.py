"""Paper-example reproduction and randomized verification campaigns.

The two worked examples are transcribed here verbatim (0-based ids; the
published labels x_1.. map to 0..). Golden colorings ship as package data;
reproduction fails loudly on the first diverging cell. Fuzz campaigns draw
seeded random factors, solve everything exactly, and run the full checker
suite on every instance the solver proves.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from random import Random
from typing import Mapping, Sequence

from .bounds import (
    CheckReport,
    check_combined_inequality,
    check_fiber_maroon,
    check_lemma1,
    check_lemma2,
    check_lemma3,
    check_main_lemma,
    check_observations,
    check_p2_complement,
    check_theorem_bound,
    cn_coefficient,
    exact_str,
)
from .cells import (
    CellColor,
    CellColoring,
    ColorLedger,
    build_partition,
    color_cells,
    count_colors,
    validate_partition,
)
from .domination import Budget, GammaResult, gamma_exact, gamma_path, is_dominating
from .errors import InvalidArgumentError, NotApplicableError, ReproductionError
from .graphs import Graph, VertexSet, path_graph, random_gnp
from .product import TripleProduct, cartesian3

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class PaperExample:
    example_id: int
    x: Graph
    y: Graph
    z: Graph
    dominators: tuple[int, ...]
    cells: tuple[tuple[int, ...], ...]
    dset_coords: tuple[tuple[int, int, int], ...]
    gamma_x: int
    gamma_y: int
    gamma_z: int
    gamma_product: int
    named_colors: Mapping[tuple[int, int, int], CellColor]
    maximal_maroon_fiber: tuple[int, int] | None

    def product(self) -> TripleProduct:
        return cartesian3(self.x, self.y, self.z)

    def dset(self, p: TripleProduct) -> VertexSet:
        return VertexSet.of(p.to_flat(c) for c in self.dset_coords)


_EXAMPLE1 = dict(
    example_id=1,
    x=Graph(8, [(0, 1), (1, 2), (1, 5), (2, 3), (3, 4), (4, 5), (4, 7), (5, 6), (6, 7)], label="X"),
    y=Graph(4, [(0, 1), (0, 3), (1, 2), (2, 3)], label="Y"),
    z=path_graph(2),
    dominators=(1, 4, 6),
    cells=((0, 1, 2), (3, 4), (5, 6, 7)),
    dset_coords=(
        (0, 3, 0), (1, 1, 0), (3, 3, 0), (4, 1, 0), (6, 0, 0), (6, 2, 0), (7, 3, 0),
        (0, 1, 1), (2, 0, 1), (2, 2, 1), (4, 1, 1), (5, 3, 1), (7, 1, 1),
    ),
    gamma_x=3,
    gamma_y=2,
    gamma_z=1,
    gamma_product=13,
    named_colors={
        (0, 3, 0): CellColor.BLUE,
        (2, 0, 0): CellColor.GREEN,
        (0, 1, 0): CellColor.YELLOW,
        (0, 1, 1): CellColor.ORANGE,
        (0, 0, 0): CellColor.WHITE,
        (1, 0, 0): CellColor.PINK,
        (1, 3, 1): CellColor.MAROON,
    },
    maximal_maroon_fiber=None,
)

_EXAMPLE2 = dict(
    example_id=2,
    x=Graph(
        9,
        [(0, 1), (1, 2), (1, 5), (2, 3), (3, 4), (4, 5), (4, 7), (5, 6), (6, 7), (7, 8)],
        label="X",
    ),
    y=Graph(5, [(0, 1), (0, 3), (1, 2), (2, 3), (3, 4)], label="Y"),
    z=path_graph(3),
    dominators=(1, 4, 7),
    cells=((0, 1, 2, 5), (3, 4), (6, 7, 8)),
    dset_coords=(
        (0, 3, 0), (1, 1, 0), (2, 3, 0), (3, 3, 0), (5, 4, 0), (7, 0, 0), (7, 1, 0),
        (7, 2, 0), (8, 4, 0),
        (0, 3, 1), (3, 1, 1), (3, 4, 1), (5, 0, 1), (5, 2, 1), (6, 3, 1), (8, 1, 1),
        (0, 1, 2), (1, 4, 2), (2, 0, 2), (2, 2, 2), (4, 3, 2), (6, 1, 2), (7, 1, 2),
        (7, 4, 2), (8, 3, 2),
    ),
    gamma_x=3,
    gamma_y=2,
    gamma_z=1,
    gamma_product=25,
    named_colors={},
    maximal_maroon_fiber=(1, 1),
)


def paper_example(example_id: int) -> PaperExample:
    """Exact transcription of worked example 1 or 2, validated at load."""
    if example_id == 1:
        ex = PaperExample(**_EXAMPLE1)
    elif example_id == 2:
        ex = PaperExample(**_EXAMPLE2)
    else:
        raise InvalidArgumentError(f"example id must be 1 or 2, got {example_id}")
    p = ex.product()
    d = ex.dset(p)
    if len(d) != ex.gamma_product:
        raise ReproductionError(f"transcribed D has {len(d)} vertices, expected {ex.gamma_product}")
    if not is_dominating(p.flat, d):
        raise ReproductionError("transcribed D does not dominate the product")
    validate_partition(ex.x, ex.dominators, [VertexSet.of(c) for c in ex.cells])
    return ex


def _golden_coloring_data(example_id: int) -> dict:
    name = f"example{example_id}_coloring.json"
    with resources.files("domcells.golden").joinpath(name).open("r", encoding="utf-8") as fh:
        return json.load(fh)


# -- reports -----------------------------------------------------------------


@dataclass
class InstanceReport:
    index: int
    factors: dict
    gammas: dict
    status: str  # "ok" or "skipped-unproven"
    checks: list = field(default_factory=list)
    ledger_summary: dict | None = None
    extras: dict = field(default_factory=dict)
    slack: Fraction | None = None

    @property
    def all_passed(self) -> bool:
        return all(c["passed"] for c in self.checks)

    def to_json(self) -> dict:
        out = {
            "index": self.index,
            "factors": self.factors,
            "gammas": self.gammas,
            "status": self.status,
            "checks": self.checks,
        }
        if self.ledger_summary is not None:
            out["ledger"] = self.ledger_summary
        if self.extras:
            out["extras"] = self.extras
        if self.slack is not None:
            out["slack"] = exact_str(self.slack)
        return out


@dataclass
class RunReport:
    kind: str  # "example" or "fuzz"
    config: dict
    instances: list[InstanceReport]

    @property
    def all_passed(self) -> bool:
        return all(inst.all_passed for inst in self.instances)

    def summary(self) -> dict:
        checked = [i for i in self.instances if i.status == "ok"]
        failed = sum(
            sum(1 for c in inst.checks if not c["passed"]) for inst in self.instances
        )
        slacks = [i.slack for i in checked if i.slack is not None]
        return {
            "instances": len(self.instances),
            "proven": len(checked),
            "skipped_unproven": len(self.instances) - len(checked),
            "checks_failed": failed,
            "min_slack": exact_str(min(slacks)) if slacks else None,
        }

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "kind": self.kind,
            "config": self.config,
            "summary": self.summary(),
            "instances": [inst.to_json() for inst in self.instances],
        }

    def to_json_text(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1) + "\n"


def _graph_summary(g: Graph) -> dict:
    return {"n": g.n, "m": g.edge_count, "edges": [list(e) for e in g.edges()]}


def _gamma_summary(r: GammaResult) -> dict:
    return {
        "gamma": r.gamma,
        "proven": r.proven_optimal,
        "lower_bound": r.lower_bound,
        "witness": sorted(r.witness),
        "nodes": r.nodes_explored,
    }


def _ledger_summary(ledger: ColorLedger) -> dict:
    return {
        "cells": {c.value: ledger.cells[c] for c in CellColor},
        "d_vertices": {c.value: ledger.dverts[c] for c in CellColor if ledger.dverts[c]},
        "total_cells": ledger.total_cells(),
    }


def run_applicable_checks(
    coloring: CellColoring,
    ledger: ColorLedger,
    gamma_x: int | GammaResult,
    gamma_y: int | GammaResult,
    gamma_z: int | GammaResult,
    gamma_product: int | GammaResult,
    only: Sequence[str] | None = None,
) -> list[CheckReport]:
    """Every checker whose structural precondition holds, in a fixed order.
    ``only`` filters by check name (see CHECK_NAMES)."""
    n = coloring.product.nz
    runners = {
        "lemma1": lambda: check_lemma1(ledger, gamma_y),
        "lemma2": lambda: check_lemma2(ledger, gamma_z),
        "lemma3": lambda: check_lemma3(ledger, gamma_x),
        "p2": lambda: check_p2_complement(coloring),
        "obs": lambda: check_observations(coloring),
        "fiber-maroon": lambda: check_fiber_maroon(ledger),
        "main-lemma": lambda: check_main_lemma(ledger, gamma_product, n),
        "theorem": lambda: check_theorem_bound(gamma_product, gamma_x, gamma_y, n),
        "combined": lambda: check_combined_inequality(ledger, gamma_x, gamma_y, n),
    }
    reports = []
    for name, run in runners.items():
        if only is not None and name not in only:
            continue
        try:
            reports.append(run())
        except NotApplicableError:
            continue
    return reports


CHECK_NAMES = (
    "lemma1",
    "lemma2",
    "lemma3",
    "p2",
    "obs",
    "fiber-maroon",
    "main-lemma",
    "theorem",
    "combined",
)


# -- example reproduction ----------------------------------------------------


def reproduce_example(
    example_id: int,
    budget: Budget | None = None,
    solve_product: bool = True,
) -> RunReport:
    """Rebuild a worked example from its transcription, compare the coloring
    against the golden record cell by cell, run every applicable checker, and
    (within budget) re-prove the gamma values with the exact solver."""
    ex = paper_example(example_id)
    p = ex.product()
    d = ex.dset(p)

    if example_id == 2:
        # The published partition must be what the default rule produces.
        partition = build_partition(ex.x, ex.dominators)
        if tuple(tuple(sorted(c)) for c in partition.cells) != ex.cells:
            raise ReproductionError("default partition rule diverged from the published cells")
        if budget is None:
            budget = Budget(max_seconds=900.0)
    else:
        partition = validate_partition(ex.x, ex.dominators, [VertexSet.of(c) for c in ex.cells])

    coloring = color_cells(partition, p, d)

    golden = _golden_coloring_data(example_id)
    for i in range(partition.k):
        for y in range(p.ny):
            for z in range(p.nz):
                want = golden["colors"][i][y][z]
                got = coloring.colors[i][y][z].value
                if got != want:
                    raise ReproductionError(
                        f"cell ({i},{y},{z}) colored {got}, golden record says {want}"
                    )
    for (i, y, z), want in ex.named_colors.items():
        got = coloring.colors[i][y][z]
        if got is not want:
            raise ReproductionError(f"cell ({i},{y},{z}) colored {got.value}, paper says {want.value}")

    ledger = count_colors(coloring)
    checks = run_applicable_checks(
        coloring, ledger, ex.gamma_x, ex.gamma_y, ex.gamma_z, ex.gamma_product
    )

    gammas = {}
    extras = {"example_id": example_id, "d_size": len(d)}
    if solve_product:
        rx = gamma_exact(ex.x)
        ry = gamma_exact(ex.y)
        rz = gamma_exact(ex.z)
        for name, result, published in (("x", rx, ex.gamma_x), ("y", ry, ex.gamma_y), ("z", rz, ex.gamma_z)):
            if result.gamma != published:
                raise ReproductionError(
                    f"solver found gamma({name.upper()}) = {result.gamma}, paper says {published}"
                )
            gammas[name] = _gamma_summary(result)
        rp = gamma_exact(p.flat, budget)
        gammas["product"] = _gamma_summary(rp)
        if rp.proven_optimal and rp.gamma != ex.gamma_product:
            raise ReproductionError(
                f"solver proved gamma = {rp.gamma}, paper says {ex.gamma_product}"
            )
        if not rp.proven_optimal and rp.gamma < ex.gamma_product:
            raise ReproductionError(
                f"solver found a dominating set of {rp.gamma} < published {ex.gamma_product}"
            )
        extras["product_proven"] = rp.proven_optimal
    else:
        gammas = {
            "x": {"gamma": ex.gamma_x, "proven": True},
            "y": {"gamma": ex.gamma_y, "proven": True},
            "z": {"gamma": ex.gamma_z, "proven": True},
            "product": {"gamma": ex.gamma_product, "proven": True},
        }

    if ex.maximal_maroon_fiber is not None:
        maroons = {
            key: counts[CellColor.MAROON] for key, counts in ledger.cells_iy.items()
        }
        peak = max(maroons.values())
        argmax = sorted(key for key, v in maroons.items() if v == peak)
        if ex.maximal_maroon_fiber not in argmax:
            raise ReproductionError(
                f"maximal-maroon Z-fiber is {argmax}, paper names {ex.maximal_maroon_fiber}"
            )
        pattern = [c.value for c in coloring.z_fiber_colors(*ex.maximal_maroon_fiber)]
        if pattern[0] != "maroon" or pattern[-1] != "maroon" or pattern[1] not in ("blue", "green"):
            raise ReproductionError(f"maximal-maroon fiber pattern {pattern} is not maroon/blue-or-green/maroon")
        extras["maximal_maroon_fiber"] = list(ex.maximal_maroon_fiber)
        extras["maximal_maroon_pattern"] = pattern

    status = "ok"
    inst = InstanceReport(
        index=0,
        factors={"x": _graph_summary(ex.x), "y": _graph_summary(ex.y), "z": _graph_summary(ex.z)},
        gammas=gammas,
        status=status,
        checks=[c.to_json() for c in checks],
        ledger_summary=_ledger_summary(ledger),
        extras=extras,
        slack=Fraction(ex.gamma_product)
        / (cn_coefficient(p.nz) * gamma_path(p.nz) * ex.gamma_x * ex.gamma_y),
    )
    return RunReport(kind="example", config={"example_id": example_id}, instances=[inst])


# -- fuzz campaigns ----------------------------------------------------------


@dataclass(frozen=True)
class FuzzConfig:
    instances: int
    seed: int
    max_x: int = 8
    max_y: int = 6
    n_values: tuple[int, ...] = (1, 2, 3, 4)
    p_values: tuple[float, ...] = (0.2, 0.4, 0.6)
    node_budget: int = 600_000
    max_product_order: int = 160

    def __post_init__(self):
        if self.instances < 0 or self.max_x < 1 or self.max_y < 1:
            raise InvalidArgumentError("bad fuzz configuration")
        if not self.n_values or any(n < 1 for n in self.n_values):
            raise InvalidArgumentError("n_values must be positive")
        if any(not 0.0 <= p <= 1.0 for p in self.p_values):
            raise InvalidArgumentError("edge probabilities must lie in [0, 1]")
        if self.max_product_order < 1:
            raise InvalidArgumentError("max_product_order must be positive")

    def to_json(self) -> dict:
        return {
            "instances": self.instances,
            "seed": self.seed,
            "max_x": self.max_x,
            "max_y": self.max_y,
            "n_values": list(self.n_values),
            "p_values": list(self.p_values),
            "node_budget": self.node_budget,
            "max_product_order": self.max_product_order,
        }


def _draw_instance_params(cfg: FuzzConfig, rng: Random) -> dict:
    while True:
        nx = rng.randint(1, cfg.max_x)
        ny = rng.randint(1, cfg.max_y)
        n = rng.choice(cfg.n_values)
        if nx * ny * n <= cfg.max_product_order:
            break
    return {
        "nx": nx,
        "ny": ny,
        "n": n,
        "px": rng.choice(cfg.p_values),
        "py": rng.choice(cfg.p_values),
        "seed_x": rng.getrandbits(32),
        "seed_y": rng.getrandbits(32),
    }


def _run_fuzz_instance(args: tuple[int, dict, int]) -> InstanceReport:
    index, params, node_budget = args
    x = random_gnp(params["nx"], params["px"], params["seed_x"]).relabel("X")
    y = random_gnp(params["ny"], params["py"], params["seed_y"]).relabel("Y")
    z = path_graph(params["n"])
    p = cartesian3(x, y, z)

    rx = gamma_exact(x)
    ry = gamma_exact(y)
    rz = gamma_exact(z)
    rp = gamma_exact(p.flat, Budget(max_nodes=node_budget))

    factors = {"x": _graph_summary(x), "y": _graph_summary(y), "z": _graph_summary(z)}
    factors["params"] = {k: params[k] for k in sorted(params)}
    gammas = {"x": _gamma_summary(rx), "y": _gamma_summary(ry), "z": _gamma_summary(rz),
              "product": _gamma_summary(rp)}

    if not rp.proven_optimal:
        return InstanceReport(index=index, factors=factors, gammas=gammas, status="skipped-unproven")

    partition = build_partition(x, sorted(rx.witness))
    coloring = color_cells(partition, p, rp.witness)
    ledger = count_colors(coloring)
    checks = run_applicable_checks(coloring, ledger, rx, ry, rz, rp)
    slack = Fraction(rp.gamma) / (
        cn_coefficient(p.nz) * gamma_path(p.nz) * rx.gamma * ry.gamma
    )
    return InstanceReport(
        index=index,
        factors=factors,
        gammas=gammas,
        status="ok",
        checks=[c.to_json() for c in checks],
        ledger_summary=_ledger_summary(ledger),
        slack=slack,
    )


def worker_count() -> int:
    raw = os.environ.get("DOMCELLS_THREADS", "1")
    try:
        count = int(raw)
    except ValueError:
        raise InvalidArgumentError(f"DOMCELLS_THREADS={raw!r} is not an integer") from None
    return max(1, count)


def fuzz(cfg: FuzzConfig) -> RunReport:
    """Seeded campaign: the report is a pure function of the config."""
    rng = Random(cfg.seed)
    jobs = [(i, _draw_instance_params(cfg, rng), cfg.node_budget) for i in range(cfg.instances)]
    workers = worker_count()
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            instances = list(pool.map(_run_fuzz_instance, jobs, chunksize=1))
    else:
        instances = [_run_fuzz_instance(job) for job in jobs]
    instances.sort(key=lambda inst: inst.index)
    return RunReport(kind="fuzz", config=cfg.to_json(), instances=instances)
