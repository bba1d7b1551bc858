"""Dominating partitions, cells, domination flags, and the eight-color scheme.

A dominating partition of X splits V(X) into classes pi_1..pi_k around an
ordered minimum dominating set u_1..u_k with u_i in pi_i and pi_i inside
N[u_i]. Each class copied to a fixed (y, z) is a cell; cells are classified
by whether they meet the product's dominating set D and whether any member is
Y- or Z-dominated.

Direction semantics: a product vertex is X-dominated by a D-vertex in its
X-fiber within the closed X-neighborhood (so D-vertices X-dominate
themselves), while Y- and Z-domination use the open neighborhoods of the
other two factors. This is the reading under which every color named in the
worked examples comes out right, and it is unit-tested against them.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .domination import gamma_exact, is_dominating
from .errors import (
    InvalidArgumentError,
    NotDominatingError,
    NotMinimumError,
    PartitionError,
)
from .graphs import Graph, VertexSet
from .product import TripleProduct


class CellColor(Enum):
    BLUE = "blue"
    GREEN = "green"
    YELLOW = "yellow"
    ORANGE = "orange"
    RED = "red"
    PINK = "pink"
    MAROON = "maroon"
    WHITE = "white"

    def __str__(self) -> str:  # JSON / report friendly
        return self.value


#: Colors of cells that meet D; a D-vertex inherits its cell's color, so these
#: are also the only possible D-vertex colors.
D_COLORS = frozenset({CellColor.BLUE, CellColor.GREEN, CellColor.YELLOW, CellColor.ORANGE})

_TRUTH_TABLE = {
    (True, False, False): CellColor.BLUE,
    (True, True, False): CellColor.GREEN,
    (True, False, True): CellColor.YELLOW,
    (True, True, True): CellColor.ORANGE,
    (False, False, False): CellColor.RED,
    (False, True, False): CellColor.PINK,
    (False, False, True): CellColor.MAROON,
    (False, True, True): CellColor.WHITE,
}


def classify(has_d: bool, any_y: bool, any_z: bool) -> CellColor:
    """Eight-way cell classification from (meets D, has Y-dominated member,
    has Z-dominated member)."""
    return _TRUTH_TABLE[(bool(has_d), bool(any_y), bool(any_z))]


@dataclass(frozen=True)
class DominatingPartition:
    base: Graph
    dominators: tuple[int, ...]  # ordered u_1..u_k, k = gamma(base)
    cells: tuple[VertexSet, ...]

    @property
    def k(self) -> int:
        return len(self.dominators)

    def cell_of(self, v: int) -> int:
        for i, cell in enumerate(self.cells):
            if v in cell:
                return i
        raise InvalidArgumentError(f"vertex {v} not in any cell")


def _check_minimum_dominating(x: Graph, dominators: Sequence[int]) -> tuple[int, ...]:
    doms = tuple(dominators)
    if len(set(doms)) != len(doms):
        raise InvalidArgumentError("repeated dominator")
    for u in doms:
        x.check_vertex(u)
    dset = VertexSet.of(doms)
    if not is_dominating(x, dset):
        raise NotDominatingError(f"{list(doms)} does not dominate the base graph")
    gamma = gamma_exact(x).gamma
    if len(doms) != gamma:
        raise NotMinimumError(f"|dominators| = {len(doms)} but gamma = {gamma}")
    return doms


def build_partition(x: Graph, dominators: Sequence[int]) -> DominatingPartition:
    """Default assignment: every non-dominator joins the cell of the smallest
    index i with v in N[u_i]; each u_i stays in its own cell."""
    doms = _check_minimum_dominating(x, dominators)
    owner = {u: i for i, u in enumerate(doms)}
    masks = [0] * len(doms)
    for v in range(x.n):
        if v in owner:
            masks[owner[v]] |= 1 << v
            continue
        nb = x.neighbor_mask(v)
        for i, u in enumerate(doms):
            if (nb >> u) & 1:
                masks[i] |= 1 << v
                break
    return DominatingPartition(x, doms, tuple(VertexSet(m) for m in masks))


def validate_partition(
    x: Graph, dominators: Sequence[int], cells: Sequence[VertexSet | Iterable[int]]
) -> DominatingPartition:
    """Accept an explicitly supplied partition after checking every invariant;
    violations name the offending cell index and vertex."""
    doms = _check_minimum_dominating(x, dominators)
    normalized = tuple(c if isinstance(c, VertexSet) else VertexSet.of(c) for c in cells)
    if len(normalized) != len(doms):
        raise PartitionError(f"{len(normalized)} cells for {len(doms)} dominators")
    union = 0
    for i, cell in enumerate(normalized):
        overlap = union & cell.mask
        if overlap:
            v = (overlap & -overlap).bit_length() - 1
            raise PartitionError(f"vertex {v} appears in two cells", cell=i, vertex=v)
        union |= cell.mask
        if doms[i] not in cell:
            raise PartitionError(f"dominator {doms[i]} missing from its cell {i}", cell=i, vertex=doms[i])
        closed = x.neighbor_mask(doms[i]) | (1 << doms[i])
        stray = cell.mask & ~closed
        if stray:
            v = (stray & -stray).bit_length() - 1
            raise PartitionError(
                f"vertex {v} in cell {i} lies outside N[{doms[i]}]", cell=i, vertex=v
            )
    if union != (1 << x.n) - 1:
        gap = (~union) & ((1 << x.n) - 1)
        missing = (gap & -gap).bit_length() - 1
        raise PartitionError(f"vertex {missing} not covered by any cell", vertex=missing)
    return DominatingPartition(x, doms, normalized)


@dataclass(frozen=True)
class DominationFlags:
    """Per product vertex: is it dominated from within its X-, Y-, Z-fiber."""

    x_dom: int  # bitmasks over flat ids
    y_dom: int
    z_dom: int

    def x_dominated(self, flat_id: int) -> bool:
        return (self.x_dom >> flat_id) & 1 == 1

    def y_dominated(self, flat_id: int) -> bool:
        return (self.y_dom >> flat_id) & 1 == 1

    def z_dominated(self, flat_id: int) -> bool:
        return (self.z_dom >> flat_id) & 1 == 1


def domination_flags(p: TripleProduct, d: VertexSet) -> DominationFlags:
    """X uses closed neighborhoods (a D-vertex dominates itself within its
    X-fiber); Y and Z use open neighborhoods."""
    if d.mask >> p.flat.n:
        raise InvalidArgumentError("dominating-set member out of range")
    if not is_dominating(p.flat, d):
        raise NotDominatingError("D does not dominate the product")
    gx, gy, gz = p.factor_x, p.factor_y, p.factor_z
    nx, ny = p.nx, p.ny
    x_dom = y_dom = z_dom = 0
    for f in d:
        rest, a = divmod(f, nx)
        c, b = divmod(rest, ny)
        base = f - a
        xm = gx.neighbor_mask(a) | (1 << a)
        while xm:
            low = xm & -xm
            x_dom |= 1 << (base + low.bit_length() - 1)
            xm ^= low
        ym = gy.neighbor_mask(b)
        while ym:
            low = ym & -ym
            y_dom |= 1 << ((c * ny + low.bit_length() - 1) * nx + a)
            ym ^= low
        zm = gz.neighbor_mask(c)
        while zm:
            low = zm & -zm
            z_dom |= 1 << (((low.bit_length() - 1) * ny + b) * nx + a)
            zm ^= low
    return DominationFlags(x_dom, y_dom, z_dom)


def cell_members(p: TripleProduct, partition: DominatingPartition, i: int, y: int, z: int) -> VertexSet:
    """Flat ids of the cell pi_i^{y,z} = {(a, y, z) : a in pi_i}."""
    if not (0 <= i < partition.k):
        raise InvalidArgumentError(f"cell index {i} out of range")
    if not (0 <= y < p.ny and 0 <= z < p.nz):
        raise InvalidArgumentError(f"fiber coordinate ({y}, {z}) out of range")
    base = (z * p.ny + y) * p.nx
    return VertexSet(partition.cells[i].mask << base)


@dataclass(frozen=True)
class CellColoring:
    partition: DominatingPartition
    product: TripleProduct
    dset: VertexSet
    colors: tuple[tuple[tuple[CellColor, ...], ...], ...]  # [i][y][z]
    flags: DominationFlags

    @property
    def k(self) -> int:
        return self.partition.k

    def color(self, i: int, y: int, z: int) -> CellColor:
        return self.colors[i][y][z]

    def cell_members(self, i: int, y: int, z: int) -> VertexSet:
        return cell_members(self.product, self.partition, i, y, z)

    def z_fiber_colors(self, i: int, y: int) -> tuple[CellColor, ...]:
        """Colors along the Z-fiber Z_{i,y} in z-id order."""
        return self.colors[i][y]


def color_cells(partition: DominatingPartition, p: TripleProduct, d: VertexSet) -> CellColoring:
    """Classify every cell of the product against the dominating set d."""
    if partition.base != p.factor_x:
        raise InvalidArgumentError("partition base is not the product's X factor")
    flags = domination_flags(p, d)
    colors = []
    for i in range(partition.k):
        cell_mask = partition.cells[i].mask
        rows = []
        for y in range(p.ny):
            row = []
            for z in range(p.nz):
                m = cell_mask << ((z * p.ny + y) * p.nx)
                row.append(
                    classify(m & d.mask != 0, m & flags.y_dom != 0, m & flags.z_dom != 0)
                )
            rows.append(tuple(row))
        colors.append(tuple(rows))
    return CellColoring(partition, p, d, tuple(colors), flags)


@dataclass(frozen=True)
class ColorLedger:
    """All cell and D-vertex counts the inequality checkers consume.

    Primed quantities count cells of a color; unprimed count D-vertices lying
    in cells of that color. Fiber keys: (i, z) for Y-fibers, (y, z) for
    X-fibers, (i, y) for Z-fibers.
    """

    k: int
    ny: int
    nz: int
    d_size: int
    z_is_path: bool
    cells: Mapping[CellColor, int]
    cells_iz: Mapping[tuple[int, int], Mapping[CellColor, int]]
    cells_yz: Mapping[tuple[int, int], Mapping[CellColor, int]]
    cells_iy: Mapping[tuple[int, int], Mapping[CellColor, int]]
    dverts: Mapping[CellColor, int]
    dverts_iz: Mapping[tuple[int, int], Mapping[CellColor, int]]
    dverts_yz: Mapping[tuple[int, int], Mapping[CellColor, int]]
    dverts_iy: Mapping[tuple[int, int], Mapping[CellColor, int]]

    def total_cells(self) -> int:
        return sum(self.cells.values())


def _zero_counts() -> dict[CellColor, int]:
    return {color: 0 for color in CellColor}


def count_colors(coloring: CellColoring) -> ColorLedger:
    p = coloring.product
    k, ny, nz = coloring.k, p.ny, p.nz
    cells = _zero_counts()
    cells_iz = {(i, z): _zero_counts() for i in range(k) for z in range(nz)}
    cells_yz = {(y, z): _zero_counts() for y in range(ny) for z in range(nz)}
    cells_iy = {(i, y): _zero_counts() for i in range(k) for y in range(ny)}
    dverts = _zero_counts()
    dverts_iz = {(i, z): _zero_counts() for i in range(k) for z in range(nz)}
    dverts_yz = {(y, z): _zero_counts() for y in range(ny) for z in range(nz)}
    dverts_iy = {(i, y): _zero_counts() for i in range(k) for y in range(ny)}
    for i in range(k):
        cell_mask = coloring.partition.cells[i].mask
        for y in range(ny):
            for z in range(nz):
                color = coloring.colors[i][y][z]
                cells[color] += 1
                cells_iz[i, z][color] += 1
                cells_yz[y, z][color] += 1
                cells_iy[i, y][color] += 1
                nd = (cell_mask << ((z * ny + y) * p.nx)) & coloring.dset.mask
                if nd:
                    cnt = nd.bit_count()
                    dverts[color] += cnt
                    dverts_iz[i, z][color] += cnt
                    dverts_yz[y, z][color] += cnt
                    dverts_iy[i, y][color] += cnt
    return ColorLedger(
        k=k,
        ny=ny,
        nz=nz,
        d_size=len(coloring.dset),
        z_is_path=p.canonical_path,
        cells=cells,
        cells_iz=cells_iz,
        cells_yz=cells_yz,
        cells_iy=cells_iy,
        dverts=dverts,
        dverts_iz=dverts_iz,
        dverts_yz=dverts_yz,
        dverts_iy=dverts_iy,
    )


# -- serialization -----------------------------------------------------------


def _graph_to_json(g: Graph) -> dict:
    return {"n": g.n, "edges": [list(e) for e in g.edges()], "label": g.label}


def _graph_from_json(data: dict) -> Graph:
    return Graph(data["n"], [tuple(e) for e in data["edges"]], label=data.get("label"))


def coloring_to_json(coloring: CellColoring) -> dict:
    p = coloring.product
    return {
        "schema": 1,
        "factors": {
            "x": _graph_to_json(p.factor_x),
            "y": _graph_to_json(p.factor_y),
            "z": _graph_to_json(p.factor_z),
        },
        "dominating_set": sorted(coloring.dset),
        "partition": {
            "dominators": list(coloring.partition.dominators),
            "cells": [sorted(c) for c in coloring.partition.cells],
        },
        "colors": [
            [[coloring.colors[i][y][z].value for z in range(p.nz)] for y in range(p.ny)]
            for i in range(coloring.k)
        ],
    }


def coloring_from_json(data: dict) -> CellColoring:
    """Rebuild a coloring from its JSON form, recomputing every cell color and
    refusing input whose stored table disagrees with the recomputation."""
    from .product import cartesian3  # local import to avoid cycle noise

    if data.get("schema") != 1:
        raise InvalidArgumentError(f"unsupported schema {data.get('schema')!r}")
    x = _graph_from_json(data["factors"]["x"])
    y = _graph_from_json(data["factors"]["y"])
    z = _graph_from_json(data["factors"]["z"])
    p = cartesian3(x, y, z)
    partition = validate_partition(
        x, data["partition"]["dominators"], [VertexSet.of(c) for c in data["partition"]["cells"]]
    )
    coloring = color_cells(partition, p, VertexSet.of(data["dominating_set"]))
    stored = data["colors"]
    for i in range(coloring.k):
        for b in range(p.ny):
            for c in range(p.nz):
                if coloring.colors[i][b][c].value != stored[i][b][c]:
                    raise InvalidArgumentError(
                        f"stored color {stored[i][b][c]!r} at cell ({i},{b},{c})"
                        f" disagrees with recomputed {coloring.colors[i][b][c].value!r}"
                    )
    return coloring
