"""Cartesian triple products with coordinate-addressable vertices.

Flat ids are laid out lexicographically with z outermost, then y, then x:
flat = (z * |Y| + y) * |X| + x. A two-factor product X square Y is the same
structure with Z the one-vertex graph.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .errors import InvalidArgumentError
from .graphs import Graph, is_canonical_path


class Coord3(NamedTuple):
    x: int
    y: int
    z: int


@dataclass(frozen=True)
class TripleProduct:
    factor_x: Graph
    factor_y: Graph
    factor_z: Graph
    flat: Graph
    canonical_path: bool  # factor_z is exactly path_graph(nz); O1-O6 need this

    @property
    def nx(self) -> int:
        return self.factor_x.n

    @property
    def ny(self) -> int:
        return self.factor_y.n

    @property
    def nz(self) -> int:
        return self.factor_z.n

    def to_flat(self, coord: Coord3 | tuple[int, int, int]) -> int:
        x, y, z = coord
        if not (0 <= x < self.nx and 0 <= y < self.ny and 0 <= z < self.nz):
            raise InvalidArgumentError(f"coordinate {(x, y, z)} out of range")
        return (z * self.ny + y) * self.nx + x

    def to_coord(self, flat_id: int) -> Coord3:
        if not (0 <= flat_id < self.flat.n):
            raise InvalidArgumentError(f"flat id {flat_id} out of range")
        rest, x = divmod(flat_id, self.nx)
        z, y = divmod(rest, self.ny)
        return Coord3(x, y, z)

    def x_fiber(self, y: int, z: int) -> tuple[int, ...]:
        """Flat ids (a, y, z) for all a, ordered by a."""
        base = self.to_flat((0, y, z))
        return tuple(base + a for a in range(self.nx))

    def y_fiber(self, x: int, z: int) -> tuple[int, ...]:
        base = self.to_flat((x, 0, z))
        return tuple(base + b * self.nx for b in range(self.ny))

    def z_fiber(self, x: int, y: int) -> tuple[int, ...]:
        base = self.to_flat((x, y, 0))
        return tuple(base + c * self.nx * self.ny for c in range(self.nz))

    def sidecar(self) -> dict:
        """JSON sidecar describing the coordinate layout of the flat graph."""
        return {
            "schema": 1,
            "order_x": self.nx,
            "order_y": self.ny,
            "order_z": self.nz,
            "layout": "flat = (z * ny + y) * nx + x",
            "canonical_path_z": self.canonical_path,
        }


def cartesian3(x: Graph, y: Graph, z: Graph) -> TripleProduct:
    """X square Y square Z: vertices agree in two coordinates and are adjacent
    in the remaining factor."""
    nx, ny, nz = x.n, y.n, z.n
    edges = []
    for c in range(nz):
        for b in range(ny):
            cb = (c * ny + b) * nx
            for u, v in x.edges():
                edges.append((cb + u, cb + v))
        for u, v in y.edges():
            for a in range(nx):
                edges.append(((c * ny + u) * nx + a, (c * ny + v) * nx + a))
    for u, v in z.edges():
        for b in range(ny):
            for a in range(nx):
                edges.append(((u * ny + b) * nx + a, (v * ny + b) * nx + a))
    label = " x ".join(g.label or "?" for g in (x, y, z))
    flat = Graph(nx * ny * nz, edges, label=label)
    return TripleProduct(x, y, z, flat, canonical_path=is_canonical_path(z))
