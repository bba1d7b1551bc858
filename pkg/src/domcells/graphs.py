"""Simple undirected graphs with bitset adjacency, generators, and codecs.

Vertices are 0-based integer ids. Adjacency is kept as one int bitmask per
vertex, which every other module (solver, product, cells) relies on for
constant-factor-cheap intersection tests.
"""

from __future__ import annotations

import random
from typing import Iterable, Iterator

from .errors import GraphParseError, InvalidArgumentError

GRAPH6_HEADER = ">>graph6<<"
GRAPH6_MAX_ORDER = 258047


class VertexSet:
    """Immutable dense set of vertex ids backed by a single int bitmask."""

    __slots__ = ("mask",)

    def __init__(self, mask: int = 0):
        if mask < 0:
            raise InvalidArgumentError("vertex-set mask must be non-negative")
        object.__setattr__(self, "mask", mask)

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("VertexSet is immutable")

    @classmethod
    def of(cls, members: Iterable[int]) -> "VertexSet":
        mask = 0
        for v in members:
            if v < 0:
                raise InvalidArgumentError(f"negative vertex id {v}")
            mask |= 1 << v
        return cls(mask)

    def members(self) -> tuple[int, ...]:
        return tuple(self)

    def __iter__(self) -> Iterator[int]:
        m = self.mask
        while m:
            low = m & -m
            yield low.bit_length() - 1
            m ^= low

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __contains__(self, v: int) -> bool:
        return v >= 0 and (self.mask >> v) & 1 == 1

    def __and__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.mask & other.mask)

    def __or__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.mask | other.mask)

    def __sub__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.mask & ~other.mask)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, VertexSet) and self.mask == other.mask

    def __hash__(self) -> int:
        return hash(("VertexSet", self.mask))

    def __bool__(self) -> bool:
        return self.mask != 0

    def isdisjoint(self, other: "VertexSet") -> bool:
        return self.mask & other.mask == 0

    def issubset(self, other: "VertexSet") -> bool:
        return self.mask & ~other.mask == 0

    def __repr__(self) -> str:
        return f"VertexSet({{{', '.join(map(str, self))}}})"


class Graph:
    """Simple finite undirected graph on vertices 0..n-1.

    Invariants enforced at construction: no self-loops, symmetric adjacency,
    all ids in range. Instances are immutable and safe to share.
    """

    __slots__ = ("n", "label", "_adj")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = (), label: str | None = None):
        if n < 1:
            raise InvalidArgumentError(f"graph order must be >= 1, got {n}")
        adj = [0] * n
        for u, v in edges:
            if u == v:
                raise InvalidArgumentError(f"self-loop at vertex {u} rejected")
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidArgumentError(f"edge ({u},{v}) out of range for order {n}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "label", label)
        object.__setattr__(self, "_adj", tuple(adj))

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("Graph is immutable")

    @property
    def order(self) -> int:
        return self.n

    def check_vertex(self, v: int) -> None:
        if not (0 <= v < self.n):
            raise InvalidArgumentError(f"vertex {v} out of range for order {self.n}")

    def neighbor_mask(self, v: int) -> int:
        """Open-neighborhood bitmask of v (no bounds check; hot path)."""
        return self._adj[v]

    def neighbors(self, v: int) -> VertexSet:
        self.check_vertex(v)
        return VertexSet(self._adj[v])

    def degree(self, v: int) -> int:
        self.check_vertex(v)
        return self._adj[v].bit_count()

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for u in range(self.n):
            m = self._adj[u] >> (u + 1)
            base = u + 1
            while m:
                low = m & -m
                out.append((u, base + low.bit_length() - 1))
                m ^= low
        return out

    @property
    def edge_count(self) -> int:
        return sum(m.bit_count() for m in self._adj) // 2

    def has_edge(self, u: int, v: int) -> bool:
        self.check_vertex(u)
        self.check_vertex(v)
        return (self._adj[u] >> v) & 1 == 1

    def relabel(self, label: str | None) -> "Graph":
        g = Graph.__new__(Graph)
        object.__setattr__(g, "n", self.n)
        object.__setattr__(g, "label", label)
        object.__setattr__(g, "_adj", self._adj)
        return g

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self._adj == other._adj

    def __hash__(self) -> int:
        return hash((self.n, self._adj))

    def __repr__(self) -> str:
        name = f" {self.label!r}" if self.label else ""
        return f"Graph(n={self.n}, m={self.edge_count}{name})"


def closed_neighborhood(g: Graph, v: int) -> VertexSet:
    """N[v]: v together with all vertices adjacent to it."""
    g.check_vertex(v)
    return VertexSet(g.neighbor_mask(v) | (1 << v))


def path_graph(n: int) -> Graph:
    """Path on vertices 0..n-1 with edges (l, l+1); this id order is the
    canonical z_1..z_n order every path-fiber check relies on."""
    if n < 1:
        raise InvalidArgumentError("path length must be >= 1")
    return Graph(n, [(l, l + 1) for l in range(n - 1)], label=f"P{n}")


def is_canonical_path(g: Graph) -> bool:
    """True iff g is exactly the graph produced by path_graph(g.n)."""
    if g.n == 1:
        return g.edge_count == 0
    want = [0] * g.n
    for l in range(g.n - 1):
        want[l] |= 1 << (l + 1)
        want[l + 1] |= 1 << l
    return list(g._adj) == want


def random_gnp(n: int, p: float, seed: int) -> Graph:
    """Erdos-Renyi G(n, p) with a pinned generator.

    Uses random.Random(seed) (Mersenne Twister) and draws unordered pairs in
    lexicographic order, including (u, v) iff the draw is < p, so the same
    (n, p, seed) reproduces the same graph on any platform.
    """
    if n < 1:
        raise InvalidArgumentError("order must be >= 1")
    if not (0.0 <= p <= 1.0):
        raise InvalidArgumentError(f"edge probability {p} outside [0, 1]")
    rng = random.Random(seed)
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                edges.append((u, v))
    return Graph(n, edges)


def connected_components(g: Graph) -> list[VertexSet]:
    """Components ordered by smallest member id."""
    seen = 0
    out = []
    for start in range(g.n):
        if (seen >> start) & 1:
            continue
        comp = 1 << start
        frontier = 1 << start
        while frontier:
            nxt = 0
            m = frontier
            while m:
                low = m & -m
                nxt |= g.neighbor_mask(low.bit_length() - 1)
                m ^= low
            frontier = nxt & ~comp
            comp |= nxt
        seen |= comp
        out.append(VertexSet(comp))
    return out


# -- edge-list codec ---------------------------------------------------------
# Plain text: first line the order n, then one "u v" pair per line, ASCII, LF.


def parse_edge_list(text: str) -> Graph:
    lines = text.split("\n")
    if not lines or not lines[0].strip():
        raise GraphParseError("missing order line", offset=0)
    offset = 0
    try:
        n = int(lines[0].strip())
    except ValueError:
        raise GraphParseError(f"order line {lines[0]!r} is not an integer", offset=0) from None
    if n < 1:
        raise GraphParseError(f"order must be >= 1, got {n}", offset=0)
    offset = len(lines[0]) + 1
    edges = []
    for line in lines[1:]:
        stripped = line.strip()
        if stripped:
            parts = stripped.split()
            if len(parts) != 2:
                raise GraphParseError(f"expected 'u v', got {stripped!r}", offset=offset)
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise GraphParseError(f"non-integer edge {stripped!r}", offset=offset) from None
            if u == v:
                raise GraphParseError(f"loop {u} {v} rejected", offset=offset)
            if not (0 <= u < n and 0 <= v < n):
                raise GraphParseError(f"vertex id in {stripped!r} out of range [0, {n})", offset=offset)
            edges.append((u, v))
        offset += len(line) + 1
    return Graph(n, edges)


def emit_edge_list(g: Graph) -> str:
    lines = [str(g.n)]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


# -- graph6 codec ------------------------------------------------------------
# The de-facto public format: N(n) then the upper triangle column by column,
# six bits per printable byte (offset 63). Short form for n <= 62, the
# 4-byte long form up to 258047; longer graphs are out of scope.


def _g6_order(data: bytes) -> tuple[int, int]:
    """Decode N(n); returns (n, bytes consumed)."""
    if not data:
        raise GraphParseError("empty graph6 input", offset=0)
    b0 = data[0]
    if b0 == 126:  # '~'
        if len(data) < 4:
            raise GraphParseError("truncated long-form order", offset=len(data))
        if data[1] == 126:
            raise GraphParseError("graphs over 258047 vertices unsupported", offset=1)
        n = 0
        for i in range(1, 4):
            b = data[i]
            if not (63 <= b <= 126):
                raise GraphParseError(f"invalid graph6 byte {b}", offset=i)
            n = (n << 6) | (b - 63)
        if n <= 62:
            raise GraphParseError("non-canonical long-form order", offset=0)
        return n, 4
    if not (63 <= b0 <= 126):
        raise GraphParseError(f"invalid graph6 byte {b0}", offset=0)
    return b0 - 63, 1


def parse_graph6(text: str) -> Graph:
    """Decode one graph6 line; round-trips with emit_graph6."""
    s = text.strip()
    header_skip = 0
    if s.startswith(GRAPH6_HEADER):
        header_skip = len(GRAPH6_HEADER)
        s = s[header_skip:]
    try:
        data = s.encode("ascii")
    except UnicodeEncodeError:
        raise GraphParseError("graph6 input is not ASCII", offset=header_skip) from None
    n, consumed = _g6_order(data)
    if n < 1:
        raise GraphParseError("empty graph unsupported", offset=0)
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    body = data[consumed:]
    if len(body) != nbytes:
        raise GraphParseError(
            f"expected {nbytes} adjacency bytes for order {n}, got {len(body)}",
            offset=header_skip + consumed + min(len(body), nbytes),
        )
    bits = 0
    for i, b in enumerate(body):
        if not (63 <= b <= 126):
            raise GraphParseError(f"invalid graph6 byte {b}", offset=header_skip + consumed + i)
        bits = (bits << 6) | (b - 63)
    pad = nbytes * 6 - nbits
    if pad and bits & ((1 << pad) - 1):
        raise GraphParseError("nonzero padding bits", offset=header_skip + consumed + nbytes - 1)
    bits >>= pad
    edges = []
    pos = nbits
    for j in range(1, n):
        for i in range(j):
            pos -= 1
            if (bits >> pos) & 1:
                edges.append((i, j))
    return Graph(n, edges)


def emit_graph6(g: Graph) -> str:
    if g.n > GRAPH6_MAX_ORDER:
        raise InvalidArgumentError(f"order {g.n} exceeds graph6 limit {GRAPH6_MAX_ORDER}")
    out = bytearray()
    if g.n <= 62:
        out.append(63 + g.n)
    else:
        out.append(126)
        out.extend(63 + ((g.n >> shift) & 0x3F) for shift in (12, 6, 0))
    bits = 0
    nbits = 0
    for j in range(1, g.n):
        col = g.neighbor_mask(j)
        for i in range(j):
            bits = (bits << 1) | ((col >> i) & 1)
            nbits += 1
    pad = (6 - nbits % 6) % 6
    bits <<= pad
    nbits += pad
    while nbits:
        nbits -= 6
        out.append(63 + ((bits >> nbits) & 0x3F))
    return out.decode("ascii")
