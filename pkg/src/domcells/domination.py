"""Exact and heuristic minimum dominating sets.

gamma_exact runs branch-and-bound over the set cover by closed neighborhoods:
branch on an uncovered vertex with the fewest remaining dominators, over its
closed neighborhood, pruning with a greedy upper bound and admissible lower
bounds (ceil(uncovered / max coverage), a disjoint-ball packing, and a
Lagrangian dual bound kept in exact fixed-point integers so results are
deterministic). Connected components are solved independently and summed.
"""

from __future__ import annotations

import sys
import time
from dataclasses import dataclass

from .errors import InvalidArgumentError, NotDominatingError
from .graphs import Graph, VertexSet, connected_components

_INF = 1 << 30
_SCALE = 1 << 16  # fixed-point unit for dual multipliers
_TUNE_MIN_ORDER = 24  # skip subgradient tuning below this component size
_TUNE_ITERS = 300
_TIME_CHECK_MASK = 0xFFF


@dataclass(frozen=True)
class Budget:
    """Optional search limits. Node budgets are deterministic; time budgets
    make the proven/unproven flag machine-dependent but never the gamma of a
    proven result."""

    max_nodes: int | None = None
    max_seconds: float | None = None


@dataclass(frozen=True)
class GammaResult:
    gamma: int
    witness: VertexSet
    proven_optimal: bool
    lower_bound: int
    nodes_explored: int
    elapsed: float

    def __post_init__(self):
        if self.proven_optimal and self.lower_bound != self.gamma:
            raise InvalidArgumentError("proven result must have lower_bound == gamma")


def is_dominating(g: Graph, s: VertexSet) -> bool:
    """True iff every vertex of g has N[v] meeting s."""
    if s.mask >> g.n:
        raise InvalidArgumentError("set member out of range")
    covered = s.mask
    m = s.mask
    while m:
        low = m & -m
        covered |= g.neighbor_mask(low.bit_length() - 1)
        m ^= low
    return covered == (1 << g.n) - 1


def greedy_upper_bound(g: Graph) -> VertexSet:
    """Dominating set grown by max new coverage, ties to the smallest id."""
    if g.n < 1:
        raise InvalidArgumentError("empty graph")
    cov = [g.neighbor_mask(v) | (1 << v) for v in range(g.n)]
    uncovered = (1 << g.n) - 1
    chosen = 0
    while uncovered:
        best_v = 0
        best_gain = -1
        for v in range(g.n):
            gain = (cov[v] & uncovered).bit_count()
            if gain > best_gain:
                best_gain = gain
                best_v = v
        chosen |= 1 << best_v
        uncovered &= ~cov[best_v]
    return VertexSet(chosen)


def gamma_path(n: int) -> int:
    """gamma(P_n) = ceil(n/3)."""
    if n < 1:
        raise InvalidArgumentError("path length must be >= 1")
    return (n + 2) // 3


class _BudgetClock:
    __slots__ = ("max_nodes", "deadline", "nodes", "exhausted")

    def __init__(self, budget: Budget | None):
        self.max_nodes = budget.max_nodes if budget else None
        self.deadline = None
        if budget and budget.max_seconds is not None:
            self.deadline = time.monotonic() + budget.max_seconds
        self.nodes = 0
        self.exhausted = False

    def tick(self) -> bool:
        """Count a node; returns True once the budget is gone."""
        self.nodes += 1
        if self.exhausted:
            return True
        if self.max_nodes is not None and self.nodes > self.max_nodes:
            self.exhausted = True
        elif self.deadline is not None and (self.nodes & _TIME_CHECK_MASK) == 0:
            if time.monotonic() > self.deadline:
                self.exhausted = True
        return self.exhausted


def _tune_multipliers(cov_lists: list[list[int]], ub: int, iters: int = _TUNE_ITERS) -> list[int]:
    """Subgradient ascent on the set-cover Lagrangian dual; returns fixed-point
    multipliers (floor of the best float iterate, so the bound stays valid)."""
    n = len(cov_lists)
    y = [1.0 / len(cov_lists[c]) for c in range(n)]
    best_l = -1e30
    best_y = list(y)
    lam = 2.0
    stall = 0
    for _ in range(iters):
        s = [0.0] * n
        for c in range(n):
            t = 0.0
            for e in cov_lists[c]:
                t += y[e]
            s[c] = t
        value = sum(y) - sum(sc - 1.0 for sc in s if sc > 1.0)
        if value > best_l + 1e-9:
            best_l = value
            best_y = list(y)
            stall = 0
        else:
            stall += 1
            if stall >= 15:
                lam *= 0.5
                stall = 0
        g = [1.0] * n
        for c in range(n):
            if s[c] > 1.0:
                for e in cov_lists[c]:
                    g[e] -= 1.0
        gg = sum(ge * ge for ge in g)
        if gg < 1e-12 or lam < 1e-6:
            break
        step = lam * max(ub - value, 0.25) / gg
        for e in range(n):
            v = y[e] + step * g[e]
            y[e] = v if v > 0.0 else 0.0
    return [int(v * _SCALE) for v in best_y]


def _solve_component(cov: list[int], clock: _BudgetClock) -> tuple[int, int, int, bool]:
    """Exact set cover over one component.

    cov[c] is the bitmask closed neighborhood of local vertex c. Returns
    (best size, best mask, proven lower bound, proven flag).
    """
    n = len(cov)
    full = (1 << n) - 1

    # Root reductions. A candidate whose coverage sits inside another's can be
    # dropped; an element whose dominator set contains another element's can be
    # dropped from the universe (covering the latter covers it for free).
    active0 = full
    for c in range(n):
        cc = cov[c]
        for c2 in range(n):
            if c2 != c and (active0 >> c2) & 1 and cc | cov[c2] == cov[c2] and (cc != cov[c2] or c2 < c):
                active0 &= ~(1 << c)
                break
    universe = full
    for e in range(n):
        de = cov[e]
        for e2 in range(n):
            if e2 != e and (universe >> e2) & 1 and de | cov[e2] == de and (de != cov[e2] or e2 < e):
                universe &= ~(1 << e)
                break

    cov_lists = [[x for x in _bits(cov[c])] for c in range(n)]
    doms_lists = cov_lists  # symmetric relation

    # Greedy upper bound over the reduced candidate set.
    uncovered = universe
    best_mask = 0
    best_size = 0
    while uncovered:
        best_c = -1
        best_gain = -1
        m = active0
        while m:
            low = m & -m
            c = low.bit_length() - 1
            m ^= low
            gain = (cov[c] & uncovered).bit_count()
            if gain > best_gain:
                best_gain = gain
                best_c = c
        best_mask |= 1 << best_c
        best_size += 1
        uncovered &= ~cov[best_c]

    if best_size <= 1:
        return best_size, best_mask, best_size, True

    y = [0] * n
    if n >= _TUNE_MIN_ORDER:
        y = _tune_multipliers(cov_lists, best_size)
        # Zero out multipliers of elements outside the reduced universe so the
        # incremental bookkeeping never has to special-case them.
        for e in range(n):
            if not (universe >> e) & 1:
                y[e] = 0

    s0 = [0] * n
    for c in range(n):
        t = 0
        for e in cov_lists[c]:
            t += y[e]
        s0[c] = t
    sum0 = sum(y[e] for e in _bits(universe))
    pen0 = sum(s0[c] - _SCALE for c in _bits(active0) if s0[c] > _SCALE)

    maxcov0 = max(cov[c].bit_count() for c in range(n))
    state = [best_size, best_mask]

    def pack_lb(uncov: int, active: int) -> int:
        picked = 0
        rem = uncov
        while rem:
            e = (rem & -rem).bit_length() - 1
            cands = cov[e] & active
            if cands == 0:
                return _INF
            blocked = 0
            while cands:
                low = cands & -cands
                blocked |= cov[low.bit_length() - 1]
                cands ^= low
            picked += 1
            rem &= ~blocked
        return picked

    def search(uncov: int, active: int, size: int, chosen: int, s: list[int], sum_y: int, pen: int) -> int:
        """Returns a proven lower bound on any completion of this node (capped
        at the incumbent); updates the incumbent in state."""
        aborted = clock.tick()
        if uncov == 0:
            if size < state[0]:
                state[0] = size
                state[1] = chosen
            return size
        lag = size + (sum_y - pen + _SCALE - 1) // _SCALE
        if lag >= state[0] or aborted:
            return lag
        h = pack_lb(uncov, active)
        if h >= _INF:
            return _INF
        bound = size + h
        ceil_b = size + (uncov.bit_count() + maxcov0 - 1) // maxcov0
        if ceil_b > bound:
            bound = ceil_b
        if lag > bound:
            bound = lag
        if bound >= state[0]:
            return bound

        best_e = -1
        best_cnt = _INF
        u = uncov
        while u:
            low = u & -u
            e = low.bit_length() - 1
            u ^= low
            cnt = (cov[e] & active).bit_count()
            if cnt < best_cnt:
                best_cnt = cnt
                best_e = e
                if cnt <= 1:
                    break
        if best_cnt == 0:
            return _INF

        branch = [(cov[c] & uncov, c) for c in doms_lists[best_e] if (active >> c) & 1]
        # Covering best_e only ever needs candidates with inclusion-maximal
        # effective coverage.
        keep = []
        for eff, c in branch:
            dominated = False
            for eff2, c2 in branch:
                if c2 != c and eff | eff2 == eff2 and (eff != eff2 or c2 < c):
                    dominated = True
                    break
            if not dominated:
                keep.append((eff.bit_count(), eff, c))
        keep.sort(key=lambda t: (-t[0], t[2]))

        excluded = 0
        child_min = _INF
        for _, eff, c in keep:
            act = active & ~excluded & ~(1 << c)
            s2 = list(s)
            sum_y2 = sum_y
            pen2 = pen - (s[c] - _SCALE if s[c] > _SCALE else 0)
            ee = eff
            while ee:
                low = ee & -ee
                e = low.bit_length() - 1
                ee ^= low
                ye = y[e]
                if ye:
                    sum_y2 -= ye
                    for c2 in doms_lists[e]:
                        old = s2[c2]
                        s2[c2] = old - ye
                        if old > _SCALE and (act >> c2) & 1:
                            pen2 -= old - _SCALE
                            if old - ye > _SCALE:
                                pen2 += old - ye - _SCALE
            child_bound = size + 1 + (sum_y2 - pen2 + _SCALE - 1) // _SCALE
            if child_bound >= state[0]:
                res = child_bound
            else:
                res = search(uncov & ~cov[c], act, size + 1, chosen | (1 << c), s2, sum_y2, pen2)
            if res < child_min:
                child_min = res
            if s[c] > _SCALE:
                pen -= s[c] - _SCALE
            excluded |= 1 << c
            if clock.exhausted:
                break
        if clock.exhausted:
            return min(child_min, bound)
        return max(bound, child_min)

    cert = search(universe, active0, 0, 0, s0, sum0, pen0)
    proven = not clock.exhausted
    lower = min(cert, state[0])
    if proven:
        lower = state[0]
    return state[0], state[1], lower, proven


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def gamma_exact(g: Graph, budget: Budget | None = None) -> GammaResult:
    """Minimum dominating set of g, proven optimal unless the budget runs out,
    in which case the best witness found and a certified lower bound are
    returned with proven_optimal False."""
    if g.n < 1:
        raise InvalidArgumentError("empty graph")
    start = time.monotonic()
    clock = _BudgetClock(budget)
    need = g.n * 3 + 1000
    if sys.getrecursionlimit() < need:
        sys.setrecursionlimit(need)

    total_size = 0
    total_mask = 0
    total_lb = 0
    proven = True
    for comp in connected_components(g):
        verts = comp.members()
        index = {v: i for i, v in enumerate(verts)}
        cov = []
        for v in verts:
            m = 1 << index[v]
            nb = g.neighbor_mask(v)
            while nb:
                low = nb & -nb
                m |= 1 << index[low.bit_length() - 1]
                nb ^= low
            cov.append(m)
        size, mask, lower, ok = _solve_component(cov, clock)
        total_size += size
        total_lb += lower
        for i in _bits(mask):
            total_mask |= 1 << verts[i]
        proven = proven and ok

    witness = VertexSet(total_mask)
    if not is_dominating(g, witness):  # pragma: no cover - internal consistency
        raise NotDominatingError("solver produced a non-dominating witness")
    return GammaResult(
        gamma=total_size,
        witness=witness,
        proven_optimal=proven,
        lower_bound=total_lb if not proven else total_size,
        nodes_explored=clock.nodes,
        elapsed=time.monotonic() - start,
    )
