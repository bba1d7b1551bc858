"""Executable checkers for the counting lemmas, observations, and theorem
bounds, over a ColorLedger and proven gamma values.

Every comparison is exact: counts are ints, coefficients are Fractions.
Checkers accept either a plain int (a count the caller vouches for) or a
GammaResult, which is refused unless proven optimal, so a bound is never
"verified" against a mere upper bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

from .cells import CellColor, CellColoring, ColorLedger, count_colors
from .domination import GammaResult, gamma_path
from .errors import InvalidArgumentError, NotApplicableError, UnprovenGammaError

Rational = Fraction
GammaLike = Union[int, GammaResult]

_B, _G, _Y, _O = CellColor.BLUE, CellColor.GREEN, CellColor.YELLOW, CellColor.ORANGE
_R, _P, _M, _W = CellColor.RED, CellColor.PINK, CellColor.MAROON, CellColor.WHITE
_DCOLORS = (_B, _G, _Y, _O)


def exact_str(v: int | Fraction) -> str:
    f = Fraction(v)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


@dataclass(frozen=True)
class CheckItem:
    name: str
    passed: bool
    lhs: int | Fraction
    rhs: int | Fraction
    relation: str  # ">=", "<=", "=="
    locator: tuple | None = None

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "passed": self.passed,
            "lhs": exact_str(self.lhs),
            "rhs": exact_str(self.rhs),
            "relation": self.relation,
        }
        if self.locator is not None:
            out["locator"] = list(self.locator)
        return out


@dataclass(frozen=True)
class CheckReport:
    check: str
    items: tuple[CheckItem, ...]

    @property
    def passed(self) -> bool:
        return all(item.passed for item in self.items)

    def failures(self) -> tuple[CheckItem, ...]:
        return tuple(item for item in self.items if not item.passed)

    def to_json(self) -> dict:
        return {
            "check": self.check,
            "passed": self.passed,
            "items": [item.to_json() for item in self.items],
        }


def _cmp(relation: str, lhs, rhs) -> bool:
    if relation == ">=":
        return lhs >= rhs
    if relation == "<=":
        return lhs <= rhs
    if relation == "==":
        return lhs == rhs
    raise InvalidArgumentError(f"unknown relation {relation!r}")


def _item(name: str, lhs, rhs, relation: str, locator: tuple | None = None) -> CheckItem:
    return CheckItem(name, _cmp(relation, lhs, rhs), lhs, rhs, relation, locator)


def _proven_count(value: GammaLike, what: str) -> int:
    if isinstance(value, GammaResult):
        if not value.proven_optimal:
            raise UnprovenGammaError(f"{what} is not proven optimal; refusing a vacuous check")
        return value.gamma
    count = int(value)
    if count < 0:
        raise InvalidArgumentError(f"{what} must be non-negative")
    return count


def _fiber_sum(counts, colors: Iterable[CellColor]) -> int:
    return sum(counts[c] for c in colors)


# -- counting lemmas ---------------------------------------------------------


def check_lemma1(ledger: ColorLedger, gamma_y: GammaLike) -> CheckReport:
    """Cells that are not pink or white dominate each Y-projection:
    b'+g'+y'+o'+r'+m' >= gamma(X) gamma(Y) |V(Z)| globally and >= gamma(Y)
    within every Y-fiber (i, z)."""
    gy = _proven_count(gamma_y, "gamma(Y)")
    colors = (_B, _G, _Y, _O, _R, _M)
    items = [
        _item(
            "lemma1.global",
            _fiber_sum(ledger.cells, colors),
            ledger.k * gy * ledger.nz,
            ">=",
        )
    ]
    for key in sorted(ledger.cells_iz):
        items.append(
            _item("lemma1.fiber", _fiber_sum(ledger.cells_iz[key], colors), gy, ">=", key)
        )
    return CheckReport("lemma1", tuple(items))


def check_lemma2(ledger: ColorLedger, gamma_z: GammaLike) -> CheckReport:
    """Symmetric to lemma 1 with the Z-projection: b'+g'+y'+o'+r'+p' >=
    gamma(X) gamma(Z) |V(Y)|, per Z-fiber (i, y) >= gamma(Z)."""
    gz = _proven_count(gamma_z, "gamma(Z)")
    colors = (_B, _G, _Y, _O, _R, _P)
    items = [
        _item(
            "lemma2.global",
            _fiber_sum(ledger.cells, colors),
            ledger.k * gz * ledger.ny,
            ">=",
        )
    ]
    for key in sorted(ledger.cells_iy):
        items.append(
            _item("lemma2.fiber", _fiber_sum(ledger.cells_iy[key], colors), gz, ">=", key)
        )
    return CheckReport("lemma2", tuple(items))


def check_lemma3(ledger: ColorLedger, gamma_x: GammaLike) -> CheckReport:
    """b'+r' <= b+g+y+o globally, the per-X-fiber domination count
    b+g+y+o+g'+y'+o'+p'+m'+w' >= gamma(X), and the cell-total identity
    b'+g'+y'+o'+r'+p'+m'+w' = gamma(X) |V(Y)| |V(Z)|."""
    gx = _proven_count(gamma_x, "gamma(X)")
    if gx != ledger.k:
        raise InvalidArgumentError(f"gamma(X) = {gx} but the ledger has k = {ledger.k} cells per fiber")
    items = [
        _item(
            "lemma3.global",
            ledger.cells[_B] + ledger.cells[_R],
            _fiber_sum(ledger.dverts, _DCOLORS),
            "<=",
        )
    ]
    for key in sorted(ledger.cells_yz):
        lhs = _fiber_sum(ledger.dverts_yz[key], _DCOLORS) + _fiber_sum(
            ledger.cells_yz[key], (_G, _Y, _O, _P, _M, _W)
        )
        items.append(_item("lemma3.fiber", lhs, gx, ">=", key))
    items.append(
        _item("lemma3.cell-total", ledger.total_cells(), ledger.k * ledger.ny * ledger.nz, "==")
    )
    return CheckReport("lemma3", tuple(items))


# -- path-structure checks ---------------------------------------------------


def _require_path(ledger_or_coloring, min_n: int, what: str) -> int:
    if isinstance(ledger_or_coloring, ColorLedger):
        is_path, n = ledger_or_coloring.z_is_path, ledger_or_coloring.nz
    else:
        is_path = ledger_or_coloring.product.canonical_path
        n = ledger_or_coloring.product.nz
    if not is_path:
        raise NotApplicableError(f"{what} needs Z built as a canonical path")
    if n < min_n:
        raise NotApplicableError(f"{what} needs a path of length >= {min_n}, got {n}")
    return n


def check_p2_complement(coloring: CellColoring) -> CheckReport:
    """For Z = P2: the complement cell (other z) of every maroon or white cell
    is blue or green, and the exact identity b'+g' = m'+w' holds."""
    n = _require_path(coloring, 2, "the P2 complement check")
    if n != 2:
        raise NotApplicableError(f"the P2 complement check needs n = 2, got {n}")
    violations = 0
    first = None
    p = coloring.product
    for i in range(coloring.k):
        for y in range(p.ny):
            for z in range(2):
                if coloring.colors[i][y][z] in (_M, _W):
                    if coloring.colors[i][y][1 - z] not in (_B, _G):
                        violations += 1
                        if first is None:
                            first = (i, y, z)
    ledger = count_colors(coloring)
    items = (
        _item("p2.complement-of-maroon-white", violations, 0, "==", first),
        _item(
            "p2.identity",
            ledger.cells[_B] + ledger.cells[_G],
            ledger.cells[_M] + ledger.cells[_W],
            "==",
        ),
    )
    return CheckReport("p2-complement", items)


def _obs_violations(colors: tuple[CellColor, ...]) -> dict[str, list[int]]:
    """Positions violating each observation along one Z-fiber."""
    n = len(colors)
    bad: dict[str, list[int]] = {f"O{j}": [] for j in range(1, 7)}
    for l in range(n - 2):
        if colors[l] is _M and colors[l + 1] is _M and colors[l + 2] is _M:
            bad["O1"].append(l)
    if n >= 2:
        if colors[0] is _M and colors[1] is _M:
            bad["O2"].append(0)
        if n > 2 and colors[n - 2] is _M and colors[n - 1] is _M:
            bad["O2"].append(n - 2)
    for l in range(n - 1):
        if colors[l] is _M and colors[l + 1] is _M:
            for flank in (l - 1, l + 2):
                if 0 <= flank < n and colors[flank] not in _DCOLORS:
                    bad["O3"].append(l)
                    break
    for l in range(n):
        nbrs = [m for m in (l - 1, l + 1) if 0 <= m < n]
        if colors[l] is _M:
            if not any(colors[m] in _DCOLORS for m in nbrs):
                bad["O4"].append(l)
        if colors[l] in (_B, _G):
            if any(colors[m] not in (_M, _W) for m in nbrs):
                bad["O5"].append(l)
        if colors[l] in (_Y, _O):
            if not any(colors[m] in (_Y, _O) for m in nbrs):
                bad["O6"].append(l)
            elif any(colors[m] in (_R, _P) for m in nbrs):
                bad["O6"].append(l)
    return bad


def check_observations(coloring: CellColoring) -> CheckReport:
    """O1-O6 along every Z-fiber Z_{i,y}; flanking conditions apply to the
    neighbors that exist (the endpoints are covered by O2)."""
    _require_path(coloring, 2, "the fiber observations")
    p = coloring.product
    totals = {f"O{j}": 0 for j in range(1, 7)}
    first: dict[str, tuple | None] = {f"O{j}": None for j in range(1, 7)}
    for i in range(coloring.k):
        for y in range(p.ny):
            bad = _obs_violations(coloring.colors[i][y])
            for name, positions in bad.items():
                if positions:
                    totals[name] += len(positions)
                    if first[name] is None:
                        first[name] = (i, y, positions[0])
    items = tuple(
        _item(f"observations.{name}", totals[name], 0, "==", first[name])
        for name in sorted(totals)
    )
    return CheckReport("observations", items)


def check_fiber_maroon(ledger: ColorLedger) -> CheckReport:
    """Per Z-fiber: 2(b'+g') + y' + o' >= m', plus the summed global form."""
    _require_path(ledger, 1, "the per-fiber maroon inequality")
    items = []
    for key in sorted(ledger.cells_iy):
        counts = ledger.cells_iy[key]
        lhs = 2 * (counts[_B] + counts[_G]) + counts[_Y] + counts[_O]
        items.append(_item("fiber-maroon.fiber", lhs, counts[_M], ">=", key))
    lhs = 2 * (ledger.cells[_B] + ledger.cells[_G]) + ledger.cells[_Y] + ledger.cells[_O]
    items.append(_item("fiber-maroon.global", lhs, ledger.cells[_M], ">="))
    return CheckReport("fiber-maroon", tuple(items))


# -- closed-form coefficients ------------------------------------------------


def maroon_bound_factor(n: int) -> Fraction:
    """Factor f(n) with m' <= f(n) gamma(X square Y square P_n), by n mod 3."""
    if n < 1:
        raise InvalidArgumentError("path length must be >= 1")
    k, r = divmod(n, 3)
    if r == 0:
        return Fraction(2)
    if r == 1:
        return Fraction(2 * k, k + 1)
    return Fraction(2 * k + 1, k + 1)


def cn_coefficient(n: int) -> Fraction:
    """Coefficient c_n in gamma(X sq Y sq P_n) >= c_n gamma(P_n) gamma(X)
    gamma(Y): 3/4 when 3 | n, (3k+1)/(4k+2) resp. (3k+2)/(4k+3) otherwise."""
    if n < 1:
        raise InvalidArgumentError("path length must be >= 1")
    k, r = divmod(n, 3)
    if r == 0:
        return Fraction(3, 4)
    if r == 1:
        return Fraction(3 * k + 1, 4 * k + 2)
    return Fraction(3 * k + 2, 4 * k + 3)


# -- theorem-level checks ----------------------------------------------------


def check_main_lemma(ledger: ColorLedger, gamma_product: GammaLike, n: int) -> CheckReport:
    """m' <= maroon_bound_factor(n) * gamma(X square Y square P_n)."""
    gp = _proven_count(gamma_product, "gamma of the product")
    if n != ledger.nz:
        raise InvalidArgumentError(f"n = {n} but the ledger has |V(Z)| = {ledger.nz}")
    _require_path(ledger, 1, "the main maroon bound")
    factor = maroon_bound_factor(n)
    item = _item("main-lemma.maroon-total", Fraction(ledger.cells[_M]), factor * gp, "<=")
    return CheckReport("main-lemma", (item,))


def check_theorem_bound(
    gamma_product: GammaLike, gamma_x: GammaLike, gamma_y: GammaLike, n: int
) -> CheckReport:
    """gamma(product) >= c_n gamma(P_n) gamma(X) gamma(Y); n = 1 is the
    Clark-Suen 1/2 bound, n = 2 the 2/3 bound."""
    gp = _proven_count(gamma_product, "gamma of the product")
    gx = _proven_count(gamma_x, "gamma(X)")
    gy = _proven_count(gamma_y, "gamma(Y)")
    rhs = cn_coefficient(n) * gamma_path(n) * gx * gy
    item = _item(f"theorem.n={n}", Fraction(gp), rhs, ">=")
    return CheckReport("theorem", (item,))


def check_combined_inequality(
    ledger: ColorLedger, gamma_x: GammaLike, gamma_y: GammaLike, n: int
) -> CheckReport:
    """b+g+y+o + g'+y'+o'+m' >= n gamma(X) gamma(Y) (the two-lemma combination;
    n is |V(Z)|, the path length when Z is a path)."""
    gx = _proven_count(gamma_x, "gamma(X)")
    gy = _proven_count(gamma_y, "gamma(Y)")
    if n != ledger.nz:
        raise InvalidArgumentError(f"n = {n} but the ledger has |V(Z)| = {ledger.nz}")
    lhs = _fiber_sum(ledger.dverts, _DCOLORS) + _fiber_sum(ledger.cells, (_G, _Y, _O, _M))
    item = _item("combined.global", lhs, n * gx * gy, ">=")
    return CheckReport("combined", (item,))
