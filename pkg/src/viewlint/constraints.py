"""Range-set constraints over symbols and branch feasibility.

Each symbol is known to lie in a set of disjoint closed intervals over
signed 64-bit integers (IMIN/IMAX sentinels).  assume() refines the
ranges when a branch is taken; an empty refinement means the branch is
infeasible and its path is abandoned.

Only symbol-against-constant comparisons are solved precisely.
Symbol-against-symbol arithmetic and comparisons conjure fresh symbols
and stay unconstrained, over-approximating the set of feasible paths.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .values import Concrete, RegionVal, SVal, SymCmp, SymExpr, Symbol

IMIN = -(2**63)
IMAX = 2**63 - 1


def _fmt_bound(v: int) -> str:
    if v == IMIN:
        return "IMIN"
    if v == IMAX:
        return "IMAX"
    return str(v)


@dataclass(frozen=True)
class RangeSet:
    """Ordered, disjoint, non-adjacent closed intervals."""

    intervals: tuple[tuple[int, int], ...]

    @staticmethod
    def full() -> RangeSet:
        return RangeSet(((IMIN, IMAX),))

    @staticmethod
    def empty() -> RangeSet:
        return RangeSet(())

    @staticmethod
    def of(lo: int, hi: int) -> RangeSet:
        if lo > hi:
            return RangeSet(())
        return RangeSet(((max(lo, IMIN), min(hi, IMAX)),))

    @staticmethod
    def normalize(intervals: Iterable[tuple[int, int]]) -> RangeSet:
        items = sorted((lo, hi) for lo, hi in intervals if lo <= hi)
        merged: list[tuple[int, int]] = []
        for lo, hi in items:
            if merged and lo <= merged[-1][1] + 1:
                merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
            else:
                merged.append((lo, hi))
        return RangeSet(tuple(merged))

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    @property
    def is_full(self) -> bool:
        return self.intervals == ((IMIN, IMAX),)

    def intersect(self, other: RangeSet) -> RangeSet:
        out: list[tuple[int, int]] = []
        for alo, ahi in self.intervals:
            for blo, bhi in other.intervals:
                lo, hi = max(alo, blo), min(ahi, bhi)
                if lo <= hi:
                    out.append((lo, hi))
        return RangeSet.normalize(out)

    def union(self, other: RangeSet) -> RangeSet:
        return RangeSet.normalize(self.intervals + other.intervals)

    def complement(self) -> RangeSet:
        out: list[tuple[int, int]] = []
        prev = IMIN
        for lo, hi in self.intervals:
            if lo > prev:
                out.append((prev, lo - 1))
            prev = hi + 1
            if prev > IMAX:
                break
        else:
            out.append((prev, IMAX))
        return RangeSet.normalize(out)

    def shift(self, delta: int) -> RangeSet:
        """Ranges of (x + delta) given ranges of x, saturating at the bounds."""
        out = []
        for lo, hi in self.intervals:
            nlo = lo if lo == IMIN else max(IMIN, min(IMAX, lo + delta))
            nhi = hi if hi == IMAX else max(IMIN, min(IMAX, hi + delta))
            out.append((nlo, nhi))
        return RangeSet.normalize(out)

    def contains(self, value: int) -> bool:
        return any(lo <= value <= hi for lo, hi in self.intervals)

    def __str__(self) -> str:
        if self.is_empty:
            return "<empty>"
        return " ∪ ".join(f"[{_fmt_bound(lo)}, {_fmt_bound(hi)}]" for lo, hi in self.intervals)


def ranges_for_comparison(op: str, const: int) -> RangeSet:
    """Range of x such that `x op const` holds."""
    if op == "==":
        return RangeSet.of(const, const)
    if op == "!=":
        return RangeSet.of(const, const).complement()
    if op == "<":
        return RangeSet.of(IMIN, const - 1)
    if op == ">":
        return RangeSet.of(const + 1, IMAX)
    raise ValueError(f"unsupported comparison {op!r}")


NEGATED_OP = {"==": "!=", "!=": "==", "<": ">", ">": "<"}


@dataclass(frozen=True)
class ConstraintMap:
    """symbol -> RangeSet; absent symbols have the full range.

    Normalized: full-range entries are dropped, so redundant symbols
    disappear from the map (and from state dumps) on their own.
    """

    entries: tuple[tuple[Symbol, RangeSet], ...] = ()

    @staticmethod
    def empty() -> ConstraintMap:
        return ConstraintMap(())

    def get(self, sym: Symbol) -> RangeSet:
        for s, r in self.entries:
            if s == sym:
                return r
        return RangeSet.full()

    def with_range(self, sym: Symbol, ranges: RangeSet) -> ConstraintMap:
        kept = tuple((s, r) for s, r in self.entries if s != sym)
        if ranges.is_full:
            return ConstraintMap(kept)
        new = kept + ((sym, ranges),)
        return ConstraintMap(tuple(sorted(new, key=lambda e: e[0].id)))

    def without(self, syms: frozenset[Symbol]) -> ConstraintMap:
        return ConstraintMap(tuple((s, r) for s, r in self.entries if s not in syms))

    def symbols(self) -> frozenset[Symbol]:
        return frozenset(s for s, _ in self.entries)

    def __str__(self) -> str:
        return "; ".join(f"{s} : {r}" for s, r in self.entries)


def is_feasible(cmap: ConstraintMap) -> bool:
    return all(not r.is_empty for _, r in cmap.entries)


def _as_offset_symbol(value: SVal) -> Optional[tuple[Symbol, int]]:
    """View a value as (symbol + offset) when possible."""
    if isinstance(value, Symbol):
        return value, 0
    if isinstance(value, SymExpr):
        return value.sym, value.offset()
    return None


def assume(cmap: ConstraintMap, value: SVal, assumption: bool) -> Optional[ConstraintMap]:
    """Refine the map under `value` being true/false; None if infeasible.

    Truthiness of a plain symbol or arithmetic value is `!= 0`.
    """
    if isinstance(value, Concrete):
        holds = value.value != 0
        return cmap if holds == assumption else None
    if isinstance(value, SymCmp):
        op = value.op if assumption else NEGATED_OP[value.op]
        # (sym + offset) op const  <=>  sym op (const - offset)
        wanted = ranges_for_comparison(op, value.const - value.offset)
        refined = cmap.get(value.sym).intersect(wanted)
        if refined.is_empty:
            return None
        return cmap.with_range(value.sym, refined)
    pair = _as_offset_symbol(value)
    if pair is not None:
        sym, offset = pair
        return assume(cmap, SymCmp(sym, offset, "!=", 0), assumption)
    if isinstance(value, RegionVal):
        return cmap if assumption else None  # lvalues are never "false"
    # Unknown / uninit: both outcomes possible.
    return cmap


class SymbolFactory:
    """Per-analysis source of unique symbols (deterministic ids)."""

    def __init__(self) -> None:
        self.next_id = 0

    def fresh(self, origin, name: str = "") -> Symbol:
        self.next_id += 1
        return Symbol(self.next_id, origin, name)


def eval_binop(lhs: SVal, op: str, rhs: SVal, factory: SymbolFactory) -> SVal:
    """Symbolic arithmetic/comparison over int-kind values.

    Keeps symbol+constant shapes; anything beyond that conjures a fresh
    unconstrained symbol.
    """
    from .values import SymbolOrigin

    if isinstance(lhs, Concrete) and isinstance(rhs, Concrete):
        a, b = lhs.value, rhs.value
        if op == "+":
            return Concrete(a + b)
        if op == "-":
            return Concrete(a - b)
        if op == "==":
            return Concrete(int(a == b))
        if op == "!=":
            return Concrete(int(a != b))
        if op == "<":
            return Concrete(int(a < b))
        if op == ">":
            return Concrete(int(a > b))
        raise ValueError(f"unsupported op {op!r}")

    if op in ("+", "-"):
        lpair = _as_offset_symbol(lhs)
        if lpair is not None and isinstance(rhs, Concrete):
            sym, offset = lpair
            total = offset + (rhs.value if op == "+" else -rhs.value)
            if total == 0:
                return sym
            return SymExpr(sym, "+" if total > 0 else "-", abs(total))
        rpair = _as_offset_symbol(rhs)
        if op == "+" and rpair is not None and isinstance(lhs, Concrete):
            sym, offset = rpair
            total = offset + lhs.value
            if total == 0:
                return sym
            return SymExpr(sym, "+" if total > 0 else "-", abs(total))
        return factory.fresh(SymbolOrigin.CONJURED)

    # Comparisons.
    lpair = _as_offset_symbol(lhs)
    rpair = _as_offset_symbol(rhs)
    if lpair is not None and isinstance(rhs, Concrete):
        sym, offset = lpair
        return SymCmp(sym, offset, op, rhs.value)
    if rpair is not None and isinstance(lhs, Concrete):
        sym, offset = rpair
        flipped = {"==": "==", "!=": "!=", "<": ">", ">": "<"}[op]
        return SymCmp(sym, offset, flipped, lhs.value)
    return factory.fresh(SymbolOrigin.CONJURED)
