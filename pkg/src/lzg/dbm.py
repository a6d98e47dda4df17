"""Difference bound matrices over a fixed variable layout.

Index 0 of every layout is the constant-zero variable, so row/column 0
carries absolute bounds (``x <= 5`` is ``x - 0 <= 5``).  Entry ``(i, j)``
of a matrix bounds ``var_i - var_j``; bounds are encoded integers (see
``lzg._pykernel``) with ``INF`` for "no bound".

A :class:`Dbm` is immutable once built.  Every operation returns a fresh
canonical matrix (or ``None`` for the empty zone); canonical means each
entry is the weight of the shortest constraint path, so structural
equality of entries coincides with zone equality and doubles as the
node-store key during exploration.

The inner loops dispatch to the compiled kernel ``lzg._core`` when it is
available and to the numpy fallback otherwise (``LZG_PURE_PYTHON=1``
forces the fallback).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from random import Random
from typing import Iterable, Optional, Sequence

import numpy as np

from . import _pykernel

if os.environ.get("LZG_PURE_PYTHON"):
    _kernel = _pykernel
    NATIVE_KERNEL = False
else:
    try:
        from . import _core as _kernel  # type: ignore[no-redef]

        NATIVE_KERNEL = True
    except ImportError:
        _kernel = _pykernel
        NATIVE_KERNEL = False

INF: int = _pykernel.INF
INF_BAR: int = _pykernel.INF_BAR
LE_ZERO: int = _pykernel.LE_ZERO
_EMPTY = _pykernel.EMPTY
_OVERFLOW = _pykernel.OVERFLOW


class OverflowAbort(RuntimeError):
    """Raised when bound arithmetic leaves the safe fixed-width range."""


def bound(value: int, strict: bool = False) -> int:
    """Encode the bound ``(< value)`` or ``(<= value)``."""
    enc = 2 * value + (0 if strict else 1)
    if abs(enc) > _pykernel.LIMIT:
        raise OverflowAbort(f"bound constant {value} out of range")
    return enc


def bound_value(enc: int) -> int:
    return enc >> 1


def bound_is_strict(enc: int) -> bool:
    return not (enc & 1)


def bound_add(a: int, b: int) -> int:
    return _pykernel.bound_add(a, b)


def bound_negate(enc: int) -> int:
    """Complement: ``not (d <= c)`` is ``-d < -c``, ``not (d < c)`` is ``-d <= -c``."""
    if enc >= _pykernel.INF_BAR:
        raise ValueError("cannot negate an infinite bound")
    return 1 - enc


def format_bound(enc: int) -> str:
    if enc >= _pykernel.INF_BAR:
        return "< inf"
    return f"{'<' if bound_is_strict(enc) else '<='} {bound_value(enc)}"


@dataclass(frozen=True)
class VariableLayout:
    """Ordered variable names; ``names[0]`` must be the zero variable ``"0"``."""

    names: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.names or self.names[0] != "0":
            raise ValueError("layout must start with the zero variable '0'")
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names in layout")

    @property
    def n(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        return self.names.index(name)


class Dbm:
    """Canonical difference bound matrix (immutable)."""

    __slots__ = ("layout", "entries", "_hash")

    def __init__(self, layout: VariableLayout, entries: np.ndarray):
        if entries.shape != (layout.n, layout.n):
            raise ValueError("entry matrix does not match layout size")
        entries = np.ascontiguousarray(entries, dtype=np.int64)
        entries.flags.writeable = False
        self.layout = layout
        self.entries = entries
        self._hash: Optional[int] = None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Dbm):
            return NotImplemented
        return self.layout == other.layout and np.array_equal(self.entries, other.entries)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.layout, self.entries.tobytes()))
        return self._hash

    def __getitem__(self, ij: tuple[int, int]) -> int:
        return int(self.entries[ij])

    def __repr__(self) -> str:
        return f"Dbm({', '.join(constraint_strings(self)) or 'top'})"

    def mutable_copy(self) -> np.ndarray:
        return self.entries.copy()


def _seal(layout: VariableLayout, m: np.ndarray, status: int) -> Optional[Dbm]:
    if status == _EMPTY:
        return None
    if status == _OVERFLOW:
        raise OverflowAbort("bound arithmetic exceeded the fixed-width range")
    return Dbm(layout, m)


def universe(layout: VariableLayout) -> Dbm:
    """The unconstrained zone (all bounds infinite) over ``layout``."""
    m = np.full((layout.n, layout.n), INF, dtype=np.int64)
    np.fill_diagonal(m, LE_ZERO)
    return Dbm(layout, m)


def canonicalize(d: Dbm) -> Optional[Dbm]:
    """All-pairs tightening; ``None`` when the constraints are contradictory."""
    m = d.mutable_copy()
    return _seal(d.layout, m, _kernel.close(m))


def from_constraints(
    layout: VariableLayout, constraints: Iterable[tuple[int, int, int]]
) -> Optional[Dbm]:
    """Build and canonicalize a zone from ``(i, j, encoded_bound)`` triples."""
    m = np.full((layout.n, layout.n), INF, dtype=np.int64)
    np.fill_diagonal(m, LE_ZERO)
    for i, j, enc in constraints:
        if enc < m[i, j]:
            m[i, j] = enc
    return _seal(layout, m, _kernel.close(m))


def constrain_all(
    d: Dbm, constraints: Iterable[tuple[int, int, int]]
) -> Optional[Dbm]:
    """Intersect canonical ``d`` with several constraints; one full closure."""
    m = d.mutable_copy()
    changed = False
    for i, j, enc in constraints:
        if enc < m[i, j]:
            m[i, j] = enc
            changed = True
    if not changed:
        return d
    return _seal(d.layout, m, _kernel.close(m))


def constrain(d: Dbm, i: int, j: int, enc: int) -> Optional[Dbm]:
    """Intersect canonical ``d`` with ``var_i - var_j`` bounded by ``enc``."""
    n = d.layout.n
    if not (0 <= i < n and 0 <= j < n):
        raise ValueError(f"constrain indices ({i}, {j}) invalid for layout of size {n}")
    if i == j:
        return d if enc >= LE_ZERO else None
    if enc >= d[i, j]:
        return d
    m = d.mutable_copy()
    m[i, j] = enc
    return _seal(d.layout, m, _kernel.close_after(m, i, j))


def includes(outer: Dbm, inner: Dbm) -> bool:
    """Zone inclusion for canonical matrices: entrywise bound comparison."""
    if outer.layout != inner.layout:
        raise ValueError("includes() across different layouts")
    return bool(_kernel.includes(outer.entries, inner.entries))


def free_upper(d: Dbm, i: int) -> Dbm:
    """Erase every upper bound on ``var_i`` (row ``i``).

    Loosening a whole row of a canonical matrix cannot create new shortest
    paths (any path through ``var_i`` now has infinite first edge), so the
    result is canonical without re-running the closure; tests assert this.
    """
    if i == 0:
        raise ValueError("cannot free the zero variable")
    row = d.entries[i]
    if all(row[j] >= _pykernel.INF_BAR for j in range(d.layout.n) if j != i):
        return d
    m = d.mutable_copy()
    m[i, :] = INF
    m[i, i] = LE_ZERO
    return Dbm(d.layout, m)


def assign(d: Dbm, i: int, j: int) -> Dbm:
    """Set ``var_i := var_j``: copy ``j``'s relations onto ``i``.

    Equivalent to erasing row/column ``i`` and adding ``var_i = var_j``;
    copying the canonical row and column of ``j`` yields the canonical
    result directly.
    """
    if i == 0:
        raise ValueError("cannot assign to the zero variable")
    if i == j:
        return d
    m = d.mutable_copy()
    m[i, :] = m[j, :]
    m[:, i] = m[:, j]
    m[i, i] = LE_ZERO
    return Dbm(d.layout, m)


def subtract(a: Dbm, b: Optional[Dbm]) -> list[Dbm]:
    """Zones whose union is exactly ``a`` minus ``b`` (pieces may overlap).

    One piece per facet of ``b``: the part of ``a`` violating that facet.
    """
    if b is None:
        return [a]
    if a.layout != b.layout:
        raise ValueError("subtract() across different layouts")
    n = a.layout.n
    pieces = []
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            enc = b[i, j]
            if enc >= _pykernel.INF_BAR:
                continue
            piece = constrain(a, j, i, bound_negate(enc))
            if piece is not None:
                pieces.append(piece)
    return pieces


def contains_point(d: Dbm, point: Sequence[Fraction]) -> bool:
    """Exact membership of a rational point (index 0 must be 0)."""
    if len(point) != d.layout.n or point[0] != 0:
        raise ValueError("point does not match layout")
    for i in range(d.layout.n):
        for j in range(d.layout.n):
            enc = d[i, j]
            if enc >= _pykernel.INF_BAR:
                continue
            diff = point[i] - point[j]
            c = bound_value(enc)
            if not (diff < c if bound_is_strict(enc) else diff <= c):
                return False
    return True


def sample_point(d: Dbm, rng: Random) -> tuple[Fraction, ...]:
    """Sample a rational point of a canonical non-empty zone.

    Variables are fixed one by one; canonical tightness guarantees any
    value inside the interval induced by the already-fixed variables
    extends to a full point.  Integer values are preferred, then simple
    fractions.
    """
    n = d.layout.n
    values: list[Fraction] = [Fraction(0)]
    for i in range(1, n):
        lo: Optional[Fraction] = None
        lo_strict = False
        hi: Optional[Fraction] = None
        hi_strict = False
        for k in range(i):
            up = d[i, k]  # var_i - var_k
            if up < _pykernel.INF_BAR:
                cand = values[k] + bound_value(up)
                if hi is None or cand < hi or (cand == hi and bound_is_strict(up)):
                    hi, hi_strict = cand, bound_is_strict(up)
            down = d[k, i]  # var_k - var_i
            if down < _pykernel.INF_BAR:
                cand = values[k] - bound_value(down)
                if lo is None or cand > lo or (cand == lo and bound_is_strict(down)):
                    lo, lo_strict = cand, bound_is_strict(down)
        values.append(_pick(lo, lo_strict, hi, hi_strict, rng))
    return tuple(values)


def _pick(
    lo: Optional[Fraction],
    lo_strict: bool,
    hi: Optional[Fraction],
    hi_strict: bool,
    rng: Random,
) -> Fraction:
    if lo is None and hi is None:
        return Fraction(rng.randint(0, 8))
    if lo is None:
        assert hi is not None
        base = hi - rng.randint(0, 4)
        return base if not hi_strict else base - Fraction(1, 2)
    if hi is None:
        base = lo + rng.randint(0, 4)
        return base if not lo_strict else base + Fraction(1, 2)
    if lo == hi:
        return lo  # pinched interval; strictness cannot both hold in a non-empty zone
    # proper interval: try integer points first, fall back to the midpoint
    start = math.ceil(lo)
    if lo == start and lo_strict:
        start += 1
    candidates = [Fraction(v) for v in range(start, start + 3)]
    candidates = [v for v in candidates if _inside(v, lo, lo_strict, hi, hi_strict)]
    if candidates:
        return rng.choice(candidates)
    return (lo + hi) / 2


def _inside(
    v: Fraction, lo: Fraction, lo_strict: bool, hi: Fraction, hi_strict: bool
) -> bool:
    above = v > lo if lo_strict else v >= lo
    below = v < hi if hi_strict else v <= hi
    return above and below


def constraint_strings(d: Dbm) -> list[str]:
    """Human-readable finite constraints of a canonical matrix."""
    out = []
    names = d.layout.names
    for i in range(d.layout.n):
        for j in range(d.layout.n):
            if i == j:
                continue
            enc = d[i, j]
            if enc >= _pykernel.INF_BAR:
                continue
            op = "<" if bound_is_strict(enc) else "<="
            c = bound_value(enc)
            if j == 0:
                out.append(f"{names[i]} {op} {c}")
            elif i == 0:
                flip = ">" if bound_is_strict(enc) else ">="
                out.append(f"{names[j]} {flip} {-c}")
            else:
                out.append(f"{names[i]} - {names[j]} {op} {c}")
    return out
