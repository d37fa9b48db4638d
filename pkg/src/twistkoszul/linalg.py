"""Sparse exact linear solver over Q(zeta_m)."""

from __future__ import annotations

from typing import Hashable, Mapping, Sequence

from .cyclo import scalar_inv

__all__ = ["solve_sparse"]


def solve_sparse(columns: Sequence[Mapping[Hashable, object]], rhs: Mapping[Hashable, object]):
    """Find x with sum_k x[k] * columns[k] == rhs, or return None.

    Columns and the right-hand side are sparse vectors keyed by arbitrary
    row labels.  Free variables are set to zero.
    """
    rows: dict[Hashable, dict[int, object]] = {}
    for k, col in enumerate(columns):
        for r, v in col.items():
            if v:
                rows.setdefault(r, {})[k] = v
    for r in rhs:
        rows.setdefault(r, {})

    # pivot column -> (creation index, row dict, rhs value)
    pivots: dict[int, tuple[int, dict[int, object], object]] = {}
    order: list[int] = []
    for r in sorted(rows, key=repr):
        row = dict(rows[r])
        b = rhs.get(r, 0)
        while True:
            hit = [c for c in row if c in pivots]
            if not hit:
                break
            c = min(hit, key=lambda c: pivots[c][0])
            f = row[c]
            _, prow, pb = pivots[c]
            for cc, pv in prow.items():
                nv = row.get(cc, 0) - f * pv
                if nv:
                    row[cc] = nv
                else:
                    row.pop(cc, None)
            b = b - f * pb
        if not row:
            if b:
                return None
            continue
        pc = min(row)
        inv = scalar_inv(row[pc])
        row = {cc: v * inv for cc, v in row.items()}
        pivots[pc] = (len(order), row, b * inv)
        order.append(pc)

    x: dict[int, object] = {}
    for pc in reversed(order):
        _, row, b = pivots[pc]
        val = b
        for cc, v in row.items():
            if cc != pc and cc in x:
                val = val - v * x[cc]
        if val:
            x[pc] = val
    return [x.get(k, 0) for k in range(len(columns))]
