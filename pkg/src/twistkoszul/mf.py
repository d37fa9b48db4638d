"""Koszul matrix factorizations Delta_h of W(y) - W(x) and the hom differential."""

from __future__ import annotations

from dataclasses import dataclass

from .clifford import CliffordElt
from .lgmodel import GroupElt, OrbifoldLG, box_minus
from .poly import Poly

__all__ = ["MFMorphism", "delta_diff", "check_mf", "hom_diff", "is_closed"]


@dataclass(frozen=True)
class MFMorphism:
    """An S-linear map Delta_src -> Delta_tgt given by a Clifford operator."""

    src: GroupElt
    tgt: GroupElt
    body: CliffordElt

    def __add__(self, other: "MFMorphism") -> "MFMorphism":
        self._same(other)
        return MFMorphism(self.src, self.tgt, self.body + other.body)

    def __sub__(self, other: "MFMorphism") -> "MFMorphism":
        self._same(other)
        return MFMorphism(self.src, self.tgt, self.body - other.body)

    def _same(self, other):
        if (self.src, self.tgt) != (other.src, other.tgt):
            raise ValueError("morphisms between different factorizations")

    def compose(self, first: "MFMorphism") -> "MFMorphism":
        """self o first."""
        if first.tgt != self.src:
            raise ValueError("morphisms are not composable")
        return MFMorphism(first.src, self.tgt, self.body * first.body)

    def __str__(self):
        return str(self.body)


def delta_diff(model: OrbifoldLG, h: GroupElt) -> CliffordElt:
    """sum_i (y_i - h_i x_i) theta_i + nabla_i W(hx, y) d_i."""
    key = ("delta", h)
    cached = model._cache.get(key)
    if cached is not None:
        return cached
    n = model.n
    hx = h.x_action(n)
    terms = {}
    for i in range(1, n + 1):
        lin = Poly.y(n, i) - Poly.x(n, i, h.eigenvalue(i))
        terms[((i,), ())] = lin
        terms[((), (i,))] = model.nabla(i).scale_vars(hx)
    d = CliffordElt(n, terms)
    model._cache[key] = d
    return d


def check_mf(model: OrbifoldLG, h: GroupElt, d: CliffordElt | None = None) -> bool:
    """d^2 == (W(y) - W(x)) * id."""
    if d is None:
        d = delta_diff(model, h)
    return d * d == CliffordElt.scalar(model.n, box_minus(model))


def _hom_diff_body(model, src, tgt, body: CliffordElt) -> CliffordElt:
    d_src = delta_diff(model, src)
    d_tgt = delta_diff(model, tgt)
    out = CliffordElt.zero(model.n)
    for part, parity in zip(body.split_parity(), (0, 1)):
        if not part:
            continue
        lhs = d_tgt * part
        rhs = part * d_src
        out = out + (lhs + rhs if parity else lhs - rhs)
    return out


def hom_diff(model: OrbifoldLG, phi: MFMorphism) -> MFMorphism:
    """D(phi) = d_tgt o phi - (-1)^|phi| phi o d_src, extended additively over parities."""
    return MFMorphism(phi.src, phi.tgt, _hom_diff_body(model, phi.src, phi.tgt, phi.body))


def is_closed(model: OrbifoldLG, phi: MFMorphism) -> bool:
    return not _hom_diff_body(model, phi.src, phi.tgt, phi.body)
