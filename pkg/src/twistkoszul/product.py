"""Sector translation and the cup product on twisted Koszul cochains."""

from __future__ import annotations

from dataclasses import dataclass, field

from .clifford import CliffordElt
from .cyclo import scalar_inv
from .koszul import (
    KoszulCochain,
    NotACocycle,
    TwistedCochain,
    class_equal,
    coboundary_solve,
    default_bound,
    is_cocycle,
)
from .kosproj import kos_project_fast
from .lgmodel import GroupElt, OrbifoldLG
from .mf import MFMorphism, is_closed
from .twist import exp_eta

__all__ = [
    "translate",
    "cup",
    "cup_twisted",
    "twisted_class_equal",
    "cup_class",
    "CupReport",
]


def translate(model: OrbifoldLG, hp: GroupElt, phi: MFMorphism) -> MFMorphism:
    """h'_* phi: y_i -> h'_i^{-1} y_i in coefficients, theta_I d_J scaled by rho(h'^{-1})."""
    n = model.n
    eig = [hp.eigenvalue(i) for i in range(1, n + 1)]
    inv = [scalar_inv(v) for v in eig]
    yscale = {n + i: inv[i] for i in range(n) if hp.exps[i]}
    out = {}
    for (I, J), p in phi.body.terms.items():
        c = 1
        for i in I:
            c = c * eig[i - 1]
        for j in J:
            c = c * inv[j - 1]
        q = p.scale_vars(yscale).scale(c)
        if q:
            out[(I, J)] = q
    return MFMorphism(hp * phi.src, hp * phi.tgt, CliffordElt(n, out))


def cup(model: OrbifoldLG, alpha: KoszulCochain, beta: KoszulCochain) -> KoszulCochain:
    """alpha cup beta = (h'_*(exp(eta_h) alpha) o exp(eta_h') beta)_kos, landing in sector h'h."""
    for c in (alpha, beta):
        if not is_cocycle(model, c):
            raise NotACocycle(f"{c.format(model)} is not a cocycle")
    key = ("cup", alpha, beta)
    if key in model._cache:
        return model._cache[key]
    h, hp = alpha.sector, beta.sector
    left = translate(model, hp, exp_eta(model, h, alpha))
    right = exp_eta(model, hp, beta)
    prod = left.compose(right)
    if not is_closed(model, prod):
        raise AssertionError("product morphism is not closed")
    res = kos_project_fast(model, prod, check=False)
    model._cache[key] = res
    return res


def cup_twisted(model: OrbifoldLG, a: TwistedCochain, b: TwistedCochain) -> TwistedCochain:
    """Bilinear extension of :func:`cup` over sector sums."""
    out = TwistedCochain(model.n)
    for ca in a.parts.values():
        for cb in b.parts.values():
            out = out + cup(model, ca, cb)
    return out


def _as_twisted(c) -> TwistedCochain:
    if isinstance(c, KoszulCochain):
        return TwistedCochain(c.n, {c.sector: c})
    return c


def twisted_class_equal(model: OrbifoldLG, a, b, max_degree: int | None = None) -> bool:
    a, b = _as_twisted(a), _as_twisted(b)
    for h in set(a.parts) | set(b.parts):
        zero = KoszulCochain.zero(model.n, h)
        if not class_equal(model, a.parts.get(h, zero), b.parts.get(h, zero), max_degree):
            return False
    return True


@dataclass
class CupReport:
    product: TwistedCochain
    expected: TwistedCochain | None = None
    witnesses: dict[GroupElt, KoszulCochain | None] = field(default_factory=dict)
    max_degree: int = 0

    @property
    def equal(self) -> bool | None:
        if self.expected is None:
            return None
        return all(w is not None for w in self.witnesses.values())


def cup_class(model: OrbifoldLG, a, b, expected=None, max_degree: int | None = None) -> CupReport:
    """Cup product plus, optionally, coboundary witnesses for product - expected."""
    if max_degree is None:
        max_degree = default_bound(model)
    prod = cup_twisted(model, _as_twisted(a), _as_twisted(b))
    report = CupReport(prod, max_degree=max_degree)
    if expected is not None:
        expected = _as_twisted(expected)
        report.expected = expected
        diff = prod - expected
        for h in sorted(set(prod.parts) | set(expected.parts)):
            part = diff.parts.get(h, KoszulCochain.zero(model.n, h))
            report.witnesses[h] = coboundary_solve(model, part, max_degree)
    return report
