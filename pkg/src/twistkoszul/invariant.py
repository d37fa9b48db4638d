"""Group action on twisted Koszul cochains and the G-invariant part."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, combinations_with_replacement

from .cyclo import scalar_inv
from .koszul import KoszulCochain
from .lgmodel import GroupElt, OrbifoldLG
from .poly import Poly

__all__ = ["act_cochain", "invariant_part", "is_invariant", "invariant_monomial_basis", "character"]


def act_cochain(model: OrbifoldLG, g: GroupElt, c: KoszulCochain) -> KoszulCochain:
    """g acts by x_i -> g_i x_i on coefficients and theta_i -> g_i^{-1} theta_i."""
    n = model.n
    moved = c.sector.moved()
    inv = [scalar_inv(g.eigenvalue(i)) for i in range(1, n + 1)]
    base = 1
    for i in moved:
        base = base * inv[i - 1]
    factors = g.x_action(n)
    out = {}
    for I, p in c.terms.items():
        s = base
        for i in I:
            s = s * inv[i - 1]
        out[I] = p.scale_vars(factors).scale(s)
    return KoszulCochain(c.n, c.sector, out)


def invariant_part(model: OrbifoldLG, c: KoszulCochain) -> KoszulCochain:
    """Average of g.c over the group."""
    total = KoszulCochain.zero(c.n, c.sector)
    for g in model.elements:
        total = total + act_cochain(model, g, c)
    return total.scale(Fraction(1, len(model.elements)))


def is_invariant(model: OrbifoldLG, c: KoszulCochain) -> bool:
    return all(act_cochain(model, g, c) == c for g in model.generators)


def character(model: OrbifoldLG, h: GroupElt, exps, I) -> tuple[int, ...]:
    """Exponent vector (mod m, one entry per generator) of the character of x^e theta_I theta_{I_h}."""
    out = []
    idx = set(I) | set(h.moved())
    for g in model.generators:
        k = sum(g.exps[i] * exps[i] for i in range(model.n)) - sum(g.exps[i - 1] for i in idx)
        out.append(k % model.m)
    return tuple(out)


def invariant_monomial_basis(
    model: OrbifoldLG, h: GroupElt, degree_bound: int, theta_degree: int | None = None
) -> list[KoszulCochain]:
    """All monomial cochains x^e theta_I theta_{I_h} fixed by G, coefficient degree <= bound."""
    n = model.n
    sd = model.sector_data(h)
    sizes = range(len(sd.fixed) + 1) if theta_degree is None else [theta_degree]
    out = []
    for s in sizes:
        for I in combinations(sd.fixed, s):
            for d in range(degree_bound + 1):
                for combo in combinations_with_replacement(sd.fixed, d):
                    e = [0] * (2 * n)
                    for i in combo:
                        e[i - 1] += 1
                    c = KoszulCochain(n, h, {I: Poly(n, {tuple(e): 1})})
                    if is_invariant(model, c):
                        out.append(c)
    return out
