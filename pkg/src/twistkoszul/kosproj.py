"""Projection (-)_kos from morphisms Delta_1 -> Delta_h to twisted Koszul cochains."""

from __future__ import annotations

from .clifford import CliffordElt, merge_sign
from .koszul import KoszulCochain
from .lgmodel import GroupElt, OrbifoldLG
from .mf import MFMorphism, is_closed
from .poly import Poly

__all__ = [
    "NotClosed",
    "top_projector",
    "pr_top",
    "pr_plus",
    "restrict_fix",
    "kos_project",
    "kos_project_fast",
]

IndexSet = tuple[int, ...]
TopForm = dict  # (J, K) -> Poly with J, K a partition of 1..n


class NotClosed(ValueError):
    pass


def top_projector(n: int) -> CliffordElt:
    """theta_1..theta_n d_n..d_1, the projection onto S*theta_1...theta_n."""
    return CliffordElt.from_word(n, [("t", i) for i in range(1, n + 1)] + [("d", i) for i in range(n, 0, -1)])


def _reorder_sign(J: IndexSet, K: IndexSet) -> int:
    # theta_J theta_K d_{K^op} = sign * theta_{1..n} d_K
    s, _ = merge_sign(J, K)
    m = len(K)
    return -s if (m * (m - 1) // 2) & 1 else s


def pr_top(phi: MFMorphism | CliffordElt) -> TopForm:
    """Coordinates b_JK of pr o phi = sum b_JK theta_J theta_K d_{K^op}."""
    body = phi.body if isinstance(phi, MFMorphism) else phi
    n = body.n
    top = tuple(range(1, n + 1))
    out = {}
    for (I, K), p in (top_projector(n) * body).terms.items():
        if I != top:  # pragma: no cover - impossible after projection
            continue
        J = tuple(i for i in top if i not in K)
        out[(J, K)] = p if _reorder_sign(J, K) == 1 else -p
    return out


def pr_plus(form: TopForm | MFMorphism, h: GroupElt) -> TopForm:
    """Entries of the top form with I_h contained in J."""
    if isinstance(form, MFMorphism):
        form = pr_top(form)
    moved = set(h.moved())
    return {(J, K): b for (J, K), b in form.items() if moved <= set(J)}


def _fix_map(n: int, h: GroupElt) -> dict[int, Poly]:
    mapping = {}
    for i in range(1, n + 1):
        if h.exps[i - 1]:
            mapping[i - 1] = Poly.zero(n)
            mapping[n + i - 1] = Poly.zero(n)
        else:
            mapping[n + i - 1] = Poly.x(n, i)
    return mapping


def restrict_fix(obj, h: GroupElt):
    """Substitute x_i -> x_i^h and y_i -> x_i^h in a Poly or in every Clifford coefficient."""
    if isinstance(obj, Poly):
        return obj.substitute(_fix_map(obj.n, h))
    if isinstance(obj, CliffordElt):
        mapping = _fix_map(obj.n, h)
        return obj.map_coeffs(lambda p: p.substitute(mapping))
    raise TypeError("restrict_fix expects a Poly or CliffordElt")


def _collect(n: int, h: GroupElt, pairs) -> KoszulCochain:
    moved = h.moved()
    mapping = _fix_map(n, h)
    out: dict = {}
    for J, b in pairs:
        b = b.substitute(mapping)
        if not b:
            continue
        I = tuple(i for i in J if i not in moved)
        s, _ = merge_sign(I, moved)
        term = b if s == 1 else -b
        out[I] = out[I] + term if I in out else term
    return KoszulCochain(n, h, out)


def kos_project(phi: MFMorphism) -> KoszulCochain:
    """phi_kos = (sum_{J >= I_h} sum_K b_JK theta_J)|Fix(h), with h = phi.tgt."""
    if not phi.src.is_identity():
        raise ValueError("kos_project expects a morphism out of Delta_1")
    h = phi.tgt
    return _collect(phi.body.n, h, ((J, b) for (J, _K), b in pr_plus(pr_top(phi), h).items()))


def kos_project_fast(model: OrbifoldLG, phi: MFMorphism, check: bool = True) -> KoszulCochain:
    """Projection of a closed morphism using only its contraction-free terms.

    The result is cohomologous to :func:`kos_project` of the same morphism.
    It is often identical, but not always: for boundaries such as
    D(theta_1 theta_2 d_1) the two differ by a Koszul coboundary.
    """
    if not phi.src.is_identity():
        raise ValueError("kos_project_fast expects a morphism out of Delta_1")
    if check and not is_closed(model, phi):
        raise NotClosed("morphism is not closed")
    h = phi.tgt
    moved = set(h.moved())
    pairs = ((I, p) for (I, J), p in phi.body.terms.items() if not J and moved <= set(I))
    return _collect(phi.body.n, h, pairs)
