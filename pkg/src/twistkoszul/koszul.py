"""Twisted Koszul complexes K(dW^h) * theta_{I_h} and degree-bounded cohomology.

A :class:`KoszulCochain` in sector h stores sum_I a_I theta_I theta_{I_h}
as the map I -> a_I; the factor theta_{I_h} is implicit.  Class-level
questions are answered by searching for a coboundary witness among
cochains whose coefficients have total degree <= a bound, so a negative
answer only means "no witness up to that degree".
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from typing import Mapping

from .clifford import CliffordElt, merge_sign, theta_derivative
from .cyclo import is_scalar
from .linalg import solve_sparse
from .lgmodel import GroupElt, ModelError, OrbifoldLG
from .parsing import CliffordRing, ParseError, parse_expression
from .poly import Poly

__all__ = [
    "KoszulCochain",
    "TwistedCochain",
    "NotACocycle",
    "koszul_diff",
    "is_cocycle",
    "coboundary_solve",
    "class_equal",
    "default_bound",
    "parse_cochain",
    "parse_twisted",
]

IndexSet = tuple[int, ...]


class NotACocycle(ValueError):
    pass


def default_bound(model: OrbifoldLG) -> int:
    return max(6, 2 * model.W.degree())


@dataclass(frozen=True, eq=False)
class KoszulCochain:
    n: int
    sector: GroupElt
    terms: Mapping[IndexSet, Poly]

    def __post_init__(self):
        moved = set(self.sector.moved())
        clean = {}
        for I, p in self.terms.items():
            I = tuple(I)
            if list(I) != sorted(set(I)):
                raise ValueError(f"index set {I} is not strictly increasing")
            if moved & set(I):
                raise ValueError(f"index set {I} meets the moved indices {sorted(moved)}")
            if any(v >= self.n or (v + 1) in moved for v in p.variables()):
                raise ValueError(f"coefficient {p} uses non-fixed variables")
            if p:
                clean[I] = clean[I] + p if I in clean else p
        object.__setattr__(self, "terms", {k: v for k, v in clean.items() if v})

    @classmethod
    def zero(cls, n: int, sector: GroupElt) -> "KoszulCochain":
        return cls(n, sector, {})

    @classmethod
    def scalar(cls, n: int, sector: GroupElt, c) -> "KoszulCochain":
        p = c if isinstance(c, Poly) else Poly.const(n, c)
        return cls(n, sector, {(): p})

    # -- arithmetic -------------------------------------------------------
    def _same(self, other: "KoszulCochain"):
        if other.sector != self.sector:
            raise ValueError(f"sector mismatch: {self.sector} vs {other.sector}")

    def __add__(self, other: "KoszulCochain") -> "KoszulCochain":
        self._same(other)
        out = dict(self.terms)
        for I, p in other.terms.items():
            out[I] = out[I] + p if I in out else p
        return KoszulCochain(self.n, self.sector, out)

    def __neg__(self):
        return KoszulCochain(self.n, self.sector, {I: -p for I, p in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "KoszulCochain":
        return KoszulCochain(self.n, self.sector, {I: p * c for I, p in self.terms.items()})

    def __mul__(self, c):
        if isinstance(c, Poly) or is_scalar(c):
            return self.scale(c)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, KoszulCochain):
            return NotImplemented
        return self.sector == other.sector and self.terms == other.terms

    def __hash__(self):
        return hash((self.sector, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # -- structure --------------------------------------------------------
    def theta_degrees(self) -> set[int]:
        return {len(I) for I in self.terms}

    def degrees(self) -> set[int]:
        """Cohomological degrees -(|I| + |I_h|) of the terms."""
        k = len(self.sector.moved())
        return {-(len(I) + k) for I in self.terms}

    def degree(self) -> int:
        ds = self.degrees()
        if len(ds) > 1:
            raise ValueError("cochain is not homogeneous")
        return ds.pop() if ds else -len(self.sector.moved())

    def component(self, s: int) -> "KoszulCochain":
        return KoszulCochain(self.n, self.sector, {I: p for I, p in self.terms.items() if len(I) == s})

    def to_clifford(self) -> CliffordElt:
        """sum a_I theta_I theta_{I_h} as a normal-ordered Clifford element."""
        moved = self.sector.moved()
        out = {}
        for I, p in self.terms.items():
            sign, K = merge_sign(I, moved)
            out[(K, ())] = p if sign == 1 else -p
        return CliffordElt(self.n, out)

    @classmethod
    def from_clifford(cls, sector: GroupElt, a: CliffordElt) -> "KoszulCochain":
        """Inverse of :meth:`to_clifford`; a must be a theta-polynomial divisible by theta_{I_h}."""
        moved = sector.moved()
        out = {}
        for (K, J), p in a.terms.items():
            if J:
                raise ValueError("cochain expressions may not contain contractions")
            if not set(moved) <= set(K):
                raise ValueError(f"term theta_{list(K)} lacks the factor theta_{list(moved)}")
            I = tuple(i for i in K if i not in moved)
            sign, _ = merge_sign(I, moved)
            out[I] = p if sign == 1 else -p
        return cls(a.n, sector, out)

    def format(self, model: OrbifoldLG | None = None) -> str:
        tag = model.tag(self.sector) if model is not None else ",".join(map(str, self.sector.exps))
        body = str(self.to_clifford())
        if len(self.to_clifford().terms) > 1 or any(len(p.terms) > 1 for p in self.terms.values()):
            body = f"({body})"
        return f"[{tag}] {body}"

    def __str__(self):
        return self.format()


class TwistedCochain:
    """Finite sum of cochains from different sectors (an element of K(W, G))."""

    __slots__ = ("n", "parts")

    def __init__(self, n: int, parts: Mapping[GroupElt, KoszulCochain] | None = None):
        self.n = n
        self.parts = {h: c for h, c in (parts or {}).items() if c}

    @classmethod
    def of(cls, *cochains: KoszulCochain) -> "TwistedCochain":
        out = cls(cochains[0].n) if cochains else None
        for c in cochains:
            out = out + cls(c.n, {c.sector: c})
        return out

    def __add__(self, other):
        if isinstance(other, KoszulCochain):
            other = TwistedCochain(other.n, {other.sector: other})
        parts = dict(self.parts)
        for h, c in other.parts.items():
            parts[h] = parts[h] + c if h in parts else c
        return TwistedCochain(self.n, parts)

    def __neg__(self):
        return TwistedCochain(self.n, {h: -c for h, c in self.parts.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return TwistedCochain(self.n, {h: v.scale(c) for h, v in self.parts.items()})

    def __eq__(self, other):
        if isinstance(other, KoszulCochain):
            other = TwistedCochain(other.n, {other.sector: other})
        if not isinstance(other, TwistedCochain):
            return NotImplemented
        return self.parts == other.parts

    def __hash__(self):
        return hash(frozenset(self.parts.items()))

    def __bool__(self):
        return bool(self.parts)

    def degrees(self) -> set[int]:
        out = set()
        for c in self.parts.values():
            out |= c.degrees()
        return out

    def degree(self) -> int:
        ds = self.degrees()
        if len(ds) > 1:
            raise ValueError("twisted cochain is not homogeneous")
        return ds.pop() if ds else 0

    def parity(self) -> int:
        ps = {d & 1 for d in self.degrees()}
        if len(ps) > 1:
            raise ValueError("twisted cochain has mixed parity")
        return ps.pop() if ps else 0

    def format(self, model: OrbifoldLG | None = None) -> str:
        if not self.parts:
            return "0"
        return " + ".join(self.parts[h].format(model) for h in sorted(self.parts))

    def __str__(self):
        return self.format()


def koszul_diff(model: OrbifoldLG, c: KoszulCochain) -> KoszulCochain:
    """Apply sum_{i fixed} (dW^h/dx_i) d_i; the theta_{I_h} factor is never contracted."""
    sd = model.sector_data(c.sector)
    out: dict = {}
    for I, p in c.terms.items():
        for i in I:
            dw = sd.partial_of(i)
            if not dw:
                continue
            sign, rest = theta_derivative(I, i)
            term = p * dw
            if sign < 0:
                term = -term
            out[rest] = out[rest] + term if rest in out else term
    return KoszulCochain(c.n, c.sector, out)


def is_cocycle(model: OrbifoldLG, c: KoszulCochain) -> bool:
    return not koszul_diff(model, c)


def _monomials(n: int, fixed: tuple[int, ...], degrees) -> list[tuple[int, ...]]:
    out = []
    for d in degrees:
        for combo in combinations_with_replacement(fixed, d):
            e = [0] * (2 * n)
            for i in combo:
                e[i - 1] += 1
            out.append(tuple(e))
    return out


def _solve_component(model, sd, c: KoszulCochain, s: int, max_degree: int):
    """Witness for the theta-degree-s part (all |I| == s) or None."""
    n = c.n
    fixed = sd.fixed
    targets = [J for J in combinations(fixed, s + 1)]
    if not targets:
        return None
    wh = sd.w_fixed
    rhs = {}
    for I, p in c.terms.items():
        for e, v in p.terms.items():
            rhs[(I, e)] = v
    if wh.is_homogeneous() and wh:
        shift = wh.degree() - 1
        need = sorted({sum(e) - shift for (_, e) in rhs})
        degs = [d for d in need if 0 <= d <= max_degree]
        if len(degs) < len(need):
            return None
    else:
        degs = range(max_degree + 1)
    monos = _monomials(n, fixed, degs)
    unknowns = []
    columns = []
    for J in targets:
        for e in monos:
            mono = Poly._raw(n, {e: Fraction(1)})
            img = koszul_diff(model, KoszulCochain(n, c.sector, {J: mono}))
            col = {}
            for I, p in img.terms.items():
                for e2, v in p.terms.items():
                    col[(I, e2)] = v
            if col:
                unknowns.append((J, e))
                columns.append(col)
    sol = solve_sparse(columns, rhs)
    if sol is None:
        return None
    out: dict = {}
    for (J, e), v in zip(unknowns, sol):
        if v:
            out.setdefault(J, {})[e] = v
    return KoszulCochain(n, c.sector, {J: Poly(n, t) for J, t in out.items()})


def coboundary_solve(model: OrbifoldLG, c: KoszulCochain, max_degree: int | None = None):
    """Find s with koszul_diff(s) == c using coefficients of degree <= max_degree.

    Returns the witness (re-verified) or None when no witness exists within
    the bound.  Raises NotACocycle if c is not closed.
    """
    if max_degree is None:
        max_degree = default_bound(model)
    if not is_cocycle(model, c):
        raise NotACocycle(f"{c} is not a cocycle")
    witness = KoszulCochain.zero(c.n, c.sector)
    if not c:
        return witness
    sd = model.sector_data(c.sector)
    for s in sorted(c.theta_degrees()):
        part = _solve_component(model, sd, c.component(s), s, max_degree)
        if part is None:
            return None
        witness = witness + part
    if koszul_diff(model, witness) != c:  # pragma: no cover - solver bug guard
        raise AssertionError("coboundary witness failed re-verification")
    return witness


def class_equal(model: OrbifoldLG, a: KoszulCochain, b: KoszulCochain, max_degree: int | None = None) -> bool:
    """True iff a - b has a coboundary witness within the degree bound."""
    if a.sector != b.sector:
        raise ValueError("sector mismatch")
    if a and b and a.degrees() != b.degrees():
        raise ValueError("degree mismatch")
    return coboundary_solve(model, a - b, max_degree) is not None


_TAG = re.compile(r"([+-]?)\s*\[([^\]]*)\]")


def parse_cochain(model: OrbifoldLG, text: str, sector: GroupElt | None = None) -> KoszulCochain:
    """Parse ``[tag] <theta-expression>`` (the tag may be omitted if sector is given)."""
    tw = parse_twisted(model, text, sector)
    if len(tw.parts) > 1:
        raise ParseError("expected a single-sector cochain", 0, text)
    if not tw.parts:
        h = sector if sector is not None else _single_tag(model, text)
        return KoszulCochain.zero(model.n, h)
    (c,) = tw.parts.values()
    return c


def _single_tag(model, text):
    mt = _TAG.search(text)
    return model.lookup(mt.group(2)) if mt else model.identity


def parse_twisted(model: OrbifoldLG, text: str, sector: GroupElt | None = None) -> TwistedCochain:
    """Parse a sum of sector-tagged theta-expressions, e.g. ``[1] x3/2 - [rho] t1 t2``."""
    matches = list(_TAG.finditer(text))
    if not matches:
        if sector is None:
            raise ParseError("missing sector tag such as [1]", 0, text)
        chunks = [(sector, "+", text, 0)]
    else:
        if text[: matches[0].start()].strip():
            raise ParseError("text before the first sector tag", 0, text)
        chunks = []
        for k, mt in enumerate(matches):
            end = matches[k + 1].start() if k + 1 < len(matches) else len(text)
            try:
                h = model.lookup(mt.group(2))
            except ModelError as exc:
                raise ParseError(str(exc), mt.start(2), text) from exc
            chunks.append((h, mt.group(1) or "+", text[mt.end() : end], mt.end()))
    ring = CliffordRing(model.n, model.m)
    total = TwistedCochain(model.n)
    for h, sign, body, offset in chunks:
        if not body.strip():
            raise ParseError("empty cochain expression", offset, text)
        try:
            a = parse_expression(body, ring)
        except ParseError as exc:
            raise ParseError(str(exc).rsplit(" at position", 1)[0], offset + exc.pos, text) from exc
        try:
            c = KoszulCochain.from_clifford(h, a)
        except ValueError as exc:
            raise ParseError(str(exc), offset, text) from exc
        total = total + (c if sign == "+" else -c)
    return total
