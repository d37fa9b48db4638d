"""Diagonal orbifold Landau-Ginzburg models (W, G).

The group is a subgroup of (Z/m)^n given by generators; an element with
exponent vector (k_1..k_n) acts by x_i -> zeta_m^{k_i} x_i.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from .cyclo import Scalar, zeta
from .poly import Poly, parse_poly

__all__ = [
    "GroupElt",
    "SectorData",
    "OrbifoldLG",
    "NotInvariant",
    "GroupTooLarge",
    "ModelError",
    "validate",
    "load_model",
    "model_from_dict",
    "DEFAULT_GROUP_CAP",
]

DEFAULT_GROUP_CAP = 4096


class ModelError(ValueError):
    pass


class NotInvariant(ModelError):
    def __init__(self, h: "GroupElt"):
        self.element = h
        super().__init__(f"NotInvariant: W is not invariant under {h}")


class GroupTooLarge(ModelError):
    pass


@dataclass(frozen=True, order=True)
class GroupElt:
    m: int
    exps: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "exps", tuple(k % self.m for k in self.exps))

    @classmethod
    def identity(cls, n: int, m: int) -> "GroupElt":
        return cls(m, (0,) * n)

    @property
    def n(self) -> int:
        return len(self.exps)

    def __mul__(self, other: "GroupElt") -> "GroupElt":
        if other.m != self.m or other.n != self.n:
            raise ValueError("group elements from different groups")
        return GroupElt(self.m, tuple(a + b for a, b in zip(self.exps, other.exps)))

    def inverse(self) -> "GroupElt":
        return GroupElt(self.m, tuple(-k for k in self.exps))

    def is_identity(self) -> bool:
        return not any(self.exps)

    def eigenvalue(self, i: int) -> Scalar:
        """h_i for the 1-based variable index i."""
        return zeta(self.m, self.exps[i - 1])

    def moved(self) -> tuple[int, ...]:
        return tuple(i + 1 for i, k in enumerate(self.exps) if k)

    def fixed(self) -> tuple[int, ...]:
        return tuple(i + 1 for i, k in enumerate(self.exps) if not k)

    def x_action(self, n: int) -> dict[int, Scalar]:
        """Scaling factors for x-variables only, keyed by exponent position."""
        return {i: self.eigenvalue(i + 1) for i in range(n) if self.exps[i]}

    def xy_action(self, n: int) -> dict[int, Scalar]:
        out = self.x_action(n)
        out.update({n + i: v for i, v in out.items()})
        return out

    def __str__(self):
        return "(" + ",".join(str(k) for k in self.exps) + ")"


@dataclass(frozen=True)
class SectorData:
    h: GroupElt
    moved: tuple[int, ...]
    fixed: tuple[int, ...]
    w_fixed: Poly
    jacobian: tuple[Poly, ...]

    def partial_of(self, i: int) -> Poly:
        """dW^h/dx_i for a fixed index i (zero for moved ones)."""
        if i in self.fixed:
            return self.jacobian[self.fixed.index(i)]
        return Poly.zero(self.w_fixed.n)


def _enumerate_group(n, m, generators, cap):
    ident = GroupElt.identity(n, m)
    seen = {ident}
    order = [ident]
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for s in generators:
                h = g * s
                if h not in seen:
                    seen.add(h)
                    order.append(h)
                    nxt.append(h)
                    if len(order) > cap:
                        raise GroupTooLarge(f"group has more than {cap} elements")
        frontier = nxt
    return tuple(sorted(order))


@dataclass(eq=False)
class OrbifoldLG:
    """A validated diagonal orbifold LG model; build with :func:`validate`."""

    n: int
    W: Poly
    m: int
    generators: tuple[GroupElt, ...]
    elements: tuple[GroupElt, ...]
    names: dict[str, GroupElt] = field(default_factory=dict)
    sectors: dict[GroupElt, SectorData] = field(default_factory=dict, repr=False)
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def identity(self) -> GroupElt:
        return GroupElt.identity(self.n, self.m)

    def element(self, exps: Iterable[int]) -> GroupElt:
        h = GroupElt(self.m, tuple(exps))
        if h not in self.sectors:
            raise ModelError(f"unknown group element {h}")
        return h

    def lookup(self, tag: str) -> GroupElt:
        """Resolve a sector tag: a name, ``1``/``id``, or ``k1,k2,...``."""
        tag = tag.strip()
        if tag in self.names:
            return self.names[tag]
        if tag in ("1", "id", "e"):
            return self.identity
        parts = tag.strip("()").split(",")
        if len(parts) == self.n:
            try:
                return self.element(int(p) for p in parts)
            except ValueError as exc:
                raise ModelError(f"bad sector tag {tag!r}") from exc
        raise ModelError(f"unknown sector tag {tag!r}")

    def tag(self, h: GroupElt) -> str:
        if h.is_identity():
            return "1"
        for name, g in sorted(self.names.items()):
            if g == h:
                return name
        return ",".join(str(k) for k in h.exps)

    def sector_data(self, h: GroupElt) -> SectorData:
        try:
            return self.sectors[h]
        except KeyError:
            raise ModelError(f"unknown group element {h}") from None

    def x(self, i: int, c=1) -> Poly:
        return Poly.x(self.n, i, c)

    def y(self, i: int, c=1) -> Poly:
        return Poly.y(self.n, i, c)

    def parse(self, text: str) -> Poly:
        return parse_poly(text, self.n, self.m)

    @cached_property
    def nablas(self) -> tuple[Poly, ...]:
        return tuple(_nabla(self.W, j) for j in range(1, self.n + 1))

    def nabla(self, j: int) -> Poly:
        if not 1 <= j <= self.n:
            raise ValueError(f"index {j} out of range")
        return self.nablas[j - 1]

    def box_minus(self) -> Poly:
        return box_minus(self)

    def canonical(self) -> dict:
        """JSON-compatible echo of the model in canonical form."""
        out = {
            "n": self.n,
            "W": str(self.W),
            "m": self.m,
            "generators": [list(g.exps) for g in self.generators],
        }
        if self.names:
            out["names"] = {k: list(v.exps) for k, v in sorted(self.names.items())}
        return out


def _to_y(W: Poly, upto: int) -> dict[int, Poly]:
    n = W.n
    return {i: Poly.gen(n, n + i) for i in range(upto)}


def _nabla(W: Poly, j: int) -> Poly:
    n = W.n
    upper = W.substitute(_to_y(W, j))
    lower = W.substitute(_to_y(W, j - 1))
    return (upper - lower).exact_div(Poly.y(n, j) - Poly.x(n, j))


def nabla(model: OrbifoldLG, j: int) -> Poly:
    """Difference quotient [W(y_1..y_j, x_{j+1}..) - W(y_1..y_{j-1}, x_j..)]/(y_j - x_j)."""
    return model.nabla(j)


def box_minus(model: OrbifoldLG) -> Poly:
    """W(y) - W(x)."""
    W = model.W
    return W.substitute(_to_y(W, W.n)) - W


def sector_data(model: OrbifoldLG, h: GroupElt) -> SectorData:
    return model.sector_data(h)


def _make_sector(W: Poly, h: GroupElt) -> SectorData:
    n = W.n
    moved, fixed = h.moved(), h.fixed()
    wh = W.substitute({i - 1: Poly.zero(n) for i in moved})
    jac = tuple(wh.partial(i - 1) for i in fixed)
    return SectorData(h, moved, fixed, wh, jac)


def validate(
    n: int,
    W: Poly | str,
    m: int,
    generators: Iterable[Iterable[int]] = (),
    names: Mapping[str, Iterable[int]] | None = None,
    cap: int = DEFAULT_GROUP_CAP,
) -> OrbifoldLG:
    """Check invariance of W under the generated group and cache sector data."""
    if n < 1:
        raise ModelError("n must be positive")
    if m < 1:
        raise ModelError("m must be positive")
    if isinstance(W, str):
        W = parse_poly(W, n, m)
    if W.n != n:
        raise ModelError("W has the wrong number of variables")
    if W.uses_y():
        raise ModelError("W must use x-variables only")
    gens = []
    for g in generators:
        g = tuple(g)
        if len(g) != n:
            raise ModelError(f"generator {list(g)} must have length {n}")
        gens.append(GroupElt(m, g))
    elements = _enumerate_group(n, m, gens, cap)
    for h in elements:
        if W.scale_vars(h.x_action(n)) != W:
            raise NotInvariant(h)
    sectors = {h: _make_sector(W, h) for h in elements}
    named = {}
    for key, v in (names or {}).items():
        g = GroupElt(m, tuple(v))
        if g not in sectors:
            raise ModelError(f"named element {key!r} is not in the group")
        named[key] = g
    return OrbifoldLG(n, W, m, tuple(gens), elements, named, sectors)


def model_from_dict(data: Mapping) -> OrbifoldLG:
    try:
        n = int(data["n"])
        W = data["W"]
        m = int(data.get("m", 1))
        gens = data.get("generators", [])
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelError(f"malformed model: {exc}") from exc
    if not isinstance(W, str):
        raise ModelError("field 'W' must be an expression string")
    return validate(n, W, m, gens, data.get("names"), int(data.get("group_cap", DEFAULT_GROUP_CAP)))


def load_model(path) -> OrbifoldLG:
    with open(path) as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError(f"parse error at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ModelError("model file must contain a JSON object")
    return model_from_dict(data)


def example_model() -> OrbifoldLG:
    """W = x1^2 + x2^2 + x1*x2*x3 with Z/2 acting by (-1, -1, 1)."""
    return validate(3, "x1^2+x2^2+x1*x2*x3", 2, [(1, 1, 0)], {"rho": (1, 1, 0)})
