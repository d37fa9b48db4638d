"""Normal-ordered elements of S<theta_1..theta_n, d_1..d_n>.

Relations: theta_i theta_j = -theta_j theta_i, d_i d_j = -d_j d_i and
d_i theta_j = -theta_j d_i + delta_ij.  Every element is stored as
sum c_{I,J} theta_I d_J with all thetas left of all contractions and
ascending indices in each block.  Index sets are 1-based tuples.

The same object serves as an S-linear operator on S<theta> (theta_i acts by
wedging on the left, d_i by contraction) and hence as a morphism between
Koszul matrix factorizations; products are composition, ``a * b`` meaning
"apply b, then a".
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Mapping

from .cyclo import Scalar, is_scalar, scalar_inv
from .poly import Poly, format_sum

__all__ = [
    "CliffordElt",
    "merge_sign",
    "theta_derivative",
    "apply_to_basis",
    "cliff_mul",
]

IndexSet = tuple[int, ...]


def merge_sign(a: IndexSet, b: IndexSet) -> tuple[int, IndexSet] | None:
    """Sign and sorted union for the product of two ascending anticommuting words.

    Returns None when the index sets overlap (the product vanishes).
    """
    if not a:
        return 1, b
    if not b:
        return 1, a
    inversions = 0
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        if a[i] < b[j]:
            out.append(a[i])
            i += 1
        elif a[i] > b[j]:
            out.append(b[j])
            inversions += len(a) - i
            j += 1
        else:
            return None
    out.extend(a[i:])
    out.extend(b[j:])
    return (-1 if inversions & 1 else 1), tuple(out)


def theta_derivative(I: IndexSet, i: int) -> tuple[int, IndexSet] | None:
    """d theta_I / d theta_i as (sign, remaining index set), None if i not in I.

    Left derivation: the sign is (-1)^(position of i in I, 0-based).
    """
    try:
        pos = I.index(i)
    except ValueError:
        return None
    return (-1 if pos & 1 else 1), I[:pos] + I[pos + 1 :]


@lru_cache(maxsize=None)
def _contract_past(B: IndexSet, C: IndexSet) -> tuple[tuple[IndexSet, IndexSet, int], ...]:
    """Normal-order d_B theta_C as a tuple of (C', B', sign)."""
    if not B:
        return ((C, (), 1),)
    b, rest = B[-1], B[:-1]
    acc: dict[tuple[IndexSet, IndexSet], int] = {}
    # d_b theta_C = (-1)^|C| theta_C d_b + [b in C] (-1)^pos theta_{C - b}
    s0 = -1 if len(C) & 1 else 1
    for c2, b2, s in _contract_past(rest, C):
        key = (c2, b2 + (b,))
        acc[key] = acc.get(key, 0) + s0 * s
    der = theta_derivative(C, b)
    if der is not None:
        s1, c_minus = der
        for c2, b2, s in _contract_past(rest, c_minus):
            key = (c2, b2)
            acc[key] = acc.get(key, 0) + s1 * s
    return tuple((c, bb, s) for (c, bb), s in acc.items() if s)


@lru_cache(maxsize=None)
def _mul_basis(A: IndexSet, B: IndexSet, C: IndexSet, D: IndexSet):
    """(theta_A d_B)(theta_C d_D) in normal form: tuple of ((I, J), sign)."""
    out: dict[tuple[IndexSet, IndexSet], int] = {}
    for c2, b2, s in _contract_past(B, C):
        th = merge_sign(A, c2)
        if th is None:
            continue
        dd = merge_sign(b2, D)
        if dd is None:
            continue
        key = (th[1], dd[1])
        out[key] = out.get(key, 0) + s * th[0] * dd[0]
    return tuple((k, v) for k, v in out.items() if v)


class CliffordElt:
    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[tuple[IndexSet, IndexSet], Poly] | None = None):
        self.n = n
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def _raw(cls, n, terms):
        a = cls.__new__(cls)
        a.n = n
        a.terms = terms
        return a

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, n: int) -> "CliffordElt":
        return cls._raw(n, {})

    @classmethod
    def scalar(cls, n: int, c) -> "CliffordElt":
        p = c if isinstance(c, Poly) else Poly.const(n, c)
        return cls._raw(n, {((), ()): p} if p else {})

    @classmethod
    def one(cls, n: int) -> "CliffordElt":
        return cls.scalar(n, 1)

    @classmethod
    def theta(cls, n: int, i: int) -> "CliffordElt":
        return cls._raw(n, {((i,), ()): Poly.one(n)})

    @classmethod
    def contraction(cls, n: int, i: int) -> "CliffordElt":
        return cls._raw(n, {((), (i,)): Poly.one(n)})

    @classmethod
    def monomial(cls, n: int, I: Iterable[int], J: Iterable[int] = (), coeff=1) -> "CliffordElt":
        """coeff * theta_I d_J for index sequences in any order (normalized)."""
        return cls.from_word(n, [("t", i) for i in I] + [("d", j) for j in J], coeff)

    @classmethod
    def from_word(cls, n: int, word: Iterable[tuple[str, int]], coeff=1) -> "CliffordElt":
        """coeff times the product of generators ('t', i) / ('d', i) in order."""
        out = cls.scalar(n, coeff)
        for kind, i in word:
            if not 1 <= i <= n:
                raise ValueError(f"index {i} out of range 1..{n}")
            out = out * (cls.theta(n, i) if kind == "t" else cls.contraction(n, i))
        return out

    # -- arithmetic -------------------------------------------------------
    def _check(self, other: "CliffordElt"):
        if other.n != self.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")

    def __add__(self, other):
        if not isinstance(other, CliffordElt):
            if isinstance(other, Poly) or is_scalar(other):
                other = CliffordElt.scalar(self.n, other)
            else:
                return NotImplemented
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            s = out.get(k)
            if s is None:
                out[k] = v
            else:
                s = s + v
                if s:
                    out[k] = s
                else:
                    del out[k]
        return CliffordElt._raw(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return CliffordElt._raw(self.n, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "CliffordElt":
        """Multiply every coefficient by a central scalar or Poly."""
        if isinstance(c, Poly) or is_scalar(c):
            out = {}
            for k, v in self.terms.items():
                w = v * c
                if w:
                    out[k] = w
            return CliffordElt._raw(self.n, out)
        raise TypeError("scale expects a scalar or Poly")

    def __mul__(self, other):
        if isinstance(other, CliffordElt):
            return cliff_mul(self, other)
        if isinstance(other, Poly) or is_scalar(other):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, Poly) or is_scalar(other):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, other):
        if is_scalar(other):
            return self.scale(scalar_inv(other))
        return NotImplemented

    def __pow__(self, k: int):
        out = CliffordElt.one(self.n)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, CliffordElt):
            return self.n == other.n and self.terms == other.terms
        if isinstance(other, Poly) or is_scalar(other):
            return self == CliffordElt.scalar(self.n, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # -- structure --------------------------------------------------------
    def parities(self) -> set[int]:
        return {(len(I) + len(J)) & 1 for I, J in self.terms}

    def parity(self) -> int:
        """Z/2 degree; raises ValueError on a mixed element."""
        ps = self.parities()
        if len(ps) > 1:
            raise ValueError("element is not Z/2-homogeneous")
        return ps.pop() if ps else 0

    def split_parity(self) -> tuple["CliffordElt", "CliffordElt"]:
        even = {k: v for k, v in self.terms.items() if not (len(k[0]) + len(k[1])) & 1}
        odd = {k: v for k, v in self.terms.items() if (len(k[0]) + len(k[1])) & 1}
        return CliffordElt._raw(self.n, even), CliffordElt._raw(self.n, odd)

    def map_coeffs(self, fn) -> "CliffordElt":
        out = {}
        for k, v in self.terms.items():
            w = fn(v)
            if w:
                out[k] = w
        return CliffordElt._raw(self.n, out)

    def theta_only(self) -> "CliffordElt":
        """The terms with empty contraction block."""
        return CliffordElt._raw(self.n, {k: v for k, v in self.terms.items() if not k[1]})

    def coeff(self, I: IndexSet, J: IndexSet = ()) -> Poly:
        return self.terms.get((tuple(I), tuple(J)), Poly.zero(self.n))

    # -- text ---------------------------------------------------------------
    def sorted_items(self):
        def key(item):
            (I, J), _ = item
            return (len(I) + len(J), I, J)

        for (I, J), p in sorted(self.terms.items(), key=key):
            ops = [f"t{i}" for i in I] + [f"d{j}" for j in J]
            for e, c in p.sorted_terms():
                mono = p.mono_str(e)
                yield "*".join(([mono] if mono else []) + ops), c

    def __str__(self):
        return format_sum(self.n, self.sorted_items())

    def __repr__(self):
        return f"CliffordElt({self.n}, {str(self)!r})"


def cliff_mul(a: CliffordElt, b: CliffordElt) -> CliffordElt:
    """Normal-ordered product a*b (composition: apply b first)."""
    a._check(b)
    out: dict = {}
    for (A, B), p in a.terms.items():
        for (C, D), q in b.terms.items():
            basis = _mul_basis(A, B, C, D)
            if not basis:
                continue
            pq = p * q
            if not pq:
                continue
            for key, s in basis:
                term = pq if s == 1 else (-pq if s == -1 else pq.scale(s))
                cur = out.get(key)
                if cur is None:
                    out[key] = term
                else:
                    cur = cur + term
                    if cur:
                        out[key] = cur
                    else:
                        del out[key]
    return CliffordElt._raw(a.n, out)


def _wedge(i: int, L: IndexSet):
    if i in L:
        return None
    below = sum(1 for l in L if l < i)
    return (-1 if below & 1 else 1), tuple(sorted(L + (i,)))


def apply_to_basis(a: CliffordElt, L: Iterable[int]) -> CliffordElt:
    """Act with the operator a on the exterior monomial theta_L.

    Implemented by direct wedge/contraction, independent of cliff_mul.
    The result has empty contraction blocks.
    """
    L = tuple(L)
    if list(L) != sorted(set(L)):
        raise ValueError("exterior monomial indices must be strictly increasing")
    out: dict = {}
    for (I, J), p in a.terms.items():
        sign, cur = 1, L
        ok = True
        for j in reversed(J):
            der = theta_derivative(cur, j)
            if der is None:
                ok = False
                break
            sign *= der[0]
            cur = der[1]
        if not ok:
            continue
        for i in reversed(I):
            w = _wedge(i, cur)
            if w is None:
                ok = False
                break
            sign *= w[0]
            cur = w[1]
        if not ok:
            continue
        key = (cur, ())
        term = p if sign == 1 else -p
        out[key] = out[key] + term if key in out else term
    return CliffordElt(a.n, out)


def group_act(h, a: CliffordElt) -> CliffordElt:
    """Diagonal action: x_i -> h_i x_i, y_i -> h_i y_i, theta_i -> h_i^-1 theta_i, d_i -> h_i d_i."""
    n = a.n
    eig = [h.eigenvalue(i) for i in range(1, n + 1)]
    inv = [scalar_inv(v) for v in eig]
    factors = {v: eig[v % n] for v in range(2 * n)}
    out = {}
    for (I, J), p in a.terms.items():
        c: Scalar = 1
        for i in I:
            c = c * inv[i - 1]
        for j in J:
            c = c * eig[j - 1]
        q = p.scale_vars(factors).scale(c)
        if q:
            out[(I, J)] = q
    return CliffordElt._raw(n, out)
