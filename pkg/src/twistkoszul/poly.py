"""Sparse multivariate polynomials in x1..xn, y1..yn over Q(zeta_m).

A :class:`Poly` maps exponent vectors of length 2n (x-block first, then
y-block) to nonzero scalars.  Values are treated as immutable.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from .cyclo import Cyclo, Scalar, as_scalar, is_scalar, scalar_inv, scalar_str

__all__ = ["Poly", "NotDivisible", "var_name", "var_index", "parse_poly"]


class NotDivisible(ArithmeticError):
    """Raised by :meth:`Poly.exact_div` when the remainder is nonzero."""

    def __init__(self, remainder: "Poly", divisor: "Poly"):
        self.remainder = remainder
        self.divisor = divisor
        super().__init__(f"not divisible by {divisor}: remainder {remainder}")


def var_name(n: int, v: int) -> str:
    return f"x{v + 1}" if v < n else f"y{v - n + 1}"


def var_index(n: int, name: str) -> int:
    """Position of ``x<i>`` / ``y<i>`` in the exponent vector, or -1."""
    if len(name) < 2 or name[0] not in "xy" or not name[1:].isdigit():
        return -1
    i = int(name[1:])
    if not 1 <= i <= n:
        return -1
    return i - 1 if name[0] == "x" else n + i - 1


def _mono_key(e: tuple[int, ...]):
    # graded lex with x1 < ... < xn < y1 < ... < yn
    return (sum(e), e[::-1])


class Poly:
    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[tuple[int, ...], Scalar] | None = None):
        self.n = n
        clean = {}
        if terms:
            for e, c in terms.items():
                if c:
                    clean[e] = c if isinstance(c, (Fraction, Cyclo)) else Fraction(c)
        self.terms = clean

    @classmethod
    def _raw(cls, n, terms):
        p = cls.__new__(cls)
        p.n = n
        p.terms = terms
        return p

    # -- constructors -----------------------------------------------------
    @classmethod
    def const(cls, n: int, c) -> "Poly":
        c = as_scalar(c)
        return cls._raw(n, {(0,) * (2 * n): c} if c else {})

    @classmethod
    def zero(cls, n: int) -> "Poly":
        return cls._raw(n, {})

    @classmethod
    def one(cls, n: int) -> "Poly":
        return cls.const(n, 1)

    @classmethod
    def gen(cls, n: int, v: int, c=1) -> "Poly":
        """The monomial c * (variable at position v)."""
        e = [0] * (2 * n)
        e[v] = 1
        return cls._raw(n, {tuple(e): as_scalar(c)}) if c else cls.zero(n)

    @classmethod
    def x(cls, n: int, i: int, c=1) -> "Poly":
        return cls.gen(n, i - 1, c)

    @classmethod
    def y(cls, n: int, i: int, c=1) -> "Poly":
        return cls.gen(n, n + i - 1, c)

    # -- coercion ---------------------------------------------------------
    def _coerce(self, other) -> "Poly | None":
        if isinstance(other, Poly):
            if other.n != self.n:
                raise ValueError(f"variable count mismatch: {self.n} vs {other.n}")
            return other
        if is_scalar(other):
            return Poly.const(self.n, other)
        return None

    # -- ring operations --------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o.terms:
            return self
        out = dict(self.terms)
        for e, c in o.terms.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s = s + c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return Poly._raw(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.n, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if is_scalar(other):
            return self.scale(other)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not self.terms or not o.terms:
            return Poly.zero(self.n)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                s = out.get(e)
                if s is None:
                    out[e] = c
                else:
                    s = s + c
                    if s:
                        out[e] = s
                    else:
                        del out[e]
        return Poly._raw(self.n, out)

    def __rmul__(self, other):
        if is_scalar(other):
            return self.scale(other)
        return NotImplemented

    def scale(self, c) -> "Poly":
        if not c:
            return Poly.zero(self.n)
        if c == 1:
            return self
        return Poly._raw(self.n, {e: v * c for e, v in self.terms.items()})

    def __truediv__(self, other):
        if is_scalar(other):
            return self.scale(scalar_inv(other))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        c = o.constant_value()
        if c is None:
            return self.exact_div(o)
        return self.scale(scalar_inv(c))

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("exponent must be a nonnegative integer")
        out = Poly.one(self.n)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.n == other.n and self.terms == other.terms
        if is_scalar(other):
            return self == Poly.const(self.n, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # -- inspection -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def constant_value(self):
        """The scalar value if the polynomial is constant, else None."""
        if not self.terms:
            return Fraction(0)
        if len(self.terms) == 1:
            (e, c), = self.terms.items()
            if not any(e):
                return c
        return None

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def variables(self) -> set[int]:
        used = set()
        for e in self.terms:
            used.update(v for v, k in enumerate(e) if k)
        return used

    def uses_y(self) -> bool:
        return any(v >= self.n for v in self.variables())

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: _mono_key(t[0]), reverse=True)

    def leading(self):
        e = max(self.terms, key=_mono_key)
        return e, self.terms[e]

    # -- calculus / substitution ------------------------------------------
    def partial(self, v: int) -> "Poly":
        """Formal derivative with respect to the variable at position v."""
        out = {}
        for e, c in self.terms.items():
            k = e[v]
            if k:
                e2 = list(e)
                e2[v] = k - 1
                out[tuple(e2)] = c * k
        return Poly._raw(self.n, out)

    def substitute(self, mapping: Mapping[int, "Poly"]) -> "Poly":
        """Simultaneous substitution; positions absent from mapping are kept."""
        if not mapping:
            return self
        n = self.n
        powers: dict[tuple[int, int], Poly] = {}

        def pw(v, k):
            key = (v, k)
            r = powers.get(key)
            if r is None:
                r = mapping[v] if k == 1 else pw(v, k - 1) * mapping[v]
                powers[key] = r
            return r

        out = Poly.zero(n)
        for e, c in self.terms.items():
            kept = [0] * (2 * n)
            acc = None
            for v, k in enumerate(e):
                if not k:
                    continue
                if v in mapping:
                    acc = pw(v, k) if acc is None else acc * pw(v, k)
                    if not acc:
                        break
                else:
                    kept[v] = k
            mono = Poly._raw(n, {tuple(kept): c})
            out = out + (mono if acc is None else mono * acc)
        return out

    def scale_vars(self, factors: Mapping[int, Scalar]) -> "Poly":
        """Substitute variable v -> factors[v] * v (diagonal action)."""
        out = {}
        for e, c in self.terms.items():
            for v, k in enumerate(e):
                if k and v in factors:
                    c = c * factors[v] ** k
            if c:
                out[e] = c
        return Poly._raw(self.n, out)

    def exact_div(self, d: "Poly") -> "Poly":
        """Quotient q with self == q * d; raise NotDivisible otherwise."""
        d = self._coerce(d)
        if not d.terms:
            raise ZeroDivisionError("polynomial division by zero")
        c = d.constant_value()
        if c is not None:
            return self.scale(scalar_inv(c))
        le, lc = d.leading()
        inv = scalar_inv(lc)
        rem = self
        quo: dict = {}
        leftover: dict = {}
        while rem.terms:
            e, c = rem.leading()
            if all(a >= b for a, b in zip(e, le)):
                qe = tuple(a - b for a, b in zip(e, le))
                qc = c * inv
                quo[qe] = quo.get(qe, 0) + qc
                rem = rem - Poly._raw(self.n, {qe: qc}) * d
            else:
                leftover[e] = c
                rem = Poly._raw(self.n, {k: v for k, v in rem.terms.items() if k != e})
        if leftover:
            raise NotDivisible(Poly(self.n, leftover), d)
        return Poly(self.n, quo)

    # -- text ---------------------------------------------------------------
    def mono_str(self, e) -> str:
        parts = []
        for v, k in enumerate(e):
            if k:
                name = var_name(self.n, v)
                parts.append(name if k == 1 else f"{name}^{k}")
        return "*".join(parts)

    def __str__(self):
        return format_sum(self.n, [(self.mono_str(e), c) for e, c in self.sorted_terms()])

    def __repr__(self):
        return f"Poly({self.n}, {str(self)!r})"


def format_sum(n: int, items: Iterable[tuple[str, Scalar]]) -> str:
    """Render sum of (symbol-word, scalar) pairs; the empty word means 1."""
    out = []
    for word, c in items:
        neg = isinstance(c, Fraction) and c < 0
        mag = -c if neg else c
        if not word:
            body = scalar_str(mag)
        elif mag == 1:
            body = word
        else:
            body = f"{scalar_str(mag)}*{word}"
        if not out:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out) if out else "0"


def parse_poly(text: str, n: int, m: int = 1) -> Poly:
    """Parse an expression in x1..xn, y1..yn (and ``z`` for zeta_m)."""
    from .parsing import parse_expression, PolyRing

    return parse_expression(text, PolyRing(n, m))
