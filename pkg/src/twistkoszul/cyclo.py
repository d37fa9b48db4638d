"""Exact arithmetic in cyclotomic fields Q(zeta_m).

An element is a rational combination of zeta^0 .. zeta^(phi(m)-1), reduced
modulo the m-th cyclotomic polynomial.  Elements that happen to be rational
are always returned as plain :class:`fractions.Fraction`, so the common case
(m in {1, 2}, or any rational intermediate) never pays for the wrapper.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from numbers import Rational

__all__ = ["Cyclo", "zeta", "Scalar", "as_scalar", "scalar_inv", "scalar_str", "is_scalar"]


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


@lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> tuple[int, ...]:
    """Integer coefficients (ascending) of the m-th cyclotomic polynomial."""
    num = [-1] + [0] * (m - 1) + [1]  # x^m - 1
    for d in range(1, m):
        if m % d == 0:
            num = _exact_int_div(num, list(cyclotomic_poly(d)))
    return tuple(num)


def _exact_int_div(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    q = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for k in range(len(q) - 1, -1, -1):
        c = num[k + len(den) - 1]
        if c % lead:
            raise ArithmeticError("cyclotomic division not exact")
        c //= lead
        q[k] = c
        for t, dc in enumerate(den):
            num[k + t] -= c * dc
    if any(num[: len(den) - 1]):
        raise ArithmeticError("cyclotomic division not exact")
    return q


@lru_cache(maxsize=None)
def _power_table(m: int) -> tuple[tuple[int, ...], ...]:
    """Coordinates of zeta^k (0 <= k < m) in the power basis."""
    phi = cyclotomic_poly(m)
    deg = len(phi) - 1
    table = []
    cur = [1] + [0] * (deg - 1)
    for _ in range(m):
        table.append(tuple(cur))
        # multiply by zeta, then reduce zeta^deg = -sum phi_k zeta^k
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for k in range(deg):
                cur[k] -= top * phi[k]
    return tuple(table)


def _degree(m: int) -> int:
    return len(cyclotomic_poly(m)) - 1


class Cyclo:
    """Non-rational element of Q(zeta_m).

    Do not construct directly; use :func:`zeta` and arithmetic, or
    :meth:`from_coords`, which demotes rational values to ``Fraction``.
    """

    __slots__ = ("m", "c")

    def __init__(self, m: int, c: tuple[Fraction, ...]):
        self.m = m
        self.c = c

    @staticmethod
    def from_coords(m: int, coords) -> "Scalar":
        coords = tuple(Fraction(v) for v in coords)
        if not any(coords[1:]):
            return coords[0] if coords else Fraction(0)
        return Cyclo(m, coords)

    # -- coercion ---------------------------------------------------------
    def _lift(self, big: int) -> tuple[Fraction, ...]:
        if big == self.m:
            return self.c
        step = big // self.m
        table = _power_table(big)
        out = [Fraction(0)] * _degree(big)
        for k, v in enumerate(self.c):
            if v:
                for t, w in enumerate(table[(k * step) % big]):
                    if w:
                        out[t] += v * w
        return tuple(out)

    def _common(self, other):
        """Return (m, coords_self, coords_other) or None if not coercible."""
        if isinstance(other, Cyclo):
            if other.m == self.m:
                return self.m, self.c, other.c
            big = _lcm(self.m, other.m)
            return big, self._lift(big), other._lift(big)
        if isinstance(other, (int, Rational)):
            oc = [Fraction(0)] * len(self.c)
            oc[0] = Fraction(other)
            return self.m, self.c, tuple(oc)
        return None

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        com = self._common(other)
        if com is None:
            return NotImplemented
        m, a, b = com
        return Cyclo.from_coords(m, [x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclo(self.m, tuple(-x for x in self.c))

    def __sub__(self, other):
        com = self._common(other)
        if com is None:
            return NotImplemented
        m, a, b = com
        return Cyclo.from_coords(m, [x - y for x, y in zip(a, b)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Rational)):
            if not other:
                return Fraction(0)
            return Cyclo(self.m, tuple(x * other for x in self.c))
        com = self._common(other)
        if com is None:
            return NotImplemented
        m, a, b = com
        table = _power_table(m)
        out = [Fraction(0)] * len(a)
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if not y:
                    continue
                xy = x * y
                for t, w in enumerate(table[(i + j) % m]):
                    if w:
                        out[t] += xy * w
        return Cyclo.from_coords(m, out)

    __rmul__ = __mul__

    def conjugate_by(self, k: int) -> "Scalar":
        """Galois automorphism zeta -> zeta^k (k coprime to m)."""
        table = _power_table(self.m)
        out = [Fraction(0)] * len(self.c)
        for i, x in enumerate(self.c):
            if x:
                for t, w in enumerate(table[(i * k) % self.m]):
                    if w:
                        out[t] += x * w
        return Cyclo.from_coords(self.m, out)

    def inverse(self) -> "Scalar":
        # a^{-1} = prod_{k != 1} sigma_k(a) / N(a)
        prod: Scalar = Fraction(1)
        for k in range(2, self.m):
            if gcd(k, self.m) == 1:
                prod = prod * self.conjugate_by(k)
        norm = self * prod
        if isinstance(norm, Cyclo):  # pragma: no cover - field norm is rational
            raise ArithmeticError("norm is not rational")
        if not norm:
            raise ZeroDivisionError("division by zero in cyclotomic field")
        return prod * (1 / norm)

    def __truediv__(self, other):
        return self * scalar_inv(other)

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out: Scalar = Fraction(1)
        base: Scalar = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, Cyclo):
            com = self._common(other)
            return com[1] == com[2]
        # normalized Cyclo is never rational
        return False if isinstance(other, (int, Rational)) else NotImplemented

    def __hash__(self):
        return hash((self.m, self.c))

    def __bool__(self):
        return True

    def __repr__(self):
        return f"Cyclo({self.m}, {scalar_str(self)})"

    def __str__(self):
        return scalar_str(self)


Scalar = Fraction | Cyclo


def is_scalar(v) -> bool:
    return isinstance(v, (int, Rational, Cyclo))


def as_scalar(v) -> Scalar:
    if isinstance(v, Cyclo):
        return v
    return Fraction(v)


def scalar_inv(v) -> Scalar:
    if isinstance(v, Cyclo):
        return v.inverse()
    if not v:
        raise ZeroDivisionError("division by zero")
    return 1 / Fraction(v)


def zeta(m: int, k: int = 1) -> Scalar:
    """The power zeta_m^k of the primitive root exp(2 pi i / m)."""
    if m < 1:
        raise ValueError("m must be positive")
    k %= m
    if m == 1:
        return Fraction(1)
    if m == 2:
        return Fraction(-1 if k else 1)
    return Cyclo.from_coords(m, _power_table(m)[k])


def _frac_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def scalar_str(v) -> str:
    """Canonical text: ``a/b`` for rationals, ``(a + b*z + c*z^2)`` otherwise."""
    if not isinstance(v, Cyclo):
        return _frac_str(Fraction(v))
    parts = []
    for k, q in enumerate(v.c):
        if not q:
            continue
        mono = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
        if not mono:
            body = _frac_str(abs(q))
        elif abs(q) == 1:
            body = mono
        else:
            body = f"{_frac_str(abs(q))}*{mono}"
        sign = "-" if q < 0 else "+"
        if not parts:
            parts.append(body if sign == "+" else f"-{body}")
        else:
            parts.append(f" {sign} {body}")
    return "(" + "".join(parts) + ")"
