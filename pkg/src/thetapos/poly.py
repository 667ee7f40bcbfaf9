"""Univariate rational polynomials, characteristic polynomials and Sturm-based
real root isolation."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .linalg import RatMatrix, _require_square, as_scalar

__all__ = [
    "Polynomial",
    "RootInterval",
    "char_poly",
    "count_real_roots",
    "isolate_real_roots",
    "sturm_sequence",
]


class Polynomial:
    """Polynomial with Fraction coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence = ()):
        c = [as_scalar(a) for a in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(c)

    @classmethod
    def from_roots(cls, roots: Sequence) -> "Polynomial":
        p = cls([1])
        for r in roots:
            p = p * cls([-as_scalar(r), 1])
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # zero polynomial has degree -1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __call__(self, x) -> Fraction:
        x = as_scalar(x)
        acc = Fraction(0)
        for a in reversed(self.coeffs):
            acc = acc * x + a
        return acc

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Polynomial({[str(a) for a in self.coeffs]})"

    def __neg__(self) -> "Polynomial":
        return Polynomial([-a for a in self.coeffs])

    def __add__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return Polynomial([x + y for x, y in zip(a, b)])

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            c = as_scalar(other)
            return Polynomial([c * a for a in self.coeffs])
        if self.is_zero() or other.is_zero():
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        out = Polynomial([1])
        for _ in range(k):
            out = out * self
        return out

    def derivative(self) -> "Polynomial":
        return Polynomial([i * a for i, a in enumerate(self.coeffs)][1:])

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        return self * (1 / self.lead)

    def __divmod__(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        quot = [Fraction(0)] * max(len(rem) - dq, 0)
        inv_lead = 1 / other.lead
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k] * inv_lead
            if c:
                quot[k - dq] = c
                for j, b in enumerate(other.coeffs):
                    rem[k - dq + j] -= c * b
        return Polynomial(quot), Polynomial(rem[:dq] if dq > 0 else [])

    def __floordiv__(self, other: "Polynomial") -> "Polynomial":
        return divmod(self, other)[0]

    def __mod__(self, other: "Polynomial") -> "Polynomial":
        return divmod(self, other)[1]

    def gcd(self, other: "Polynomial") -> "Polynomial":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def squarefree_decomposition(self) -> list["Polynomial"]:
        """Yun's algorithm: factors ``f_1, f_2, ...`` with ``p ~ prod f_i**i``.

        Every ``f_i`` is square-free and monic (possibly constant 1), and the
        ``f_i`` are pairwise coprime.
        """
        if self.degree < 1:
            return []
        dp = self.derivative()
        a = self.gcd(dp)
        b = self // a
        c = dp // a
        d = c - b.derivative()
        factors = []
        while b.degree > 0:
            a = b.gcd(d)
            factors.append(a)
            b = b // a
            c = d // a
            d = c - b.derivative()
        return factors

    def sign_at(self, x) -> int:
        v = self(x)
        return (v > 0) - (v < 0)

    def cauchy_bound(self) -> Fraction:
        """Every real root has absolute value strictly below this bound."""
        lead = abs(self.lead)
        return 1 + max((abs(a) / lead for a in self.coeffs[:-1]), default=Fraction(0))

    def sign_variations(self) -> int:
        """Sign changes in the coefficient sequence (Descartes)."""
        signs = [a > 0 for a in self.coeffs if a != 0]
        return sum(1 for s, t in zip(signs, signs[1:]) if s != t)

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            a = self.coeffs[i]
            if a == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if mono and a == 1:
                terms.append(mono)
            elif mono and a == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{a}{'*' + mono if mono else ''}")
        return " + ".join(terms).replace("+ -", "- ")


def char_poly(m: RatMatrix) -> Polynomial:
    """``det(xI - m)``: similarity reduction to upper Hessenberg form, then the
    usual three-term style recurrence on its leading blocks (exact over Q)."""
    _require_square(m)
    n = m.rows
    h = [list(row) for row in m.tolist()]
    for k in range(1, n - 1):
        piv = next((i for i in range(k, n) if h[i][k - 1] != 0), None)
        if piv is None:
            continue
        if piv != k:
            h[piv], h[k] = h[k], h[piv]
            for row in h:
                row[piv], row[k] = row[k], row[piv]
        for j in range(k + 1, n):
            u = h[j][k - 1] / h[k][k - 1]
            if u:
                h[j] = [a - u * b for a, b in zip(h[j], h[k])]
                for row in h:
                    row[k] += u * row[j]
    # p[i] is the characteristic polynomial of the leading i x i block
    p = [Polynomial([1])]
    for k in range(n):
        nxt = Polynomial([-h[k][k], 1]) * p[k]
        sub = Fraction(1)
        for i in range(k - 1, -1, -1):
            sub *= h[i + 1][i]
            if sub == 0:
                break
            if h[i][k]:
                nxt = nxt - p[i] * (h[i][k] * sub)
        p.append(nxt)
    return p[n]


def sturm_sequence(p: Polynomial) -> list[Polynomial]:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        seq.append(-(seq[-2] % seq[-1]))
    seq.pop()
    return seq


def _variations(seq: list[Polynomial], x: Fraction) -> int:
    signs = [s for s in (q.sign_at(x) for q in seq) if s != 0]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


@dataclass(frozen=True)
class RootInterval:
    """Open interval ``(lo, hi)`` holding exactly one distinct real root.

    Endpoints are never roots, and no interval straddles zero unless its
    root is zero itself, so :attr:`sign` is exact.
    """

    lo: Fraction
    hi: Fraction
    multiplicity: int

    def contains(self, x) -> bool:
        return self.lo < as_scalar(x) < self.hi

    @property
    def sign(self) -> int:
        if self.lo >= 0:
            return 1
        if self.hi <= 0:
            return -1
        return 0


def _split_point(s: Polynomial, lo: Fraction, hi: Fraction) -> Fraction:
    k = 2
    while True:
        x = lo + (hi - lo) / k
        if s(x) != 0:
            return x
        k += 1


def _isolate_squarefree(s: Polynomial) -> list[tuple[Fraction, Fraction]]:
    seq = sturm_sequence(s)
    bound = s.cauchy_bound()
    # invariant: every endpoint on the stack is a non-root of s
    if s(0) != 0:
        stack = [(-bound, Fraction(0)), (Fraction(0), bound)]
    else:
        stack = [(-bound, bound)]
    out = []
    while stack:
        lo, hi = stack.pop()
        count = _variations(seq, lo) - _variations(seq, hi)
        if count == 0:
            continue
        if count == 1:
            out.append((lo, hi))
            continue
        mid = _split_point(s, lo, hi)
        stack.append((lo, mid))
        stack.append((mid, hi))
    out.sort()
    return out


def isolate_real_roots(p: Polynomial) -> list[RootInterval]:
    """Isolate the distinct real roots of ``p`` with their multiplicities.

    >>> [(str(r.lo), str(r.hi), r.multiplicity) for r in isolate_real_roots(Polynomial([-1, 0, 1]))]
    [('-2', '0', 1), ('0', '2', 1)]
    """
    if p.is_zero():
        raise ValueError("the zero polynomial has no isolated roots")
    if p.degree == 0:
        return []
    factors = p.squarefree_decomposition()
    squarefree = Polynomial([1])
    for f in factors:
        squarefree = squarefree * f
    out = []
    for lo, hi in _isolate_squarefree(squarefree):
        mult = 0
        for i, f in enumerate(factors, start=1):
            if f.degree > 0:
                seq = sturm_sequence(f)
                if _variations(seq, lo) - _variations(seq, hi) == 1:
                    mult = i
                    break
        out.append(RootInterval(lo, hi, mult))
    return out


def count_real_roots(p: Polynomial) -> int:
    return len(isolate_real_roots(p))
