"""Sp(2n, R) in a symplectic basis e_1..e_n, f_1..f_n: the semigroup
V^{>0} H° W^{>0}, Lagrangian triples, and the Maslov index."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .flags import TransversalityError
from .linalg import DimensionError, RatMatrix, column_echelon, det, inverse, rank

__all__ = [
    "Lagrangian",
    "SpProduct",
    "SymplecticSpace",
    "TransversalityError",
    "h_elem",
    "is_lagrangian",
    "is_pos_def",
    "is_positive_lag_triple",
    "is_symplectic",
    "is_transverse_lag",
    "kashiwara_form",
    "lag_coordinate",
    "maslov_index",
    "normalizing_element",
    "random_invertible",
    "random_pos_def",
    "random_symmetric",
    "random_symplectic",
    "signature",
    "sp_refactor",
    "sp_semigroup_product",
    "symplectic_form",
    "v_elem",
    "w_elem",
]


def symplectic_form(n: int) -> RatMatrix:
    """``[[0, I], [-I, 0]]``, so that omega(e_i, f_j) = delta_ij."""
    i, z = RatMatrix.identity(n), RatMatrix.zeros(n, n)
    return RatMatrix.block([[z, i], [-i, z]])


@dataclass(frozen=True)
class SymplecticSpace:
    n: int

    @property
    def form(self) -> RatMatrix:
        return symplectic_form(self.n)

    @property
    def L_E(self) -> "Lagrangian":
        return Lagrangian(RatMatrix.identity(2 * self.n).columns(range(self.n)))

    @property
    def L_F(self) -> "Lagrangian":
        return Lagrangian(RatMatrix.identity(2 * self.n).columns(range(self.n, 2 * self.n)))


def is_lagrangian(basis: RatMatrix, space: SymplecticSpace | None = None) -> bool:
    """Rank n and the symplectic form vanishes on the span."""
    if basis.rows % 2 or (space is not None and basis.rows != 2 * space.n):
        raise DimensionError(f"bad ambient dimension {basis.rows}")
    n = basis.rows // 2
    if basis.cols != n:
        raise DimensionError(f"a Lagrangian basis in R^{2 * n} has {n} columns")
    omega = symplectic_form(n)
    return rank(basis) == n and (basis.T @ omega @ basis).is_zero()


class Lagrangian:
    """Lagrangian subspace stored by its reduced column echelon basis."""

    __slots__ = ("basis",)

    def __init__(self, basis: RatMatrix):
        if not is_lagrangian(basis):
            raise ValueError("not a Lagrangian subspace")
        self.basis = column_echelon(basis)

    @property
    def n(self) -> int:
        return self.basis.cols

    @classmethod
    def graph(cls, m: RatMatrix) -> "Lagrangian":
        """``v_elem(m) . L_E``: the span of the columns of ``[I; m]``."""
        return cls(RatMatrix.block([[RatMatrix.identity(m.rows)], [m]]))

    def __rmatmul__(self, g: RatMatrix) -> "Lagrangian":
        return Lagrangian(g @ self.basis)

    def __eq__(self, other) -> bool:
        return isinstance(other, Lagrangian) and self.basis == other.basis

    def __hash__(self) -> int:
        return hash(self.basis)

    def __repr__(self) -> str:
        return f"Lagrangian({self.basis!r})"


def is_transverse_lag(l1: Lagrangian, l2: Lagrangian) -> bool:
    return rank(RatMatrix.block([[l1.basis, l2.basis]])) == 2 * l1.n


def _require_symmetric(m: RatMatrix) -> None:
    if not m.is_symmetric():
        raise ValueError("matrix is not symmetric")


def is_pos_def(m: RatMatrix) -> bool:
    """Sylvester's criterion on leading principal minors."""
    _require_symmetric(m)
    return all(det(m.submatrix(range(k), range(k))) > 0 for k in range(1, m.rows + 1))


def is_symplectic(g: RatMatrix) -> bool:
    if not g.is_square or g.rows % 2:
        return False
    omega = symplectic_form(g.rows // 2)
    return g.T @ omega @ g == omega


def v_elem(m: RatMatrix) -> RatMatrix:
    """``[[I, 0], [m, I]]``."""
    _require_symmetric(m)
    n = m.rows
    return RatMatrix.block([[RatMatrix.identity(n), RatMatrix.zeros(n, n)], [m, RatMatrix.identity(n)]])


def w_elem(m: RatMatrix) -> RatMatrix:
    """``[[I, m], [0, I]]``."""
    _require_symmetric(m)
    n = m.rows
    return RatMatrix.block([[RatMatrix.identity(n), m], [RatMatrix.zeros(n, n), RatMatrix.identity(n)]])


def h_elem(a: RatMatrix) -> RatMatrix:
    """``[[a, 0], [0, a^{-T}]]``; raises ZeroDivisionError for singular a."""
    n = a.rows
    return RatMatrix.block([[a, RatMatrix.zeros(n, n)], [RatMatrix.zeros(n, n), inverse(a).T]])


def lag_coordinate(t: Lagrangian) -> RatMatrix:
    """The symmetric M with ``v_elem(M) . L_E == t``."""
    n = t.n
    top = t.basis.submatrix(range(n), range(n))
    bottom = t.basis.submatrix(range(n, 2 * n), range(n))
    try:
        return bottom @ inverse(top)
    except ZeroDivisionError:
        raise TransversalityError("Lagrangian is not transverse to L_F") from None


def normalizing_element(l1: Lagrangian, l3: Lagrangian) -> RatMatrix:
    """A symplectic g with ``g . l1 == L_E`` and ``g . l3 == L_F``.

    The columns of l1's echelon basis become e_1..e_n and l3's basis is
    rescaled to the dual family f_1..f_n.
    """
    n = l1.n
    a, b = l1.basis, l3.basis
    pairing = a.T @ symplectic_form(n) @ b
    try:
        dual = b @ inverse(pairing)
    except ZeroDivisionError:
        raise TransversalityError("the outer Lagrangians are not transverse") from None
    return inverse(RatMatrix.block([[a, dual]]))


def is_positive_lag_triple(l1: Lagrangian, l2: Lagrangian, l3: Lagrangian) -> bool:
    """Positivity: after moving (l1, l3) to (L_E, L_F), l2 is the graph of a
    positive definite matrix."""
    g = normalizing_element(l1, l3)
    if not is_transverse_lag(l1, l2):
        raise TransversalityError("middle Lagrangian is not transverse to the first one")
    try:
        m = lag_coordinate(g @ l2)
    except TransversalityError:
        return False
    return is_pos_def(m)


def signature(m: RatMatrix) -> tuple[int, int, int]:
    """``(positive, negative, zero)`` counts of a symmetric matrix, by exact
    congruence diagonalization."""
    _require_symmetric(m)
    a = m.tolist()
    n = len(a)
    pos = neg = 0
    active = list(range(n))
    while active:
        p = next((i for i in active if a[i][i] != 0), None)
        if p is None:
            pair = next(((i, j) for i in active for j in active if a[i][j] != 0), None)
            if pair is None:
                break  # what remains is the zero form
            i, j = pair
            # row/column operation r_i += r_j makes the diagonal entry 2 a_ij
            for k in range(n):
                a[i][k] += a[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
            p = i
        piv = a[p][p]
        if piv > 0:
            pos += 1
        else:
            neg += 1
        active.remove(p)
        for i in active:
            f = a[i][p] / piv
            if f:
                for k in active:
                    a[i][k] -= f * a[p][k]
        for i in active:
            a[i][p] = a[p][i] = Fraction(0)
    return pos, neg, n - pos - neg


def kashiwara_form(l1: Lagrangian, l2: Lagrangian, l3: Lagrangian) -> RatMatrix:
    """Gram matrix of ``omega(x1,x2) + omega(x2,x3) + omega(x3,x1)`` on l1+l2+l3."""
    n = l1.n
    omega = symplectic_form(n)
    b = [l1.basis, l2.basis, l3.basis]
    z = RatMatrix.zeros(n, n)
    half = Fraction(1, 2)
    p12 = (b[0].T @ omega @ b[1]) * half
    p23 = (b[1].T @ omega @ b[2]) * half
    p31 = (b[2].T @ omega @ b[0]) * half
    return RatMatrix.block([[z, p12, p31.T], [p12.T, z, p23], [p31, p23.T, z]])


def maslov_index(l1: Lagrangian, l2: Lagrangian, l3: Lagrangian) -> int:
    """Signature of the Kashiwara form; equals n exactly on positive triples."""
    pos, neg, _ = signature(kashiwara_form(l1, l2, l3))
    return pos - neg


@dataclass(frozen=True)
class SpProduct:
    matrix: RatMatrix
    # (M, A, N) with matrix = v_elem(M) h_elem(A) w_elem(N), when certified
    factors: tuple[RatMatrix, RatMatrix, RatMatrix] | None

    @property
    def certified(self) -> bool:
        return self.factors is not None


def sp_refactor(g: RatMatrix) -> tuple[RatMatrix, RatMatrix, RatMatrix] | None:
    """Split g as ``v_elem(M) h_elem(A) w_elem(N)`` with M, N positive definite
    and det A > 0; None when no such split exists."""
    n = g.rows // 2
    a = g.submatrix(range(n), range(n))
    if det(a) <= 0:
        return None
    a_inv = inverse(a)
    nn = a_inv @ g.submatrix(range(n), range(n, 2 * n))
    mm = g.submatrix(range(n, 2 * n), range(n)) @ a_inv
    if not (nn.is_symmetric() and mm.is_symmetric()):
        return None
    if not (is_pos_def(nn) and is_pos_def(mm)):
        return None
    if v_elem(mm) @ h_elem(a) @ w_elem(nn) != g:
        return None
    return mm, a, nn


FACTOR_KINDS = ("V", "H", "W")


def sp_semigroup_product(factors: Iterable[tuple[str, RatMatrix]]) -> SpProduct:
    """Multiply tagged generators ``("V", M)``, ``("H", A)``, ``("W", N)``.

    V and W factors need positive definite M, N and H factors need det A > 0.
    The product is certified when it re-factors as V^{>0} H° W^{>0}.
    """
    result = None
    for kind, m in factors:
        if kind == "V" or kind == "W":
            if not is_pos_def(m):
                raise ValueError(f"{kind} factor needs a positive definite matrix")
            g = v_elem(m) if kind == "V" else w_elem(m)
        elif kind == "H":
            if det(m) <= 0:
                raise ValueError("H factor must lie in the identity component (det > 0)")
            g = h_elem(m)
        else:
            raise ValueError(f"unknown factor kind {kind!r}")
        result = g if result is None else result @ g
    if result is None:
        raise ValueError("empty product")
    return SpProduct(result, sp_refactor(result))


def random_symmetric(n: int, rng, lo: int = -5, hi: int = 5) -> RatMatrix:
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            rows[i][j] = rows[j][i] = Fraction(rng.randint(lo, hi), rng.randint(1, 4))
    return RatMatrix(rows)


def random_pos_def(n: int, rng) -> RatMatrix:
    """``B B^T + I`` for a random integer B."""
    b = RatMatrix([[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)])
    return b @ b.T + RatMatrix.identity(n)


def random_invertible(n: int, rng, positive_det: bool = False) -> RatMatrix:
    while True:
        a = RatMatrix([[Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(n)] for _ in range(n)])
        d = det(a)
        if d != 0 and (d > 0 or not positive_det):
            return a


def random_symplectic(n: int, rng) -> RatMatrix:
    """A product ``v(S1) h(A) w(S2)`` with random symmetric S1, S2 and invertible A."""
    return v_elem(random_symmetric(n, rng)) @ h_elem(random_invertible(n, rng)) @ w_elem(random_symmetric(n, rng))
