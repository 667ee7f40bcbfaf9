"""Full flags in R^n: transversality, the unipotent chart around the standard
pair (E, F), and positivity of triples and quadruples."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .linalg import DimensionError, RatMatrix, det, inverse, nullspace, rank
from .totpos import UnipotentUpper, is_unipotent_positive

__all__ = [
    "Flag",
    "StandardFlags",
    "TransversalityError",
    "is_positive_quadruple",
    "is_positive_triple",
    "is_positive_triple_standard",
    "is_transverse",
    "normalize_pair",
    "standard_flags",
    "unipotent_coordinate",
]


class TransversalityError(ValueError):
    """Raised when an operation needs transverse flags and does not get them."""


def _canonical_basis(basis: RatMatrix) -> RatMatrix:
    # column j ends up with a 1 in its pivot row (its lowest nonzero entry)
    # and zeros in the pivot rows of the columns before it; this form is
    # unique for each flag, so flags compare by their stored bases
    n = basis.rows
    cols: list[list[Fraction]] = []
    pivots: list[int] = []
    for j in range(basis.cols):
        v = list(basis.col(j))
        for c, p in zip(cols, pivots):
            if v[p]:
                f = v[p]
                v = [a - f * b for a, b in zip(v, c)]
        p = max((i for i in range(n) if v[i] != 0), default=None)
        if p is None:
            raise ValueError("flag basis is not invertible")
        inv = 1 / v[p]
        cols.append([a * inv for a in v])
        pivots.append(p)
    return RatMatrix.from_columns(cols)


class Flag:
    """A full flag; the first i columns of :attr:`basis` span the i-th subspace."""

    __slots__ = ("basis",)

    def __init__(self, basis: RatMatrix):
        if not basis.is_square:
            raise DimensionError("a full flag in R^n needs an n x n basis")
        self.basis = _canonical_basis(basis)

    @property
    def n(self) -> int:
        return self.basis.rows

    def subspace(self, i: int) -> RatMatrix:
        """Basis matrix (n x i) of the i-dimensional member."""
        return self.basis.columns(range(i))

    def __rmatmul__(self, g: RatMatrix) -> "Flag":
        return Flag(g @ self.basis)

    def __eq__(self, other) -> bool:
        return isinstance(other, Flag) and self.basis == other.basis

    def __hash__(self) -> int:
        return hash(self.basis)

    def __repr__(self) -> str:
        return f"Flag({self.basis!r})"


@dataclass(frozen=True)
class StandardFlags:
    E: Flag
    F: Flag


def standard_flags(n: int) -> StandardFlags:
    """F from e_1, e_2, ...; E from e_n, e_{n-1}, ..."""
    ident = RatMatrix.identity(n)
    return StandardFlags(E=Flag(ident.columns(range(n - 1, -1, -1))), F=Flag(ident))


def is_transverse(f1: Flag, f2: Flag) -> bool:
    """Whether the i-th member of f1 meets the (n-i)-th member of f2 only in 0."""
    if f1.n != f2.n:
        raise DimensionError("flags live in different dimensions")
    n = f1.n
    for i in range(1, n):
        stacked = RatMatrix.block([[f1.subspace(i), f2.subspace(n - i)]])
        if rank(stacked) != n:
            return False
    return True


def unipotent_coordinate(t: Flag, std: StandardFlags | None = None) -> UnipotentUpper:
    """The unique unit upper triangular u with ``u . E == t``.

    Requires t transverse to the standard flag F.
    """
    n = t.n
    cols: list[list[Fraction]] = []
    for j in range(n):
        v = list(t.basis.col(j))
        for k, c in enumerate(cols):
            f = v[n - 1 - k]
            if f:
                v = [a - f * b for a, b in zip(v, c)]
        piv = v[n - 1 - j]
        if piv == 0:
            raise TransversalityError("flag is not transverse to the standard flag F")
        cols.append([a / piv for a in v])
    # column j of the reduced basis is u e_{n-j}
    return UnipotentUpper(RatMatrix.from_columns(cols[::-1]))


def is_positive_triple_standard(t: Flag, std: StandardFlags | None = None) -> bool:
    """Positivity of (E, t, F): the chart coordinate of t lies in U^{>0}."""
    return is_unipotent_positive(unipotent_coordinate(t, std))


def normalize_pair(f1: Flag, f2: Flag) -> RatMatrix:
    """An invertible g with ``g . f1 == E`` and ``g . f2 == F``.

    Built from the lines ``f2_i ∩ f1_{n-i+1}``; unique up to a diagonal factor.
    """
    if not is_transverse(f1, f2):
        raise TransversalityError("the pair is not transverse")
    n = f1.n
    lines = []
    for i in range(1, n + 1):
        a = f2.subspace(i)
        b = f1.subspace(n - i + 1)
        kernel = nullspace(RatMatrix.block([[a, -b]]))
        if len(kernel) != 1:
            raise TransversalityError("intersection is not a line")
        coeffs = RatMatrix.column(kernel[0][:i])
        lines.append((a @ coeffs).col(0))
    return inverse(RatMatrix.from_columns(lines))


def _sign_matrices(n: int, orientation: str, det_sign: int):
    for signs in product((1, -1), repeat=n):
        if orientation == "sl":
            s = 1
            for x in signs:
                s *= x
            if s != det_sign:
                continue
        yield RatMatrix.diag(signs)


def _normalized_coordinates(f1: Flag, f3: Flag, others: list[Flag], orientation: str):
    """Yield, per admissible sign matrix d, the chart coordinates of ``d g . t``
    for each t in ``others`` (None where the chart is undefined)."""
    if orientation not in ("gl", "sl"):
        raise ValueError("orientation must be 'gl' or 'sl'")
    g = normalize_pair(f1, f3)
    det_sign = 1 if det(g) > 0 else -1
    moved = [g @ t for t in others]
    for d in _sign_matrices(f1.n, orientation, det_sign):
        coords = []
        for t in moved:
            try:
                coords.append(unipotent_coordinate(d @ t))
            except TransversalityError:
                coords.append(None)
        yield coords


def is_positive_triple(f1: Flag, t: Flag, f3: Flag, orientation: str = "gl") -> bool:
    """Positivity of an arbitrary triple, extended from (E, t, F) by the group action.

    ``orientation="gl"`` uses all of GL(n) and therefore ignores orientation
    (any three distinct points of RP^1 are positive); ``"sl"`` only allows
    determinant-one normalizations, which recovers the cyclic order on RP^1.
    """
    if not is_transverse(f1, f3):
        raise TransversalityError("outer flags are not transverse")
    if not is_transverse(f1, t):
        raise TransversalityError("middle flag is not transverse to the first one")
    for (u,) in _normalized_coordinates(f1, f3, [t], orientation):
        if u is not None and is_unipotent_positive(u):
            return True
    return False


def is_positive_quadruple(f1: Flag, s: Flag, s2: Flag, f4: Flag, orientation: str = "gl") -> bool:
    """Positivity of (f1, s, s2, f4).

    In the chart where (f1, f4) = (E, F) the coordinates must satisfy
    ``u_s in U^{>0}`` and ``u_s2 = u_s w`` with ``w in U^{>0}``, for one common
    normalization.
    """
    if not is_transverse(f1, f4):
        raise TransversalityError("outer flags are not transverse")
    for u, u2 in _normalized_coordinates(f1, f4, [s, s2], orientation):
        if u is None or u2 is None:
            continue
        if is_unipotent_positive(u) and is_unipotent_positive(inverse(u) @ u2):
            return True
    return False
