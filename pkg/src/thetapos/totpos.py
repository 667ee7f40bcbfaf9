"""Total positivity in GL(n): minors, the unipotent positive semigroup, its
reduced-word parametrizations and their rational changes of coordinates,
and the lower-diagonal-upper factorization of totally positive matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .linalg import DimensionError, RatMatrix, _require_square, as_scalar, det
from .poly import char_poly, isolate_real_roots
from .weyl import ReducedWord, braid_move_path, is_reduced, longest_word, type_A

__all__ = [
    "MAX_MINOR_SIZE",
    "DecompositionError",
    "PositiveParams",
    "UnipotentUpper",
    "WhitneyFactors",
    "elementary_o",
    "elementary_u",
    "first_failing_minor",
    "is_totally_positive",
    "is_unipotent_positive",
    "param_F",
    "proximality_check",
    "reduced_word_of_longest",
    "sample_totally_positive",
    "sample_word_params",
    "sl3_transition",
    "whitney_factor",
    "whitney_factor_sl2",
    "word_transition",
]

# exhaustive minor enumeration grows like 4**n
MAX_MINOR_SIZE = 5


class DecompositionError(ArithmeticError):
    """A leading principal minor vanished, so no LDU factorization exists."""


class UnipotentUpper(RatMatrix):
    """Unit upper triangular matrix."""

    __slots__ = ()

    def __init__(self, data):
        if isinstance(data, RatMatrix):
            data = data.tolist()
        super().__init__(data)
        if not self.is_square:
            raise DimensionError("unipotent matrices are square")
        for i in range(self.rows):
            if self[i, i] != 1 or any(self[i, j] != 0 for j in range(i)):
                raise ValueError("not unit upper triangular")


@dataclass(frozen=True)
class PositiveParams:
    """Parameters ``t_1..t_k`` attached to a word ``i_1..i_k``."""

    word: tuple[int, ...]
    values: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "word", tuple(self.word))
        object.__setattr__(self, "values", tuple(as_scalar(v) for v in self.values))
        if len(self.word) != len(self.values):
            raise ValueError("one value per letter is required")

    @property
    def is_positive(self) -> bool:
        return all(v > 0 for v in self.values)


def elementary_u(i: int, t, n: int) -> UnipotentUpper:
    """``I_n + t E_{i,i+1}`` with the generator index i in 1..n-1."""
    if not 1 <= i <= n - 1:
        raise IndexError(f"generator index {i} out of range 1..{n - 1}")
    rows = RatMatrix.identity(n).tolist()
    rows[i - 1][i] = as_scalar(t)
    return UnipotentUpper(rows)


def elementary_o(i: int, t, n: int) -> RatMatrix:
    """Lower triangular counterpart ``I_n + t E_{i+1,i}``."""
    return elementary_u(i, t, n).T


def _check_size(m: RatMatrix) -> None:
    _require_square(m)
    if m.rows > MAX_MINOR_SIZE:
        raise DimensionError(f"exhaustive minor tests are capped at n = {MAX_MINOR_SIZE}")


def first_failing_minor(m: RatMatrix):
    """``(rows, cols, value)`` of the first non-positive minor, or None."""
    _check_size(m)
    n = m.rows
    for k in range(1, n + 1):
        for rows in combinations(range(n), k):
            for cols in combinations(range(n), k):
                value = det(m.submatrix(rows, cols))
                if value <= 0:
                    return rows, cols, value
    return None


def is_totally_positive(m: RatMatrix) -> bool:
    """Whether every minor of every size is strictly positive."""
    return first_failing_minor(m) is None


def _sign_twist(n: int) -> RatMatrix:
    return RatMatrix.diag([(-1) ** i for i in range(n)])


def _unforced_minors(n: int):
    # a minor of a unit upper triangular matrix can be nonzero only when the
    # sorted row indices sit weakly below the sorted column indices
    for k in range(1, n + 1):
        for rows in combinations(range(n), k):
            for cols in combinations(range(n), k):
                if all(r <= c for r, c in zip(rows, cols)):
                    yield rows, cols


def first_failing_unipotent_minor(u: RatMatrix):
    _check_size(u)
    for rows, cols in _unforced_minors(u.rows):
        value = det(u.submatrix(rows, cols))
        if value <= 0:
            return rows, cols, value
    return None


def is_unipotent_positive(u: RatMatrix, mirrored: bool = False) -> bool:
    """Membership in the positive unipotent semigroup U^{>0}.

    Every minor not forced to vanish on unit upper triangular matrices must be
    strictly positive. With ``mirrored=True`` the test is for the opposite
    cone, the image of U^{>0} under ``t -> -t`` on every parameter.
    """
    if not isinstance(u, UnipotentUpper):
        u = UnipotentUpper(u)
    if mirrored:
        d = _sign_twist(u.rows)
        u = d @ u @ d
    return first_failing_unipotent_minor(u) is None


def param_F(params: PositiveParams, n: int, mirrored: bool = False) -> UnipotentUpper:
    """The ordered product ``u_{i_1}(t_1) ... u_{i_k}(t_k)``.

    >>> param_F(PositiveParams((1, 2, 1), (1, 1, 1)), 3)
    RatMatrix([[1, 2, 1], [0, 1, 1], [0, 0, 1]])
    """
    if not is_reduced(type_A(n - 1), params.word):
        raise ValueError(f"word {params.word} is not reduced in S_{n}")
    sign = -1 if mirrored else 1
    rows = RatMatrix.identity(n).tolist()
    # right-multiplying by u_i(t) adds t * column i to column i+1
    for i, t in zip(params.word, params.values):
        t = sign * t
        if t:
            for r in range(n):
                rows[r][i] += t * rows[r][i - 1]
    return UnipotentUpper(rows)


def sl3_transition(a, b, c) -> tuple[Fraction, Fraction, Fraction]:
    """Parameters ``(c', b', a')`` with ``u_j(c') u_i(b') u_j(a') = u_i(a) u_j(b) u_i(c)``
    for adjacent generators i, j.

    >>> sl3_transition(1, 1, 1)
    (Fraction(1, 2), Fraction(2, 1), Fraction(1, 2))
    """
    a, b, c = as_scalar(a), as_scalar(b), as_scalar(c)
    s = a + c
    if s == 0:
        raise ZeroDivisionError("a + c = 0: the transition map is singular")
    return b * c / s, s, a * b / s


def word_transition(params: PositiveParams, target_word: Sequence[int], n: int) -> PositiveParams:
    """Re-express ``param_F(params)`` in the coordinates of another reduced word."""
    system = type_A(n - 1)
    path = braid_move_path(system, params.word, tuple(target_word))
    word = list(params.word)
    values = list(params.values)
    for pos, m in path:
        if m == 2:
            word[pos], word[pos + 1] = word[pos + 1], word[pos]
            values[pos], values[pos + 1] = values[pos + 1], values[pos]
        elif m == 3:
            word[pos : pos + 3] = [word[pos + 1], word[pos], word[pos + 1]]
            values[pos : pos + 3] = sl3_transition(*values[pos : pos + 3])
        else:
            raise ValueError(f"type A has no braid relation of length {m}")
    return PositiveParams(tuple(word), tuple(values))


@dataclass(frozen=True)
class WhitneyFactors:
    lower: RatMatrix
    diag: RatMatrix
    upper: UnipotentUpper

    def product(self) -> RatMatrix:
        return self.lower @ self.diag @ self.upper


def whitney_factor(g: RatMatrix) -> WhitneyFactors:
    """Exact LDU factorization without pivoting."""
    _require_square(g)
    n = g.rows
    a = g.tolist()
    lower = RatMatrix.identity(n).tolist()
    for k in range(n):
        if a[k][k] == 0:
            raise DecompositionError(f"leading principal minor of size {k + 1} vanishes")
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            lower[i][k] = f
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    d = [a[i][i] for i in range(n)]
    upper = [[a[i][j] / d[i] for j in range(n)] for i in range(n)]
    return WhitneyFactors(RatMatrix(lower), RatMatrix.diag(d), UnipotentUpper(upper))


def whitney_factor_sl2(s, t) -> WhitneyFactors:
    """Closed-form factors of ``u(s) o(t)``, valid whenever ``1 + st != 0``.

    >>> f = whitney_factor_sl2(1, 1)
    >>> f.product() == elementary_u(1, 1, 2) @ elementary_o(1, 1, 2)
    True
    """
    s, t = as_scalar(s), as_scalar(t)
    r = 1 + s * t
    if r == 0:
        raise DecompositionError("1 + st = 0")
    return WhitneyFactors(elementary_o(1, t / r, 2), RatMatrix.diag([r, 1 / r]), elementary_u(1, s / r, 2))


def proximality_check(g: RatMatrix) -> bool:
    """Whether g has n distinct real eigenvalues, all of one sign."""
    _require_square(g)
    roots = isolate_real_roots(char_poly(g))
    if len(roots) != g.rows or any(r.multiplicity != 1 for r in roots):
        return False
    signs = {r.sign for r in roots}
    return signs in ({1}, {-1})


def sample_word_params(word: Sequence[int], rng, lo: int = 1, hi: int = 9) -> PositiveParams:
    """Random strictly positive rational parameters for ``word``."""
    values = tuple(Fraction(rng.randint(lo, hi), rng.randint(lo, hi)) for _ in word)
    return PositiveParams(tuple(word), values)


def reduced_word_of_longest(n: int) -> ReducedWord:
    system = type_A(n - 1)
    return ReducedWord(system, longest_word(system))


def sample_totally_positive(n: int, rng) -> RatMatrix:
    """A totally positive matrix built as lower * diag * upper from positive parameters."""
    word = reduced_word_of_longest(n).letters if n > 1 else ()
    u = param_F(sample_word_params(word, rng), n)
    o = param_F(sample_word_params(word, rng), n).T
    d = RatMatrix.diag([Fraction(rng.randint(1, 9), rng.randint(1, 9)) for _ in range(n)])
    return o @ d @ u
