"""The Theta-positive structure of SO(3, q), q >= 4.

Coordinates follow the block decomposition R^{q+3} = R^2 + R^{q-1} + R^2 with
the form ``Q = [[0, 0, K], [0, J, 0], [-K, 0, 0]]``. The unipotent radical
U_Theta is parametrized by ``(x, v, w, a)`` with x, a scalars and v, w in
R^{q-1}; the two simple weight spaces are the scalar line ``x`` (generator 1)
and the vector space ``v`` with the Lorentzian form q_J (generator 2).

Vectors are plain tuples of Fractions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence, Union

from .flags import TransversalityError
from .linalg import DimensionError, RatMatrix, as_scalar, rank
from .weyl import is_reduced, type_B2

__all__ = [
    "B2Params",
    "ConeVector",
    "Inversion",
    "IsotropicFlag",
    "QFormConfig",
    "UThetaElement",
    "braid_transition",
    "exp_nilpotent",
    "exp_principal",
    "F_word",
    "flag_from_element",
    "in_closed_cone",
    "in_cone_alpha2",
    "invert_F",
    "is_positive_triple_so3q",
    "is_transverse_12",
    "isotropic_flag",
    "sample_b2_params",
    "solve_params",
    "sample_cone_vector",
    "standard_isotropic_flags",
    "unipotent_coordinate_12",
    "subword_maps",
    "u_theta",
    "u_theta_from_matrix",
    "x_alpha1",
    "x_alpha2",
]

Vector = tuple[Fraction, ...]
Slot = Union[Fraction, Vector]

MIN_Q, MAX_Q = 4, 16


def _vec(v: Sequence) -> Vector:
    return tuple(as_scalar(a) for a in v)


def _add(v: Vector, w: Vector) -> Vector:
    return tuple(a + b for a, b in zip(v, w))


def _sub(v: Vector, w: Vector) -> Vector:
    return tuple(a - b for a, b in zip(v, w))


def _mul(c: Fraction, v: Vector) -> Vector:
    return tuple(c * a for a in v)


@dataclass(frozen=True)
class QFormConfig:
    """Quadratic form data for SO(3, q)."""

    q: int
    Q: RatMatrix = field(init=False, repr=False, compare=False)
    J: RatMatrix = field(init=False, repr=False, compare=False)
    K: RatMatrix = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.q, int) or not MIN_Q <= self.q <= MAX_Q:
            raise ValueError(f"q must be an integer in [{MIN_Q}, {MAX_Q}]")
        m = self.q - 1
        j = [[0] * m for _ in range(m)]
        j[0][m - 1] = j[m - 1][0] = 1
        for i in range(1, m - 1):
            j[i][i] = -1
        J = RatMatrix(j)
        K = RatMatrix([[0, 1], [-1, 0]])
        z = RatMatrix.zeros
        Q = RatMatrix.block(
            [
                [z(2, 2), z(2, m), K],
                [z(m, 2), J, z(m, 2)],
                [-K, z(2, m), z(2, 2)],
            ]
        )
        object.__setattr__(self, "J", J)
        object.__setattr__(self, "K", K)
        object.__setattr__(self, "Q", Q)

    @property
    def dim(self) -> int:
        """Size of the ambient space, q + 3."""
        return self.q + 3

    @property
    def vdim(self) -> int:
        """Dimension q - 1 of the vector weight space."""
        return self.q - 1

    def check_vector(self, v: Sequence, name: str = "vector") -> Vector:
        v = _vec(v)
        if len(v) != self.vdim:
            raise DimensionError(f"{name} must have length {self.vdim}, got {len(v)}")
        return v

    def J_apply(self, v: Vector) -> Vector:
        # J swaps the first and last coordinates and negates the middle ones
        return (v[-1],) + tuple(-a for a in v[1:-1]) + (v[0],)

    def bJ(self, v: Sequence, w: Sequence) -> Fraction:
        """``v^T J w / 2``."""
        v, w = self.check_vector(v), self.check_vector(w)
        return sum((a * b for a, b in zip(v, self.J_apply(w))), Fraction(0)) / 2

    def qJ(self, v: Sequence) -> Fraction:
        return self.bJ(v, v)

    def zero(self) -> Vector:
        return (Fraction(0),) * self.vdim

    def is_in_group(self, g: RatMatrix) -> bool:
        return g.T @ self.Q @ g == self.Q


@dataclass(frozen=True)
class ConeVector:
    """A vector of the weight space u_alpha2 together with its q_J value."""

    v: Vector
    qJ_value: Fraction

    @classmethod
    def of(cls, cfg: QFormConfig, v: Sequence) -> "ConeVector":
        v = cfg.check_vector(v)
        return cls(v, cfg.qJ(v))

    @property
    def interior(self) -> bool:
        return self.qJ_value > 0 and self.v[0] > 0


def in_cone_alpha2(cfg: QFormConfig, v: Sequence) -> bool:
    """Open cone: ``q_J(v) > 0`` and ``v_1 > 0``."""
    v = cfg.check_vector(v)
    return cfg.qJ(v) > 0 and v[0] > 0


def in_closed_cone(cfg: QFormConfig, v: Sequence) -> bool:
    """Closure of the open cone: ``q_J(v) >= 0`` with first and last entries >= 0."""
    v = cfg.check_vector(v)
    return cfg.qJ(v) >= 0 and v[0] >= 0 and v[-1] >= 0


@dataclass(frozen=True)
class UThetaElement:
    """An element of U_Theta with its coordinates and its matrix."""

    x: Fraction
    v: Vector
    w: Vector
    a: Fraction
    matrix: RatMatrix = field(repr=False)

    def coords(self) -> tuple[Fraction, Vector, Vector, Fraction]:
        return self.x, self.v, self.w, self.a


def _u_matrix(cfg: QFormConfig, x: Fraction, v: Vector, w: Vector, a: Fraction) -> RatMatrix:
    m, N = cfg.vdim, cfg.dim
    rows = RatMatrix.identity(N).tolist()
    half = Fraction(1, 2)
    shifted = _add(w, _mul(x * half, v))  # w + x v / 2
    rows[0][1] = x
    rows[0][2 : 2 + m] = shifted
    rows[0][N - 2] = a
    rows[0][N - 1] = a * x - cfg.qJ(shifted)
    rows[1][2 : 2 + m] = v
    rows[1][N - 2] = cfg.qJ(v)
    rows[1][N - 1] = a - 2 * cfg.bJ(v, w)
    jv = cfg.J_apply(v)
    last = _sub(_mul(x * half, jv), cfg.J_apply(w))  # -J w + x J v / 2
    for i in range(m):
        rows[2 + i][N - 2] = jv[i]
        rows[2 + i][N - 1] = last[i]
    rows[N - 2][N - 1] = x
    return RatMatrix(rows)


def u_theta(cfg: QFormConfig, x, v: Sequence, w: Sequence, a) -> UThetaElement:
    """The element ``U(x, v, w, a)``; its matrix preserves Q."""
    x, a = as_scalar(x), as_scalar(a)
    v, w = cfg.check_vector(v, "v"), cfg.check_vector(w, "w")
    mat = _u_matrix(cfg, x, v, w, a)
    if not cfg.is_in_group(mat):
        raise AssertionError("U(x, v, w, a) failed to preserve Q")
    return UThetaElement(x, v, w, a, mat)


def u_theta_from_matrix(cfg: QFormConfig, g: RatMatrix) -> UThetaElement:
    """Read the coordinates of g and check that g really lies in U_Theta."""
    if g.shape != (cfg.dim, cfg.dim):
        raise DimensionError(f"expected a {cfg.dim}x{cfg.dim} matrix")
    m, N = cfg.vdim, cfg.dim
    x = g[0, 1]
    v = tuple(g[1, 2 + i] for i in range(m))
    w = _sub(tuple(g[0, 2 + i] for i in range(m)), _mul(x / 2, v))
    a = g[0, N - 2]
    mat = _u_matrix(cfg, x, v, w, a)
    if mat != g:
        raise ValueError("matrix is not an element of U_Theta")
    return UThetaElement(x, v, w, a, mat)


def _product(cfg: QFormConfig, elems: Sequence[UThetaElement]) -> UThetaElement:
    g = RatMatrix.identity(cfg.dim)
    for e in elems:
        g = g @ e.matrix
    return u_theta_from_matrix(cfg, g)


def exp_nilpotent(n: RatMatrix) -> RatMatrix:
    """Matrix exponential of a nilpotent matrix (the series is finite)."""
    out = RatMatrix.identity(n.rows)
    term = out
    k = 0
    while True:
        k += 1
        term = (term @ n) * Fraction(1, k)
        if term.is_zero():
            return out
        out = out + term
        if k > n.rows:
            raise ValueError("matrix is not nilpotent")


def _lie_alpha1(cfg: QFormConfig, x: Fraction) -> RatMatrix:
    N = cfg.dim
    rows = RatMatrix.zeros(N, N).tolist()
    rows[0][1] = x
    rows[N - 2][N - 1] = x
    return RatMatrix(rows)


def _lie_alpha2(cfg: QFormConfig, v: Vector) -> RatMatrix:
    N, m = cfg.dim, cfg.vdim
    rows = RatMatrix.zeros(N, N).tolist()
    jv = cfg.J_apply(v)
    for i in range(m):
        rows[1][2 + i] = v[i]
        rows[2 + i][N - 2] = jv[i]
    return RatMatrix(rows)


def x_alpha1(cfg: QFormConfig, x) -> UThetaElement:
    """Exponential of the scalar root-space element x."""
    return u_theta_from_matrix(cfg, exp_nilpotent(_lie_alpha1(cfg, as_scalar(x))))


def x_alpha2(cfg: QFormConfig, v: Sequence) -> UThetaElement:
    """Exponential of the vector weight-space element v."""
    return u_theta_from_matrix(cfg, exp_nilpotent(_lie_alpha2(cfg, cfg.check_vector(v))))


def exp_principal(cfg: QFormConfig, a, w: Sequence) -> UThetaElement:
    """``exp`` of the sum of a scalar and a vector weight-space element."""
    lie = _lie_alpha1(cfg, as_scalar(a)) + _lie_alpha2(cfg, cfg.check_vector(w))
    return u_theta_from_matrix(cfg, exp_nilpotent(lie))


@dataclass(frozen=True)
class B2Params:
    """Parameters for a word in the B2 generators: letter 1 takes a scalar,
    letter 2 a vector."""

    word: tuple[int, ...]
    slots: tuple[Slot, ...]

    def __post_init__(self):
        word = tuple(self.word)
        if len(word) != len(self.slots):
            raise ValueError("one slot per letter is required")
        slots = []
        for letter, s in zip(word, self.slots):
            if letter == 1:
                if isinstance(s, (tuple, list)):
                    raise ValueError("letter 1 takes a scalar slot")
                slots.append(as_scalar(s))
            elif letter == 2:
                if not isinstance(s, (tuple, list)):
                    raise ValueError("letter 2 takes a vector slot")
                slots.append(_vec(s))
            else:
                raise IndexError(f"B2 generator {letter} out of range")
        object.__setattr__(self, "word", word)
        object.__setattr__(self, "slots", tuple(slots))

    def is_interior(self, cfg: QFormConfig) -> bool:
        """Every scalar positive and every vector in the open cone."""
        return all(
            (s > 0) if letter == 1 else in_cone_alpha2(cfg, s) for letter, s in zip(self.word, self.slots)
        )

    def negated(self) -> "B2Params":
        return B2Params(
            self.word,
            tuple(-s if letter == 1 else _mul(Fraction(-1), s) for letter, s in zip(self.word, self.slots)),
        )


def F_word(cfg: QFormConfig, params: B2Params) -> UThetaElement:
    """Ordered product of generator exponentials along the word."""
    if params.word and not is_reduced(type_B2(), params.word):
        raise ValueError(f"word {params.word} is not reduced in B2")
    factors = []
    for letter, s in zip(params.word, params.slots):
        if letter == 1:
            factors.append(x_alpha1(cfg, s))
        else:
            factors.append(x_alpha2(cfg, cfg.check_vector(s)))
    return _product(cfg, factors)


def braid_transition(cfg: QFormConfig, x1, v1: Sequence, x2, v2: Sequence, check: bool = True):
    """Coordinates ``(w1, y1, w2, y2)`` on the word 2121 of the element with
    coordinates ``(x1, v1, x2, v2)`` on the word 1212.

    With ``check`` the inputs must satisfy x1 >= 0, v1 in the closed cone,
    x2 > 0 and v2 in the open cone, where the map is well defined.
    """
    x1, x2 = as_scalar(x1), as_scalar(x2)
    v1, v2 = cfg.check_vector(v1, "v1"), cfg.check_vector(v2, "v2")
    if check:
        if not (x1 >= 0 and x2 > 0 and in_closed_cone(cfg, v1) and in_cone_alpha2(cfg, v2)):
            raise ValueError("inputs outside the domain x1 >= 0, v1 in closed cone, x2 > 0, v2 in open cone")
    qJ = cfg.qJ
    total = _add(v1, v2)
    combo = _add(_mul(x1, total), _mul(x2, v2))
    num = qJ(combo)
    den = x1 * qJ(total) + x2 * qJ(v2)
    if num == 0 or den == 0:
        raise ZeroDivisionError("braid transition is singular at these parameters")
    y1 = num / den
    y2 = x1 * x2 * qJ(v1) / den
    w2 = _mul(den / num, combo)
    w1 = _mul(1 / num, _sub(_mul(x1 * x2 * qJ(total) + x2 * x2 * qJ(v2), v1), _mul(x1 * x2 * qJ(v1), total)))
    return w1, y1, w2, y2


@dataclass(frozen=True)
class Inversion:
    """Outcome of solving for parameters: the candidate (if the equations had a
    solution) and, when u is not positive, the reason."""

    params: B2Params | None
    candidate: B2Params | None
    reason: str | None


def solve_params(cfg: QFormConfig, u: UThetaElement | RatMatrix, word: Sequence[int]) -> Inversion:
    """Solve ``F_word(p) == u`` for p on a reduced word of the longest element.

    Once the sums x1 + x2 and v1 + v2 are read off, the remaining equations are
    linear in the unknowns, so the answer is always rational.
    """
    if isinstance(u, RatMatrix):
        u = u_theta_from_matrix(cfg, u)
    word = tuple(word)
    qJ, bJ = cfg.qJ, cfg.bJ
    X, V, A = u.x, u.v, u.a
    P = _add(u.w, _mul(X / 2, V))  # x1 V + x2 v2 on 1212, y1 w2 on 2121
    if word == (1, 2, 1, 2):
        den = A + X * qJ(V) - 2 * bJ(P, V)
        if den == 0:
            return Inversion(None, None, "the linear system for x1 is singular")
        x1 = (A * X - qJ(P)) / den
        x2 = X - x1
        if x2 == 0:
            return Inversion(None, None, "x2 = 0")
        v2 = _mul(1 / x2, _sub(P, _mul(x1, V)))
        params = B2Params(word, (x1, _sub(V, v2), x2, v2))
    elif word == (2, 1, 2, 1):
        if A == 0:
            return Inversion(None, None, "a = 0")
        y1 = qJ(P) / A
        if y1 == 0:
            return Inversion(None, None, "y1 = 0")
        w2 = _mul(1 / y1, P)
        params = B2Params(word, (_sub(V, w2), y1, w2, X - y1))
    else:
        raise ValueError("word must be a reduced word of the longest element: (1,2,1,2) or (2,1,2,1)")
    if F_word(cfg, params).matrix != u.matrix:
        return Inversion(None, params, "u is not in the image of the word map")
    for i, (letter, s) in enumerate(zip(params.word, params.slots)):
        ok = s > 0 if letter == 1 else in_cone_alpha2(cfg, s)
        if not ok:
            kind = "scalar is not positive" if letter == 1 else "vector is outside the open cone"
            return Inversion(None, params, f"slot {i + 1}: {kind}")
    return Inversion(params, params, None)


def invert_F(cfg: QFormConfig, u: UThetaElement | RatMatrix, word: Sequence[int]) -> B2Params | None:
    """Interior parameters p on ``word`` with ``F_word(p) == u``, or None when u
    is not in the positive semigroup."""
    return solve_params(cfg, u, word).params


def subword_maps() -> list[tuple[tuple[int, ...], tuple[int, ...], tuple[str, ...]]]:
    """The 16 position subsets of the word 1212 with their letters and slot
    types, indexing the pieces of the nonnegative semigroup."""
    base = (1, 2, 1, 2)
    out = []
    for k in range(len(base) + 1):
        for pos in combinations(range(len(base)), k):
            letters = tuple(base[p] for p in pos)
            out.append((pos, letters, tuple("scalar" if a == 1 else "vector" for a in letters)))
    return out


# isotropic flags V1 < V2 ----------------------------------------------------


@dataclass(frozen=True)
class IsotropicFlag:
    """Basis matrix (q+3) x 2 whose first column spans V1 and both span V2."""

    basis: RatMatrix

    @property
    def v1(self) -> RatMatrix:
        return self.basis.columns([0])

    @property
    def v2(self) -> RatMatrix:
        return self.basis


def isotropic_flag(cfg: QFormConfig, basis: RatMatrix) -> IsotropicFlag:
    """Validate a Q-isotropic flag given by two basis columns."""
    if basis.shape != (cfg.dim, 2):
        raise DimensionError(f"isotropic flag basis must be {cfg.dim} x 2")
    if rank(basis) != 2:
        raise ValueError("V1 < V2 needs two independent vectors")
    if not (basis.T @ cfg.Q @ basis).is_zero():
        raise ValueError("V2 is not Q-isotropic")
    return IsotropicFlag(basis)


def standard_isotropic_flags(cfg: QFormConfig) -> tuple[IsotropicFlag, IsotropicFlag]:
    """``(E, F)``: E from e_{q+3}, e_{q+2}; F from e_1, e_2."""
    ident = RatMatrix.identity(cfg.dim)
    E = IsotropicFlag(ident.columns([cfg.dim - 1, cfg.dim - 2]))
    F = IsotropicFlag(ident.columns([0, 1]))
    return E, F


def is_transverse_12(cfg: QFormConfig, s: IsotropicFlag, t: IsotropicFlag) -> bool:
    """Generic position: Q pairs s_1 with t_1 and s_2 with t_2 nondegenerately."""
    pair1 = s.v1.T @ cfg.Q @ t.v1
    pair2 = s.v2.T @ cfg.Q @ t.v2
    return pair1[0, 0] != 0 and rank(pair2) == 2


def unipotent_coordinate_12(cfg: QFormConfig, s: IsotropicFlag) -> UThetaElement:
    """The unique u in U_Theta with ``u . E == s``."""
    E, F = standard_isotropic_flags(cfg)
    if not is_transverse_12(cfg, s, F):
        raise TransversalityError("flag is not transverse to the standard flag F")
    N, m = cfg.dim, cfg.vdim
    c1, c2 = list(s.basis.col(0)), list(s.basis.col(1))
    c1 = [a / c1[N - 1] for a in c1]
    c2 = [a - c2[N - 1] * b for a, b in zip(c2, c1)]
    c2 = [a / c2[N - 2] for a in c2]
    # c1 is u e_{q+3}, c2 is u e_{q+2}
    a = c2[0]
    v = cfg.J_apply(tuple(c2[2 : 2 + m]))
    x = c1[N - 2]
    w = _sub(_mul(x / 2, v), cfg.J_apply(tuple(c1[2 : 2 + m])))
    u = u_theta(cfg, x, v, w, a)
    if u.matrix.col(N - 1) != tuple(c1) or u.matrix.col(N - 2) != tuple(c2):
        raise ValueError("flag is not in the U_Theta orbit of E")
    return u


def is_positive_triple_so3q(cfg: QFormConfig, s: IsotropicFlag) -> bool:
    """Theta-positivity of (E, s, F)."""
    u = unipotent_coordinate_12(cfg, s)
    return invert_F(cfg, u, (1, 2, 1, 2)) is not None


def flag_from_element(cfg: QFormConfig, u: UThetaElement | RatMatrix) -> IsotropicFlag:
    """``u . E``."""
    g = u.matrix if isinstance(u, UThetaElement) else u
    E, _ = standard_isotropic_flags(cfg)
    return isotropic_flag(cfg, g @ E.basis)


def sample_cone_vector(cfg: QFormConfig, rng, size: int = 6) -> Vector:
    """Random rational vector in the open cone (rejection sampling)."""
    while True:
        v = tuple(Fraction(rng.randint(-size, size), rng.randint(1, 4)) for _ in range(cfg.vdim))
        if in_cone_alpha2(cfg, v):
            return v


def sample_b2_params(cfg: QFormConfig, word: Sequence[int], rng) -> B2Params:
    """Random interior parameters for ``word``."""
    slots = [
        Fraction(rng.randint(1, 9), rng.randint(1, 9)) if letter == 1 else sample_cone_vector(cfg, rng)
        for letter in word
    ]
    return B2Params(tuple(word), tuple(slots))
