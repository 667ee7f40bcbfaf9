import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thetapos.flags import TransversalityError
from thetapos.linalg import DimensionError, RatMatrix
from thetapos.so3q import (
    B2Params,
    ConeVector,
    F_word,
    QFormConfig,
    braid_transition,
    exp_principal,
    flag_from_element,
    in_closed_cone,
    in_cone_alpha2,
    invert_F,
    is_positive_triple_so3q,
    is_transverse_12,
    isotropic_flag,
    sample_b2_params,
    sample_cone_vector,
    solve_params,
    standard_isotropic_flags,
    subword_maps,
    u_theta,
    u_theta_from_matrix,
    unipotent_coordinate_12,
    x_alpha1,
    x_alpha2,
)
from thetapos.symplectic import signature

F = Fraction
C4 = QFormConfig(4)


def add(a, b):
    return tuple(s + t for s, t in zip(a, b))


def scale(c, a):
    return tuple(c * s for s in a)


def test_quadratic_form_examples():
    assert C4.qJ((1, 0, 1)) == 1
    assert C4.qJ((0, 1, 0)) == F(-1, 2)
    assert C4.qJ(C4.zero()) == 0
    assert C4.bJ((1, 0, 0), (0, 0, 1)) == F(1, 2)
    with pytest.raises(DimensionError):
        C4.qJ((1, 0))


@pytest.mark.parametrize("q", [3, 17])
def test_q_out_of_range(q):
    with pytest.raises(ValueError):
        QFormConfig(q)


def test_form_matrix_shapes_and_symmetry():
    for q in (4, 7):
        cfg = QFormConfig(q)
        assert cfg.Q.shape == (q + 3, q + 3) and cfg.J.shape == (q - 1, q - 1)
        assert cfg.Q.T == cfg.Q and cfg.J.T == cfg.J
        assert cfg.is_in_group(RatMatrix.identity(q + 3))


@pytest.mark.parametrize("q", range(4, 17))
def test_form_signature(q):
    assert signature(QFormConfig(q).J) == (1, q - 2, 0)


def test_cone_examples():
    assert in_cone_alpha2(C4, (1, 0, 1))
    assert not in_cone_alpha2(C4, (0, 0, 0))
    assert not in_cone_alpha2(C4, (-1, 0, -1))
    assert not in_cone_alpha2(C4, (1, 0, 0))
    assert in_closed_cone(C4, (1, 0, 0)) and in_closed_cone(C4, (0, 0, 0))
    cv = ConeVector.of(C4, (2, 1, 3))
    assert cv.qJ_value == F(11, 2) and cv.interior


def test_u_theta_examples():
    assert u_theta(C4, 0, (0, 0, 0), (0, 0, 0), 0).matrix == RatMatrix.identity(7)
    x, v = F(5, 3), (F(1), F(2), F(3))
    assert u_theta(C4, x, C4.zero(), C4.zero(), 0) == x_alpha1(C4, x)
    assert u_theta(C4, 0, v, C4.zero(), 0) == x_alpha2(C4, v)


def test_generator_entries():
    q = 4
    m = x_alpha1(C4, 1).matrix
    assert m[0, 1] == 1 and m[q + 1, q + 2] == 1
    v = (F(1), F(2), F(3))
    m2 = x_alpha2(C4, v).matrix
    assert m2[1, q + 1] == C4.qJ(v)
    assert tuple(m2[1, 2 + i] for i in range(3)) == v
    assert tuple(m2[2 + i, q + 1] for i in range(3)) == C4.J_apply(v)


def test_one_parameter_subgroups():
    x, y = F(2, 3), F(-7, 5)
    assert (x_alpha1(C4, x).matrix @ x_alpha1(C4, y).matrix) == x_alpha1(C4, x + y).matrix
    v, w = (F(1), F(-2), F(1, 2)), (F(0), F(3), F(4))
    assert (x_alpha2(C4, v).matrix @ x_alpha2(C4, w).matrix) == x_alpha2(C4, add(v, w)).matrix


def test_u_theta_from_matrix_reads_coordinates_back():
    u = u_theta(C4, F(1, 2), (1, 2, 3), (F(-1), F(0), F(5, 2)), F(7))
    assert u_theta_from_matrix(C4, u.matrix) == u
    with pytest.raises(ValueError):
        u_theta_from_matrix(C4, RatMatrix.diag([2, 1, 1, 1, 1, 1, F(1, 2)]))


def test_word_map_examples():
    assert F_word(C4, B2Params((), ())).matrix == RatMatrix.identity(7)
    x1, v1, x2, v2 = F(1), (1, 0, 1), F(2), (F(1, 2), 0, 1)
    expected = x_alpha1(C4, x1).matrix @ x_alpha2(C4, v1).matrix @ x_alpha1(C4, x2).matrix @ x_alpha2(C4, v2).matrix
    assert F_word(C4, B2Params((1, 2, 1, 2), (x1, v1, x2, v2))).matrix == expected
    with pytest.raises(ValueError):
        B2Params((1, 2), ((1, 0, 1), 1))
    with pytest.raises(ValueError):
        F_word(C4, B2Params((1, 1), (1, 2)))


def test_braid_example():
    v = (1, 0, 1)
    w1, y1, w2, y2 = braid_transition(C4, 1, v, 1, v)
    assert (w1, y1, w2, y2) == ((F(1, 3), 0, F(1, 3)), F(9, 5), (F(5, 3), 0, F(5, 3)), F(1, 5))
    lhs = F_word(C4, B2Params((1, 2, 1, 2), (1, v, 1, v)))
    rhs = F_word(C4, B2Params((2, 1, 2, 1), (w1, y1, w2, y2)))
    assert lhs.matrix == rhs.matrix


def test_braid_boundary_x1_zero():
    v1, x2, v2 = (F(1, 2), F(1, 3), F(1)), F(3, 2), (F(2), F(1), F(1))
    w1, y1, w2, y2 = braid_transition(C4, 0, v1, x2, v2)
    assert add(w1, w2) == add(v1, v2) and y1 + y2 == x2
    lhs = F_word(C4, B2Params((1, 2, 1, 2), (0, v1, x2, v2)))
    rhs = F_word(C4, B2Params((2, 1, 2, 1), (w1, y1, w2, y2)))
    assert lhs.matrix == rhs.matrix


def test_braid_domain():
    with pytest.raises(ValueError):
        braid_transition(C4, -1, (1, 0, 1), 1, (1, 0, 1))
    with pytest.raises(ValueError):
        braid_transition(C4, 1, (1, 0, 1), 1, (1, 0, 0))
    with pytest.raises(ZeroDivisionError):
        braid_transition(C4, 0, (0, 0, 0), 1, (1, 0, 0), check=False)


def test_inversion_examples():
    assert invert_F(C4, u_theta(C4, 0, C4.zero(), C4.zero(), 0), (1, 2, 1, 2)) is None
    assert invert_F(C4, RatMatrix.identity(7), (2, 1, 2, 1)) is None
    p = B2Params((2, 1, 2, 1), ((F(1, 3), 0, F(1, 3)), F(9, 5), (F(5, 3), 0, F(5, 3)), F(1, 5)))
    assert invert_F(C4, F_word(C4, p), (2, 1, 2, 1)) == p
    assert invert_F(C4, F_word(C4, p), (1, 2, 1, 2)) == B2Params((1, 2, 1, 2), (1, (1, 0, 1), 1, (1, 0, 1)))
    with pytest.raises(ValueError):
        invert_F(C4, F_word(C4, p), (1, 2, 1))


def test_inversion_reports_why():
    neg = B2Params((1, 2, 1, 2), (F(-1), (1, 0, 1), F(1), (1, 0, 1)))
    inv = solve_params(C4, F_word(C4, neg), (1, 2, 1, 2))
    assert inv.params is None and inv.candidate == neg and "slot 1" in inv.reason


def test_exp_examples():
    assert exp_principal(C4, 0, C4.zero()).matrix == RatMatrix.identity(7)
    assert exp_principal(C4, F(5, 2), C4.zero()) == x_alpha1(C4, F(5, 2))
    w = (1, 0, 1)
    expected = F_word(C4, B2Params((2, 1, 2, 1), ((F(1, 3), 0, F(1, 3)), F(3, 4), (F(2, 3), 0, F(2, 3)), F(1, 4))))
    assert exp_principal(C4, 1, w).matrix == expected.matrix
    assert invert_F(C4, exp_principal(C4, 1, w), (2, 1, 2, 1)).slots[1] == F(3, 4)


def test_isotropic_flag_examples():
    E, Fl = standard_isotropic_flags(C4)
    assert is_transverse_12(C4, E, Fl)
    assert not is_transverse_12(C4, Fl, Fl)
    with pytest.raises(TransversalityError):
        unipotent_coordinate_12(C4, Fl)
    assert unipotent_coordinate_12(C4, E).matrix == RatMatrix.identity(7)
    with pytest.raises(ValueError):
        isotropic_flag(C4, RatMatrix.identity(7).columns([2, 3]))


def test_forward_flag_triples():
    rng = random.Random(4)
    for word in ((1, 2, 1, 2), (2, 1, 2, 1)):
        p = sample_b2_params(C4, word, rng)
        assert is_positive_triple_so3q(C4, flag_from_element(C4, F_word(C4, p)))
        assert not is_positive_triple_so3q(C4, flag_from_element(C4, F_word(C4, p.negated())))


def test_sixteen_subwords():
    maps = subword_maps()
    assert len(maps) == 16
    assert len({m[0] for m in maps}) == 16
    assert maps[0] == ((), (), ()) and maps[-1][1] == (1, 2, 1, 2)
    assert all(len(pos) == len(types) for pos, _, types in maps)


# property tests

qs = st.sampled_from([4, 5, 6])


@settings(max_examples=40, deadline=None)
@given(qs, st.integers(0, 10**6))
def test_braid_identity_and_equations(q, seed):
    cfg = QFormConfig(q)
    p = sample_b2_params(cfg, (1, 2, 1, 2), random.Random(seed))
    x1, v1, x2, v2 = p.slots
    w1, y1, w2, y2 = braid_transition(cfg, x1, v1, x2, v2)
    out = B2Params((2, 1, 2, 1), (w1, y1, w2, y2))
    assert F_word(cfg, p).matrix == F_word(cfg, out).matrix
    assert out.is_interior(cfg) and cfg.qJ(w1) > 0
    qJ = cfg.qJ
    assert x1 + x2 == y1 + y2
    assert add(v1, v2) == add(w1, w2)
    assert add(scale(x1, add(v1, v2)), scale(x2, v2)) == scale(y1, w2)
    assert scale(x2, v1) == add(scale(y1, w1), scale(y2, add(w1, w2)))
    assert add(scale(y1, w2), scale(x2, v1)) == scale(x1 + x2, add(v1, v2))
    assert y1 * qJ(w2) == x1 * qJ(add(v1, v2)) + x2 * qJ(v2)
    assert y1 * qJ(w1) + y2 * qJ(add(w1, w2)) == x2 * qJ(v1)


@settings(max_examples=40, deadline=None)
@given(qs, st.integers(0, 10**6), st.sampled_from([(1, 2, 1, 2), (2, 1, 2, 1)]))
def test_inversion_round_trip(q, seed, word):
    cfg = QFormConfig(q)
    p = sample_b2_params(cfg, word, random.Random(seed))
    u = F_word(cfg, p)
    assert cfg.is_in_group(u.matrix)
    assert invert_F(cfg, u, word) == p
    assert invert_F(cfg, F_word(cfg, p.negated()), word) is None


@settings(max_examples=30, deadline=None)
@given(qs, st.integers(0, 10**6))
def test_exp_identity(q, seed):
    cfg = QFormConfig(q)
    rng = random.Random(seed)
    a, w = F(rng.randint(1, 20), rng.randint(1, 9)), sample_cone_vector(cfg, rng)
    expected = B2Params((2, 1, 2, 1), (scale(F(1, 3), w), F(3, 4) * a, scale(F(2, 3), w), F(1, 4) * a))
    assert exp_principal(cfg, a, w).matrix == F_word(cfg, expected).matrix


@settings(max_examples=30, deadline=None)
@given(qs, st.integers(0, 10**6))
def test_semigroup_closure(q, seed):
    cfg = QFormConfig(q)
    rng = random.Random(seed)
    g = F_word(cfg, sample_b2_params(cfg, (1, 2, 1, 2), rng))
    h = F_word(cfg, sample_b2_params(cfg, (2, 1, 2, 1), rng))
    prod = g.matrix @ h.matrix
    for word in ((1, 2, 1, 2), (2, 1, 2, 1)):
        p = invert_F(cfg, prod, word)
        assert p is not None and p.is_interior(cfg)


@settings(max_examples=40, deadline=None)
@given(st.integers(4, 8), st.integers(0, 10**6))
def test_general_elements_preserve_the_form(q, seed):
    cfg = QFormConfig(q)
    rng = random.Random(seed)

    def vec():
        return tuple(F(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(cfg.vdim))

    u = u_theta(cfg, F(rng.randint(-9, 9), 7), vec(), vec(), F(rng.randint(-9, 9), 4))
    assert cfg.is_in_group(u.matrix)
    assert u_theta_from_matrix(cfg, u.matrix) == u


@settings(max_examples=20, deadline=None)
@given(qs, st.integers(0, 10**6))
def test_forward_triples_are_positive(q, seed):
    cfg = QFormConfig(q)
    p = sample_b2_params(cfg, (1, 2, 1, 2), random.Random(seed))
    s = flag_from_element(cfg, F_word(cfg, p))
    assert is_transverse_12(cfg, s, standard_isotropic_flags(cfg)[1])
    assert is_positive_triple_so3q(cfg, s)
    assert not is_positive_triple_so3q(cfg, flag_from_element(cfg, F_word(cfg, p.negated())))
