"""Randomized invariant suites behind ``thetapos selftest``.

Each suite draws from its own ``random.Random`` seeded with ``"<seed>:<name>"``,
so suites are reproducible individually and independent of their order.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .flags import Flag, is_positive_triple, is_positive_triple_standard, standard_flags
from .linalg import RatMatrix, column_echelon, det
from .poly import Polynomial, isolate_real_roots
from .serialize import b2params_to_json, format_scalar, matrix_to_json, params_to_json, vector_to_json
from .so3q import (
    B2Params,
    F_word,
    QFormConfig,
    braid_transition,
    exp_principal,
    flag_from_element,
    in_cone_alpha2,
    invert_F,
    is_positive_triple_so3q,
    sample_b2_params,
    sample_cone_vector,
)
from .symplectic import (
    Lagrangian,
    SymplecticSpace,
    is_positive_lag_triple,
    is_symplectic,
    is_transverse_lag,
    maslov_index,
    random_invertible,
    random_pos_def,
    random_symmetric,
    random_symplectic,
    signature,
    sp_semigroup_product,
)
from .totpos import (
    PositiveParams,
    elementary_o,
    elementary_u,
    is_totally_positive,
    is_unipotent_positive,
    param_F,
    proximality_check,
    reduced_word_of_longest,
    sample_totally_positive,
    sample_word_params,
    sl3_transition,
    whitney_factor,
    whitney_factor_sl2,
    word_transition,
)
from .weyl import enumerate_reduced_words, type_A

__all__ = ["SUITES", "SuiteResult", "run_selftest"]


@dataclass
class SuiteResult:
    name: str
    passed: int = 0
    failed: int = 0
    counterexample: dict | None = None

    def record(self, ok: bool, witness: Callable[[], dict]) -> None:
        if ok:
            self.passed += 1
        else:
            self.failed += 1
            if self.counterexample is None:
                self.counterexample = witness()

    def to_json(self) -> dict:
        out = {"suite": self.name, "passed": self.passed, "failed": self.failed}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


def _rand_matrix(n: int, rng) -> RatMatrix:
    return RatMatrix([[Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(n)] for _ in range(n)])


def _pos(rng) -> Fraction:
    return Fraction(rng.randint(1, 12), rng.randint(1, 12))


def det_multiplicative(rng, trials, res):
    for _ in range(trials):
        n = rng.randint(1, 5)
        a, b = _rand_matrix(n, rng), _rand_matrix(n, rng)
        res.record(det(a @ b) == det(a) * det(b), lambda: {"a": matrix_to_json(a), "b": matrix_to_json(b)})


def echelon_span_invariance(rng, trials, res):
    for _ in range(trials):
        n, k = rng.randint(2, 5), rng.randint(1, 3)
        m = RatMatrix([[rng.randint(-3, 3) for _ in range(k)] for _ in range(n)])
        g = random_invertible(k, rng)
        ok = column_echelon(m @ g) == column_echelon(m) and column_echelon(column_echelon(m)) == column_echelon(m)
        res.record(ok, lambda: {"m": matrix_to_json(m), "g": matrix_to_json(g)})


def root_isolation(rng, trials, res):
    for _ in range(trials):
        roots = sorted({Fraction(rng.randint(-20, 20), rng.randint(1, 5)) for _ in range(rng.randint(1, 5))})
        found = isolate_real_roots(Polynomial.from_roots(roots))
        ok = len(found) == len(roots) and all(iv.contains(r) for iv, r in zip(found, roots))
        res.record(ok, lambda: {"roots": vector_to_json(roots)})


def sl2_identity(rng, trials, res):
    for _ in range(trials):
        s, t = _pos(rng), _pos(rng)
        lhs = elementary_u(1, s, 2) @ elementary_o(1, t, 2)
        res.record(whitney_factor_sl2(s, t).product() == lhs, lambda: {"s": format_scalar(s), "t": format_scalar(t)})


def sl3_braid(rng, trials, res):
    for _ in range(trials):
        a, b, c = _pos(rng), _pos(rng), _pos(rng)
        out = sl3_transition(a, b, c)
        ok = param_F(PositiveParams((1, 2, 1), (a, b, c)), 3) == param_F(PositiveParams((2, 1, 2), out), 3)
        ok = ok and all(x > 0 for x in out)
        res.record(ok, lambda: {"values": vector_to_json((a, b, c))})


def tp_semigroup(rng, trials, res):
    for _ in range(trials):
        n = rng.choice((3, 4))
        g, h = sample_totally_positive(n, rng), sample_totally_positive(n, rng)
        res.record(is_totally_positive(g @ h), lambda: {"g": matrix_to_json(g), "h": matrix_to_json(h)})


def unipotent_semigroup(rng, trials, res):
    for _ in range(trials):
        n = rng.choice((3, 4))
        word = reduced_word_of_longest(n).letters
        u1, u2 = param_F(sample_word_params(word, rng), n), param_F(sample_word_params(word, rng), n)
        res.record(is_unipotent_positive(u1 @ u2), lambda: {"u1": matrix_to_json(u1), "u2": matrix_to_json(u2)})


def word_independence(rng, trials, res):
    words = [w.letters for w in enumerate_reduced_words(type_A(3), reduced_word_of_longest(4))]
    for _ in range(trials):
        src, dst = rng.choice(words), rng.choice(words)
        p = sample_word_params(src, rng)
        out = word_transition(p, dst, 4)
        ok = param_F(out, 4) == param_F(p, 4) and out.is_positive
        res.record(ok, lambda: {"params": params_to_json(p), "target": list(dst)})


def param_minor_consistency(rng, trials, res):
    for _ in range(trials):
        n = rng.choice((3, 4))
        word = reduced_word_of_longest(n).letters
        p = sample_word_params(word, rng)
        values = list(p.values)
        values[rng.randrange(len(values))] = Fraction(0)
        zeroed = PositiveParams(word, values)
        ok = is_unipotent_positive(param_F(p, n)) and not is_unipotent_positive(param_F(zeroed, n))
        res.record(ok, lambda: {"params": params_to_json(p), "zeroed": params_to_json(zeroed)})


def whitney_round_trip(rng, trials, res):
    for _ in range(trials):
        g = sample_totally_positive(rng.choice((2, 3, 4)), rng)
        f = whitney_factor(g)
        ok = f.product() == g and all(f.diag[i, i] > 0 for i in range(g.rows))
        res.record(ok, lambda: {"g": matrix_to_json(g)})


def eigenvalue_separation(rng, trials, res):
    for _ in range(trials):
        g = sample_totally_positive(rng.choice((3, 4)), rng)
        res.record(proximality_check(g), lambda: {"g": matrix_to_json(g)})


def flag_triples(rng, trials, res):
    std3 = standard_flags(3)
    word = reduced_word_of_longest(3).letters
    for _ in range(trials):
        t = Fraction(rng.randint(-9, 9), rng.randint(1, 5)) or Fraction(1)
        ok2 = is_positive_triple_standard(Flag(RatMatrix([[t, 0], [1, 1]]))) == (t > 0)
        p = sample_word_params(word, rng)
        pos_flag = param_F(p, 3) @ std3.E
        neg_flag = param_F(p, 3, mirrored=True) @ std3.E
        ok3 = is_positive_triple_standard(pos_flag) and not is_positive_triple_standard(neg_flag)
        # the general test extends positivity along the group action
        ok3 = ok3 and is_positive_triple(std3.E, pos_flag, std3.F)
        res.record(ok2 and ok3, lambda: {"t": format_scalar(t), "params": params_to_json(p)})


def maslov_equivalence(rng, trials, res):
    for _ in range(trials):
        n = rng.randint(1, 3)
        sp = SymplecticSpace(n)
        g = random_symplectic(n, rng)
        ls = [g @ sp.L_E, g @ Lagrangian.graph(random_symmetric(n, rng)), g @ sp.L_F]
        if not (is_transverse_lag(ls[0], ls[1]) and is_transverse_lag(ls[1], ls[2]) and is_transverse_lag(ls[0], ls[2])):
            continue
        ok = is_symplectic(g) and is_positive_lag_triple(*ls) == (maslov_index(*ls) == n)
        res.record(ok, lambda: {f"l{i + 1}": matrix_to_json(l.basis) for i, l in enumerate(ls)})


def sp_semigroup(rng, trials, res):
    for _ in range(trials):
        n = rng.randint(1, 3)
        factors = [("V", random_pos_def(n, rng)), ("H", random_invertible(n, rng, positive_det=True)), ("W", random_pos_def(n, rng))]
        factors = factors * 2
        prod = sp_semigroup_product(factors)
        ok = is_symplectic(prod.matrix) and prod.certified
        res.record(ok, lambda: {"factors": [[k, matrix_to_json(m)] for k, m in factors]})


def so3q_braid(rng, trials, res):
    for _ in range(trials):
        cfg = QFormConfig(rng.choice((4, 5, 6)))
        p = sample_b2_params(cfg, (1, 2, 1, 2), rng)
        w1, y1, w2, y2 = braid_transition(cfg, *p.slots)
        image = B2Params((2, 1, 2, 1), (w1, y1, w2, y2))
        lhs, rhs = F_word(cfg, p), F_word(cfg, image)
        ok = lhs.matrix == rhs.matrix and image.is_interior(cfg) and cfg.is_in_group(lhs.matrix)
        res.record(ok, lambda: {"q": cfg.q, "params": b2params_to_json(p)})


def so3q_round_trip(rng, trials, res):
    for _ in range(trials):
        cfg = QFormConfig(rng.choice((4, 5, 6)))
        word = rng.choice(((1, 2, 1, 2), (2, 1, 2, 1)))
        p = sample_b2_params(cfg, word, rng)
        u = F_word(cfg, p)
        ok = invert_F(cfg, u, word) == p and invert_F(cfg, F_word(cfg, p.negated()), word) is None
        res.record(ok, lambda: {"q": cfg.q, "params": b2params_to_json(p)})


def so3q_exp(rng, trials, res):
    for _ in range(trials):
        cfg = QFormConfig(rng.choice((4, 5, 6)))
        a, w = _pos(rng), sample_cone_vector(cfg, rng)
        third = tuple(x / 3 for x in w)
        expected = B2Params((2, 1, 2, 1), (third, a * 3 / 4, tuple(2 * x for x in third), a / 4))
        ok = exp_principal(cfg, a, w).matrix == F_word(cfg, expected).matrix
        res.record(ok, lambda: {"q": cfg.q, "a": format_scalar(a), "w": vector_to_json(w)})


def so3q_semigroup(rng, trials, res):
    for _ in range(trials):
        cfg = QFormConfig(rng.choice((4, 5, 6)))
        p1 = sample_b2_params(cfg, (1, 2, 1, 2), rng)
        p2 = sample_b2_params(cfg, (2, 1, 2, 1), rng)
        prod = F_word(cfg, p1).matrix @ F_word(cfg, p2).matrix
        out = invert_F(cfg, prod, (1, 2, 1, 2))
        ok = out is not None and out.is_interior(cfg)
        res.record(ok, lambda: {"q": cfg.q, "p1": b2params_to_json(p1), "p2": b2params_to_json(p2)})


def so3q_triples(rng, trials, res):
    for _ in range(trials):
        cfg = QFormConfig(rng.choice((4, 5, 6)))
        p = sample_b2_params(cfg, (1, 2, 1, 2), rng)
        pos = is_positive_triple_so3q(cfg, flag_from_element(cfg, F_word(cfg, p)))
        neg = is_positive_triple_so3q(cfg, flag_from_element(cfg, F_word(cfg, p.negated())))
        res.record(pos and not neg, lambda: {"q": cfg.q, "params": b2params_to_json(p)})


def qj_signature(rng, trials, res):
    for q in range(4, 17):
        cfg = QFormConfig(q)
        sig = signature(cfg.J)
        v = sample_cone_vector(cfg, rng)
        ok = sig == (1, q - 2, 0) and in_cone_alpha2(cfg, v)
        res.record(ok, lambda: {"q": q, "signature": list(sig)})


SUITES: dict[str, Callable] = {
    "det-multiplicative": det_multiplicative,
    "echelon-span-invariance": echelon_span_invariance,
    "root-isolation": root_isolation,
    "sl2-identity": sl2_identity,
    "sl3-braid": sl3_braid,
    "tp-semigroup-closure": tp_semigroup,
    "unipotent-semigroup-closure": unipotent_semigroup,
    "reduced-word-independence": word_independence,
    "param-minor-consistency": param_minor_consistency,
    "whitney-round-trip": whitney_round_trip,
    "eigenvalue-separation": eigenvalue_separation,
    "flag-triples": flag_triples,
    "maslov-equivalence": maslov_equivalence,
    "sp-semigroup": sp_semigroup,
    "so3q-braid": so3q_braid,
    "so3q-round-trip": so3q_round_trip,
    "so3q-exp": so3q_exp,
    "so3q-semigroup-closure": so3q_semigroup,
    "so3q-flag-triples": so3q_triples,
    "qj-signature": qj_signature,
}


def run_selftest(seed: int, trials: int = 20, suites: list[str] | None = None) -> list[SuiteResult]:
    out = []
    for name in suites or SUITES:
        res = SuiteResult(name)
        SUITES[name](random.Random(f"{seed}:{name}"), trials, res)
        out.append(res)
    return out
