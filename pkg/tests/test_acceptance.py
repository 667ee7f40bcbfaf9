"""Acceptance criteria 1 to 11.

Every identity is checked with exact equality; criteria 1 to 10 also have a
wall-clock limit. Each criterion prints one PASS/FAIL line, either at the end
of a pytest run or directly with ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import random
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cache
from itertools import combinations
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import descartes_signature, leibniz_det  # noqa: E402

from thetapos.flags import Flag, is_positive_triple_standard, standard_flags  # noqa: E402
from thetapos.linalg import RatMatrix  # noqa: E402
from thetapos.poly import char_poly, isolate_real_roots  # noqa: E402
from thetapos.so3q import (  # noqa: E402
    B2Params,
    F_word,
    QFormConfig,
    braid_transition,
    exp_principal,
    invert_F,
    sample_b2_params,
    sample_cone_vector,
    u_theta,
)
from thetapos.symplectic import (  # noqa: E402
    Lagrangian,
    SymplecticSpace,
    is_positive_lag_triple,
    is_symplectic,
    is_transverse_lag,
    kashiwara_form,
    maslov_index,
    random_pos_def,
    random_symmetric,
    random_symplectic,
)
from thetapos.totpos import (  # noqa: E402
    PositiveParams,
    elementary_o,
    elementary_u,
    is_totally_positive,
    is_unipotent_positive,
    param_F,
    reduced_word_of_longest,
    sample_totally_positive,
    sample_word_params,
    sl3_transition,
    word_transition,
)
from thetapos.weyl import enumerate_reduced_words, type_A  # noqa: E402

F = Fraction


@dataclass
class Outcome:
    number: int
    title: str
    limit: float | None
    checks: int = 0
    failures: list[str] = field(default_factory=list)
    elapsed: float = 0.0
    sp_elements: list[RatMatrix] = field(default_factory=list)
    u_elements: list[tuple[QFormConfig, RatMatrix]] = field(default_factory=list)

    def check(self, ok: bool, what: str) -> None:
        self.checks += 1
        if not ok and len(self.failures) < 5:
            self.failures.append(what)

    @property
    def passed(self) -> bool:
        in_time = self.limit is None or self.elapsed < self.limit
        return not self.failures and self.checks > 0 and in_time

    def line(self) -> str:
        limit = f" (limit {self.limit:g} s)" if self.limit is not None else ""
        status = "PASS" if self.passed else "FAIL"
        text = f"[{status}] {self.number:2d}. {self.title}: {self.checks} checks in {self.elapsed:.2f} s{limit}"
        if self.failures:
            text += "; first failure: " + self.failures[0]
        return text


def rand_pos(rng, hi=20):
    return F(rng.randint(1, hi), rng.randint(1, hi))


def sl2_identity(out: Outcome, rng):
    for _ in range(100):
        s, t = rand_pos(rng), rand_pos(rng)
        r = 1 + s * t
        lhs = elementary_u(1, s, 2) @ elementary_o(1, t, 2)
        rhs = elementary_o(1, t / r, 2) @ RatMatrix.diag([r, 1 / r]) @ elementary_u(1, s / r, 2)
        out.check(lhs == rhs, f"s={s}, t={t}")


def sl3_transition_check(out: Outcome, rng):
    for _ in range(200):
        a, b, c = rand_pos(rng), rand_pos(rng), rand_pos(rng)
        image = sl3_transition(a, b, c)
        same = param_F(PositiveParams((1, 2, 1), (a, b, c)), 3) == param_F(PositiveParams((2, 1, 2), image), 3)
        out.check(same and all(x > 0 for x in image), f"(a,b,c)=({a},{b},{c})")


def all_minors_positive(m: RatMatrix) -> bool:
    n = m.rows
    rows = m.tolist()
    return all(
        leibniz_det([[rows[i][j] for j in cols] for i in rs]) > 0
        for k in range(1, n + 1)
        for rs in combinations(range(n), k)
        for cols in combinations(range(n), k)
    )


def tp_closure(out: Outcome, rng):
    for i in range(100):
        n = 3 if i % 2 == 0 else 4
        g, h = sample_totally_positive(n, rng), sample_totally_positive(n, rng)
        prod = g @ h
        out.check(all_minors_positive(g) and all_minors_positive(h), f"factor not totally positive (n={n})")
        out.check(all_minors_positive(prod) and is_totally_positive(prod), f"product {prod.tolist()}")


def word_independence(out: Outcome, rng):
    words = [w.letters for w in enumerate_reduced_words(type_A(3), reduced_word_of_longest(4))]
    out.check(len(words) == 16, f"{len(words)} reduced words")
    for src in words:
        for _ in range(20):
            p = sample_word_params(src, rng)
            image = param_F(p, 4)
            current = p
            # visit every other word in a shuffled order, one transition at a time
            for dst in rng.sample(words, len(words)):
                current = word_transition(current, dst, 4)
                ok = current.word == dst and current.is_positive and param_F(current, 4) == image
                out.check(ok, f"{src} -> {dst} from {p.values}")
            out.check(is_unipotent_positive(image), f"image of {src} not in U>0")


def line_flag(t) -> Flag:
    return Flag(RatMatrix.from_columns([(t, 1), (1, 0)]))


def flag_triples(out: Outcome, rng):
    for i in range(100):
        t = F(rng.randint(1, 30), rng.randint(1, 9)) * (1 if i % 2 == 0 else -1)
        out.check(is_positive_triple_standard(line_flag(t)) == (t > 0), f"n=2, t={t}")
    E = standard_flags(3).E
    word = reduced_word_of_longest(3).letters
    for _ in range(50):
        p = sample_word_params(word, rng)
        flipped = PositiveParams(p.word, tuple(-v for v in p.values))
        out.check(is_positive_triple_standard(param_F(p, 3) @ E), f"forward {p.values}")
        out.check(not is_positive_triple_standard(param_F(flipped, 3) @ E), f"flipped {p.values}")


def maslov_equivalence(out: Outcome, rng):
    for n in (1, 2, 3):
        sp = SymplecticSpace(n)
        made = 0
        while made < 100:
            g = random_symplectic(n, rng)
            out.sp_elements.append(g)
            m = random_pos_def(n, rng) if made % 2 == 0 else random_symmetric(n, rng)
            ls = (g @ sp.L_E, g @ Lagrangian.graph(m), g @ sp.L_F)
            if not all(is_transverse_lag(a, b) for a, b in combinations(ls, 2)):
                continue
            made += 1
            pos, neg, _ = descartes_signature(list(char_poly(kashiwara_form(*ls)).coeffs))
            oracle = pos - neg
            out.check(maslov_index(*ls) == oracle, f"n={n}: index differs from the oracle")
            out.check(is_positive_lag_triple(*ls) == (oracle == n), f"n={n}, M={m.tolist()}")


def add(a, b):
    return tuple(s + t for s, t in zip(a, b))


def scale(c, a):
    return tuple(c * s for s in a)


def so3q_braid(out: Outcome, rng):
    for q in (4, 5, 6):
        cfg = QFormConfig(q)
        qJ = cfg.qJ
        for _ in range(200):
            p = sample_b2_params(cfg, (1, 2, 1, 2), rng)
            x1, v1, x2, v2 = p.slots
            w1, y1, w2, y2 = braid_transition(cfg, x1, v1, x2, v2)
            image = B2Params((2, 1, 2, 1), (w1, y1, w2, y2))
            lhs, rhs = F_word(cfg, p), F_word(cfg, image)
            out.u_elements += [(cfg, lhs.matrix), (cfg, rhs.matrix)]
            equations = (
                x1 + x2 == y1 + y2,
                add(v1, v2) == add(w1, w2),
                add(scale(x1, add(v1, v2)), scale(x2, v2)) == scale(y1, w2),
                scale(x2, v1) == add(scale(y1, w1), scale(y2, add(w1, w2))),
                add(scale(y1, w2), scale(x2, v1)) == scale(x1 + x2, add(v1, v2)),
                y1 * qJ(w2) == x1 * qJ(add(v1, v2)) + x2 * qJ(v2),
                y1 * qJ(w1) + y2 * qJ(add(w1, w2)) == x2 * qJ(v1),
            )
            ok = lhs.matrix == rhs.matrix and all(equations) and image.is_interior(cfg) and qJ(w1) > 0
            out.check(ok, f"q={q}, params={p.slots}")


def exp_identity(out: Outcome, rng):
    for q in (4, 5, 6):
        cfg = QFormConfig(q)
        for _ in range(100):
            a, w = rand_pos(rng), sample_cone_vector(cfg, rng)
            lhs = exp_principal(cfg, a, w)
            p = B2Params((2, 1, 2, 1), (scale(F(1, 3), w), F(3, 4) * a, scale(F(2, 3), w), F(1, 4) * a))
            rhs = F_word(cfg, p)
            out.u_elements += [(cfg, lhs.matrix), (cfg, rhs.matrix)]
            out.check(lhs.matrix == rhs.matrix, f"q={q}, a={a}, w={w}")


def round_trip(out: Outcome, rng):
    for i in range(200):
        cfg = QFormConfig(4 + i % 3)
        word = (1, 2, 1, 2) if i % 2 == 0 else (2, 1, 2, 1)
        p = sample_b2_params(cfg, word, rng)
        u, flipped = F_word(cfg, p), F_word(cfg, p.negated())
        out.u_elements += [(cfg, u.matrix), (cfg, flipped.matrix)]
        out.check(invert_F(cfg, u, word) == p, f"q={cfg.q}, {p}")
        out.check(invert_F(cfg, flipped, word) is None, f"flipped q={cfg.q}, {p}")
    for q in (4, 5, 6):
        cfg = QFormConfig(q)
        one = u_theta(cfg, 0, cfg.zero(), cfg.zero(), 0)
        out.u_elements.append((cfg, one.matrix))
        for word in ((1, 2, 1, 2), (2, 1, 2, 1)):
            out.check(invert_F(cfg, one, word) is None, f"identity, q={q}")


def eigenvalues(out: Outcome, rng):
    for i in range(50):
        n = 3 if i % 2 == 0 else 4
        g = sample_totally_positive(n, rng)
        roots = isolate_real_roots(char_poly(g))
        ok = len(roots) == n and all(r.multiplicity == 1 and r.lo >= 0 and r.sign == 1 for r in roots)
        out.check(ok, f"n={n}, g={g.tolist()}")


CRITERIA = {
    1: ("SL(2) factorization identity", 1.0, sl2_identity),
    2: ("SL(3) word transition", 1.0, sl3_transition_check),
    3: ("totally positive semigroup closure", 30.0, tp_closure),
    4: ("reduced-word independence in type A3", 10.0, word_independence),
    5: ("flag triple criterion", 5.0, flag_triples),
    6: ("Maslov index characterization", 10.0, maslov_equivalence),
    7: ("SO(3,q) braid identity", 30.0, so3q_braid),
    8: ("nilpotent exponential identity", 10.0, exp_identity),
    9: ("parameter recovery round trip", 10.0, round_trip),
    10: ("eigenvalue separation", 30.0, eigenvalues),
}


@cache
def run(number: int) -> Outcome:
    if number == 11:
        return group_membership()
    title, limit, body = CRITERIA[number]
    out = Outcome(number, title, limit)
    start = time.perf_counter()
    body(out, random.Random(f"acceptance-{number}"))
    out.elapsed = time.perf_counter() - start
    return out


def group_membership() -> Outcome:
    out = Outcome(11, "group membership of constructed elements", None)
    sources = [run(k) for k in (6, 7, 8, 9)]
    start = time.perf_counter()
    for src in sources:
        for g in src.sp_elements:
            out.check(is_symplectic(g), f"Sp element {g.tolist()}")
        for cfg, g in src.u_elements:
            out.check(cfg.is_in_group(g), f"U_Theta element, q={cfg.q}")
    out.elapsed = time.perf_counter() - start
    return out


@pytest.mark.parametrize("number", range(1, 12))
def test_criterion(number, request):
    from conftest import ACCEPTANCE

    out = run(number)
    line = out.line()
    print(line)
    request.config.stash.setdefault(ACCEPTANCE, {})[number] = line
    assert out.passed, line


if __name__ == "__main__":
    results = [run(k) for k in range(1, 12)]
    for r in results:
        print(r.line())
    sys.exit(0 if all(r.passed for r in results) else 1)
