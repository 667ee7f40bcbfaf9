"""Command-line front end.

Every subcommand reads its inputs from flags and/or one JSON object given with
``--input`` (literal JSON, ``@path`` or ``@-`` for stdin), prints a JSON report
on stdout and a one-line summary on stderr. The report's ``input`` member uses
the same field names as ``--input``, so feeding it back reproduces the run.

Exit status: 0 when the verdict is true, 1 when it is false, 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from dataclasses import dataclass, field
from typing import Any, Callable

from . import flags as fl
from . import so3q as th
from . import symplectic as sp
from . import totpos as tp
from .linalg import DimensionError, RatMatrix, det
from .selftest import run_selftest
from .serialize import (
    ParseError,
    b2params_from_json,
    b2params_to_json,
    format_scalar,
    load_json,
    matrix_from_json,
    matrix_to_json,
    params_to_json,
    parse_scalar,
    vector_from_json,
    vector_to_json,
    word_from_json,
    word_to_json,
)

SEED_ENV = "THETA_POS_SEED"

__all__ = ["Outcome", "execute", "main"]


# ----------------------------------------------------------------- field kinds


def _split_csv(text: str, name: str = "") -> list[str]:
    text = text.strip().strip("[]")
    return [s.strip() for s in text.split(",")] if text else []


def _json_arg(text: str, name: str) -> Any:
    if text.startswith("@"):
        return _read_file(text[1:], name)
    return load_json(text, name)


def _word_arg(text: str, name: str) -> Any:
    t = text.strip()
    if t.startswith("["):
        return load_json(t, name)
    if "," in t:
        try:
            return [int(s) for s in _split_csv(t)]
        except ValueError:
            return t
    return t


def _int(obj: Any, name: str) -> int:
    if isinstance(obj, str) and obj.strip().lstrip("-").isdigit():
        obj = int(obj)
    if not isinstance(obj, int) or isinstance(obj, bool):
        raise ParseError(name, "expected an integer")
    return obj


def _flag(obj: Any, name: str) -> fl.Flag:
    m = matrix_from_json(obj, name)
    try:
        return fl.Flag(m)
    except (ValueError, DimensionError) as exc:
        raise ParseError(name, str(exc)) from None


def _lagrangian(obj: Any, name: str) -> sp.Lagrangian:
    m = matrix_from_json(obj, name)
    try:
        return sp.Lagrangian(m)
    except (ValueError, DimensionError) as exc:
        raise ParseError(name, str(exc)) from None


def _str(obj: Any, name: str) -> str:
    if not isinstance(obj, str):
        raise ParseError(name, "expected a string")
    return obj


def _bool(obj: Any, name: str) -> bool:
    if not isinstance(obj, bool):
        raise ParseError(name, "expected true or false")
    return obj


@dataclass(frozen=True)
class Kind:
    from_cli: Callable[[str, str], Any] | None  # (flag text, field) -> JSON value; None keeps the text
    parse: Callable[[Any, str], Any]  # JSON value -> object
    dump: Callable[[Any], Any]  # object -> JSON value


KINDS = {
    "matrix": Kind(_json_arg, matrix_from_json, matrix_to_json),
    "flag": Kind(_json_arg, _flag, lambda f: matrix_to_json(f.basis)),
    "lagrangian": Kind(_json_arg, _lagrangian, lambda l: matrix_to_json(l.basis)),
    "word": Kind(_word_arg, word_from_json, word_to_json),
    "scalars": Kind(_split_csv, vector_from_json, vector_to_json),
    "scalar": Kind(None, parse_scalar, format_scalar),
    "int": Kind(None, _int, int),
    "str": Kind(None, _str, str),
    "bool": Kind(lambda t, n: True, _bool, bool),
    "b2params": Kind(_json_arg, b2params_from_json, b2params_to_json),
}


@dataclass(frozen=True)
class Field:
    name: str
    kind: str
    help: str
    required: bool = True
    default: Any = None
    choices: tuple[str, ...] | None = None


@dataclass
class Outcome:
    verdict: bool
    result: dict
    summary: str
    counterexample: dict | None = None


@dataclass(frozen=True)
class Command:
    name: str
    help: str
    fields: tuple[Field, ...]
    handler: Callable[[dict], Outcome]
    seeded: bool = False


# ------------------------------------------------------------------- helpers


def _minor_json(fail) -> dict:
    rows, cols, value = fail
    return {"rows": [r + 1 for r in rows], "cols": [c + 1 for c in cols], "minor": format_scalar(value)}


def _default_n(n, *words) -> int:
    if n is not None:
        return n
    letters = [a for w in words for a in w]
    if not letters:
        raise ParseError("n", "required when the word is empty")
    return max(letters) + 1


# ------------------------------------------------------------------ handlers


def cmd_check_tp(args: dict) -> Outcome:
    m, mode = args["matrix"], args["mode"]
    if mode == "full":
        fail = tp.first_failing_minor(m)
        label = "totally positive"
        tested = m
    else:
        u = tp.UnipotentUpper(m)
        tested = u
        if args["mirrored"]:
            d = RatMatrix.diag([(-1) ** i for i in range(u.rows)])
            tested = d @ u @ d
        fail = tp.first_failing_unipotent_minor(tested)
        label = "in the mirrored cone" if args["mirrored"] else "in U^{>0}"
    ok = fail is None
    cx = None if ok else dict(_minor_json(fail), matrix_tested=matrix_to_json(tested))
    return Outcome(ok, {"positive": ok}, f"matrix is {'' if ok else 'not '}{label}", cx)


def cmd_factor(args: dict) -> Outcome:
    g = args["matrix"]
    try:
        f = tp.whitney_factor(g)
    except tp.DecompositionError:
        k = next(k for k in range(1, g.rows + 1) if det(g.submatrix(range(k), range(k))) == 0)
        cx = {"leading_minor_size": k, "value": "0"}
        return Outcome(False, {"factorized": False}, f"leading principal minor of size {k} vanishes", cx)
    result = {
        "factorized": True,
        "lower": matrix_to_json(f.lower),
        "diag": matrix_to_json(f.diag),
        "upper": matrix_to_json(f.upper),
        "reproduces_input": f.product() == g,
    }
    if g.rows <= tp.MAX_MINOR_SIZE:
        result["totally_positive"] = tp.is_totally_positive(g)
    return Outcome(result["reproduces_input"], result, "g = lower * diag * upper")


def cmd_param(args: dict) -> Outcome:
    word, values = args["word"], args["values"]
    if len(word) != len(values):
        raise ParseError("values", f"expected {len(word)} values for word {list(word)}")
    n = _default_n(args["n"], word)
    u = tp.param_F(tp.PositiveParams(word, values), n, mirrored=args["mirrored"])
    result = {"n": n, "matrix": matrix_to_json(u)}
    if n <= tp.MAX_MINOR_SIZE:
        result["in_positive_semigroup"] = tp.is_unipotent_positive(u, mirrored=args["mirrored"])
    return Outcome(True, result, f"evaluated F_{''.join(map(str, word))} in dimension {n}")


def cmd_transition(args: dict) -> Outcome:
    src, dst, values = args["from"], args["to"], args["values"]
    if len(src) != len(values):
        raise ParseError("values", f"expected {len(src)} values for word {list(src)}")
    n = _default_n(args["n"], src, dst)
    p = tp.PositiveParams(src, values)
    out = tp.word_transition(p, dst, n)
    before, after = tp.param_F(p, n), tp.param_F(out, n)
    same = before == after
    positive_kept = out.is_positive or not p.is_positive
    result = {"params": params_to_json(out), "images_equal": same, "all_positive": out.is_positive}
    cx = None
    if not (same and positive_kept):
        cx = {"source_image": matrix_to_json(before), "target_image": matrix_to_json(after)}
    summary = "values " + ", ".join(format_scalar(v) for v in out.values)
    return Outcome(same and positive_kept, result, summary, cx)


def _flag_witness(g: RatMatrix, moved: list[fl.Flag]) -> dict:
    coords = {}
    for i, t in enumerate(moved):
        try:
            coords[f"coordinate_{i + 1}"] = matrix_to_json(fl.unipotent_coordinate(g @ t))
        except fl.TransversalityError:
            coords[f"coordinate_{i + 1}"] = None
    return dict({"normalizer": matrix_to_json(g)}, **coords)


def cmd_triple(args: dict) -> Outcome:
    f1, t, f3 = args["f1"], args["t"], args["f3"]
    ok = fl.is_positive_triple(f1, t, f3, args["orientation"])
    cx = None if ok else _flag_witness(fl.normalize_pair(f1, f3), [t])
    return Outcome(ok, {"positive": ok}, f"triple is {'' if ok else 'not '}positive", cx)


def cmd_quadruple(args: dict) -> Outcome:
    f1, s, s2, f4 = args["f1"], args["s"], args["s2"], args["f4"]
    ok = fl.is_positive_quadruple(f1, s, s2, f4, args["orientation"])
    cx = None if ok else _flag_witness(fl.normalize_pair(f1, f4), [s, s2])
    return Outcome(ok, {"positive": ok}, f"quadruple is {'' if ok else 'not '}positive", cx)


def cmd_maslov(args: dict) -> Outcome:
    ls = args["l1"], args["l2"], args["l3"]
    n = ls[0].n
    if any(l.n != n for l in ls):
        raise ParseError("l2", "Lagrangians live in different dimensions")
    pos, neg, zero = sp.signature(sp.kashiwara_form(*ls))
    index = pos - neg
    result = {"n": n, "index": index, "signature": [pos, neg, zero], "maximal": index == n}
    return Outcome(True, result, f"Maslov index {index} (n = {n})")


def cmd_lag_triple(args: dict) -> Outcome:
    l1, l2, l3 = args["l1"], args["l2"], args["l3"]
    ok = sp.is_positive_lag_triple(l1, l2, l3)
    result = {"positive": ok, "maslov_index": sp.maslov_index(l1, l2, l3)}
    cx = None
    if not ok:
        g = sp.normalizing_element(l1, l3)
        try:
            m = sp.lag_coordinate(g @ l2)
        except fl.TransversalityError:
            cx = {"normalizer": matrix_to_json(g), "coordinate": None}
        else:
            k, value = next(
                (k, d)
                for k in range(1, m.rows + 1)
                if (d := det(m.submatrix(range(k), range(k)))) <= 0
            )
            cx = {
                "normalizer": matrix_to_json(g),
                "coordinate": matrix_to_json(m),
                "leading_minor_size": k,
                "value": format_scalar(value),
            }
    return Outcome(ok, result, f"Lagrangian triple is {'' if ok else 'not '}positive", cx)


def _cfg(args: dict) -> th.QFormConfig:
    try:
        return th.QFormConfig(args["q"])
    except ValueError as exc:
        raise ParseError("q", str(exc)) from None


def _vector(cfg, args, name):
    v = args[name]
    if len(v) != cfg.vdim:
        raise ParseError(name, f"expected {cfg.vdim} entries for q = {cfg.q}")
    return v


def cmd_so3q_braid(args: dict) -> Outcome:
    cfg = _cfg(args)
    x1, x2 = args["x1"], args["x2"]
    v1, v2 = _vector(cfg, args, "v1"), _vector(cfg, args, "v2")
    w1, y1, w2, y2 = th.braid_transition(cfg, x1, v1, x2, v2)
    src = th.B2Params((1, 2, 1, 2), (x1, v1, x2, v2))
    dst = th.B2Params((2, 1, 2, 1), (w1, y1, w2, y2))
    lhs, rhs = th.F_word(cfg, src), th.F_word(cfg, dst)
    q = cfg.qJ
    add = lambda a, b: tuple(s + t for s, t in zip(a, b))  # noqa: E731
    mul = lambda c, a: tuple(c * s for s in a)  # noqa: E731
    equations = {
        "x1+x2=y1+y2": x1 + x2 == y1 + y2,
        "v1+v2=w1+w2": add(v1, v2) == add(w1, w2),
        "x1(v1+v2)+x2v2=y1w2": add(mul(x1, add(v1, v2)), mul(x2, v2)) == mul(y1, w2),
        "y1qJ(w2)=x1qJ(v1+v2)+x2qJ(v2)": y1 * q(w2) == x1 * q(add(v1, v2)) + x2 * q(v2),
    }
    interior_in = src.is_interior(cfg)
    interior_out = dst.is_interior(cfg)
    ok = lhs.matrix == rhs.matrix and all(equations.values()) and (interior_out or not interior_in)
    result = {
        "params": b2params_to_json(dst),
        "matrices_equal": lhs.matrix == rhs.matrix,
        "equations": equations,
        "interior": interior_out,
        "qJ_w1": format_scalar(q(w1)),
    }
    cx = None if ok else {"lhs": matrix_to_json(lhs.matrix), "rhs": matrix_to_json(rhs.matrix)}
    return Outcome(ok, result, "F_1212 = F_2121 at the transformed parameters" if ok else "braid identity failed", cx)


def _inversion_outcome(cfg, u: th.UThetaElement, word, label: str) -> Outcome:
    inv = th.solve_params(cfg, u, word)
    ok = inv.params is not None
    result = {"positive": ok, "params": b2params_to_json(inv.params) if ok else None}
    cx = None
    if not ok:
        cx = {
            "reason": inv.reason,
            "solved": b2params_to_json(inv.candidate) if inv.candidate is not None else None,
            "matrix": matrix_to_json(u.matrix),
        }
    return Outcome(ok, result, f"{label} {'is' if ok else 'is not'} in the positive semigroup", cx)


def cmd_so3q_invert(args: dict) -> Outcome:
    cfg = _cfg(args)
    word = args["word"]
    if word not in ((1, 2, 1, 2), (2, 1, 2, 1)):
        raise ParseError("word", "must be [1,2,1,2] or [2,1,2,1]")
    if (args["matrix"] is None) == (args["params"] is None):
        raise ParseError("matrix", "give exactly one of matrix or params")
    if args["matrix"] is not None:
        try:
            u = th.u_theta_from_matrix(cfg, args["matrix"])
        except (ValueError, DimensionError) as exc:
            raise ParseError("matrix", str(exc)) from None
    else:
        p = args["params"]
        for i, (letter, s) in enumerate(zip(p.word, p.slots)):
            if letter == 2 and len(s) != cfg.vdim:
                raise ParseError(f"params.slots[{i}].vector", f"expected {cfg.vdim} entries for q = {cfg.q}")
        u = th.F_word(cfg, p)
    return _inversion_outcome(cfg, u, word, "u")


def cmd_so3q_exp(args: dict) -> Outcome:
    cfg = _cfg(args)
    a, w = args["a"], _vector(cfg, args, "w")
    u = th.exp_principal(cfg, a, w)
    out = _inversion_outcome(cfg, u, (2, 1, 2, 1), "exp(a + w)")
    out.result["matrix"] = matrix_to_json(u.matrix)
    return out


def cmd_so3q_triple(args: dict) -> Outcome:
    cfg = _cfg(args)
    try:
        s = th.isotropic_flag(cfg, args["flag"])
    except (ValueError, DimensionError) as exc:
        raise ParseError("flag", str(exc)) from None
    u = th.unipotent_coordinate_12(cfg, s)
    out = _inversion_outcome(cfg, u, (1, 2, 1, 2), "the chart coordinate")
    out.result["coordinate"] = matrix_to_json(u.matrix)
    return out


def _sample_one(kind: str, n: int, q: int, rng) -> tuple[dict, bool]:
    if kind == "tp":
        g = tp.sample_totally_positive(n, rng)
        return {"matrix": matrix_to_json(g)}, tp.is_totally_positive(g)
    if kind == "unipotent":
        p = tp.sample_word_params(tp.reduced_word_of_longest(n).letters, rng)
        u = tp.param_F(p, n)
        return {"params": params_to_json(p), "matrix": matrix_to_json(u)}, tp.is_unipotent_positive(u)
    if kind == "flag-triple":
        std = fl.standard_flags(n)
        g = tp.sample_totally_positive(n, rng)
        t = tp.param_F(tp.sample_word_params(tp.reduced_word_of_longest(n).letters, rng), n) @ std.E
        flags = [g @ std.E, g @ t, g @ std.F]
        ok = fl.is_positive_triple(*flags)
        return {name: matrix_to_json(f.basis) for name, f in zip(("f1", "t", "f3"), flags)}, ok
    if kind == "lagrangian-triple":
        space = sp.SymplecticSpace(n)
        g = sp.random_symplectic(n, rng)
        ls = [g @ space.L_E, g @ sp.Lagrangian.graph(sp.random_pos_def(n, rng)), g @ space.L_F]
        ok = sp.is_symplectic(g) and sp.is_positive_lag_triple(*ls)
        return {name: matrix_to_json(l.basis) for name, l in zip(("l1", "l2", "l3"), ls)}, ok
    cfg = th.QFormConfig(q)
    p = th.sample_b2_params(cfg, (1, 2, 1, 2), rng)
    u = th.F_word(cfg, p)
    ok = cfg.is_in_group(u.matrix) and th.invert_F(cfg, u, (1, 2, 1, 2)) == p
    return {"params": b2params_to_json(p), "matrix": matrix_to_json(u.matrix)}, ok


def cmd_sample(args: dict) -> Outcome:
    kind, n, count = args["kind"], args["n"], args["count"]
    if kind in ("tp", "unipotent", "flag-triple") and not 2 <= n <= tp.MAX_MINOR_SIZE:
        raise ParseError("n", f"must lie in 2..{tp.MAX_MINOR_SIZE}")
    if kind == "lagrangian-triple" and not 1 <= n <= 6:
        raise ParseError("n", "must lie in 1..6")
    if kind == "b2":
        _cfg(args)
    if count < 1:
        raise ParseError("count", "must be positive")
    rng = random.Random(args["seed"])
    samples, bad = [], None
    for i in range(count):
        sample, ok = _sample_one(kind, n, args["q"], rng)
        samples.append(sample)
        if not ok and bad is None:
            bad = {"index": i, "sample": sample}
    ok = bad is None
    return Outcome(ok, {"samples": samples}, f"{count} {kind} sample(s), all verified" if ok else "a sample failed verification", bad)


def cmd_selftest(args: dict) -> Outcome:
    if args["trials"] < 1:
        raise ParseError("trials", "must be positive")
    results = run_selftest(args["seed"], args["trials"])
    ok = all(r.failed == 0 for r in results)
    suites = [r.to_json() for r in results]
    total = sum(r.passed for r in results)
    cx = None if ok else {"failing_suites": [s for s in suites if s["failed"]]}
    return Outcome(ok, {"suites": suites}, f"{len(results)} suites, {total} checks passed" if ok else "selftest failed", cx)


# ------------------------------------------------------------------ registry

_MATRIX = "matrix as JSON ({rows, cols, entries} or an array of rows), or @file"
_ORIENT = Field("orientation", "str", "gl: extend along GL(n); sl: only determinant-preserving normalizations", False, "gl", ("gl", "sl"))
_Q = Field("q", "int", "the q of SO(3,q), 4..16", False, 4)
_SEED = Field("seed", "int", f"PRNG seed (Python random.Random); falls back to ${SEED_ENV}, then 0", False)

COMMANDS: dict[str, Command] = {
    c.name: c
    for c in [
        Command(
            "check-tp",
            "total positivity of a matrix (or U^{>0} membership)",
            (
                Field("matrix", "matrix", _MATRIX),
                Field("mode", "str", "full: every minor; unipotent: the non-forced minors", False, "full", ("full", "unipotent")),
                Field("mirrored", "bool", "test the opposite cone (unipotent mode)", False, False),
            ),
            cmd_check_tp,
        ),
        Command("factor", "lower * diag * upper factorization", (Field("matrix", "matrix", _MATRIX),), cmd_factor),
        Command(
            "param",
            "evaluate the word map u_i1(t1) ... u_ik(tk)",
            (
                Field("word", "word", "generator indices, e.g. 121 or 1,2,1"),
                Field("values", "scalars", "comma-separated parameters"),
                Field("n", "int", "matrix size (default: largest letter + 1)", False),
                Field("mirrored", "bool", "negate every parameter", False, False),
            ),
            cmd_param,
        ),
        Command(
            "transition",
            "re-express word parameters on another reduced word",
            (
                Field("from", "word", "source word"),
                Field("to", "word", "target word"),
                Field("values", "scalars", "comma-separated parameters on the source word"),
                Field("n", "int", "matrix size (default: largest letter + 1)", False),
            ),
            cmd_transition,
        ),
        Command(
            "triple",
            "positivity of a triple of full flags",
            (Field("f1", "flag", _MATRIX), Field("t", "flag", _MATRIX), Field("f3", "flag", _MATRIX), _ORIENT),
            cmd_triple,
        ),
        Command(
            "quadruple",
            "positivity of a quadruple of full flags",
            (
                Field("f1", "flag", _MATRIX),
                Field("s", "flag", _MATRIX),
                Field("s2", "flag", _MATRIX),
                Field("f4", "flag", _MATRIX),
                _ORIENT,
            ),
            cmd_quadruple,
        ),
        Command(
            "maslov",
            "Maslov index of three Lagrangians",
            (Field("l1", "lagrangian", _MATRIX), Field("l2", "lagrangian", _MATRIX), Field("l3", "lagrangian", _MATRIX)),
            cmd_maslov,
        ),
        Command(
            "lag-triple",
            "positivity of a triple of Lagrangians",
            (Field("l1", "lagrangian", _MATRIX), Field("l2", "lagrangian", _MATRIX), Field("l3", "lagrangian", _MATRIX)),
            cmd_lag_triple,
        ),
        Command(
            "so3q braid",
            "coordinates on 2121 of F_1212(x1, v1, x2, v2)",
            (
                _Q,
                Field("x1", "scalar", "scalar x1 >= 0"),
                Field("v1", "scalars", "vector v1 in the closed cone"),
                Field("x2", "scalar", "scalar x2 > 0"),
                Field("v2", "scalars", "vector v2 in the open cone"),
            ),
            cmd_so3q_braid,
        ),
        Command(
            "so3q invert",
            "recover interior parameters of an element of U_Theta",
            (
                _Q,
                Field("word", "word", "1212 or 2121", False, (1, 2, 1, 2)),
                Field("matrix", "matrix", _MATRIX, False),
                Field("params", "b2params", "build u as F_word(params) instead of passing a matrix", False),
            ),
            cmd_so3q_invert,
        ),
        Command(
            "so3q exp",
            "exp(a + w) and its parameters on 2121",
            (_Q, Field("a", "scalar", "scalar part"), Field("w", "scalars", "vector part")),
            cmd_so3q_exp,
        ),
        Command(
            "so3q triple",
            "positivity of (E, S, F) for an isotropic flag S",
            (_Q, Field("flag", "matrix", "(q+3) x 2 basis; first column spans V1")),
            cmd_so3q_triple,
        ),
        Command(
            "sample",
            "random positive elements, verified",
            (
                Field("kind", "str", "what to sample", False, "tp", ("tp", "unipotent", "flag-triple", "lagrangian-triple", "b2")),
                Field("n", "int", "matrix size", False, 3),
                _Q,
                Field("count", "int", "number of samples", False, 1),
                _SEED,
            ),
            cmd_sample,
            seeded=True,
        ),
        Command(
            "selftest",
            "run every invariant suite",
            (Field("trials", "int", "random trials per suite", False, 20), _SEED),
            cmd_selftest,
            seeded=True,
        ),
    ]
}


# ---------------------------------------------------------------- front end


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError("arguments", message)


def _add_fields(p: argparse.ArgumentParser, cmd: Command) -> None:
    p.add_argument("--input", help="JSON object with any of the fields below (literal, @file or @-)")
    p.add_argument("--timing", action="store_true", help="add elapsed time to the report (breaks byte-identity)")
    for f in cmd.fields:
        opt = "--" + f.name.replace("_", "-")
        dest = "field_" + f.name
        if f.kind == "bool":
            p.add_argument(opt, dest=dest, action="store_const", const="true", help=f.help)
        else:
            p.add_argument(opt, dest=dest, choices=f.choices, help=f.help)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="thetapos", description="Exact positivity checks in GL(n), Sp(2n) and SO(3,q).")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    so3q = None
    for cmd in COMMANDS.values():
        if cmd.name.startswith("so3q "):
            if so3q is None:
                so3q = sub.add_parser("so3q", help="Theta-positivity in SO(3,q)").add_subparsers(
                    dest="sub", required=True, parser_class=_Parser
                )
            p = so3q.add_parser(cmd.name.split()[1], help=cmd.help)
        else:
            p = sub.add_parser(cmd.name, help=cmd.help)
        _add_fields(p, cmd)
    return parser


def _read_file(path: str, name: str) -> Any:
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise ParseError(name, f"cannot read {path}: {exc.strerror}") from None
    return load_json(text, name)


def _read_input(text: str) -> dict:
    obj = _read_file(text[1:], "input") if text.startswith("@") else load_json(text, "input")
    if not isinstance(obj, dict):
        raise ParseError("input", "expected a JSON object")
    return obj


def _resolve(cmd: Command, ns: argparse.Namespace, env) -> tuple[dict, dict]:
    raw = _read_input(ns.input) if ns.input else {}
    known = {f.name for f in cmd.fields}
    for key in raw:
        if key not in known:
            raise ParseError(key, f"unknown field for {cmd.name}")
    for f in cmd.fields:
        text = getattr(ns, "field_" + f.name)
        if text is not None:
            if f.kind == "bool":
                raw[f.name] = True
            else:
                raw[f.name] = text if f.kind in ("str", "scalar", "int") else KINDS[f.kind].from_cli(text, f.name)
    if cmd.seeded and "seed" not in raw:
        raw["seed"] = env.get(SEED_ENV, "0")
    parsed, echo = {}, {}
    for f in cmd.fields:
        if f.name not in raw:
            if f.required:
                raise ParseError(f.name, "missing")
            parsed[f.name] = f.default
            continue
        kind = KINDS[f.kind]
        value = kind.parse(raw[f.name], f.name)
        if f.choices and value not in f.choices:
            raise ParseError(f.name, f"must be one of {', '.join(f.choices)}")
        parsed[f.name] = value
        echo[f.name] = kind.dump(value)
    return parsed, echo


@dataclass
class Result:
    code: int
    report: dict
    summary: str = ""
    timing: float | None = field(default=None, repr=False)

    def stdout(self) -> str:
        return json.dumps(self.report, indent=2) + "\n"


def execute(argv: list[str], env=None) -> Result:
    env = os.environ if env is None else env
    name, echo = None, None
    try:
        ns = build_parser().parse_args(argv)
        name = ns.command if ns.command != "so3q" else f"so3q {ns.sub}"
        cmd = COMMANDS[name]
        parsed, echo = _resolve(cmd, ns, env)
        start = time.perf_counter()
        out = cmd.handler(parsed)
        elapsed = time.perf_counter() - start
    except ParseError as exc:
        return _error(name, echo, "parse", exc.field, exc.message)
    except fl.TransversalityError as exc:
        return _error(name, echo, "transversality", None, str(exc))
    except (ValueError, IndexError, ZeroDivisionError, DimensionError) as exc:
        return _error(name, echo, "domain", None, str(exc))
    report: dict = {"command": name, "input": echo, "verdict": out.verdict, "result": out.result}
    if out.counterexample is not None:
        report["counterexample"] = out.counterexample
    if ns.timing:
        report["timing_seconds"] = round(elapsed, 6)
    return Result(0 if out.verdict else 1, report, out.summary)


def _error(name, echo, kind, where, message) -> Result:
    err = {"kind": kind, "message": message}
    if where is not None:
        err["field"] = where
    report = {"command": name, "input": echo, "error": err}
    prefix = f"{where}: " if where else ""
    return Result(2, report, f"error: {prefix}{message}")


def main(argv: list[str] | None = None) -> int:
    res = execute(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(res.stdout())
    sys.stderr.write(res.summary + "\n")
    return res.code


if __name__ == "__main__":
    sys.exit(main())
