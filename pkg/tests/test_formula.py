import itertools
import random

import pytest

from scottgroups import dihedral as D
from scottgroups import fgab
from scottgroups import formula as F
from scottgroups import rank1 as R


def classify_pair(f):
    c = F.classify(f)
    return (c.kind, c.level)


class TestClassify:
    def test_atomic_is_quantifier_free(self):
        assert classify_pair(F.Atomic(F.lin({"x": 1}), F.ZERO)) == ("QuantifierFree", 0)

    def test_torsion_free_sentence_is_pi1(self):
        # forall over (atom or infinite conjunction of atoms) stays one block
        assert classify_pair(fgab.torsion_free_sentence()) == ("Pi", 1)

    def test_generating_tuple_sentence_is_sigma3(self):
        s = fgab.scott_sentence_sigma3_fg(fgab.FgAbelianDesc(2, ()))
        assert classify_pair(s) == ("Sigma", 3)

    def test_quantifier_wrap_raises_level(self):
        qf = F.Atomic(F.lin({"x": 1}), F.ZERO)
        fam = F.family("and", "multiple-neq", {"var": "x"})
        assert classify_pair(F.Exists(("x",), fam)) == ("Sigma", 2)
        assert classify_pair(F.Forall(("x",), F.Exists(("y",), qf))) == ("Pi", 2)

    def test_d_sigma_split(self):
        sigma1 = F.Exists(("x",), F.NegAtomic(F.lin({"x": 1}), F.ZERO))
        pi1 = F.Forall(("x",), F.Atomic(F.lin({"x": 1}), F.lin({"x": 1})))
        assert classify_pair(F.conj(sigma1, pi1)) == ("DSigma", 1)

    def test_d_sigma_not_reported_when_one_sided(self):
        pi1 = F.Forall(("x",), F.Atomic(F.lin({"x": 1}), F.lin({"x": 1})))
        assert classify_pair(F.conj(pi1, pi1)) == ("Pi", 1)

    def test_named_sentence_classes(self):
        assert classify_pair(fgab.scott_sentence_zn(2)) == ("DSigma", 2)
        assert classify_pair(D.scott_sentence_dinf()) == ("DSigma", 2)
        assert classify_pair(R.scott_sentence_rationals()) == ("Pi", 2)

    def test_empty_family_is_degenerate(self):
        empty = F.family("and", "rank1-pinf-divisible",
                         {"char": R.char_to_json(R.Z_CHAR), "target": "y"})
        assert empty.note.size == 0
        assert classify_pair(F.Forall(("y",), empty)) == ("Pi", 1)


def brute_eval(f, s, env):
    """Independent truth evaluator: plain recursion, no shortcuts."""
    if isinstance(f, F.Atomic):
        return F.eval_term(f.lhs, s, env) == F.eval_term(f.rhs, s, env)
    if isinstance(f, F.NegAtomic):
        return F.eval_term(f.lhs, s, env) != F.eval_term(f.rhs, s, env)
    if isinstance(f, F.FiniteAnd):
        return all(brute_eval(c, s, env) for c in f.items)
    if isinstance(f, F.FiniteOr):
        return any(brute_eval(c, s, env) for c in f.items)
    if isinstance(f, F.Exists):
        return any(brute_eval(f.body, s, {**env, **dict(zip(f.vars, combo))})
                   for combo in itertools.product(range(s.size), repeat=len(f.vars)))
    if isinstance(f, F.Forall):
        return all(brute_eval(f.body, s, {**env, **dict(zip(f.vars, combo))})
                   for combo in itertools.product(range(s.size), repeat=len(f.vars)))
    raise TypeError(f)


def random_formula(rng, depth, free_vars):
    roll = rng.random()
    if depth == 0 or roll < 0.3:
        scope = free_vars or ["x"]
        term = F.lin({rng.choice(scope): rng.choice([1, 1, 2, -1]),
                      rng.choice(scope): rng.choice([0, 1, -2])})
        cls = F.Atomic if rng.random() < 0.5 else F.NegAtomic
        return cls(term, F.ZERO)
    if roll < 0.5:
        return F.FiniteAnd(tuple(random_formula(rng, depth - 1, free_vars)
                                 for _ in range(rng.randint(1, 3))))
    if roll < 0.7:
        return F.FiniteOr(tuple(random_formula(rng, depth - 1, free_vars)
                                for _ in range(rng.randint(1, 3))))
    var = f"v{rng.randint(0, 20)}"
    body = random_formula(rng, depth - 1, free_vars + [var])
    return (F.Exists if rng.random() < 0.5 else F.Forall)((var,), body)


class TestEvaluate:
    def test_finite_scott_sentence_examples(self):
        z2 = fgab.cyclic_table(2)
        z3 = fgab.cyclic_table(3)
        s = fgab.scott_sentence_finite(z2)
        assert F.evaluate_exact(s, z2, 4) == (True, True)
        assert F.evaluate_exact(s, z3, 4) == (False, True)

    def test_family_witness_decides(self):
        z5 = fgab.cyclic_table(5)
        assert F.evaluate_exact(fgab.torsion_free_sentence(), z5, 6) == (False, True)

    def test_truncated_family_is_inexact(self):
        fam = F.family("and", "multiple-neq", {"var": "x"})
        trivial = fgab.cyclic_table(1)
        truth, exact = F.evaluate_exact(F.Forall(("x",), F.disj(
            F.Atomic(F.lin({"x": 1}), F.ZERO), fam)), trivial, 3)
        assert (truth, exact) == (True, True)  # the zero disjunct decides
        # on Z/5 the first three multiples of 1 are nonzero: all-true truncation
        z5 = fgab.cyclic_table(5)
        truth, exact = F.evaluate_exact(F.Exists(("x",), fam), z5, 3)
        assert (truth, exact) == (True, False)
        # a deeper bound reaches the refuting member everywhere
        truth, exact = F.evaluate_exact(F.Exists(("x",), fam), z5, 5)
        assert (truth, exact) == (False, True)

    def test_monotone_once_decided(self):
        z5 = fgab.cyclic_table(5)
        s = fgab.torsion_free_sentence()
        decided = F.evaluate_exact(s, z5, 6)
        for bound in range(6, 16):
            assert F.evaluate_exact(s, z5, bound) == decided

    def test_agrees_with_brute_force(self):
        rng = random.Random(2026)
        tables = [fgab.cyclic_table(n) for n in (1, 2, 3, 4, 5, 6)]
        tables.append(fgab.table_from_invariant_factors((2, 2)))
        for _ in range(500):
            f = random_formula(rng, rng.randint(1, 3), [])
            s = rng.choice(tables)
            free = _free_vars(f)
            env = {v: rng.randrange(s.size) for v in free}
            want = brute_eval(f, s, env)
            got, exact = F._ev(f, s, dict(env), 8)
            assert exact is True
            assert got == want

    def test_bad_bound_rejected(self):
        with pytest.raises(ValueError):
            F.evaluate_exact(F.Atomic(F.ZERO, F.ZERO), fgab.cyclic_table(2), 0)


def _free_vars(f, bound=frozenset()):
    if isinstance(f, (F.Atomic, F.NegAtomic)):
        return (F.term_variables(f.lhs) | F.term_variables(f.rhs)) - bound
    if isinstance(f, (F.FiniteAnd, F.FiniteOr)):
        out = set()
        for c in f.items:
            out |= _free_vars(c, bound)
        return out
    if isinstance(f, (F.Exists, F.Forall)):
        return _free_vars(f.body, bound | set(f.vars))
    raise TypeError(f)


class TestRender:
    def test_atomic_text(self):
        assert F.render(F.Atomic(F.lin({"x": 1}), F.ZERO)) == "x = 0"

    def test_family_shows_note_and_ellipsis(self):
        out = F.render(fgab.torsion_free_sentence(), "text", 2)
        assert "multiple-neq" in out and "…" in out

    def test_zn_sentence_shows_both_family_markers(self):
        out = F.render(fgab.scott_sentence_zn(1), "text", 2)
        assert "⋀" in out and "⋁" in out

    def test_latex_delimiters_balanced(self):
        for sentence in (fgab.scott_sentence_zn(1), D.scott_sentence_dinf(),
                         R.scott_sentence_rationals()):
            out = F.render(sentence, "latex", 2)
            assert out.startswith(r"\[") and out.endswith(r"\]")
            assert out.count("(") == out.count(")")
            assert out.count("{") == out.count("}")

    def test_deterministic(self):
        s = fgab.scott_sentence_zn(2)
        assert F.render(s, "text", 3) == F.render(s, "text", 3)


class TestJson:
    def test_round_trip_plain(self):
        s = fgab.scott_sentence_finite(fgab.cyclic_table(3))
        assert F.from_json_dict(F.to_json_dict(s)) == s

    def test_round_trip_with_families(self):
        for sentence in (fgab.scott_sentence_zn(2),
                         D.scott_sentence_dinf(),
                         R.scott_sentence_dsigma2(R.char({2: R.INF})),
                         R.scott_sentence_sigma3(R.Z_CHAR)):
            again = F.loads(F.dumps(sentence))
            assert again == sentence
            assert classify_pair(again) == classify_pair(sentence)

    def test_unknown_enum_rejected(self):
        with pytest.raises(KeyError):
            F.from_json_dict({"t": "fam-and", "enum": "no-such-family", "params": {}})


class TestStructure:
    def test_rejects_non_associative(self):
        with pytest.raises(ValueError):
            F.FiniteStructure.from_table([[0, 1], [1, 1]])

    def test_rejects_missing_identity(self):
        with pytest.raises(ValueError):
            F.FiniteStructure.from_table([[0, 0], [0, 0]])

    def test_power_matches_repeated_addition(self):
        t = fgab.cyclic_table(7)
        for x in range(7):
            acc = t.identity
            for k in range(1, 15):
                acc = t.apply(acc, x)
                assert t.power(x, k) == acc
            assert t.power(x, -3) == t.inv[t.power(x, 3)]
