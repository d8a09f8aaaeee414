import itertools
import random
from fractions import Fraction

import pytest

from scottgroups import limitsim as L
from scottgroups import rank1 as R

T = L.ConstructionTrace.from_bits


def all_traces(length):
    for bits in itertools.product([0, 1], repeat=2 * length):
        yield T([[bits[2 * i], bits[2 * i + 1]] for i in range(length)])


class TestTrace:
    def test_nonempty(self):
        with pytest.raises(ValueError):
            L.ConstructionTrace(())

    def test_json_round_trip(self):
        tr = T([[0, 0], [1, 0], [1, 1]])
        assert L.trace_from_json(tr.to_json()) == tr


class TestAbelian:
    def test_settled_outside_s1(self):
        reports, tag, ver = L.run_abelian(2, T([[0, 0]] * 5), growth=1)
        assert tag == "Z1" and ver.ok

    def test_settled_in_s1_minus_s2(self):
        _, tag, ver = L.run_abelian(2, T([[0, 0], [1, 0], [1, 0]]), growth=1)
        assert tag == "Z2" and ver.ok

    def test_collapse_preserves_inequations(self):
        reports, tag, ver = L.run_abelian(2, T([[0, 0], [1, 0], [0, 0]]), growth=1)
        assert tag == "Z1" and ver.ok
        names = [c[0] for c in ver.checks]
        assert "stage-soundness" in names and all(ok for _, ok, _ in ver.checks)

    def test_fallback_extends_previous_map(self):
        reports, _, _ = L.run_abelian(2, T([[0, 0], [1, 0], [0, 0]]), growth=1)
        assert reports[2].resumed_from == 0
        earlier = reports[0].partial_map
        later = reports[2].partial_map
        assert all(later[c] == v for c, v in earlier.items())

    def test_rejects_small_k(self):
        with pytest.raises(ValueError):
            L.run_abelian(1, T([[0, 0]]))

    def test_double_jump(self):
        _, tag, ver = L.run_abelian(3, T([[0, 0], [1, 1], [0, 0], [1, 1]]), growth=1)
        assert tag == "Z4" and ver.ok

    def test_exhaustive_short_traces(self):
        for trace in all_traces(3):
            for k in (2, 3):
                _, tag, ver = L.run_abelian(k, trace, growth=1)
                s1, s2 = trace.steps[-1]
                want = (k - 1) + (1 if s1 else 0) + (1 if s1 and s2 else 0)
                assert tag == f"Z{want}" and ver.ok


class TestDihedral:
    def test_settled_dinf(self):
        reports, tag, ver = L.run_dihedral(T([[1, 0]] * 6), growth=2)
        assert tag == "Dinf" and ver.ok
        assert L.dihedral_tower_depth(reports) == 0

    def test_alternating_builds_tower(self):
        bits = [[1, 0], [0, 0]] * 4
        reports, tag, ver = L.run_dihedral(T(bits), growth=1)
        assert ver.ok and tag == "H"
        assert L.dihedral_tower_depth(reports) >= 4

    def test_frozen_fragment(self):
        reports, tag, ver = L.run_dihedral(T([[1, 0], [1, 1], [1, 1]]), growth=1)
        assert tag == "FiniteFragment" and ver.ok
        assert all(not r.diagram_delta for r in reports[1:])

    def test_unfreeze_resumes(self):
        reports, tag, ver = L.run_dihedral(T([[1, 0], [1, 1], [1, 0]]), growth=1)
        assert tag == "Dinf" and ver.ok
        assert reports[2].resumed_from == 0
        assert reports[2].diagram_delta

    def test_sampled_soundness(self):
        rng = random.Random(41)
        for _ in range(60):
            steps = [[rng.randint(0, 1), rng.randint(0, 1)]
                     for _ in range(rng.randint(1, 10))]
            _, _, ver = L.run_dihedral(T(steps), growth=rng.randint(1, 2))
            assert ver.ok, (steps, ver)


class TestRank1:
    CHAR = R.char({2: R.INF})

    def test_settled_h(self):
        _, fc, ver = L.run_rank1(self.CHAR, 3, 2, T([[0, 0]] * 4), growth=1)
        assert fc == R.extend_infinite_at(self.CHAR, 3) and ver.ok

    def test_settled_k(self):
        _, fc, ver = L.run_rank1(self.CHAR, 3, 2, T([[0, 0], [1, 0], [1, 1]]), growth=1)
        assert fc == R.kill_prime_at(self.CHAR, 2) and ver.ok

    def test_hand_traced_unit_moves(self):
        reports, fc, ver = L.run_rank1(self.CHAR, 3, 2,
                                       T([[0, 0], [1, 0], [1, 1]]), growth=1)
        assert ver.ok
        stage0 = set(reports[0].partial_map.values())
        assert stage0 == {Fraction(1), Fraction(1, 3)}
        stage1 = set(reports[1].partial_map.values())
        # the G unit becomes 3^0/3^1 = 1/3 and is divided once by 2
        assert Fraction(1, 6) in stage1
        checks = dict((n, d) for n, _, d in ver.checks)
        assert "1/6" in checks["members-in-final-group"]

    def test_preconditions(self):
        with pytest.raises(ValueError):
            L.run_rank1(self.CHAR, 2, 2, T([[0, 0]]))   # p has infinite exponent
        with pytest.raises(ValueError):
            L.run_rank1(self.CHAR, 3, 5, T([[0, 0]]))   # q has finite exponent

    def test_exhaustive_short_traces(self):
        for trace in all_traces(3):
            _, fc, ver = L.run_rank1(self.CHAR, 3, 2, trace, growth=1)
            s1, s2 = trace.steps[-1]
            if not s1:
                want = R.extend_infinite_at(self.CHAR, 3)
            elif not s2:
                want = self.CHAR
            else:
                want = R.kill_prime_at(self.CHAR, 2)
            assert fc == want and ver.ok, trace.steps

    def test_revisits_account_for_old_divisions(self):
        # an abandoned G phase leaves q-divisible elements; the later K unit
        # must absorb them
        trace = T([[0, 0], [1, 0], [0, 0], [1, 1]])
        _, fc, ver = L.run_rank1(self.CHAR, 3, 2, trace, growth=1)
        assert fc == R.kill_prime_at(self.CHAR, 2) and ver.ok


class TestCofinality:
    CHAR = R.char(default=("linear", 1, 1))

    def test_all_enumerated(self):
        res, ver = L.run_cofinality(self.CHAR, 10, set(range(10)), 60)
        assert res.verdict == "isomorphic" and res.multiplier == 1 and ver.ok

    def test_one_missing_low_index(self):
        res, ver = L.run_cofinality(self.CHAR, 10, set(range(10)) - {2}, 60)
        assert res.verdict == "isomorphic" and ver.ok
        assert res.multiplier == res.a_primes[2]

    def test_evens_only(self):
        res, ver = L.run_cofinality(self.CHAR, 10, {0, 2, 4, 6, 8}, 60)
        assert res.verdict == "not-isomorphic-at-window" and ver.ok
        decremented = [p for p in res.a_primes
                       if res.table[p] == R.exponent(self.CHAR, p) - 1]
        assert len(decremented) == 5

    def test_requires_infinite_pfin(self):
        with pytest.raises(ValueError):
            L.run_cofinality(R.Z_CHAR, 3, set(), 60)

    def test_window_too_small(self):
        with pytest.raises(ValueError):
            L.run_cofinality(self.CHAR, 10, set(), 10)

    def test_non_window_primes_unchanged(self):
        c = R.char({2: R.INF}, default=("linear", 1, 1))
        res, ver = L.run_cofinality(c, 5, {0, 1, 2, 3, 4}, 60)
        assert ver.ok and res.table[2] == R.INF


class TestDiagramMonotonicity:
    def test_across_all_runners(self):
        rng = random.Random(4)
        for _ in range(40):
            steps = [[rng.randint(0, 1), rng.randint(0, 1)]
                     for _ in range(rng.randint(1, 12))]
            trace = T(steps)
            for reports in (
                L.run_abelian(2, trace, growth=1)[0],
                L.run_dihedral(trace, growth=1)[0],
                L.run_rank1(R.char({2: R.INF}), 3, 2, trace, growth=1)[0],
            ):
                counts = [r.fact_count for r in reports]
                assert all(a <= b for a, b in zip(counts, counts[1:]))
