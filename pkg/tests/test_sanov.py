"""Tests for the rate function, the rate-ball split, the finite-n tail and
per-outcome exponent bounds, the convergence scan, and the classical
closed-form probabilities used as oracles."""

import json
import math

import numpy as np
import pytest

from sanovlab.errors import DomainError, ValidationError
from sanovlab.exponents import b_e_hat
from sanovlab.sanov import (
    BoundReport,
    classical_sanov_norm_factor,
    classical_sanov_prob,
    enumerate_r_set,
    lemma1_check,
    pair_rate,
    rate_r,
    s_set_split,
    theorem1_check,
    theorem2_scan,
)
from sanovlab.schur import (
    TypeVector,
    YoungIndex,
    enumerate_types,
    in_r_set,
    outcome_distribution,
)

RHO_HALF = np.diag([0.5, 0.5]).astype(complex)
SIGMA_THIRD = np.diag([1.0 / 3.0, 2.0 / 3.0]).astype(complex)


class TestRateR:
    def test_entropy_difference_example(self):
        # D = 0, so the rate is H(rho') - H(p') = log 2 - H(3/4, 1/4).
        got = rate_r([0.75, 0.25], [0.5, 0.5], [0.5, 0.5])
        want = math.log(2) - (-(0.75 * math.log(0.75) + 0.25 * math.log(0.25)))
        assert got == pytest.approx(want, abs=1e-12)
        assert got == pytest.approx(0.130812035941137, abs=1e-9)

    def test_pure_against_mixed_is_log_two(self):
        assert rate_r([1.0, 0.0], [1.0, 0.0], [0.5, 0.5]) == pytest.approx(
            math.log(2), abs=1e-12
        )

    def test_exact_zero_at_the_center(self):
        p = [1.0 / 3.0, 2.0 / 3.0]
        assert rate_r(sorted(p, reverse=True), p, p) == 0.0

    def test_support_violation_is_infinite(self):
        assert math.isinf(rate_r([1.0, 0.0], [0.5, 0.5], [1.0, 0.0]))

    def test_matrix_inputs_accepted(self):
        got = rate_r([1.0, 0.0], np.diag([1.0, 0.0]), RHO_HALF)
        assert got == pytest.approx(math.log(2), abs=1e-12)

    def test_pair_rate_normalizes(self):
        got = pair_rate(YoungIndex((2, 0)), TypeVector((2, 0)), np.array([0.5, 0.5]))
        assert got == pytest.approx(math.log(2), abs=1e-12)


class TestSSetSplit:
    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_partitions_the_admissible_pairs(self, n):
        inside, outside = s_set_split(RHO_HALF, 0.2, n)
        assert len(inside) + len(outside) == len(enumerate_r_set(n, 2))
        assert not (set(map(id, inside)) & set(map(id, outside)))
        q = np.array([0.5, 0.5])
        for y, t in inside:
            assert pair_rate(y, t, q) <= 0.2
        for y, t in outside:
            assert pair_rate(y, t, q) > 0.2

    def test_huge_radius_swallows_everything(self):
        inside, outside = s_set_split(RHO_HALF, 100.0, 4)
        assert outside == []
        assert len(inside) == len(enumerate_r_set(4, 2))

    def test_rejects_nonpositive_radius(self):
        with pytest.raises(DomainError):
            s_set_split(RHO_HALF, 0.0, 3)


class TestBoundReport:
    def test_slack_and_pass_logic(self):
        rep = BoundReport(n=3, lhs=1.0, rhs=1.5, context="demo")
        assert rep.slack == pytest.approx(0.5)
        assert rep.passed
        assert not BoundReport(n=3, lhs=2.0, rhs=1.5, context="demo").passed
        assert BoundReport(n=3, lhs=2.0, rhs=1.5, context="demo", vacuous=True).passed

    def test_json_round_trip_with_infinities(self):
        rep = BoundReport(n=4, lhs=math.inf, rhs=0.3, context="vac", vacuous=True)
        payload = json.loads(rep.to_json())
        assert payload["lhs"] is None
        assert payload["rhs"] == pytest.approx(0.3)
        assert payload["slack"] is None
        assert payload["passed"] is True
        assert payload["vacuous"] is True
        assert list(payload) == sorted(payload)


class TestLemma1:
    @pytest.mark.parametrize("r", [0.05, 0.1, 0.2, 0.5])
    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_holds_on_a_grid(self, r, n):
        for diag in ([0.5, 0.5], [1.0 / 3.0, 2.0 / 3.0], [0.1, 0.9]):
            rep = lemma1_check(np.diag(diag).astype(complex), r, n)
            assert rep.passed, rep.to_json()
            assert rep.lhs >= 0.0

    def test_outside_mass_decays_with_n(self):
        masses = [lemma1_check(SIGMA_THIRD, 0.3, n).lhs for n in range(2, 8)]
        assert masses[-1] < masses[0]

    def test_corruption_hook_breaks_the_bound(self):
        honest = lemma1_check(SIGMA_THIRD, 0.5, 6)
        corrupt = lemma1_check(SIGMA_THIRD, 0.5, 6, bound_scale=1e-6)
        assert honest.passed
        assert corrupt.rhs == pytest.approx(honest.rhs * 1e-6, rel=1e-12)


class TestTheorem1:
    @pytest.mark.parametrize("s", [0.1, 0.3, 0.5, 0.7, 0.9])
    def test_holds_across_outcomes(self, s):
        n = 4
        sigma = np.array([[0.4, 0.15], [0.15, 0.6]], dtype=complex)
        dist = outcome_distribution(sigma, n)
        for pair in enumerate_r_set(n, 2):
            rep = theorem1_check(sigma, RHO_HALF, pair, s, n, dist=dist)
            assert rep.passed, rep.to_json()

    def test_zero_probability_outcome_is_vacuous(self):
        sigma = np.diag([1.0, 0.0]).astype(complex)
        pair = (YoungIndex((2, 2)), TypeVector((2, 2)))
        rep = theorem1_check(sigma, RHO_HALF, pair, 0.5, 4)
        assert rep.vacuous and rep.passed
        assert math.isinf(rep.lhs)

    def test_rejects_vanishing_pair_and_bad_s(self):
        pair = (YoungIndex((2, 2)), TypeVector((3, 1)))
        with pytest.raises(ValidationError):
            theorem1_check(SIGMA_THIRD, RHO_HALF, pair, 0.5, 4)
        good = (YoungIndex((3, 1)), TypeVector((3, 1)))
        with pytest.raises(DomainError):
            theorem1_check(SIGMA_THIRD, RHO_HALF, good, 1.0, 4)

    def test_corruption_hook_shifts_the_exponent_floor(self):
        pair = (YoungIndex((3, 1)), TypeVector((3, 1)))
        honest = theorem1_check(SIGMA_THIRD, RHO_HALF, pair, 0.5, 4)
        corrupt = theorem1_check(SIGMA_THIRD, RHO_HALF, pair, 0.5, 4, bound_scale=1e-4)
        assert corrupt.lhs == pytest.approx(
            honest.lhs - math.log(1e-4) / 4, abs=1e-12
        )


class TestClassicalOracles:
    def test_probability_examples(self):
        assert classical_sanov_prob(RHO_HALF, TypeVector((1, 1))) == pytest.approx(0.5)
        assert classical_sanov_prob(SIGMA_THIRD, TypeVector((1, 1))) == pytest.approx(4.0 / 9.0)
        assert classical_sanov_norm_factor(SIGMA_THIRD, TypeVector((1, 1))) == pytest.approx(2.0 / 9.0)

    def test_probability_is_multinomial_times_norm_factor(self):
        for typ in enumerate_types(5, 2):
            coeff = math.comb(5, typ.counts[0])
            assert classical_sanov_prob(SIGMA_THIRD, typ) == pytest.approx(
                coeff * classical_sanov_norm_factor(SIGMA_THIRD, typ), rel=1e-12
            )

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_matches_the_measured_type_marginal(self, n):
        dist = outcome_distribution(SIGMA_THIRD, n)
        marg = dist.type_marginal()
        for typ in enumerate_types(n, 2):
            want = classical_sanov_prob(SIGMA_THIRD, typ)
            assert marg.get(typ.counts, 0.0) == pytest.approx(want, abs=1e-9)

    def test_vanishing_outside_support(self):
        assert classical_sanov_prob(np.diag([1.0, 0.0]), TypeVector((1, 1))) == 0.0


class TestTheorem2Scan:
    def test_commuting_pair_trends_toward_target(self):
        res = theorem2_scan(SIGMA_THIRD, RHO_HALF, 0.05, list(range(2, 7)))
        assert res.limit_target == pytest.approx(
            b_e_hat(0.05, RHO_HALF, SIGMA_THIRD)[0], abs=1e-12
        )
        gaps = [abs(e - res.limit_target) for e in res.exponents]
        assert gaps[-1] < gaps[0]
        assert all(rep.passed for rep in res.floor_reports)
        assert "toward" in res.monotonicity_summary()

    def test_zero_target_regime_converges(self):
        # r beyond D(sigma||rho): the limit target is an exact zero and the
        # finite-n exponents shrink toward it.
        sigma = np.diag([0.45, 0.55]).astype(complex)
        res = theorem2_scan(sigma, RHO_HALF, 0.3, list(range(2, 8)))
        assert res.limit_target == 0.0
        assert res.exponents[-1] < res.exponents[0]
        assert res.final_gap < 0.02

    def test_csv_output_is_byte_stable(self, tmp_path):
        res = theorem2_scan(SIGMA_THIRD, RHO_HALF, 0.1, [2, 3, 4])
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        res.write_csv(a)
        res.write_csv(b)
        assert a.read_bytes() == b.read_bytes()
        text = a.read_text()
        assert text.startswith("# sanovlab theorem2 scan v1")
        assert text.count("\n") == 2 + 3
