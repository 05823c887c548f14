from itertools import product

import pytest

from thuekit.core.exceptions import PreconditionError, StepBudgetExceeded, ThueKitError
from thuekit.schemas.paper import FMode
from thuekit.services.paper import PaperSystemsService
from thuekit.services.rewriting import RewritingService
from thuekit.services.systems import builtin_system, complete_companion, system_text

from tests.conftest import W, ZERO


class TestBuiltins:

    def test_unknown_system(self):
        with pytest.raises(ThueKitError):
            builtin_system("Q")

    def test_lowercase_ids(self):
        assert builtin_system("s") == builtin_system("S")

    def test_bundled_files(self, U):
        text = system_text("u")
        assert text.startswith("# complete system")
        assert RewritingService.parse_system(text, name="U") == U

    def test_companions(self, R, S, T, U):
        assert complete_companion(R) is S
        assert complete_companion(T) is U
        custom = RewritingService.parse_system(RewritingService.format_system(R), name="R-copy")
        assert complete_companion(custom) is None


class TestF:

    @pytest.mark.parametrize("mode", list(FMode))
    def test_spot_values(self, mode):
        assert PaperSystemsService.f_eval((1, 1), mode) == 9
        assert PaperSystemsService.f_eval((0,), mode) == 1
        assert PaperSystemsService.f_eval((2, 0), mode) == 7

    def test_modes_agree(self):
        for k in range(1, 4):
            for values in product(range(3), repeat=k):
                closed = PaperSystemsService.f_eval(values, FMode.CLOSED)
                assert PaperSystemsService.f_eval(values, FMode.RECURSIVE) == closed
                assert PaperSystemsService.f_eval(values, FMode.SIMULATE) == closed

    def test_simulate_under_s(self):
        assert PaperSystemsService.f_eval((1, 1), FMode.SIMULATE, system_id="S") == 9

    @pytest.mark.parametrize("values", [(), (1, -1)])
    def test_bad_tuples(self, values):
        with pytest.raises(PreconditionError):
            PaperSystemsService.f_eval(values)


class TestAcac:

    @pytest.mark.parametrize("k", range(6))
    def test_acac_derivation(self, R, k):
        d = PaperSystemsService.acac_derivation(k)
        assert d.start == W(f"a^{2 ** (k + 1) - 1} c a^{k} c")
        assert d.end == ZERO
        assert d.length == 2 ** (k + 1) + k - 1
        assert RewritingService.verify_derivation(R, d).valid

    def test_acac_small_cases(self):
        assert PaperSystemsService.acac_derivation(0).length == 1
        assert PaperSystemsService.acac_derivation(1).length == 4

    def test_negative(self):
        with pytest.raises(PreconditionError):
            PaperSystemsService.acac_derivation(-1)

    def test_expand_acac(self, R, S):
        d = PaperSystemsService.ba_acac_resolution(2)
        assert RewritingService.verify_derivation(S, d).valid
        expanded = PaperSystemsService.expand_acac(d)
        assert expanded.start == d.start and expanded.end == ZERO
        assert RewritingService.verify_derivation(R, expanded).valid
        assert all(step.redex.rule_id != "ACAC" for step in expanded.steps)

    def test_expand_reverse_acac(self, R, S):
        forward = PaperSystemsService.ba_acac_resolution(1)
        expanded = PaperSystemsService.expand_acac(forward.inverse())
        assert expanded.start == ZERO
        assert RewritingService.verify_derivation(R, expanded).valid


class TestConstructions:

    @pytest.mark.parametrize("n", range(5))
    def test_bac_derivation(self, T, n):
        d = PaperSystemsService.bac_derivation(n)
        assert d.start == W(f"b a^{n} c")
        assert d.end == W(f"a^{2 * n + 1} c a")
        assert d.length == n + 1
        assert RewritingService.verify_derivation(T, d).valid

    def test_zero_collapse(self, R):
        d = PaperSystemsService.zero_collapse(W("ab0c"))
        assert d.end == ZERO
        assert d.length == 3
        assert RewritingService.verify_derivation(R, d).valid

    def test_zero_collapse_needs_zero(self):
        with pytest.raises(PreconditionError):
            PaperSystemsService.zero_collapse(W("abc"))

    def test_aab_normalize(self, T):
        d = PaperSystemsService.aab_normalize(W("aaab"))
        assert d.end == W("aba")
        d = PaperSystemsService.aab_normalize(W("a^4 b"))
        assert d.end == W("baba")
        assert RewritingService.verify_derivation(T, d).valid

    @pytest.mark.parametrize("word", ["a^3 c a c", "bacc", "acc", "b0", "aabcc", "a^2 b a^2 c a c", "b a^3 c a c"])
    def test_case1_reduce(self, S, word):
        w = W(word)
        d = PaperSystemsService.case1_reduce(w)
        assert d.end == ZERO
        assert d.length <= 6 * w.length
        assert RewritingService.verify_derivation(S, d).valid

    def test_case1_reduce_reaches_normal_form(self, S):
        w = W("bbc")
        assert PaperSystemsService.case1_reduce(w).end == RewritingService.normal_form(S, w)

    def test_case1_budget(self):
        with pytest.raises(StepBudgetExceeded):
            PaperSystemsService.case1_reduce(W("a^3 c a c"), budget=0)

    def test_left_cancel(self):
        assert PaperSystemsService.left_cancel_check("a", W("b"), W("b"))
        assert PaperSystemsService.left_cancel_check("b", W("c"), W("aca"))
        with pytest.raises(PreconditionError):
            PaperSystemsService.left_cancel_check("0", W("a"), W("b"))


class TestNoRegularCrossSection:

    def test_noregcs_word(self, S):
        u = PaperSystemsService.noregcs_word(1)
        assert u == W("a^6 c a^2 c a c")
        for q in (1, 2, 3):
            u = PaperSystemsService.noregcs_word(q)
            assert RewritingService.is_irreducible(S, u)

    def test_noregcs_range(self):
        with pytest.raises(PreconditionError):
            PaperSystemsService.noregcs_word(0)

    @pytest.mark.parametrize("q", [1, 2])
    @pytest.mark.parametrize("delta", range(1, 6))
    def test_pumping_collapses_to_zero(self, S, q, delta):
        pumped = PaperSystemsService.pump_word(PaperSystemsService.noregcs_word(q), 0, delta)
        assert RewritingService.normal_form(S, pumped) == ZERO

    def test_pump_word(self):
        assert PaperSystemsService.pump_word(W("a^6 c a^2 c a c"), 0, 1) == W("a^7 c a^2 c a c")
        assert PaperSystemsService.pump_word(W("bac"), 1, 2) == W("b a^3 c")
        with pytest.raises(PreconditionError):
            PaperSystemsService.pump_word(W("bac"), 0, 1)

    def test_threshold(self):
        assert not PaperSystemsService.threshold_implication(1, 1, 1)
        assert PaperSystemsService.threshold_implication(1, 2, 1)
        assert PaperSystemsService.noregcs_threshold(1) == 2
        n = 5
        q = PaperSystemsService.noregcs_threshold(n)
        assert all(PaperSystemsService.threshold_implication(n, q, k) for k in range(0, 40))
