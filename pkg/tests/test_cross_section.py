import pytest

from thuekit.core.exceptions import DFAFormatError, PreconditionError
from thuekit.models.word import enumerate_words
from thuekit.schemas.cross_section import Verdict
from thuekit.services.cross_section import CrossSectionService
from thuekit.services.rewriting import RewritingService

from tests.conftest import W, ZERO

# words over {a} of even length
EVEN_AS = """
states: 2
start: 0
accept: 0
alphabet: a
0 a 1
1 a 0
"""


class TestDfaFiles:

    def test_load(self):
        dfa = CrossSectionService.load_dfa(EVEN_AS)
        assert dfa.states == 2
        assert dfa.alphabet == ("a",)
        assert dfa.accepts(W("a^4"))
        assert not dfa.accepts(W("a^3"))
        assert not dfa.accepts(W("b"))

    def test_dump_round_trip(self, r_irreducibles):
        again = CrossSectionService.load_dfa(CrossSectionService.dump_dfa(r_irreducibles))
        assert again == r_irreducibles

    def test_missing_transition(self):
        with pytest.raises(DFAFormatError):
            CrossSectionService.load_dfa("states: 2\nstart: 0\naccept: 0\n0 a 1\n")

    def test_alphabet_defaults_to_all_symbols(self):
        dfa = CrossSectionService.load_dfa("states: 1\nstart: 0\naccept: 0\n0 a 0\n0 b 0\n0 c 0\n0 0 0\n")
        assert dfa.alphabet == ("a", "b", "c", "0")
        assert dfa.accepts(W("ab0c"))

    def test_state_without_zero_transition(self):
        with pytest.raises(DFAFormatError):
            CrossSectionService.load_dfa("states: 1\nstart: 0\naccept: 0\n0 a 0\n0 b 0\n0 c 0\n")

    def test_unknown_symbol(self):
        with pytest.raises(DFAFormatError) as exc:
            CrossSectionService.load_dfa("states: 1\nstart: 0\naccept: 0\n0 x 0\n")
        assert exc.value.line == 4

    def test_bad_state_index(self):
        with pytest.raises(DFAFormatError):
            CrossSectionService.load_dfa("states: 1\nstart: 0\naccept: 0\n0 a 3\n")

    def test_missing_header(self):
        with pytest.raises(DFAFormatError):
            CrossSectionService.load_dfa("0 a 0\n")


class TestAutomata:

    def test_minimize_merges_equivalent_states(self):
        redundant = CrossSectionService.load_dfa(
            "states: 4\nstart: 0\naccept: 0 2\nalphabet: a\n0 a 1\n1 a 2\n2 a 3\n3 a 0\n"
        )
        minimal = CrossSectionService.minimize_dfa(redundant)
        assert minimal.states == 2
        for w in enumerate_words(("a",), 8):
            assert minimal.accepts(w) == redundant.accepts(w)

    def test_irreducibles_dfa(self, R, r_irreducibles):
        for w in enumerate_words(R.alphabet, 5):
            assert r_irreducibles.accepts(w) == RewritingService.is_irreducible(R, w)

    def test_irreducibles_need_finite_system(self, S):
        with pytest.raises(PreconditionError):
            CrossSectionService.irreducibles_dfa(S)

    def test_accepted_words_in_shortlex_order(self):
        dfa = CrossSectionService.finite_language_dfa([W("ba"), W("a"), W("ab")], ("a", "b"))
        assert list(CrossSectionService.accepted_words(dfa, 3)) == [W("a"), W("ab"), W("ba")]

    def test_accepted_words_respect_length(self):
        dfa = CrossSectionService.load_dfa(EVEN_AS)
        assert [w.length for w in CrossSectionService.accepted_words(dfa, 5)] == [0, 2, 4]


class TestCrossSectionCheck:

    def test_r_irreducibles_refuted(self, r_irreducibles):
        report = CrossSectionService.check_cross_section(r_irreducibles, 6)
        assert report.verdict == Verdict.REFUTED
        assert [(d.first, d.second, d.normal_form) for d in report.duplicates] == [
            (ZERO, W("a^3 c a c"), ZERO)
        ]

    def test_s_irreducibles_consistent(self, S):
        irreducible = [w for w in enumerate_words(S.alphabet, 4) if RewritingService.is_irreducible(S, w)]
        dfa = CrossSectionService.finite_language_dfa(irreducible, S.alphabet)
        report = CrossSectionService.check_cross_section(dfa, 4)
        assert report.verdict == Verdict.CONSISTENT
        assert report.duplicates == []
        assert report.unreached_classes == []
        assert report.accepted == len(irreducible)

    def test_unreached_classes_reported(self):
        dfa = CrossSectionService.finite_language_dfa([W("a")], ("a", "b", "c", "0"))
        report = CrossSectionService.check_cross_section(dfa, 3)
        assert report.verdict == Verdict.CONSISTENT
        assert W("b") in report.unreached_classes
        assert W("a") not in report.unreached_classes

    def test_negative_horizon(self, r_irreducibles):
        with pytest.raises(PreconditionError):
            CrossSectionService.check_cross_section(r_irreducibles, -1)


class TestPumpingFalsifier:

    def test_violation_on_r_irreducibles(self, S, r_irreducibles):
        violation = CrossSectionService.pumping_falsifier(r_irreducibles, 1)
        assert violation is not None
        assert violation.first != violation.second
        for w in (violation.first, violation.second):
            assert r_irreducibles.accepts(w)
            assert RewritingService.normal_form(S, w) == ZERO
        if violation.pump_length is not None:
            assert violation.pump_length <= r_irreducibles.states

    def test_pumped_words_come_from_the_noregcs_class(self, r_irreducibles):
        violation = CrossSectionService.pumping_falsifier(r_irreducibles, 1)
        assert violation.base == W("a^6 c a^2 c a c")
        assert violation.first == W("a^7 c a^2 c a c")
        assert violation.second == W("a^8 c a^2 c a c")

    def test_no_violation_on_small_language(self):
        dfa = CrossSectionService.finite_language_dfa([W("a"), W("b")], ("a", "b", "c", "0"))
        assert CrossSectionService.pumping_falsifier(dfa, 1) is None

    def test_q_range(self, r_irreducibles):
        with pytest.raises(PreconditionError):
            CrossSectionService.pumping_falsifier(r_irreducibles, 4)

    def test_class_preimages(self, S):
        u = W("a^3 c a")
        preimages = CrossSectionService.class_preimages(u, 50)
        assert set(preimages) == {u, W("a^2 b c"), W("b a c")}
        for w in preimages:
            assert RewritingService.normal_form(S, w) == u
