import pytest
from hypothesis import given, settings as hypothesis_settings, strategies as st

from thuekit.core.exceptions import (
    ExponentFormError,
    RedexMismatchError,
    StepBudgetExceeded,
    SystemSyntaxError,
    UnknownSymbolError,
)
from thuekit.models.derivation import Derivation, DerivationBuilder
from thuekit.models.word import Word, enumerate_words
from thuekit.schemas.rewriting import Strategy
from thuekit.services.rewriting import RewritingService
from thuekit.services.systems import builtin_system

from tests.conftest import W, ZERO

dense_words = st.text(alphabet="abc0", max_size=12).map(Word.from_dense)


class TestWord:

    def test_dense_and_rle_agree(self):
        assert W("a^3 c a c") == Word.from_dense("aaacac")
        assert str(Word.from_dense("aaacac")) == "a^3 c a c"

    def test_empty_word(self):
        assert str(Word.empty()) == "ε"
        assert W("ε") == Word.empty()
        assert Word.empty().length == 0

    def test_huge_exponent_stays_encoded(self):
        w = Word([("a", 10 ** 30), ("c", 1)])
        assert w.length == 10 ** 30 + 1
        assert str(w) == f"a^{10 ** 30} c"
        assert w.occurrences(W("a c")) == [10 ** 30 - 1]

    def test_runs_merge(self):
        assert Word([("a", 2), ("a", 3), ("b", 0), ("c", 1)]).runs == (("a", 5), ("c", 1))

    def test_format_word(self):
        assert RewritingService.format_word(W("aaacac")) == "a^3 c a c"
        assert RewritingService.format_word(W("a^3 c a c"), dense=True) == "aaacac"
        assert RewritingService.format_word(Word.empty(), dense=True) == "ε"

    def test_enumerate_words_is_shortlex(self):
        words = list(enumerate_words(("a", "b"), 2))
        assert [str(w) for w in words] == ["ε", "a", "b", "a^2", "a b", "b a", "b^2"]

    @given(dense_words)
    def test_text_round_trip(self, w):
        assert Word.parse(str(w)) == w


class TestParseSystem:

    def test_builtin_systems_parse(self, R, S, T, U):
        assert R.alphabet == ("a", "b", "c", "0")
        assert {"BA", "BC", "ACC"} <= set(R.rule_ids)
        assert "ACAC" in S.rule_ids and "ACC" not in S.rule_ids
        assert T.alphabet == ("a", "b", "c")
        assert [s.id for s in U.schemas] == ["BAC"]

    def test_format_round_trip(self, S, U):
        for system in (S, U):
            text = RewritingService.format_system(system)
            again = RewritingService.parse_system(text, name=system.name)
            assert RewritingService.format_system(again) == text

    def test_missing_alphabet(self):
        with pytest.raises(SystemSyntaxError) as exc:
            RewritingService.parse_system("ab -> ba\n")
        assert exc.value.line == 1

    def test_unknown_symbol(self):
        with pytest.raises(UnknownSymbolError):
            RewritingService.parse_system("alphabet: a b\nab -> c\n")

    def test_schema_needs_domain_clause(self):
        with pytest.raises(SystemSyntaxError):
            RewritingService.parse_system("alphabet: a b\nX: a^n b -> b\n")

    def test_decreasing_exponent_rejected(self):
        with pytest.raises(ExponentFormError):
            RewritingService.parse_system("alphabet: a b\nX: a^(5-n) b -> b for n>=0\n")

    def test_comments_and_auto_ids(self):
        system = RewritingService.parse_system("# toy\nalphabet: a b\nab -> ba  # swap\nab -> b\n")
        assert system.rule_ids == ("AB", "AB_2")


class TestReduction:

    def test_nf_bbc(self, S):
        normal, d = RewritingService.reduce_to_normal_form(S, W("bbc"))
        assert normal == W("a^3 c a^2")
        assert d.length == 3
        assert RewritingService.verify_derivation(S, d).valid

    def test_babac_under_u(self, U):
        assert RewritingService.normal_form(U, W("babac")) == W("a^9 c a^2")

    def test_redexes_of_bbc(self, S):
        redexes = RewritingService.find_redexes(S, W("bbc"))
        assert [str(r) for r in redexes] == ["BC@1"]

    def test_schema_redex_found_on_runs(self, S):
        redexes = RewritingService.find_redexes(S, W("a^7 c a^2 c"))
        assert [(r.rule_id, r.param, r.position) for r in redexes] == [("ACAC", 2, 0)]

    def test_reverse_redexes(self, R):
        redexes = RewritingService.find_redexes(R, W("aca"), include_reverse=True)
        assert any(r.rule_id == "BC" and r.direction.value == "reverse" for r in redexes)

    def test_step_budget(self, S):
        with pytest.raises(StepBudgetExceeded) as exc:
            RewritingService.reduce_to_normal_form(S, W("bbc"), max_steps=1)
        assert exc.value.steps == 1

    def test_unknown_symbol_in_word(self, S):
        with pytest.raises(UnknownSymbolError):
            RewritingService.find_redexes(S, W("xyz"))

    @pytest.mark.parametrize("word", ["bbc", "babac", "bacc", "abcabc", "b0ca"])
    def test_strategies_agree_on_complete_system(self, S, word):
        leftmost = RewritingService.normal_form(S, W(word))
        for strategy in (Strategy.RIGHTMOST, Strategy.RANDOM):
            for seed in range(3):
                normal, _ = RewritingService.reduce_to_normal_form(S, W(word), strategy, seed=seed)
                assert normal == leftmost

    def test_random_strategy_is_seeded(self, S):
        _, first = RewritingService.reduce_to_normal_form(S, W("bbbcc"), Strategy.RANDOM, seed=7)
        _, second = RewritingService.reduce_to_normal_form(S, W("bbbcc"), Strategy.RANDOM, seed=7)
        assert first.redexes == second.redexes

    def test_is_irreducible(self, S):
        assert RewritingService.is_irreducible(S, W("a^3 c a^2"))
        assert not RewritingService.is_irreducible(S, W("bc"))


class TestDerivations:

    def test_verify_rejects_wrong_end(self, S):
        _, d = RewritingService.reduce_to_normal_form(S, W("bbc"))
        forged = Derivation(d.start, d.steps, W("a"))
        verdict = RewritingService.verify_derivation(S, forged)
        assert not verdict.valid
        assert verdict.failed_step == d.length

    def test_verify_rejects_foreign_rule(self, T):
        _, d = RewritingService.reduce_to_normal_form(builtin_system("R"), W("acc"))
        verdict = RewritingService.verify_derivation(T, d)
        assert not verdict.valid

    def test_json_round_trip(self, S):
        _, d = RewritingService.reduce_to_normal_form(S, W("babc"))
        again = Derivation.from_json(d.to_json(), S)
        assert again == d

    def test_inverse_and_embed(self, R):
        _, d = RewritingService.reduce_to_normal_form(R, W("bacc"))
        assert RewritingService.verify_derivation(R, d.inverse()).valid
        embedded = d.embed(W("c"), W("a"))
        assert embedded.start == W("cbacca")
        assert RewritingService.verify_derivation(R, embedded).valid

    def test_apply_at_wrong_position(self, R):
        redex = RewritingService.find_redexes(R, W("ba"))[0]
        with pytest.raises(RedexMismatchError):
            redex.apply(W("ab"))

    @hypothesis_settings(max_examples=60)
    @given(dense_words)
    def test_reverse_undoes_forward(self, w):
        R = builtin_system("R")
        for redex in RewritingService.find_redexes(R, w):
            image = redex.apply(w)
            assert redex.reversed().apply(image) == w

    def test_builder_tracks_current_word(self, S):
        builder = DerivationBuilder(W("bc"))
        redex = RewritingService.find_redexes(S, W("bc"))[0]
        assert builder.apply(redex) == W("aca")
        assert len(builder) == 1
        assert builder.build().end == W("aca")
        assert ZERO != builder.current


def naive_redexes(system, w):
    """Forward redexes of w found by scanning its dense form for every lhs."""
    text = w.dense()
    rules = [(rule, None) for rule in system.finite_rules]
    for schema in system.schemas:
        n = schema.n_min
        while schema.lhs_at(n).length <= len(text):
            rules.append((schema.instantiate(n), n))
            n += 1
    found = set()
    for rule, param in rules:
        pattern = rule.lhs.dense()
        for at in range(len(text) - len(pattern) + 1):
            if text.startswith(pattern, at):
                found.add((rule.id, param, at))
    return found


def found_redexes(system, w):
    return {(r.rule_id, r.param, r.position) for r in RewritingService.find_redexes(system, w)}


def long_words(alphabet):
    runs = st.lists(st.tuples(st.sampled_from(alphabet), st.integers(1, 40)), min_size=4, max_size=10)
    return runs.map(Word).filter(lambda w: w.length > 64)


class TestRedexCompleteness:

    @pytest.mark.parametrize("system_id", ["R", "S", "U"])
    def test_short_words_match_dense_scan(self, system_id):
        system = builtin_system(system_id)
        for w in enumerate_words(system.alphabet, 7):
            assert found_redexes(system, w) == naive_redexes(system, w), str(w)

    @hypothesis_settings(max_examples=150)
    @given(long_words("abc0"))
    def test_long_words_under_s(self, w):
        s = builtin_system("S")
        assert found_redexes(s, w) == naive_redexes(s, w)

    @hypothesis_settings(max_examples=150)
    @given(long_words("abc"))
    def test_long_words_under_u(self, w):
        u = builtin_system("U")
        assert found_redexes(u, w) == naive_redexes(u, w)

    def test_acac_instance_in_long_word(self):
        s = builtin_system("S")
        w = W("b a^63 c a^5 c a")
        assert ("ACAC", 5, 1) in found_redexes(s, w)
        assert found_redexes(s, w) == naive_redexes(s, w)


class TestTextRoundTrip:

    def test_every_short_dense_word(self):
        for w in enumerate_words(("a", "b", "c", "0"), 8, min_length=1):
            assert Word.parse(str(w)) == w
            assert Word.parse(w.dense()) == w

    @pytest.mark.slow
    def test_every_dense_word_up_to_twelve(self):
        for w in enumerate_words(("a", "b", "c", "0"), 12, min_length=9):
            assert Word.parse(str(w)) == w
            assert Word.parse(w.dense()) == w
