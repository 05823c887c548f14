import csv
import random
from collections import defaultdict

import pytest

from thuekit.core.exceptions import PreconditionError
from thuekit.models.word import enumerate_words
from thuekit.schemas.dehn import DistanceMode, DistanceStatus
from thuekit.services.dehn import DehnService
from thuekit.services.rewriting import RewritingService

from tests.conftest import W, ZERO


class TestCappedDistance:

    def test_acc_to_zero(self, R):
        found = DehnService.capped_distance(R, W("acc"), ZERO)
        assert found.distance == 1
        assert found.status == DistanceStatus.EXACT
        assert found.exact

    def test_equal_words(self, R):
        found = DehnService.capped_distance(R, W("abc"), W("abc"))
        assert found.distance == 0

    def test_witness_derivation(self, R):
        found = DehnService.capped_distance(R, W("bacc"), W("a^3 c a c"), with_derivation=True)
        d = found.derivation
        assert d is not None
        assert d.start == W("bacc") and d.end == W("a^3 c a c")
        assert d.length == found.distance
        assert RewritingService.verify_derivation(R, d).valid

    @pytest.mark.parametrize("u, v", [("bc", "aca"), ("bacc", "0"), ("aab", "ba"), ("a^3 c a c", "0")])
    def test_symmetric(self, R, u, v):
        forward = DehnService.capped_distance(R, W(u), W(v))
        backward = DehnService.capped_distance(R, W(v), W(u))
        assert forward.exact and backward.exact
        assert forward.distance == backward.distance

    def test_acac_distance_matches_construction(self, R):
        # a^3 c a c <-> 0 takes four steps over R
        found = DehnService.capped_distance(R, W("a^3 c a c"), ZERO)
        assert found.distance == 4

    def test_forward_mode(self, R):
        assert DehnService.capped_distance(R, W("bc"), W("aca"), mode=DistanceMode.FORWARD).distance == 1
        back = DehnService.capped_distance(R, W("aca"), W("bc"), mode="forward")
        assert back.distance is None
        assert back.status == DistanceStatus.NOT_FOUND

    def test_not_found_within_caps(self, R):
        found = DehnService.capped_distance(R, W("a"), W("b"), length_cap=4, dist_cap=3)
        assert found.status == DistanceStatus.NOT_FOUND
        assert found.caps == (4, 3)
        assert found.explored > 0

    def test_words_longer_than_cap(self, R):
        with pytest.raises(PreconditionError):
            DehnService.capped_distance(R, W("abcabc"), ZERO, length_cap=3)

    def test_neighbors(self, R):
        neighbors = DehnService.thue_neighbors(R, W("acc"))
        assert ZERO in neighbors
        assert neighbors == sorted(neighbors)
        assert W("acc") not in neighbors


class TestEquivalence:

    def test_equivalent_via_companion(self, R, T):
        assert DehnService.equivalent(R, W("a^3 c a c"), ZERO) is True
        assert DehnService.equivalent(R, W("a"), W("b")) is False
        assert DehnService.equivalent(T, W("bac"), W("a^3 c a")) is True

    def test_custom_system_falls_back_to_search(self):
        system = RewritingService.parse_system("alphabet: a b\nab -> ba\n")
        assert DehnService.equivalent(system, W("aab"), W("baa")) is True
        assert DehnService.equivalent(system, W("a"), W("b"), length_cap=3, dist_cap=3) is None


class TestProfile:

    def test_profile_of_t(self, T, tmp_path):
        points = DehnService.dehn_profile(T, 5)
        assert [p.n for p in points] == list(range(6))
        assert points[0].value == 0
        values = [p.value for p in points]
        assert values == sorted(values)
        # bc ~ aca and ba ~ aab are the first non-trivial pairs
        assert points[4].value == 0
        assert points[5].value >= 1
        assert all(p.status == DistanceStatus.EXACT for p in points)

        path = DehnService.write_profile_csv(points, tmp_path / "out" / "profile.csv")
        with path.open(encoding="utf-8") as handle:
            rows = list(csv.reader(handle))
        assert rows[0] == ["n", "D(n)", "witness_u", "witness_v", "status"]
        assert len(rows) == 7

    def test_profile_bound_checked(self, T):
        with pytest.raises(PreconditionError):
            DehnService.dehn_profile(T, 5, length_cap=4)


class TestContextMonotonicity:

    def test_context_does_not_increase_distance(self, R):
        assert DehnService.check_context_monotonicity(R, W("acc"), ZERO, W("b"), W("a"))
        assert DehnService.check_context_monotonicity(R, W("bc"), W("aca"), W("a^2"), W("c"))

    def test_unconnected_pair_rejected(self, R):
        with pytest.raises(PreconditionError):
            DehnService.check_context_monotonicity(R, W("a"), W("b"), W("a"), W("a"), length_cap=4, dist_cap=2)


def classes_of(system, companion, max_length):
    """Words up to max_length grouped by their normal form under the complete companion."""
    groups = defaultdict(list)
    for w in enumerate_words(system.alphabet, max_length):
        groups[RewritingService.normal_form(companion, w)].append(w)
    return [words for words in groups.values() if len(words) > 1]


class TestDistanceProperties:

    @pytest.mark.parametrize("max_length, caps", [
        pytest.param(2, (6, 6)),
        pytest.param(3, (7, 7), marks=pytest.mark.slow),
    ])
    def test_symmetry_exhaustive(self, R, max_length, caps):
        words = list(enumerate_words(R.alphabet, max_length))
        for i, u in enumerate(words):
            for v in words[i + 1:]:
                forward = DehnService.capped_distance(R, u, v, *caps)
                backward = DehnService.capped_distance(R, v, u, *caps)
                assert (forward.distance, forward.status) == (backward.distance, backward.status), (u, v)

    def test_triangle_inequality(self, R, S):
        rng = random.Random(0)
        classes = classes_of(R, S, 3)
        length_cap, dist_cap = 7, 8
        cache = {}

        def d(u, v):
            if (u, v) not in cache:
                cache[u, v] = DehnService.capped_distance(R, u, v, length_cap, dist_cap)
            return cache[u, v]

        for _ in range(120):
            words = rng.choice(classes)
            u, v, w = (rng.choice(words) for _ in range(3))
            first, second = d(u, v), d(v, w)
            if not (first.exact and second.exact) or first.distance + second.distance > dist_cap:
                continue
            third = d(u, w)
            assert third.exact, (u, v, w)
            assert third.distance <= first.distance + second.distance, (u, v, w)

    def test_cap_stability(self, R, S):
        rng = random.Random(1)
        classes = classes_of(R, S, 3)
        for _ in range(60):
            words = rng.choice(classes)
            u, v = rng.choice(words), rng.choice(words)
            found = DehnService.capped_distance(R, u, v, 6, 6)
            if not found.exact:
                continue
            again = DehnService.capped_distance(R, u, v, 6, 6)
            assert again.distance == found.distance
            wider = DehnService.capped_distance(R, u, v, 8, 8)
            assert wider.exact
            assert wider.distance <= found.distance

    @pytest.mark.parametrize("max_length", [
        pytest.param(4),
        pytest.param(6, marks=pytest.mark.slow),
    ])
    def test_normal_form_within_reach(self, R, S, max_length):
        checked = 0
        for w in enumerate_words(R.alphabet, max_length):
            normal, d = RewritingService.reduce_to_normal_form(S, w)
            length_cap = 2 * w.length + 4
            # b^k c style words have normal forms far beyond the cap
            if normal.length > length_cap or d.length > 12:
                continue
            found = DehnService.capped_distance(R, w, normal, length_cap=length_cap)
            assert found.exact, (w, normal)
            checked += 1
        assert checked > 0
