import random
from itertools import product
from typing import Callable, Dict, List, Optional, Union

from thuekit.core.config import settings
from thuekit.core.exceptions import ThueKitError
from thuekit.core.logging import logger
from thuekit.models.derivation import Derivation
from thuekit.models.system import RewritingSystem
from thuekit.models.word import Word, enumerate_words
from thuekit.schemas.cross_section import Verdict
from thuekit.schemas.paper import FMode, FULL_SIZES, Lemma, QUICK_SIZES, SuiteResult, SuiteSizes
from thuekit.schemas.rewriting import Strategy
from thuekit.services.confluence import ConfluenceService
from thuekit.services.cross_section import CrossSectionService
from thuekit.services.dehn import DehnService
from thuekit.services.paper import PaperSystemsService
from thuekit.services.rewriting import RewritingService
from thuekit.services.systems import builtin_system

PAPER_LEMMAS = tuple(Lemma)

ZERO = Word.from_dense("0")
MAX_REPORTED = 10


class _Tally:
    """Counts checks and keeps the first few failures."""

    def __init__(self, lemma: Lemma):
        self.lemma = lemma
        self.checked = 0
        self.failed = 0
        self.failures: List[str] = []
        self.witnesses: List[str] = []

    def check(self, ok: bool, message: Union[str, Callable[[], str]]) -> bool:
        self.checked += 1
        if not ok:
            self.failed += 1
            if len(self.failures) < MAX_REPORTED:
                self.failures.append(message() if callable(message) else message)
        return ok

    def witness(self, text: str) -> None:
        if len(self.witnesses) < MAX_REPORTED:
            self.witnesses.append(text)

    def result(self, detail: Optional[str] = None) -> SuiteResult:
        return SuiteResult(
            lemma=self.lemma,
            passed=self.failed == 0,
            checked=self.checked,
            failures=self.failures,
            witnesses=self.witnesses,
            detail=detail,
        )


class _Components:
    """Union-find over words."""

    def __init__(self):
        self.parent: Dict[Word, Word] = {}

    def find(self, w: Word) -> Word:
        self.parent.setdefault(w, w)
        root = w
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[w] != root:
            self.parent[w], w = root, self.parent[w]
        return root

    def union(self, u: Word, v: Word) -> None:
        self.parent[self.find(u)] = self.find(v)


def _max_length(d: Derivation) -> int:
    return max(w.length for w in d.words())


def _nf(system: RewritingSystem, w: Word) -> Word:
    return RewritingService.normal_form(system, w)


def _group_by_normal_form(system: RewritingSystem, words) -> Dict[Word, List[Word]]:
    groups: Dict[Word, List[Word]] = {}
    for w in words:
        groups.setdefault(_nf(system, w), []).append(w)
    return groups


def _r_witness(w: Word) -> Derivation:
    """An R-derivation from w to 0 (zero class) or to its S-normal form."""
    s = builtin_system("S")
    if w.count("0"):
        return PaperSystemsService.zero_collapse(w)
    if _nf(s, w) == ZERO:
        return PaperSystemsService.expand_acac(PaperSystemsService.case1_reduce(w))
    _, derivation = RewritingService.reduce_to_normal_form(s, w)
    return derivation


class VerificationService:

    @staticmethod
    def run_suite(lemma: Union[Lemma, str], seed: Optional[int] = None, full: bool = False) -> SuiteResult:
        """
        Run the property suite for one lemma
        """
        lemma = Lemma(lemma)
        seed = settings.DEFAULT_SEED if seed is None else seed
        sizes = FULL_SIZES if full else QUICK_SIZES
        logger.info(f"Running suite {lemma.value} (seed={seed}, {'full' if full else 'quick'})")

        suite = _SUITES[lemma]
        try:
            result = suite(sizes, random.Random(seed))
        except ThueKitError as e:
            logger.error(f"Suite {lemma.value} aborted: {e.detail}")
            result = SuiteResult(lemma=lemma, passed=False, checked=0, failures=[e.detail])
        except Exception as e:
            logger.error(f"Unexpected error in suite {lemma.value}: {e}", exc_info=True)
            result = SuiteResult(lemma=lemma, passed=False, checked=0, failures=[f"internal error: {e}"])

        logger.info(result.line)
        return result

    @staticmethod
    def run_all(seed: Optional[int] = None, full: bool = False) -> List[SuiteResult]:
        return [VerificationService.run_suite(lemma, seed, full) for lemma in PAPER_LEMMAS]

    # suites

    @staticmethod
    def suite_f(sizes: SuiteSizes, rng: random.Random) -> SuiteResult:
        tally = _Tally(Lemma.F)
        f = PaperSystemsService.f_eval
        for k in range(1, sizes.f_max_k + 1):
            for values in product(range(sizes.f_max_d + 1), repeat=k):
                closed = f(values, FMode.CLOSED)
                recursive = f(values, FMode.RECURSIVE)
                simulated = f(values, FMode.SIMULATE)
                tally.check(
                    closed == recursive == simulated,
                    lambda: f"f{values}: closed={closed} recursive={recursive} simulate={simulated}",
                )

        u = builtin_system("U")
        end, _ = RewritingService.reduce_to_normal_form(u, Word.from_dense("babac"))
        tally.check(end == Word.parse("a^9 c a^2"), f"babac reduces to {end} under U")
        tally.witness(f"babac ->* {end}")
        return tally.result()

    @staticmethod
    def suite_distacac(sizes: SuiteSizes, rng: random.Random) -> SuiteResult:
        tally = _Tally(Lemma.DISTACAC)
        r = builtin_system("R")
        for k in range(sizes.acac_max + 1):
            d = PaperSystemsService.acac_derivation(k)
            bound = (1 << (k + 1)) + k - 1
            verdict = RewritingService.verify_derivation(r, d)
            tally.check(verdict.valid, f"acac_derivation({k}) fails at step {verdict.failed_step}: {verdict.reason}")
            tally.check(d.length <= bound and d.end == ZERO, f"acac_derivation({k}) has {d.length} steps > {bound}")
            tally.witness(f"k={k}: {d.length} steps (bound {bound})")

        for k in range(sizes.acac_bfs_max + 1):
            d = PaperSystemsService.acac_derivation(k)
            bound = (1 << (k + 1)) + k - 1
            found = DehnService.capped_distance(r, d.start, ZERO, length_cap=d.start.length + 1, dist_cap=bound)
            tally.check(found.exact and found.distance <= bound, f"BFS d_R({d.start}, 0) = {found.distance} > {bound}")
            tally.witness(f"BFS k={k}: d_R = {found.distance}")
        return tally.result()

    @staticmethod
    def suite_equivalent(sizes: SuiteSizes, rng: random.Random) -> SuiteResult:
        """R-congruence within the length cap coincides with equal S-normal forms."""
        tally = _Tally(Lemma.EQUIVALENT)
        r, s = builtin_system("R"), builtin_system("S")
        cap = sizes.equivalent_length_cap

        # every R rule is an S-equivalence, so R-connected words share their S-normal form
        for rule in r.finite_rules:
            tally.check(_nf(s, rule.lhs) == _nf(s, rule.rhs), f"rule {rule.id} changes the S-normal form")

        for n in range(sizes.acac_max + 1):
            verdict = RewritingService.verify_derivation(r, PaperSystemsService.acac_derivation(n))
            tally.check(verdict.valid, f"ACAC n={n} is not an R-consequence: {verdict.reason}")

        total = sizes.equivalent_total
        groups = _group_by_normal_form(s, enumerate_words(s.alphabet, total - 1))
        components = _Components()
        bfs_calls = 0
        for normal, members in groups.items():
            if len(members) < 2 or members[0].length + members[1].length > total:
                continue
            for w in members:
                witness = _r_witness(w)
                if witness.length and _max_length(witness) <= cap and RewritingService.verify_derivation(r, witness):
                    components.union(w, witness.end)
            roots = {components.find(w) for w in members}
            if len(roots) == 1:
                tally.check(True, "")
                continue
            for i, u in enumerate(members):
                for v in members[i + 1:]:
                    if u.length + v.length > total or components.find(u) == components.find(v):
                        continue
                    bfs_calls += 1
                    found = DehnService.capped_distance(r, u, v, length_cap=cap)
                    if tally.check(found.exact, f"{u} and {v} share nf_S {normal} but are not R-connected within {cap}"):
                        components.union(u, v)

        tally.witness(f"{len(groups)} S-classes among words of length <= {total - 1}, {bfs_calls} BFS fallbacks")
        return tally.result()

    @staticmethod
    def _confluence(
        tally: _Tally,
        system: RewritingSystem,
        params: int,
        length: int,
        runs: int,
        rng: random.Random,
    ) -> None:
        for report in ConfluenceService.resolve_all(system, params, settings.RESOLVE_MAX_STEPS):
            pair = report.pair
            tally.check(
                report.resolved,
                lambda: f"{pair.rules[0].label} x {pair.rules[1].label} on {pair.source}: "
                f"{report.left_normal_form} != {report.right_normal_form}",
            )
            for d in report.derivations:
                tally.check(RewritingService.verify_derivation(system, d).valid, f"resolution of {pair.source} does not verify")

        for w in enumerate_words(system.alphabet, length):
            normal = _nf(system, w)
            for run in range(runs):
                end, d = RewritingService.reduce_to_normal_form(system, w, Strategy.RANDOM, seed=rng.randrange(1 << 30))
                tally.check(end == normal, lambda: f"{w}: random reduction reached {end}, leftmost {normal}")
                if run == 0:
                    tally.check(
                        ConfluenceService.certify_termination_trace(system, d),
                        lambda: f"trace from {w} is not certified by the termination measures",
                    )

    @staticmethod
    def suite_complete_s(sizes: SuiteSizes, rng: random.Random) -> SuiteResult:
        tally = _Tally(Lemma.COMPLETE_S)
        s = builtin_system("S")
        VerificationService._confluence(
            tally, s, sizes.complete_s_params, sizes.confluence_length_s, sizes.random_runs, rng
        )
        tally.witness(f"critical pairs with params <= {sizes.complete_s_params}; words <= {sizes.confluence_length_s}")
        return tally.result()

    @staticmethod
    def suite_complete_u(sizes: SuiteSizes, rng: random.Random) -> SuiteResult:
        tally = _Tally(Lemma.COMPLETE_U)
        u = builtin_system("U")
        VerificationService._confluence(
            tally, u, sizes.complete_u_params, sizes.confluence_length_u, sizes.random_runs, rng
        )
        tally.witness(f"critical pairs with params <= {sizes.complete_u_params}; words <= {sizes.confluence_length_u}")
        return tally.result()

    @staticmethod
    def suite_ldf_case1(sizes: SuiteSizes, rng: random.Random) -> SuiteResult:
        """d_R(w, 0) <= 6|w| on the class of 0"""
        tally = _Tally(Lemma.LDF_CASE1)
        r, s = builtin_system("R"), builtin_system("S")
        zero_class = [
            w for w in enumerate_words(s.alphabet, sizes.ldf1_length, min_length=1) if _nf(s, w) == ZERO
        ]
        worst = 0.0
        for w in zero_class:
            bound = 6 * w.length
            d = PaperSystemsService.case1_reduce(w)
            tally.check(d.end == ZERO and d.length <= bound, lambda: f"case1_reduce({w}) took {d.length} > {bound}")
            tally.check(RewritingService.verify_derivation(s, d).valid, f"case1_reduce({w}) does not verify")

            expanded = PaperSystemsService.expand_acac(d)
            cap = settings.default_length_cap(w.length)
            tally.check(
                expanded.length <= bound and _max_length(expanded) <= cap,
                lambda: f"R-derivation of {w} has {expanded.length} steps, peak length {_max_length(expanded)}",
            )
            tally.check(RewritingService.verify_derivation(r, expanded).valid, f"R-derivation of {w} does not verify")
            worst = max(worst, expanded.length / w.length)

        small = [w for w in zero_class if w.length <= sizes.ldf1_bfs_length]
        for w in rng.sample(small, min(sizes.ldf1_bfs_samples, len(small))):
            found = DehnService.capped_distance(
                r, w, ZERO, length_cap=settings.default_length_cap(w.length), dist_cap=6 * w.length
            )
            tally.check(found.exact, f"BFS found no path from {w} to 0 within {6 * w.length}")

        tally.witness(f"{len(zero_class)} words in the class of 0; worst d_R/|w| = {worst:.2f}")
        return tally.result()

    @staticmethod
    def suite_ldf_case2(sizes: SuiteSizes, rng: random.Random) -> SuiteResult:
        """d_T(u, v) <= |u| + |v| whenever nf_U(u) = nf_U(v)"""
        tally = _Tally(Lemma.LDF_CASE2)
        t, u_system = builtin_system("T"), builtin_system("U")
        total = sizes.ldf2_total
        groups = _group_by_normal_form(u_system, enumerate_words(t.alphabet, total - 1))
        for members in groups.values():
            for i, u in enumerate(members):
                for v in members[i + 1:]:
                    if u.length + v.length > total:
                        break
                    bound = u.length + v.length
                    found = DehnService.capped_distance(t, u, v, dist_cap=bound)
                    tally.check(found.exact, f"d_T({u}, {v}) exceeds {bound} (or the caps)")
        return tally.result()

    @staticmethod
    def suite_left_cancel(sizes: SuiteSizes, rng: random.Random) -> SuiteResult:
        tally = _Tally(Lemma.LEFT_CANCEL)
        u_system = builtin_system("U")
        words = list(enumerate_words(("a", "b", "c"), sizes.left_cancel_length))
        for x in ("a", "b", "c"):
            prefix = Word.from_dense(x)
            # nf_U(xu) -> (nf_U(u), u) of the first word seen
            seen: Dict[Word, tuple] = {}
            for w in words:
                key = _nf(u_system, prefix + w)
                normal = _nf(u_system, w)
                first = seen.setdefault(key, (normal, w))
                tally.check(
                    first[0] == normal,
                    lambda: f"x={x}: nf_U(x{first[1]}) = nf_U(x{w}) but {first[0]} != {normal}",
                )

        for _ in range(min(200, len(words))):
            x = rng.choice("abc")
            u, v = rng.choice(words), rng.choice(words)
            tally.check(PaperSystemsService.left_cancel_check(x, u, v), f"left cancellation fails for {x}, {u}, {v}")
        return tally.result()

    @staticmethod
    def suite_noregcs(sizes: SuiteSizes, rng: random.Random) -> SuiteResult:
        tally = _Tally(Lemma.NOREGCS)
        s = builtin_system("S")
        for q in sizes.noregcs_qs:
            u = PaperSystemsService.noregcs_word(q)
            tally.check(RewritingService.is_irreducible(s, u), f"noregcs_word({q}) is reducible")
            tally.check(_nf(s, u) != ZERO, f"noregcs_word({q}) is in the class of 0")
            for delta in range(1, 6):
                pumped = PaperSystemsService.pump_word(u, 0, delta)
                tally.check(_nf(s, pumped) == ZERO, f"pumping noregcs_word({q}) by {delta} stays out of the class of 0")

        dfa = CrossSectionService.irreducibles_dfa(builtin_system("R"))
        report = CrossSectionService.check_cross_section(dfa, sizes.horizon)
        tally.check(report.verdict == Verdict.REFUTED, f"R-irreducibles not refuted at horizon {sizes.horizon}")
        for duplicate in report.duplicates[:3]:
            tally.witness(f"duplicate: {duplicate.first} ~ {duplicate.second} (nf_S {duplicate.normal_form})")

        violation = CrossSectionService.pumping_falsifier(dfa, 1)
        tally.check(violation is not None, "pumping falsifier found nothing on the R-irreducibles")
        if violation is not None:
            tally.witness(f"pumped: {violation.first} ~ {violation.second}")
        return tally.result()

    @staticmethod
    def suite_monotonicity(sizes: SuiteSizes, rng: random.Random) -> SuiteResult:
        """d(puq, pvq) <= d(u, v) on random equivalent pairs"""
        tally = _Tally(Lemma.MONOTONICITY)
        r = builtin_system("R")
        alphabet = r.alphabet

        def random_word(max_length: int) -> Word:
            return Word.from_dense("".join(rng.choice(alphabet) for _ in range(rng.randint(0, max_length))))

        for _ in range(sizes.monotonicity_samples):
            u = random_word(3)
            v = u
            # walk a few Thue steps to get an equivalent partner
            for _ in range(rng.randint(0, 3)):
                options = [w for w in DehnService.thue_neighbors(r, v, 6) if w.length + u.length <= 6]
                if not options:
                    break
                v = rng.choice(options)
            p, q = random_word(2), random_word(2)
            ok = DehnService.check_context_monotonicity(r, u, v, p, q, length_cap=6)
            tally.check(ok, f"d({p}{u}{q}, {p}{v}{q}) > d({u}, {v})")
        return tally.result()


_SUITES = {
    Lemma.F: VerificationService.suite_f,
    Lemma.EQUIVALENT: VerificationService.suite_equivalent,
    Lemma.DISTACAC: VerificationService.suite_distacac,
    Lemma.COMPLETE_S: VerificationService.suite_complete_s,
    Lemma.COMPLETE_U: VerificationService.suite_complete_u,
    Lemma.LDF_CASE1: VerificationService.suite_ldf_case1,
    Lemma.LDF_CASE2: VerificationService.suite_ldf_case2,
    Lemma.LEFT_CANCEL: VerificationService.suite_left_cancel,
    Lemma.NOREGCS: VerificationService.suite_noregcs,
    Lemma.MONOTONICITY: VerificationService.suite_monotonicity,
}
