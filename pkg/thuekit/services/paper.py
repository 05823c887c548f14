from functools import lru_cache
from typing import Optional, Sequence, Union

from thuekit.core.config import settings
from thuekit.core.exceptions import DenseCapExceeded, PreconditionError, StepBudgetExceeded, ThueKitError
from thuekit.core.logging import logger
from thuekit.models.derivation import Derivation, DerivationBuilder, Direction, Redex
from thuekit.models.system import RewritingSystem
from thuekit.models.word import Word
from thuekit.schemas.paper import FMode
from thuekit.schemas.rewriting import Strategy
from thuekit.services.rewriting import RewritingService
from thuekit.services.systems import builtin_system

TEXT_SYMBOLS = ("a", "b", "c")


def _forward(system: RewritingSystem, rule_id: str, position: int, param: Optional[int] = None) -> Redex:
    rule = system.instantiate(rule_id, param)
    return Redex(rule.id, position, rule.lhs, rule.rhs, rule.param)


def _reverse(system: RewritingSystem, rule_id: str, position: int, param: Optional[int] = None) -> Redex:
    return _forward(system, rule_id, position, param).reversed()


def _acac_lhs(n: int) -> Word:
    return Word((("a", (1 << (n + 1)) - 1), ("c", 1), ("a", n), ("c", 1)))


def _check_dense(length: int) -> None:
    if length > settings.DENSE_CAP:
        logger.warning(f"Refusing to build a derivation through words of length {length}")
        raise DenseCapExceeded(length, settings.DENSE_CAP)


def _zero_steps(system: RewritingSystem, w: Word):
    """Z-rule redexes that collapse w (which contains 0) to the word 0."""
    dense = w.dense()
    zero = dense.index("0")
    steps = []
    for at in range(zero - 1, -1, -1):
        steps.append(_forward(system, f"ZL{dense[at]}", at))
    for symbol in dense[zero + 1:]:
        steps.append(_forward(system, f"ZR{symbol}", 0))
    return steps


@lru_cache(maxsize=32)
def _acac_derivation(k: int) -> Derivation:
    r = builtin_system("R")
    builder = DerivationBuilder(_acac_lhs(k))
    if k == 0:
        builder.apply(_forward(r, "ACC", 0))
        return builder.build()
    m = (1 << (k + 1)) - 2
    # a^{m+1} c a^k c <-> a^m b c a^{k-1} c
    builder.apply(_reverse(r, "BC", m))
    # a^m b <-> b a^{m/2}
    for at in range(m - 2, -1, -2):
        builder.apply(_reverse(r, "BA", at))
    builder.extend(_acac_derivation(k - 1).embed(Word.from_dense("b"), Word.empty()))
    builder.apply(_forward(r, "ZLb", 0))
    return builder.build()


class PaperSystemsService:

    @staticmethod
    def builtin_system(system_id: str) -> RewritingSystem:
        return builtin_system(system_id)

    # the function f

    @staticmethod
    def f_eval(values: Sequence[int], mode: Union[FMode, str] = FMode.CLOSED, system_id: str = "U") -> int:
        """
        f(d_k, ..., d_1), where b a^{d_k} ... b a^{d_1} c reduces to a^f c a^k
        """
        mode = FMode(mode)
        values = tuple(values)
        if not values or any(d < 0 for d in values):
            logger.warning(f"Rejected f tuple {values}")
            raise PreconditionError("f needs a non-empty tuple of non-negative integers")

        k = len(values)
        if mode == FMode.CLOSED:
            return sum(d << (j + 1) for j, d in enumerate(values)) + (1 << k) - 1

        if mode == FMode.RECURSIVE:
            value = 2 * values[-1] + 1
            for d in reversed(values[:-1]):
                value = 2 * value + 2 * d + 1
            return value

        expected = PaperSystemsService.f_eval(values, FMode.CLOSED)
        _check_dense(expected + 1 + k)
        runs = []
        for d in values:
            runs.extend((("b", 1), ("a", d)))
        runs.append(("c", 1))
        start = Word(runs)
        system = builtin_system(system_id)
        end, derivation = RewritingService.reduce_to_normal_form(system, start, Strategy.LEFTMOST)
        shape = end.runs
        if len(shape) != 3 or shape[0][0] != "a" or shape[1] != ("c", 1) or shape[2] != ("a", k):
            raise ThueKitError(f"{start} reduced to {end}, not to a^x c a^{k}")
        logger.debug(f"simulated f{values} = {shape[0][1]} in {derivation.length} steps")
        return shape[0][1]

    # constructive derivations

    @staticmethod
    def acac_derivation(n: int) -> Derivation:
        """
        Derivation over R from a^{2^{n+1}-1} c a^n c to 0 in 2^{n+1}+n-1 steps
        """
        logger.debug(f"Building ACAC derivation for n={n}")
        if n < 0:
            raise PreconditionError("n must be non-negative")
        _check_dense(_acac_lhs(n).length)
        return _acac_derivation(n)

    @staticmethod
    def expand_acac(d: Derivation) -> Derivation:
        """Rewrite a derivation over S as one over R by replacing every ACAC step."""
        builder = DerivationBuilder(d.start)
        for step in d.steps:
            redex = step.redex
            if redex.rule_id != "ACAC":
                builder.apply(redex)
                continue
            current = builder.current
            prefix = current.slice(0, redex.position)
            suffix = current.slice(redex.position + redex.source.length)
            inner = PaperSystemsService.acac_derivation(redex.param)
            if redex.direction == Direction.REVERSE:
                inner = inner.inverse()
            builder.extend(inner.embed(prefix, suffix))
        return builder.build()

    @staticmethod
    def bac_derivation(n: int) -> Derivation:
        """b a^n c <-> a^{2n+1} c a over T"""
        if n < 0:
            raise PreconditionError("n must be non-negative")
        t = builtin_system("T")
        builder = DerivationBuilder(Word((("b", 1), ("a", n), ("c", 1))))
        for j in range(n):
            builder.apply(_reverse(t, "AAB", 2 * j))
        builder.apply(_forward(t, "BC", 2 * n))
        return builder.build()

    @staticmethod
    def zero_collapse(w: Word, system_id: str = "R") -> Derivation:
        """Z-steps from a word containing 0 down to 0; at most |w| of them"""
        if w.count("0") == 0:
            raise PreconditionError(f"{w} contains no 0")
        system = builtin_system(system_id)
        builder = DerivationBuilder(w)
        for redex in _zero_steps(system, w):
            builder.apply(redex)
        return builder.build()

    @staticmethod
    def ba_acac_resolution(k: int) -> Derivation:
        """a^2 b a^{2^{k+1}-2} c a^k c ->* 0 over S: BA shifts, one BC, one ACAC"""
        if k < 0:
            raise PreconditionError("k must be non-negative")
        s = builtin_system("S")
        m = (1 << (k + 1)) - 2
        builder = DerivationBuilder(Word((("a", 2), ("b", 1), ("a", m), ("c", 1), ("a", k), ("c", 1))))
        for j in range(m):
            builder.apply(_forward(s, "BA", 2 + 2 * j))
        builder.apply(_forward(s, "BC", 2 + 2 * m))
        builder.apply(_forward(s, "ACAC", 0, k + 1))
        return builder.build()

    @staticmethod
    def aab_normalize(w: Word) -> Derivation:
        """Exhaustive leftmost a^2 b -> b a over T"""
        t = builtin_system("T")
        rule = t.instantiate("AAB")
        builder = DerivationBuilder(w)
        while True:
            found = builder.current.occurrences(rule.lhs)
            if not found:
                return builder.build()
            builder.apply(Redex(rule.id, found[0], rule.lhs, rule.rhs))

    @staticmethod
    def case1_reduce(w: Word, budget: Optional[int] = None) -> Derivation:
        """
        Reduce w to its S-normal form the way the linear bound is argued: first
        rewrite every a^2 b to b a, then either fire an ACAC rule and collapse
        the zero, or move the rightmost b that precedes a c up to that c and
        remove it with BC.
        """
        logger.debug(f"case1_reduce({w})")
        s = builtin_system("S")
        budget = settings.CASE1_BUDGET_FACTOR * w.length + settings.CASE1_BUDGET_SLACK if budget is None else budget
        builder = DerivationBuilder(w)

        def step(redex: Redex) -> Word:
            if len(builder) >= budget:
                logger.warning(f"case1_reduce({w}) ran past its budget of {budget} steps")
                raise StepBudgetExceeded(f"case1_reduce({w}) exceeded {budget} steps", len(builder))
            return builder.apply(redex)

        try:
            if w.count("0"):
                for redex in _zero_steps(s, w):
                    step(redex)
                return builder.build()

            reverse_ba = s.instantiate("BA")
            while True:
                found = builder.current.occurrences(reverse_ba.rhs)
                if not found:
                    break
                step(Redex("BA", found[0], reverse_ba.lhs, reverse_ba.rhs, None, Direction.REVERSE))

            while True:
                current = builder.current
                acac = [r for r in RewritingService.find_redexes(s, current) if r.rule_id == "ACAC"]
                if acac:
                    step(acac[0])
                    for redex in _zero_steps(s, builder.current):
                        step(redex)
                    break

                dense = current.dense()
                last_c = dense.rfind("c")
                b_at = dense.rfind("b", 0, last_c) if last_c > 0 else -1
                if b_at < 0:
                    break
                while dense[b_at + 1] == "a":
                    dense = step(_forward(s, "BA", b_at)).dense()
                    b_at += 2
                step(_forward(s, "BC", b_at))

            while True:
                redexes = RewritingService.find_redexes(s, builder.current)
                if not redexes:
                    break
                step(redexes[0])
            return builder.build()
        except ThueKitError:
            raise
        except Exception as e:
            logger.error(f"Unexpected error in case1_reduce({w}): {e}", exc_info=True)
            raise ThueKitError("case1_reduce failed")

    @staticmethod
    def left_cancel_check(x: str, u: Word, v: Word) -> bool:
        """nf_U(xu) = nf_U(xv) implies nf_U(u) = nf_U(v)"""
        if x not in TEXT_SYMBOLS or not (u.symbols | v.symbols) <= set(TEXT_SYMBOLS):
            raise PreconditionError("left cancellation is checked over {a, b, c}")
        system = builtin_system("U")
        prefix = Word.from_dense(x)
        nf = RewritingService.normal_form
        if nf(system, prefix + u) != nf(system, prefix + v):
            return True
        return nf(system, u) == nf(system, v)

    # words without a regular cross-section

    @staticmethod
    def noregcs_word(q: int) -> Word:
        """a^{2^{2^{Q+1}-1}-2} c a^{2^{Q+1}-2} c a^Q c"""
        if not 1 <= q <= 30:
            raise PreconditionError("Q must lie in 1..30")
        inner = (1 << (q + 1)) - 2
        return Word((("a", (1 << (inner + 1)) - 2), ("c", 1), ("a", inner), ("c", 1), ("a", q), ("c", 1)))

    @staticmethod
    def pump_word(w: Word, run_index: int, delta: int) -> Word:
        runs = list(w.runs)
        if not 0 <= run_index < len(runs) or runs[run_index][0] != "a":
            raise PreconditionError(f"run {run_index} of {w} is not an a-run")
        if delta < 0:
            raise PreconditionError("delta must be non-negative")
        symbol, count = runs[run_index]
        runs[run_index] = (symbol, count + delta)
        return Word(runs)

    @staticmethod
    def threshold_implication(states: int, q: int, k: int) -> bool:
        """(N+1)(2^{k+1}-1) >= 2^{2^{Q+1}-1}-2  implies  k > N"""
        target = (1 << ((1 << (q + 1)) - 1)) - 2
        return (states + 1) * ((1 << (k + 1)) - 1) < target or k > states

    @staticmethod
    def noregcs_threshold(states: int) -> int:
        """Least Q for which the implication holds for every k."""
        if states < 1:
            raise PreconditionError("an automaton has at least one state")
        q = 1
        # the implication can only fail at k <= N, and is hardest at k = N
        while not PaperSystemsService.threshold_implication(states, q, states):
            q += 1
        return q
