from typing import Dict, List, Optional, Tuple

from thuekit.core.config import settings
from thuekit.core.exceptions import DerivationError, PreconditionError, ThueKitError
from thuekit.core.logging import logger
from thuekit.models.derivation import Derivation, DerivationBuilder, Direction, Redex
from thuekit.models.rule import Rule
from thuekit.models.system import RewritingSystem
from thuekit.models.word import Word
from thuekit.schemas.confluence import (
    ConfluenceSummary,
    CriticalPair,
    OverlapKind,
    ResolutionReport,
    RuleRef,
)
from thuekit.schemas.rewriting import Strategy
from thuekit.services.rewriting import RewritingService

ThetaTuple = Tuple[int, ...]

BLOCK_SYMBOLS = frozenset("ab")

# Measure each rule is certified against: length, count of b, or theta on the {a,b}-block
_MEASURES = {
    "BA": "theta",
    "BC": "b-count",
    "BAC": "b-count",
    "ACC": "length",
    "ACAC": "length",
    "AAB": "length",
}


def _measure_for(rule_id: str) -> Optional[str]:
    if rule_id in _MEASURES:
        return _MEASURES[rule_id]
    if rule_id.startswith(("ZL", "ZR")):
        return "length"
    return None


def _rule_instances(system: RewritingSystem, param_bound: int) -> List[Rule]:
    rules = list(system.finite_rules)
    for schema in system.schemas:
        rules.extend(schema.instances(param_bound))
    return rules


def _overlap_lengths(left: Word, right: Word) -> List[int]:
    """Lengths k of proper overlaps: a suffix of ``left`` equal to a prefix of ``right``.

    Works on runs so that long schema instances are never expanded.
    """
    lruns, rruns = left.runs, right.runs
    limit = min(left.length, right.length)
    found = []
    # overlap inside a single run
    (ls, le), (rs, re_) = lruns[-1], rruns[0]
    if ls == rs:
        found.extend(k for k in range(1, min(le, re_) + 1) if k < limit)
    for j in range(2, min(len(lruns), len(rruns)) + 1):
        head_symbol, head_len = lruns[-j]
        if rruns[0][0] != head_symbol or rruns[0][1] > head_len:
            continue
        if lruns[-j + 1:len(lruns) - 1] != rruns[1:j - 1]:
            continue
        tail_symbol, tail_len = lruns[-1]
        if rruns[j - 1][0] != tail_symbol or rruns[j - 1][1] < tail_len:
            continue
        k = sum(e for _, e in rruns[:j - 1]) + tail_len
        if k < limit:
            found.append(k)
    return sorted(set(found))


def _ref(rule: Rule, position: int) -> RuleRef:
    return RuleRef(rule=rule.id, param=rule.param, position=position)


def _redex(rule: Rule, position: int) -> Redex:
    return Redex(rule.id, position, rule.lhs, rule.rhs, rule.param)


def _block_at(word: Word, position: int) -> Word:
    """The maximal factor over {a, b} containing ``position``."""
    runs = word.runs
    starts = word._run_starts()
    index = next(i for i in range(len(runs) - 1, -1, -1) if starts[i] <= position)
    if runs[index][0] not in BLOCK_SYMBOLS:
        raise PreconditionError(f"position {position} of {word} is not inside an {{a,b}}-block")
    lo = hi = index
    while lo > 0 and runs[lo - 1][0] in BLOCK_SYMBOLS:
        lo -= 1
    while hi + 1 < len(runs) and runs[hi + 1][0] in BLOCK_SYMBOLS:
        hi += 1
    return Word(runs[lo:hi + 1])


class ConfluenceService:

    @staticmethod
    def enumerate_critical_pairs(system: RewritingSystem, param_bound: int) -> List[CriticalPair]:
        """
        All overlaps between rule left-hand sides, schema instances taken up to param_bound
        """
        logger.info(f"Enumerating critical pairs of {system.name} with params <= {param_bound}")

        for schema in system.schemas:
            if param_bound < schema.n_min:
                logger.warning(f"param_bound {param_bound} is below n_min of {schema.id}")
                raise PreconditionError(
                    f"param_bound {param_bound} is below the domain n>={schema.n_min} of {schema.id}"
                )

        rules = _rule_instances(system, param_bound)
        pairs: Dict[tuple, CriticalPair] = {}

        for first in rules:
            l1 = first.lhs
            for second in rules:
                l2 = second.lhs

                # l1 = xy, l2 = yz
                for k in _overlap_lengths(l1, l2):
                    shift = l1.length - k
                    source = l1 + l2.slice(k)
                    pair = CriticalPair(
                        source=source,
                        left_reduct=first.rhs + l2.slice(k),
                        right_reduct=l1.slice(0, shift) + second.rhs,
                        overlap_kind=OverlapKind.SUFFIX_PREFIX,
                        rules=(_ref(first, 0), _ref(second, shift)),
                    )
                    pairs.setdefault((source, pair.rules), pair)

                # l1 = x l2 y
                for at in l1.occurrences(l2):
                    if at == 0 and l1 == l2 and first.rhs == second.rhs:
                        continue
                    pair = CriticalPair(
                        source=l1,
                        left_reduct=first.rhs,
                        right_reduct=l1.replace(at, l2.length, second.rhs),
                        overlap_kind=OverlapKind.CONTAINMENT,
                        rules=(_ref(first, 0), _ref(second, at)),
                    )
                    pairs.setdefault((l1, pair.rules), pair)

        ordered = sorted(
            pairs.values(),
            key=lambda p: (p.source.shortlex_key(), p.rules[0].label, p.rules[1].label, p.rules[1].position),
        )
        logger.info(f"Found {len(ordered)} critical pairs in {system.name}")
        return ordered

    @staticmethod
    def resolve_critical_pair(
        system: RewritingSystem,
        pair: CriticalPair,
        max_steps: Optional[int] = None,
    ) -> ResolutionReport:
        """
        Reduce both reducts to normal form; the pair resolves when they meet
        """
        max_steps = settings.RESOLVE_MAX_STEPS if max_steps is None else max_steps
        if max_steps <= 0:
            raise PreconditionError("max_steps must be positive")

        sides = []
        for ref in pair.rules:
            rule = system.instantiate(ref.rule, ref.param)
            builder = DerivationBuilder(pair.source)
            builder.apply(_redex(rule, ref.position))
            _, tail = RewritingService.reduce_to_normal_form(
                system, builder.current, Strategy.LEFTMOST, max_steps=max_steps
            )
            builder.extend(tail)
            sides.append(builder.build())

        left, right = sides
        resolved = left.end == right.end
        if not resolved:
            logger.warning(
                f"Critical pair {pair.rules[0].label} x {pair.rules[1].label} on {pair.source} "
                f"does not resolve: {left.end} != {right.end}"
            )
        return ResolutionReport(
            pair=pair,
            resolved=resolved,
            common_word=left.end if resolved else None,
            left_normal_form=left.end,
            right_normal_form=right.end,
            derivations=(left, right),
        )

    @staticmethod
    def resolve_all(
        system: RewritingSystem,
        param_bound: int,
        max_steps: Optional[int] = None,
    ) -> List[ResolutionReport]:
        pairs = ConfluenceService.enumerate_critical_pairs(system, param_bound)
        return [ConfluenceService.resolve_critical_pair(system, p, max_steps) for p in pairs]

    @staticmethod
    def check_local_confluence(
        system: RewritingSystem,
        param_bound: int,
        max_steps: Optional[int] = None,
    ) -> ConfluenceSummary:
        logger.info(f"Checking local confluence of {system.name} (params <= {param_bound})")
        reports = ConfluenceService.resolve_all(system, param_bound, max_steps)
        unresolved = [r.pair for r in reports if not r.resolved]
        summary = ConfluenceSummary(
            system=system.name,
            param_bound=param_bound,
            pairs=len(reports),
            resolved=len(reports) - len(unresolved),
            unresolved=unresolved,
        )
        logger.info(f"{system.name}: {summary.resolved}/{summary.pairs} critical pairs resolve")
        return summary

    # theta ordering

    @staticmethod
    def theta_tuple(block: Word) -> ThetaTuple:
        """(d_{k+1}, ..., d_1) for a^{d_{k+1}} b a^{d_k} ... b a^{d_1}"""
        if not block.symbols <= BLOCK_SYMBOLS:
            raise PreconditionError(f"{block} is not a word over {{a,b}}")
        exponents = [0]
        for symbol, count in block.runs:
            if symbol == "a":
                exponents[-1] += count
            else:
                exponents.extend([0] * count)
        return tuple(exponents)

    @staticmethod
    def theta_block(exponents: ThetaTuple) -> Word:
        runs = [("a", exponents[0])]
        for d in exponents[1:]:
            runs.extend((("b", 1), ("a", d)))
        return Word(runs)

    @staticmethod
    def theta_less(x: ThetaTuple, y: ThetaTuple) -> bool:
        """x < y comparing d_1 first, then d_2, and so on; arities must agree."""
        if len(x) != len(y):
            raise PreconditionError(f"theta tuples of different arity: {len(x)} vs {len(y)}")
        for dx, dy in zip(reversed(x), reversed(y)):
            if dx != dy:
                return dx < dy
        return False

    @staticmethod
    def check_theta_decrease(before: Word, after: Word, step: Redex) -> bool:
        if step.rule_id != "BA" or step.direction != Direction.FORWARD:
            logger.warning(f"theta check asked for {step.label}")
            raise PreconditionError(f"{step.label} is not a forward BA application")
        old = ConfluenceService.theta_tuple(_block_at(before, step.position))
        new = ConfluenceService.theta_tuple(_block_at(after, step.position))
        if len(old) != len(new):
            return False
        return ConfluenceService.theta_less(new, old)

    @staticmethod
    def certify_termination_trace(system: RewritingSystem, d: Derivation) -> bool:
        """
        Check every step of a forward derivation against its termination measure
        """
        logger.info(f"Certifying termination trace of {d.length} steps under {system.name}")

        if not d.is_forward:
            logger.warning("Termination certificate requested for a derivation with reverse steps")
            raise PreconditionError("termination traces must use forward steps only")
        verdict = RewritingService.verify_derivation(system, d)
        if not verdict.valid:
            raise DerivationError(f"derivation fails verification at step {verdict.failed_step}: {verdict.reason}")

        try:
            words = list(d.words())
            for index, step in enumerate(d.steps):
                before, after = words[index], words[index + 1]
                measure = _measure_for(step.redex.rule_id)
                if measure == "length":
                    ok = after.length < before.length
                elif measure == "b-count":
                    ok = after.count("b") < before.count("b")
                elif measure == "theta":
                    ok = ConfluenceService.check_theta_decrease(before, after, step.redex)
                else:
                    logger.warning(f"No termination measure for rule {step.redex.rule_id}")
                    return False
                if not ok:
                    logger.warning(f"Step {index} ({step.redex}) does not decrease its {measure}")
                    return False
            return True
        except ThueKitError:
            raise
        except Exception as e:
            logger.error(f"Unexpected error certifying trace: {e}", exc_info=True)
            raise ThueKitError("termination certificate failed")
