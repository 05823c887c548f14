import random
import re
from typing import List, Optional, Sequence, Tuple, Union

from thuekit.core.config import settings
from thuekit.core.exceptions import (
    ExponentFormError,
    RedexMismatchError,
    StepBudgetExceeded,
    SystemSyntaxError,
    ThueKitError,
    UnknownSymbolError,
)
from thuekit.core.logging import logger
from thuekit.models.derivation import Derivation, DerivationBuilder, Direction, Redex
from thuekit.models.rule import ExponentExpr, Rule, RuleSchema
from thuekit.models.system import RewritingSystem
from thuekit.models.word import Word
from thuekit.schemas.rewriting import Strategy, VerificationResult
from thuekit.utils.syntax import check_symbols, split_runs, strip_comment

_SCHEMA_CLAUSE = re.compile(r"\s+for\s+n\s*(?:>=|≥)\s*(\d+)\s*$")
_LABEL = re.compile(r"^([A-Za-z_][\w']*)\s*:\s*(.*)$")
_ALPHABET = re.compile(r"^alphabet\s*:\s*(.*)$")


def _auto_id(pairs) -> str:
    letters = []
    for symbol, exponent in pairs:
        repeat = int(exponent) if exponent and exponent.isdigit() and int(exponent) <= 4 else 1
        letters.append(symbol.upper() * repeat)
    return "".join(letters) or "EPS"


class RewritingService:

    @staticmethod
    def parse_system(text: str, name: str = "custom") -> RewritingSystem:
        """Parse the line-based system file format"""
        logger.info(f"Parsing system {name} ({len(text.splitlines())} lines)")

        alphabet: Optional[Tuple[str, ...]] = None
        rules: List[Rule] = []
        schemas: List[RuleSchema] = []
        used_ids = set()

        for number, raw in enumerate(text.splitlines(), start=1):
            line = strip_comment(raw)
            if not line:
                continue

            if alphabet is None:
                match = _ALPHABET.match(line)
                if not match:
                    logger.warning(f"System {name}: missing alphabet line")
                    raise SystemSyntaxError("first line must be 'alphabet: <symbols>'", number)
                alphabet = tuple(match.group(1).split())
                if not alphabet:
                    raise SystemSyntaxError("alphabet is empty", number)
                continue

            label = None
            labelled = _LABEL.match(line)
            if labelled and "->" in labelled.group(2):
                label, line = labelled.group(1), labelled.group(2)

            if line.count("->") != 1:
                raise SystemSyntaxError(f"expected 'LHS -> RHS', got {raw.strip()!r}", number)
            lhs_text, rhs_text = (part.strip() for part in line.split("->"))

            clause = _SCHEMA_CLAUSE.search(" " + rhs_text)
            n_min = None
            if clause:
                n_min = int(clause.group(1))
                rhs_text = _SCHEMA_CLAUSE.sub("", " " + rhs_text).strip()

            lhs_pairs = split_runs(lhs_text, number)
            rhs_pairs = split_runs(rhs_text, number)
            check_symbols((s for s, _ in lhs_pairs + rhs_pairs), alphabet, number)
            if not lhs_pairs:
                raise SystemSyntaxError("left-hand side must be non-empty", number)

            rule_id = label or _auto_id(lhs_pairs)
            if rule_id in used_ids:
                if label:
                    raise SystemSyntaxError(f"duplicate rule id {rule_id!r}", number)
                suffix = 2
                while f"{rule_id}_{suffix}" in used_ids:
                    suffix += 1
                rule_id = f"{rule_id}_{suffix}"
            used_ids.add(rule_id)

            try:
                lhs_pattern = tuple((s, _exponent(e)) for s, e in lhs_pairs)
                rhs_pattern = tuple((s, _exponent(e)) for s, e in rhs_pairs)
                symbolic = any(not e.is_constant for _, e in lhs_pattern + rhs_pattern)
                if symbolic or n_min is not None:
                    if n_min is None:
                        raise SystemSyntaxError("schema lines need a 'for n>=K' clause", number)
                    schemas.append(RuleSchema(rule_id, lhs_pattern, rhs_pattern, n_min))
                else:
                    rules.append(Rule(
                        rule_id,
                        Word((s, e(0)) for s, e in lhs_pattern),
                        Word((s, e(0)) for s, e in rhs_pattern),
                    ))
            except ExponentFormError as e:
                logger.warning(f"System {name}: bad exponent on line {number}: {e.detail}")
                raise ExponentFormError(f"line {number}: {e.detail}")

        if alphabet is None:
            raise SystemSyntaxError("empty system file: missing alphabet line", 1)

        system = RewritingSystem(alphabet, tuple(rules), tuple(schemas), name=name)
        logger.info(f"Parsed {system}")
        return system

    @staticmethod
    def format_system(system: RewritingSystem) -> str:
        """Render a system in the file format parse_system reads"""
        lines = [f"alphabet: {' '.join(system.alphabet)}"]
        for rule in system.finite_rules:
            lines.append(f"{rule.id}: {_dense_or_rle(rule.lhs)} -> {_dense_or_rle(rule.rhs)}")
        for schema in system.schemas:
            lines.append(f"{schema.id}: {schema}")
        return "\n".join(lines) + "\n"

    @staticmethod
    def parse_word(text: str, system: Optional[RewritingSystem] = None) -> Word:
        alphabet = system.alphabet if system is not None else None
        return Word.parse(text, alphabet)

    @staticmethod
    def format_word(w: Word, dense: bool = False) -> str:
        if dense and not w.is_empty():
            return w.dense()
        return str(w)

    @staticmethod
    def find_redexes(
        system: RewritingSystem,
        w: Word,
        include_reverse: bool = False,
        param_cap: Optional[int] = None,
    ) -> List[Redex]:
        """Every redex of w, ordered by (position, rule id, param)"""
        check_symbols(w.symbols, system.alphabet)
        param_cap = settings.PARAM_CAP if param_cap is None else param_cap

        found: List[Redex] = []
        for rule in system.finite_rules:
            for at in w.occurrences(rule.lhs):
                found.append(Redex(rule.id, at, rule.lhs, rule.rhs))
        for schema in system.schemas:
            for n, at in schema.match_lhs(w):
                rule = schema.instantiate(n)
                found.append(Redex(schema.id, at, rule.lhs, rule.rhs, n))

        if include_reverse:
            for rule in system.finite_rules:
                for at in w.occurrences(rule.rhs):
                    found.append(Redex(rule.id, at, rule.lhs, rule.rhs, None, Direction.REVERSE))
            for schema in system.schemas:
                for n in range(schema.n_min, param_cap + 1):
                    rule = schema.instantiate(n)
                    for at in w.occurrences(rule.rhs):
                        found.append(Redex(schema.id, at, rule.lhs, rule.rhs, n, Direction.REVERSE))

        found.sort(key=Redex.sort_key)
        logger.debug(f"{len(found)} redexes in {w} under {system.name}")
        return found

    @staticmethod
    def apply_redex(w: Word, r: Redex) -> Word:
        return r.apply(w)

    @staticmethod
    def is_irreducible(system: RewritingSystem, w: Word) -> bool:
        return not RewritingService.find_redexes(system, w)

    @staticmethod
    def reduce_to_normal_form(
        system: RewritingSystem,
        w: Word,
        strategy: Union[Strategy, str] = Strategy.LEFTMOST,
        seed: Optional[int] = None,
        max_steps: Optional[int] = None,
    ) -> Tuple[Word, Derivation]:
        """Forward reduction until no redex is left"""
        strategy = Strategy(strategy)
        max_steps = settings.MAX_STEPS if max_steps is None else max_steps
        if max_steps <= 0:
            raise ThueKitError("max_steps must be positive")
        rng = random.Random(settings.DEFAULT_SEED if seed is None else seed)

        builder = DerivationBuilder(w)
        while True:
            redexes = RewritingService.find_redexes(system, builder.current)
            if not redexes:
                break
            if len(builder) >= max_steps:
                logger.warning(f"Step budget {max_steps} exhausted reducing {w} under {system.name}")
                raise StepBudgetExceeded(
                    f"no normal form of {w} within {max_steps} steps under {system.name}", len(builder)
                )
            builder.apply(_choose(redexes, strategy, rng))

        derivation = builder.build()
        logger.debug(f"{w} -> {derivation.end} in {derivation.length} steps ({strategy.value})")
        return derivation.end, derivation

    @staticmethod
    def normal_form(system: RewritingSystem, w: Word, max_steps: Optional[int] = None) -> Word:
        """Leftmost normal form, memoised on the system"""
        cached = system.normal_forms.get(w)
        if cached is not None:
            return cached
        normal, _ = RewritingService.reduce_to_normal_form(system, w, Strategy.LEFTMOST, max_steps=max_steps)
        if len(system.normal_forms) < 500_000:
            system.normal_forms[w] = normal
        return normal

    @staticmethod
    def verify_derivation(system: RewritingSystem, d: Derivation) -> VerificationResult:
        """Replay every step; report the first one that is not a legal application"""
        try:
            check_symbols(d.start.symbols, system.alphabet)
        except UnknownSymbolError as e:
            return VerificationResult(valid=False, failed_step=0, reason=e.detail)

        current = d.start
        for index, step in enumerate(d.steps):
            redex = step.redex
            if not system.has_rule(redex.rule_id):
                return VerificationResult(valid=False, failed_step=index, reason=f"unknown rule {redex.rule_id}")
            try:
                rule = system.instantiate(redex.rule_id, redex.param)
            except ThueKitError as e:
                return VerificationResult(valid=False, failed_step=index, reason=e.detail)
            if rule.lhs != redex.lhs or rule.rhs != redex.rhs:
                return VerificationResult(
                    valid=False, failed_step=index, reason=f"{redex.label} is not an instance of {rule.id}"
                )
            try:
                current = redex.apply(current)
            except RedexMismatchError as e:
                return VerificationResult(valid=False, failed_step=index, reason=e.detail)
            if current.digest() != step.digest:
                return VerificationResult(valid=False, failed_step=index, reason="intermediate word does not chain")

        if current != d.end:
            return VerificationResult(valid=False, failed_step=len(d.steps), reason=f"ends at {current}, not {d.end}")
        return VerificationResult(valid=True)


def _exponent(text: Optional[str]) -> ExponentExpr:
    if text is None:
        return ExponentExpr.constant(1)
    if text.isdigit():
        return ExponentExpr.constant(int(text))
    return ExponentExpr.parse(text)


def _dense_or_rle(word: Word) -> str:
    if word.is_empty():
        return "ε"
    if word.length <= 16:
        return word.dense()
    return str(word)


def _choose(redexes: Sequence[Redex], strategy: Strategy, rng: random.Random) -> Redex:
    if strategy == Strategy.LEFTMOST:
        return redexes[0]
    if strategy == Strategy.RIGHTMOST:
        last = redexes[-1].position
        return next(r for r in redexes if r.position == last)
    return rng.choice(redexes)
