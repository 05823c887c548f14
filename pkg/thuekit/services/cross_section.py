from collections import deque
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from thuekit.core.exceptions import DFAFormatError, PreconditionError, ThueKitError
from thuekit.core.logging import logger
from thuekit.models.derivation import Direction, Redex
from thuekit.models.dfa import DFA
from thuekit.models.system import RewritingSystem
from thuekit.models.word import Word, enumerate_words
from thuekit.schemas.cross_section import CrossSectionReport, DuplicatePair, Verdict, Violation
from thuekit.services.paper import PaperSystemsService
from thuekit.services.rewriting import RewritingService
from thuekit.services.systems import builtin_system
from thuekit.utils.syntax import strip_comment

DFA_SYMBOLS = ("a", "b", "c", "0")
ZERO = Word.from_dense("0")


def _header(line: str, key: str) -> Optional[str]:
    name, sep, rest = line.partition(":")
    if sep and name.strip() == key:
        return rest.strip()
    return None


def _int(text: str, number: int) -> int:
    try:
        return int(text)
    except ValueError:
        raise DFAFormatError(f"expected a state index, got {text!r}", number)


def _nf_s(w: Word) -> Word:
    return RewritingService.normal_form(builtin_system("S"), w)


class CrossSectionService:

    @staticmethod
    def load_dfa(text: str) -> DFA:
        """Parse ``states:``, ``start:``, ``accept:``, optional ``alphabet:`` (default ``a b c 0``) and ``i sym j`` lines"""
        states = start = None
        accepting: List[int] = []
        alphabet: Optional[Tuple[str, ...]] = None
        edges: Dict[Tuple[int, str], int] = {}

        for number, raw in enumerate(text.splitlines(), start=1):
            line = strip_comment(raw)
            if not line:
                continue
            if (value := _header(line, "states")) is not None:
                states = _int(value, number)
            elif (value := _header(line, "start")) is not None:
                start = _int(value, number)
            elif (value := _header(line, "accept")) is not None:
                accepting = [_int(part, number) for part in value.split()]
            elif (value := _header(line, "alphabet")) is not None:
                alphabet = tuple(value.split())
            else:
                parts = line.split()
                if len(parts) != 3:
                    raise DFAFormatError(f"expected 'state symbol state', got {raw.strip()!r}", number)
                source, symbol, target = _int(parts[0], number), parts[1], _int(parts[2], number)
                if symbol not in DFA_SYMBOLS or (alphabet is not None and symbol not in alphabet):
                    raise DFAFormatError(f"unknown symbol {symbol!r}", number)
                if states is not None and not (0 <= source < states and 0 <= target < states):
                    raise DFAFormatError(f"state index out of range in {raw.strip()!r}", number)
                if edges.get((source, symbol), target) != target:
                    raise DFAFormatError(f"conflicting transitions for state {source} on {symbol!r}", number)
                edges[(source, symbol)] = target

        if states is None or start is None:
            raise DFAFormatError("DFA files need 'states:' and 'start:' lines")
        if alphabet is None:
            alphabet = DFA_SYMBOLS
        for symbol in alphabet:
            if symbol not in DFA_SYMBOLS:
                raise DFAFormatError(f"unknown symbol {symbol!r}")

        rows = []
        for state in range(states):
            row = []
            for symbol in alphabet:
                if (state, symbol) not in edges:
                    logger.warning(f"DFA state {state} has no transition on {symbol!r}")
                    raise DFAFormatError(f"state {state} lacks a transition on {symbol!r}")
                row.append(edges[(state, symbol)])
            rows.append(tuple(row))
        return DFA(states, alphabet, tuple(rows), start, frozenset(accepting))

    @staticmethod
    def dump_dfa(dfa: DFA) -> str:
        lines = [
            f"states: {dfa.states}",
            f"start: {dfa.start}",
            f"accept: {' '.join(str(s) for s in sorted(dfa.accepting))}".rstrip(),
            f"alphabet: {' '.join(dfa.alphabet)}",
        ]
        for state, row in enumerate(dfa.transitions):
            for symbol, target in zip(dfa.alphabet, row):
                lines.append(f"{state} {symbol} {target}")
        return "\n".join(lines) + "\n"

    @staticmethod
    def minimize_dfa(dfa: DFA) -> DFA:
        """Moore partition refinement over the reachable part, renumbered breadth-first."""
        reachable = dfa.reachable()
        block = {s: int(s in dfa.accepting) for s in reachable}
        while True:
            signatures: Dict[tuple, int] = {}
            refined = {}
            for s in reachable:
                key = (block[s],) + tuple(block[t] for t in dfa.transitions[s])
                refined[s] = signatures.setdefault(key, len(signatures))
            if len(signatures) == len(set(block.values())):
                block = refined
                break
            block = refined

        order: Dict[int, int] = {}
        queue = deque([block[dfa.start]])
        order[block[dfa.start]] = 0
        representative = {}
        for s in reachable:
            representative.setdefault(block[s], s)
        rows: Dict[int, Tuple[int, ...]] = {}
        while queue:
            b = queue.popleft()
            targets = []
            for t in dfa.transitions[representative[b]]:
                tb = block[t]
                if tb not in order:
                    order[tb] = len(order)
                    queue.append(tb)
                targets.append(order[tb])
            rows[order[b]] = tuple(targets)

        accepting = frozenset(order[block[s]] for s in reachable if s in dfa.accepting)
        return DFA(len(order), dfa.alphabet, tuple(rows[i] for i in range(len(order))), 0, accepting)

    @staticmethod
    def irreducibles_dfa(system: RewritingSystem) -> DFA:
        """
        Automaton of the words avoiding every left-hand side of a finite system
        (Aho-Corasick trie, minimised)
        """
        logger.info(f"Building irreducibles DFA for {system.name}")
        if system.schemas:
            raise PreconditionError(f"{system.name} has rule schemas; only finite systems have this automaton")

        alphabet = system.alphabet
        children: List[Dict[str, int]] = [{}]
        bad = [False]
        for rule in system.finite_rules:
            node = 0
            for symbol in rule.lhs.dense():
                if symbol not in children[node]:
                    children.append({})
                    bad.append(False)
                    children[node][symbol] = len(children) - 1
                node = children[node][symbol]
            bad[node] = True

        fail = [0] * len(children)
        delta: List[Dict[str, int]] = [dict() for _ in children]
        queue = deque([0])
        while queue:
            node = queue.popleft()
            for symbol in alphabet:
                child = children[node].get(symbol)
                if child is not None:
                    fail[child] = delta[fail[node]][symbol] if node else 0
                    bad[child] = bad[child] or bad[fail[child]]
                    delta[node][symbol] = child
                    queue.append(child)
                else:
                    delta[node][symbol] = delta[fail[node]][symbol] if node else 0

        dead = len(children)
        rows = []
        for node in range(len(children)):
            if bad[node]:
                rows.append(tuple(dead for _ in alphabet))
            else:
                rows.append(tuple(dead if bad[delta[node][s]] else delta[node][s] for s in alphabet))
        rows.append(tuple(dead for _ in alphabet))
        accepting = frozenset(n for n in range(len(children)) if not bad[n])
        raw = DFA(len(rows), tuple(alphabet), tuple(rows), 0, accepting)
        return CrossSectionService.minimize_dfa(raw)

    @staticmethod
    def finite_language_dfa(words: Iterable[Word], alphabet: Sequence[str]) -> DFA:
        alphabet = tuple(alphabet)
        children: List[Dict[str, int]] = [{}]
        accepting = set()
        for word in words:
            node = 0
            for symbol in word.dense():
                if symbol not in alphabet:
                    raise PreconditionError(f"{word} uses {symbol!r}, outside the alphabet")
                if symbol not in children[node]:
                    children.append({})
                    children[node][symbol] = len(children) - 1
                node = children[node][symbol]
            accepting.add(node)
        dead = len(children)
        rows = [tuple(c.get(s, dead) for s in alphabet) for c in children]
        rows.append(tuple(dead for _ in alphabet))
        raw = DFA(len(rows), alphabet, tuple(rows), 0, frozenset(accepting))
        return CrossSectionService.minimize_dfa(raw)

    @staticmethod
    def accepted_words(dfa: DFA, max_length: int) -> Iterator[Word]:
        """Accepted words of length <= max_length, shortlex in alphabet order."""
        # can_finish[r]: states that reach acceptance in exactly r more symbols
        can_finish = [frozenset(dfa.accepting)]
        for _ in range(max_length):
            previous = can_finish[-1]
            can_finish.append(frozenset(
                s for s, row in enumerate(dfa.transitions) if any(t in previous for t in row)
            ))

        def walk(state: int, remaining: int, prefix: List[str]):
            if remaining == 0:
                yield Word.from_dense("".join(prefix))
                return
            for symbol, target in zip(dfa.alphabet, dfa.transitions[state]):
                if target in can_finish[remaining - 1]:
                    prefix.append(symbol)
                    yield from walk(target, remaining - 1, prefix)
                    prefix.pop()

        for length in range(max_length + 1):
            if dfa.start in can_finish[length]:
                yield from walk(dfa.start, length, [])

    @staticmethod
    def check_cross_section(dfa: DFA, horizon: int) -> CrossSectionReport:
        """
        Group the accepted words up to the horizon by S-normal form; two in one
        class refute the candidate
        """
        logger.info(f"Checking a {dfa.states}-state DFA as a cross-section up to length {horizon}")
        if horizon < 0:
            raise PreconditionError("horizon must be non-negative")

        try:
            classes: Dict[Word, List[Word]] = {}
            accepted = 0
            for word in CrossSectionService.accepted_words(dfa, horizon):
                accepted += 1
                classes.setdefault(_nf_s(word), []).append(word)

            duplicates = []
            for normal, members in classes.items():
                if len(members) < 2:
                    continue
                first, second = members[0], members[1]
                if not (dfa.accepts(first) and dfa.accepts(second) and _nf_s(first) == _nf_s(second)):
                    raise ThueKitError(f"duplicate {first}, {second} failed re-verification")
                duplicates.append(DuplicatePair(first=first, second=second, normal_form=normal))
            duplicates.sort(key=lambda d: (d.first.shortlex_key(), d.second.shortlex_key()))

            s = builtin_system("S")
            unreached = [
                w for w in enumerate_words(s.alphabet, max(horizon - 2, -1))
                if w not in classes and RewritingService.is_irreducible(s, w)
            ]
            verdict = Verdict.REFUTED if duplicates else Verdict.CONSISTENT
            logger.info(f"Cross-section check: {verdict.value}, {len(duplicates)} duplicate classes")
            return CrossSectionReport(
                horizon=horizon,
                accepted=accepted,
                duplicates=duplicates,
                unreached_classes=unreached,
                verdict=verdict,
            )
        except ThueKitError:
            raise
        except Exception as e:
            logger.error(f"Unexpected error in check_cross_section: {e}", exc_info=True)
            raise ThueKitError("cross-section check failed")

    @staticmethod
    def class_preimages(u: Word, limit: int) -> List[Word]:
        """Words reducing to the S-irreducible, 0-free u, found by undoing BA and BC (at most ``limit``)."""
        s = builtin_system("S")
        undo = [s.instantiate("BA"), s.instantiate("BC")]
        seen = {u}
        order = [u]
        for word in order:
            for rule in undo:
                for at in word.occurrences(rule.rhs):
                    previous = Redex(rule.id, at, rule.lhs, rule.rhs, None, Direction.REVERSE).apply(word)
                    if previous not in seen and len(seen) < limit:
                        seen.add(previous)
                        order.append(previous)
        return sorted(order)

    @staticmethod
    def pumping_falsifier(
        dfa: DFA,
        q: int,
        samples: int = 2000,
        pumps: int = 8,
        fallback_length: int = 6,
    ) -> Optional[Violation]:
        """
        Look for two accepted words in the class of 0.

        Accepted words of the class of noregcs_word(Q) are pumped inside every
        a-run along a cycle of the automaton; pumped words stay accepted and
        fall into the class of 0. If that finds nothing, the accepted words up
        to ``fallback_length`` are searched for two members of the 0 class.
        """
        logger.info(f"Pumping falsifier on a {dfa.states}-state DFA, Q={q}")
        if not 1 <= q <= 3:
            raise PreconditionError("Q must be 1, 2 or 3")

        def violation(first, second, **extra) -> Violation:
            if first == second or not (dfa.accepts(first) and dfa.accepts(second)):
                raise ThueKitError(f"pumped pair {first}, {second} failed re-verification")
            if not (_nf_s(first) == _nf_s(second) == ZERO):
                raise ThueKitError(f"pumped pair {first}, {second} is not in the class of 0")
            return Violation(first=first, second=second, normal_form=ZERO, **extra)

        u = PaperSystemsService.noregcs_word(q)
        if set(u.symbols) <= set(dfa.alphabet):
            for base in CrossSectionService.class_preimages(u, samples):
                if not dfa.accepts(base):
                    continue
                for index, (symbol, count) in enumerate(base.runs):
                    if symbol != "a":
                        continue
                    before = dfa.run(base.slice(0, sum(e for _, e in base.runs[:index])))
                    cycle = dfa.power_cycle(before, "a", dfa.states)
                    if cycle is None:
                        continue
                    offset, period = cycle
                    if count < offset:
                        continue
                    collapsed = []
                    for j in range(1, pumps + 1):
                        pumped = PaperSystemsService.pump_word(base, index, j * period)
                        if not dfa.accepts(pumped):
                            raise ThueKitError(f"pumping {base} along a cycle left the language")
                        if _nf_s(pumped) == ZERO:
                            collapsed.append(pumped)
                        if len(collapsed) == 2:
                            logger.info(f"Violation from {base}, run {index}, pump length {period}")
                            return violation(
                                collapsed[0], collapsed[1],
                                base=base, run_index=index, pump_length=period,
                            )

        zero_class = []
        for word in CrossSectionService.accepted_words(dfa, fallback_length):
            if _nf_s(word) == ZERO:
                zero_class.append(word)
                if len(zero_class) == 2:
                    return violation(zero_class[0], zero_class[1])
        logger.info("Pumping falsifier found no violation")
        return None
