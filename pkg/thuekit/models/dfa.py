from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Tuple

from thuekit.core.exceptions import DFAFormatError
from thuekit.models.word import Word


@dataclass(frozen=True)
class DFA:
    """Complete deterministic automaton; ``transitions[state][i]`` reads ``alphabet[i]``."""

    states: int
    alphabet: Tuple[str, ...]
    transitions: Tuple[Tuple[int, ...], ...]
    start: int
    accepting: FrozenSet[int]

    def __post_init__(self):
        if self.states < 1:
            raise DFAFormatError("a DFA needs at least one state")
        if not 0 <= self.start < self.states:
            raise DFAFormatError(f"start state {self.start} out of range")
        if len(self.transitions) != self.states:
            raise DFAFormatError("transition table does not cover every state")
        for state, row in enumerate(self.transitions):
            if len(row) != len(self.alphabet):
                raise DFAFormatError(f"state {state} lacks a transition")
            for target in row:
                if not 0 <= target < self.states:
                    raise DFAFormatError(f"state {state} has a transition to unknown state {target}")
        for state in self.accepting:
            if not 0 <= state < self.states:
                raise DFAFormatError(f"accepting state {state} out of range")

    @property
    def symbol_index(self) -> Dict[str, int]:
        return {s: i for i, s in enumerate(self.alphabet)}

    def step(self, state: int, symbol: str) -> Optional[int]:
        try:
            return self.transitions[state][self.alphabet.index(symbol)]
        except ValueError:
            return None

    def read_power(self, state: int, symbol: str, count: int) -> Optional[int]:
        """State after reading ``symbol^count``; long runs skip around the cycle."""
        seen: Dict[int, int] = {}
        trace: List[int] = []
        current = state
        for i in range(count):
            if current in seen:
                offset = seen[current]
                period = i - offset
                return trace[offset + (count - offset) % period]
            seen[current] = i
            trace.append(current)
            current = self.step(current, symbol)
            if current is None:
                return None
        return current

    def run(self, word: Word, state: Optional[int] = None) -> Optional[int]:
        current = self.start if state is None else state
        for symbol, count in word.runs:
            current = self.read_power(current, symbol, count)
            if current is None:
                return None
        return current

    def accepts(self, word: Word) -> bool:
        return self.run(word) in self.accepting

    def power_cycle(self, state: int, symbol: str, limit: int) -> Optional[Tuple[int, int]]:
        """First repetition while reading ``symbol`` from ``state``, within ``limit`` letters.

        Returns ``(offset, period)``: after ``offset`` letters the automaton
        enters a loop of length ``period`` (so ``period <= states``).
        """
        seen: Dict[int, int] = {}
        current = state
        for i in range(limit + 1):
            if current in seen:
                return seen[current], i - seen[current]
            seen[current] = i
            current = self.step(current, symbol)
            if current is None:
                return None
        return None

    def reachable(self) -> List[int]:
        order = [self.start]
        seen = {self.start}
        for state in order:
            for target in self.transitions[state]:
                if target not in seen:
                    seen.add(target)
                    order.append(target)
        return order

    def live_states(self) -> FrozenSet[int]:
        """States from which some accepting state is reachable."""
        live = set(self.accepting)
        changed = True
        while changed:
            changed = False
            for state, row in enumerate(self.transitions):
                if state not in live and any(t in live for t in row):
                    live.add(state)
                    changed = True
        return frozenset(live)
