import hashlib
from bisect import bisect_right
from itertools import groupby, product
from typing import Iterable, List, Optional, Sequence, Tuple

from pydantic_core import core_schema

from thuekit.core.config import settings
from thuekit.core.exceptions import DenseCapExceeded, ThueKitError
from thuekit.utils.syntax import check_symbols, split_runs

Run = Tuple[str, int]

# Below this dense length matching goes through str.find instead of run arithmetic
_DENSE_FAST = 64


class Word:
    """Run-length-encoded word with arbitrary-precision exponents.

    Instances are immutable and hashable; adjacent runs always carry
    distinct symbols and no run has exponent 0.
    """

    __slots__ = ("_runs", "_length", "_hash", "_dense", "_starts")

    def __init__(self, runs: Iterable[Run] = ()):
        merged: List[List] = []
        for symbol, exponent in runs:
            if not isinstance(exponent, int) or exponent < 0:
                raise ThueKitError(f"invalid exponent {exponent!r} for {symbol!r}")
            if exponent == 0:
                continue
            if merged and merged[-1][0] == symbol:
                merged[-1][1] += exponent
            else:
                merged.append([symbol, exponent])
        self._runs: Tuple[Run, ...] = tuple((s, e) for s, e in merged)
        self._length = sum(e for _, e in self._runs)
        self._hash = hash(self._runs)
        self._dense: Optional[str] = None
        self._starts: Optional[Tuple[int, ...]] = None

    # construction

    @classmethod
    def from_dense(cls, text: str) -> "Word":
        word = cls((symbol, len(list(group))) for symbol, group in groupby(text))
        word._dense = text
        return word

    @classmethod
    def parse(cls, text: str, alphabet: Optional[Sequence[str]] = None) -> "Word":
        """Parse dense (``aaacac``) or RLE (``a^3 c a c``) syntax."""
        pairs = split_runs(text)
        if alphabet is not None:
            check_symbols((s for s, _ in pairs), alphabet)
        runs = []
        for symbol, exponent in pairs:
            if exponent is None:
                runs.append((symbol, 1))
            elif exponent.isdigit():
                runs.append((symbol, int(exponent)))
            else:
                raise ThueKitError(f"word exponents must be integers, got {exponent!r}")
        return cls(runs)

    @classmethod
    def empty(cls) -> "Word":
        return _EMPTY

    # basic accessors

    @property
    def runs(self) -> Tuple[Run, ...]:
        return self._runs

    @property
    def length(self) -> int:
        return self._length

    @property
    def symbols(self) -> frozenset:
        return frozenset(s for s, _ in self._runs)

    def is_empty(self) -> bool:
        return not self._runs

    def count(self, symbol: str) -> int:
        return sum(e for s, e in self._runs if s == symbol)

    def dense(self, cap: Optional[int] = None) -> str:
        if self._dense is None:
            cap = settings.DENSE_CAP if cap is None else cap
            if self._length > cap:
                raise DenseCapExceeded(self._length, cap)
            self._dense = "".join(s * e for s, e in self._runs)
        return self._dense

    def digest(self) -> str:
        return hashlib.blake2b(str(self).encode("utf-8"), digest_size=8).hexdigest()

    def shortlex_key(self):
        if self._length <= 4096:
            return (self._length, self.dense())
        return (self._length, str(self))

    # structure

    def _run_starts(self) -> Tuple[int, ...]:
        if self._starts is None:
            starts = []
            total = 0
            for _, e in self._runs:
                starts.append(total)
                total += e
            self._starts = tuple(starts)
        return self._starts

    def slice(self, start: int, stop: Optional[int] = None) -> "Word":
        """Factor between dense positions ``start`` and ``stop``."""
        stop = self._length if stop is None else stop
        start = max(0, start)
        stop = min(self._length, stop)
        if start >= stop:
            return _EMPTY
        if start == 0 and stop == self._length:
            return self
        if self._dense is not None:
            return Word.from_dense(self._dense[start:stop])
        starts = self._run_starts()
        i = bisect_right(starts, start) - 1
        runs = []
        while i < len(self._runs) and starts[i] < stop:
            symbol, exponent = self._runs[i]
            lo = max(start, starts[i])
            hi = min(stop, starts[i] + exponent)
            runs.append((symbol, hi - lo))
            i += 1
        return Word(runs)

    def __add__(self, other: "Word") -> "Word":
        if not isinstance(other, Word):
            return NotImplemented
        if not other._runs:
            return self
        if not self._runs:
            return other
        word = Word(self._runs + other._runs)
        if self._dense is not None and other._dense is not None:
            word._dense = self._dense + other._dense
        return word

    def replace(self, position: int, length: int, replacement: "Word") -> "Word":
        return self.slice(0, position) + replacement + self.slice(position + length)

    def occurs_at(self, pattern: "Word", position: int) -> bool:
        if position < 0 or position + pattern._length > self._length:
            return False
        return self.slice(position, position + pattern._length) == pattern

    def occurrences(self, pattern: "Word") -> List[int]:
        """All dense start positions of ``pattern`` (overlaps included)."""
        if not pattern._runs:
            return list(range(self._length + 1))
        if pattern._length > self._length:
            return []
        if self._length <= _DENSE_FAST:
            text, needle = self.dense(), pattern.dense()
            found = []
            at = text.find(needle)
            while at != -1:
                found.append(at)
                at = text.find(needle, at + 1)
            return found
        return self._run_occurrences(pattern)

    def _run_occurrences(self, pattern: "Word") -> List[int]:
        runs, starts = self._runs, self._run_starts()
        prun = pattern._runs
        k = len(prun)
        found: List[int] = []
        if k == 1:
            symbol, need = prun[0]
            for (s, e), at in zip(runs, starts):
                if s == symbol and e >= need:
                    found.extend(range(at, at + e - need + 1))
            return found
        first_symbol, first_need = prun[0]
        last_symbol, last_need = prun[-1]
        for i in range(len(runs) - k + 1):
            s, e = runs[i]
            if s != first_symbol or e < first_need:
                continue
            if runs[i + k - 1][0] != last_symbol or runs[i + k - 1][1] < last_need:
                continue
            if runs[i + 1:i + k - 1] != prun[1:-1]:
                continue
            found.append(starts[i] + e - first_need)
        return found

    # dunder protocol

    def __eq__(self, other) -> bool:
        if not isinstance(other, Word):
            return NotImplemented
        return self._hash == other._hash and self._runs == other._runs

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "Word") -> bool:
        return self.shortlex_key() < other.shortlex_key()

    def __str__(self) -> str:
        if not self._runs:
            return "ε"
        return " ".join(s if e == 1 else f"{s}^{e}" for s, e in self._runs)

    def __repr__(self) -> str:
        return f"Word({str(self)!r})"

    # pydantic integration: words travel as their RLE text

    @classmethod
    def __get_pydantic_core_schema__(cls, source_type, handler):
        def validate(value):
            if isinstance(value, Word):
                return value
            if isinstance(value, str):
                try:
                    return cls.parse(value)
                except ThueKitError as e:
                    raise ValueError(e.detail)
            raise ValueError(f"cannot build a word from {type(value).__name__}")

        return core_schema.no_info_plain_validator_function(
            validate,
            serialization=core_schema.plain_serializer_function_ser_schema(str),
        )

    @classmethod
    def __get_pydantic_json_schema__(cls, schema, handler):
        return {"type": "string", "examples": ["a^3 c a^2", "bbc"]}


_EMPTY = Word()


def words_of_length(alphabet: Sequence[str], length: int):
    """Dense words of exactly ``length`` symbols, in lexicographic order."""
    if length == 0:
        yield _EMPTY
        return
    for letters in product(alphabet, repeat=length):
        yield Word.from_dense("".join(letters))


def enumerate_words(alphabet: Sequence[str], max_length: int, min_length: int = 0):
    """Every word of length in ``[min_length, max_length]``, shortlex order."""
    for length in range(min_length, max_length + 1):
        yield from words_of_length(alphabet, length)
