import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from thuekit.core.exceptions import ExponentFormError, ThueKitError
from thuekit.models.word import Word

_TOKEN = re.compile(r"\s*(?:(\d+)|(n)|(.))")


def _least_with(value_at: Callable[[int], int], target: int, lo: int) -> int:
    """Least n >= lo with value_at(n) >= target, for non-decreasing unbounded value_at."""
    if value_at(lo) >= target:
        return lo
    step = 1
    hi = lo + step
    while value_at(hi) < target:
        lo = hi
        step *= 2
        hi = lo + step
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if value_at(mid) >= target:
            hi = mid
        else:
            lo = mid
    return hi


@dataclass(frozen=True)
class ExponentExpr:
    """c0 + c1*n + c2 * 2^(c3*n + c4), evaluated exactly."""

    c0: int = 0
    c1: int = 0
    c2: int = 0
    c3: int = 0
    c4: int = 0
    text: str = field(default="", compare=False)

    @classmethod
    def constant(cls, value: int) -> "ExponentExpr":
        return cls(c0=value, text=str(value))

    @classmethod
    def parse(cls, text: str) -> "ExponentExpr":
        return _ExprParser(text).parse()

    def __call__(self, n: int) -> int:
        value = self.c0 + self.c1 * n
        if self.c2:
            value += self.c2 * (1 << (self.c3 * n + self.c4))
        return value

    @property
    def is_constant(self) -> bool:
        return self.c1 == 0 and (self.c2 == 0 or self.c3 == 0)

    def validate(self, n_min: int) -> None:
        if self.c1 < 0 or self.c2 < 0 or self.c3 < 0:
            raise ExponentFormError(f"exponent {self} must be non-decreasing in n")
        if self.c2 and self.c3 * n_min + self.c4 < 0:
            raise ExponentFormError(f"exponent {self} is fractional at n={n_min}")
        if self(n_min) < 0:
            raise ExponentFormError(f"exponent {self} is negative at n={n_min}")

    def __str__(self) -> str:
        if self.text:
            return self.text
        parts = []
        if self.c2:
            power = _affine(self.c3, self.c4)
            parts.append(("" if self.c2 == 1 else f"{self.c2}*") + f"2^({power})")
        if self.c1:
            parts.append(_affine(self.c1, 0))
        if self.c0 or not parts:
            parts.append(str(self.c0))
        return "+".join(parts).replace("+-", "-")


def _affine(coef: int, const: int) -> str:
    head = "n" if coef == 1 else f"{coef}n"
    if const > 0:
        return f"{head}+{const}"
    if const < 0:
        return f"{head}{const}"
    return head


class _ExprParser:
    """Recursive descent over  expr := term (('+'|'-') term)*,
    term := factor ('*'? factor)*, factor := INT | n | 2^factor | (expr) | -factor.

    Values are kept as {0: c0, 1: c1, ('exp', c3): coefficient-of-2^(c3 n)}.
    """

    def __init__(self, text: str):
        self.text = text
        self.tokens: List[str] = []
        for number, var, other in _TOKEN.findall(text):
            if number:
                self.tokens.append(number)
            elif var:
                self.tokens.append("n")
            elif other.strip():
                self.tokens.append(other)
        self.pos = 0

    def fail(self, why: str):
        raise ExponentFormError(f"exponent {self.text!r}: {why}")

    def peek(self) -> Optional[str]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> str:
        token = self.peek()
        if token is None:
            self.fail("unexpected end")
        self.pos += 1
        return token

    def parse(self) -> ExponentExpr:
        value = self.expr()
        if self.peek() is not None:
            self.fail(f"unexpected {self.peek()!r}")
        exp_terms = {k: v for k, v in value.items() if isinstance(k, tuple) and v}
        if len(exp_terms) > 1:
            self.fail("at most one power-of-two term is supported")
        c2 = c3 = 0
        for (_, rate), coef in exp_terms.items():
            c2, c3 = coef, rate
        return ExponentExpr(value.get(0, 0), value.get(1, 0), c2, c3, 0, text=self.text.strip())

    def expr(self) -> Dict:
        value = self.term()
        while self.peek() in ("+", "-"):
            sign = 1 if self.take() == "+" else -1
            value = _add(value, _scale(self.term(), sign))
        return value

    def term(self) -> Dict:
        value = self.factor()
        while self.peek() is not None and self.peek() not in ("+", "-", ")"):
            if self.peek() == "*":
                self.take()
            value = _mul(value, self.factor(), self.fail)
        return value

    def factor(self) -> Dict:
        token = self.take()
        if token == "-":
            return _scale(self.factor(), -1)
        if token == "(":
            value = self.expr()
            if self.take() != ")":
                self.fail("expected ')'")
            return value
        if token == "n":
            return {1: 1}
        if token.isdigit():
            if token == "2" and self.peek() == "^":
                self.take()
                return _power_of_two(self.factor(), self.fail)
            if self.peek() == "^":
                self.fail("only powers of 2 are supported")
            return {0: int(token)}
        self.fail(f"unexpected {token!r}")


def _add(x: Dict, y: Dict) -> Dict:
    out = dict(x)
    for key, coef in y.items():
        out[key] = out.get(key, 0) + coef
    return out


def _scale(x: Dict, k: int) -> Dict:
    return {key: coef * k for key, coef in x.items()}


def _is_const(x: Dict) -> bool:
    return all(key == 0 or coef == 0 for key, coef in x.items())


def _mul(x: Dict, y: Dict, fail) -> Dict:
    if _is_const(x):
        return _scale(y, x.get(0, 0))
    if _is_const(y):
        return _scale(x, y.get(0, 0))
    fail("products of two n-dependent terms are not supported")


def _power_of_two(power: Dict, fail) -> Dict:
    if any(isinstance(key, tuple) and coef for key, coef in power.items()):
        fail("nested powers are not supported")
    rate, offset = power.get(1, 0), power.get(0, 0)
    if offset < 0:
        fail("negative constant inside 2^(...) is not supported")
    if rate == 0:
        return {0: 1 << offset}
    return {("exp", rate): 1 << offset}


PatternElement = Tuple[str, ExponentExpr]


@dataclass(frozen=True)
class Rule:
    id: str
    lhs: Word
    rhs: Word
    param: Optional[int] = None

    def __post_init__(self):
        if self.lhs.is_empty():
            raise ThueKitError(f"rule {self.id}: left-hand side must be non-empty")

    @property
    def label(self) -> str:
        return self.id if self.param is None else f"{self.id}[n={self.param}]"

    def __str__(self) -> str:
        return f"{self.lhs} -> {self.rhs}"


class _Group:
    """Consecutive same-symbol pattern elements, merged into one run."""

    __slots__ = ("symbol", "exprs")

    def __init__(self, symbol: str, exprs: List[ExponentExpr]):
        self.symbol = symbol
        self.exprs = exprs

    def __call__(self, n: int) -> int:
        return sum(e(n) for e in self.exprs)

    @property
    def is_constant(self) -> bool:
        return all(e.is_constant for e in self.exprs)

    def solve(self, value: int, lo: int) -> Optional[int]:
        n = _least_with(self, value, lo)
        return n if self(n) == value else None


@dataclass(frozen=True)
class RuleSchema:
    """Rule family  lhs(n) -> rhs(n)  for every n >= n_min."""

    id: str
    lhs_pattern: Tuple[PatternElement, ...]
    rhs_pattern: Tuple[PatternElement, ...]
    n_min: int = 0

    def __post_init__(self):
        for _, expr in self.lhs_pattern + self.rhs_pattern:
            expr.validate(self.n_min)
        if all(expr.is_constant for _, expr in self.lhs_pattern):
            raise ExponentFormError(f"schema {self.id}: left-hand side does not depend on n")
        if self.lhs_at(self.n_min).is_empty():
            raise ExponentFormError(f"schema {self.id}: left-hand side is empty at n={self.n_min}")

    def lhs_at(self, n: int) -> Word:
        return Word((s, e(n)) for s, e in self.lhs_pattern)

    def rhs_at(self, n: int) -> Word:
        return Word((s, e(n)) for s, e in self.rhs_pattern)

    @cached_property
    def _instances(self) -> Dict[int, Rule]:
        return {}

    def instantiate(self, n: int) -> Rule:
        if n < self.n_min:
            raise ThueKitError(f"schema {self.id} is defined for n>={self.n_min}, got {n}")
        rule = self._instances.get(n)
        if rule is None:
            rule = Rule(self.id, self.lhs_at(n), self.rhs_at(n), param=n)
            if n <= 256:
                self._instances[n] = rule
        return rule

    def instances(self, n_max: int) -> List[Rule]:
        return [self.instantiate(n) for n in range(self.n_min, n_max + 1)]

    @property
    def symbols(self) -> frozenset:
        return frozenset(s for s, _ in self.lhs_pattern + self.rhs_pattern)

    # exact matching

    @cached_property
    def _threshold(self) -> int:
        """Least n from which every non-vanishing lhs exponent is >= 1."""
        n0 = self.n_min
        for _, expr in self.lhs_pattern:
            if expr.is_constant:
                continue
            n0 = max(n0, _least_with(expr, 1, self.n_min))
        return n0

    @cached_property
    def _groups(self) -> List[_Group]:
        groups: List[_Group] = []
        for symbol, expr in self.lhs_pattern:
            if expr.is_constant and expr(self.n_min) == 0:
                continue
            if groups and groups[-1].symbol == symbol:
                groups[-1].exprs.append(expr)
            else:
                groups.append(_Group(symbol, [expr]))
        return groups

    def match_lhs(self, word: Word) -> List[Tuple[int, int]]:
        """Every (param, position) at which an lhs instance occurs in ``word``.

        Parameters below the threshold are matched by instantiation; from
        the threshold on the run structure of the lhs is fixed and the
        parameter is solved from the run lengths.
        """
        n0 = self._threshold
        found: List[Tuple[int, int]] = []
        for n in range(self.n_min, n0):
            lhs = self.lhs_at(n)
            found.extend((n, at) for at in word.occurrences(lhs))

        groups = self._groups
        runs = word.runs
        starts = word._run_starts()
        k = len(groups)

        if k == 1:
            group = groups[0]
            for (symbol, length), at in zip(runs, starts):
                if symbol != group.symbol:
                    continue
                n = n0
                while group(n) <= length:
                    need = group(n)
                    found.extend((n, p) for p in range(at, at + length - need + 1))
                    n += 1
            return found

        first, last, middle = groups[0], groups[-1], groups[1:-1]
        for i in range(len(runs) - k + 1):
            if runs[i][0] != first.symbol or runs[i + k - 1][0] != last.symbol:
                continue
            if any(runs[i + j][0] != g.symbol for j, g in enumerate(middle, start=1)):
                continue
            candidates = self._solve_middle(middle, runs[i + 1:i + k - 1], n0)
            if candidates is None:
                continue
            first_len, last_len = runs[i][1], runs[i + k - 1][1]
            for n in candidates:
                if first(n) <= first_len and last(n) <= last_len:
                    found.append((n, starts[i] + first_len - first(n)))
            if not middle or all(g.is_constant for g in middle):
                # parameter only bounded by the boundary runs
                n = n0
                while first(n) <= first_len and last(n) <= last_len:
                    found.append((n, starts[i] + first_len - first(n)))
                    n += 1
        return found

    def _solve_middle(self, middle: Sequence[_Group], runs, n0: int) -> Optional[List[int]]:
        """Params consistent with the interior runs; [] means unconstrained."""
        fixed: Optional[int] = None
        for group, (_, length) in zip(middle, runs):
            if group.is_constant:
                if group(n0) != length:
                    return None
                continue
            n = group.solve(length, n0)
            if n is None or (fixed is not None and n != fixed):
                return None
            fixed = n
        return [] if fixed is None else [fixed]

    def __str__(self) -> str:
        def side(pattern):
            if not pattern:
                return "ε"
            return " ".join(
                s if (e.is_constant and e(self.n_min) == 1) else f"{s}^({e})" for s, e in pattern
            )

        return f"{side(self.lhs_pattern)} -> {side(self.rhs_pattern)} for n>={self.n_min}"
