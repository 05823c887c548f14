"""Lexing helpers for the word and system-file syntaxes.

A word is written either densely (``aaacac``) or run-length encoded
(``a^3 c a c``); both forms may be mixed and whitespace is ignored.  In
system files an exponent may also be a parenthesised expression in ``n``
(``a^(2^(n+1)-1)``).
"""
from typing import Iterable, List, Optional, Tuple

from thuekit.core.exceptions import SystemSyntaxError, UnknownSymbolError

EMPTY_WORD_TOKENS = ("ε", "")
RESERVED = set("^()#")


def split_runs(text: str, line: Optional[int] = None) -> List[Tuple[str, Optional[str]]]:
    """Split ``text`` into ``(symbol, exponent_text)`` pairs.

    ``exponent_text`` is None for a bare symbol, otherwise the raw text after
    ``^`` (parentheses stripped).  Symbols are single non-space characters.
    """
    stripped = text.strip()
    if stripped in EMPTY_WORD_TOKENS:
        return []

    pairs: List[Tuple[str, Optional[str]]] = []
    i = 0
    n = len(stripped)
    while i < n:
        ch = stripped[i]
        if ch.isspace():
            i += 1
            continue
        if ch in RESERVED:
            raise SystemSyntaxError(f"unexpected {ch!r} in {text!r}", line)
        symbol = ch
        i += 1
        if i < n and stripped[i] == "^":
            i += 1
            if i < n and stripped[i] == "(":
                depth = 0
                start = i
                while i < n:
                    if stripped[i] == "(":
                        depth += 1
                    elif stripped[i] == ")":
                        depth -= 1
                        if depth == 0:
                            break
                    i += 1
                if i >= n:
                    raise SystemSyntaxError(f"unbalanced parenthesis in {text!r}", line)
                pairs.append((symbol, stripped[start + 1:i].strip()))
                i += 1
            elif i < n and stripped[i] == "n":
                pairs.append((symbol, "n"))
                i += 1
            else:
                start = i
                while i < n and stripped[i].isdigit():
                    i += 1
                if start == i:
                    raise SystemSyntaxError(f"missing exponent after {symbol}^ in {text!r}", line)
                pairs.append((symbol, stripped[start:i]))
        else:
            pairs.append((symbol, None))
    return pairs


def check_symbols(symbols: Iterable[str], alphabet, line: Optional[int] = None) -> None:
    allowed = set(alphabet)
    for symbol in symbols:
        if symbol not in allowed:
            raise UnknownSymbolError(symbol, alphabet, line)


def strip_comment(line: str) -> str:
    return line.split("#", 1)[0].strip()
