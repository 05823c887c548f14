from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple, Union

from thuekit.core.exceptions import SystemSyntaxError, ThueKitError, UnknownSymbolError
from thuekit.models.rule import Rule, RuleSchema


@dataclass(frozen=True)
class RewritingSystem:
    """An alphabet with finitely many rules and rule schemas."""

    alphabet: Tuple[str, ...]
    finite_rules: Tuple[Rule, ...] = ()
    schemas: Tuple[RuleSchema, ...] = ()
    name: str = "custom"
    _index: Dict[str, Union[Rule, RuleSchema]] = field(
        default_factory=dict, init=False, repr=False, compare=False
    )
    # memoised normal forms, filled by the rewriting service
    normal_forms: Dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        for symbol in self.alphabet:
            if len(symbol) != 1 or not symbol.isprintable() or symbol.isspace():
                raise SystemSyntaxError(f"alphabet symbol {symbol!r} must be one printable character")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise SystemSyntaxError("alphabet symbols must be distinct")
        allowed = set(self.alphabet)
        for item in self.finite_rules + self.schemas:
            if item.id in self._index:
                raise SystemSyntaxError(f"duplicate rule id {item.id!r}")
            self._index[item.id] = item
            symbols = item.symbols if isinstance(item, RuleSchema) else item.lhs.symbols | item.rhs.symbols
            for symbol in sorted(symbols - allowed):
                raise UnknownSymbolError(symbol, self.alphabet)

    def __hash__(self) -> int:
        return hash((self.name, self.alphabet, self.finite_rules, self.schemas))

    @property
    def rule_ids(self) -> Tuple[str, ...]:
        return tuple(self._index)

    def has_rule(self, rule_id: str) -> bool:
        return rule_id in self._index

    def lookup(self, rule_id: str) -> Union[Rule, RuleSchema]:
        try:
            return self._index[rule_id]
        except KeyError:
            raise ThueKitError(f"system {self.name} has no rule {rule_id!r}")

    def instantiate(self, rule_id: str, param: Optional[int] = None) -> Rule:
        item = self.lookup(rule_id)
        if isinstance(item, RuleSchema):
            if param is None:
                raise ThueKitError(f"schema {rule_id} needs a parameter")
            return item.instantiate(param)
        if param is not None:
            raise ThueKitError(f"rule {rule_id} is not a schema")
        return item

    def with_name(self, name: str) -> "RewritingSystem":
        return RewritingSystem(self.alphabet, self.finite_rules, self.schemas, name=name)

    def __str__(self) -> str:
        return f"{self.name}({len(self.finite_rules)} rules, {len(self.schemas)} schemas)"
