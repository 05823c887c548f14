from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterator, List, Optional, Tuple

from pydantic_core import core_schema

from thuekit.core.exceptions import DerivationError, RedexMismatchError
from thuekit.models.word import Word


class Direction(str, Enum):
    FORWARD = "forward"
    REVERSE = "reverse"


@dataclass(frozen=True)
class Redex:
    """One applicable (possibly reversed) rule instance at a dense position."""

    rule_id: str
    position: int
    lhs: Word
    rhs: Word
    param: Optional[int] = None
    direction: Direction = Direction.FORWARD

    @property
    def source(self) -> Word:
        return self.lhs if self.direction == Direction.FORWARD else self.rhs

    @property
    def target(self) -> Word:
        return self.rhs if self.direction == Direction.FORWARD else self.lhs

    @property
    def label(self) -> str:
        name = self.rule_id if self.param is None else f"{self.rule_id}[n={self.param}]"
        return name if self.direction == Direction.FORWARD else f"{name}^-1"

    def reversed(self) -> "Redex":
        flipped = Direction.REVERSE if self.direction == Direction.FORWARD else Direction.FORWARD
        return Redex(self.rule_id, self.position, self.lhs, self.rhs, self.param, flipped)

    def shifted(self, offset: int) -> "Redex":
        return Redex(self.rule_id, self.position + offset, self.lhs, self.rhs, self.param, self.direction)

    def sort_key(self):
        return (
            self.position,
            self.rule_id,
            -1 if self.param is None else self.param,
            self.direction != Direction.FORWARD,
        )

    def apply(self, word: Word) -> Word:
        source = self.source
        if not word.occurs_at(source, self.position):
            raise RedexMismatchError(
                f"{self.label} does not match {word} at position {self.position} "
                f"(expected {source})"
            )
        return word.replace(self.position, source.length, self.target)

    def __str__(self) -> str:
        return f"{self.label}@{self.position}"


@dataclass(frozen=True)
class RewriteStep:
    redex: Redex
    digest: str


@dataclass(frozen=True)
class Derivation:
    start: Word
    steps: Tuple[RewriteStep, ...]
    end: Word

    @classmethod
    def trivial(cls, word: Word) -> "Derivation":
        return cls(word, (), word)

    @property
    def length(self) -> int:
        return len(self.steps)

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def redexes(self) -> List[Redex]:
        return [step.redex for step in self.steps]

    @property
    def is_forward(self) -> bool:
        return all(step.redex.direction == Direction.FORWARD for step in self.steps)

    def words(self) -> Iterator[Word]:
        """Replay the derivation, yielding start and every intermediate word."""
        word = self.start
        yield word
        for step in self.steps:
            word = step.redex.apply(word)
            yield word

    def then(self, other: "Derivation") -> "Derivation":
        if self.end != other.start:
            raise DerivationError(f"cannot chain: {self.end} != {other.start}")
        return Derivation(self.start, self.steps + other.steps, other.end)

    def embed(self, prefix: Word, suffix: Word) -> "Derivation":
        """The same derivation performed inside the context prefix·_·suffix."""
        builder = DerivationBuilder(prefix + self.start + suffix)
        for step in self.steps:
            builder.apply(step.redex.shifted(prefix.length))
        return builder.build()

    def inverse(self) -> "Derivation":
        builder = DerivationBuilder(self.end)
        for step in reversed(self.steps):
            builder.apply(step.redex.reversed())
        return builder.build()

    def to_json(self) -> Dict:
        return {
            "start": str(self.start),
            "end": str(self.end),
            "steps": [
                {
                    "rule": step.redex.rule_id,
                    "param": step.redex.param,
                    "position": step.redex.position,
                    "direction": step.redex.direction.value,
                    "digest": step.digest,
                }
                for step in self.steps
            ],
        }

    @classmethod
    def from_json(cls, data: Dict, system) -> "Derivation":
        steps = []
        for raw in data["steps"]:
            rule = system.instantiate(raw["rule"], raw.get("param"))
            redex = Redex(
                rule.id, int(raw["position"]), rule.lhs, rule.rhs, rule.param,
                Direction(raw.get("direction", "forward")),
            )
            steps.append(RewriteStep(redex, raw["digest"]))
        return cls(Word.parse(data["start"]), tuple(steps), Word.parse(data["end"]))

    @classmethod
    def __get_pydantic_core_schema__(cls, source_type, handler):
        # rebuilding needs the system, so only instances validate
        return core_schema.is_instance_schema(
            cls,
            serialization=core_schema.plain_serializer_function_ser_schema(lambda d: d.to_json(), when_used="json"),
        )

    @classmethod
    def __get_pydantic_json_schema__(cls, schema, handler):
        return {"type": "object", "required": ["start", "end", "steps"]}


class DerivationBuilder:
    """Accumulates steps while tracking the current word."""

    def __init__(self, start: Word):
        self.start = start
        self.current = start
        self.steps: List[RewriteStep] = []

    def __len__(self) -> int:
        return len(self.steps)

    def apply(self, redex: Redex) -> Word:
        self.current = redex.apply(self.current)
        self.steps.append(RewriteStep(redex, self.current.digest()))
        return self.current

    def extend(self, derivation: Derivation) -> Word:
        if derivation.start != self.current:
            raise DerivationError(f"cannot extend from {self.current} with a derivation starting at {derivation.start}")
        self.steps.extend(derivation.steps)
        self.current = derivation.end
        return self.current

    def build(self) -> Derivation:
        return Derivation(self.start, tuple(self.steps), self.current)

