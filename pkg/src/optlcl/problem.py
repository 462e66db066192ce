"""Opt LCL problem descriptions: data model, text format and validation."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence, Union


class _Bot:
    """Marker for a forbidden neighborhood."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "BOT"

    def __str__(self) -> str:
        return "bot"

    def __reduce__(self):
        return (_Bot, ())


BOT = _Bot()
CostValue = Union[Fraction, _Bot]


class Objective(str, Enum):
    MIN = "min"
    MAX = "max"


class Aggregation(str, Enum):
    SUM = "sum"
    MIN = "min"
    MAX = "max"


SUPPORTED = {
    (Objective.MIN, Aggregation.SUM),
    (Objective.MAX, Aggregation.SUM),
    (Objective.MIN, Aggregation.MAX),
    (Objective.MAX, Aggregation.MIN),
}


class ProblemError(ValueError):
    """Invalid problem description. ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        self.message = message
        super().__init__(f"line {line}: {message}" if line is not None else message)


class UnsupportedCombination(ProblemError):
    pass


def is_bot(x) -> bool:
    return x is BOT


_RATIONAL = re.compile(r"^(\d+(\.\d+)?|\d+/\d+)$")


def parse_rational(text: str) -> Fraction:
    """Parse an exact non-negative rational: ``3``, ``0.25`` or ``1/3``."""
    t = text.strip()
    if t.startswith("-"):
        raise ValueError(f"negative value {t!r}")
    if not _RATIONAL.match(t):
        raise ValueError(f"malformed rational {t!r}")
    if "/" in t and int(t.split("/")[1]) == 0:
        raise ValueError(f"zero denominator in {t!r}")
    return Fraction(t)


def parse_cost(text: str) -> CostValue:
    if text.strip().lower() in ("bot", "⊥"):
        return BOT
    return parse_rational(text)


def format_value(x) -> str:
    """Render a cost/parameter: ``bot``, ``p/q``, ``true``/``false`` or ``unset``."""
    if x is None:
        return "unset"
    if x is BOT:
        return "bot"
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return str(x)


@dataclass(frozen=True, eq=False)
class OptLcl:
    alphabet: tuple[str, ...]
    radius: int
    costs: Mapping[tuple[str, ...], CostValue]
    aggregation: Aggregation
    objective: Objective
    name: str = field(default="", compare=False)

    def __post_init__(self):
        alphabet = tuple(self.alphabet)
        if not alphabet:
            raise ProblemError("alphabet is empty")
        if len(set(alphabet)) != len(alphabet):
            dup = next(a for a in alphabet if alphabet.count(a) > 1)
            raise ProblemError(f"duplicate label {dup!r}")
        if any(not a or any(ch.isspace() for ch in a) for a in alphabet):
            raise ProblemError("labels must be non-empty whitespace-free tokens")
        if not isinstance(self.radius, int) or self.radius < 0:
            raise ProblemError("radius must be a non-negative integer")
        obj = Objective(self.objective)
        agg = Aggregation(self.aggregation)
        if (obj, agg) not in SUPPORTED:
            raise UnsupportedCombination(
                f"objective {obj.value} with aggregation {agg.value} is not supported "
                "(min-min / max-max are not classified by this method)"
            )
        labels = set(alphabet)
        table: dict[tuple[str, ...], CostValue] = {}
        for t, c in self.costs.items():
            t = tuple(t)
            if len(t) != self.radius + 1:
                raise ProblemError(f"tuple {' '.join(t)} has arity {len(t)}, expected {self.radius + 1}")
            for a in t:
                if a not in labels:
                    raise ProblemError(f"unknown label {a!r} in tuple {' '.join(t)}")
            if c is not BOT:
                if not isinstance(c, (int, Fraction)) or isinstance(c, bool):
                    raise ProblemError(f"cost of {' '.join(t)} must be an exact rational or bot")
                c = Fraction(c)
                if c < 0:
                    raise ProblemError(f"negative cost for {' '.join(t)}")
            table[t] = c
        expected = len(alphabet) ** (self.radius + 1)
        if len(table) != expected:
            raise ProblemError(f"cost table has {len(table)} entries, expected {expected}")
        ordered = {t: table[t] for t in itertools.product(alphabet, repeat=self.radius + 1)}
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "objective", obj)
        object.__setattr__(self, "aggregation", agg)
        object.__setattr__(self, "costs", MappingProxyType(ordered))

    def _key(self):
        return (self.alphabet, self.radius, tuple(self.costs.values()), self.aggregation, self.objective)

    def __eq__(self, other):
        return isinstance(other, OptLcl) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    @property
    def is_sum(self) -> bool:
        return self.aggregation is Aggregation.SUM

    @property
    def minimizing(self) -> bool:
        return self.objective is Objective.MIN

    @property
    def kind(self) -> str:
        """``min-sum``, ``max-sum``, ``min-max`` or ``max-min``."""
        return f"{self.objective.value}-{self.aggregation.value}"

    def cost(self, t: Sequence[str]) -> CostValue:
        return neighborhood_cost(self, t)

    def tuples(self) -> Iterable[tuple[str, ...]]:
        return self.costs.keys()


def neighborhood_cost(p: OptLcl, t: Sequence[str]) -> CostValue:
    t = tuple(t)
    if len(t) != p.radius + 1:
        raise ProblemError(f"tuple has arity {len(t)}, expected {p.radius + 1}")
    try:
        return p.costs[t]
    except KeyError:
        bad = next(a for a in t if a not in p.alphabet)
        raise ProblemError(f"unknown label {bad!r}") from None


def make_problem(
    alphabet: Sequence[str],
    radius: int,
    objective: str,
    aggregation: str,
    costs: Mapping[Sequence[str], CostValue],
    default: CostValue | None = None,
    name: str = "",
) -> OptLcl:
    """Build a problem from a partial table; ``default`` fills unlisted tuples."""
    table: dict[tuple[str, ...], CostValue] = {}
    for t, c in costs.items():
        t = tuple(t) if not isinstance(t, str) else tuple(t.split()) if " " in t else tuple(t)
        table[t] = c if c is BOT else Fraction(c)
    for t in itertools.product(tuple(alphabet), repeat=radius + 1):
        if t not in table:
            if default is None:
                raise ProblemError(f"missing cost for tuple {' '.join(t)} and no default")
            table[t] = default
    return OptLcl(tuple(alphabet), radius, table, Aggregation(aggregation), Objective(objective), name)


def parse_problem(text: str, name: str = "") -> OptLcl:
    """Parse the line-oriented problem format (see README)."""
    alphabet: list[str] | None = None
    radius: int | None = None
    objective: Objective | None = None
    aggregation: Aggregation | None = None
    default: CostValue | None = None
    default_line = None
    entries: list[tuple[int, tuple[str, ...], CostValue]] = []
    header_lines: dict[str, int] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.match(r"^(alphabet|radius|objective|aggregation)\s*:\s*(.*)$", line)
        if m:
            key, val = m.group(1), m.group(2).strip()
            if key in header_lines:
                raise ProblemError(f"duplicate {key!r} declaration", lineno)
            header_lines[key] = lineno
            if key == "alphabet":
                alphabet = val.split()
                if not alphabet:
                    raise ProblemError("alphabet is empty", lineno)
                seen = set()
                for a in alphabet:
                    if a in seen:
                        raise ProblemError(f"duplicate label {a!r}", lineno)
                    seen.add(a)
            elif key == "radius":
                if not re.fullmatch(r"\d+", val):
                    raise ProblemError(f"radius must be a non-negative integer, got {val!r}", lineno)
                radius = int(val)
            elif key == "objective":
                try:
                    objective = Objective(val.lower())
                except ValueError:
                    raise ProblemError(f"objective must be min or max, got {val!r}", lineno) from None
            else:
                try:
                    aggregation = Aggregation(val.lower())
                except ValueError:
                    raise ProblemError(f"aggregation must be sum, min or max, got {val!r}", lineno) from None
            continue
        m = re.match(r"^default\s*=\s*(\S+)$", line)
        if m:
            if default_line is not None:
                raise ProblemError("default declared more than once", lineno)
            default_line = lineno
            try:
                default = parse_cost(m.group(1))
            except ValueError as e:
                raise ProblemError(str(e), lineno) from None
            continue
        m = re.match(r"^cost\s+(.+?)\s*=\s*(\S+)$", line)
        if m:
            try:
                value = parse_cost(m.group(2))
            except ValueError as e:
                raise ProblemError(str(e), lineno) from None
            entries.append((lineno, tuple(m.group(1).split()), value))
            continue
        raise ProblemError(f"cannot parse {line!r}", lineno)

    for key, val in (("alphabet", alphabet), ("radius", radius), ("objective", objective), ("aggregation", aggregation)):
        if val is None:
            raise ProblemError(f"missing {key!r} declaration")
    if (objective, aggregation) not in SUPPORTED:
        raise UnsupportedCombination(
            f"objective {objective.value} with aggregation {aggregation.value} is not supported "
            "(min-min / max-max are not classified by this method)",
            header_lines["aggregation"],
        )

    labels = set(alphabet)
    table: dict[tuple[str, ...], CostValue] = {}
    for lineno, t, value in entries:
        if len(t) != radius + 1:
            raise ProblemError(f"tuple {' '.join(t)} has arity {len(t)}, expected {radius + 1}", lineno)
        for a in t:
            if a not in labels:
                raise ProblemError(f"unknown label {a!r}", lineno)
        if t in table:
            raise ProblemError(f"duplicate cost for tuple {' '.join(t)}", lineno)
        table[t] = value
    for t in itertools.product(alphabet, repeat=radius + 1):
        if t not in table:
            if default is None:
                raise ProblemError(f"missing cost for tuple {' '.join(t)} and no default")
            table[t] = default
    return OptLcl(tuple(alphabet), radius, table, aggregation, objective, name)


def format_problem(p: OptLcl) -> str:
    """Canonical text form; ``parse_problem(format_problem(p)) == p``."""
    lines = []
    if p.name:
        lines.append(f"# {p.name}")
    lines += [
        f"alphabet: {' '.join(p.alphabet)}",
        f"radius: {p.radius}",
        f"objective: {p.objective.value}",
        f"aggregation: {p.aggregation.value}",
    ]
    for t, c in p.costs.items():
        lines.append(f"cost {' '.join(t)} = {format_value(c)}")
    return "\n".join(lines) + "\n"
