"""Graded quotient rings presented by monic rewriting rules.

A ring is ``Z[dv, d, g][x_1, ..., x_m]`` modulo relations of the form
``x_i^k = (polynomial of lower x_i-degree)``.  Rules are applied until no
monomial is divisible by a rule's leading power; for the triangular systems
used here (each replacement only raises generators listed earlier) this
terminates and the result is a normal form.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .params import Coefficient, ParamPoly, format_param, param
from .terms import Combination, collect, format_terms

Monomial = tuple[int, ...]


@dataclass(frozen=True)
class Rule:
    generator: int
    power: int
    replacement: tuple[tuple[Monomial, ParamPoly], ...]


@dataclass(frozen=True)
class QuotientRingSpec:
    name: str
    generators: tuple[str, ...]
    degrees: tuple[int, ...]
    rules: tuple[Rule, ...] = ()
    point: Monomial | None = None

    def __post_init__(self) -> None:
        if len(self.generators) != len(self.degrees):
            raise ValueError("one degree per generator is required")
        if len(set(self.generators)) != len(self.generators):
            raise ValueError(f"repeated generator names in {self.generators}")

    @classmethod
    def free(cls, name: str, generators: Sequence[str], degrees: Sequence[int] | None = None
             ) -> "QuotientRingSpec":
        return cls(name, tuple(generators), tuple(degrees or [1] * len(generators)))

    def index(self, name: str) -> int:
        try:
            return self.generators.index(name)
        except ValueError:
            raise KeyError(f"{self.name} has no generator {name!r}") from None

    def gen(self, name: str) -> "QElement":
        i = self.index(name)
        return QElement(self, {tuple(1 if j == i else 0 for j in range(len(self.generators))): param(1)})

    def gens(self) -> tuple["QElement", ...]:
        return tuple(self.gen(name) for name in self.generators)

    @property
    def one(self) -> "QElement":
        return QElement(self, {(0,) * len(self.generators): param(1)})

    @property
    def zero(self) -> "QElement":
        return QElement(self, {})

    def constant(self, c: Coefficient) -> "QElement":
        return self.one.scale(c)

    def with_rule(self, generator: str, power: int, replacement: "QElement | int") -> "QuotientRingSpec":
        """Add ``generator^power = replacement``."""
        i = self.index(generator)
        if isinstance(replacement, int):
            replacement = self.constant(replacement)
        if replacement.ring.generators != self.generators:
            raise ValueError("replacement lives in a ring with other generators")
        for mono in replacement.terms:
            if mono[i] >= power:
                raise ValueError(f"rule for {generator}^{power} is not monic: it contains {mono}")
        rule = Rule(i, power, tuple(sorted(replacement.terms.items())))
        return replace(self, rules=self.rules + (rule,))

    def with_point(self, monomial: "QElement") -> "QuotientRingSpec":
        (mono,) = monomial.terms
        return replace(self, point=mono)

    @property
    def dim(self) -> int | None:
        if self.point is None:
            return None
        return self.weight(self.point)

    def weight(self, mono: Monomial) -> int:
        return sum(e * w for e, w in zip(mono, self.degrees))

    def element(self, terms: Mapping[Monomial, Coefficient]) -> "QElement":
        return QElement(self, collect(terms.items())).normal_form()

    def adopt(self, x: "QElement") -> "QElement":
        """Reinterpret an element built over the same generators in this ring."""
        if x.ring.generators != self.generators:
            raise ValueError(f"{x.ring} and {self} have different generators")
        return self.element(x.terms)

    def __str__(self) -> str:
        return self.name


@lru_cache(maxsize=None)
def _reduce_monomial(spec: QuotientRingSpec, mono: Monomial) -> tuple[tuple[Monomial, ParamPoly], ...]:
    for rule in spec.rules:
        if mono[rule.generator] >= rule.power:
            rest = list(mono)
            rest[rule.generator] -= rule.power
            acc: dict[Monomial, ParamPoly] = {}
            for rmono, rc in rule.replacement:
                merged = tuple(a + b for a, b in zip(rest, rmono))
                for m, c in _reduce_monomial(spec, merged):
                    acc[m] = acc.get(m, param(0)) + c * rc
            return tuple((m, c) for m, c in acc.items() if c)
    return ((mono, param(1)),)


def _mono_label(spec: QuotientRingSpec, mono: Monomial) -> str:
    parts = []
    for name, e in zip(spec.generators, mono):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts) or "1"


@dataclass(frozen=True, eq=False)
class QElement(Combination):
    ring: QuotientRingSpec
    terms: Mapping[Monomial, ParamPoly] = field(default_factory=dict)

    def _like(self, terms) -> "QElement":
        return QElement(self.ring, dict(terms))

    def _eq_key(self):
        return self.ring.generators

    def _check_compatible(self, other) -> None:
        super()._check_compatible(other)
        if other.ring.generators != self.ring.generators:
            raise ValueError(f"elements of {self.ring} and {other.ring} cannot be combined")

    def normal_form(self) -> "QElement":
        pairs = []
        for mono, c in self.terms.items():
            for m, k in _reduce_monomial(self.ring, mono):
                pairs.append((m, c * k))
        return QElement(self.ring, collect(pairs))

    def __mul__(self, other):
        if isinstance(other, QElement):
            self._check_compatible(other)
            pairs = []
            for m1, c1 in self.terms.items():
                for m2, c2 in other.terms.items():
                    merged = tuple(a + b for a, b in zip(m1, m2))
                    for m, k in _reduce_monomial(self.ring, merged):
                        pairs.append((m, c1 * c2 * k))
            return QElement(self.ring, collect(pairs))
        if isinstance(other, Combination):
            return NotImplemented
        return self.scale(other)

    def __pow__(self, k: int) -> "QElement":
        out = self.ring.one
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other: object) -> bool:
        if isinstance(other, QElement):
            if other.ring.generators != self.ring.generators:
                return False
            return (self - other).normal_form().is_zero()
        return super().__eq__(other)

    def __hash__(self) -> int:
        return hash((self.ring.generators, frozenset(self.normal_form().terms.items())))

    def degree(self) -> ParamPoly:
        """Coefficient of the point class after reduction."""
        if self.ring.point is None:
            raise ValueError(f"{self.ring} has no declared point class")
        return self.normal_form().coefficient(self.ring.point)

    def coefficient_of(self, monomial: "QElement") -> ParamPoly:
        (mono,) = monomial.terms
        return self.normal_form().coefficient(mono)

    def map_to(self, target: QuotientRingSpec, images: Mapping[str, "QElement"]) -> "QElement":
        """Ring homomorphism sending each generator to ``images[name]``."""
        powers = {name: [target.one] for name in self.ring.generators}
        out = target.zero
        for mono, c in self.terms.items():
            term = target.one
            for name, e in zip(self.ring.generators, mono):
                cache = powers[name]
                while len(cache) <= e:
                    cache.append(cache[-1] * images[name])
                term = term * cache[e]
            out = out + term.scale(c)
        return out

    def __str__(self) -> str:
        keys = sorted(self.terms, key=lambda m: (-self.ring.weight(m), tuple(-x for x in m)))
        return format_terms((_mono_label(self.ring, m), self.terms[m]) for m in keys)

    def to_json(self) -> list:
        keys = sorted(self.terms)
        return [{"monomial": dict(zip(self.ring.generators, m)), "coeff": format_param(self.terms[m])}
                for m in keys]


def polynomial(ring: QuotientRingSpec, pairs: Iterable[tuple[Coefficient, Sequence[int]]]) -> QElement:
    """Element from ``(coefficient, exponent vector)`` pairs."""
    return QElement(ring, collect((tuple(e), c) for c, e in pairs)).normal_form()
