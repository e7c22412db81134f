"""Sparse linear combinations with ZZ[dv, d, g] coefficients.

Every class type in the package (Schubert classes, tensor classes, classes on
the exceptional divisor, quotient-ring elements) is a finite map from basis
keys to coefficients.  :class:`Combination` supplies the additive structure;
subclasses add their own multiplication.
"""

from __future__ import annotations

from typing import Any, Hashable, Iterable, Mapping, TypeVar

from .params import Coefficient, ParamPoly, param

C = TypeVar("C", bound="Combination")


def collect(pairs: Iterable[tuple[Hashable, Coefficient]]) -> dict[Hashable, ParamPoly]:
    """Sum coefficients per key, dropping zeros."""
    out: dict[Hashable, ParamPoly] = {}
    for key, coeff in pairs:
        c = param(coeff)
        if not c:
            continue
        if key in out:
            s = out[key] + c
            if s:
                out[key] = s
            else:
                del out[key]
        else:
            out[key] = c
    return out


class Combination:
    """Additive structure shared by all class types.

    Subclasses set ``terms`` (a dict that is never mutated after construction)
    and implement :meth:`_like`, which builds a sibling with new terms.
    """

    __slots__ = ()
    terms: dict

    def _like(self: C, terms: Mapping[Hashable, ParamPoly]) -> C:
        raise NotImplementedError

    def _check_compatible(self, other: "Combination") -> None:
        if type(self) is not type(other):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")

    def __add__(self: C, other: Any) -> C:
        if isinstance(other, int) and other == 0:
            return self
        if not isinstance(other, Combination):
            return NotImplemented
        self._check_compatible(other)
        return self._like(collect([*self.terms.items(), *other.terms.items()]))

    def __radd__(self: C, other: Any) -> C:
        if isinstance(other, int) and other == 0:
            return self
        return NotImplemented

    def __neg__(self: C) -> C:
        return self._like({k: -v for k, v in self.terms.items()})

    def __sub__(self: C, other: Any) -> C:
        if not isinstance(other, Combination):
            return NotImplemented
        return self + (-other)

    def scale(self: C, factor: Coefficient) -> C:
        f = param(factor)
        return self._like(collect((k, v * f) for k, v in self.terms.items()))

    def __rmul__(self: C, factor: Any) -> C:
        if isinstance(factor, Combination):
            return NotImplemented
        return self.scale(factor)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def coefficient(self, key: Hashable) -> ParamPoly:
        return self.terms.get(key, param(0))

    def map_coefficients(self: C, fn) -> C:
        return self._like(collect((k, fn(v)) for k, v in self.terms.items()))

    def _eq_key(self) -> Any:
        return None

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int) and other == 0:
            return not self.terms
        if type(self) is not type(other):
            return NotImplemented
        return self._eq_key() == other._eq_key() and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((type(self).__name__, self._eq_key(), frozenset(self.terms.items())))


def format_terms(items: Iterable[tuple[str, ParamPoly]]) -> str:
    """Render ``coeff*label`` pairs as a signed sum; the label ``"1"`` is the unit."""
    pieces = []
    for label, c in items:
        if c.is_ground:
            n = int(c.LC) if c else 0
            if label == "1":
                body = str(abs(n))
            else:
                body = label if abs(n) == 1 else f"{abs(n)}*{label}"
            pieces.append(("-" if n < 0 else "+", body))
        else:
            text = f"({c})"
            pieces.append(("+", text if label == "1" else f"{text}*{label}"))
    if not pieces:
        return "0"
    sign, body = pieces[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out
