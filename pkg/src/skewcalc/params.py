"""Integer polynomials in the curve parameters ``dv``, ``d`` and ``g``.

Coefficients of every class in the package live in ZZ[dv, d, g].  The dual
degree ``dv`` is kept as an independent symbol so that intermediate classes
read the way they are usually written; :func:`substitute_dv` imposes
``dv = 2d + 2g - 2`` when two expressions must be compared.
"""

from __future__ import annotations

from typing import Union

from sympy import ZZ, sympify
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement, ring

PARAMS, dv, d, g = ring("dv,d,g", ZZ, grlex)

ParamPoly = PolyElement
Coefficient = Union[int, str, PolyElement]

ZERO = PARAMS.zero
ONE = PARAMS.one


def param(value: Coefficient) -> ParamPoly:
    """Coerce an int, a polynomial string or a ring element into ZZ[dv, d, g]."""
    if isinstance(value, PolyElement):
        if value.ring is not PARAMS:
            raise TypeError(f"polynomial over a foreign ring: {value.ring}")
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(value, int):
        return PARAMS(value)
    if isinstance(value, str):
        return parse_param(value)
    raise TypeError(f"cannot interpret {value!r} as a parameter polynomial")


def parse_param(text: str) -> ParamPoly:
    cleaned = text.replace("−", "-").replace("^", "**").strip()
    if not cleaned:
        raise ValueError("empty polynomial string")
    expr = sympify(cleaned, locals={"dv": sympify("dv"), "d": sympify("d"), "g": sympify("g")})
    unknown = {str(s) for s in expr.free_symbols} - {"dv", "d", "g"}
    if unknown:
        raise ValueError(f"unknown symbols {sorted(unknown)} in {text!r}")
    return PARAMS(expr)


def format_param(p: ParamPoly) -> str:
    return str(p)


def dual_degree(degree: Coefficient, genus: Coefficient) -> ParamPoly:
    """Degree of the dual hypersurface of a smooth curve: ``2d + 2g - 2``."""
    return 2 * param(degree) + 2 * param(genus) - 2


def substitute_dv(p: Coefficient) -> ParamPoly:
    """Eliminate ``dv`` using ``dv = 2d + 2g - 2``."""
    return param(p).compose(dv, 2 * d + 2 * g - 2)


def equal_on_curves(a: Coefficient, b: Coefficient) -> bool:
    """True when ``a`` and ``b`` agree once ``dv`` is tied to ``d`` and ``g``."""
    return substitute_dv(param(a) - param(b)) == 0


def evaluate(p: Coefficient, *, d: int | None = None, g: int | None = None,
             dv: int | None = None) -> ParamPoly | int:
    """Substitute numeric values; ``dv`` defaults to ``2d + 2g - 2`` when both are given.

    Returns a plain int once no symbol is left.
    """
    p = param(p)
    if dv is None and d is not None and g is not None:
        dv = 2 * d + 2 * g - 2
    subs = [(gen, val) for gen, val in zip(PARAMS.gens, (dv, d, g)) if val is not None]
    for gen, val in subs:
        p = p.compose(gen, PARAMS(val))
    if p.is_ground:
        return int(p.LC) if p else 0
    return p


def as_int(p: Coefficient) -> int:
    p = param(p)
    if not p.is_ground:
        raise ValueError(f"{p} is not a constant")
    return int(p.LC) if p else 0
