"""Poisson brackets, the simplicity test and the quantization rules."""
from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from ..errors import FlagMissing, NotSimple, UnknownSymbol
from .polys import ONE, ClassicalPoly, CommutationSpec, NCPoly, _mono_str, coef


def poisson(F: ClassicalPoly, H: ClassicalPoly, pairs: Sequence[tuple[str, str]]) -> ClassicalPoly:
    """sum_i dF/dq_i dH/dp_i - dH/dq_i dF/dp_i over the canonical ``pairs``."""
    coords = {n for pair in pairs for n in pair}
    for poly in (F, H):
        stray = poly.symbols() - coords
        if stray:
            raise UnknownSymbol(f"symbols {sorted(stray)} are not canonical coordinates")
    out = ClassicalPoly()
    for q, p in pairs:
        out = out + F.diff(q) * H.diff(p) - H.diff(q) * F.diff(p)
    return out


def _bound(name: str, bindings: Mapping[str, str] | None, spec: CommutationSpec) -> str:
    op = (bindings or {}).get(name, name)
    if not spec.has_symbol(op):
        raise UnknownSymbol(f"symbol {name!r} (operator {op!r}) is not declared in the algebra")
    return op


def monomial_str(body: tuple) -> str:
    return "*".join(_mono_str(body)) or "1"


def is_simple(f: ClassicalPoly, spec: CommutationSpec,
              bindings: Mapping[str, str] | None = None) -> tuple[bool, list[tuple]]:
    """A polynomial is simple when no monomial multiplies values of noncommuting measurements.

    Returns ``(simple, offenders)`` where offenders are the offending monomials.
    """
    offenders = []
    for body in f.monomials():
        names = [n for n, _e in body]
        ops = [_bound(n, bindings, spec) for n in names]
        bad = any(not spec.commutes(ops[i], ops[j])
                  for i in range(len(ops)) for j in range(i + 1, len(ops)))
        if bad:
            offenders.append(body)
    offenders.sort(key=monomial_str)
    return not offenders, offenders


def _word_for(body: tuple, bindings, spec: CommutationSpec) -> tuple[str, ...]:
    word = []
    for n, e in body:
        word += [_bound(n, bindings, spec)] * e
    return tuple(sorted(word, key=spec.index))


def quantize(f: ClassicalPoly, spec: CommutationSpec, bindings: Mapping[str, str] | None = None) -> NCPoly:
    """Function, sum and commuting-product rules: monomial -> product of operators."""
    ok, offenders = is_simple(f, spec, bindings)
    if not ok:
        raise NotSimple(
            "not simple: " + ", ".join(monomial_str(b) for b in offenders), offenders)
    return NCPoly({(s, _word_for(b, bindings, spec)): c for (s, b), c in f.items()}, spec)


def commutative_image(p: NCPoly, bindings: Mapping[str, str] | None = None) -> ClassicalPoly:
    """Forget operator order, mapping operator symbols back to classical names."""
    inverse = {op: name for name, op in (bindings or {}).items()}
    out = []
    for (s, w), c in p.items():
        d: dict = {}
        for op in w:
            n = inverse.get(op, op)
            d[n] = d.get(n, 0) + 1
        out.append(((s, tuple(sorted(d.items()))), c))
    return ClassicalPoly(out)


def hermitize_unsound(f: ClassicalPoly, spec: CommutationSpec, grouping: tuple,
                      bindings: Mapping[str, str] | None = None,
                      acknowledge_unsound: bool = False) -> NCPoly:
    """Symmetrized product rule f1*f2 -> (F1 F2 + F2 F1)/2.

    This rule is inconsistent for noncommuting factors and is provided only to
    exhibit that.  Each grouping element is a simple :class:`ClassicalPoly`
    (quantized by the function rule) or an already-built :class:`NCPoly`.
    The result is flagged ``unsound``.
    """
    if acknowledge_unsound is not True:
        raise FlagMissing("hermitize_unsound requires acknowledge_unsound=True")
    if len(grouping) != 2:
        raise ValueError("grouping must be a pair (f1, f2)")
    parts = []
    images = []
    for g in grouping:
        if isinstance(g, NCPoly):
            parts.append(g.with_algebra(spec))
            images.append(commutative_image(g, bindings))
        elif isinstance(g, ClassicalPoly):
            parts.append(quantize(g, spec, bindings))
            images.append(g)
        else:
            raise TypeError("grouping elements must be ClassicalPoly or NCPoly")
    if images[0] * images[1] != f:
        raise ValueError(f"grouping ({images[0]}) * ({images[1]}) does not reproduce {f}")
    g1, g2 = parts
    out = (g1 * g2 + g2 * g1).scale(coef(ONE) / 2)
    out.unsound = True
    return out


def classical_symbols(polys: Iterable[ClassicalPoly]) -> set[str]:
    out: set[str] = set()
    for p in polys:
        out |= p.symbols()
    return out
