"""Exact commutative and noncommutative polynomials.

A term is keyed by ``(scalars, body)``.  ``scalars`` is a sorted tuple of
``(name, exponent)`` pairs over scalar parameters (``hbar``, ``gamma``, ``m``
...); exponents may be negative, which is how division by a scalar stays
exact.  ``body`` is a commutative monomial (sorted ``(name, exponent)``
pairs) for :class:`ClassicalPoly` and an ordered word of operator names for
:class:`NCPoly`.  Coefficients are Gaussian rationals.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Number
from typing import Iterable, Mapping

import numpy as np
from sympy.polys.domains import QQ, QQ_I

from ..errors import NonScalarCommutator, UnknownSymbol

HBAR = "hbar"

ZERO = QQ_I.zero
ONE = QQ_I.one
I_UNIT = QQ_I(0, 1)


def coef(x) -> "QQ_I.dtype":
    """Convert ints, Fractions, exact complex pairs and Gaussian rationals."""
    if isinstance(x, QQ_I.dtype):
        return x
    if isinstance(x, bool):
        x = int(x)
    if isinstance(x, int):
        return QQ_I(x, 0)
    if isinstance(x, Fraction):
        return QQ_I(QQ(x.numerator, x.denominator), 0)
    if isinstance(x, tuple) and len(x) == 2:
        re, im = (coef(t) for t in x)
        return re + im * I_UNIT
    if isinstance(x, complex):
        return coef(Fraction(x.real)) + coef(Fraction(x.imag)) * I_UNIT
    if isinstance(x, float):
        return coef(Fraction(x))
    raise TypeError(f"cannot use {x!r} as an exact coefficient")


def coef_complex(c) -> complex:
    return complex(float(c.x), float(c.y))


def coef_conj(c):
    return QQ_I(c.x, -c.y)


def coef_str(c) -> str:
    re, im = Fraction(int(c.x.numerator), int(c.x.denominator)), Fraction(int(c.y.numerator), int(c.y.denominator))
    if im == 0:
        return str(re)
    if re == 0:
        return "i" if im == 1 else "-i" if im == -1 else f"{im}*i"
    return f"({re}{'+' if im > 0 else '-'}{abs(im) if abs(im) != 1 else ''}{'*' if abs(im) != 1 else ''}i)"


def _mono_mul(a: tuple, b: tuple) -> tuple:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for name, e in b:
        e = d.get(name, 0) + e
        if e:
            d[name] = e
        else:
            d.pop(name, None)
    return tuple(sorted(d.items()))


def _mono_inv(a: tuple) -> tuple:
    return tuple((n, -e) for n, e in a)


def _mono_str(m: tuple) -> list[str]:
    out = []
    for n, e in m:
        out.append(n if e == 1 else f"{n}^{e}" if e > 0 else f"{n}^({e})")
    return out


class _Poly:
    """Shared linear structure; subclasses define body multiplication."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping | Iterable = ()):
        d: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for key, c in items:
            c = coef(c)
            if c == ZERO:
                continue
            c = d.get(key, ZERO) + c
            if c == ZERO:
                d.pop(key, None)
            else:
                d[key] = c
        self._terms = d
        self._hash = None

    # construction helpers -------------------------------------------------
    def _new(self, terms) -> "_Poly":
        raise NotImplementedError

    def _mul_body(self, a, b):
        raise NotImplementedError

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_scalar(self) -> bool:
        return all(not body for (_, body) in self._terms)

    def scalar_symbols(self) -> set[str]:
        return {n for (s, _) in self._terms for n, _e in s}

    # arithmetic ------------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, _Poly):
            if type(other) is not type(self):
                raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
            return other
        if isinstance(other, (Number, Fraction, QQ_I.dtype)):
            return self._new({((), ()): coef(other)})
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._new(list(self._terms.items()) + list(other._terms.items()))

    __radd__ = __add__

    def __neg__(self):
        return self._new({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = []
        for (s1, b1), c1 in self._terms.items():
            for (s2, b2), c2 in other._terms.items():
                out.append(((_mono_mul(s1, s2), self._mul_body(b1, b2)), c1 * c2))
        return self._new(out)

    def __rmul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers")
        out = self._new({((), ()): ONE})
        for _ in range(n):
            out = out * self
        return out

    def scale(self, c) -> "_Poly":
        c = coef(c)
        return self._new({k: v * c for k, v in self._terms.items()})

    def inverse_scalar(self) -> "_Poly":
        """Inverse of a single-term scalar; used for division."""
        if len(self._terms) != 1 or not self.is_scalar():
            raise ZeroDivisionError("can only divide by a nonzero scalar monomial")
        ((s, _), c), = self._terms.items()
        return self._new({(_mono_inv(s), ()): ONE / c})

    def __eq__(self, other):
        if isinstance(other, (Number, Fraction, QQ_I.dtype)):
            other = self._coerce(other)
        if type(other) is not type(self):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((type(self).__name__, frozenset(self._terms.items())))
        return self._hash

    # numeric evaluation ----------------------------------------------------
    def scalar_value(self, scalars: Mapping[str, complex], mono: tuple) -> complex:
        v = 1.0 + 0j
        for n, e in mono:
            if n not in scalars:
                raise UnknownSymbol(f"no numeric value for scalar {n!r}")
            v *= complex(scalars[n]) ** e
        return v

    def _body_str(self, body) -> list[str]:
        raise NotImplementedError

    def _sort_key(self, key):
        s, b = key
        return (-self._degree(b), str(b), str(s))

    def _degree(self, body) -> int:
        raise NotImplementedError

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for key in sorted(self._terms, key=self._sort_key):
            s, b = key
            c = self._terms[key]
            factors = _mono_str(s) + self._body_str(b)
            cs = coef_str(c)
            if factors:
                if cs == "1":
                    t = "*".join(factors)
                elif cs == "-1":
                    t = "-" + "*".join(factors)
                else:
                    t = cs + "*" + "*".join(factors)
            else:
                t = cs
            parts.append(t)
        out = parts[0]
        for t in parts[1:]:
            out += " - " + t[1:] if t.startswith("-") else " + " + t
        return out

    def __repr__(self):
        return f"{type(self).__name__}({self})"


class ClassicalPoly(_Poly):
    """Commutative polynomial over classical observables and scalars."""

    __slots__ = ()

    def _new(self, terms):
        return ClassicalPoly(terms)

    def _mul_body(self, a, b):
        return _mono_mul(a, b)

    def _degree(self, body):
        return sum(e for _, e in body)

    def _body_str(self, body):
        return _mono_str(body)

    @classmethod
    def const(cls, c) -> "ClassicalPoly":
        return cls({((), ()): coef(c)})

    @classmethod
    def symbol(cls, name: str) -> "ClassicalPoly":
        return cls({((), ((name, 1),)): ONE})

    @classmethod
    def scalar_symbol(cls, name: str) -> "ClassicalPoly":
        return cls({(((name, 1),), ()): ONE})

    def symbols(self) -> set[str]:
        return {n for (_, b) in self._terms for n, _e in b}

    def degree(self) -> int:
        return max((self._degree(b) for (_, b) in self._terms), default=0)

    def monomials(self) -> list[tuple]:
        return [b for (_, b) in self._terms]

    def diff(self, name: str) -> "ClassicalPoly":
        out = []
        for (s, b), c in self._terms.items():
            d = dict(b)
            e = d.get(name, 0)
            if not e:
                continue
            if e == 1:
                del d[name]
            else:
                d[name] = e - 1
            out.append(((s, tuple(sorted(d.items()))), c * coef(e)))
        return ClassicalPoly(out)

    def evaluate(self, values: Mapping[str, object], scalars: Mapping[str, complex] | None = None):
        """Numeric value; ``values`` entries may be numpy arrays (vectorized)."""
        scalars = {HBAR: 1.0, **(scalars or {})}
        total = 0.0
        for (s, b), c in self._terms.items():
            t = coef_complex(c) * self.scalar_value(scalars, s)
            for n, e in b:
                if n not in values:
                    raise UnknownSymbol(f"no value for observable {n!r}")
                t = t * np.asarray(values[n]) ** e
            total = total + t
        return total


class NCPoly(_Poly):
    """Noncommutative polynomial in operator symbols of a :class:`CommutationSpec`.

    ``unsound`` marks values built with the symmetrized-product rule; it
    propagates through arithmetic and is ignored by equality.
    """

    __slots__ = ("algebra", "unsound")

    def __init__(self, terms=(), algebra: "CommutationSpec | None" = None, unsound: bool = False):
        super().__init__(terms)
        self.algebra = algebra
        self.unsound = unsound

    def _new(self, terms, unsound=None):
        return NCPoly(terms, self.algebra, self.unsound if unsound is None else unsound)

    def __add__(self, other):
        out = super().__add__(other)
        if isinstance(other, NCPoly) and out is not NotImplemented:
            out.unsound = self.unsound or other.unsound
        return out

    __radd__ = __add__

    def __mul__(self, other):
        out = super().__mul__(other)
        if isinstance(other, NCPoly) and out is not NotImplemented:
            out.unsound = self.unsound or other.unsound
        return out

    def _mul_body(self, a, b):
        return a + b

    def _degree(self, body):
        return len(body)

    def _body_str(self, body):
        out = []
        i = 0
        while i < len(body):
            j = i
            while j < len(body) and body[j] == body[i]:
                j += 1
            out.append(body[i] if j - i == 1 else f"{body[i]}^{j - i}")
            i = j
        return out

    @classmethod
    def const(cls, c, algebra=None) -> "NCPoly":
        return cls({((), ()): coef(c)}, algebra)

    @classmethod
    def symbol(cls, name: str, algebra=None) -> "NCPoly":
        return cls({((), (name,)): ONE}, algebra)

    @classmethod
    def scalar_symbol(cls, name: str, algebra=None) -> "NCPoly":
        return cls({(((name, 1),), ()): ONE}, algebra)

    def symbols(self) -> set[str]:
        return {n for (_, w) in self._terms for n in w}

    def degree(self) -> int:
        return max((len(w) for (_, w) in self._terms), default=0)

    def words(self) -> list[tuple]:
        return [w for (_, w) in self._terms]

    def with_algebra(self, algebra) -> "NCPoly":
        return NCPoly(self._terms, algebra, self.unsound)

    def adjoint(self) -> "NCPoly":
        """Formal adjoint for Hermitian generators and real scalars."""
        return self._new({(s, tuple(reversed(w))): coef_conj(c) for (s, w), c in self._terms.items()})

    def to_matrix(self, bindings: Mapping[str, object], scalars: Mapping[str, complex] | None = None) -> np.ndarray:
        return nc_to_matrix(self, bindings, scalars)


# --------------------------------------------------------------------------
# commutation structure
# --------------------------------------------------------------------------

COMMUTING = "commuting"
NONCOMMUTING = "noncommuting"
SCALAR = "scalar"


def default_order(names: Iterable[str]) -> tuple[str, ...]:
    """Position-like names first, momentum-like (leading ``p``/``P``) last, then lexicographic."""
    return tuple(sorted(set(names), key=lambda n: (n[:1].lower() == "p", n)))


@dataclass(frozen=True, eq=False)
class CommutationSpec:
    """Total commutation table over operator symbols.

    ``symbols`` doubles as the canonical precedence order.  Scalar
    commutators are stored for the ordered pair ``(X, Y)`` with ``X``
    preceding ``Y``: ``[X, Y] = c``; ``c`` is a scalar-only mapping
    ``{scalar monomial: coefficient}``.
    """

    symbols: tuple[str, ...]
    scalars: frozenset[str] = frozenset({HBAR})
    relations: Mapping[frozenset, tuple] = field(default_factory=dict)
    default: str = COMMUTING

    def __post_init__(self):
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError("symbol names must be unique")
        scal = frozenset(self.scalars) | {HBAR}
        clash = scal & set(self.symbols)
        if clash:
            raise ValueError(f"names used both as scalar and operator symbol: {sorted(clash)}")
        if "i" in scal or "i" in self.symbols:
            raise ValueError("'i' is reserved for the imaginary unit")
        object.__setattr__(self, "scalars", scal)
        rel = {}
        for pair, r in dict(self.relations).items():
            pair = frozenset(pair)
            if len(pair) != 2 or not pair <= set(self.symbols):
                raise UnknownSymbol(f"relation on undeclared or degenerate pair {sorted(pair)}")
            rel[pair] = r
        object.__setattr__(self, "relations", rel)
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(self.symbols)})

    @classmethod
    def build(cls, symbols, scalars=(), commuting=(), noncommuting=(), scalar=None,
              default: str = COMMUTING, order: Iterable[str] | None = None) -> "CommutationSpec":
        """Convenience constructor.

        ``scalar`` maps ordered pairs ``(X, Y)`` to ``[X, Y]``, given as a
        number, a string in the expression grammar (e.g. ``"i*hbar"``) or a
        scalar-only :class:`NCPoly`.
        """
        symbols = tuple(order) if order is not None else default_order(symbols)
        scalars = frozenset(scalars) | {HBAR}
        rel: dict = {}
        for a, b in commuting:
            rel[frozenset((a, b))] = (COMMUTING, None)
        for a, b in noncommuting:
            rel[frozenset((a, b))] = (NONCOMMUTING, None)
        tmp = cls(symbols, scalars, rel, default)
        for (a, b), c in (scalar or {}).items():
            cval = tmp._scalar_value(c)
            if tmp.index(a) > tmp.index(b):
                a, b = b, a
                cval = {k: -v for k, v in cval.items()}
            if not cval:
                rel[frozenset((a, b))] = (COMMUTING, None)
            else:
                rel[frozenset((a, b))] = (SCALAR, (a, b, tuple(sorted(cval.items()))))
        return cls(symbols, scalars, rel, default)

    def _scalar_value(self, c) -> dict:
        if isinstance(c, str):
            from .parser import parse_expression
            c = parse_expression(c, "operator", self)
        if isinstance(c, _Poly):
            if not c.is_scalar():
                raise ValueError(f"commutator value {c} is not a scalar")
            return {s: v for (s, _), v in c.items()}
        v = coef(c)
        return {(): v} if v != ZERO else {}

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownSymbol(f"unknown operator symbol {name!r}") from None

    def has_symbol(self, name: str) -> bool:
        return name in self._index

    def relation(self, a: str, b: str) -> tuple[str, dict | None]:
        """Relation between ``a`` and ``b``; for scalars returns ``[a, b]``."""
        self.index(a)
        self.index(b)
        if a == b:
            return COMMUTING, None
        kind, data = self.relations.get(frozenset((a, b)), (self.default, None))
        if kind != SCALAR:
            return kind, None
        x, _y, c = data
        c = dict(c)
        return SCALAR, c if x == a else {k: -v for k, v in c.items()}

    def commutes(self, a: str, b: str) -> bool:
        return self.relation(a, b)[0] == COMMUTING

    def __repr__(self):
        return f"CommutationSpec(symbols={self.symbols}, scalars={sorted(self.scalars)})"


def nc_normal_form(p: NCPoly, algebra: CommutationSpec | None = None) -> NCPoly:
    """Canonical ordering using the declared scalar commutators.

    Every adjacent out-of-order pair ``Y X`` (``X`` preceding ``Y``) is
    rewritten to ``X Y - [X, Y]``; commuting pairs are swapped freely.
    """
    alg = algebra or p.algebra
    if alg is None:
        raise ValueError("normal form needs a CommutationSpec")
    cache: dict[tuple, dict] = {}

    def word_nf(word: tuple) -> dict:
        hit = cache.get(word)
        if hit is not None:
            return hit
        out: dict = {}
        for k in range(len(word) - 1):
            a, b = word[k], word[k + 1]
            if a != b and alg.index(a) > alg.index(b):
                kind, c = alg.relation(b, a)
                swapped = word_nf(word[:k] + (b, a) + word[k + 2:])
                out = dict(swapped)
                if kind == SCALAR:
                    # a b = b a - [b, a]
                    for (s, w), v in word_nf(word[:k] + word[k + 2:]).items():
                        for cs, cv in c.items():
                            key = (_mono_mul(s, cs), w)
                            out[key] = out.get(key, ZERO) - v * cv
                    out = {key: v for key, v in out.items() if v != ZERO}
                elif kind == NONCOMMUTING:
                    raise NonScalarCommutator(
                        f"cannot reorder {a}{b}: [{b}, {a}] is not declared as a scalar")
                break
        else:
            out = {((), word): ONE}
        cache[word] = out
        return out

    acc: dict = {}
    for (s, w), c in p.items():
        for (s2, w2), v in word_nf(tuple(w)).items():
            key = (_mono_mul(s, s2), w2)
            acc[key] = acc.get(key, ZERO) + c * v
    return NCPoly(acc, alg, p.unsound)


def nc_commutator(p: NCPoly, q: NCPoly) -> NCPoly:
    alg = p.algebra or q.algebra
    return nc_normal_form(p * q - q * p, alg)


def nc_to_matrix(p: NCPoly, bindings: Mapping[str, object], scalars: Mapping[str, complex] | None = None) -> np.ndarray:
    """Sum over words of coefficient times the ordered matrix product."""
    from ..errors import DimensionMismatch

    scalars = {HBAR: 1.0, **(scalars or {})}
    mats = {}
    for name, op in bindings.items():
        mats[name] = np.asarray(getattr(op, "matrix", op), dtype=complex)
    dims = {m.shape[0] for m in mats.values()}
    for m in mats.values():
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatch(f"binding is not a square matrix: shape {m.shape}")
    if len(dims) > 1:
        raise DimensionMismatch(f"bound operators have different dimensions {sorted(dims)}")
    if not dims:
        if not p.is_scalar():
            raise UnknownSymbol(f"no binding for {sorted(p.symbols())}")
        raise DimensionMismatch("cannot infer dimension of a scalar without bindings")
    (dim,) = dims
    out = np.zeros((dim, dim), dtype=complex)
    eye = np.eye(dim, dtype=complex)
    for (s, w), c in p.items():
        m = eye
        for name in w:
            if name not in mats:
                raise UnknownSymbol(f"no binding for operator symbol {name!r}")
            m = m @ mats[name]
        out += coef_complex(c) * p.scalar_value(scalars, s) * m
    return out
