"""Independent reference implementations used by the tests.

None of these import the rewriting or measurement code they check.
"""
from __future__ import annotations

import itertools

import numpy as np
import sympy
from sympy.polys.domains import QQ_I

X = sympy.Symbol("X")


def scalar_sym(name):
    return sympy.Symbol(name)


def ncpoly_as_differential_operator(p, f, position="x", momentum="p"):
    """Act with NCPoly ``p`` on the sympy expression ``f(X)``.

    ``position`` acts as multiplication by X and ``momentum`` as
    -i*hbar*d/dX; words act right-to-left like operator products.
    """
    hbar = sympy.Symbol("hbar")
    total = sympy.Integer(0)
    for (scalars, word), c in p.items():
        g = f
        for sym in reversed(word):
            if sym == position:
                g = X * g
            elif sym == momentum:
                g = -sympy.I * hbar * sympy.diff(g, X)
            else:
                raise ValueError(f"oracle only knows {position}, {momentum}")
        factor = QQ_I.to_sympy(c)
        for n, e in scalars:
            factor *= scalar_sym(n) ** e
        total += factor * g
    return sympy.expand(total)


def same_action(p, q, max_power=8):
    for k in range(max_power + 1):
        d = ncpoly_as_differential_operator(p, X ** k) - ncpoly_as_differential_operator(q, X ** k)
        if sympy.expand(d) != 0:
            return False
    return True


def enumerate_joint_expectation(copies, f, v0):
    """Brute-force expected output by explicit enumeration of every outcome path.

    ``copies`` is a list of lists of (label, matrix); ``f`` maps a dict of
    label->value to a number.  Uses a full eigendecomposition per step and
    Lueders projectors built from eigenvalue grouping at 1e-9.
    """
    v0 = np.asarray(v0, dtype=complex)

    def branches(ops, state):
        if not ops:
            yield {}, 1.0
            return
        (label, m), rest = ops[0], ops[1:]
        w, vecs = np.linalg.eigh(m)
        groups = []
        for i in range(len(w)):
            for g in groups:
                if abs(w[g[0]] - w[i]) < 1e-9:
                    g.append(i)
                    break
            else:
                groups.append([i])
        for g in groups:
            P = vecs[:, g] @ vecs[:, g].conj().T
            proj = P @ state
            prob = float(np.vdot(proj, proj).real)
            if prob < 1e-300:
                continue
            for vals, q in branches(rest, proj / np.sqrt(prob)):
                yield {label: float(np.mean(w[g])), **vals}, prob * q

    per_copy = [list(branches(list(ops), v0)) for ops in copies]
    total = 0.0
    for combo in itertools.product(*per_copy):
        vals = {}
        prob = 1.0
        for d, q in combo:
            vals.update(d)
            prob *= q
        total += prob * f(vals)
    return total
