"""Exact arithmetic in the graded ring Q[pi][E2h, E4, E6].

Almost-holomorphic modular forms are polynomials in the completed
Eisenstein series E2h with coefficients in Q[E4, E6]; pi is carried as a
formal variable with an integer exponent so that every value in the
package is an exact rational expression.  A monomial of weight
w = 2*e2 + 4*e4 + 6*e6 whose pi-exponent equals w is called
weight-matched; all graph integrals land in the weight-matched part of
the ring (or are zero).

This module also provides the numeric backbone: Bernoulli numbers, even
zeta values, Eisenstein q-expansions, the reduction of E_k (k >= 8) into
the E4/E6 polynomial basis, and the loop values W_k.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Union

Scalar = Union[int, Fraction]
Monomial = tuple[int, int, int, int]  # exponents of (pi, E2h, E4, E6)

_VAR_NAMES = ("pi", "E2h", "E4", "E6")
_LATEX_NAMES = ("\\pi", "\\widehat{E}_2", "E_4", "E_6")

_COEFF_RE = re.compile(r"^\((-?\d+(?:/\d+)?)\)$")
_FACTOR_RE = re.compile(r"^(pi|E2h|E4|E6)(?:\^(\d+))?$")


class RingElement:
    """A canonical finite sum of monomials c * pi^p * E2h^a * E4^b * E6^c.

    Terms carry nonzero rational coefficients, exponent tuples are
    pairwise distinct, and storage order is descending lexicographic on
    (pi, E2h, E4, E6).  Instances are immutable and hashable; equality
    is equality of the canonical term lists.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Monomial, Scalar] | Iterable[tuple[Monomial, Scalar]] = ()):
        acc: dict[Monomial, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for mono, coeff in items:
            if len(mono) != 4:
                raise ValueError(f"monomial must have 4 exponents, got {mono!r}")
            key = tuple(int(x) for x in mono)
            if min(key) < 0:
                raise ValueError(f"negative exponent in monomial {mono!r}")
            c = Fraction(coeff)
            if not c:
                continue
            prev = acc.get(key)
            total = c if prev is None else prev + c
            if total:
                acc[key] = total
            elif prev is not None:
                del acc[key]
        self._terms = tuple(sorted(acc.items(), key=lambda t: t[0], reverse=True))

    @property
    def terms(self) -> tuple[tuple[Monomial, Fraction], ...]:
        return self._terms

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RingElement):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(self._terms)

    def __add__(self, other: "RingElement") -> "RingElement":
        if not isinstance(other, RingElement):
            return NotImplemented
        return RingElement(list(self._terms) + list(other._terms))

    def __radd__(self, other):
        # supports sum() over elements
        if other == 0:
            return self
        return NotImplemented

    def __neg__(self) -> "RingElement":
        return RingElement([(m, -c) for m, c in self._terms])

    def __sub__(self, other: "RingElement") -> "RingElement":
        if not isinstance(other, RingElement):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, RingElement):
            acc: dict[Monomial, Fraction] = {}
            for (p1, a1, b1, c1), q1 in self._terms:
                for (p2, a2, b2, c2), q2 in other._terms:
                    key = (p1 + p2, a1 + a2, b1 + b2, c1 + c2)
                    prev = acc.get(key)
                    total = q1 * q2 if prev is None else prev + q1 * q2
                    if total:
                        acc[key] = total
                    elif prev is not None:
                        del acc[key]
            return RingElement(acc)
        if isinstance(other, (int, Fraction)):
            if not other:
                return ZERO
            return RingElement([(m, c * other) for m, c in self._terms])
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, scalar: Scalar) -> "RingElement":
        return self * (1 / Fraction(scalar))

    def __pow__(self, n: int) -> "RingElement":
        if n < 0:
            raise ValueError("negative powers are not defined in this ring")
        out = ONE
        for _ in range(n):
            out = out * self
        return out

    # -- text / JSON / LaTeX -------------------------------------------------

    def to_text(self) -> str:
        """Canonical plain-text form, e.g. ``(-1/9)*pi^4*E2h^2 + (1/9)*pi^4*E4``."""
        if not self._terms:
            return "0"
        parts = []
        for mono, coeff in self._terms:
            factors = [f"({coeff})"]
            for name, exp in zip(_VAR_NAMES, mono):
                if exp == 0:
                    continue
                factors.append(name if exp == 1 else f"{name}^{exp}")
            parts.append("*".join(factors))
        return " + ".join(parts)

    @classmethod
    def from_text(cls, text: str) -> "RingElement":
        text = text.strip()
        if text == "0":
            return ZERO
        terms = []
        for chunk in text.split("+"):
            chunk = chunk.strip()
            if not chunk:
                raise ValueError("empty term in ring-element text")
            factors = chunk.split("*")
            m = _COEFF_RE.match(factors[0].strip())
            if not m:
                raise ValueError(f"term must start with a parenthesised rational: {chunk!r}")
            coeff = Fraction(m.group(1))
            expo = {name: 0 for name in _VAR_NAMES}
            seen = set()
            for fac in factors[1:]:
                fm = _FACTOR_RE.match(fac.strip())
                if not fm:
                    raise ValueError(f"bad factor {fac!r} in term {chunk!r}")
                name = fm.group(1)
                if name in seen:
                    raise ValueError(f"repeated factor {name!r} in term {chunk!r}")
                seen.add(name)
                expo[name] = int(fm.group(2)) if fm.group(2) else 1
            terms.append(((expo["pi"], expo["E2h"], expo["E4"], expo["E6"]), coeff))
        return cls(terms)

    def to_json_obj(self) -> dict:
        return {
            "terms": [
                {"coeff": str(c), "pi": m[0], "E2h": m[1], "E4": m[2], "E6": m[3]}
                for m, c in self._terms
            ]
        }

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "RingElement":
        terms = []
        for t in obj["terms"]:
            mono = (int(t.get("pi", 0)), int(t.get("E2h", 0)), int(t.get("E4", 0)), int(t.get("E6", 0)))
            terms.append((mono, Fraction(str(t["coeff"]))))
        return cls(terms)

    def to_latex(self) -> str:
        if not self._terms:
            return "0"
        rendered = []
        for i, (mono, coeff) in enumerate(self._terms):
            sign = "-" if coeff < 0 else ("" if i == 0 else "+")
            c = abs(coeff)
            vars_part = ""
            for name, exp in zip(_LATEX_NAMES, mono):
                if exp == 0:
                    continue
                vars_part += name if exp == 1 else f"{name}^{{{exp}}}"
            if c.denominator == 1:
                num = "" if (c == 1 and vars_part) else str(c.numerator)
            else:
                num = f"\\frac{{{c.numerator}}}{{{c.denominator}}}"
            rendered.append((" " if i else "") + (sign + (" " if i and sign else "")) + num + vars_part)
        return "".join(rendered)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"RingElement({self.to_text()!r})"


def rational(q: Scalar) -> RingElement:
    """The constant element q."""
    return RingElement([((0, 0, 0, 0), Fraction(q))])


ZERO = RingElement()
ONE = rational(1)
PI = RingElement([((1, 0, 0, 0), 1)])
E2H = RingElement([((0, 1, 0, 0), 1)])
E4 = RingElement([((0, 0, 1, 0), 1)])
E6 = RingElement([((0, 0, 0, 1), 1)])


def monomial_weight(mono: Monomial) -> int:
    return 2 * mono[1] + 4 * mono[2] + 6 * mono[3]


def is_homogeneous(elt: RingElement, weight: int | None = None) -> bool:
    """True when every term has the same weight with matching pi-power.

    Zero is vacuously homogeneous of any weight.  If ``weight`` is given
    the common weight must equal it.
    """
    if elt.is_zero:
        return True
    w = monomial_weight(elt.terms[0][0]) if weight is None else weight
    return all(monomial_weight(m) == w and m[0] == w for m, _ in elt.terms)


def partial_Y(elt: RingElement) -> RingElement:
    """The derivation of the ring along its non-holomorphic generator.

    E2h completes E2 by a multiple of the generator Y = -pi/Im(tau):
    E2h = E2 + (3/pi^2)*Y, so the derivation acts as (3/pi^2) * d/dE2h.
    On a monomial (c, p, a, b, c6) with a >= 1 this yields
    (3*a*c, p-2, a-1, b, c6); monomials without E2h map to zero.
    """
    out: list[tuple[Monomial, Fraction]] = []
    for (p, a, b, c6), coeff in elt.terms:
        if a == 0:
            continue
        if p < 2:
            raise ValueError(
                f"cannot lower pi-exponent {p} of an E2h term; element is not weight-matched"
            )
        out.append(((p - 2, a - 1, b, c6), 3 * a * coeff))
    return RingElement(out)


# -- Bernoulli numbers, zeta values, Eisenstein series ------------------------


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """Bernoulli number B_n with the convention B_1 = -1/2."""
    if n < 0:
        raise ValueError("bernoulli is defined for n >= 0")
    if n == 0:
        return Fraction(1)
    # sum_{k=0}^{n} C(n+1, k) B_k = 0
    total = Fraction(0)
    for k in range(n):
        total += math.comb(n + 1, k) * bernoulli(k)
    return -total / (n + 1)


def zeta_even(k: int) -> RingElement:
    """zeta(k) for even k >= 2, as an exact rational multiple of pi^k."""
    if k < 2 or k % 2:
        raise ValueError(f"zeta_even needs an even argument >= 2, got {k}")
    n = k // 2
    q = Fraction((-1) ** (n + 1)) * bernoulli(k) * Fraction(2**k, 2 * math.factorial(k))
    return RingElement([((k, 0, 0, 0), q)])


def _sigma(n: int, power: int) -> int:
    return sum(d**power for d in range(1, n + 1) if n % d == 0)


def q_expansion(k: int, n_terms: int) -> list[Fraction]:
    """First n_terms coefficients of the normalized Eisenstein q-series E_k."""
    if k < 2 or k % 2:
        raise ValueError(f"q_expansion needs an even weight >= 2, got {k}")
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    factor = Fraction(2 * k) / bernoulli(k)
    coeffs = [Fraction(1)]
    for m in range(1, n_terms):
        coeffs.append(-factor * _sigma(m, k - 1))
    return coeffs


def _qmul(a: list[Fraction], b: list[Fraction], n: int) -> list[Fraction]:
    out = [Fraction(0)] * n
    for i, ai in enumerate(a[:n]):
        if not ai:
            continue
        for j, bj in enumerate(b[: n - i]):
            out[i + j] += ai * bj
    return out


def _weight_basis(k: int) -> list[tuple[int, int]]:
    """Exponent pairs (a, b) with 4a + 6b = k, E4-dominant first."""
    basis = []
    for b in range(k // 6 + 1):
        rem = k - 6 * b
        if rem >= 0 and rem % 4 == 0:
            basis.append((rem // 4, b))
    return sorted(basis, reverse=True)


@lru_cache(maxsize=None)
def reduce_Ek(k: int) -> RingElement:
    """E_k as the unique weight-k polynomial in E4 and E6.

    Solved by matching q-expansions over the monomial basis
    {E4^a E6^b : 4a+6b=k}; the system is set up with two more equations
    than unknowns and the surplus rows are verified, which guards
    against divisor-sum mistakes.
    """
    if k < 4 or k % 2:
        raise ValueError(f"reduce_Ek needs an even weight >= 4, got {k}")
    basis = _weight_basis(k)
    d = len(basis)
    n = d + 2
    e4q = q_expansion(4, n)
    e6q = q_expansion(6, n)
    columns = []
    for a, b in basis:
        series = [Fraction(1)] + [Fraction(0)] * (n - 1)
        for _ in range(a):
            series = _qmul(series, e4q, n)
        for _ in range(b):
            series = _qmul(series, e6q, n)
        columns.append(series)
    target = q_expansion(k, n)

    # exact Gaussian elimination on the n x (d+1) augmented system
    rows = [[columns[j][i] for j in range(d)] + [target[i]] for i in range(n)]
    pivot_row = 0
    for col in range(d):
        pr = next((r for r in range(pivot_row, n) if rows[r][col]), None)
        if pr is None:
            raise ArithmeticError(f"q-expansion system is singular at weight {k}")
        rows[pivot_row], rows[pr] = rows[pr], rows[pivot_row]
        piv = rows[pivot_row][col]
        rows[pivot_row] = [x / piv for x in rows[pivot_row]]
        for r in range(n):
            if r != pivot_row and rows[r][col]:
                factor = rows[r][col]
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[pivot_row])]
        pivot_row += 1
    # surplus rows must have vanished entirely
    for r in range(d, n):
        if any(rows[r]):
            raise ArithmeticError(f"inconsistent q-expansion system at weight {k}")
    solution = [rows[i][d] for i in range(d)]
    return RingElement([((0, 0, a, b), x) for (a, b), x in zip(basis, solution)])


def eisenstein_G(k: int) -> RingElement:
    """The full lattice Eisenstein value G_k = 2*zeta(k)*E_k for even k >= 4."""
    if k % 2:
        raise ValueError(f"G_k vanishes for odd k; eisenstein_G got {k}")
    if k < 4:
        raise ValueError(f"eisenstein_G needs k >= 4, got {k}")
    return zeta_even(k) * reduce_Ek(k) * 2


@lru_cache(maxsize=None)
def loop_value(k: int) -> RingElement:
    """The loop value W_k: the regularized self-contraction of order k.

    W_{-1} = 0, W_0 = (pi^2/3)*E2h, W_k = 0 for odd k, and
    W_k = (k+1)! * G_{k+2} for even k >= 2.
    """
    if k < -1:
        raise ValueError(f"loop values are defined for k >= -1, got {k}")
    if k == -1:
        return ZERO
    if k == 0:
        return RingElement([((2, 1, 0, 0), Fraction(1, 3))])
    if k % 2:
        return ZERO
    return math.factorial(k + 1) * eisenstein_G(k + 2)
