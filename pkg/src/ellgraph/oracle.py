"""Independent series-level verifier.

Everything here avoids the collapse combinatorics entirely: propagators
become truncated Laurent series in one variable z with exact ring
coefficients, products are convolved, and residues are read off as the
z^{-1} coefficient.  Antiholomorphic (zbar-carrying) parts are tracked
as opaque markers whose only role is to be discarded at residue time,
since Res_{z=0}(zbar^l f(z) dz) = 0 for f with a holomorphic pole.

For collapses with spectator legs, propagators at shifted arguments are
Taylor-expanded into opaque "shifted propagator" symbols, so a residue
becomes a formal sum of ring coefficients times symbol products that
can be compared structurally against a residual-graph combination.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence, Union

from .graphs import DecoratedGraph, GraphCombination
from .ring import ONE, ZERO, RingElement, loop_value, rational

Scalar = Union[int, Fraction]


class OracleTruncationError(ArithmeticError):
    """A residue was requested beyond the exactly-known degrees."""


class _Opaque:
    """Marker coefficient for zbar-carrying terms; never evaluated."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "<zbar>"


OPAQUE = _Opaque()

Symbol = tuple[int, str, str]  # shifted propagator: (decoration, head, tail)


class FormalSum:
    """Finite sum of ring coefficients times monomials in opaque
    shifted-propagator symbols; the empty monomial embeds the ring."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[tuple[Symbol, ...], RingElement] | Iterable = ()):
        acc: dict[tuple[Symbol, ...], RingElement] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for mono, coeff in items:
            mono = tuple(sorted(tuple(s) for s in mono))
            if coeff.is_zero:
                continue
            prev = acc.get(mono)
            total = coeff if prev is None else prev + coeff
            if total.is_zero:
                acc.pop(mono, None)
            else:
                acc[mono] = total
        self._terms = dict(sorted(acc.items()))

    @classmethod
    def from_ring(cls, r: RingElement) -> "FormalSum":
        return cls([((), r)])

    @classmethod
    def zero(cls) -> "FormalSum":
        return cls()

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def items(self):
        return list(self._terms.items())

    def ring_part(self) -> RingElement:
        """Coefficient of the empty symbol monomial."""
        return self._terms.get((), ZERO)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FormalSum):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(tuple(self._terms.items()))

    def __add__(self, other: "FormalSum") -> "FormalSum":
        if not isinstance(other, FormalSum):
            return NotImplemented
        return FormalSum(list(self._terms.items()) + list(other._terms.items()))

    def __neg__(self) -> "FormalSum":
        return FormalSum([(m, -c) for m, c in self._terms.items()])

    def __sub__(self, other: "FormalSum") -> "FormalSum":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, FormalSum):
            out: list = []
            for m1, c1 in self._terms.items():
                for m2, c2 in other._terms.items():
                    out.append((m1 + m2, c1 * c2))
            return FormalSum(out)
        if isinstance(other, (int, Fraction, RingElement)):
            return FormalSum([(m, c * other) for m, c in self._terms.items()])
        return NotImplemented

    __rmul__ = __mul__

    def __repr__(self):
        if not self._terms:
            return "FormalSum(0)"
        bits = []
        for mono, coeff in self._terms.items():
            syms = "*".join(f"dP[{d}]({h}-{t})" for d, h, t in mono)
            bits.append(f"({coeff})" + (f"*{syms}" if syms else ""))
        return "FormalSum(" + " + ".join(bits) + ")"


Coefficient = Union[RingElement, FormalSum]


class BiSeries:
    """Truncated Laurent series in z with exact coefficients plus
    tracked zbar-carrying terms.

    Coefficients are exact for degrees in [min_deg, trunc]; degrees
    below min_deg are exact zeros, degrees above trunc are unknown.
    """

    __slots__ = ("coeffs", "min_deg", "trunc", "zbar", "zero_value")

    def __init__(
        self,
        coeffs: Mapping[int, Coefficient],
        min_deg: int,
        trunc: int,
        zbar: Iterable[tuple[int, int]] = (),
        zero_value: Coefficient = ZERO,
    ):
        if trunc < min_deg:
            raise ValueError("truncation below the minimum degree")
        clean = {}
        for d, c in coeffs.items():
            if d < min_deg or d > trunc:
                raise ValueError(f"coefficient degree {d} outside [{min_deg}, {trunc}]")
            if c:
                clean[d] = c
        self.coeffs = clean
        self.min_deg = min_deg
        self.trunc = trunc
        self.zbar = {(int(a), int(b)) for a, b in zbar}
        if any(b < 1 for _, b in self.zbar):
            raise ValueError("zbar terms need zbar-degree >= 1")
        self.zero_value = zero_value

    def coefficient(self, d: int) -> Coefficient:
        if d > self.trunc:
            raise OracleTruncationError(
                f"degree {d} beyond truncation {self.trunc}; raise the truncation"
            )
        if d < self.min_deg:
            return self.zero_value
        return self.coeffs.get(d, self.zero_value)

    def residue(self) -> Coefficient:
        """The z^{-1} coefficient; zbar-carrying terms contribute nothing."""
        return self.coefficient(-1)

    @property
    def holomorphic_only(self) -> bool:
        return not self.zbar

    def map_coeffs(self, fn: Callable[[Coefficient], Coefficient], zero_value: Coefficient) -> "BiSeries":
        return BiSeries(
            {d: fn(c) for d, c in self.coeffs.items()},
            self.min_deg,
            self.trunc,
            self.zbar,
            zero_value,
        )

    def __add__(self, other: "BiSeries") -> "BiSeries":
        trunc = min(self.trunc, other.trunc)
        min_deg = min(self.min_deg, other.min_deg)
        coeffs: dict[int, Coefficient] = {}
        for d in range(min_deg, trunc + 1):
            c = self.coefficient(d) + other.coefficient(d)
            if c:
                coeffs[d] = c
        return BiSeries(coeffs, min_deg, trunc, self.zbar | other.zbar, self.zero_value)

    def __neg__(self) -> "BiSeries":
        return BiSeries(
            {d: -c for d, c in self.coeffs.items()},
            self.min_deg,
            self.trunc,
            self.zbar,
            self.zero_value,
        )

    def scale(self, factor) -> "BiSeries":
        return BiSeries(
            {d: c * factor for d, c in self.coeffs.items()},
            self.min_deg,
            self.trunc,
            self.zbar,
            self.zero_value,
        )

    def __mul__(self, other: "BiSeries") -> "BiSeries":
        trunc = min(self.trunc + other.min_deg, other.trunc + self.min_deg)
        min_deg = self.min_deg + other.min_deg
        coeffs: dict[int, Coefficient] = {}
        for d1, c1 in self.coeffs.items():
            for d2, c2 in other.coeffs.items():
                d = d1 + d2
                if d > trunc:
                    continue
                product = c1 * c2
                if not product:
                    continue
                prev = coeffs.get(d)
                total = product if prev is None else prev + product
                if total:
                    coeffs[d] = total
                else:
                    coeffs.pop(d, None)
        zbar = set()
        for a, b in self.zbar:
            for d2 in other.coeffs:
                zbar.add((a + d2, b))
            for a2, b2 in other.zbar:
                zbar.add((a + a2, b + b2))
        for a, b in other.zbar:
            for d1 in self.coeffs:
                zbar.add((d1 + a, b))
        return BiSeries(coeffs, min_deg, trunc, zbar, self.zero_value)

    def shift(self, k: int) -> "BiSeries":
        """Multiply by the monomial z^k."""
        return BiSeries(
            {d + k: c for d, c in self.coeffs.items()},
            self.min_deg + k,
            self.trunc + k,
            {(a + k, b) for a, b in self.zbar},
            self.zero_value,
        )

    def reverse(self) -> "BiSeries":
        """Substitute z -> -z (and zbar -> -zbar; opaque markers absorb it)."""
        return BiSeries(
            {d: c * Fraction((-1) ** abs(d)) for d, c in self.coeffs.items()},
            self.min_deg,
            self.trunc,
            self.zbar,
            self.zero_value,
        )

    def derivative(self) -> "BiSeries":
        """Formal d/dz; a zbar term with z-degree zero differentiates away."""
        coeffs = {d - 1: c * d for d, c in self.coeffs.items() if d != 0}
        return BiSeries(
            coeffs,
            self.min_deg - 1,
            self.trunc - 1,
            {(a - 1, b) for a, b in self.zbar if a != 0},
            self.zero_value,
        )

    def __repr__(self):
        body = " + ".join(f"({c})z^{d}" for d, c in sorted(self.coeffs.items()))
        tail = f" [+{len(self.zbar)} zbar terms]" if self.zbar else ""
        return f"BiSeries({body or '0'}; trunc={self.trunc}){tail}"


# -- propagator series ------------------------------------------------------------


def series_zhat(truncation: int) -> BiSeries:
    """The decoration-(-1) propagator: -1/z + zbar-linear term +
    sum_{k>=0} W_{k-1}/k! z^k."""
    if truncation < 0:
        raise ValueError("truncation must be >= 0")
    coeffs: dict[int, RingElement] = {-1: -ONE}
    for k in range(truncation + 1):
        w = loop_value(k - 1)
        if not w.is_zero:
            coeffs[k] = w / math.factorial(k)
    return BiSeries(coeffs, -1, truncation, zbar={(0, 1)})


def series_phat_deriv(n: int, truncation: int) -> BiSeries:
    """The decoration-n propagator for n >= 0:
    (-1)^n (n+1)!/z^{n+2} + sum_{k>=0} W_{n+k}/k! z^k."""
    if n < 0:
        raise ValueError("series_phat_deriv needs n >= 0")
    coeffs: dict[int, RingElement] = {
        -(n + 2): rational(Fraction((-1) ** n * math.factorial(n + 1)))
    }
    for k in range(truncation + 1):
        w = loop_value(n + k)
        if not w.is_zero:
            coeffs[k] = w / math.factorial(k)
    return BiSeries(coeffs, -(n + 2), truncation)


def series_propagator(n: int, truncation: int) -> BiSeries:
    return series_zhat(truncation) if n == -1 else series_phat_deriv(n, truncation)


def series_shift_expand(
    n: int, offset_tag: str, truncation: int, head_first: bool = True, base: str = "w"
) -> BiSeries:
    """Taylor expansion of a decoration-n propagator at a shifted
    argument: the z^u coefficient is the shifted-propagator symbol of
    decoration n+u with factor 1/u!.  Decoration -1 also carries one
    constant zbar-linear opaque term."""
    if truncation < 0:
        raise ValueError("truncation must be >= 0")
    endpoints = (base, offset_tag) if head_first else (offset_tag, base)
    coeffs: dict[int, FormalSum] = {}
    for u in range(truncation + 1):
        sym: Symbol = (n + u, endpoints[0], endpoints[1])
        coeffs[u] = FormalSum([((sym,), ONE / math.factorial(u))])
    zbar = {(0, 1)} if n == -1 else set()
    return BiSeries(coeffs, 0, truncation, zbar=zbar, zero_value=FormalSum.zero())


# -- residue extraction for a collapse event ---------------------------------------


def _normalize_vw(decs_vw) -> list[tuple[int, bool]]:
    out = []
    for item in decs_vw:
        if isinstance(item, int):
            out.append((item, True))
        else:
            dec, head_is_v = item
            out.append((int(dec), bool(head_is_v)))
    return out


def _normalize_other(decs_other) -> list[tuple[int, bool, str]]:
    out = []
    for item in decs_other:
        if len(item) == 2:
            dec, tag = item
            out.append((int(dec), True, str(tag)))
        else:
            dec, head_is_v, tag = item
            out.append((int(dec), bool(head_is_v), str(tag)))
    return out


def oracle_residue_2vertex(
    decs_vw: Sequence,
    decs_other: Sequence = (),
    k: int = 1,
    w_label: str = "w",
) -> FormalSum:
    """Residue at the collision of two vertices, computed purely from
    series.

    ``decs_vw`` lists the direct edges as decorations or
    (decoration, head_is_v) pairs; ``decs_other`` lists spectator legs
    at the eliminated vertex as (decoration, tag) or
    (decoration, head_is_v, tag).  The product of all series times z^k
    is formed and the z^{-1} coefficient extracted; zbar terms drop.
    """
    vw = _normalize_vw(decs_vw)
    other = _normalize_other(decs_other)
    if not vw:
        raise ValueError("need at least one direct edge between the colliding vertices")
    singular = sum(d + 2 if d >= 0 else 1 for d, _ in vw)
    truncation = singular + 2
    factors: list[BiSeries] = []
    for dec, head_is_v in vw:
        s = series_propagator(dec, truncation)
        if not head_is_v:
            s = s.reverse()
        factors.append(s.map_coeffs(FormalSum.from_ring, FormalSum.zero()))
    for dec, head_is_v, tag in other:
        s = series_shift_expand(dec, tag, truncation, head_first=head_is_v, base=w_label)
        if not head_is_v:
            s = s.reverse()
        factors.append(s)
    total_min = sum(f.min_deg for f in factors)
    product = BiSeries(
        {0: FormalSum.from_ring(ONE)}, 0, truncation - total_min + 2, zero_value=FormalSum.zero()
    )
    for f in factors:
        product = product * f
    product = product.shift(k)
    if product.trunc < -1:
        raise OracleTruncationError("truncation insufficient for the requested residue")
    return product.residue()


def oracle_evaluate_banana(decorations: Sequence[int]) -> RingElement:
    """Direct banana evaluation: the residue of the product of the edge
    propagator series with +Zhat (the negated stored series)."""
    if not decorations:
        raise ValueError("a banana graph needs at least one edge")
    if any(d < 0 for d in decorations):
        raise ValueError("decorations must be naturals")
    singular = sum(d + 2 for d in decorations) + 1
    truncation = singular + 2
    product = -series_zhat(truncation)
    for d in decorations:
        product = product * series_phat_deriv(d, truncation)
    if product.trunc < -1:
        raise OracleTruncationError("truncation insufficient for the requested residue")
    return product.residue()


def combination_to_formal(comb: GraphCombination, drop_zero: bool = True) -> FormalSum:
    """Structural image of a residual-graph combination: loops become
    their loop values, surviving edges become shifted-propagator
    symbols keyed by (decoration, head, tail)."""
    total = FormalSum.zero()
    for g, c in comb:
        coeff = c * ONE
        for _, dec in g.loops:
            coeff = coeff * loop_value(dec)
            if coeff.is_zero:
                break
        if coeff.is_zero and drop_zero:
            continue
        mono = tuple((dec, head, tail) for head, tail, dec in g.edges)
        total = total + FormalSum([(mono, coeff)])
    return total
