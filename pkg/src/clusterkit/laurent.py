"""Exact sparse Laurent polynomials over the integers.

A monomial is a sorted tuple of (variable index, nonzero exponent) pairs;
variable indices are positive integers.  A polynomial maps monomials to
nonzero integer coefficients.  Coefficients are Python ints, so they are
arbitrary precision by construction.  Values are immutable and hashable.

Division is deliberately absent: every formula in this package is Laurent,
so denominators are expressed with negative exponents.  The certified exact
division needed by seed mutation lives in the engine module.
"""

from __future__ import annotations

import json
from typing import Iterable, Iterator, Mapping

Monomial = tuple  # tuple[tuple[int, int], ...], sorted by variable index

MONO_ONE: Monomial = ()


def mono(exponents: Mapping[int, int]) -> Monomial:
    """Canonical monomial from a variable -> exponent mapping."""
    items = tuple(sorted((v, e) for v, e in exponents.items() if e != 0))
    for v, _ in items:
        if v < 1:
            raise ValueError(f"variable index must be positive, got {v}")
    return items


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    la, lb = len(a), len(b)
    while i < la and j < lb:
        va, ea = a[i]
        vb, eb = b[j]
        if va == vb:
            e = ea + eb
            if e:
                out.append((va, e))
            i += 1
            j += 1
        elif va < vb:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


class LaurentPoly:
    """Immutable sparse Laurent polynomial with integer coefficients."""

    __slots__ = ("terms", "_key")

    def __init__(self, terms: Mapping[Monomial, int] | None = None):
        # Trusted constructor: zero coefficients are dropped, keys assumed canonical.
        if terms:
            self.terms = {m: c for m, c in terms.items() if c}
        else:
            self.terms = {}
        self._key = None

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero() -> "LaurentPoly":
        return _ZERO

    @staticmethod
    def one() -> "LaurentPoly":
        return _ONE

    @staticmethod
    def integer(c: int) -> "LaurentPoly":
        return LaurentPoly({MONO_ONE: c})

    @staticmethod
    def variable(i: int, exponent: int = 1) -> "LaurentPoly":
        return LaurentPoly({mono({i: exponent}): 1})

    @staticmethod
    def monomial(exponents: Mapping[int, int], coeff: int = 1) -> "LaurentPoly":
        return LaurentPoly({mono(exponents): coeff})

    @staticmethod
    def from_terms(pairs: Iterable[tuple[Monomial, int]]) -> "LaurentPoly":
        acc: dict[Monomial, int] = {}
        for m, c in pairs:
            nc = acc.get(m, 0) + c
            if nc:
                acc[m] = nc
            elif m in acc:
                del acc[m]
        return LaurentPoly(acc)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        if not self.terms:
            return other
        if not other.terms:
            return self
        acc = dict(self.terms)
        for m, c in other.terms.items():
            nc = acc.get(m, 0) + c
            if nc:
                acc[m] = nc
            else:
                del acc[m]
        return LaurentPoly(acc)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        if not self.terms or not other.terms:
            return _ZERO
        if len(self.terms) > len(other.terms):
            self, other = other, self
        acc: dict[Monomial, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                nc = acc.get(m, 0) + c1 * c2
                if nc:
                    acc[m] = nc
                elif m in acc:
                    del acc[m]
        return LaurentPoly(acc)

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            if len(self.terms) == 1:
                ((m, c),) = self.terms.items()
                if c in (1, -1):
                    inv = tuple((v, -e) for v, e in m)
                    return LaurentPoly({inv: c}) ** (-k)
            raise ValueError("negative powers only defined for unit monomials")
        result = _ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return self.terms == {MONO_ONE: 1}

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def __len__(self) -> int:
        return len(self.terms)

    def coefficient_sum(self) -> int:
        """Value at all variables set to 1 (number of terms with multiplicity)."""
        return sum(self.terms.values())

    def support(self) -> list[int]:
        vs: set[int] = set()
        for m in self.terms:
            for v, _ in m:
                vs.add(v)
        return sorted(vs)

    def min_exponent(self, v: int) -> int:
        """Smallest exponent of variable v over all terms (0 counts for absent)."""
        if not self.terms:
            return 0
        return min(dict(m).get(v, 0) for m in self.terms)

    def denominator_vector(self, nvars: int) -> tuple[int, ...]:
        """Per-variable denominator exponents: -min exponent, clamped from below.

        Initial variables come out as -1 in their own coordinate by this
        convention, matching the denominator parametrization used throughout.
        """
        return tuple(-self.min_exponent(i) for i in range(1, nvars + 1))

    def key(self) -> tuple:
        """Hashable canonical form (terms sorted by monomial)."""
        if self._key is None:
            self._key = tuple(sorted(self.terms.items()))
        return self._key

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"LaurentPoly({canonical_string(self)})"

    # -- substitutions -----------------------------------------------------

    def substitute_one(self, variables: Iterable[int]) -> "LaurentPoly":
        return substitute_one(self, variables)

    def rename(self, mapping: Mapping[int, int]) -> "LaurentPoly":
        return rename(self, mapping)


_ZERO = LaurentPoly()
_ONE = LaurentPoly({MONO_ONE: 1})


def substitute_one(p: LaurentPoly, variables: Iterable[int]) -> LaurentPoly:
    """Set every listed variable to 1, i.e. drop its exponents and re-merge."""
    drop = set(variables)
    if not drop:
        return p
    acc: dict[Monomial, int] = {}
    for m, c in p.terms.items():
        m2 = tuple(pair for pair in m if pair[0] not in drop)
        nc = acc.get(m2, 0) + c
        if nc:
            acc[m2] = nc
        elif m2 in acc:
            del acc[m2]
    return LaurentPoly(acc)


def rename(p: LaurentPoly, mapping: Mapping[int, int]) -> LaurentPoly:
    """Relabel variables; mapping must be injective on the support of p."""
    targets = list(mapping.values())
    if len(set(targets)) != len(targets):
        raise ValueError("rename mapping is not injective")
    acc: dict[Monomial, int] = {}
    for m, c in p.terms.items():
        m2 = mono({mapping.get(v, v): e for v, e in m})
        if m2 in acc:
            raise ValueError("rename mapping collapses distinct variables")
        acc[m2] = c
    return LaurentPoly(acc)


# -- deterministic rendering -----------------------------------------------


def _sort_key(p: LaurentPoly):
    vs = p.support()

    def key(m: Monomial):
        d = dict(m)
        vec = tuple(d.get(v, 0) for v in vs)
        # ascending total degree, then descending lexicographic exponent vector
        return (mono_degree(m), tuple(-e for e in vec))

    return key


def sorted_terms(p: LaurentPoly) -> list[tuple[Monomial, int]]:
    key = _sort_key(p)
    return sorted(p.terms.items(), key=lambda mc: key(mc[0]))


def _mono_string(m: Monomial) -> str:
    if not m:
        return "1"
    parts = []
    for v, e in m:
        parts.append(f"x{v}" if e == 1 else f"x{v}^{e}")
    return "*".join(parts)


def canonical_string(p: LaurentPoly) -> str:
    """Deterministic flat rendering used for golden tests and dedup keys."""
    if not p.terms:
        return "0"
    chunks = []
    for m, c in sorted_terms(p):
        if c == 1 and m:
            body = _mono_string(m)
        elif c == -1 and m:
            body = "-" + _mono_string(m)
        elif not m:
            body = str(c)
        else:
            body = f"{c}*{_mono_string(m)}"
        chunks.append(body)
    out = chunks[0]
    for chunk in chunks[1:]:
        out += " - " + chunk[1:] if chunk.startswith("-") else " + " + chunk
    return out


def rational_string(p: LaurentPoly) -> str:
    """Numerator/denominator rendering: negative exponents are cleared into
    a single monomial denominator."""
    if not p.terms:
        return "0"
    den: dict[int, int] = {}
    for v in p.support():
        e = p.min_exponent(v)
        if e < 0:
            den[v] = -e
    if not den:
        return canonical_string(p)
    num = p * LaurentPoly.monomial(den)
    den_str = "*".join(f"x{v}" if e == 1 else f"x{v}^{e}" for v, e in sorted(den.items()))
    return f"({canonical_string(num)})/({den_str})"


# -- JSON form ---------------------------------------------------------------


def to_json_dict(p: LaurentPoly) -> dict:
    return {
        "terms": [
            {"coef": c, "exp": {str(v): e for v, e in m}} for m, c in sorted_terms(p)
        ]
    }


def to_json(p: LaurentPoly) -> str:
    return json.dumps(to_json_dict(p))


def from_json_dict(d: dict) -> LaurentPoly:
    return LaurentPoly.from_terms(
        (mono({int(v): e for v, e in t["exp"].items()}), t["coef"])
        for t in d["terms"]
    )


def from_json(s: str) -> LaurentPoly:
    return from_json_dict(json.loads(s))


def poly_sum(ps: Iterable[LaurentPoly]) -> LaurentPoly:
    acc: dict[Monomial, int] = {}
    for p in ps:
        for m, c in p.terms.items():
            nc = acc.get(m, 0) + c
            if nc:
                acc[m] = nc
            elif m in acc:
                del acc[m]
    return LaurentPoly(acc)


def poly_product(ps: Iterable[LaurentPoly]) -> LaurentPoly:
    result = LaurentPoly.one()
    for p in ps:
        result = result * p
    return result


def variables_product(exponents: Mapping[int, int]) -> LaurentPoly:
    """Monomial with the given exponent vector as a polynomial."""
    return LaurentPoly.monomial(exponents)


def iter_monomials(p: LaurentPoly) -> Iterator[tuple[Monomial, int]]:
    return iter(sorted_terms(p))
