"""Exact sparse Laurent polynomials over the integers in one formal variable.

All invariant values produced by this package (the twin invariant, the
2-knot skein polynomial, Conway and Alexander polynomials) live in this
ring.  Coefficients are Python ints, so they never overflow; values are
immutable and safe to share between threads.
"""

from __future__ import annotations

import re
from typing import Iterable, Mapping


class LaurentError(ValueError):
    pass


_TERM_RE = re.compile(
    r"^(?P<coeff>\d+)?(?:(?P<var>[A-Za-z])(?:\^(?P<exp>-?\d+))?)?$"
)


class LaurentPoly:
    """An integer Laurent polynomial, stored as a sparse exponent -> coefficient map.

    Zero coefficients are never stored, so equality of term maps is
    equality of polynomials.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, int] = {}
        for exp, coeff in items:
            if coeff:
                acc[int(exp)] = acc.get(int(exp), 0) + int(coeff)
                if acc[int(exp)] == 0:
                    del acc[int(exp)]
        self._terms = acc
        self._hash: int | None = None

    # -- constructors ------------------------------------------------

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls()

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls({0: 1})

    @classmethod
    def constant(cls, c: int) -> "LaurentPoly":
        return cls({0: c})

    @classmethod
    def var_power(cls, exp: int, coeff: int = 1) -> "LaurentPoly":
        """The monomial coeff * t^exp."""
        return cls({exp: coeff})

    # -- inspection ---------------------------------------------------

    def pairs(self) -> tuple[tuple[int, int], ...]:
        """Terms as (exponent, coefficient) pairs sorted by exponent."""
        return tuple(sorted(self._terms.items()))

    def coefficient(self, exp: int) -> int:
        return self._terms.get(exp, 0)

    def is_zero(self) -> bool:
        return not self._terms

    def min_exponent(self) -> int:
        if not self._terms:
            raise LaurentError("zero polynomial has no exponents")
        return min(self._terms)

    def max_exponent(self) -> int:
        if not self._terms:
            raise LaurentError("zero polynomial has no exponents")
        return max(self._terms)

    def is_symmetric(self) -> bool:
        """True iff the coefficient of t^e equals the coefficient of t^-e for all e."""
        return all(self._terms.get(-e, 0) == c for e, c in self._terms.items())

    # -- ring operations ----------------------------------------------

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        acc = dict(self._terms)
        for e, c in other._terms.items():
            s = acc.get(e, 0) + c
            if s:
                acc[e] = s
            elif e in acc:
                del acc[e]
        out = LaurentPoly.__new__(LaurentPoly)
        out._terms = acc
        out._hash = None
        return out

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self + (-other)

    def __neg__(self) -> "LaurentPoly":
        out = LaurentPoly.__new__(LaurentPoly)
        out._terms = {e: -c for e, c in self._terms.items()}
        out._hash = None
        return out

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        acc: dict[int, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = e1 + e2
                s = acc.get(e, 0) + c1 * c2
                if s:
                    acc[e] = s
                elif e in acc:
                    del acc[e]
        out = LaurentPoly.__new__(LaurentPoly)
        out._terms = acc
        out._hash = None
        return out

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            raise LaurentError("negative powers are not defined in this ring")
        result = LaurentPoly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c: int) -> "LaurentPoly":
        return LaurentPoly({e: c * k for e, k in self._terms.items()})

    def substitute_square(self) -> "LaurentPoly":
        """Double every exponent: p(t) -> p(t^2)."""
        return LaurentPoly({2 * e: c for e, c in self._terms.items()})

    def substitute(self, value: "LaurentPoly") -> "LaurentPoly":
        """Evaluate at another polynomial.  Requires nonnegative exponents."""
        if self._terms and self.min_exponent() < 0:
            raise LaurentError("substitution requires nonnegative exponents")
        acc = LaurentPoly.zero()
        for e, c in sorted(self._terms.items()):
            acc = acc + (value ** e).scale(c)
        return acc

    # -- equality / hashing --------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.pairs())
        return self._hash

    # -- text and JSON forms --------------------------------------------

    def render(self, var: str = "t") -> str:
        """Canonical text: increasing exponents, explicit signs, `0` for zero.

        Examples: ``t^-2 - 1 + t^2``, ``1 + 2z^2``, ``-t``.
        """
        if not self._terms:
            return "0"
        chunks: list[str] = []
        for e, c in self.pairs():
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                head = "" if mag == 1 else str(mag)
                body = f"{head}{var}" if e == 1 else f"{head}{var}^{e}"
            if not chunks:
                chunks.append(body if c > 0 else f"-{body}")
            else:
                chunks.append(f"{'+' if c > 0 else '-'} {body}")
        return " ".join(chunks)

    @classmethod
    def parse(cls, text: str, var: str = "t") -> "LaurentPoly":
        """Parse the canonical text form (tolerant of whitespace)."""
        s = text.strip()
        if not s:
            raise LaurentError("empty polynomial text")
        if s == "0":
            return cls.zero()
        raw_terms: list[str] = []
        cur = ""
        prev = ""
        for ch in s:
            if ch in "+-" and cur.strip() and prev != "^":
                raw_terms.append(cur)
                cur = "" if ch == "+" else "-"
            else:
                cur += ch
            if not ch.isspace():
                prev = ch
        raw_terms.append(cur)
        terms: dict[int, int] = {}
        for raw in raw_terms:
            tok = raw.strip().replace(" ", "")
            if not tok:
                raise LaurentError(f"malformed polynomial text: {text!r}")
            sign = 1
            if tok.startswith("-"):
                sign = -1
                tok = tok[1:]
            tok = tok.replace("*", "")
            m = _TERM_RE.match(tok)
            if not m or (m.group("coeff") is None and m.group("var") is None):
                raise LaurentError(f"bad term {raw.strip()!r} in {text!r}")
            if m.group("var") is not None and m.group("var") != var:
                raise LaurentError(
                    f"unexpected variable {m.group('var')!r} (wanted {var!r})"
                )
            coeff = int(m.group("coeff")) if m.group("coeff") else 1
            if m.group("var") is None:
                exp = 0
            elif m.group("exp") is None:
                exp = 1
            else:
                exp = int(m.group("exp"))
            terms[exp] = terms.get(exp, 0) + sign * coeff
        return cls(terms)

    def to_json(self) -> list[list[int]]:
        """JSON form: a list of [exponent, coefficient] pairs sorted by exponent."""
        return [[e, c] for e, c in self.pairs()]

    def __repr__(self) -> str:
        return f"LaurentPoly({self.render()!r})"


#: The skein multiplier t - t^-1 used by the twin calculus.
SKEIN_MULTIPLIER = LaurentPoly({1: 1, -1: -1})
