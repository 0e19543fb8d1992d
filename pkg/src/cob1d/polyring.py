"""Exact scalars and matrices.

``PolyZ4`` is an integer polynomial in the four evaluation parameters
``b0, b1, g0, g1`` (interval/circle values with zero and one dot). ``ModP``
is an element of a prime field. Determinants and ranks work over any of
these as well as ``int`` and ``fractions.Fraction``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from .errors import ConsistencyError

VARIABLES = ("b0", "b1", "g0", "g1")
NVARS = len(VARIABLES)

Exponent = tuple  # (e0, e1, e2, e3)
_ZERO_EXP = (0, 0, 0, 0)


def _grlex_key(e: Exponent):
    return (sum(e), e)


class PolyZ4:
    """Polynomial in Z[b0, b1, g0, g1] with exact integer coefficients.

    Immutable. Terms are kept in a dict ``{exponent tuple: coefficient}``
    with no zero coefficients, so structural equality is value equality.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: dict | None = None):
        if terms:
            self._terms = {e: c for e, c in terms.items() if c}
        else:
            self._terms = {}
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> PolyZ4:
        p = object.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c: int) -> PolyZ4:
        return cls._raw({_ZERO_EXP: int(c)} if c else {})

    @classmethod
    def monomial(cls, exponent: Sequence[int], coeff: int = 1) -> PolyZ4:
        if len(exponent) != NVARS or any(e < 0 for e in exponent):
            raise ValueError(f"bad exponent vector {exponent!r}")
        return cls._raw({tuple(exponent): coeff} if coeff else {})

    @classmethod
    def gens(cls) -> tuple[PolyZ4, PolyZ4, PolyZ4, PolyZ4]:
        """The four indeterminates ``(b0, b1, g0, g1)``."""
        out = []
        for i in range(NVARS):
            e = [0] * NVARS
            e[i] = 1
            out.append(cls.monomial(e))
        return tuple(out)

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def leading(self) -> tuple[Exponent, int]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self._terms, key=_grlex_key)
        return e, self._terms[e]

    @staticmethod
    def _coerce(other: Any) -> PolyZ4 | None:
        if isinstance(other, PolyZ4):
            return other
        if isinstance(other, int):
            return PolyZ4.const(other)
        if isinstance(other, Fraction) and other.denominator == 1:
            return PolyZ4.const(other.numerator)
        return None

    def __add__(self, other):
        q = self._coerce(other)
        if q is None:
            return NotImplemented
        if not q._terms:
            return self
        if not self._terms:
            return q
        out = dict(self._terms)
        for e, c in q._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return PolyZ4._raw(out)

    __radd__ = __add__

    def __neg__(self) -> PolyZ4:
        return PolyZ4._raw({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        q = self._coerce(other)
        if q is None:
            return NotImplemented
        return self + (-q)

    def __rsub__(self, other):
        q = self._coerce(other)
        if q is None:
            return NotImplemented
        return q + (-self)

    def __mul__(self, other):
        q = self._coerce(other)
        if q is None:
            return NotImplemented
        if not self._terms or not q._terms:
            return PolyZ4._raw({})
        out: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in q._terms.items():
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3])
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return PolyZ4._raw(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> PolyZ4:
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        if self.is_monomial():
            (e, c), = self._terms.items()
            return PolyZ4._raw({tuple(x * k for x in e): c ** k})
        result = PolyZ4.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def exact_div(self, other) -> PolyZ4:
        """Quotient ``self / other``; raises ConsistencyError if not exact."""
        q = self._coerce(other)
        if q is None or not q._terms:
            raise ZeroDivisionError("division by zero polynomial")
        if q.is_monomial():
            (de, dc), = q._terms.items()
            out = {}
            for e, c in self._terms.items():
                ne = (e[0] - de[0], e[1] - de[1], e[2] - de[2], e[3] - de[3])
                qc, rc = divmod(c, dc)
                if rc or min(ne) < 0:
                    raise ConsistencyError(f"{q} does not divide {self}")
                out[ne] = qc
            return PolyZ4._raw(out)
        # general case: repeated leading-term division in grlex order
        lead_e, lead_c = q.leading()
        rem = self
        quot: dict = {}
        while rem._terms:
            e, c = rem.leading()
            ne = tuple(a - b for a, b in zip(e, lead_e))
            qc, rc = divmod(c, lead_c)
            if rc or min(ne) < 0:
                raise ConsistencyError(f"{q} does not divide {self}")
            quot[ne] = qc
            rem = rem - q * PolyZ4._raw({ne: qc})
        return PolyZ4._raw(quot)

    def evaluate(self, point: Sequence[Any], one: Any = 1) -> Any:
        """Substitute ``point = (b0, b1, g0, g1)`` into the polynomial."""
        total = one * 0
        for e, c in self._terms.items():
            t = one * c
            for x, k in zip(point, e):
                if k:
                    t = t * x ** k
            total = total + t
        return total

    def __eq__(self, other) -> bool:
        q = self._coerce(other)
        if q is None:
            return NotImplemented
        return self._terms == q._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e in sorted(self._terms, key=_grlex_key, reverse=True):
            c = self._terms[e]
            factors = []
            for name, k in zip(VARIABLES, e):
                if k == 1:
                    factors.append(name)
                elif k:
                    factors.append(f"{name}^{k}")
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            elif c == -1:
                parts.append("-" + "*".join(factors))
            else:
                parts.append("*".join([str(c)] + factors))
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"PolyZ4({str(self)!r})"

    _FACTOR = re.compile(r"^(b0|b1|g0|g1)(?:\^(\d+))?$")

    @classmethod
    def parse(cls, text: str) -> PolyZ4:
        """Inverse of ``str``. Accepts terms joined by ``+`` or ``-``."""
        text = text.strip()
        if not text:
            raise ValueError("empty polynomial text")
        # normalise binary minus into "+ -"
        text = re.sub(r"(?<=[\w^)])\s*-\s*", " + -", text)
        total = cls._raw({})
        for raw in text.split("+"):
            term = raw.strip().replace(" ", "")
            if not term:
                raise ValueError(f"malformed polynomial {text!r}")
            sign = 1
            if term.startswith("-"):
                sign, term = -1, term[1:]
            coeff = 1
            exp = [0] * NVARS
            for f in term.split("*"):
                if re.fullmatch(r"\d+", f):
                    coeff *= int(f)
                    continue
                mt = cls._FACTOR.match(f)
                if mt is None:
                    raise ValueError(f"bad factor {f!r} in {text!r}")
                exp[VARIABLES.index(mt.group(1))] += int(mt.group(2) or 1)
            total = total + cls.monomial(exp, sign * coeff)
        return total


class ModP:
    """Element of the prime field Z/pZ."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        self.value = int(value) % p
        self.p = p

    def _lift(self, other) -> ModP | None:
        if isinstance(other, ModP):
            if other.p != self.p:
                raise ValueError("mixed moduli")
            return other
        if isinstance(other, int):
            return ModP(other, self.p)
        if isinstance(other, Fraction):
            return ModP(other.numerator, self.p) / ModP(other.denominator, self.p)
        return None

    def __add__(self, other):
        o = self._lift(other)
        return NotImplemented if o is None else ModP(self.value + o.value, self.p)

    __radd__ = __add__

    def __neg__(self):
        return ModP(-self.value, self.p)

    def __sub__(self, other):
        o = self._lift(other)
        return NotImplemented if o is None else ModP(self.value - o.value, self.p)

    def __rsub__(self, other):
        o = self._lift(other)
        return NotImplemented if o is None else ModP(o.value - self.value, self.p)

    def __mul__(self, other):
        o = self._lift(other)
        return NotImplemented if o is None else ModP(self.value * o.value, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if not o.value:
            raise ZeroDivisionError("division by zero in prime field")
        return ModP(self.value * pow(o.value, -1, self.p), self.p)

    def __pow__(self, k: int):
        return ModP(pow(self.value, k, self.p), self.p)

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __eq__(self, other):
        if isinstance(other, ModP):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __str__(self):
        return str(self.value)

    def __repr__(self):
        return f"ModP({self.value}, {self.p})"


@dataclass
class Matrix:
    """Dense row-major matrix over an arbitrary ring."""

    rows: int
    cols: int
    entries: list

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entries length does not match shape")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Any]]) -> Matrix:
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), ncols, [x for r in rows for x in r])

    @classmethod
    def identity(cls, size: int, one: Any = 1, zero: Any = 0) -> Matrix:
        return cls.from_rows([[one if i == j else zero for j in range(size)] for i in range(size)])

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij: tuple[int, int]):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> list[list]:
        return [self.row(i) for i in range(self.rows)]

    def map(self, f: Callable[[Any], Any]) -> Matrix:
        return Matrix(self.rows, self.cols, [f(x) for x in self.entries])

    def permuted(self, row_perm: Sequence[int] | None = None,
                 col_perm: Sequence[int] | None = None) -> Matrix:
        """New matrix whose row ``i`` is old row ``row_perm[i]`` (likewise cols)."""
        rp = range(self.rows) if row_perm is None else row_perm
        cp = range(self.cols) if col_perm is None else col_perm
        return Matrix.from_rows([[self[i, j] for j in cp] for i in rp])

    def diagonal(self) -> list:
        return [self[i, i] for i in range(min(self.rows, self.cols))]

    def above_diagonal_nonzero(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.rows) for j in range(i + 1, self.cols) if self[i, j]]


def _exact_div(a, b):
    if isinstance(a, int) and isinstance(b, int):
        q, r = divmod(a, b)
        if r:
            raise ConsistencyError(f"inexact integer division {a} / {b}")
        return q
    if isinstance(a, PolyZ4):
        return a.exact_div(b)
    if isinstance(b, PolyZ4):
        return PolyZ4.const(a).exact_div(b)
    return a / b


def det_fraction_free(m: Matrix, one: Any = 1) -> Any:
    """Determinant over an integral domain by Bareiss elimination.

    Every intermediate division is exact; an inexact one raises
    ``ConsistencyError``. Zero pivots are handled by row swaps.
    """
    if not m.is_square:
        raise ValueError(f"determinant of non-square {m.rows}x{m.cols} matrix")
    size = m.rows
    if size == 0:
        return one
    a = m.to_rows()
    zero = one * 0
    sign = 1
    prev = one
    for k in range(size - 1):
        if not a[k][k]:
            for i in range(k + 1, size):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return zero
        piv = a[k][k]
        row_k = a[k]
        for i in range(k + 1, size):
            row_i = a[i]
            aik = row_i[k]
            for j in range(k + 1, size):
                akj = row_k[j]
                aij = row_i[j]
                if aik and akj:
                    v = piv * aij - aik * akj
                elif aij:
                    v = piv * aij
                else:
                    row_i[j] = zero
                    continue
                row_i[j] = _exact_div(v, prev) if v else zero
            row_i[k] = zero
        prev = piv
    d = a[size - 1][size - 1]
    return -d if sign < 0 else d


def det_cofactor(m: Matrix, one: Any = 1) -> Any:
    """Laplace expansion along the first row. Only for small matrices."""
    if not m.is_square:
        raise ValueError("non-square matrix")
    rows = m.to_rows()

    def rec(rs: list[list]) -> Any:
        if not rs:
            return one
        total = one * 0
        for j, x in enumerate(rs[0]):
            if not x:
                continue
            minor = [r[:j] + r[j + 1:] for r in rs[1:]]
            term = x * rec(minor)
            total = total + term if j % 2 == 0 else total - term
        return total

    return rec(rows)


_MAX_NUMPY_PRIME = 1 << 31


def _residues(m: Matrix | np.ndarray, p: int) -> np.ndarray:
    if isinstance(m, np.ndarray):
        return np.mod(m.astype(np.int64), p)
    return np.array([int(x) % p for x in m.entries], dtype=np.int64).reshape(m.rows, m.cols)


def _eliminate_below(a: np.ndarray, r: int, c: int, inv: int, p: int) -> None:
    """Clear column ``c`` below pivot ``a[r, c]``, touching only nonzero pivot-row columns."""
    below = a[r + 1:, c]
    rows = np.flatnonzero(below)
    if not rows.size:
        return
    idx = r + 1 + rows
    cols = c + np.flatnonzero(a[r, c:])
    f = below[rows] * inv % p
    if cols.size == 1:
        a[idx, c] = 0
        return
    sub = np.ix_(idx, cols)
    a[sub] = (a[sub] - np.outer(f, a[r, cols]) % p) % p


def det_modular(m: Matrix | np.ndarray, p: int) -> int:
    """Determinant over Z/pZ, returned as an int in ``[0, p)``.

    Accepts a ``Matrix`` of ints or ``ModP`` values, or an integer ndarray.
    Requires ``p < 2**31`` so products of residues fit in int64.
    """
    rows, cols = m.shape if isinstance(m, np.ndarray) else (m.rows, m.cols)
    if rows != cols:
        raise ValueError(f"determinant of non-square {rows}x{cols} matrix")
    if not 2 <= p < _MAX_NUMPY_PRIME:
        raise ValueError("modulus must be a prime below 2**31")
    a = _residues(m, p)
    size = rows
    det = 1
    for k in range(size):
        nz = np.flatnonzero(a[k:, k])
        if nz.size == 0:
            return 0
        piv = k + int(nz[0])
        if piv != k:
            a[[k, piv]] = a[[piv, k]]
            det = -det
        pk = int(a[k, k])
        det = det * pk % p
        _eliminate_below(a, k, k, pow(pk, -1, p), p)
    return det % p


def rank_modular(m: Matrix, p: int) -> int:
    if not 2 <= p < _MAX_NUMPY_PRIME:
        raise ValueError("modulus must be a prime below 2**31")
    a = _residues(m, p)
    r = 0
    for c in range(m.cols):
        if r == m.rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        _eliminate_below(a, r, c, pow(int(a[r, c]), -1, p), p)
        r += 1
    return r


def _integer_rows(m: Matrix) -> list[list[int]]:
    out = []
    for row in m.to_rows():
        fr = [Fraction(x) for x in row]
        den = lcm(*(x.denominator for x in fr)) if fr else 1
        out.append([int(x * den) for x in fr])
    return out


def rank(m: Matrix, p: int | None = None) -> int:
    """Row rank over Q (exact, fraction-free) or over Z/pZ when ``p`` is given.

    Entries of ``ModP`` type select the prime field automatically.
    """
    if p is None and m.entries and isinstance(m.entries[0], ModP):
        p = m.entries[0].p
    if p is not None:
        return rank_modular(m, p)
    a = _integer_rows(m)
    r = 0
    prev = 1
    for c in range(m.cols):
        piv = next((i for i in range(r, m.rows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        pv = a[r][c]
        row_r = a[r]
        for i in range(r + 1, m.rows):
            row_i = a[i]
            aic = row_i[c]
            for j in range(c + 1, m.cols):
                q, rem = divmod(pv * row_i[j] - aic * row_r[j], prev)
                if rem:
                    raise ConsistencyError("inexact division in fraction-free rank")
                row_i[j] = q
            row_i[c] = 0
        prev = pv
        r += 1
        if r == m.rows:
            break
    return r


def permutation_sign(perm: Sequence[int]) -> int:
    """Parity of a permutation of ``0..k-1`` given as a sequence of images."""
    k = len(perm)
    if sorted(perm) != list(range(k)):
        raise ValueError("not a permutation of 0..k-1")
    seen = [False] * k
    sign = 1
    for start in range(k):
        if seen[start]:
            continue
        length = 0
        i = start
        while not seen[i]:
            seen[i] = True
            i = perm[i]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def product(values: Iterable[Any], one: Any = 1) -> Any:
    out = one
    for v in values:
        out = out * v
    return out
