"""Exact rank and determinant engines.

Two routes, deliberately independent:

* mod q: Gaussian elimination over GF(q) on int64 (or big-int) arrays.
  Fast, and a sound lower bound for the exact rank: reduction mod q can
  only collapse rows, never create new independent ones.
* exact: fraction-free (Bareiss) elimination over the integers after
  clearing row denominators.  Intermediate entries stay minors of the
  input, so the divisions are exact and nothing is ever rounded.

Matrices at the scale this package targets (a few hundred rows) are
eliminated dense; the numpy row operations dominate and sparse pivot
bookkeeping would only slow them down.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import lcm

import numpy as np

from .errors import DimensionMismatch, InvalidArguments, NotSquare
from .field import Domain, RATIONAL, check_modulus, coeff_from_str, coeff_to_str, project_mod_q

SPARSE_FORMAT = "sparse-matrix-v1"


# ---------------------------------------------------------------------------
# sparse triplet container
# ---------------------------------------------------------------------------


@dataclass
class SparseMatrix:
    """Triplet-stored matrix over the rationals or GF(q).

    Zero entries are never stored; constructors normalize and drop them.
    """

    rows: int
    cols: int
    domain: Domain = RATIONAL
    entries: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise InvalidArguments("negative matrix dimensions")
        clean = {}
        for (r, c), v in self.entries.items():
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise DimensionMismatch(f"entry ({r},{c}) outside {self.rows}x{self.cols}")
            v = self.domain.coerce(v)
            if v != 0:
                clean[(r, c)] = v
        self.entries = clean

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def nnz(self) -> int:
        return len(self.entries)

    def entry(self, r: int, c: int):
        zero = Fraction(0) if self.domain.kind == "rational" else 0
        return self.entries.get((r, c), zero)

    def add(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.shape != other.shape or self.domain != other.domain:
            raise DimensionMismatch("matrix sum needs equal shapes and domains")
        merged = dict(self.entries)
        for key, v in other.entries.items():
            merged[key] = merged.get(key, 0) + v
        return SparseMatrix(self.rows, self.cols, self.domain, merged)

    def scale(self, c) -> "SparseMatrix":
        scaled = {k: v * c for k, v in self.entries.items()}
        return SparseMatrix(self.rows, self.cols, self.domain, scaled)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (
            self.shape == other.shape
            and self.domain == other.domain
            and self.entries == other.entries
        )

    def to_dense(self) -> np.ndarray:
        zero = Fraction(0) if self.domain.kind == "rational" else 0
        out = np.full(self.shape, zero, dtype=object)
        for (r, c), v in self.entries.items():
            out[r, c] = v
        return out

    @staticmethod
    def from_dense(arr, domain: Domain = RATIONAL) -> "SparseMatrix":
        arr = np.asarray(arr, dtype=object)
        if arr.ndim != 2:
            raise DimensionMismatch(f"expected a 2d array, got shape {arr.shape}")
        entries = {}
        for r in range(arr.shape[0]):
            for c in range(arr.shape[1]):
                if arr[r, c] != 0:
                    entries[(r, c)] = arr[r, c]
        return SparseMatrix(arr.shape[0], arr.shape[1], domain, entries)

    def to_json(self) -> dict:
        triplets = [
            [r, c, coeff_to_str(v, self.domain)]
            for (r, c), v in sorted(self.entries.items())
        ]
        return {
            "format": SPARSE_FORMAT,
            "rows": self.rows,
            "cols": self.cols,
            "domain": self.domain.to_json(),
            "triplets": triplets,
        }

    @staticmethod
    def from_json(obj: dict) -> "SparseMatrix":
        domain = Domain.from_json(obj.get("domain", "rational"))
        entries = {
            (int(r), int(c)): coeff_from_str(s, domain)
            for r, c, s in obj["triplets"]
        }
        return SparseMatrix(int(obj["rows"]), int(obj["cols"]), domain, entries)


# ---------------------------------------------------------------------------
# elimination mod q
# ---------------------------------------------------------------------------


def _dense_mod(m: SparseMatrix, q: int) -> np.ndarray:
    """Dense reduction of every entry mod q; int64 when products fit."""
    if m.domain.kind == "gfp" and m.domain.q != q:
        raise InvalidArguments(
            f"matrix lives over GF({m.domain.q}), cannot reduce mod {q}"
        )
    use_i64 = (q - 1) * (q - 1) < (1 << 62)
    out = np.zeros(m.shape, dtype=np.int64 if use_i64 else object)
    for (r, c), v in m.entries.items():
        if isinstance(v, Fraction) and v.denominator != 1:
            out[r, c] = project_mod_q(v, q).value
        else:
            out[r, c] = int(v) % q
    return out

def _eliminate_mod(a: np.ndarray, q: int) -> tuple[int, int, int]:
    """In-place elimination over GF(q); returns (rank, pivot product, sign)."""
    nrows, ncols = a.shape
    r = 0
    sign = 1
    pivprod = 1
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i], :] = a[[i, r], :]
            sign = -sign
        piv = int(a[r, c])
        pivprod = pivprod * piv % q
        inv = pow(piv, -1, q)
        if r + 1 < nrows:
            factors = a[r + 1 :, c] * inv % q
            a[r + 1 :, c:] = (a[r + 1 :, c:] - np.outer(factors, a[r, c:])) % q
        r += 1
    return r, pivprod, sign


def rank_mod_q(m: SparseMatrix, q: int) -> int:
    """Rank over GF(q).  Never exceeds the exact rank of a rational matrix."""
    check_modulus(q)
    rank, _, _ = _eliminate_mod(_dense_mod(m, q), q)
    return rank


def det_mod_q(m: SparseMatrix, q: int) -> int:
    """Determinant over GF(q) as a canonical representative in [0, q)."""
    check_modulus(q)
    if m.rows != m.cols:
        raise NotSquare(f"determinant of a {m.rows}x{m.cols} matrix")
    a = _dense_mod(m, q)
    rank, pivprod, sign = _eliminate_mod(a, q)
    if rank < m.rows:
        return 0
    return sign * pivprod % q


def rank_multi_prime(m: SparseMatrix, primes=None) -> int:
    """Best (largest) rank seen over several primes.

    Each single-prime rank is a sound lower bound for the exact rank, so
    the maximum is too; disagreements between primes are expected exactly
    when some prime divides a pivot minor.
    """
    from .field import DEFAULT_PRIMES

    primes = tuple(primes) if primes else DEFAULT_PRIMES
    if not primes:
        raise InvalidArguments("need at least one prime")
    return max(rank_mod_q(m, q) for q in primes)


# ---------------------------------------------------------------------------
# fraction-free exact elimination
# ---------------------------------------------------------------------------


def _integer_rows(m: SparseMatrix) -> tuple[np.ndarray, Fraction]:
    """Clear denominators row by row; returns (int matrix, det scale).

    The returned scale is the product of the per-row multipliers, so
    det(original) = det(returned) / scale.
    """
    a = np.zeros(m.shape, dtype=object)
    for (r, c), v in m.entries.items():
        a[r, c] = Fraction(v)
    scale = Fraction(1)
    for r in range(m.rows):
        dens = [v.denominator for v in a[r, :] if v != 0]
        mult = lcm(*dens) if dens else 1
        scale *= mult
        a[r, :] = [int(v * mult) for v in a[r, :]]
    return a, scale


def _bareiss(a: np.ndarray) -> tuple[int, int, int]:
    """Fraction-free elimination; returns (rank, last pivot, swap sign).

    Pivots are chosen with the smallest nonzero magnitude in the column,
    which keeps the exact intermediate minors from ballooning.
    """
    nrows, ncols = a.shape
    r = 0
    sign = 1
    prev = 1
    last = 1
    for c in range(ncols):
        if r == nrows:
            break
        best = -1
        for i in range(r, nrows):
            v = a[i, c]
            if v != 0 and (best < 0 or abs(v) < abs(a[best, c])):
                best = i
        if best < 0:
            continue
        if best != r:
            a[[r, best], :] = a[[best, r], :]
            sign = -sign
        piv = a[r, c]
        if r + 1 < nrows:
            block = a[r + 1 :, c + 1 :]
            a[r + 1 :, c + 1 :] = (piv * block - np.outer(a[r + 1 :, c], a[r, c + 1 :])) // prev
            a[r + 1 :, c] = 0
        prev = piv
        last = piv
        r += 1
    return r, last, sign


def rank_exact(m: SparseMatrix) -> int:
    """Rank over the rationals, computed without any rounding."""
    if m.domain.kind != "rational":
        raise InvalidArguments("rank_exact works on rational matrices")
    a, _ = _integer_rows(m)
    rank, _, _ = _bareiss(a)
    return rank


def det_exact(m: SparseMatrix) -> Fraction:
    """Exact rational determinant via fraction-free elimination."""
    if m.domain.kind != "rational":
        raise InvalidArguments("det_exact works on rational matrices")
    if m.rows != m.cols:
        raise NotSquare(f"determinant of a {m.rows}x{m.cols} matrix")
    if m.rows == 0:
        return Fraction(1)
    a, scale = _integer_rows(m)
    rank, last, sign = _bareiss(a)
    if rank < m.rows:
        return Fraction(0)
    return Fraction(sign * last) / scale
