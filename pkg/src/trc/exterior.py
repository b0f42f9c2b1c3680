"""Index combinatorics for exterior powers of a small vector space.

A basis vector of Lambda^p of a k-dimensional space is a p-subset of
[0, k), held as a bitmask.  Two enumeration orders are provided:

* ``LEX``: plain lexicographic order on the sorted element tuples.
* ``SPLIT_ZERO``: the order that makes Koszul flattening matrices
  block-readable.  For source subsets (2p+1 ambient, size p) the ones
  containing index 0 come first, then the 0-free ones.  For target
  subsets (size p+1) the 0-free ones come first, then the 0-containing
  ones arranged so that dropping 0 walks the 0-free size-p list in the
  same order.  Inside every block the order is lex.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from itertools import combinations
from math import comb

from .errors import InvalidArguments

LEX = "lex"
SPLIT_ZERO = "split0"

_MAX_K = 64  # bitmask encoding, one machine word


def _check_k(k: int) -> None:
    if not 1 <= k <= _MAX_K:
        raise InvalidArguments(f"ambient dimension must be in [1, {_MAX_K}], got {k}")


def _lex_rank(elems: tuple[int, ...], k: int) -> int:
    """Position of a sorted p-tuple in the lex list of all p-subsets of [0,k)."""
    rank = 0
    prev = -1
    p = len(elems)
    for slot, e in enumerate(elems):
        for skipped in range(prev + 1, e):
            rank += comb(k - 1 - skipped, p - 1 - slot)
        prev = e
    return rank


@dataclass(frozen=True)
class SubsetIndex:
    """One exterior basis vector: a subset of [0, k) with cached stats."""

    mask: int
    k: int
    card: int
    ordinal: int  # position within the basis enumeration that produced it

    @staticmethod
    def make(elems, k: int) -> "SubsetIndex":
        _check_k(k)
        elems = tuple(sorted(elems))
        if any(not 0 <= e < k for e in elems):
            raise InvalidArguments(f"subset {elems} not inside [0, {k})")
        if len(set(elems)) != len(elems):
            raise InvalidArguments(f"repeated index in {elems}")
        mask = 0
        for e in elems:
            mask |= 1 << e
        return SubsetIndex(mask, k, len(elems), _lex_rank(elems, k))

    @property
    def elements(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.k) if self.mask >> i & 1)

    def contains(self, i: int) -> bool:
        return bool(self.mask >> i & 1)


def wedge_insert(i: int, subset: SubsetIndex):
    """Wedge e_i onto the left of a basis subset.

    Returns None when i is already present (the wedge is zero), else
    (sign, enlarged subset) with sign = (-1)**|{j in subset : j < i}|.
    """
    if not 0 <= i < subset.k:
        raise InvalidArguments(f"index {i} outside [0, {subset.k})")
    if subset.mask >> i & 1:
        return None
    below = (subset.mask & ((1 << i) - 1)).bit_count()
    sign = -1 if below % 2 else 1
    return sign, SubsetIndex.make(subset.elements + (i,), subset.k)


@dataclass(frozen=True)
class OrderedBasis:
    """All p-subsets of [0, k) in a declared order, with reverse lookup."""

    k: int
    p: int
    order: str
    subsets: tuple[SubsetIndex, ...]

    def position(self, mask: int) -> int:
        return self._lookup()[mask]

    def _lookup(self):
        # built lazily; frozen dataclass, so stash on __dict__ via object
        cache = self.__dict__.get("_pos")
        if cache is None:
            cache = {s.mask: i for i, s in enumerate(self.subsets)}
            object.__setattr__(self, "_pos", cache)
        return cache

    def __len__(self) -> int:
        return len(self.subsets)


def enumerate_subsets(k: int, p: int, order: str = LEX) -> OrderedBasis:
    """List the p-subsets of [0, k) in the requested order."""
    _check_k(k)
    if not 0 <= p <= k:
        raise InvalidArguments(f"subset size {p} outside [0, {k}]")
    if order not in (LEX, SPLIT_ZERO):
        raise InvalidArguments(f"unknown order {order!r}")
    everything = [SubsetIndex.make(c, k) for c in combinations(range(k), p)]
    if order == LEX or p == 0:
        listing = everything
    else:
        with_zero = [s for s in everything if s.contains(0)]
        without = [s for s in everything if not s.contains(0)]
        if 2 * p - 1 == k:
            # target level of a Koszul map: 0-free block first; the 0-block
            # follows in dropped-0 order, which for lex blocks is lex again
            listing = without + with_zero
        else:
            listing = with_zero + without
    listing = [replace(s, ordinal=i) for i, s in enumerate(listing)]
    return OrderedBasis(k, p, order, tuple(listing))
