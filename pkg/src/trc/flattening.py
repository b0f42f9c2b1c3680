"""Koszul-style flattening matrices and their block structure.

Given a tensor restricted to a (2p+1)-dimensional first factor, the
flattening is the matrix of

    Lambda^p A' (x) B*  ->  Lambda^{p+1} A' (x) C,
    a_I (x) beta        ->  sum_i (a_i ^ a_I) (x) beta(X_i),

where X_i are the first-factor slices.  Rows are pairs (J, gamma) with J
a (p+1)-subset and gamma a C-index; columns are pairs (I, beta).  The
entry at ((J, gamma), (I, beta)) is s * X_i[beta, gamma] where i is the
unique index with wedge_insert(i, I) = (s, J).  Within a block the slice
therefore appears through its action on covectors, i.e. transposed; every
rank or |det| statement is indifferent to that, and the one place where
entry-level orientation matters (commutator blocks) normalizes it back.

With the SPLIT_ZERO basis order and equal B/C dimensions the matrix has
the 2x2 block shape [[0, Q], [Qt, R]] with R block-diagonal, carrying the
slice X_0 on its diagonal.  When X_0 = I the determinant collapses to
+-det(Q Qt), and Q Qt is built out of slice commutators.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from .errors import DimensionMismatch, InvalidArguments, NotSquare, OrderMismatch
from .exterior import LEX, SPLIT_ZERO, OrderedBasis, SubsetIndex, enumerate_subsets, wedge_insert
from .field import Domain, RATIONAL, Rational
from .rank_engine import SparseMatrix, det_exact, det_mod_q
from .tensor import Subspace, Tensor3, tensor_from_slices

FLATTENING_FORMAT = "flattening-books-v1"


# ---------------------------------------------------------------------------
# flattening construction
# ---------------------------------------------------------------------------


@dataclass
class FlatteningMatrix:
    """A built flattening: the sparse matrix plus everything needed to audit it."""

    matrix: SparseMatrix
    p: int
    order: str
    row_basis: OrderedBasis
    col_basis: OrderedBasis
    b: int
    c: int
    subspace: Subspace | None = None
    target: dict | None = None

    @property
    def domain(self) -> Domain:
        return self.matrix.domain

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    def books_json(self) -> dict:
        """Index-book sidecar: which subset/coordinate pair each row and column is."""
        out = {
            "format": FLATTENING_FORMAT,
            "p": self.p,
            "order": self.order,
            "ambient": 2 * self.p + 1,
            "b": self.b,
            "c": self.c,
            "row_subsets": [list(s.elements) for s in self.row_basis.subsets],
            "col_subsets": [list(s.elements) for s in self.col_basis.subsets],
        }
        if self.target is not None:
            out["target"] = self.target
        if self.subspace is not None:
            out["subspace"] = self.subspace.rows_as_str()
        return out


def build_koszul(t: Tensor3, p: int, order: str = SPLIT_ZERO) -> FlatteningMatrix:
    """Flattening of a tensor whose first factor already has dimension 2p+1.

    Shape is (C(2p+1, p+1) * c) x (C(2p+1, p) * b).  Cost is one wedge
    per stored tensor entry per p-subset avoiding its slice, so sparse
    tensors stay sparse.
    """
    if p < 0:
        raise InvalidArguments(f"p must be nonnegative, got {p}")
    a, b, c = t.dims
    k = 2 * p + 1
    if a != k:
        raise DimensionMismatch(f"first dim {a} must equal 2p+1 = {k}")
    col_basis = enumerate_subsets(k, p, order)
    row_basis = enumerate_subsets(k, p + 1, order)
    # i -> list of (column block, row block, wedge sign)
    moves: list[list[tuple[int, int, int]]] = [[] for _ in range(k)]
    for ci, subset in enumerate(col_basis.subsets):
        for i in range(k):
            hit = wedge_insert(i, subset)
            if hit is None:
                continue
            sign, bigger = hit
            moves[i].append((ci, row_basis.position(bigger.mask), sign))
    entries: dict = {}
    for (i, beta, gamma), v in t.entries.items():
        for ci, ri, sign in moves[i]:
            entries[(ri * c + gamma, ci * b + beta)] = sign * v
    matrix = SparseMatrix(len(row_basis) * c, len(col_basis) * b, t.domain, entries)
    return FlatteningMatrix(matrix, p, order, row_basis, col_basis, b, c)


def build_reduced_matmul(n: int, w: Subspace, p: int, order: str = SPLIT_ZERO) -> FlatteningMatrix:
    """Square flattening for the n x n matrix multiplication map, identity factor removed.

    Slice s of the restricted tensor is basis row s of ``w`` reshaped to
    an n x n matrix, row-major.  The result is square of size
    C(2p+1, p) * n, and its rank times the struck-out side recovers the
    rank of the full matmul flattening.
    """
    if p < 1:
        raise InvalidArguments(f"p must be at least 1, got {p}")
    if w.ambient != n * n:
        raise DimensionMismatch(f"subspace ambient {w.ambient}, expected n^2 = {n * n}")
    if w.k != 2 * p + 1:
        raise DimensionMismatch(f"subspace dim {w.k}, expected 2p+1 = {2 * p + 1}")
    slices = [np.array(w.basis[s, :]).reshape(n, n) for s in range(w.k)]
    t = tensor_from_slices(slices, w.domain)
    f = build_koszul(t, p, order)
    f.subspace = w
    f.target = {"kind": "matmul-reduced", "n": n}
    return f


# ---------------------------------------------------------------------------
# block structure
# ---------------------------------------------------------------------------


@dataclass
class BlockDecomposition:
    """The [[0, Q], [Qt, R]] split of a SPLIT_ZERO flattening with b = c."""

    q: SparseMatrix
    q_tilde: SparseMatrix
    r: SparseMatrix
    row_split: int  # rows of the top band (0-free target subsets)
    col_split: int  # columns of the left band (0-containing source subsets)
    b: int
    p: int

    def reassemble(self) -> SparseMatrix:
        """Rebuild the full flattening matrix; the top-left block is zero."""
        rows = self.row_split + self.r.rows
        cols = self.col_split + self.r.cols
        entries = {}
        for (r_, c_), v in self.q.entries.items():
            entries[(r_, self.col_split + c_)] = v
        for (r_, c_), v in self.q_tilde.entries.items():
            entries[(self.row_split + r_, c_)] = v
        for (r_, c_), v in self.r.entries.items():
            entries[(self.row_split + r_, self.col_split + c_)] = v
        return SparseMatrix(rows, cols, self.q.domain, entries)


def _submatrix(m: SparseMatrix, r0: int, r1: int, c0: int, c1: int) -> SparseMatrix:
    entries = {
        (r - r0, c - c0): v
        for (r, c), v in m.entries.items()
        if r0 <= r < r1 and c0 <= c < c1
    }
    return SparseMatrix(r1 - r0, c1 - c0, m.domain, entries)


def block_decompose(f: FlatteningMatrix) -> BlockDecomposition:
    """Split a SPLIT_ZERO flattening along the index-0 blocks.

    Requires b = c.  The top-left C(2p,p+1)*b x C(2p,p-1)*b corner is
    structurally zero (a 0-free target subset cannot contain a
    0-containing source subset); R is block-diagonal carrying the X_0
    slice, so X_0 = I makes R the identity.
    """
    if f.order != SPLIT_ZERO:
        raise OrderMismatch(f"block split needs order {SPLIT_ZERO!r}, matrix has {f.order!r}")
    if f.b != f.c:
        raise NotSquare(f"block split needs b = c, got b={f.b}, c={f.c}")
    p, b = f.p, f.b
    row_split = comb(2 * p, p + 1) * b
    col_split = comb(2 * p, p - 1) * b
    rows, cols = f.shape
    top_left = _submatrix(f.matrix, 0, row_split, 0, col_split)
    if top_left.nnz:
        raise OrderMismatch("top-left block not zero; basis order is not SPLIT_ZERO")
    return BlockDecomposition(
        q=_submatrix(f.matrix, 0, row_split, col_split, cols),
        q_tilde=_submatrix(f.matrix, row_split, rows, 0, col_split),
        r=_submatrix(f.matrix, row_split, rows, col_split, cols),
        row_split=row_split,
        col_split=col_split,
        b=b,
        p=p,
    )


# ---------------------------------------------------------------------------
# commutator blocks
# ---------------------------------------------------------------------------


def _commutator_layout(p: int) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]]]:
    """Row and column block labels for the commutator matrix.

    Rows are the (p-1)-subsets S of {1..2p} (the 0-containing source
    subsets with the 0 dropped), in lex order.  Columns are the
    (p+1)-subsets J, placed so that column u is the complement of row u;
    the block at (S, J) vanishes unless S is inside J, which parks the
    structural zeros on the diagonal for every p >= 2.
    """
    free = range(1, 2 * p + 1)
    rows = [tuple(s) for s in combinations(free, p - 1)]
    cols = []
    for s in rows:
        cols.append(tuple(x for x in free if x not in s))
    return rows, cols


def commutator_block(xs, p: int, domain: Domain = RATIONAL) -> SparseMatrix:
    """The product Q Qt of the flattening with slices (I, X_1, ..., X_2p).

    Square of size C(2p, p-1) * b.  Entries are transposed back so each
    block reads as a literal matrix product of the given slices; for
    p = 1 the single block is exactly X_1 X_2 - X_2 X_1.
    """
    xs = [np.asarray(x, dtype=object) for x in xs]
    if len(xs) != 2 * p:
        raise InvalidArguments(f"need 2p = {2 * p} slices, got {len(xs)}")
    b = xs[0].shape[0]
    if any(x.shape != (b, b) for x in xs):
        raise DimensionMismatch("all slices must be square of one size")
    eye = np.array([[1 if i == j else 0 for j in range(b)] for i in range(b)], dtype=object)
    t = tensor_from_slices([eye] + list(xs), domain)
    f = build_koszul(t, p, SPLIT_ZERO)
    blocks = block_decompose(f)
    prod = blocks.q.to_dense().dot(blocks.q_tilde.to_dense()).T
    # reorder column blocks into complement order (see _commutator_layout)
    _, col_labels = _commutator_layout(p)
    current = [
        s.elements for s in f.row_basis.subsets[: comb(2 * p, p + 1)]
    ]
    perm = [current.index(lbl) for lbl in col_labels]
    out = np.empty_like(prod)
    for u, src in enumerate(perm):
        out[:, u * b : (u + 1) * b] = prod[:, src * b : (src + 1) * b]
    return SparseMatrix.from_dense(out, domain)


def commutator_sign_pattern(p: int) -> dict:
    """Which commutator sits in each block of ``commutator_block``.

    Returns {(u, v): None or (i, j, sign)} meaning block (u, v) equals
    sign * (X_i X_j - X_j X_i) with i < j; None marks a structural zero.
    Derived by composing the wedge signs formally, independently of the
    matrix product, and it errors out if any block fails to be a
    commutator.
    """
    if p < 1:
        raise InvalidArguments(f"p must be at least 1, got {p}")
    k = 2 * p + 1
    row_labels, col_labels = _commutator_layout(p)
    pattern: dict = {}
    for u, s_elems in enumerate(row_labels):
        source = SubsetIndex.make((0,) + s_elems, k)  # the 0-containing p-subset
        for v, j_elems in enumerate(col_labels):
            if not set(s_elems) <= set(j_elems):
                pattern[(u, v)] = None
                continue
            x, y = sorted(set(j_elems) - set(s_elems))
            words = {}
            for d, a in ((x, y), (y, x)):
                mid = SubsetIndex.make(s_elems + (d,), k)  # 0-free p-subset
                s2 = wedge_insert(d, source)
                s1 = wedge_insert(a, mid)
                assert s2 is not None and s1 is not None
                assert s2[1].mask == mid.mask | 1  # sanity: inserts 0-side
                words[(d, a)] = s1[0] * s2[0]
            if words[(x, y)] != -words[(y, x)]:
                raise InvalidArguments(
                    f"block ({u},{v}) is not a commutator: words {words}"
                )
            pattern[(u, v)] = (x, y, words[(x, y)])
    return pattern


# ---------------------------------------------------------------------------
# determinants
# ---------------------------------------------------------------------------


def det_flattening(f: FlatteningMatrix, q: int | None = None):
    """Determinant of a square flattening, exact or mod q.

    With q = None the matrix must be rational and the result is an exact
    Rational; otherwise the result is the canonical representative of the
    determinant in GF(q).
    """
    if q is None:
        if f.domain.kind != "rational":
            raise InvalidArguments("exact determinant needs a rational flattening")
        return det_exact(f.matrix)
    return det_mod_q(f.matrix, q)
