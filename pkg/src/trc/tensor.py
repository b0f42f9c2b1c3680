"""Order-3 tensors with exact entries, and the matrix multiplication family.

A ``Tensor3`` lives in A (x) B (x) C with dims (a, b, c) and sparse exact
entries.  All operations that care about one factor act on the first one;
permute the data yourself if you need another, the storage is symmetric.

``matmul_tensor(MatMulDescriptor(m, n, l))`` is the trilinear form
trace(X Y Z) for X m-by-n, Y n-by-l, Z l-by-m.  Pair indices flatten
row-major: A-index (i, j) -> i*n + j, B-index (j, k) -> j*l + k,
C-index (k, i) -> k*m + i, and the entry is 1 exactly when the three
pair indices chain (i = i', j = j', k = k').
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import DimensionMismatch, InvalidArguments
from .field import (
    DEFAULT_PRIME,
    Domain,
    RATIONAL,
    Rational,
    Rng,
    coeff_from_str,
    coeff_to_str,
    sample_uniform,
)
from .rank_engine import SparseMatrix, rank_exact, rank_mod_q

TENSOR_FORMAT = "tensor3-v1"
DECOMP_FORMAT = "decomposition-v1"


# ---------------------------------------------------------------------------
# core types
# ---------------------------------------------------------------------------


@dataclass
class Tensor3:
    """Sparse exact tensor of order 3; no explicit zeros are stored."""

    dims: tuple[int, int, int]
    domain: Domain = RATIONAL
    entries: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        self.dims = tuple(int(d) for d in self.dims)
        if len(self.dims) != 3 or any(d < 1 for d in self.dims):
            raise InvalidArguments(f"bad tensor dims {self.dims}")
        clean = {}
        for (i, j, k), v in self.entries.items():
            if not (0 <= i < self.dims[0] and 0 <= j < self.dims[1] and 0 <= k < self.dims[2]):
                raise DimensionMismatch(f"entry {(i, j, k)} outside dims {self.dims}")
            v = self.domain.coerce(v)
            if v != 0:
                clean[(i, j, k)] = v
        self.entries = clean

    @property
    def nnz(self) -> int:
        return len(self.entries)

    def entry(self, i: int, j: int, k: int):
        zero = Rational(0) if self.domain.kind == "rational" else 0
        return self.entries.get((i, j, k), zero)

    def add(self, other: "Tensor3") -> "Tensor3":
        if self.dims != other.dims or self.domain != other.domain:
            raise DimensionMismatch("tensor sum needs equal dims and domains")
        merged = dict(self.entries)
        for key, v in other.entries.items():
            merged[key] = merged.get(key, 0) + v
        return Tensor3(self.dims, self.domain, merged)

    def scale(self, c) -> "Tensor3":
        return Tensor3(self.dims, self.domain, {k: v * c for k, v in self.entries.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, Tensor3):
            return NotImplemented
        return (
            self.dims == other.dims
            and self.domain == other.domain
            and self.entries == other.entries
        )

    def to_dense(self) -> np.ndarray:
        zero = Rational(0) if self.domain.kind == "rational" else 0
        out = np.full(self.dims, zero, dtype=object)
        for (i, j, k), v in self.entries.items():
            out[i, j, k] = v
        return out

    @staticmethod
    def from_dense(arr, domain: Domain = RATIONAL) -> "Tensor3":
        arr = np.asarray(arr, dtype=object)
        if arr.ndim != 3:
            raise DimensionMismatch(f"expected a 3d array, got shape {arr.shape}")
        entries = {}
        for idx, v in np.ndenumerate(arr):
            if v != 0:
                entries[idx] = v
        return Tensor3(arr.shape, domain, entries)

    def to_json(self) -> dict:
        ordered = sorted(self.entries.items())
        return {
            "format": TENSOR_FORMAT,
            "dims": list(self.dims),
            "domain": self.domain.to_json(),
            "entries": [[i, j, k, coeff_to_str(v, self.domain)] for (i, j, k), v in ordered],
        }

    @staticmethod
    def from_json(obj: dict) -> "Tensor3":
        domain = Domain.from_json(obj["domain"])
        entries = {
            (int(i), int(j), int(k)): coeff_from_str(s, domain)
            for i, j, k, s in obj["entries"]
        }
        dims = obj["dims"]
        if len(dims) != 3:
            raise DimensionMismatch(f"dims must have length 3, got {dims}")
        return Tensor3(tuple(int(d) for d in dims), domain, entries)

    def canonical_hash(self) -> str:
        """sha256 of the canonical serialization, independent of file formatting."""
        blob = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


@dataclass(frozen=True)
class MatMulDescriptor:
    """Shape triple of a matrix multiplication map: (m x n) times (n x l)."""

    m: int
    n: int
    l: int

    def __post_init__(self):
        if min(self.m, self.n, self.l) < 1:
            raise InvalidArguments(f"matmul sides must be positive, got {self}")

    @property
    def dims(self) -> tuple[int, int, int]:
        return (self.m * self.n, self.n * self.l, self.l * self.m)


@dataclass
class Subspace:
    """A k-dimensional subspace of coordinate space, by a basis-row matrix."""

    basis: np.ndarray  # k x ambient, object dtype
    domain: Domain = RATIONAL

    def __post_init__(self):
        self.basis = np.asarray(self.basis, dtype=object)
        if self.basis.ndim != 2:
            raise DimensionMismatch("subspace basis must be a 2d row matrix")
        coerced = np.empty(self.basis.shape, dtype=object)
        for idx, v in np.ndenumerate(self.basis):
            coerced[idx] = self.domain.coerce(v)
        self.basis = coerced
        m = SparseMatrix.from_dense(self.basis, RATIONAL if self.domain.kind == "rational" else self.domain)
        if self.domain.kind == "rational":
            rank = rank_exact(m)
        else:
            rank = rank_mod_q(m, self.domain.q)
        if rank != self.k:
            raise InvalidArguments(f"basis rows dependent: rank {rank} < {self.k}")

    @property
    def k(self) -> int:
        return self.basis.shape[0]

    @property
    def ambient(self) -> int:
        return self.basis.shape[1]

    def rows_as_str(self) -> list[list[str]]:
        return [[coeff_to_str(v, self.domain) for v in row] for row in self.basis]


def random_subspace(k: int, ambient: int, q: int, rng: Rng) -> Subspace:
    """Uniform full-rank k x ambient basis over GF(q); resamples degenerate draws."""
    if k > ambient:
        raise InvalidArguments(f"subspace dim {k} exceeds ambient {ambient}")
    while True:
        basis = np.array(
            [[rng.below(q) for _ in range(ambient)] for _ in range(k)], dtype=object
        )
        try:
            return Subspace(basis, Domain("gfp", q))
        except InvalidArguments:
            continue  # probability about q**-(ambient-k+1), try again


@dataclass
class RankOneTerm:
    u: tuple
    v: tuple
    w: tuple


@dataclass
class Decomposition:
    """A list of rank-one terms summing to a target tensor."""

    terms: list
    domain: Domain = RATIONAL

    def __len__(self) -> int:
        return len(self.terms)

    def to_json(self) -> dict:
        def vec(x):
            return [coeff_to_str(v, self.domain) for v in x]

        return {
            "format": DECOMP_FORMAT,
            "domain": self.domain.to_json(),
            "terms": [{"u": vec(t.u), "v": vec(t.v), "w": vec(t.w)} for t in self.terms],
        }

    @staticmethod
    def from_json(obj: dict) -> "Decomposition":
        domain = Domain.from_json(obj.get("domain", "rational"))

        def vec(x):
            return tuple(coeff_from_str(s, domain) for s in x)

        terms = [RankOneTerm(vec(t["u"]), vec(t["v"]), vec(t["w"])) for t in obj["terms"]]
        return Decomposition(terms, domain)


# ---------------------------------------------------------------------------
# construction and slicing
# ---------------------------------------------------------------------------


def matmul_tensor(desc: MatMulDescriptor, domain: Domain = RATIONAL) -> Tensor3:
    """The matrix multiplication tensor for the given shape triple.

    Exactly m*n*l entries, all equal to 1.
    """
    m, n, l = desc.m, desc.n, desc.l
    entries = {}
    for i in range(m):
        for j in range(n):
            for k in range(l):
                entries[(i * n + j, j * l + k, k * m + i)] = 1
    return Tensor3(desc.dims, domain, entries)


def slices_a(t: Tensor3) -> list[np.ndarray]:
    """Slices along the first factor: X_i[j, k] = T[i, j, k], each b x c."""
    a, b, c = t.dims
    zero = Rational(0) if t.domain.kind == "rational" else 0
    out = [np.full((b, c), zero, dtype=object) for _ in range(a)]
    for (i, j, k), v in t.entries.items():
        out[i][j, k] = v
    return out


def tensor_from_slices(slices, domain: Domain = RATIONAL) -> Tensor3:
    """Inverse of slices_a: stack b x c matrices into an (a, b, c) tensor."""
    slices = [np.asarray(s, dtype=object) for s in slices]
    if not slices:
        raise InvalidArguments("need at least one slice")
    b, c = slices[0].shape
    if any(s.shape != (b, c) for s in slices):
        raise DimensionMismatch("slices differ in shape")
    entries = {}
    for i, s in enumerate(slices):
        for j in range(b):
            for k in range(c):
                if s[j, k] != 0:
                    entries[(i, j, k)] = s[j, k]
    return Tensor3((len(slices), b, c), domain, entries)


def restrict_a(t: Tensor3, w: Subspace) -> Tensor3:
    """Restrict the first factor to a subspace: new slice s is sum_i W[s,i] X_i."""
    a, b, c = t.dims
    if w.ambient != a:
        raise DimensionMismatch(f"subspace ambient {w.ambient} does not match first dim {a}")
    if w.domain != t.domain:
        raise DimensionMismatch("tensor and subspace domains differ")
    acc = {}
    for (i, j, k), v in t.entries.items():
        for s in range(w.k):
            coeff = w.basis[s, i]
            if coeff != 0:
                key = (s, j, k)
                acc[key] = acc.get(key, 0) + coeff * v
    return Tensor3((w.k, b, c), t.domain, acc)


def contract(t: Tensor3, axis: int, vec) -> SparseMatrix:
    """Pair one factor with a covector, leaving a matrix on the other two.

    contract(t, 0, a) has shape (b, c); axis 1 gives (a, c); axis 2 (a, b).
    """
    if axis not in (0, 1, 2):
        raise InvalidArguments(f"axis must be 0, 1 or 2, got {axis}")
    vec = list(vec)
    if len(vec) != t.dims[axis]:
        raise DimensionMismatch(f"covector length {len(vec)} vs dim {t.dims[axis]}")
    keep = [ax for ax in (0, 1, 2) if ax != axis]
    shape = (t.dims[keep[0]], t.dims[keep[1]])
    acc = {}
    for idx, v in t.entries.items():
        coeff = vec[idx[axis]]
        if coeff != 0:
            key = (idx[keep[0]], idx[keep[1]])
            acc[key] = acc.get(key, 0) + coeff * v
    return SparseMatrix(shape[0], shape[1], t.domain, acc)


def unfold_a(t: Tensor3) -> SparseMatrix:
    """First-factor unfolding, a x (b*c), columns flattened row-major (j, k)."""
    a, b, c = t.dims
    entries = {(i, j * c + k): v for (i, j, k), v in t.entries.items()}
    return SparseMatrix(a, b * c, t.domain, entries)


# ---------------------------------------------------------------------------
# random tensors and decomposition checking
# ---------------------------------------------------------------------------


def random_rank_r(dims, r: int, domain: Domain, rng: Rng):
    """A random sum of r rank-one terms, with its witness decomposition.

    Coordinates are uniform field samples; for the rational domain they
    are integer lifts of uniform draws mod the default prime.
    """
    a, b, c = (int(d) for d in dims)
    if r < 0:
        raise InvalidArguments("rank bound must be nonnegative")
    q = domain.q if domain.kind == "gfp" else DEFAULT_PRIME

    def draw(n):
        return tuple(sample_uniform(q, rng).value for _ in range(n))

    terms = [RankOneTerm(draw(a), draw(b), draw(c)) for _ in range(r)]
    acc = {}
    for t_ in terms:
        for i in range(a):
            if t_.u[i] == 0:
                continue
            for j in range(b):
                uv = t_.u[i] * t_.v[j]
                if uv == 0:
                    continue
                for k in range(c):
                    if t_.w[k] != 0:
                        acc[(i, j, k)] = acc.get((i, j, k), 0) + uv * t_.w[k]
    return Tensor3((a, b, c), domain, acc), Decomposition(terms, domain)


def tensor_from_decomposition(dims, d: Decomposition, domain: Domain) -> Tensor3:
    """Materialize the sum of rank-one terms as a sparse tensor."""
    a, b, c = (int(x) for x in dims)
    for term in d.terms:
        if (len(term.u), len(term.v), len(term.w)) != (a, b, c):
            raise DimensionMismatch("term vector lengths do not match dims")
    acc = {}
    for term in d.terms:
        for i in range(a):
            if term.u[i] == 0:
                continue
            for j in range(b):
                uv = term.u[i] * term.v[j]
                if uv == 0:
                    continue
                for k in range(c):
                    if term.w[k] != 0:
                        acc[(i, j, k)] = acc.get((i, j, k), 0) + uv * term.w[k]
    return Tensor3((a, b, c), domain, acc)


def verify_decomposition(t: Tensor3, d: Decomposition) -> bool:
    """Exact entrywise check that the terms sum to the tensor."""
    a, b, c = t.dims
    for term in d.terms:
        if (len(term.u), len(term.v), len(term.w)) != (a, b, c):
            raise DimensionMismatch("term vector lengths do not match tensor dims")
    acc = np.zeros((a, b, c), dtype=object)
    for term in d.terms:
        u = np.array(term.u, dtype=object)
        v = np.array(term.v, dtype=object)
        w = np.array(term.w, dtype=object)
        acc += np.einsum("i,j,k->ijk", u, v, w)
    target = t.to_dense()
    if t.domain.kind == "gfp":
        q = t.domain.q
        return bool(np.all((acc - target) % q == 0))
    return bool(np.all(acc == target))
