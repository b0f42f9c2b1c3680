"""Rank lower bound formulas and replayable certificates.

The flattening of the n x n (times n x m) matrix multiplication map at a
generic (2p+1)-dimensional subspace has full rank; whenever a sampled
subspace achieves it, border rank is at least (2p+1)/(p+1) * n * m and
rank is at least

    (2p+1)/(p+1) * n * m  +  n^2  -  (1 + 2p * C(2p, p-1)) * n,

rounded up.  A certificate records the subspace, the primes, the ranks
and the seed, so the whole computation can be replayed bit for bit.
Ranks are taken mod word-sized primes: reduction can only lose rank,
never gain it, so every emitted bound is sound even when a prime is
unlucky.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, comb

import numpy as np

from ._version import VERSION
from .errors import (
    DimensionMismatch,
    IdenticallyZeroWitness,
    InvalidArguments,
    NotFullRank,
)
from .field import DEFAULT_PRIME, DEFAULT_PRIMES, Rng, check_modulus
from .flattening import FlatteningMatrix, build_koszul, build_reduced_matmul
from .rank_engine import rank_exact, rank_mod_q, rank_multi_prime
from .tensor import Subspace, Tensor3, matmul_tensor, restrict_a

CERT_FORMAT = "certificate-v1"

BOUND_THEOREM = "theorem11"
BOUND_SIMPLE = "simple"
BOUND_NONE = "none"


# ---------------------------------------------------------------------------
# closed-form bounds
# ---------------------------------------------------------------------------


def _check_nmp(n: int, m: int, p: int) -> None:
    if n < 2 or m < 1:
        raise InvalidArguments(f"need n >= 2 and m >= 1, got n={n}, m={m}")
    if not 1 <= p <= n - 1:
        raise InvalidArguments(f"need 1 <= p <= n-1, got p={p} with n={n}")


def theorem_rank_lb_raw(n: int, m: int, p: int) -> int:
    """The rank bound before clamping; can go nonpositive at small n."""
    _check_nmp(n, m, p)
    value = (
        Fraction(2 * p + 1, p + 1) * n * m
        + n * n
        - (1 + 2 * p * comb(2 * p, p - 1)) * n
    )
    return ceil(value)

def theorem_rank_lb(n: int, m: int, p: int) -> int:
    """Certified rank lower bound for n x n times n x m multiplication.

    Clamped below by the trivial bound n*m; use theorem_rank_lb_raw for
    the unclamped formula value.  For p = 1 and m = n this is
    ceil(2.5 n^2 - 3 n).
    """
    return max(theorem_rank_lb_raw(n, m, p), n * m)


def simple_rank_lb_raw(n: int, m: int, p: int) -> int:
    """Weaker bound with the crude error term (2p+1) * C(2p+1, p) * n."""
    _check_nmp(n, m, p)
    value = (
        Fraction(2 * p + 1, p + 1) * n * m
        + n * n
        - (2 * p + 1) * comb(2 * p + 1, p) * n
    )
    return ceil(value)


def simple_rank_lb(n: int, m: int, p: int) -> int:
    """Clamped version of simple_rank_lb_raw; kept for comparison tables."""
    return max(simple_rank_lb_raw(n, m, p), n * m)


def reference_bounds(n: int, m: int) -> dict:
    """Published comparison points for n x n times n x m multiplication.

    blaser: the rank bound 2nm - m + 2n - 2.
    lo_borderrank: the border rank bound 2nm - m, which equals the
    (2p+1)/(p+1) * n * m border term at p = n - 1.
    """
    if n < 2 or m < 1:
        raise InvalidArguments(f"need n >= 2 and m >= 1, got n={n}, m={m}")
    return {
        "blaser": 2 * n * m - m + 2 * n - 2,
        "lo_borderrank": 2 * n * m - m,
    }


def best_p(n: int, m: int) -> tuple[int, int]:
    """(p, bound) maximizing theorem_rank_lb over 1 <= p <= n-1.

    Ties go to the smaller p, which is also the cheaper certificate.
    """
    if n < 2:
        raise InvalidArguments(f"need n >= 2, got {n}")
    best = 1
    best_val = theorem_rank_lb(n, m, 1)
    for p in range(2, n):
        val = theorem_rank_lb(n, m, p)
        if val > best_val:
            best, best_val = p, val
    return best, best_val


def crossover_table(n_max: int) -> list[dict]:
    """Square-case p=1 versus p=2 raw formula values for n = 3 .. n_max.

    Raw, not clamped: the table is about where the two formulas cross,
    and their difference is about n(n-84)/6 exactly, so the winner flips
    to p=2 strictly after n = 84, with equality at 84.
    """
    if n_max < 3:
        raise InvalidArguments(f"need n_max >= 3, got {n_max}")
    rows = []
    for n in range(3, n_max + 1):
        b1 = theorem_rank_lb_raw(n, n, 1)
        b2 = theorem_rank_lb_raw(n, n, 2)
        rows.append({"n": n, "bound_p1": b1, "bound_p2": b2, "winner": "p2" if b2 > b1 else "p1"})
    return rows


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------


@dataclass
class Certificate:
    """Everything needed to replay one certification run."""

    target: dict
    p: int
    seed: int
    sample_prime: int
    primes: tuple
    retries: int
    attempts: int
    subspace_rows: list  # integer lifts of the sampled basis, as ints
    flattening_shape: tuple
    flattening_rank: int
    exact: bool
    full_rank: bool
    border_rank_lb: int
    rank_lb: int | None
    rank_lb_raw: int | None
    bound_formula: str
    tool_version: str = VERSION

    def to_json(self) -> dict:
        return {
            "format": CERT_FORMAT,
            "target": self.target,
            "p": self.p,
            "seed": self.seed,
            "sample_prime": self.sample_prime,
            "primes": list(self.primes),
            "retries": self.retries,
            "attempts": self.attempts,
            "subspace": [[str(v) for v in row] for row in self.subspace_rows],
            "flattening_shape": list(self.flattening_shape),
            "flattening_rank": self.flattening_rank,
            "exact": self.exact,
            "full_rank": self.full_rank,
            "border_rank_lb": self.border_rank_lb,
            "rank_lb": self.rank_lb,
            "rank_lb_raw": self.rank_lb_raw,
            "bound_formula": self.bound_formula,
            "tool_version": self.tool_version,
        }

    @staticmethod
    def from_json(obj: dict) -> "Certificate":
        return Certificate(
            target=obj["target"],
            p=int(obj["p"]),
            seed=int(obj["seed"]),
            sample_prime=int(obj["sample_prime"]),
            primes=tuple(int(q) for q in obj["primes"]),
            retries=int(obj["retries"]),
            attempts=int(obj["attempts"]),
            subspace_rows=[[int(v) for v in row] for row in obj["subspace"]],
            flattening_shape=tuple(obj["flattening_shape"]),
            flattening_rank=int(obj["flattening_rank"]),
            exact=bool(obj["exact"]),
            full_rank=bool(obj["full_rank"]),
            border_rank_lb=int(obj["border_rank_lb"]),
            rank_lb=None if obj["rank_lb"] is None else int(obj["rank_lb"]),
            rank_lb_raw=None if obj["rank_lb_raw"] is None else int(obj["rank_lb_raw"]),
            bound_formula=obj["bound_formula"],
            tool_version=obj.get("tool_version", "unknown"),
        )


def _draw_subspace(k: int, ambient: int, q: int, rng: Rng) -> Subspace:
    """Integer-lifted uniform GF(q) basis; redraws rank-deficient ones."""
    while True:
        rows = [[rng.below(q) for _ in range(ambient)] for _ in range(k)]
        try:
            return Subspace(np.array(rows, dtype=object))
        except InvalidArguments:
            continue


def _flattening_rank(f: FlatteningMatrix, primes, exact: bool) -> int:
    if exact:
        return rank_exact(f.matrix)
    return rank_multi_prime(f.matrix, primes)


def certify_matmul(
    n: int,
    m: int,
    p: int,
    seed: int,
    *,
    primes=None,
    retries: int = 3,
    sample_prime: int | None = None,
    exact: bool = False,
) -> Certificate:
    """Certify rank and border rank bounds for n x n times n x m multiplication.

    Samples a (2p+1)-dimensional subspace of the n^2-dimensional factor,
    builds the reduced flattening and takes its rank over several primes
    (or exactly, with exact=True).  Full rank C(2p+1, p) * n certifies
    border rank >= (2p+1)/(p+1) * n * m and the theorem rank bound; a
    run that never reaches full rank raises NotFullRank carrying the
    flagged certificate with the bound actually achieved.
    """
    _check_nmp(n, m, p)
    q0 = DEFAULT_PRIME if sample_prime is None else sample_prime
    check_modulus(q0)
    primes = tuple(primes) if primes else DEFAULT_PRIMES
    full = comb(2 * p + 1, p) * n
    rng = Rng(seed)
    best = None  # (rank, subspace, shape)
    attempts = 0
    for _ in range(retries + 1):
        attempts += 1
        w = _draw_subspace(2 * p + 1, n * n, q0, rng)
        f = build_reduced_matmul(n, w, p)
        rank = _flattening_rank(f, primes, exact)
        if best is None or rank > best[0]:
            best = (rank, w, f.shape)
        if rank == full:
            break
    rank, w, shape = best
    full_rank = rank == full
    border = ceil(Fraction(m * rank, comb(2 * p, p)))
    cert = Certificate(
        target={"kind": "matmul", "n": n, "m": m},
        p=p,
        seed=seed,
        sample_prime=q0,
        primes=primes,
        retries=retries,
        attempts=attempts,
        subspace_rows=[[int(v) for v in row] for row in w.basis],
        flattening_shape=shape,
        flattening_rank=rank,
        exact=exact,
        full_rank=full_rank,
        border_rank_lb=border,
        rank_lb=theorem_rank_lb(n, m, p) if full_rank else border,
        rank_lb_raw=theorem_rank_lb_raw(n, m, p) if full_rank else None,
        bound_formula=BOUND_THEOREM if full_rank else BOUND_NONE,
    )
    if not full_rank:
        raise NotFullRank(
            f"flattening rank {rank} < {full} after {attempts} attempts", cert
        )
    return cert


def certify_tensor(
    t: Tensor3,
    p: int,
    seed: int,
    *,
    primes=None,
    retries: int = 3,
    sample_prime: int | None = None,
    exact: bool = False,
) -> Certificate:
    """Border rank lower bound for an arbitrary order-3 tensor.

    Restricts the first factor to a random (2p+1)-dimensional subspace
    and divides the flattening rank by C(2p, p), keeping the best draw.
    GF(q) tensors are ranked over their own prime; rational tensors over
    the multi-prime default.
    """
    a, b, c = t.dims
    if p < 1:
        raise InvalidArguments(f"p must be at least 1, got {p}")
    if a < 2 * p + 1:
        raise InvalidArguments(f"first dim {a} below 2p+1 = {2 * p + 1}")
    if t.domain.kind == "gfp":
        q0 = t.domain.q
        primes = (q0,)
    else:
        q0 = DEFAULT_PRIME if sample_prime is None else sample_prime
        primes = tuple(primes) if primes else DEFAULT_PRIMES
    check_modulus(q0)
    cap = comb(2 * p + 1, p) * min(b, c)  # rank can never exceed this
    rng = Rng(seed)
    best = None
    attempts = 0
    for _ in range(retries + 1):
        attempts += 1
        if t.domain.kind == "gfp":
            from .tensor import random_subspace

            w = random_subspace(2 * p + 1, a, q0, rng)
        else:
            w = _draw_subspace(2 * p + 1, a, q0, rng)
        f = build_koszul(restrict_a(t, w), p)
        if t.domain.kind == "rational":
            rank = rank_exact(f.matrix) if exact else rank_multi_prime(f.matrix, primes)
        else:
            rank = rank_mod_q(f.matrix, q0)
        if best is None or rank > best[0]:
            best = (rank, w, f.shape)
        if rank == cap:
            break
    rank, w, shape = best
    return Certificate(
        target={"kind": "tensor", "dims": list(t.dims), "sha256": t.canonical_hash()},
        p=p,
        seed=seed,
        sample_prime=q0,
        primes=primes,
        retries=retries,
        attempts=attempts,
        subspace_rows=[[int(v) for v in row] for row in w.basis],
        flattening_shape=shape,
        flattening_rank=rank,
        exact=exact and t.domain.kind == "rational",
        full_rank=rank == cap,
        border_rank_lb=ceil(Fraction(rank, comb(2 * p, p))),
        rank_lb=None,
        rank_lb_raw=None,
        bound_formula=BOUND_NONE,
    )


def replay_certificate(cert: Certificate, tensor: Tensor3 | None = None) -> Certificate:
    """Re-run a certificate from its recorded seed and parameters.

    Returns the freshly computed certificate; it must agree field for
    field (including the sampled subspace) or something drifted.
    """
    kind = cert.target.get("kind")
    if kind == "matmul":
        try:
            fresh = certify_matmul(
                cert.target["n"],
                cert.target["m"],
                cert.p,
                cert.seed,
                primes=cert.primes,
                retries=cert.retries,
                sample_prime=cert.sample_prime,
                exact=cert.exact,
            )
        except NotFullRank as err:
            fresh = err.certificate
    elif kind == "tensor":
        if tensor is None:
            raise InvalidArguments("replaying a tensor certificate needs the tensor")
        if tensor.canonical_hash() != cert.target["sha256"]:
            raise InvalidArguments("tensor hash does not match the certificate")
        fresh = certify_tensor(
            tensor,
            cert.p,
            cert.seed,
            primes=None if tensor.domain.kind == "gfp" else cert.primes,
            retries=cert.retries,
            sample_prime=None if tensor.domain.kind == "gfp" else cert.sample_prime,
            exact=cert.exact,
        )
    else:
        raise InvalidArguments(f"unknown certificate target {cert.target!r}")
    if fresh.subspace_rows != cert.subspace_rows:
        raise InvalidArguments("replay drew a different subspace; stream mismatch")
    return fresh


# ---------------------------------------------------------------------------
# randomized support searches
# ---------------------------------------------------------------------------


@dataclass
class SupportSearch:
    """Result of a greedy support hunt for one polynomial."""

    support: tuple
    witness: tuple
    probes: int
    failure_bound: Fraction
    q: int
    seed: int


@dataclass
class GrassmannSupport:
    """Union support over the k copies, with per-copy detail."""

    support: tuple
    per_copy: tuple
    witness: tuple  # k coordinate vectors
    probes: int
    failure_bound: Fraction
    q: int
    seed: int


class _ProbeCounter:
    def __init__(self):
        self.count = 0


def _shrink(evaluate, n: int, rng: Rng, q: int, t: int, witness, counter) -> tuple:
    """One greedy pass: try to empty each coordinate, t probes per try.

    evaluate takes a full-length coordinate list.  A nonzero probe
    proves the smaller support still works; a silent batch keeps the
    coordinate.  Returns (support, witness, keep_decisions).
    """
    support = set(range(n))
    keeps = 0
    for c in range(n):
        trial = support - {c}
        hit = None
        for _ in range(t):
            x = [0] * n
            for idx in trial:
                x[idx] = rng.below(q)
            counter.count += 1
            if evaluate(x) != 0:
                hit = x
                break
        if hit is None:
            keeps += 1
        else:
            support = trial
            witness = hit
    return tuple(sorted(support)), tuple(witness), keeps


def greedy_support(
    blackbox,
    n_coords: int,
    degree: int,
    seed: int,
    *,
    q: int = DEFAULT_PRIME,
    initial_probes: int = 16,
    probes_per_step: int = 8,
) -> SupportSearch:
    """Find few coordinates on which a degree-d polynomial stays nonzero.

    A polynomial of total degree d has a monomial touching at most d
    variables, so as long as the probe batches are truthful the final
    support has size at most ``degree``.  Each silent batch is wrong
    with probability at most (degree/q)**probes_per_step; the summed
    bound is recorded on the result.
    """
    check_modulus(q)
    if degree < 1:
        raise InvalidArguments("degree bound must be positive")
    rng = Rng(seed)
    counter = _ProbeCounter()
    witness = None
    for _ in range(initial_probes):
        x = [rng.below(q) for _ in range(n_coords)]
        counter.count += 1
        if blackbox(x) != 0:
            witness = x
            break
    if witness is None:
        raise IdenticallyZeroWitness(
            f"no nonzero value in {initial_probes} probes; input may be zero"
        )
    support, witness, keeps = _shrink(
        blackbox, n_coords, rng, q, probes_per_step, witness, counter
    )
    return SupportSearch(
        support=support,
        witness=witness,
        probes=counter.count,
        failure_bound=keeps * Fraction(degree, q) ** probes_per_step,
        q=q,
        seed=seed,
    )


def grassmann_support(
    blackbox,
    n_coords: int,
    k: int,
    degree: int,
    seed: int,
    *,
    q: int = DEFAULT_PRIME,
    initial_probes: int = 16,
    probes_per_step: int = 8,
) -> GrassmannSupport:
    """Support hunt for a polynomial evaluated on k-tuples of vectors.

    Shrinks one copy at a time, holding the other copies at the current
    witness; ``degree`` bounds the degree in each single copy, so the
    union support has at most degree * k coordinates.
    """
    check_modulus(q)
    if k < 1:
        raise InvalidArguments("need at least one copy")
    rng = Rng(seed)
    counter = _ProbeCounter()
    witness = None
    for _ in range(initial_probes):
        tup = [[rng.below(q) for _ in range(n_coords)] for _ in range(k)]
        counter.count += 1
        if blackbox(tup) != 0:
            witness = tup
            break
    if witness is None:
        raise IdenticallyZeroWitness(
            f"no nonzero value in {initial_probes} probes; input may be zero"
        )
    supports = []
    bound = Fraction(0)
    for copy in range(k):
        def one_copy(x, _copy=copy):
            stacked = [list(w) for w in witness]
            stacked[_copy] = list(x)
            return blackbox(stacked)

        sup, wit, keeps = _shrink(
            one_copy, n_coords, rng, q, probes_per_step, witness[copy], counter
        )
        witness[copy] = list(wit)
        supports.append(sup)
        bound += keeps * Fraction(degree, q) ** probes_per_step
    union = tuple(sorted(set().union(*supports)))
    return GrassmannSupport(
        support=union,
        per_copy=tuple(supports),
        witness=tuple(tuple(w) for w in witness),
        probes=counter.count,
        failure_bound=bound,
        q=q,
        seed=seed,
    )
