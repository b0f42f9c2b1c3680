"""Ground-truth fixtures and randomized soundness checks.

Known low-rank decompositions (shipped as JSON data files) give tensors
whose rank is bounded above by construction, so any certified lower bound
can be checked against them.  The sweep driver mass-produces random
low-rank tensors and verifies that certified bounds never exceed the
witnessed rank.
"""

from __future__ import annotations

import importlib.resources
import json
import math
from dataclasses import dataclass, field
from typing import Callable

from .certify import certify_tensor
from .errors import InvalidArguments, SweepViolation
from .field import DEFAULT_PRIME, Rng, check_modulus, gfp
from .rank_engine import rank_mod_q
from .tensor import (
    Decomposition,
    MatMulDescriptor,
    Tensor3,
    matmul_tensor,
    random_rank_r,
    tensor_from_decomposition,
    verify_decomposition,
)


@dataclass
class KnownDecomposition:
    """A named decomposition together with the tensor it decomposes."""

    name: str
    target: MatMulDescriptor
    decomposition: Decomposition

    @property
    def rank_witness(self) -> int:
        return len(self.decomposition.terms)

    def tensor(self) -> Tensor3:
        return tensor_from_decomposition(
            self.target.dims, self.decomposition, self.decomposition.domain
        )


_REGISTRY: dict[str, tuple[MatMulDescriptor, str]] = {
    "strassen7": (MatMulDescriptor(2, 2, 2), "strassen7.json"),
}


def registry_names() -> list[str]:
    return sorted(_REGISTRY)


def load_known(name: str) -> KnownDecomposition:
    """Load a registered decomposition and verify it before returning.

    The check recomputes the target tensor entrywise from the rank-one
    terms, so a corrupted data file fails loudly here instead of skewing
    every downstream comparison.
    """
    if name not in _REGISTRY:
        raise InvalidArguments(
            f"unknown decomposition {name!r}; registered: {registry_names()}"
        )
    target, filename = _REGISTRY[name]
    payload = (
        importlib.resources.files("trc.data").joinpath(filename).read_text()
    )
    decomp = Decomposition.from_json(json.loads(payload))
    expected = MatMulDescriptor(target.m, target.n, target.l)
    known = KnownDecomposition(name=name, target=expected, decomposition=decomp)
    if not verify_decomposition(matmul_tensor(expected, decomp.domain), decomp):
        raise InvalidArguments(f"registered decomposition {name!r} fails verification")
    return known


def strassen_7() -> KnownDecomposition:
    """The rank-7 decomposition of the 2x2 matrix multiplication tensor."""
    return load_known("strassen7")


def rank_one_flattening_rank(
    p: int, b: int, seed: int = 0, q: int = DEFAULT_PRIME
) -> int:
    """Rank of the degree-``p`` wedge flattening of a random rank-one tensor.

    Draws u, v, w with nonzero entries over GF(q), forms the rank-one
    tensor on dimensions (2p + 1, b, b), and returns the rank of its
    flattening.  Generically this is C(2p, p) independent of ``b``, which
    makes it a cheap calibration point for the flattening builder.
    """
    from .flattening import build_koszul

    if p < 1:
        raise InvalidArguments(f"p must be >= 1, got {p}")
    if b < 1:
        raise InvalidArguments(f"b must be >= 1, got {b}")
    check_modulus(q)
    rng = Rng(seed)

    def draw(length: int) -> list[int]:
        vec = [rng.below(q) for _ in range(length)]
        while all(x == 0 for x in vec):
            vec = [rng.below(q) for _ in range(length)]
        return vec

    a = 2 * p + 1
    u, v, w = draw(a), draw(b), draw(b)
    entries = {}
    for i in range(a):
        if u[i] == 0:
            continue
        for j in range(b):
            if v[j] == 0:
                continue
            for k in range(b):
                val = (u[i] * v[j] * w[k]) % q
                if val:
                    entries[(i, j, k)] = val
    tensor = Tensor3((a, b, b), gfp(q), entries)
    flat = build_koszul(tensor, p)
    return rank_mod_q(flat.matrix, q)


@dataclass
class SweepReport:
    """Outcome of a randomized soundness sweep."""

    dims: tuple[int, int, int]
    p: int
    r_max: int
    trials: int
    seed: int
    q: int
    per_r: list[dict] = field(default_factory=list)
    violations: int = 0

    def to_json(self) -> dict:
        return {
            "dims": list(self.dims),
            "p": self.p,
            "r_max": self.r_max,
            "trials": self.trials,
            "seed": self.seed,
            "q": self.q,
            "per_r": self.per_r,
            "violations": self.violations,
        }


def soundness_sweep(
    dims: tuple[int, int, int] = (5, 4, 4),
    p: int = 1,
    r_max: int = 5,
    trials: int = 100,
    seed: int = 0,
    q: int = DEFAULT_PRIME,
    on_trial: Callable[[int, int], None] | None = None,
) -> SweepReport:
    """Certify random rank-``r`` tensors and demand that bounds stay <= r.

    For each r in 0..r_max the driver draws ``trials`` tensors with an
    explicit rank-r witness, certifies each one, and records the spread
    of certified bounds.  A certified bound exceeding the witnessed rank
    disproves soundness; the offending trial is packaged into a
    :class:`SweepViolation` so it can be replayed in isolation.
    """
    a, b, c = dims
    if p < 1 or 2 * p + 1 > a:
        raise InvalidArguments(f"need 1 <= p and 2p+1 <= {a}, got p={p}")
    if r_max < 0 or trials < 1:
        raise InvalidArguments("r_max must be >= 0 and trials >= 1")
    check_modulus(q)
    master = Rng(seed)
    report = SweepReport(
        dims=(a, b, c), p=p, r_max=r_max, trials=trials, seed=seed, q=q
    )
    for r in range(r_max + 1):
        counts: dict[int, int] = {}
        max_lb = 0
        for trial in range(trials):
            child = master.spawn(r * 1_000_003 + trial)
            tensor, _ = random_rank_r((a, b, c), r, gfp(q), child)
            cert = certify_tensor(
                tensor, p, seed=child.next_u64() >> 1, retries=0
            )
            lb = cert.border_rank_lb
            counts[lb] = counts.get(lb, 0) + 1
            max_lb = max(max_lb, lb)
            if lb > r:
                report.violations += 1
                raise SweepViolation(
                    f"certified border rank bound {lb} exceeds witnessed rank {r}",
                    repro={
                        "dims": [a, b, c],
                        "p": p,
                        "r": r,
                        "trial": trial,
                        "sweep_seed": seed,
                        "q": q,
                        "certificate": cert.to_json(),
                    },
                )
            if on_trial is not None:
                on_trial(r, trial)
        report.per_r.append(
            {
                "r": r,
                "max_lb": max_lb,
                "lb_counts": {str(k): v for k, v in sorted(counts.items())},
            }
        )
    return report


def expected_generic_flattening_rank(p: int) -> int:
    """The generic flattening rank contributed by a single rank-one term."""
    return math.comb(2 * p, p)
