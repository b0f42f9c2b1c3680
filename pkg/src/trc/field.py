"""Exact coefficient arithmetic: rationals, prime fields, seeded sampling.

Rationals are ``fractions.Fraction`` (arbitrary precision, always reduced,
positive denominator), re-exported here as ``Rational``.  Prime field values
are ints in [0, q) for a word-sized prime q, wrapped in ``PrimeFieldElement``
for the public API; the elimination engines work on the raw ints.

The seeded generator is SplitMix64.  The algorithm is pinned in this file on
purpose: certificates promise bit-for-bit replay, so the stream must never
depend on the version of an external library.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import DenominatorVanishes, InvalidArguments

Rational = Fraction

#: Default certification prime, 2**31 - 1 (Mersenne).
DEFAULT_PRIME = 2147483647

#: Primes used by multi-prime rank checks, largest three below 2**31.
DEFAULT_PRIMES = (2147483647, 2147483629, 2147483587)

_MASK64 = (1 << 64) - 1


# ---------------------------------------------------------------------------
# primality
# ---------------------------------------------------------------------------

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


@lru_cache(maxsize=4096)
def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for every n below 3.3e24."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def check_modulus(q: int) -> None:
    """Reject moduli that are not word-sized primes."""
    if not isinstance(q, int) or q < 2 or q >= 1 << 63:
        raise InvalidArguments(f"modulus must be a prime below 2**63, got {q}")
    if not is_prime(q):
        raise InvalidArguments(f"modulus {q} is not prime")


# ---------------------------------------------------------------------------
# domains
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Domain:
    """Coefficient domain tag: exact rationals or GF(q)."""

    kind: str  # "rational" | "gfp"
    q: int | None = None

    def __post_init__(self):
        if self.kind == "rational":
            if self.q is not None:
                raise InvalidArguments("rational domain takes no modulus")
        elif self.kind == "gfp":
            check_modulus(self.q)
        else:
            raise InvalidArguments(f"unknown domain kind {self.kind!r}")

    def coerce(self, value):
        """Bring a raw coefficient into this domain's canonical form."""
        if self.kind == "rational":
            return Fraction(value)
        if isinstance(value, Fraction):
            return project_mod_q(value, self.q).value
        return int(value) % self.q

    def to_json(self):
        return "rational" if self.kind == "rational" else {"gfp": self.q}

    @staticmethod
    def from_json(obj) -> "Domain":
        if obj == "rational":
            return RATIONAL
        if isinstance(obj, dict) and set(obj) == {"gfp"}:
            return gfp(int(obj["gfp"]))
        raise InvalidArguments(f"bad domain tag {obj!r}")


RATIONAL = Domain("rational")


def gfp(q: int) -> Domain:
    """The prime field GF(q)."""
    return Domain("gfp", q)


# ---------------------------------------------------------------------------
# prime field elements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PrimeFieldElement:
    """A canonical representative in GF(q), 0 <= value < q."""

    value: int
    q: int

    def __post_init__(self):
        check_modulus(self.q)
        if not 0 <= self.value < self.q:
            raise InvalidArguments(f"value {self.value} not reduced mod {self.q}")

    def _check(self, other: "PrimeFieldElement") -> None:
        if self.q != other.q:
            raise InvalidArguments(f"mixed moduli {self.q} and {other.q}")

    def __add__(self, other):
        self._check(other)
        return PrimeFieldElement((self.value + other.value) % self.q, self.q)

    def __sub__(self, other):
        self._check(other)
        return PrimeFieldElement((self.value - other.value) % self.q, self.q)

    def __mul__(self, other):
        self._check(other)
        return PrimeFieldElement(self.value * other.value % self.q, self.q)

    def __neg__(self):
        return PrimeFieldElement(-self.value % self.q, self.q)

    def inverse(self) -> "PrimeFieldElement":
        if self.value == 0:
            raise ZeroDivisionError(f"0 has no inverse mod {self.q}")
        return PrimeFieldElement(pow(self.value, -1, self.q), self.q)

    def __truediv__(self, other):
        self._check(other)
        return self * other.inverse()


def project_mod_q(x: Rational, q: int) -> PrimeFieldElement:
    """Reduce an exact rational mod q.

    Raises DenominatorVanishes when q divides the denominator, in which
    case no canonical image exists.
    """
    check_modulus(q)
    x = Fraction(x)
    if x.denominator % q == 0:
        raise DenominatorVanishes(f"denominator {x.denominator} vanishes mod {q}")
    value = x.numerator * pow(x.denominator % q, -1, q) % q
    return PrimeFieldElement(value, q)


# ---------------------------------------------------------------------------
# seeded randomness
# ---------------------------------------------------------------------------


class Rng:
    """SplitMix64 stream with unbiased sampling below a bound.

    next_u64:  state += 0x9E3779B97F4A7C15;  output = mix(state)  where
    mix xors the state with shifted copies and multiplies by the two
    standard odd constants.  Identical seeds give identical streams on
    every platform, which is what certificate replay leans on.
    """

    __slots__ = ("seed", "_state")

    def __init__(self, seed: int):
        self.seed = seed & _MASK64
        self._state = self.seed

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n), by rejection from 64-bit draws."""
        if n <= 0:
            raise InvalidArguments(f"bound must be positive, got {n}")
        limit = _MASK64 - (_MASK64 + 1) % n  # last acceptable draw
        while True:
            u = self.next_u64()
            if u <= limit:
                return u % n

    def spawn(self, key: int) -> "Rng":
        """Derive an independent child stream, deterministically from key."""
        mixer = Rng(self.seed ^ ((key + 1) * 0x9E3779B97F4A7C15 & _MASK64))
        mixer.next_u64()
        return Rng(mixer.next_u64())


def sample_uniform(q: int, rng: Rng) -> PrimeFieldElement:
    """Uniform element of GF(q) from the given stream."""
    check_modulus(q)
    return PrimeFieldElement(rng.below(q), q)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def coeff_to_str(value, domain: Domain) -> str:
    """Serialize a coefficient: "num/den" for rationals, decimal for GF(q)."""
    if domain.kind == "gfp":
        return str(int(value) % domain.q)
    f = Fraction(value)
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def coeff_from_str(text: str, domain: Domain):
    """Parse what coeff_to_str wrote."""
    if domain.kind == "gfp":
        return int(text) % domain.q
    if "/" in text:
        num, den = text.split("/")
        return Fraction(int(num), int(den))
    return Fraction(int(text))
