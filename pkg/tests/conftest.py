import random
import zlib
from fractions import Fraction

import pytest

from deltaclose import ExpCoefficient, calg, make_field
from deltaclose.exppoly import ExpPolynomial


@pytest.fixture(scope="session")
def sqrt2_field():
    return make_field([-2, 0, 1], (1, 2))


@pytest.fixture(scope="session")
def quartic_field():
    # Q(sqrt2 + sqrt3), minimal polynomial x^4 - 10 x^2 + 1
    return make_field([1, 0, -10, 0, 1], (Fraction(31, 10), Fraction(32, 10)))


def random_fraction(rng, num=6, den=4):
    return Fraction(rng.randint(-num, num), rng.randint(1, den))


def random_scalar(rng, field):
    return field.element([random_fraction(rng) for _ in range(field.degree)])


def random_nonzero_scalar(rng, field):
    while True:
        x = random_scalar(rng, field)
        if not x.is_zero():
            return x


def random_complex(rng, field):
    return calg(field, random_scalar(rng, field), random_scalar(rng, field))


def random_expcoef(rng, field, max_terms=3):
    out = ExpCoefficient.zero(field)
    for _ in range(rng.randint(0, max_terms)):
        mu = random_complex(rng, field)
        out = out + ExpCoefficient.exponential(field, mu, random_fraction(rng))
    return out


def structured_freq_pool(field, dim):
    """Small frequency pool covering the interesting regimes: zero frequency
    (degree reduction), rational, irrational, and imaginary directions."""
    zero = calg(field, 0)
    singles = [zero, calg(field, 1), calg(field, field.gen()),
               calg(field, 0, 1), calg(field, Fraction(-1, 2))]
    pool = []
    for s in singles:
        for pos in range(dim):
            vec = tuple(s if i == pos else zero for i in range(dim))
            pool.append(vec)
    seen = []
    for v in pool:
        if v not in seen:
            seen.append(v)
    return seen


def random_exppoly(rng, field, dim=1, max_freqs=2, max_deg=2, freq_pool=None,
                   wild=False):
    """Random exponential polynomial.

    With ``wild`` the frequencies have fully random field coordinates; the
    default draws from a small structured pool so that exact arithmetic in
    closure computations stays fast.
    """
    f = ExpPolynomial.zero(field, dim)
    if freq_pool is None:
        if wild:
            freq_pool = [tuple(calg(field, 0) for _ in range(dim))]
            for _ in range(max_freqs - 1):
                freq_pool.append(tuple(random_complex(rng, field) for _ in range(dim)))
        else:
            freq_pool = structured_freq_pool(field, dim)
    chosen = rng.sample(freq_pool, min(rng.randint(1, max_freqs), len(freq_pool)))
    for freq in chosen:
        for _ in range(rng.randint(1, 2)):
            alpha = tuple(rng.randint(0, max_deg) for _ in range(dim))
            if sum(alpha) > max_deg:
                continue
            c = random_fraction(rng)
            if c == 0:
                c = Fraction(1)
            f = f + ExpPolynomial.monomial(field, dim, alpha, c, freq=freq)
    if f.is_zero():
        f = ExpPolynomial.monomial(field, dim, (0,) * dim, 1)
    return f


def rng_for(name: str) -> random.Random:
    # crc32 keeps the stream stable across interpreter runs (str hash is not)
    return random.Random(zlib.crc32(name.encode()))
