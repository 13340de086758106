"""Shared contexts; session-scoped because swap-rule bootstrap is not free."""

import random

import pytest

from qgrou.rootdata import build_datum
from qgrou.uqalg import AlgebraCtx


@pytest.fixture(scope="session")
def ctxA1():
    return AlgebraCtx(build_datum("A", 1, (), 0))


@pytest.fixture(scope="session")
def ctxA2():
    return AlgebraCtx(build_datum("A", 2, [(1, 2)], 0))


@pytest.fixture(scope="session")
def ctxB2():
    return AlgebraCtx(build_datum("B", 2, [(1, 2)], 0))


@pytest.fixture(scope="session")
def ctxA1e5():
    return AlgebraCtx(build_datum("A", 1, (), 5))


@pytest.fixture(scope="session")
def ctxA2e5():
    return AlgebraCtx(build_datum("A", 2, [(1, 2)], 5))


@pytest.fixture(scope="session")
def ctxA2e7():
    return AlgebraCtx(build_datum("A", 2, [(1, 2)], 7))


@pytest.fixture(scope="session")
def ctxA2e8():
    return AlgebraCtx(build_datum("A", 2, [(1, 2)], 8))


@pytest.fixture(scope="session")
def ctxB2e5():
    return AlgebraCtx(build_datum("B", 2, [(1, 2)], 5))


def rand_product(ctx, rng, pool, nmax):
    out = ctx.one()
    for _ in range(rng.randint(1, nmax)):
        out = ctx.mul(out, rng.choice(pool)())
    return out


def even_pools(ctx):
    """Generator thunks for the even part: tilde pairs plus K^{+-2 omega_i}."""
    r = ctx.datum.rank
    fs = [lambda i=i: ctx.gen_tF(i) for i in range(r)]
    es = [lambda i=i: ctx.gen_tE(i) for i in range(r)]
    ks = [lambda i=i, s=s: ctx.gen_K(tuple(4 * s if j == i else 0
                                           for j in range(r)))
          for i in range(r) for s in (1, -1)]
    return fs, es, ks


def seeded(seed):
    return random.Random(seed)
