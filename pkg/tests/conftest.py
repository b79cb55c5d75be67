"""Shared fixtures: the small-group universe and brute-force oracles."""

from __future__ import annotations

import itertools
import random

import pytest

from bitorsor_kit import groups as G


@pytest.fixture(scope="session")
def z2():
    return G.cyclic(2)


@pytest.fixture(scope="session")
def z3():
    return G.cyclic(3)


@pytest.fixture(scope="session")
def z4():
    return G.cyclic(4)


@pytest.fixture(scope="session")
def z6():
    return G.cyclic(6)


@pytest.fixture(scope="session")
def s3():
    return G.symmetric(3)


@pytest.fixture(scope="session")
def d4():
    return G.dihedral(4)


@pytest.fixture(scope="session")
def group_universe(z2, z3, z4, z6, s3, d4):
    return (z2, z3, z4, z6, s3, d4)


def brute_force_hom_maps(src: G.FiniteGroup, dst: G.FiniteGroup) -> set[tuple[int, ...]]:
    """Scan the full function space; only usable for tiny signatures."""
    assert dst.order ** src.order <= 300_000, "oracle restricted to tiny cases"
    out = set()
    for m in itertools.product(range(dst.order), repeat=src.order):
        if m[src.identity] != dst.identity:
            continue
        if all(
            m[src.mul[a][b]] == dst.mul[m[a]][m[b]]
            for a in src.elements
            for b in src.elements
        ):
            out.add(m)
    return out


@pytest.fixture
def hom_oracle():
    return brute_force_hom_maps


@pytest.fixture
def rng():
    return random.Random(20260814)


def scrambled_trivial(
    g: G.FiniteGroup, rnd: random.Random, twist: G.GroupHom | None = None
):
    """A carrier with both structure groups equal to g: points are a shuffled
    copy of the group, optionally with the left action twisted by an
    automorphism."""
    from bitorsor_kit import bitorsors as B

    sigma = list(g.elements)
    rnd.shuffle(sigma)
    inv_sigma = [0] * g.order
    for i, v in enumerate(sigma):
        inv_sigma[v] = i
    alpha = twist.map if twist is not None else tuple(g.elements)
    left = tuple(
        tuple(inv_sigma[g.mul[alpha[gp]][sigma[x]]] for x in g.elements)
        for gp in g.elements
    )
    right = tuple(
        tuple(inv_sigma[g.mul[sigma[x]][h]] for h in g.elements) for x in g.elements
    )
    return B.Bitorsor(g, g, left, right)


@pytest.fixture
def make_carrier():
    return scrambled_trivial
