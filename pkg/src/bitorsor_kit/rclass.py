"""Closure algebra over declared elementary classes: a registry of
(group, class) pairs validated for trivials, inverses, and morphism images,
plus shortest wedge factorizations inside the closure it generates."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from functools import lru_cache

from . import bitorsors as bt
from . import equivariant as eq
from .bitorsors import SignatureMismatch
from .equivariant import PiBitorsor, PiMorphism, ThetaBitorsor
from .errors import DomainError
from .groups import FiniteGroup, GroupHom, compose_homs, enumerate_homs


class RClassError(DomainError):
    pass


class InvalidRegistry(RClassError):
    pass


class UnknownGroup(RClassError):
    pass


class InvalidFactorization(RClassError):
    pass


@dataclass(frozen=True)
class ElementaryClassRegistry:
    """An explicit finite stand-in for the class of elementary carriers:
    members are (universe index, class index) pairs into the h1 enumeration
    of each declared group."""

    pi: FiniteGroup
    universe: tuple[FiniteGroup, ...]
    members: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        if len(self.universe) == 0:
            raise InvalidRegistry("the group universe is empty")
        if len(set(self.universe)) != len(self.universe):
            raise InvalidRegistry("the group universe repeats a group")
        for ui, ci in self.members:
            if not 0 <= ui < len(self.universe):
                raise InvalidRegistry(f"group index {ui} outside the universe")
            if not 0 <= ci < len(eq.h1(self.pi, self.universe[ui])):
                raise InvalidRegistry(
                    f"class index {ci} outside h1 of {self.universe[ui].label}"
                )

    def group_index(self, g: FiniteGroup) -> int:
        for ui, known in enumerate(self.universe):
            if known == g:
                return ui
        raise UnknownGroup(f"{g.label} is not in the declared universe")

    def contains(self, t: ThetaBitorsor) -> bool:
        ui = self.group_index(t.bitorsor.right_group)
        ci = eq.classify(t, eq.h1(self.pi, self.universe[ui]))
        return (ui, ci) in self.members


@dataclass(frozen=True)
class RegistryCheck:
    ok: bool
    violation: str

    def __bool__(self) -> bool:
        return self.ok


def _has_central_image(theta: GroupHom) -> bool:
    g = theta.dst
    return all(
        g.mul[v][w] == g.mul[w][v] for v in set(theta.map) for w in g.elements
    )


@lru_cache(maxsize=None)
def _class_index_by_map(pi: FiniteGroup, g: FiniteGroup) -> dict[tuple[int, ...], int]:
    """Every homomorphism's map resolved to its conjugacy class index."""
    table: dict[tuple[int, ...], int] = {}
    for i, rep in enumerate(eq.h1_representatives(pi, g)):
        for c in g.elements:
            conj = tuple(g.mul[g.mul[c][v]][g.inv[c]] for v in rep.map)
            table[conj] = i
    return table


def class_index_of_hom(theta: GroupHom) -> int:
    return _class_index_by_map(theta.src, theta.dst)[theta.map]


@lru_cache(maxsize=None)
def wedge_class_index(pi: FiniteGroup, g: FiniteGroup, a: int, b: int) -> int:
    """Class of the glued pair of two class representatives over g; the
    second factor must have a central image so the gluing is equivariant."""
    classes = eq.h1(pi, g)
    if not _has_central_image(classes[b].theta):
        raise bt.NotComposable(
            "second factor twists its left structure away from the constant one"
        )
    w = eq.compose_pi(eq.from_theta(classes[a]), eq.from_theta(classes[b]))
    return eq.classify(eq.to_theta(w), classes)


def validate_registry(
    r: ElementaryClassRegistry, universe: Sequence[FiniteGroup] | None = None
) -> RegistryCheck:
    """Containment of trivials, stability under inverse, and stability under
    every homomorphism image, each reported at the first violation."""
    groups = tuple(universe) if universe is not None else r.universe
    indexed = []
    for g in groups:
        indexed.append((r.group_index(g), g))
    for ui, g in indexed:
        if (ui, eq.trivial_class_index(r.pi, g)) not in r.members:
            return RegistryCheck(False, f"missing the trivial class over {g.label}")
    for ui, g in indexed:
        classes = eq.h1(r.pi, g)
        for mi, ci in sorted(r.members):
            if mi != ui:
                continue
            inv = eq.inverse_pi(eq.from_theta(classes[ci]))
            if not inv.right_constant:
                continue
            inv_ci = eq.classify(eq.to_theta(inv), classes)
            if (ui, inv_ci) not in r.members:
                return RegistryCheck(
                    False,
                    f"inverse of class {ci} over {g.label} lands outside (class {inv_ci})",
                )
    for ui, g in indexed:
        for mi, ci in sorted(r.members):
            if mi != ui:
                continue
            theta = eq.h1_representatives(r.pi, g)[ci]
            for uj, g2 in indexed:
                for phi in enumerate_homs(g, g2):
                    img_ci = class_index_of_hom(compose_homs(phi, theta))
                    if (uj, img_ci) not in r.members:
                        return RegistryCheck(
                            False,
                            f"image of class {ci} over {g.label} under a hom into "
                            f"{g2.label} lands outside (class {img_ci})",
                        )
    return RegistryCheck(True, "")


@dataclass(frozen=True)
class Factorization:
    """A target rewritten as a wedge of composable factors, with the
    connecting isomorphism revalidated on construction."""

    factors: tuple[PiBitorsor, ...]
    target: PiBitorsor
    iso: PiMorphism

    def __post_init__(self) -> None:
        if not self.factors:
            raise InvalidFactorization("a factorization needs at least one factor")
        wedge = self.factors[0]
        for nxt in self.factors[1:]:
            wedge = eq.compose_pi(wedge, nxt)
        if self.iso.src != wedge or self.iso.dst != self.target:
            raise InvalidFactorization(
                "the isomorphism does not connect the wedge to the target"
            )
        if not self.iso.is_isomorphism():
            raise InvalidFactorization("the connecting morphism is not bijective")

    @property
    def length(self) -> int:
        return len(self.factors)


def in_closure(
    t: ThetaBitorsor, r: ElementaryClassRegistry, max_n: int
) -> Factorization | None:
    """Shortest chain of registry members over t's group whose wedge is
    isomorphic to t, breadth-first with lexicographic tie-breaking, or None
    when no chain of length <= max_n exists."""
    if max_n < 1:
        raise RClassError("the search bound must be at least 1")
    if t.pi != r.pi:
        raise SignatureMismatch("carrier symmetry group differs from the registry's")
    ui = r.group_index(t.bitorsor.right_group)
    g = r.universe[ui]
    classes = eq.h1(r.pi, g)
    target_ci = eq.classify(t, classes)
    members_here = sorted(ci for mi, ci in r.members if mi == ui)
    appendable = [ci for ci in members_here if _has_central_image(classes[ci].theta)]
    paths: dict[int, tuple[int, ...]] = {}
    frontier: list[int] = []
    for ci in members_here:
        if ci not in paths:
            paths[ci] = (ci,)
            frontier.append(ci)
    depth = 1
    while target_ci not in paths and frontier and depth < max_n:
        nxt: list[int] = []
        for state in frontier:
            for ci in appendable:
                ns = wedge_class_index(r.pi, g, state, ci)
                if ns not in paths:
                    paths[ns] = paths[state] + (ci,)
                    nxt.append(ns)
        frontier = nxt
        depth += 1
    if target_ci not in paths:
        return None
    chain = paths[target_ci]
    for ci in chain:
        if (ui, ci) not in r.members:
            raise RClassError("search escaped the registry")
    factors = tuple(eq.from_theta(classes[ci]) for ci in chain)
    wedge = factors[0]
    for nxt_factor in factors[1:]:
        wedge = eq.compose_pi(wedge, nxt_factor)
    target = eq.from_theta(t)
    iso = eq.pi_isomorphism(wedge, target, fix_right=True)
    if iso is None:
        raise RClassError("classified chain failed to reproduce the target")
    return Factorization(factors, target, iso)


def fixed_point_closure(r: ElementaryClassRegistry) -> frozenset[tuple[int, int]]:
    """The least superset of the registry closed under gluing, computed by
    saturation; an independent cross-check for in_closure."""
    closed = set(r.members)
    changed = True
    while changed:
        changed = False
        for ui, a in sorted(closed):
            g = r.universe[ui]
            for uj, b in sorted(closed):
                if uj != ui:
                    continue
                if not _has_central_image(eq.h1(r.pi, g)[b].theta):
                    continue
                pair = (ui, wedge_class_index(r.pi, g, a, b))
                if pair not in closed:
                    closed.add(pair)
                    changed = True
    return frozenset(closed)


def requiv_related(
    x: ThetaBitorsor,
    y: ThetaBitorsor,
    r: ElementaryClassRegistry,
    max_n: int,
) -> tuple[Factorization, PiMorphism] | None:
    """Witness that y differs from x by a closure element: factor
    z0 = y (glued with) x-inverse inside the closure and return it with the
    isomorphism from z0 (glued with) x back to y."""
    if x.bitorsor.right_group != y.bitorsor.right_group:
        raise SignatureMismatch("the two carriers have different structure groups")
    if x.pi != y.pi or x.pi != r.pi:
        raise SignatureMismatch("carrier symmetry group differs from the registry's")
    x_pi = eq.from_theta(x)
    y_pi = eq.from_theta(y)
    z0 = eq.compose_pi(y_pi, eq.inverse_pi(x_pi))
    z0_theta = eq.to_theta(z0)
    fac = in_closure(z0_theta, r, max_n)
    if fac is None:
        return None
    glued = eq.compose_pi(fac.target, x_pi)
    iso = eq.pi_isomorphism(glued, y_pi, fix_right=True)
    if iso is None:
        raise RClassError("closure witness failed to recombine with the base carrier")
    return fac, iso
