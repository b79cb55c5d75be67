"""Finite groups on index sets 0..n-1, stored as dense multiplication tables.

Every construction path validates the full group axioms, so any FiniteGroup
in circulation is sound.  Homomorphisms, subgroups, quotients and sections
are validated just as eagerly; downstream modules rely on that.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import DomainError


class GroupError(DomainError):
    """Base for failures in the group layer."""


class MalformedTable(GroupError):
    pass


class NoIdentity(GroupError):
    pass


class NoInverse(GroupError):
    pass


class NotAssociative(GroupError):
    pass


class GeneratorsDoNotGenerate(GroupError):
    pass


class NotAHomomorphism(GroupError):
    pass


class NotASubgroup(GroupError):
    pass


class NotNormal(GroupError):
    pass


class NotAnAction(GroupError):
    pass


class NotSurjective(GroupError):
    pass


class MixedSignatures(GroupError):
    pass


def closure(mul: Sequence[Sequence[int]], seed: Iterable[int], identity: int) -> set[int]:
    """Subgroup generated by `seed` (finite, so products alone suffice)."""
    seen = {identity}
    gens = [g for g in seed]
    frontier = [identity]
    for g in gens:
        if g not in seen:
            seen.add(g)
            frontier.append(g)
    while frontier:
        a = frontier.pop()
        row = mul[a]
        for g in gens:
            b = row[g]
            if b not in seen:
                seen.add(b)
                frontier.append(b)
    return seen


def generating_set(mul: Sequence[Sequence[int]], identity: int) -> tuple[int, ...]:
    """Greedy generating set, deterministic in element order."""
    n = len(mul)
    gens: list[int] = []
    have = {identity}
    for g in range(n):
        if g not in have:
            gens.append(g)
            have = closure(mul, gens, identity)
            if len(have) == n:
                break
    return tuple(gens) if gens else (identity,)


@dataclass(frozen=True)
class FiniteGroup:
    """A finite group on indices 0..order-1 given by its full product table.

    The identity is discovered by the validator, not assumed to sit at 0.
    """

    mul: tuple[tuple[int, ...], ...]
    identity: int
    inv: tuple[int, ...]
    generators: tuple[int, ...]
    label: str = field(compare=False)

    def __post_init__(self) -> None:
        n = len(self.mul)
        if n == 0:
            raise MalformedTable("empty multiplication table")
        for i, row in enumerate(self.mul):
            if len(row) != n:
                raise MalformedTable(f"row {i} has length {len(row)}, expected {n}")
            for j, v in enumerate(row):
                if not (0 <= v < n):
                    raise MalformedTable(f"entry ({i},{j}) = {v} out of range")
        e = self.identity
        if not (0 <= e < n):
            raise NoIdentity(f"identity index {e} out of range")
        for a in range(n):
            if self.mul[e][a] != a or self.mul[a][e] != a:
                raise NoIdentity(f"declared identity {e} is not neutral at {a}")
        if len(self.inv) != n:
            raise NoInverse("inverse table has wrong length")
        for a in range(n):
            b = self.inv[a]
            if not (0 <= b < n) or self.mul[a][b] != e or self.mul[b][a] != e:
                raise NoInverse(f"element {a} has no two-sided inverse (table says {b})")
        mul = self.mul
        for a in range(n):
            ra = mul[a]
            for b in range(n):
                ab = ra[b]
                rb = mul[b]
                rab = mul[ab]
                for c in range(n):
                    if rab[c] != ra[rb[c]]:
                        raise NotAssociative(f"first violating triple (a,b,c)=({a},{b},{c})")
        if not self.generators:
            raise GeneratorsDoNotGenerate("empty generator list")
        for g in self.generators:
            if not (0 <= g < n):
                raise GeneratorsDoNotGenerate(f"generator {g} out of range")
        got = closure(mul, self.generators, e)
        if len(got) != n:
            missing = min(set(range(n)) - got)
            raise GeneratorsDoNotGenerate(f"element {missing} not generated")

    @property
    def order(self) -> int:
        return len(self.mul)

    @property
    def elements(self) -> range:
        return range(self.order)

    def op(self, a: int, b: int) -> int:
        return self.mul[a][b]

    def inverse(self, a: int) -> int:
        return self.inv[a]

    def conjugate(self, g: int, x: int) -> int:
        """g x g^-1."""
        return self.mul[self.mul[g][x]][self.inv[g]]

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.mul[x][a]
            k += 1
        return k

    def is_abelian(self) -> bool:
        return all(r[j] == self.mul[j][i] for i, r in enumerate(self.mul) for j in range(i))

    def is_cyclic(self) -> bool:
        return any(self.element_order(a) == self.order for a in self.elements)

    def __repr__(self) -> str:
        return f"FiniteGroup({self.label!r}, order={self.order})"


def make_group(mul_table: Sequence[Sequence[int]], generators: Iterable[int], label: str = "G") -> FiniteGroup:
    """Validate a raw table and package it, discovering identity and inverses."""
    mul = tuple(tuple(int(v) for v in row) for row in mul_table)
    n = len(mul)
    if n == 0:
        raise MalformedTable("empty multiplication table")
    for i, row in enumerate(mul):
        if len(row) != n:
            raise MalformedTable(f"row {i} has length {len(row)}, expected {n}")
        for j, v in enumerate(row):
            if not (0 <= v < n):
                raise MalformedTable(f"entry ({i},{j}) = {v} out of range")
    identity = None
    for e in range(n):
        if all(mul[e][a] == a and mul[a][e] == a for a in range(n)):
            identity = e
            break
    if identity is None:
        raise NoIdentity("no two-sided neutral element")
    inv = []
    for a in range(n):
        b = next((b for b in range(n) if mul[a][b] == identity and mul[b][a] == identity), None)
        if b is None:
            raise NoInverse(f"element {a} has no two-sided inverse")
        inv.append(b)
    return FiniteGroup(mul, identity, tuple(inv), tuple(int(g) for g in generators), label)


@dataclass(frozen=True)
class GroupHom:
    """A homomorphism given pointwise; validated on construction."""

    src: FiniteGroup
    dst: FiniteGroup
    map: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.map) != self.src.order:
            raise NotAHomomorphism("map length differs from source order")
        for v in self.map:
            if not (0 <= v < self.dst.order):
                raise NotAHomomorphism(f"image {v} out of range")
        if self.map[self.src.identity] != self.dst.identity:
            raise NotAHomomorphism("identity not preserved")
        smul, dmul, m = self.src.mul, self.dst.mul, self.map
        for a in range(self.src.order):
            ma = m[a]
            row = smul[a]
            drow = dmul[ma]
            for b in range(self.src.order):
                if m[row[b]] != drow[m[b]]:
                    raise NotAHomomorphism(f"first violating pair (a,b)=({a},{b})")

    def __call__(self, a: int) -> int:
        return self.map[a]

    def is_injective(self) -> bool:
        return len(set(self.map)) == self.src.order

    def is_surjective(self) -> bool:
        return len(set(self.map)) == self.dst.order

    def is_bijective(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def __repr__(self) -> str:
        return f"GroupHom({self.src.label} -> {self.dst.label}, {self.map})"


def identity_hom(g: FiniteGroup) -> GroupHom:
    return GroupHom(g, g, tuple(range(g.order)))


def compose_homs(outer: GroupHom, inner: GroupHom) -> GroupHom:
    """outer after inner."""
    if inner.dst != outer.src:
        raise MixedSignatures("inner codomain differs from outer domain")
    return GroupHom(inner.src, outer.dst, tuple(outer.map[v] for v in inner.map))


def invert_hom(h: GroupHom) -> GroupHom:
    if not h.is_bijective():
        raise NotAHomomorphism("only bijective homomorphisms invert")
    back = [0] * h.dst.order
    for a, v in enumerate(h.map):
        back[v] = a
    return GroupHom(h.dst, h.src, tuple(back))


@dataclass(frozen=True)
class Subgroup:
    """A subgroup as a sorted member list of the parent's indices."""

    parent: FiniteGroup
    members: tuple[int, ...]
    is_normal: bool

    def __post_init__(self) -> None:
        if not self.members:
            raise NotASubgroup("empty member list")
        if list(self.members) != sorted(set(self.members)):
            raise NotASubgroup("members must be sorted and duplicate-free")
        mul = self.parent.mul
        inside = set(self.members)
        if self.parent.identity not in inside:
            raise NotASubgroup("identity missing")
        for a in self.members:
            if not (0 <= a < self.parent.order):
                raise NotASubgroup(f"member {a} out of range")
            if self.parent.inv[a] not in inside:
                raise NotASubgroup(f"inverse of {a} missing")
            for b in self.members:
                if mul[a][b] not in inside:
                    raise NotASubgroup(f"product of ({a},{b}) escapes the subgroup")
        normal = all(
            self.parent.conjugate(g, h) in inside for g in self.parent.elements for h in self.members
        )
        if self.is_normal != normal:
            raise NotASubgroup("is_normal flag contradicts the table")

    @property
    def order(self) -> int:
        return len(self.members)


def subgroup(parent: FiniteGroup, members: Iterable[int]) -> Subgroup:
    ms = tuple(sorted(set(int(m) for m in members)))
    inside = set(ms)
    normal = all(parent.conjugate(g, h) in inside for g in parent.elements for h in ms)
    return Subgroup(parent, ms, normal)


def trivial_subgroup(parent: FiniteGroup) -> Subgroup:
    return subgroup(parent, (parent.identity,))


def full_subgroup(parent: FiniteGroup) -> Subgroup:
    return subgroup(parent, parent.elements)


def kernel(f: GroupHom) -> Subgroup:
    e = f.dst.identity
    return subgroup(f.src, (a for a in f.src.elements if f.map[a] == e))


def image(f: GroupHom) -> Subgroup:
    return subgroup(f.dst, set(f.map))


def quotient(g: FiniteGroup, n: Subgroup) -> tuple[FiniteGroup, GroupHom]:
    """Quotient by a normal subgroup; cosets indexed by their minimal element."""
    if n.parent != g:
        raise MixedSignatures("subgroup belongs to a different group")
    if not n.is_normal:
        raise NotNormal(f"subgroup {n.members} is not normal in {g.label}")
    cosets: list[tuple[int, ...]] = []
    idx_of: dict[int, int] = {}
    for x in g.elements:
        if x in idx_of:
            continue
        cs = tuple(sorted(g.mul[x][h] for h in n.members))
        for y in cs:
            idx_of[y] = len(cosets)
        cosets.append(cs)
    k = len(cosets)
    table = tuple(
        tuple(idx_of[g.mul[cosets[i][0]][cosets[j][0]]] for j in range(k)) for i in range(k)
    )
    gens: list[int] = []
    for a in g.generators:
        v = idx_of[a]
        if v not in gens:
            gens.append(v)
    if not gens:
        gens = [idx_of[g.identity]]
    label = f"{g.label}/[{','.join(map(str, n.members))}]"
    q = make_group(table, gens, label)
    return q, GroupHom(g, q, tuple(idx_of[x] for x in g.elements))


def subgroup_as_group(parent: FiniteGroup, members: Iterable[int], label: str | None = None) -> tuple[FiniteGroup, GroupHom]:
    """Materialize a subgroup as a standalone group plus its inclusion."""
    ms = tuple(sorted(set(int(m) for m in members)))
    pos = {m: i for i, m in enumerate(ms)}
    for a in ms:
        for b in ms:
            if parent.mul[a][b] not in pos:
                raise NotASubgroup(f"product of ({a},{b}) escapes the subgroup")
    table = tuple(tuple(pos[parent.mul[a][b]] for b in ms) for a in ms)
    ident = pos[parent.identity] if parent.identity in pos else None
    if ident is None:
        raise NotASubgroup("identity missing")
    gens = generating_set(table, ident)
    name = label or f"{parent.label}<{','.join(map(str, ms))}>"
    sub = make_group(table, gens, name)
    return sub, GroupHom(sub, parent, ms)


@lru_cache(maxsize=None)
def all_subgroups(g: FiniteGroup) -> tuple[Subgroup, ...]:
    """Every subgroup, sorted by (order, member list)."""
    found: set[frozenset[int]] = {frozenset({g.identity})}
    frontier = [frozenset({g.identity})]
    while frontier:
        base = frontier.pop()
        for x in g.elements:
            if x in base:
                continue
            grown = frozenset(closure(g.mul, list(base) + [x], g.identity))
            if grown not in found:
                found.add(grown)
                frontier.append(grown)
    ordered = sorted((tuple(sorted(s)) for s in found), key=lambda t: (len(t), t))
    return tuple(subgroup(g, ms) for ms in ordered)


def _extend_by_generators(
    src: FiniteGroup, dst: FiniteGroup, gens: Sequence[int], images: Sequence[int]
) -> tuple[int, ...] | None:
    """Extend generator images along the Cayley graph; None if inconsistent."""
    n = src.order
    mapping: list[int | None] = [None] * n
    mapping[src.identity] = dst.identity
    frontier = [src.identity]
    smul, dmul = src.mul, dst.mul
    while frontier:
        a = frontier.pop()
        fa = mapping[a]
        for g, img in zip(gens, images):
            b = smul[a][g]
            v = dmul[fa][img]
            if mapping[b] is None:
                mapping[b] = v
                frontier.append(b)
            elif mapping[b] != v:
                return None
    return tuple(mapping)  # complete: generators generate src


def enumerate_homs(
    src: FiniteGroup,
    dst: FiniteGroup,
    candidates: Sequence[Sequence[int]] | None = None,
) -> list[GroupHom]:
    """All homomorphisms, ordered lexicographically by generator images.

    `candidates` optionally restricts the image pool per source generator.
    """
    gens = src.generators
    pools: list[Sequence[int]]
    if candidates is None:
        pools = [range(dst.order) for _ in gens]
    else:
        if len(candidates) != len(gens):
            raise MixedSignatures("candidate pools must align with source generators")
        pools = [tuple(c) for c in candidates]
    out: list[GroupHom] = []
    for images in itertools.product(*pools):
        m = _extend_by_generators(src, dst, gens, images)
        if m is not None:
            out.append(GroupHom(src, dst, m))
    return out


def isomorphisms_between(a: FiniteGroup, b: FiniteGroup) -> list[GroupHom]:
    if a.order != b.order:
        return []
    return [h for h in enumerate_homs(a, b) if h.is_bijective()]


def sections_of(q: GroupHom) -> list[GroupHom]:
    """All homomorphic sections s with q(s(a)) = a on q's codomain."""
    if not q.is_surjective():
        raise NotSurjective(f"{q.src.label} -> {q.dst.label} is not onto")
    fibers = [
        tuple(x for x in q.src.elements if q.map[x] == g) for g in q.dst.generators
    ]
    homs = enumerate_homs(q.dst, q.src, candidates=fibers)
    return [s for s in homs if all(q.map[s.map[a]] == a for a in q.dst.elements)]


def conjugate_hom(g: int, f: GroupHom) -> GroupHom:
    """x |-> g f(x) g^-1 with g in the codomain."""
    d = f.dst
    return GroupHom(f.src, d, tuple(d.mul[d.mul[g][v]][d.inv[g]] for v in f.map))


def conjugacy_classes_of_homs(homs: Sequence[GroupHom]) -> list[list[GroupHom]]:
    """Partition under codomain conjugation; classes and members sorted by map."""
    if not homs:
        return []
    src, dst = homs[0].src, homs[0].dst
    for h in homs:
        if h.src != src or h.dst != dst:
            raise MixedSignatures("homomorphisms do not share source and target")
    by_map = {h.map: h for h in homs}
    ordered = sorted(by_map)
    seen: set[tuple[int, ...]] = set()
    classes: list[list[GroupHom]] = []
    for m in ordered:
        if m in seen:
            continue
        orbit = set()
        for g in dst.elements:
            orbit.add(conjugate_hom(g, by_map[m]).map)
        members = sorted(t for t in orbit if t in by_map)
        seen.update(members)
        classes.append([by_map[t] for t in members])
    return classes


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise MalformedTable("cyclic group needs order >= 1")
    mul = tuple(tuple((i + j) % n for j in range(n)) for i in range(n))
    return make_group(mul, (1 % n,), f"C{n}")


def symmetric(n: int) -> FiniteGroup:
    """Permutations of 0..n-1 in lexicographic order; (s.t)(i) = s(t(i))."""
    if not (1 <= n <= 6):
        raise MalformedTable("symmetric group supported for 1 <= n <= 6")
    perms = sorted(itertools.permutations(range(n)))
    pos = {p: i for i, p in enumerate(perms)}
    mul = tuple(
        tuple(pos[tuple(p[q[k]] for k in range(n))] for q in perms) for p in perms
    )
    if n == 1:
        gens: tuple[int, ...] = (0,)
    else:
        swap = tuple([1, 0] + list(range(2, n)))
        cycle = tuple(list(range(1, n)) + [0])
        gens = tuple(dict.fromkeys((pos[swap], pos[cycle])))
    return make_group(mul, gens, f"S{n}")


@dataclass(frozen=True)
class SemidirectProduct:
    group: FiniteGroup
    inclusion: GroupHom  # N -> group
    projection: GroupHom  # group -> Q
    section: GroupHom  # Q -> group


def semidirect_product(
    n_grp: FiniteGroup,
    q_grp: FiniteGroup,
    act: Sequence[GroupHom],
    label: str | None = None,
) -> SemidirectProduct:
    """Build N x| Q with law (n1,q1)(n2,q2) = (n1 . act(q1)(n2), q1 q2)."""
    if len(act) != q_grp.order:
        raise NotAnAction("one automorphism per element of the acting group required")
    for q, a in enumerate(act):
        if a.src != n_grp or a.dst != n_grp or not a.is_bijective():
            raise NotAnAction(f"entry {q} is not an automorphism of {n_grp.label}")
    if act[q_grp.identity].map != tuple(range(n_grp.order)):
        raise NotAnAction("identity of the acting group must act trivially")
    for q1 in q_grp.elements:
        for q2 in q_grp.elements:
            want = act[q_grp.mul[q1][q2]].map
            got = tuple(act[q1].map[act[q2].map[x]] for x in n_grp.elements)
            if want != got:
                raise NotAnAction(f"action fails to be a homomorphism at ({q1},{q2})")
    qn = q_grp.order
    enc = lambda n, q: n * qn + q  # noqa: E731

    def law(i: int, j: int) -> int:
        n1, q1 = divmod(i, qn)
        n2, q2 = divmod(j, qn)
        return enc(n_grp.mul[n1][act[q1].map[n2]], q_grp.mul[q1][q2])

    size = n_grp.order * qn
    table = tuple(tuple(law(i, j) for j in range(size)) for i in range(size))
    enc_id = enc(n_grp.identity, q_grp.identity)
    gens = list(dict.fromkeys(
        g for g in (
            [enc(g, q_grp.identity) for g in n_grp.generators]
            + [enc(n_grp.identity, g) for g in q_grp.generators]
        )
        if g != enc_id
    )) or [enc_id]
    grp = make_group(table, gens, label or f"{n_grp.label}:{q_grp.label}")
    inclusion = GroupHom(n_grp, grp, tuple(enc(n, q_grp.identity) for n in n_grp.elements))
    projection = GroupHom(grp, q_grp, tuple(i % qn for i in range(size)))
    section = GroupHom(q_grp, grp, tuple(enc(n_grp.identity, q) for q in q_grp.elements))
    return SemidirectProduct(grp, inclusion, projection, section)


def direct_product(a: FiniteGroup, b: FiniteGroup) -> SemidirectProduct:
    acts = [identity_hom(a)] * b.order
    return semidirect_product(a, b, acts, f"{a.label}x{b.label}")


def cyclic_power_action(n: int, m: int, k: int) -> tuple[FiniteGroup, FiniteGroup, list[GroupHom]]:
    """C_m acting on C_n, the j-th power of the generator sending t to k^j t."""
    n_grp, q_grp = cyclic(n), cyclic(m)
    acts = []
    for j in range(m):
        mult = pow(k, j, n)
        try:
            acts.append(GroupHom(n_grp, n_grp, tuple((mult * t) % n for t in range(n))))
        except NotAHomomorphism as exc:  # pragma: no cover - re-tagged below
            raise NotAnAction(str(exc)) from exc
    return n_grp, q_grp, acts


def dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order 2n (rotations twisted by inversion)."""
    n_grp, q_grp, acts = cyclic_power_action(n, 2, (n - 1) % n if n > 1 else 0)
    return semidirect_product(n_grp, q_grp, acts, f"D{n}").group
