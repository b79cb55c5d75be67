"""Finite tame-quotient model: a cyclic inertia part twisted by a power
Frobenius, the split extension it generates, and a per-class survey of
decompositions over a chosen structure group."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from . import devissage as dv
from . import equivariant as eq
from .devissage import SplitExtension
from .errors import DomainError
from .groups import FiniteGroup, cyclic_power_action, kernel, semidirect_product


class LocalModelError(DomainError):
    pass


class BadParams(LocalModelError):
    pass


@dataclass(frozen=True)
class TameParams:
    """q: residue size analogue; n: inertia order, coprime to q; m: degree
    of the unramified part, with q**m = 1 mod n so the twist closes up."""

    q: int
    n: int
    m: int

    def __post_init__(self) -> None:
        if self.q < 2:
            raise BadParams(f"q = {self.q} must be at least 2")
        if self.n < 1 or self.m < 1:
            raise BadParams(f"n = {self.n} and m = {self.m} must be at least 1")
        g = math.gcd(self.n, self.q)
        if g != 1:
            raise BadParams(f"gcd(n, q) = gcd({self.n}, {self.q}) = {g}, not 1")
        if pow(self.q, self.m, self.n) != 1 % self.n:
            raise BadParams(
                f"q**m = {self.q}**{self.m} is not 1 mod n = {self.n}"
            )


def build_tame_quotient(p: TameParams) -> SplitExtension:
    """The split extension with inertia Z/n, quotient Z/m, and the
    generator of the quotient conjugating inertia by q-th powers."""
    n_grp, m_grp, acts = cyclic_power_action(p.n, p.m, p.q)
    sd = semidirect_product(n_grp, m_grp, acts)
    return SplitExtension(
        sd.group, kernel(sd.projection), m_grp, sd.projection, sd.section
    )


@dataclass(frozen=True)
class SurveyRow:
    class_index: int
    theta: tuple[int, ...]
    image_size: int
    connected: bool
    gamma_in_kernel: bool
    z_is_type_pi: bool
    witness_order: int
    verified: bool
    diagnosis: str


@dataclass(frozen=True)
class SurveyReport:
    params: TameParams
    group_label: str
    group_order: int
    pi_order: int
    rows: tuple[SurveyRow, ...]
    warnings: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "params": {"q": self.params.q, "n": self.params.n, "m": self.params.m},
            "group": {"label": self.group_label, "order": self.group_order},
            "pi_order": self.pi_order,
            "rows": [
                {
                    "class_index": r.class_index,
                    "theta": list(r.theta),
                    "image_size": r.image_size,
                    "connected": r.connected,
                    "gamma_in_kernel": r.gamma_in_kernel,
                    "z_is_type_pi": r.z_is_type_pi,
                    "witness_order": r.witness_order,
                    "verified": r.verified,
                    "diagnosis": r.diagnosis,
                }
                for r in self.rows
            ],
            "warnings": list(self.warnings),
        }


def parallel_map(fn, items, workers: int = 1) -> list:
    """Apply fn to each item, merging results in input order regardless of
    the worker count."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _survey_class(
    p: TameParams, e: SplitExtension, g: FiniteGroup, index: int
) -> tuple[SurveyRow, dv.Decomposition]:
    rep = eq.h1(e.pi_big, g)[index]
    d = dv.decompose(rep, e)
    res = dv.verify_decomposition(rep, d, e)
    witness_group = d.certificate.w_witness.bitorsor.left_group
    if not witness_group.is_cyclic():
        raise LocalModelError("a survey witness group failed to be cyclic")
    if p.n % witness_group.order != 0:
        raise LocalModelError("a survey witness order does not divide n")
    gamma_in_kernel = all(
        rep.theta.map[c] == g.identity for c in e.gamma.members
    )
    if p.m == 1 and not dv.is_type_pi(d.z, e):
        raise LocalModelError("degenerate m=1 produced a moving z factor")
    if p.n == 1 and not dv.is_type_pi(eq.from_theta(rep), e):
        raise LocalModelError("degenerate n=1 produced a moving class")
    row = SurveyRow(
        class_index=index,
        theta=rep.theta.map,
        image_size=len(set(rep.theta.map)),
        connected=eq.is_connected(rep),
        gamma_in_kernel=gamma_in_kernel,
        z_is_type_pi=dv.is_type_pi(d.z, e),
        witness_order=witness_group.order,
        verified=bool(res),
        diagnosis=res.diagnosis,
    )
    return row, d


def survey(p: TameParams, g: FiniteGroup, workers: int = 1) -> SurveyReport:
    """Decompose and verify every class over g, sorted by (image size,
    theta) for stable output."""
    e = build_tame_quotient(p)
    count = len(eq.h1(e.pi_big, g))
    results = parallel_map(
        lambda i: _survey_class(p, e, g, i), range(count), workers
    )
    rows = tuple(
        sorted((row for row, _ in results), key=lambda r: (r.image_size, r.theta))
    )
    warnings = []
    shared = math.gcd(g.order, p.q)
    if shared > 1:
        warnings.append(
            f"group order {g.order} shares the factor {shared} with q = {p.q}; "
            "the model decomposes anyway"
        )
    return SurveyReport(
        params=p,
        group_label=g.label,
        group_order=g.order,
        pi_order=e.pi_big.order,
        rows=rows,
        warnings=tuple(warnings),
    )


def survey_decompositions(
    p: TameParams, g: FiniteGroup, workers: int = 1
) -> list[tuple[SurveyRow, dv.Decomposition]]:
    """The survey rows paired with the decompositions behind them, in h1
    class order."""
    e = build_tame_quotient(p)
    count = len(eq.h1(e.pi_big, g))
    return parallel_map(lambda i: _survey_class(p, e, g, i), range(count), workers)
