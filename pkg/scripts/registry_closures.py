"""Enumerate every valid class registry over a small universe and compare
the bounded search closure with the independent fixed-point closure.

Example:
    python3 scripts/registry_closures.py --pi cyclic:4 \
        --universe cyclic:2 cyclic:4 --max-n 8
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys

from bitorsor_kit.equivariant import h1
from bitorsor_kit.errors import DomainError
from bitorsor_kit.formats import resolve_group_spec
from bitorsor_kit.rclass import (
    ElementaryClassRegistry,
    fixed_point_closure,
    in_closure,
    validate_registry,
)

MAX_SLOTS = 14


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--pi", default="cyclic:4")
    parser.add_argument("--universe", nargs="+", default=["cyclic:2", "cyclic:4"])
    parser.add_argument("--max-n", type=int, default=8)
    parser.add_argument("--json", action="store_true")
    args = parser.parse_args(argv)

    try:
        pi = resolve_group_spec(args.pi)
        universe = tuple(resolve_group_spec(spec) for spec in args.universe)
        slots = [
            (ui, ci)
            for ui, g in enumerate(universe)
            for ci in range(len(h1(pi, g)))
        ]
        if len(slots) > MAX_SLOTS:
            print(
                f"error: {len(slots)} class slots exceed the enumeration cap "
                f"of {MAX_SLOTS}",
                file=sys.stderr,
            )
            return 1
        rows = []
        agreements = True
        for take in itertools.product((False, True), repeat=len(slots)):
            members = frozenset(s for s, keep in zip(slots, take) if keep)
            registry = ElementaryClassRegistry(pi, universe, members)
            if not validate_registry(registry):
                continue
            fixed = fixed_point_closure(registry)
            searched = frozenset(
                (ui, ci)
                for ui, g in enumerate(universe)
                for ci in range(len(h1(pi, g)))
                if in_closure(h1(pi, g)[ci], registry, args.max_n) is not None
            )
            rows.append(
                {
                    "members": sorted(members),
                    "closure_size": len(fixed),
                    "agrees": searched == fixed,
                }
            )
            agreements = agreements and searched == fixed
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    if args.json:
        print(json.dumps({"registries": rows, "all_agree": agreements},
                         indent=2, sort_keys=True))
        return 0 if agreements else 1

    print(f"{len(rows)} valid registries over {[g.label for g in universe]}")
    for row in rows:
        members = " ".join(f"({ui},{ci})" for ui, ci in row["members"])
        print(
            f"members [{members}] closure size {row['closure_size']} "
            f"agrees={row['agrees']}"
        )
    print("searched and fixed-point closures agree on every registry"
          if agreements else "closure mismatch found")
    return 0 if agreements else 1


if __name__ == "__main__":
    raise SystemExit(main())
