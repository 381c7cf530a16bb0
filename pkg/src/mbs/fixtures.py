"""Fixture builders and the deterministic random surface generator."""

from __future__ import annotations

import random

from .errors import FixtureError
from .model import (
    ANNULUS,
    MOEBIUS,
    BranchLocus,
    MultibranchedSurface,
    Region,
    RegionTopology,
    ValidityMode,
    validate,
)


def theta(n: int, mode: ValidityMode = ValidityMode.STRICT) -> MultibranchedSurface:
    """Two loci of wrapping 1 joined by n parallel annuli (theta-graph times circle).

    Constructed for any n >= 1; strict validity requires n >= 3.
    """
    regions = tuple(
        Region(f"r{i}", ANNULUS, (f"r{i}.a", f"r{i}.b")) for i in range(1, n + 1)
    )
    b1 = BranchLocus("b1", 1, tuple(f"r{i}.a" for i in range(1, n + 1)))
    b2 = BranchLocus("b2", 1, tuple(f"r{i}.b" for i in range(1, n + 1)))
    return MultibranchedSurface(regions, (b1, b2), mode)


def moebius_annulus(mode: ValidityMode = ValidityMode.STRICT) -> MultibranchedSurface:
    """One normal tribranched locus carrying a Moebius band and a closing annulus."""
    m = Region("M", MOEBIUS, ("m",))
    c = Region("C", ANNULUS, ("c1", "c2"))
    b = BranchLocus("b", 1, ("m", "c1", "c2"))
    return MultibranchedSurface((m, c), (b,), mode)


def quasi_pure(mode: ValidityMode = ValidityMode.STRICT) -> MultibranchedSurface:
    """A normal locus and a pure locus of wrapping 3 joined by an annulus,
    plus a closing annulus on the normal locus."""
    a = Region("A", ANNULUS, ("a", "a2"))
    c = Region("C", ANNULUS, ("c1", "c2"))
    bn = BranchLocus("bn", 1, ("a", "c1", "c2"))
    bp = BranchLocus("bp", 3, ("a2",))
    return MultibranchedSurface((a, c), (bn, bp), mode)


def closed_surface(orientable: bool, genus: int,
                   mode: ValidityMode = ValidityMode.MINOR) -> MultibranchedSurface:
    """A single closed region and no loci (minor mode only)."""
    if mode is ValidityMode.STRICT:
        raise FixtureError("closed regions are minor-mode only")
    if not orientable and genus < 1:
        raise FixtureError("non-orientable surface needs genus >= 1")
    if genus < 0:
        raise FixtureError("genus must be non-negative")
    s = Region("s", RegionTopology(orientable, genus, 0), ())
    return MultibranchedSurface((s,), (), mode)


def build_fixture(name: str, **params) -> MultibranchedSurface:
    """Dispatch on fixture name; raises FixtureError on unknown names or
    parameters that would not yield a valid surface in the requested mode."""
    mode = params.pop("mode", None)
    if name == "theta":
        n = params.pop("n", 3)
        mode = mode or ValidityMode.STRICT
        if params:
            raise FixtureError(f"unexpected parameters {sorted(params)}")
        if mode is ValidityMode.STRICT and n < 3:
            raise FixtureError(f"theta({n}) is invalid in strict mode (locus degree {n})")
        if n < 1:
            raise FixtureError("theta needs n >= 1")
        return theta(n, mode)
    if name == "mb":
        if params:
            raise FixtureError(f"unexpected parameters {sorted(params)}")
        return moebius_annulus(mode or ValidityMode.STRICT)
    if name == "qn":
        if params:
            raise FixtureError(f"unexpected parameters {sorted(params)}")
        return quasi_pure(mode or ValidityMode.STRICT)
    if name == "closed_surface":
        orientable = params.pop("orientable")
        genus = params.pop("genus")
        if params:
            raise FixtureError(f"unexpected parameters {sorted(params)}")
        return closed_surface(orientable, genus, mode or ValidityMode.MINOR)
    raise FixtureError(f"unknown fixture {name!r}")


def disjoint_union(x: MultibranchedSurface, y: MultibranchedSurface,
                   prefixes: tuple[str, str] = ("X.", "Y.")) -> MultibranchedSurface:
    """Disjoint union with id prefixing; both inputs must share a mode."""
    px, py = prefixes

    def shift(surface, p):
        regions = tuple(
            Region(p + r.id, r.topology, tuple(p + c for c in r.boundary_circles))
            for r in surface.regions
        )
        loci = tuple(
            BranchLocus(p + l.id, l.wrapping, tuple(p + c for c in l.slots), l.signs)
            for l in surface.loci
        )
        return regions, loci

    rx, lx = shift(x, px)
    ry, ly = shift(y, py)
    return MultibranchedSurface(rx + ry, lx + ly, x.mode)


MIN_STRICT_BUDGET = 3  # one pure degree-3 locus plus a once-punctured torus


def random_surface(seed: int, size_budget: int,
                   mode: ValidityMode = ValidityMode.STRICT) -> MultibranchedSurface:
    """Deterministic valid random surface with cell_count <= size_budget.

    Generation: draw loci (wrapping, slot count) under the budget, leaving
    room for at least one region; partition the required boundary circles
    into regions; draw topologies avoiding disks; shuffle circles into slots.
    Minor mode additionally allows small-degree loci and closed regions.
    """
    strict = mode is ValidityMode.STRICT
    if strict and size_budget < MIN_STRICT_BUDGET:
        raise FixtureError(
            f"strict budget must be >= {MIN_STRICT_BUDGET} (got {size_budget})")
    if size_budget < 1:
        raise FixtureError("size_budget must be >= 1")
    rng = random.Random(f"mbs/{seed}/{size_budget}/{mode.value}")

    loci_specs: list[tuple[int, int]] = []  # (wrapping, slot count)
    cells = 0

    def propose():
        if not strict:
            return rng.randint(1, 3), rng.randint(1, 4)
        roll = rng.random()
        if roll < 0.40:
            return 1, 3                      # tribranched normal
        if roll < 0.55:
            return rng.randint(3, 5), 1      # pure
        if roll < 0.70:
            return 2, rng.randint(2, 3)
        if roll < 0.90:
            return 1, rng.randint(4, 5)
        return rng.randint(2, 3), rng.randint(2, 3)

    while True:
        w, k = propose()
        if cells + (1 + k) + 1 > size_budget:
            if loci_specs or not strict:
                break
            w, k = 3, 1  # minimal pure locus always fits a strict budget >= 3
            if cells + 2 + 1 > size_budget:
                break
        loci_specs.append((w, k))
        cells += 1 + k
        if rng.random() < 0.35 and (loci_specs or not strict):
            break

    total_circles = sum(k for _, k in loci_specs)

    # Partition circles into regions (at most the remaining budget).
    max_regions = max(1, size_budget - cells) if total_circles else size_budget - cells
    sizes: list[int] = []
    rem = total_circles
    while rem > 0:
        if len(sizes) + 1 >= max_regions:
            sizes.append(rem)
            rem = 0
        else:
            b = min(rem, rng.choice((1, 2, 2, 2, 3)))
            sizes.append(b)
            rem -= b

    regions = []
    circles = [f"c{i}" for i in range(1, total_circles + 1)]
    pos = 0
    for j, b in enumerate(sizes, start=1):
        orientable = rng.random() < 0.7
        if orientable:
            if b == 2 and rng.random() < 0.7:
                genus = 0  # annulus, the move-rich shape
            else:
                genus = rng.randint(1 if b <= 1 else 0, 2)
        else:
            genus = 1 if (b == 1 and rng.random() < 0.7) else rng.randint(1, 2)
        regions.append(Region(f"r{j}", RegionTopology(orientable, genus, b),
                              tuple(circles[pos:pos + b])))
        pos += b
    cells += len(sizes)

    if not strict and cells + 1 <= size_budget and (not regions or rng.random() < 0.3):
        orientable = rng.random() < 0.5
        genus = rng.randint(1, 2) if not orientable else rng.randint(0, 2)
        regions.append(Region(f"r{len(regions) + 1}",
                              RegionTopology(orientable, genus, 0), ()))

    shuffled = list(circles)
    rng.shuffle(shuffled)
    loci = []
    pos = 0
    for i, (w, k) in enumerate(loci_specs, start=1):
        loci.append(BranchLocus(f"b{i}", w, tuple(shuffled[pos:pos + k])))
        pos += k

    surface = MultibranchedSurface(tuple(regions), tuple(loci), mode)
    issues = validate(surface)
    if issues:  # pragma: no cover - generator postcondition
        raise AssertionError(f"random_surface produced invalid output: {issues}")
    return surface
