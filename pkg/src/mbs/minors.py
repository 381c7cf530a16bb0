"""Region removal, region contraction, and the bounded minor order.

Reductions act on minor-mode surfaces.  ``X < Y`` holds when one removal or
one eligible contraction of Y gives X; a minor is the endpoint of a finite
reduction chain up to isomorphism.  Both reductions strictly decrease
``regions + loci``, so the downward reachable set of a surface is finite:
absence of a chain is definitive when that set fits into the budget and a
budget truncation otherwise.

The obstruction screen computes the two cheap necessary conditions aligned
with the known non-embeddable families (a non-orientable closed region, and
the gcd of the wrapping numbers); it is not a decision procedure for sphere
or 3-sphere embeddability.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

from .algebra import homology_profile
from .errors import IneligibleMoveError, ModeError
from .isomorphism import SymmetryMode, are_isomorphic, canonical_form
from .model import (
    BranchLocus,
    MultibranchedSurface,
    ValidityMode,
    classify_region,
    euler_characteristic,
)
from .moves import IX_ELIGIBLE, _splice
from .search import SearchBudget


@dataclass(frozen=True)
class RemoveRegion:
    region_id: str


@dataclass(frozen=True)
class ContractRegion:
    region_id: str


ReductionStep = RemoveRegion | ContractRegion


@dataclass(frozen=True)
class ObstructionFlags:
    has_nonorientable_closed_region: bool
    locus_wrapping_gcd: int


@dataclass(frozen=True)
class MinorOutcome:
    """``sequence`` is the reduction chain when found.  ``complete`` tells
    whether the whole downward set was explored, which makes a missing
    sequence a definitive negative."""

    sequence: tuple[ReductionStep, ...] | None
    complete: bool

    @property
    def found(self) -> bool:
        return self.sequence is not None


def _require_minor(surface: MultibranchedSurface):
    if surface.mode is not ValidityMode.MINOR:
        raise ModeError("reductions are defined on minor-mode surfaces")


def _contraction_eligible(surface: MultibranchedSurface, region_id: str) -> bool:
    kind = classify_region(surface, region_id)
    if kind not in IX_ELIGIBLE:
        return False
    r = surface.region(region_id)
    # contracting may not leave a bare circle (a locus with no slots)
    loci = [surface.circle_to_slot[c][0] for c in r.boundary_circles]
    total = sum(len(surface.locus(l).slots) for l in set(loci))
    return total - len(r.boundary_circles) >= 1


def enumerate_reductions(surface: MultibranchedSurface) -> list[ReductionStep]:
    """Every region as a removal plus every eligible region as a contraction."""
    _require_minor(surface)
    steps: list[ReductionStep] = []
    for r in sorted(surface.regions, key=lambda r: r.id):
        steps.append(RemoveRegion(r.id))
    for r in sorted(surface.regions, key=lambda r: r.id):
        if _contraction_eligible(surface, r.id):
            steps.append(ContractRegion(r.id))
    return steps


def remove_region(surface: MultibranchedSurface, region_id: str) -> MultibranchedSurface:
    """Delete a region; its slots are excised from the slot cycles keeping
    the survivors' cyclic order, and loci left without slots disappear."""
    _require_minor(surface)
    r = surface.region(region_id)
    gone = set(r.boundary_circles)
    loci = []
    for l in surface.loci:
        kept = [(c, s) for c, s in zip(l.slots, l.signs) if c not in gone]
        if not kept:
            continue
        slots, signs = zip(*kept)
        loci.append(BranchLocus(l.id, l.wrapping, slots, signs))
    regions = tuple(x for x in surface.regions if x.id != region_id)
    return MultibranchedSurface(regions, tuple(loci), surface.mode)


def contract_region(surface: MultibranchedSurface, region_id: str) -> MultibranchedSurface:
    """Contract a normal annulus, quasi-normal annulus or normal Moebius
    region onto its core circle; identical splice semantics to the IX-move
    evaluated with minor-mode degree rules."""
    _require_minor(surface)
    kind = classify_region(surface, region_id)
    if kind not in IX_ELIGIBLE:
        raise IneligibleMoveError(
            f"region {region_id} is {kind.value}; not contractible")
    if not _contraction_eligible(surface, region_id):
        raise IneligibleMoveError(
            f"contracting {region_id} would leave a bare circle")
    return _splice(surface, surface.region(region_id), kind)


def apply_reduction(surface: MultibranchedSurface, step: ReductionStep):
    if isinstance(step, RemoveRegion):
        return remove_region(surface, step.region_id)
    return contract_region(surface, step.region_id)


def less_than(x: MultibranchedSurface, y: MultibranchedSurface,
              budget: SearchBudget = SearchBudget(),
              mode: SymmetryMode = SymmetryMode.MIRROR):
    """Single-step relation: the reduction of y isomorphic to x, or None."""
    _require_minor(x)
    _require_minor(y)
    deadline = time.monotonic() + budget.time_limit
    for step in enumerate_reductions(y):
        if time.monotonic() > deadline:
            return None
        if are_isomorphic(apply_reduction(y, step), x, mode) is not None:
            return (step,)
    return None


def tilde_equivalent(x: MultibranchedSurface, y: MultibranchedSurface,
                     budget: SearchBudget = SearchBudget(),
                     mode: SymmetryMode = SymmetryMode.MIRROR) -> bool:
    """Equivalence through single steps in both directions.

    Isomorphic surfaces are equivalent.  Because every reduction strictly
    shrinks ``regions + loci``, mutually related non-isomorphic surfaces
    cannot exist; the two-sided check is kept for fidelity to the relation's
    definition.  False means "not shown equivalent within budget".
    """
    if are_isomorphic(x, y, mode) is not None:
        return True
    if euler_characteristic(x) != euler_characteristic(y) \
            or homology_profile(x) != homology_profile(y):
        return False
    return (less_than(x, y, budget, mode) is not None
            and less_than(y, x, budget, mode) is not None)


def is_minor(x: MultibranchedSurface, y: MultibranchedSurface,
             budget: SearchBudget = SearchBudget(),
             mode: SymmetryMode = SymmetryMode.MIRROR) -> MinorOutcome:
    """Breadth-first search down the reduction order from y for a surface
    isomorphic to x.  Reflexive via the empty chain."""
    _require_minor(x)
    _require_minor(y)
    deadline = time.monotonic() + budget.time_limit
    target_size = len(x.regions) + len(x.loci)

    start_key = canonical_form(y, mode).data
    seen = {start_key}
    frontier = [(y, ())]
    complete = True
    if are_isomorphic(y, x, mode) is not None:
        return MinorOutcome((), True)
    while frontier:
        next_frontier = []
        for surface, steps in frontier:
            for step in enumerate_reductions(surface):
                if time.monotonic() > deadline or len(seen) >= budget.max_states:
                    return MinorOutcome(None, False)
                after = apply_reduction(surface, step)
                if len(after.regions) + len(after.loci) < target_size:
                    continue
                key = canonical_form(after, mode).data
                if key in seen:
                    continue
                seen.add(key)
                chain = steps + (step,)
                if are_isomorphic(after, x, mode) is not None:
                    return MinorOutcome(chain, True)
                next_frontier.append((after, chain))
        frontier = next_frontier
    return MinorOutcome(None, complete)


def obstruction_screen(surface: MultibranchedSurface) -> ObstructionFlags:
    """Cheap necessary-condition flags; membership in an embeddable class is
    not decided here."""
    closed_nonor = any(
        (not r.topology.orientable) and r.topology.boundary_count == 0
        for r in surface.regions)
    gcd = 0
    for l in surface.loci:
        gcd = math.gcd(gcd, l.wrapping)
    return ObstructionFlags(closed_nonor, gcd if gcd else 1)
