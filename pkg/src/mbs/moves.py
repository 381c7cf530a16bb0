"""The IX / XI / IH move calculus and maximal-spreading normalization.

Conventions used throughout:

* Slot positions of a locus are indexed ``0..k-1`` in stored cyclic order.
* Gap ``g`` sits between ``slots[g]`` and ``slots[(g+1) % k]``.
* ``linear cut at slot p``: the cycle with slot ``p`` removed, read from
  ``p+1`` onwards (``k-1`` entries).  ``linear cut at gap g``: the full
  cycle read from ``g+1`` onwards (``k`` entries).

An IX-move contracts an eligible region onto its core circle and splices
the affected slot cycles; orientation signs are transported through the
collapse so that homology is preserved.  An XI-move is one of the finitely
many reversals of an IX-move at a spreadable locus.  Applying the inverse
choice of an XI right after an IX reproduces the input up to rotation of
the stored cycles and fresh identifiers.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import IneligibleMoveError, ReplayError, TheoremViolationError
from .model import (
    ANNULUS,
    MOEBIUS,
    BranchLocus,
    MultibranchedSurface,
    Region,
    RegionClass,
    ValidityMode,
    classify_region,
    locus_profile,
)

IX_ELIGIBLE = (
    RegionClass.NORMAL_ANNULUS,
    RegionClass.QUASI_NORMAL_ANNULUS,
    RegionClass.NORMAL_MOEBIUS,
)


@dataclass(frozen=True)
class IXSite:
    region_id: str
    kind: RegionClass


@dataclass(frozen=True)
class NormalSplit:
    """Split a normal locus at two gaps; each arc keeps at least two slots."""

    locus_id: str
    gap_a: int
    gap_b: int


@dataclass(frozen=True)
class QuasiSplit:
    """Pull a consecutive arc of ``length`` slots starting at ``start`` off an
    unnormal locus onto a fresh normal locus.  When ``length`` equals the
    cycle length the arc is the whole cycle and the cut sits at the gap
    before ``start``, so distinct starts are distinct choices."""

    locus_id: str
    start: int
    length: int


@dataclass(frozen=True)
class MoebiusSplit:
    """Reverse a Moebius contraction at a wrapping-2 locus, cutting at ``cut_gap``."""

    locus_id: str
    cut_gap: int


XIChoice = NormalSplit | QuasiSplit | MoebiusSplit
MoveDescriptor = IXSite | NormalSplit | QuasiSplit | MoebiusSplit


@dataclass(frozen=True)
class MoveStep:
    move: MoveDescriptor
    hash_before: int
    hash_after: int


@dataclass(frozen=True)
class MoveRecord:
    steps: tuple[MoveStep, ...]

    def __len__(self):
        return len(self.steps)


def _fresh_id(prefix: str, taken) -> str:
    best = 0
    for t in taken:
        if t.startswith(prefix) and t[len(prefix):].isdigit():
            best = max(best, int(t[len(prefix):]))
    return f"{prefix}{best + 1}"


def _fresh_ids(prefix: str, taken, count: int) -> list[str]:
    out = []
    taken = set(taken)
    for _ in range(count):
        nid = _fresh_id(prefix, taken)
        taken.add(nid)
        out.append(nid)
    return out


def _cut_at_slot(locus: BranchLocus, p: int) -> tuple[tuple[str, ...], tuple[int, ...]]:
    k = len(locus.slots)
    order = [(p + 1 + i) % k for i in range(k - 1)]
    return (tuple(locus.slots[i] for i in order),
            tuple(locus.signs[i] for i in order))


def _cut_at_gap(locus: BranchLocus, g: int) -> tuple[tuple[str, ...], tuple[int, ...]]:
    k = len(locus.slots)
    order = [(g + 1 + i) % k for i in range(k)]
    return (tuple(locus.slots[i] for i in order),
            tuple(locus.signs[i] for i in order))


def _replace(surface: MultibranchedSurface, *, drop_regions=(), drop_loci=(),
             new_regions=(), new_loci=()) -> MultibranchedSurface:
    regions = tuple(r for r in surface.regions if r.id not in set(drop_regions))
    loci = tuple(l for l in surface.loci if l.id not in set(drop_loci))
    return MultibranchedSurface(regions + tuple(new_regions),
                                loci + tuple(new_loci), surface.mode)


def enumerate_ix(surface: MultibranchedSurface) -> list[IXSite]:
    """All regions along which an IX-move is defined: normal and quasi-normal
    annulus regions and normal Moebius regions, ordered by region id."""
    sites = []
    for r in sorted(surface.regions, key=lambda r: r.id):
        kind = classify_region(surface, r.id)
        if kind in IX_ELIGIBLE:
            sites.append(IXSite(r.id, kind))
    return sites


def _splice(surface, region, kind):
    """Shared contraction engine for apply_ix and minor-mode contraction."""
    r = region
    if kind is RegionClass.NORMAL_MOEBIUS:
        (c,) = r.boundary_circles
        locus_id, p = surface.circle_to_slot[c]
        locus = surface.locus(locus_id)
        eta_m = locus.signs[p]
        slots, signs = _cut_at_slot(locus, p)
        if not slots:
            raise IneligibleMoveError(
                f"contracting {r.id} would leave locus {locus_id} bare")
        new_id = _fresh_id("b", surface.locus_by_id)
        merged = BranchLocus(new_id, 2, slots, tuple(-eta_m * s for s in signs))
        return _replace(surface, drop_regions=(r.id,), drop_loci=(locus_id,),
                        new_loci=(merged,))

    c0, c1 = r.boundary_circles
    loc0, p0 = surface.circle_to_slot[c0]
    loc1, p1 = surface.circle_to_slot[c1]
    l0, l1 = surface.locus(loc0), surface.locus(loc1)

    if kind is RegionClass.NORMAL_ANNULUS:
        eta_a, eta_b = l0.signs[p0], l1.signs[p1]
        s0, g0 = _cut_at_slot(l0, p0)
        s1, g1 = _cut_at_slot(l1, p1)
        if not s0 and not s1:
            raise IneligibleMoveError(
                f"contracting {r.id} would leave a bare circle")
        factor = -eta_a * eta_b
        new_id = _fresh_id("b", surface.locus_by_id)
        merged = BranchLocus(new_id, 1, s0 + s1, g0 + tuple(factor * s for s in g1))
        return _replace(surface, drop_regions=(r.id,), drop_loci=(loc0, loc1),
                        new_loci=(merged,))

    # quasi-normal: splice the normal side into the unnormal cycle in place
    if l0.wrapping == 1:
        ln, pn, lu, pu = l0, p0, l1, p1
    else:
        ln, pn, lu, pu = l1, p1, l0, p0
    eta_n, eta_u = ln.signs[pn], lu.signs[pu]
    arc, arc_signs = _cut_at_slot(ln, pn)
    if not arc and len(lu.slots) == 1:
        raise IneligibleMoveError(f"contracting {r.id} would leave a bare circle")
    factor = -eta_n * eta_u
    slots = lu.slots[:pu] + arc + lu.slots[pu + 1:]
    signs = (lu.signs[:pu] + tuple(factor * s for s in arc_signs)
             + lu.signs[pu + 1:])
    new_id = _fresh_id("b", surface.locus_by_id)
    merged = BranchLocus(new_id, lu.wrapping, slots, signs)
    return _replace(surface, drop_regions=(r.id,), drop_loci=(ln.id, lu.id),
                    new_loci=(merged,))


def apply_ix(surface: MultibranchedSurface, site: IXSite) -> MultibranchedSurface:
    """Contract the region of ``site`` onto its core circle.

    A normal annulus merges its two normal loci into one wrapping-1 locus of
    degree ``k1 + k2 - 2``; a quasi-normal annulus splices the normal cycle
    into the unnormal one (degree ``d2 + (d1-2) w``); a normal Moebius band
    turns its locus into a wrapping-2 locus of degree ``2 (d1-1)``.  The
    merged locus is always spreadable.
    """
    if surface.mode is not ValidityMode.STRICT:
        raise IneligibleMoveError("IX-moves are defined on strict surfaces")
    kind = classify_region(surface, site.region_id)
    if kind is not site.kind or kind not in IX_ELIGIBLE:
        raise IneligibleMoveError(
            f"region {site.region_id} is {kind.value}, not an IX site of kind "
            f"{site.kind.value}")
    return _splice(surface, surface.region(site.region_id), kind)


def enumerate_xi(surface: MultibranchedSurface, locus_id: str) -> list[XIChoice]:
    """All XI-moves at one locus.

    Normal locus of cycle length k: every unordered gap pair whose two arcs
    both keep at least two slots.  Unnormal non-pure locus: every consecutive
    arc of length ``2 <= a <= k`` whose complement keeps degree >= 3 (for
    ``a == k`` each cut gap is a distinct choice), plus one Moebius reversal
    per cut gap when the wrapping is exactly 2.  Pure and normal-tribranched
    loci admit none.
    """
    l = surface.locus(locus_id)
    k = len(l.slots)
    w = l.wrapping
    choices: list[XIChoice] = []
    if w == 1:
        for ga in range(k):
            for gb in range(ga + 1, k):
                a = gb - ga
                b = k - a
                if a >= 2 and b >= 2:
                    choices.append(NormalSplit(locus_id, ga, gb))
        return choices
    if k < 2:
        return choices
    for start in range(k):
        for length in range(2, k + 1):
            if length < k:
                remaining_degree = (k - length + 1) * w
                if remaining_degree < 3:
                    continue
                choices.append(QuasiSplit(locus_id, start, length))
            else:
                if w >= 3:
                    choices.append(QuasiSplit(locus_id, start, k))
    choices.sort(key=lambda ch: (ch.start, ch.length))
    if w == 2:
        for g in range(k):
            choices.append(MoebiusSplit(locus_id, g))
    return choices


def apply_xi(surface: MultibranchedSurface, choice: XIChoice) -> MultibranchedSurface:
    """Perform the chosen reversal, creating a fresh normal or quasi-normal
    annulus region or a fresh normal Moebius region."""
    if surface.mode is not ValidityMode.STRICT:
        raise IneligibleMoveError("XI-moves are defined on strict surfaces")
    if choice not in enumerate_xi(surface, choice.locus_id):
        raise IneligibleMoveError(f"{choice} is not available")
    l = surface.locus(choice.locus_id)
    k = len(l.slots)
    taken_circles = set(surface.circle_to_region)

    if isinstance(choice, NormalSplit):
        ga, gb = choice.gap_a, choice.gap_b
        idx_low = [(ga + 1 + i) % k for i in range(gb - ga)]
        idx_high = [(gb + 1 + i) % k for i in range(k - (gb - ga))]
        c_high, c_low = _fresh_ids("c", taken_circles, 2)
        id_high, id_low = _fresh_ids("b", surface.locus_by_id, 2)
        locus_high = BranchLocus(
            id_high, 1,
            tuple(l.slots[i] for i in idx_high) + (c_high,),
            tuple(l.signs[i] for i in idx_high) + (1,))
        locus_low = BranchLocus(
            id_low, 1,
            tuple(l.slots[i] for i in idx_low) + (c_low,),
            tuple(-l.signs[i] for i in idx_low) + (1,))
        region = Region(_fresh_id("r", surface.region_by_id), ANNULUS,
                        (c_high, c_low))
        return _replace(surface, drop_loci=(l.id,),
                        new_regions=(region,), new_loci=(locus_high, locus_low))

    if isinstance(choice, QuasiSplit):
        start, length = choice.start, choice.length
        arc = [(start + i) % k for i in range(length)]
        rest = [(start + length + i) % k for i in range(k - length)]
        c_p, c_q = _fresh_ids("c", taken_circles, 2)
        id_p, id_q = _fresh_ids("b", surface.locus_by_id, 2)
        locus_p = BranchLocus(
            id_p, 1,
            tuple(l.slots[i] for i in arc) + (c_p,),
            tuple(-l.signs[i] for i in arc) + (1,))
        locus_q = BranchLocus(
            id_q, l.wrapping,
            (c_q,) + tuple(l.slots[i] for i in rest),
            (1,) + tuple(l.signs[i] for i in rest))
        region = Region(_fresh_id("r", surface.region_by_id), ANNULUS, (c_p, c_q))
        return _replace(surface, drop_loci=(l.id,),
                        new_regions=(region,), new_loci=(locus_p, locus_q))

    # MoebiusSplit
    g = choice.cut_gap
    slots, signs = _cut_at_gap(l, g)
    c_m = _fresh_id("c", taken_circles)
    id_p = _fresh_id("b", surface.locus_by_id)
    locus_p = BranchLocus(id_p, 1, slots + (c_m,),
                          tuple(-s for s in signs) + (1,))
    region = Region(_fresh_id("r", surface.region_by_id), MOEBIUS, (c_m,))
    return _replace(surface, drop_loci=(l.id,),
                    new_regions=(region,), new_loci=(locus_p,))


def apply_move(surface: MultibranchedSurface, move: MoveDescriptor) -> MultibranchedSurface:
    if isinstance(move, IXSite):
        return apply_ix(surface, move)
    return apply_xi(surface, move)


def is_maximally_spread_region(surface: MultibranchedSurface, region_id: str) -> bool:
    """Every locus touched by the region is non-spreadable."""
    r = surface.region(region_id)
    for c in r.boundary_circles:
        slot = surface.circle_to_slot.get(c)
        if slot is not None and locus_profile(surface, slot[0]).is_spreadable:
            return False
    return True


def is_maximally_spread_surface(surface: MultibranchedSurface) -> bool:
    return all(not locus_profile(surface, l.id).is_spreadable for l in surface.loci)


def spread_potential(surface: MultibranchedSurface) -> int:
    """Termination measure for maximal spreading.

    phi(normal, k) = k - 3, phi(pure) = 0, phi(unnormal non-pure, k) = 2k - 3.
    Zero exactly on maximally spread surfaces; every XI-move strictly
    decreases it and every IX-move strictly increases it.
    """
    total = 0
    for l in surface.loci:
        k = len(l.slots)
        if l.wrapping == 1:
            total += k - 3
        elif k > 1:
            total += 2 * k - 3
    return total


def maximally_spread(surface: MultibranchedSurface, policy: str = "first"):
    """Apply XI-moves until every locus is non-spreadable.

    ``first`` takes the lexicographically least choice (locus id, then
    enumeration order) at each step.  ``exhaustive`` explores all maximal
    spreading sequences and returns the endpoint with the least canonical
    form; :func:`all_maximal_spreadings` exposes the full set.
    Returns ``(surface, MoveRecord)``.
    """
    from .isomorphism import SymmetryMode, canonical_form, canonical_hash

    if policy == "exhaustive":
        results = all_maximal_spreadings(surface)
        key = lambda pair: canonical_form(pair[0], SymmetryMode.ROTATIONAL).data
        return min(results, key=key)
    if policy != "first":
        raise ValueError(f"unknown policy {policy!r}")

    budget = spread_potential(surface)
    current = surface
    steps = []
    while True:
        spreadable = [l.id for l in current.loci
                      if locus_profile(current, l.id).is_spreadable]
        if not spreadable:
            break
        locus_id = min(spreadable)
        choice = enumerate_xi(current, locus_id)[0]
        after = apply_xi(current, choice)
        steps.append(MoveStep(choice,
                              canonical_hash(current, SymmetryMode.ROTATIONAL),
                              canonical_hash(after, SymmetryMode.ROTATIONAL)))
        current = after
        if len(steps) > budget:  # pragma: no cover - potential argument
            raise TheoremViolationError("spreading exceeded its potential bound")
    return current, MoveRecord(tuple(steps))


def all_maximal_spreadings(surface: MultibranchedSurface):
    """All maximally spread endpoints reachable by XI-moves, one per
    isomorphism class (rotational), each with a witnessing record."""
    from .isomorphism import SymmetryMode, canonical_form, canonical_hash

    out = {}
    seen = set()
    stack = [(surface, ())]
    while stack:
        current, steps = stack.pop()
        key = canonical_form(current, SymmetryMode.ROTATIONAL).data
        spreadable = [l.id for l in current.loci
                      if locus_profile(current, l.id).is_spreadable]
        if not spreadable:
            if key not in out:
                out[key] = (current, MoveRecord(steps))
            continue
        if key in seen:
            continue
        seen.add(key)
        for locus_id in spreadable:
            for choice in enumerate_xi(current, locus_id):
                after = apply_xi(current, choice)
                step = MoveStep(choice,
                                canonical_hash(current, SymmetryMode.ROTATIONAL),
                                canonical_hash(after, SymmetryMode.ROTATIONAL))
                stack.append((after, steps + (step,)))
    return list(out.values())


def apply_ih(surface: MultibranchedSurface, site: IXSite) -> MultibranchedSurface:
    """IX along a maximally spread region followed by the non-inverse XI.

    The merged locus must admit exactly two XI-moves; failing that aborts
    loudly since it contradicts an invariant of the calculus.  The inverse
    is detected by an isomorphism test against the input (rotational mode)
    rather than by slot provenance.
    """
    from .isomorphism import SymmetryMode, are_isomorphic

    if not is_maximally_spread_region(surface, site.region_id):
        raise IneligibleMoveError(
            f"region {site.region_id} is not maximally spread")
    merged = apply_ix(surface, site)
    old_loci = set(surface.locus_by_id)
    new_locus = next(l.id for l in merged.loci if l.id not in old_loci)
    choices = enumerate_xi(merged, new_locus)
    if len(choices) != 2:
        raise TheoremViolationError(
            f"merged locus {new_locus} admits {len(choices)} XI-moves, expected 2")
    results = [apply_xi(merged, ch) for ch in choices]
    for i, candidate in enumerate(results):
        if are_isomorphic(candidate, surface, SymmetryMode.ROTATIONAL) is not None:
            return results[1 - i]
    raise TheoremViolationError(
        f"no XI-move at {new_locus} reverses the IX-move along {site.region_id}")


def replay(surface: MultibranchedSurface, record: MoveRecord) -> MultibranchedSurface:
    """Re-apply a recorded move sequence, verifying the surface hash at each step."""
    from .isomorphism import SymmetryMode, canonical_hash

    current = surface
    for i, step in enumerate(record.steps):
        if canonical_hash(current, SymmetryMode.ROTATIONAL) != step.hash_before:
            raise ReplayError(f"hash mismatch before step {i}")
        current = apply_move(current, step.move)
        if canonical_hash(current, SymmetryMode.ROTATIONAL) != step.hash_after:
            raise ReplayError(f"hash mismatch after step {i}")
    return current
