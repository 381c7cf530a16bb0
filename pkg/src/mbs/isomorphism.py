"""Canonical forms and isomorphism testing under configurable symmetry modes.

Two surfaces are isomorphic when regions, loci and circles can be matched so
that topologies, wrapping numbers and the cyclic slot structure agree.  The
mode controls the cycle symmetries:

* ROTATIONAL: per-locus rotations of the slot cycles only.
* MIRROR: rotations plus one global simultaneous reversal of all cycles.
* DIHEDRAL_PER_LOCUS: independent per-locus reversals (diagnostic).

Orientation signs are compared up to gauge: flipping all signs at one locus,
all signs of one orientable region, or the sign of any single boundary
circle of a non-orientable region describes the same object.  Only the
gauge class (the holonomy around incidence cycles) is structural, and the
canonical encoding fixes the gauge deterministically while encoding.

The canonical form is the lexicographically least encoding over admissible
locus orderings (grouped by refinement colors), rotations, permitted
reversals and gauge choices; equal bytes in one mode hold exactly for
isomorphic surfaces.  Backtracking is exponential in the worst case, which
is accepted for desk-scale inputs.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from .model import MultibranchedSurface

FORMAT_PREFIX = b"mbscf1"


class SymmetryMode(Enum):
    ROTATIONAL = "rotational"
    MIRROR = "mirror"
    DIHEDRAL_PER_LOCUS = "dihedral"


@dataclass(frozen=True)
class CanonicalForm:
    mode: SymmetryMode
    data: bytes


def _refined_colors(surface: MultibranchedSurface):
    """Stable colors for regions and loci (1-WL on the incidence structure).

    Colors are invariant under every symmetry of every mode (reflection
    closed); they only narrow the backtracking search.
    """
    attached = {c for l in surface.loci for c in l.slots}
    region_color = {}
    for r in surface.regions:
        t = r.topology
        n_att = sum(1 for c in r.boundary_circles if c in attached)
        region_color[r.id] = (t.orientable, t.genus, t.boundary_count, n_att)
    locus_color = {l.id: (l.wrapping, len(l.slots)) for l in surface.loci}

    def dense(colors):
        order = {sig: i for i, sig in enumerate(sorted(set(colors.values())))}
        return {k: order[sig] for k, sig in colors.items()}

    region_color = dense(region_color)
    locus_color = dense(locus_color)
    for _ in range(len(surface.regions) + len(surface.loci)):
        new_locus = {}
        for l in surface.loci:
            seq = tuple(region_color[surface.circle_to_region[c]] for c in l.slots)
            variants = [seq[i:] + seq[:i] for i in range(len(seq))]
            rev = seq[::-1]
            variants += [rev[i:] + rev[:i] for i in range(len(rev))]
            new_locus[l.id] = (locus_color[l.id], min(variants))
        new_region = {}
        for r in surface.regions:
            incident = tuple(sorted(
                locus_color[surface.circle_to_slot[c][0]]
                for c in r.boundary_circles if c in surface.circle_to_slot))
            new_region[r.id] = (region_color[r.id], incident)
        new_locus = dense(new_locus)
        new_region = dense(new_region)
        if new_locus == locus_color and new_region == region_color:
            break
        locus_color, region_color = new_locus, new_region
    return region_color, locus_color


@dataclass(frozen=True)
class _Labeling:
    """The labeling that realises the canonical code."""

    code: tuple[int, ...]
    locus_seq: tuple[tuple[str, int, int, int], ...]  # (id, rotation, direction, p_locus)
    region_number: dict
    p_region: dict
    stream: tuple[tuple[str, int], ...]  # (locus id, stored slot index) per emitted slot


def _search_canonical(surface: MultibranchedSurface, mode: SymmetryMode) -> _Labeling:
    region_color, locus_color = _refined_colors(surface)
    loci = sorted(surface.loci, key=lambda l: (locus_color[l.id], l.id))
    orientable = {r.id: r.topology.orientable for r in surface.regions}

    header = [0 if surface.mode.value == "strict" else 1,
              len(surface.loci), len(surface.regions)]

    best: dict = {"code": None, "labeling": None}

    def finish(code, chosen, region_number, p_region, stream):
        numbering = dict(region_number)
        leftovers = sorted((r for r in surface.regions if r.id not in numbering),
                           key=lambda r: (region_color[r.id], r.id))
        for r in leftovers:
            numbering[r.id] = len(numbering)
        table = []
        by_number = sorted(numbering, key=numbering.get)
        attached = surface.circle_to_slot
        for rid in by_number:
            r = surface.region_by_id[rid]
            t = r.topology
            n_att = sum(1 for c in r.boundary_circles if c in attached)
            table += [int(t.orientable), t.genus, t.boundary_count, n_att]
        full = tuple(code + table)
        if best["code"] is None or full < best["code"]:
            best["code"] = full
            best["labeling"] = _Labeling(
                code=full,
                locus_seq=tuple(chosen),
                region_number=numbering,
                p_region=dict(p_region),
                stream=tuple(stream),
            )

    def rec(remaining, code, chosen, region_number, p_region, stream, global_dir):
        if not remaining:
            finish(code, chosen, region_number, p_region, stream)
            return
        color_min = min(locus_color[l.id] for l in remaining)
        candidates = [l for l in remaining if locus_color[l.id] == color_min]
        if mode is SymmetryMode.DIHEDRAL_PER_LOCUS:
            directions = (1, -1)
        else:
            directions = (global_dir,)
        # candidates that emit an already-explored block with the same
        # region-id sequence and the same new gauge potentials lead to
        # isomorphic subtrees: skip them (the encoding never distinguishes
        # circles beyond their region, so the consumed loci are then
        # interchangeable)
        tried = set()
        for locus in candidates:
            k = len(locus.slots)
            rest = [l for l in remaining if l.id != locus.id]
            for direction in directions:
                for rot in range(k):
                    for p_locus in (1, -1):
                        block = [locus.wrapping, k]
                        ids = []
                        deltas = []
                        new_numbers = dict(region_number)
                        new_p = dict(p_region)
                        new_stream = list(stream)
                        for step in range(k):
                            idx = (rot + direction * step) % k
                            c = locus.slots[idx]
                            eta = locus.signs[idx]
                            rid = surface.circle_to_region[c]
                            if rid not in new_numbers:
                                new_numbers[rid] = len(new_numbers)
                                if orientable[rid]:
                                    new_p[rid] = p_locus * eta
                                    deltas.append(p_locus * eta)
                                sign_bit = 0
                            elif orientable[rid]:
                                sign_bit = 0 if p_locus * eta * new_p[rid] == 1 else 1
                            else:
                                sign_bit = 0
                            block += [new_numbers[rid], sign_bit]
                            ids.append(rid)
                            new_stream.append((locus.id, idx))
                        key = (tuple(block), tuple(ids), tuple(deltas))
                        if key in tried:
                            continue
                        tried.add(key)
                        new_code = code + block
                        ref = best["code"]
                        if ref is not None and tuple(new_code) > ref[:len(new_code)]:
                            continue
                        rec(rest, new_code, chosen + [(locus.id, rot, direction, p_locus)],
                            new_numbers, new_p, new_stream, global_dir)

    passes = (1, -1) if mode is SymmetryMode.MIRROR else (1,)
    for global_dir in passes:
        rec(loci, list(header), [], {}, {}, [], global_dir)
    return best["labeling"]


@lru_cache(maxsize=8192)
def _canonical(surface: MultibranchedSurface, mode: SymmetryMode) -> _Labeling:
    return _search_canonical(surface, mode)


def canonical_form(surface: MultibranchedSurface, mode: SymmetryMode) -> CanonicalForm:
    """Deterministic, symmetry-invariant byte encoding; equal bytes in one
    mode hold exactly for isomorphic surfaces."""
    labeling = _canonical(surface, mode)
    body = " ".join(str(x) for x in labeling.code).encode("ascii")
    return CanonicalForm(mode, FORMAT_PREFIX + b"/" + mode.value.encode() + b":" + body)


def canonical_hash(surface: MultibranchedSurface, mode: SymmetryMode) -> int:
    """64-bit hash of the canonical form bytes.  Collisions are possible;
    equality of surfaces is decided on the bytes."""
    digest = hashlib.blake2b(canonical_form(surface, mode).data, digest_size=8)
    return int.from_bytes(digest.digest(), "big")


@dataclass(frozen=True)
class IsoCertificate:
    """An explicit isomorphism: id bijections, per-locus cycle alignment
    ``(offset, reversed)`` meaning ``Y.slots[j] = circles[X.slots[(offset +/- j) % k]]``,
    and the sign gauge relating the two surfaces."""

    mode: SymmetryMode
    region_map: dict
    locus_map: dict
    circle_map: dict
    locus_alignment: dict  # X locus id -> (offset, reversed: bool)
    region_flips: frozenset
    locus_flips: frozenset
    circle_flips: frozenset  # circles of non-orientable regions flipped individually

    @staticmethod
    def identity(surface: MultibranchedSurface, mode: SymmetryMode) -> "IsoCertificate":
        return IsoCertificate(
            mode=mode,
            region_map={r.id: r.id for r in surface.regions},
            locus_map={l.id: l.id for l in surface.loci},
            circle_map={c: c for c in surface.circle_to_region},
            locus_alignment={l.id: (0, False) for l in surface.loci},
            region_flips=frozenset(),
            locus_flips=frozenset(),
            circle_flips=frozenset(),
        )

    def _sigma(self, locus_id: str, k: int):
        offset, rev = self.locus_alignment[locus_id]
        if rev:
            return lambda j: (offset - j) % k
        return lambda j: (offset + j) % k

    def apply(self, surface: MultibranchedSurface) -> MultibranchedSurface:
        """Image of ``surface`` under the certificate.  Slot cycles come out
        aligned with the target's stored basepoints; region boundary lists
        keep the source order (the order is not structural)."""
        from .model import BranchLocus, Region

        regions = tuple(
            Region(self.region_map[r.id], r.topology,
                   tuple(self.circle_map[c] for c in r.boundary_circles))
            for r in surface.regions
        )
        loci = []
        for l in surface.loci:
            k = len(l.slots)
            sigma = self._sigma(l.id, k)
            p_l = -1 if l.id in self.locus_flips else 1
            slots = []
            signs = []
            for j in range(k):
                i = sigma(j)
                c = l.slots[i]
                rid = surface.circle_to_region[c]
                if surface.region_by_id[rid].topology.orientable:
                    p = p_l * (-1 if rid in self.region_flips else 1)
                else:
                    p = -1 if c in self.circle_flips else 1
                slots.append(self.circle_map[c])
                signs.append(l.signs[i] * p)
            loci.append(BranchLocus(self.locus_map[l.id], l.wrapping,
                                    tuple(slots), tuple(signs)))
        return MultibranchedSurface(regions, tuple(loci), surface.mode)

    def verify(self, x: MultibranchedSurface, y: MultibranchedSurface) -> bool:
        """Check that applying the certificate to x yields y (regions up to
        boundary-list order, loci literally)."""
        try:
            image = self.apply(x)
        except KeyError:
            return False
        if image.mode is not y.mode:
            return False
        want_regions = {(r.id, r.topology, frozenset(r.boundary_circles))
                        for r in y.regions}
        got_regions = {(r.id, r.topology, frozenset(r.boundary_circles))
                       for r in image.regions}
        if want_regions != got_regions or len(image.regions) != len(y.regions):
            return False
        want_loci = {(l.id, l.wrapping, l.slots, l.signs) for l in y.loci}
        got_loci = {(l.id, l.wrapping, l.slots, l.signs) for l in image.loci}
        if want_loci != got_loci or len(image.loci) != len(y.loci):
            return False
        if self.mode is SymmetryMode.ROTATIONAL:
            if any(rev for _, rev in self.locus_alignment.values()):
                return False
        if self.mode is SymmetryMode.MIRROR:
            revs = {rev for _, rev in self.locus_alignment.values()}
            if len(revs) > 1:
                return False
        return True

    def invert(self) -> "IsoCertificate":
        region_map = {v: k for k, v in self.region_map.items()}
        locus_map = {v: k for k, v in self.locus_map.items()}
        circle_map = {v: k for k, v in self.circle_map.items()}
        alignment = {}
        for xid, (offset, rev) in self.locus_alignment.items():
            if rev:
                alignment[self.locus_map[xid]] = (offset, True)
            else:
                alignment[self.locus_map[xid]] = (-offset, False)
        return IsoCertificate(
            mode=self.mode,
            region_map=region_map,
            locus_map=locus_map,
            circle_map=circle_map,
            locus_alignment=alignment,
            region_flips=frozenset(self.region_map[r] for r in self.region_flips),
            locus_flips=frozenset(self.locus_map[l] for l in self.locus_flips),
            circle_flips=frozenset(self.circle_map[c] for c in self.circle_flips),
        )

    def compose(self, other: "IsoCertificate") -> "IsoCertificate":
        """self: X -> Y composed with other: Y -> Z, giving X -> Z."""
        region_map = {k: other.region_map[v] for k, v in self.region_map.items()}
        locus_map = {k: other.locus_map[v] for k, v in self.locus_map.items()}
        circle_map = {k: other.circle_map[v] for k, v in self.circle_map.items()}
        # sigma_XZ = sigma_XY o sigma_YZ with sigma(j) = offset +/- j
        alignment = {}
        for xid, (o1, r1) in self.locus_alignment.items():
            o2, r2 = other.locus_alignment[self.locus_map[xid]]
            s1 = -1 if r1 else 1
            alignment[xid] = (o1 + s1 * o2, r1 ^ r2)
        region_flips = frozenset(
            r for r in self.region_map
            if ((r in self.region_flips)
                ^ (self.region_map[r] in other.region_flips)))
        locus_flips = frozenset(
            l for l in self.locus_map
            if ((l in self.locus_flips) ^ (self.locus_map[l] in other.locus_flips)))
        circle_flips = frozenset(
            c for c in self.circle_map
            if ((c in self.circle_flips) ^ (self.circle_map[c] in other.circle_flips)))
        return IsoCertificate(
            mode=self.mode,
            region_map=region_map,
            locus_map=locus_map,
            circle_map=circle_map,
            locus_alignment=alignment,
            region_flips=region_flips,
            locus_flips=locus_flips,
            circle_flips=circle_flips,
        )


def _solve_gauge(x, y, region_map, circle_map):
    """Find potentials making the mapped signs literally equal y's signs.

    Returns (region_flips, locus_flips, circle_flips) or None when the sign
    classes differ (holonomy mismatch).
    """
    target = {}
    for l in x.loci:
        for i, c in enumerate(l.slots):
            yloc, yslot = y.circle_to_slot[circle_map[c]]
            target[c] = l.signs[i] * y.locus(yloc).signs[yslot]

    circle_flips = set()
    adj: dict[str, list] = {}
    for l in x.loci:
        adj.setdefault("L:" + l.id, [])
    for r in x.regions:
        if r.topology.orientable:
            adj.setdefault("R:" + r.id, [])
    for l in x.loci:
        for c in l.slots:
            rid = x.circle_to_region[c]
            if x.region_by_id[rid].topology.orientable:
                adj["L:" + l.id].append(("R:" + rid, target[c]))
                adj["R:" + rid].append(("L:" + l.id, target[c]))
            elif target[c] == -1:
                circle_flips.add(c)

    potential = {}
    for start in sorted(adj):
        if start in potential:
            continue
        potential[start] = 1
        queue = [start]
        while queue:
            v = queue.pop()
            for w, t in adj[v]:
                want = potential[v] * t
                if w in potential:
                    if potential[w] != want:
                        return None
                else:
                    potential[w] = want
                    queue.append(w)

    region_flips = frozenset(v[2:] for v, p in potential.items()
                             if v.startswith("R:") and p == -1)
    locus_flips = frozenset(v[2:] for v, p in potential.items()
                            if v.startswith("L:") and p == -1)
    return region_flips, locus_flips, frozenset(circle_flips)


def _alignment_options(mapped_slots, y_slots, allow_reversal):
    k = len(y_slots)
    options = []
    for offset in range(k):
        if all(y_slots[j] == mapped_slots[(offset + j) % k] for j in range(k)):
            options.append((offset, False))
    if allow_reversal:
        for offset in range(k):
            if all(y_slots[j] == mapped_slots[(offset - j) % k] for j in range(k)):
                options.append((offset, True))
    return options


def are_isomorphic(x: MultibranchedSurface, y: MultibranchedSurface,
                   mode: SymmetryMode = SymmetryMode.MIRROR):
    """Return a verified IsoCertificate, or None when the canonical forms differ."""
    if canonical_form(x, mode).data != canonical_form(y, mode).data:
        return None
    lx = _canonical(x, mode)
    ly = _canonical(y, mode)

    region_map = {}
    inv_y = {n: rid for rid, n in ly.region_number.items()}
    for rid, n in lx.region_number.items():
        region_map[rid] = inv_y[n]
    locus_map = {sx[0]: sy[0] for sx, sy in zip(lx.locus_seq, ly.locus_seq)}

    circle_map = {}
    for (xl, xi), (yl, yi) in zip(lx.stream, ly.stream):
        circle_map[x.locus(xl).slots[xi]] = y.locus(yl).slots[yi]
    for rid, target in region_map.items():
        xr = x.region_by_id[rid]
        yr = y.region_by_id[target]
        x_rest = sorted(c for c in xr.boundary_circles if c not in circle_map)
        y_rest = sorted(set(yr.boundary_circles)
                        - {circle_map[c] for c in xr.boundary_circles
                           if c in circle_map})
        for cx, cy in zip(x_rest, y_rest):
            circle_map[cx] = cy

    gauge = _solve_gauge(x, y, region_map, circle_map)
    if gauge is None:  # pragma: no cover - equal canonical forms imply a gauge
        raise AssertionError("canonical forms agree but sign classes differ")
    region_flips, locus_flips, circle_flips = gauge

    allow = mode is not SymmetryMode.ROTATIONAL
    per_locus = {}
    for l in x.loci:
        mapped = [circle_map[c] for c in l.slots]
        options = _alignment_options(mapped, y.locus(locus_map[l.id]).slots, allow)
        if not options:  # pragma: no cover - canonical equality implies alignment
            raise AssertionError("canonical forms agree but cycles do not align")
        per_locus[l.id] = options

    alignment = {}
    if mode is SymmetryMode.MIRROR:
        for rev in (False, True):
            if all(any(o[1] == rev for o in opts) for opts in per_locus.values()):
                for lid, opts in per_locus.items():
                    alignment[lid] = min(o for o in opts if o[1] == rev)
                break
        else:  # pragma: no cover - mirror labelings share a direction
            raise AssertionError("no uniform reversal aligns all cycles")
    else:
        for lid, opts in per_locus.items():
            alignment[lid] = min(opts, key=lambda o: (o[1], o[0]))

    cert = IsoCertificate(
        mode=mode,
        region_map=region_map,
        locus_map=locus_map,
        circle_map=circle_map,
        locus_alignment=alignment,
        region_flips=region_flips,
        locus_flips=locus_flips,
        circle_flips=circle_flips,
    )
    if not cert.verify(x, y):  # pragma: no cover - construction should verify
        raise AssertionError("constructed certificate failed verification")
    return cert
