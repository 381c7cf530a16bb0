"""The "mbs/1" JSON interchange format.

A surface document looks like::

    {
      "format": "mbs/1",
      "mode": "strict",
      "regions": [{"id": "r1", "orientable": true, "genus": 0,
                   "boundaries": ["r1.a", "r1.b"]}],
      "loci": [{"id": "b1", "wrapping": 1, "slots": ["r1.a", "r1.b"],
                "signs": [1, -1]}]
    }

Slot lists are the normative cyclic order with an arbitrary basepoint that
round-trips verbatim.  ``signs`` is optional and omitted when every sign is
+1, so documents describing freshly built surfaces carry no extra field.
Unknown fields are rejected.  Schema violations carry a JSON-pointer-style
path; syntax errors carry line and column.
"""

from __future__ import annotations

import json

from .errors import SchemaError
from .model import (
    BranchLocus,
    MultibranchedSurface,
    Region,
    RegionTopology,
    ValidityMode,
)
from .moves import (
    IXSite,
    MoebiusSplit,
    MoveRecord,
    MoveStep,
    NormalSplit,
    QuasiSplit,
)
from .model import RegionClass

FORMAT = "mbs/1"


def _expect(condition, rule, path):
    if not condition:
        raise SchemaError(rule, path)


def _check_keys(obj, required, optional, path):
    _expect(isinstance(obj, dict), "expected an object", path)
    for key in required:
        _expect(key in obj, f"missing required field {key!r}", path)
    unknown = set(obj) - set(required) - set(optional)
    _expect(not unknown, f"unknown fields {sorted(unknown)}", path)


def _string(value, path):
    _expect(isinstance(value, str) and value, "expected a non-empty string", path)
    return value


def _int(value, path, minimum=None):
    _expect(isinstance(value, int) and not isinstance(value, bool),
            "expected an integer", path)
    if minimum is not None:
        _expect(value >= minimum, f"expected an integer >= {minimum}", path)
    return value


def surface_to_document(surface: MultibranchedSurface) -> dict:
    regions = []
    for r in surface.regions:
        regions.append({
            "id": r.id,
            "orientable": r.topology.orientable,
            "genus": r.topology.genus,
            "boundaries": list(r.boundary_circles),
        })
    loci = []
    for l in surface.loci:
        item = {"id": l.id, "wrapping": l.wrapping, "slots": list(l.slots)}
        if any(s != 1 for s in l.signs):
            item["signs"] = list(l.signs)
        loci.append(item)
    return {
        "format": FORMAT,
        "mode": surface.mode.value,
        "regions": regions,
        "loci": loci,
    }


def serialize(surface: MultibranchedSurface) -> bytes:
    """Serialize with a fixed key order; byte-stable for equal surfaces."""
    return (json.dumps(surface_to_document(surface), indent=2) + "\n").encode("utf-8")


def document_to_surface(doc) -> MultibranchedSurface:
    _check_keys(doc, ("format", "mode", "regions", "loci"), (), "$")
    _expect(doc["format"] == FORMAT, f"format must be {FORMAT!r}", "$.format")
    _expect(doc["mode"] in ("strict", "minor"),
            "mode must be 'strict' or 'minor'", "$.mode")
    mode = ValidityMode(doc["mode"])
    _expect(isinstance(doc["regions"], list), "expected a list", "$.regions")
    _expect(isinstance(doc["loci"], list), "expected a list", "$.loci")

    regions = []
    region_ids = set()
    circle_ids = set()
    for i, item in enumerate(doc["regions"]):
        path = f"$.regions[{i}]"
        _check_keys(item, ("id", "orientable", "genus", "boundaries"), (), path)
        rid = _string(item["id"], path + ".id")
        _expect(rid not in region_ids, f"duplicate region id {rid!r}", path + ".id")
        region_ids.add(rid)
        _expect(isinstance(item["orientable"], bool), "expected a boolean",
                path + ".orientable")
        genus = _int(item["genus"], path + ".genus", minimum=0)
        _expect(isinstance(item["boundaries"], list), "expected a list",
                path + ".boundaries")
        boundaries = []
        for j, c in enumerate(item["boundaries"]):
            cpath = f"{path}.boundaries[{j}]"
            c = _string(c, cpath)
            _expect(c not in circle_ids, f"duplicate circle id {c!r}", cpath)
            circle_ids.add(c)
            boundaries.append(c)
        topology = RegionTopology(item["orientable"], genus, len(boundaries))
        regions.append(Region(rid, topology, tuple(boundaries)))

    loci = []
    locus_ids = set()
    slot_ids = set()
    for i, item in enumerate(doc["loci"]):
        path = f"$.loci[{i}]"
        _check_keys(item, ("id", "wrapping", "slots"), ("signs",), path)
        lid = _string(item["id"], path + ".id")
        _expect(lid not in locus_ids, f"duplicate locus id {lid!r}", path + ".id")
        locus_ids.add(lid)
        wrapping = _int(item["wrapping"], path + ".wrapping", minimum=1)
        _expect(isinstance(item["slots"], list) and item["slots"],
                "expected a non-empty list", path + ".slots")
        slots = []
        for j, c in enumerate(item["slots"]):
            cpath = f"{path}.slots[{j}]"
            c = _string(c, cpath)
            _expect(c not in slot_ids, f"circle {c!r} fills two slots", cpath)
            slot_ids.add(c)
            slots.append(c)
        signs = (1,) * len(slots)
        if "signs" in item:
            spath = path + ".signs"
            _expect(isinstance(item["signs"], list), "expected a list", spath)
            _expect(len(item["signs"]) == len(slots),
                    "signs must match slots in length", spath)
            for j, s in enumerate(item["signs"]):
                _expect(s in (1, -1), "signs must be 1 or -1", f"{spath}[{j}]")
            signs = tuple(item["signs"])
        loci.append(BranchLocus(lid, wrapping, tuple(slots), signs))

    return MultibranchedSurface(tuple(regions), tuple(loci), mode)


def parse(data: bytes | str) -> MultibranchedSurface:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise SchemaError(f"invalid UTF-8: {exc}") from None
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SchemaError(exc.msg, line=exc.lineno, column=exc.colno) from None
    return document_to_surface(doc)


def load(path) -> MultibranchedSurface:
    with open(path, "rb") as handle:
        return parse(handle.read())


# -- move descriptors and records ------------------------------------------

def move_to_document(move) -> dict:
    if isinstance(move, IXSite):
        return {"move": "ix", "region": move.region_id, "kind": move.kind.value}
    if isinstance(move, NormalSplit):
        return {"move": "xi", "variant": "normal_split", "locus": move.locus_id,
                "gap_a": move.gap_a, "gap_b": move.gap_b}
    if isinstance(move, QuasiSplit):
        return {"move": "xi", "variant": "quasi_split", "locus": move.locus_id,
                "start": move.start, "length": move.length}
    if isinstance(move, MoebiusSplit):
        return {"move": "xi", "variant": "moebius_split", "locus": move.locus_id,
                "cut_gap": move.cut_gap}
    raise TypeError(f"not a move descriptor: {move!r}")


def document_to_move(doc):
    _check_keys(doc, ("move",),
                ("region", "kind", "variant", "locus", "gap_a", "gap_b",
                 "start", "length", "cut_gap"), "$")
    if doc["move"] == "ix":
        _check_keys(doc, ("move", "region", "kind"), (), "$")
        try:
            kind = RegionClass(doc["kind"])
        except ValueError:
            raise SchemaError(f"unknown region class {doc['kind']!r}", "$.kind") \
                from None
        return IXSite(_string(doc["region"], "$.region"), kind)
    _expect(doc["move"] == "xi", "move must be 'ix' or 'xi'", "$.move")
    variant = doc.get("variant")
    if variant == "normal_split":
        _check_keys(doc, ("move", "variant", "locus", "gap_a", "gap_b"), (), "$")
        return NormalSplit(_string(doc["locus"], "$.locus"),
                           _int(doc["gap_a"], "$.gap_a", 0),
                           _int(doc["gap_b"], "$.gap_b", 0))
    if variant == "quasi_split":
        _check_keys(doc, ("move", "variant", "locus", "start", "length"), (), "$")
        return QuasiSplit(_string(doc["locus"], "$.locus"),
                          _int(doc["start"], "$.start", 0),
                          _int(doc["length"], "$.length", 2))
    if variant == "moebius_split":
        _check_keys(doc, ("move", "variant", "locus", "cut_gap"), (), "$")
        return MoebiusSplit(_string(doc["locus"], "$.locus"),
                            _int(doc["cut_gap"], "$.cut_gap", 0))
    raise SchemaError(f"unknown variant {variant!r}", "$.variant")


def record_to_document(record: MoveRecord) -> list:
    return [{"move": move_to_document(step.move),
             "hash_before": step.hash_before,
             "hash_after": step.hash_after}
            for step in record.steps]


def document_to_record(doc) -> MoveRecord:
    _expect(isinstance(doc, list), "expected a list of steps", "$")
    steps = []
    for i, item in enumerate(doc):
        path = f"$[{i}]"
        _check_keys(item, ("move", "hash_before", "hash_after"), (), path)
        steps.append(MoveStep(document_to_move(item["move"]),
                              _int(item["hash_before"], path + ".hash_before"),
                              _int(item["hash_after"], path + ".hash_after")))
    return MoveRecord(tuple(steps))
