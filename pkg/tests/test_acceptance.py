"""Acceptance suite.

Each test covers one release criterion at its stated tolerance and prints a
single PASS line when it holds (pytest -s shows them; a failure fails the
test).  The random corpus is seeds 1..200 with size budgets up to 30 cells.
"""

import random
import time

from mbs import (
    IntegerMatrix,
    SymmetryMode,
    ValidityMode,
    apply_ih,
    apply_ix,
    apply_xi,
    are_isomorphic,
    closed_surface,
    connected_components,
    contract_region,
    enumerate_ix,
    enumerate_xi,
    euler_characteristic,
    homology_profile,
    is_maximally_spread_region,
    is_maximally_spread_surface,
    is_minor,
    locus_profile,
    maximally_spread,
    moebius_annulus,
    obstruction_screen,
    quasi_pure,
    random_surface,
    random_walk,
    remove_region,
    replay,
    search_equivalence,
    smith_normal_form,
    spread_potential,
    theta,
    validate,
)
from mbs.minors import RemoveRegion, ContractRegion, apply_reduction
from mbs.moves import apply_move
from mbs.search import Found, SearchBudget
from oracles import det_bareiss, homology_from_matrices

SEEDS = range(1, 201)


def corpus_surface(seed):
    return random_surface(seed, 3 + (seed % 28), ValidityMode.STRICT)


def report(criterion, detail):
    print(f"PASS {criterion}: {detail}")


def fixtures():
    return (theta(3), moebius_annulus(), quasi_pure())


def stats(surface):
    return (euler_characteristic(surface), connected_components(surface),
            homology_profile(surface))


def test_criterion_1_move_invariance():
    started = time.monotonic()
    moves_checked = 0
    for seed in SEEDS:
        surface = corpus_surface(seed)
        assert validate(surface) == []
        _, record = random_walk(surface, seed, 1 + seed % 6)
        current = surface
        before = stats(current)
        for step in record.steps:
            current = apply_move(current, step.move)
            after = stats(current)
            assert after == before, (seed, step.move)
            before = after
            moves_checked += 1
    elapsed = time.monotonic() - started
    assert elapsed < 60.0
    report("criterion-1 move-invariance",
           f"{moves_checked} moves over 200 surfaces, {elapsed:.1f}s")


def test_criterion_2_spreadability_iff_xi():
    loci_checked = 0
    for seed in SEEDS:
        surface = corpus_surface(seed)
        for locus in surface.loci:
            spreadable = locus_profile(surface, locus.id).is_spreadable
            assert bool(enumerate_xi(surface, locus.id)) == spreadable, \
                (seed, locus.id)
            loci_checked += 1
    report("criterion-2 spreadability-iff-xi", f"{loci_checked} loci, 0 exceptions")


def test_criterion_3_exactly_two():
    checked = 0
    for surface in fixtures():
        for site in enumerate_ix(surface):
            if not is_maximally_spread_region(surface, site.region_id):
                continue
            merged = apply_ix(surface, site)
            fresh = next(l for l in merged.loci if l.id not in surface.locus_by_id)
            assert len(enumerate_xi(merged, fresh.id)) == 2, site
            checked += 1
    for seed in SEEDS:
        surface = corpus_surface(seed)
        for site in enumerate_ix(surface):
            if not is_maximally_spread_region(surface, site.region_id):
                continue
            merged = apply_ix(surface, site)
            fresh = next(l for l in merged.loci if l.id not in surface.locus_by_id)
            assert len(enumerate_xi(merged, fresh.id)) == 2, (seed, site)
            checked += 1
    assert checked > 20  # the corpus must actually exercise the property
    report("criterion-3 exactly-two", f"{checked} maximally spread IX sites")


def test_criterion_4_roundtrip_and_ih():
    roundtrips = 0
    for seed in SEEDS:
        surface = corpus_surface(seed)
        for site in enumerate_ix(surface):
            merged = apply_ix(surface, site)
            fresh = next(l for l in merged.loci if l.id not in surface.locus_by_id)
            results = (apply_xi(merged, choice)
                       for choice in enumerate_xi(merged, fresh.id))
            assert any(are_isomorphic(r, surface, SymmetryMode.ROTATIONAL)
                       is not None for r in results), (seed, site)
            roundtrips += 1
    ih_checked = 0
    for seed in list(SEEDS)[::4]:
        spread, _ = maximally_spread(corpus_surface(seed))
        for site in enumerate_ix(spread):
            assert is_maximally_spread_surface(apply_ih(spread, site)), (seed, site)
            ih_checked += 1
    assert roundtrips > 20 and ih_checked > 20
    report("criterion-4 roundtrip",
           f"{roundtrips} IX round-trips, {ih_checked} IH preservations")


def test_criterion_5_fixture_homology():
    # hand-checked boundary matrices, recorded verbatim; rows are the loop,
    # crosscap and tether one-cells, columns are the region two-cells
    recorded = {
        "theta3": {
            "d1": [[0, 0, 1, 0, 1, 0, 1, 0],
                   [0, 0, 0, 1, 0, 1, 0, 1],
                   [0, 0, -1, -1, 0, 0, 0, 0],
                   [0, 0, 0, 0, -1, -1, 0, 0],
                   [0, 0, 0, 0, 0, 0, -1, -1]],
            "d2": [[1, 1, 1], [1, 1, 1],
                   [0, 0, 0], [0, 0, 0], [0, 0, 0],
                   [0, 0, 0], [0, 0, 0], [0, 0, 0]],
            "cells": (5, 8, 3),
            "betti": (1, 3, 2),
            "torsion1": (),
        },
        "mb": {
            "d1": [[0, 0, 1, 1, 1],
                   [0, 0, -1, 0, 0],
                   [0, 0, 0, -1, -1]],
            "d2": [[1, 2], [2, 0], [0, 0], [0, 0], [0, 0]],
            "cells": (3, 5, 2),
            "betti": (1, 1, 0),
            "torsion1": (4,),
        },
        "qn": {
            "d1": [[0, 0, 1, 0, 1, 1],
                   [0, 0, 0, 1, 0, 0],
                   [0, 0, -1, -1, 0, 0],
                   [0, 0, 0, 0, -1, -1]],
            "d2": [[1, 2], [3, 0], [0, 0], [0, 0], [0, 0], [0, 0]],
            "cells": (4, 6, 2),
            "betti": (1, 1, 0),
            "torsion1": (6,),
        },
    }
    surfaces = {"theta3": theta(3), "mb": moebius_annulus(), "qn": quasi_pure()}
    for name, data in recorded.items():
        n0, n1, n2 = data["cells"]
        betti, torsion1 = homology_from_matrices(
            data["d1"], data["d2"], n0, n1, n2)
        assert betti == data["betti"], name
        assert torsion1 == data["torsion1"], name
        profile = homology_profile(surfaces[name])
        assert profile.betti == data["betti"], name
        assert profile.torsion == ((), data["torsion1"], ()), name
    report("criterion-5 fixture-homology",
           "theta3=(Z,Z^3,Z^2)  mb=(Z,Z+Z/4,0)  qn=(Z,Z+Z/6,0), oracle-checked")


def test_criterion_6_snf_correctness():
    started = time.monotonic()
    rng = random.Random("acceptance-snf")
    for case in range(1000):
        rows = rng.randint(1, 8)
        cols = rng.randint(1, 8)
        matrix = IntegerMatrix.from_rows(
            [[rng.randint(-9, 9) for _ in range(cols)] for _ in range(rows)])
        dec = smith_normal_form(matrix)
        assert dec.U @ matrix @ dec.V == dec.S, case
        diagonal = dec.S.diagonal
        for i in range(dec.S.rows):
            for j in range(dec.S.cols):
                if i != j:
                    assert dec.S.entries[i][j] == 0
        nonzero = [d for d in diagonal if d]
        assert all(d > 0 for d in nonzero)
        assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))
        assert abs(det_bareiss(dec.U.entries)) == 1
        assert abs(det_bareiss(dec.V.entries)) == 1
    elapsed = time.monotonic() - started
    assert elapsed < 30.0
    report("criterion-6 snf", f"1000 matrices verified, {elapsed:.1f}s")


def test_criterion_7_search_finds_recorded_walks():
    worst = 0.0
    for i in range(1, 51):
        fixture = fixtures()[i % 3]
        walked, record = random_walk(fixture, 1000 + i, 1 + (i % 5))
        depth = max(len(record), 1)
        started = time.monotonic()
        outcome = search_equivalence(
            fixture, walked,
            SearchBudget(max_depth=depth, max_states=30000,
                         max_cell_count=60, time_limit=10.0),
            SymmetryMode.ROTATIONAL)
        elapsed = time.monotonic() - started
        worst = max(worst, elapsed)
        assert elapsed < 10.0, i
        assert isinstance(outcome, Found), (i, outcome)
        endpoint = replay(fixture, outcome.record)
        assert are_isomorphic(endpoint, walked, SymmetryMode.ROTATIONAL) \
            is not None, i
    report("criterion-7 search", f"50 recorded walks found, worst {worst:.2f}s")


def test_criterion_8_normalization():
    for seed in SEEDS:
        surface = corpus_surface(seed)
        spread, record = maximally_spread(surface)
        assert is_maximally_spread_surface(spread), seed
        assert len(record) <= spread_potential(surface), seed
        assert replay(surface, record) == spread, seed
    report("criterion-8 normalization",
           "200 surfaces, moves bounded by the potential")


def test_criterion_9_minor_chain_and_screen():
    theta3m = theta(3).in_mode(ValidityMode.MINOR)
    torus = contract_region(remove_region(theta3m, "r1"), "r2")
    outcome = is_minor(torus, theta3m)
    assert outcome.found
    assert len(outcome.sequence) == 2
    assert isinstance(outcome.sequence[0], RemoveRegion)
    assert isinstance(outcome.sequence[1], ContractRegion)
    current = theta3m
    for step in outcome.sequence:
        current = apply_reduction(current, step)
    assert are_isomorphic(current, torus, SymmetryMode.MIRROR) is not None

    klein = closed_surface(False, 2)
    assert obstruction_screen(klein).has_nonorientable_closed_region
    report("criterion-9 minors",
           "torus complex is a 2-step (remove, contract) minor; Klein flagged")
