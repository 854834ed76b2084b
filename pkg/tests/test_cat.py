import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from deformcode import layouts
from deformcode.cat import (
    Layer,
    build_cat,
    cat_parity,
    crossing_owner,
    run_cat,
    schedule,
    step_count,
    superstabilizer_measure,
    verification_rounds,
    verify_cat,
)
from deformcode.lattice import code_state, error_on, extract_syndrome
from deformcode.pauli import PauliString
from deformcode.tableau import canonicalize, new_state, states_equal
from statevec import StateVector


def ghz_group(circ):
    n = circ.size
    gens = [PauliString.from_sparse(n, {c: "X" for c in circ.cat})]
    gens += [PauliString.from_sparse(n, {a: "Z", b: "Z"}) for a, b, _ in circ.pairs()[: circ.n - 1]]
    gens += [PauliString.single(n, h, "Z") for h in circ.helpers]
    return canonicalize(gens)


def prepared(n, topology="linear", seed=0):
    circ = build_cat(n, topology)
    t = new_state(circ.size, seed=seed)
    run_cat(t, circ)
    return circ, t


@pytest.mark.parametrize("n", [2, 3, 5, 17, 64])
@pytest.mark.parametrize("topology", ["linear", "loop"])
def test_depth_five(n, topology):
    circ = build_cat(n, topology)
    assert circ.depth == 5
    for layer in circ.layers:
        used = [q for _, qs in layer for q in qs]
        assert len(used) == len(set(used))


def test_too_small():
    with pytest.raises(ValueError):
        build_cat(1)
    with pytest.raises(ValueError):
        build_cat(4, "star")


@pytest.mark.parametrize("n", range(2, 7))
@pytest.mark.parametrize("seed", range(4))
def test_ghz_group(n, seed):
    circ, t = prepared(n, seed=seed)
    assert canonicalize(t) == ghz_group(circ)


def test_three_qubit_cat_against_dense():
    circ = build_cat(3)
    sv = StateVector(circ.size)
    for c in circ.cat:
        sv.apply("H", c)
    for layer in circ.layers[1:3]:
        for _, (a, b) in layer:
            sv.apply("CNOT", a, b)
    outcomes = [1, -1]
    for h, o in zip(circ.helpers, outcomes):
        sv.measure("".join("Z" if q == h else "I" for q in range(circ.size)), o)
    # helper 1 read -1: flip the cat qubit right of it and reset the helper
    sv.apply("X", circ.cat[2]).apply("X", circ.helpers[1])
    t = new_state(circ.size)
    run_cat(t, circ, forced={"cat.m0": 1, "cat.m1": -1})
    for g in t.generators():
        assert sv.expectation(str(g)) == pytest.approx(1.0)


def test_bell_pair():
    circ, t = prepared(2)
    assert t.expectation(PauliString.parse("XIX")) == 1
    assert t.expectation(PauliString.parse("ZIZ")) == 1


def test_loop_prepares_ghz():
    circ, t = prepared(6, "loop", seed=3)
    assert canonicalize(t) == ghz_group(circ)


def test_offset_embedding():
    circ = build_cat(3)
    t = new_state(circ.size + 2, seed=1)
    run_cat(t, circ, offset=2)
    assert t.expectation(PauliString.parse("IIXIXIX")) == 1
    assert t.expectation(PauliString.parse("ZIIIIII")) == 1


def test_clean_cat_passes_verification():
    circ, t = prepared(8, seed=2)
    trace = verify_cat(t, circ, verification_rounds(5, "linear"))
    assert len(trace.steps) == 4 * 7
    assert all(s.outcome == 1 for s in trace.steps)


def test_domain_wall_detected():
    circ, t = prepared(8, seed=5)
    for k in range(4, 8):
        t.apply("X", circ.cat[k])
    trace = verify_cat(t, circ, 1)
    flipped = [s.op for s in trace.steps if s.outcome == -1]
    assert flipped == ["verify.r1.p3"]


@pytest.mark.parametrize("k", range(8))
def test_single_flip_seen_by_neighbours(k):
    circ, t = prepared(8, seed=k)
    t.apply("X", circ.cat[k])
    trace = verify_cat(t, circ, 2)
    flipped = {s.op.split(".")[2] for s in trace.steps if s.outcome == -1}
    want = {f"p{j}" for j in (k - 1, k) if 0 <= j < 7}
    assert flipped == want


def test_verification_rounds():
    assert verification_rounds(5, "linear") == 4
    assert verification_rounds(5, "loop") == 3
    assert verification_rounds(10, "loop") == 5


@pytest.mark.parametrize("n", range(2, 11))
def test_parity_even(n):
    circ, t = prepared(n, seed=n)
    assert cat_parity(t, circ) == 1


@pytest.mark.parametrize("n", [2, 5, 10])
def test_parity_flip_and_restore(n):
    circ, _ = prepared(n)
    for i in range(n):
        _, t = prepared(n, seed=i)
        t.apply("Z", circ.cat[i])
        assert cat_parity(t, circ) == -1
    for i, j in itertools.combinations(range(n), 2):
        _, t = prepared(n, seed=i + j)
        t.apply("Z", circ.cat[i]).apply("Z", circ.cat[j])
        assert cat_parity(t, circ) == 1


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 10), st.lists(st.integers(0, 9), max_size=6), st.integers(0, 1000))
def test_parity_law(n, spots, seed):
    circ, t = prepared(n, seed=seed)
    hits = [s % n for s in spots]
    for s in hits:
        t.apply("Z", circ.cat[s])
    assert cat_parity(t, circ) == (-1) ** len(hits)


# -- schedules ------------------------------------------------------------------


@pytest.mark.parametrize("d", range(3, 26))
def test_corner_shared_total(d):
    s = step_count(d, "corner_shared")
    assert s.total == 4 * d + 5
    assert (s.prep, s.verify, s.propagate, s.basis_change, s.measure) == (5, 4 * (d - 1), 2, 1, 1)


@pytest.mark.parametrize("d", range(8, 26))
def test_inner_augmented_total(d):
    assert step_count(d, "inner_augmented").total == 4 * d + 9


def test_inner_augmented_needs_distance_eight():
    with pytest.raises(ValueError):
        step_count(7, "inner_augmented")
    with pytest.raises(ValueError):
        schedule(5, "spiral")


def test_overlapped_layers_not_counted():
    layers = schedule(8, "inner_augmented")
    assert sum(not l.overlapped for l in layers) == 41
    assert Layer("propagate", "first SWAP of ranged cat qubits", True) in layers


def test_step_row():
    assert step_count(5).row() == {
        "prep": 5, "verify": 16, "propagate": 2, "basis_change": 1, "measure": 1, "total": 25,
    }


@pytest.mark.parametrize("d", [4, 5, 8, 11])
def test_crossing_alternates(d):
    owner = crossing_owner(d)
    assert len(owner) == d
    assert all(a != b for a, b in zip(owner, owner[1:]))


@pytest.fixture(scope="module")
def pair():
    return layouts.pair_d5()


def test_scheduled_measurement_matches_direct(pair):
    rng = random.Random(11)
    for trial in range(50):
        t = code_state(pair, seed=trial)
        if rng.random() < 0.7:
            chain = error_on(pair, rng.sample(pair.data, rng.randint(1, 4)), rng.choice("XYZ"))
            t.apply_pauli(chain)
        sup = rng.choice(pair.supers())
        variant, d = rng.choice([("corner_shared", 5), ("inner_augmented", 8)])
        want = t.expectation(pair.stabilizer_pauli(sup))
        before = t.copy()
        rec, steps = superstabilizer_measure(t, pair, sup, d, variant)
        assert rec.outcome == want and rec.deterministic
        assert states_equal(t, before)
        assert steps.total == 4 * d + (5 if variant == "corner_shared" else 9)


def test_scheduled_measurement_projects_like_direct(pair):
    # rotate one support qubit so the superstabilizer is no longer fixed
    for seed in range(6):
        t = code_state(pair, seed=seed)
        sup = pair.supers("Z")[seed % 2]
        q = pair.index[sorted(sup.support)[0]]
        t.apply("H", q)
        assert t.expectation(pair.stabilizer_pauli(sup)) == 0
        ref = t.copy()
        rec, _ = superstabilizer_measure(t, pair, sup, 5)
        ref.measure_pauli(pair.stabilizer_pauli(sup), forced=rec.outcome)
        assert states_equal(t, ref)


def test_clean_code_state_keeps_empty_syndrome(pair):
    t = code_state(pair, seed=0)
    for sup in pair.supers():
        superstabilizer_measure(t, pair, sup, 5)
    assert extract_syndrome(pair, t) == set()


def test_small_support_rejected():
    lay = layouts.single_d3()
    t = code_state(lay, seed=0)
    with pytest.raises(ValueError):
        superstabilizer_measure(t, lay, lay.supers("Z")[0], 3)
