import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from deformcode.pauli import DimensionError, PauliString
from deformcode.tableau import (
    ContradictionError,
    StabilizerTableau,
    canonicalize,
    new_state,
    states_equal,
)
from statevec import StateVector

P = PauliString.parse


def group_of(*texts):
    return canonicalize([P(t) for t in texts])


def test_new_state_zeros():
    t = new_state(2)
    assert t.expectation(P("ZI")) == 1
    assert t.expectation(P("IZ")) == 1


def test_new_state_plus():
    assert new_state(1, "plus").expectation(P("X")) == 1


def test_new_state_rejects_empty():
    with pytest.raises(ValueError):
        new_state(0)


def test_deterministic_after_xxx():
    # oracle: |000> projected on XXX=+-1 is a GHZ state, Z1Z2 stays +1
    sv = StateVector(3)
    sv.measure("XXX", 1)
    assert sv.expectation("ZZI") == pytest.approx(1.0)
    t = new_state(3, seed=5)
    t.measure_pauli(P("XXX"))
    rec = t.measure_pauli(P("ZZI"))
    assert rec.deterministic and rec.outcome == 1


def test_hadamard_and_bell():
    t = new_state(1).h(0)
    assert t.expectation(P("X")) == 1
    b = new_state(2).h(0).cnot(0, 1)
    assert canonicalize(b) == group_of("XX", "ZZ")


def test_cat_superposition_of_three():
    # CNOT[2,1] CNOT[0,1] |+0 0 +2> gives |000>+|011>+|110>+|101>
    t = new_state(3)
    t.h(0).h(2).cnot(0, 1).cnot(2, 1)
    sv = StateVector(3)
    sv.apply("H", 0).apply("H", 2).apply("CNOT", 0, 1).apply("CNOT", 2, 1)
    amps = np.abs(sv.psi) ** 2
    support = {format(i, "03b") for i in range(8) if amps[i] > 1e-9}
    assert support == {"000", "011", "110", "101"}
    assert t.expectation(P("ZZZ")) == 1
    assert t.expectation(P("XIX")) == 1
    assert t.expectation(P("IXI")) == 0


def test_gate_errors():
    t = new_state(2)
    with pytest.raises(IndexError):
        t.apply("H", 2)
    with pytest.raises(ValueError):
        t.apply("CNOT", 1, 1)
    with pytest.raises(ValueError):
        t.apply("T", 0)


def test_measure_z_on_zero():
    rec = new_state(1).measure_pauli(P("Z"))
    assert rec.outcome == 1 and rec.deterministic


def test_repeatable():
    t = new_state(2, seed=11)
    first = t.measure_pauli(P("XX"))
    second = t.measure_pauli(P("XX"))
    assert not first.deterministic and second.deterministic
    assert first.outcome == second.outcome


def test_forced_outcomes():
    t = new_state(2)
    assert t.measure_pauli(P("XX"), forced=-1).outcome == -1
    assert t.expectation(P("XX")) == -1
    with pytest.raises(ContradictionError):
        t.measure_pauli(P("ZZ"), forced=-1)


def test_expectation_values():
    t = new_state(1)
    assert t.expectation(P("Z")) == 1
    assert t.expectation(P("X")) == 0
    assert t.expectation(P("-Z")) == -1


def test_expectation_has_no_side_effects():
    t = new_state(4, seed=2).h(0).cnot(0, 1).cnot(1, 2)
    before = t.copy()
    for s in ["XXXI", "ZIII", "IIIZ", "YYXI"]:
        t.expectation(P(s))
    assert states_equal(t, before)
    assert np.array_equal(t.x, before.x)


def test_size_mismatch():
    with pytest.raises(DimensionError):
        new_state(2).expectation(P("Z"))


def test_canonical_same_group():
    assert group_of("ZZ", "IZ") == group_of("ZI", "IZ")
    assert group_of("-YY", "XX") == group_of("XX", "ZZ")
    assert group_of("XX", "ZZ") == group_of("XX", "-YY")
    assert group_of("XX", "ZZ") != group_of("XX", "-ZZ")


def test_canonical_idempotent():
    g = group_of("XZZX", "ZXXZ", "-YIIY", "XXXX")
    assert canonicalize(g) == g


def test_from_generators_signs():
    gens = [P("-XXX"), P("ZZI"), P("-IZZ")]
    t = StabilizerTableau.from_generators(gens)
    for g in gens:
        assert t.expectation(g) == 1
    assert t.is_valid()


def test_from_generators_rejects_imaginary():
    with pytest.raises(ValueError):
        StabilizerTableau.from_generators([P("iX")])


def test_snapshot_format():
    t = new_state(2).h(0).cnot(0, 1).apply("Z", 0)
    assert t.snapshot() == "-XX\nZZ\n"


# -- randomized comparison with the dense oracle -------------------------------

GATES1 = ["H", "S", "SDG", "X", "Y", "Z"]
GATES2 = ["CNOT", "CZ", "SWAP"]


def random_program(rng, n, length):
    prog = []
    for _ in range(length):
        r = rng.random()
        if r < 0.45:
            prog.append(("g1", rng.choice(GATES1), rng.randrange(n)))
        elif r < 0.8 and n > 1:
            a, b = rng.sample(range(n), 2)
            prog.append(("g2", rng.choice(GATES2), a, b))
        else:
            p = PauliString.random(n, rng)
            while p.is_identity():
                p = PauliString.random(n, rng)
            prog.append(("m", p))
    return prog


def run_both(prog, n, seed):
    t = new_state(n, seed=seed)
    sv = StateVector(n)
    for step in prog:
        if step[0] == "g1":
            t.apply(step[1], step[2])
            sv.apply(step[1], step[2])
        elif step[0] == "g2":
            t.apply(step[1], step[2], step[3])
            sv.apply(step[1], step[2], step[3])
        else:
            p = step[1]
            prob = sv.prob_plus(str(p))
            rec = t.measure_pauli(p)
            if rec.deterministic:
                assert prob == pytest.approx(1.0 if rec.outcome == 1 else 0.0, abs=1e-9)
            else:
                assert prob == pytest.approx(0.5, abs=1e-9)
            sv.measure(str(p), rec.outcome)
    return t, sv


@pytest.mark.parametrize("seed", range(12))
def test_matches_statevector(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 6)
    prog = random_program(rng, n, rng.randint(20, 200))
    t, sv = run_both(prog, n, seed)
    assert t.is_valid()
    for g in t.generators():
        assert sv.expectation(str(g)) == pytest.approx(1.0, abs=1e-9)
    for _ in range(10):
        p = PauliString.random(n, rng)
        assert sv.expectation(str(p)) == pytest.approx(t.expectation(p), abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 12))
def test_random_circuits_keep_valid_tableau(seed, n):
    rng = random.Random(seed)
    t = new_state(n, seed=seed)
    for step in random_program(rng, n, 60):
        if step[0] == "g1":
            t.apply(step[1], step[2])
        elif step[0] == "g2":
            t.apply(step[1], step[2], step[3])
        else:
            a = t.measure_pauli(step[1])
            b = t.measure_pauli(step[1])
            assert a.outcome == b.outcome and b.deterministic
    assert t.is_valid()
