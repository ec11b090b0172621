"""Engine correctness against a from-scratch list evaluator.

ref_run below is the third, dumbest evaluation route (plain list history,
rational dot product per step).  Both shipped routes must reproduce it
exactly: the compiled bitmask stepper and the dense oracle.
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from neurec import (
    BitState,
    RecurrenceSystem,
    ShapeMismatch,
    advance_word,
    affine_sum_scaled,
    bits_from_word,
    build_w,
    build_y,
    build_z,
    compile_system,
    dense_oracle_run,
    make_stepper,
    run,
    single_system,
    step,
    window_params,
    word_from_bits,
)


def ref_run(system, steps):
    """x(n) = 1 exactly when sum_j a_j x(n-j) - theta >= 0."""
    hist = [b & 1 for b in system.init]
    for _ in range(steps):
        s = sum(
            Fraction(w) * hist[-j]
            for j, w in enumerate(system.weights, start=1)
            if w
        )
        hist.append(1 if s - Fraction(system.threshold) >= 0 else 0)
    return hist


# --- packing ---------------------------------------------------------------


def test_word_packing_orientation():
    # oldest bit lands highest so the newest output is bit 0
    assert word_from_bits([1, 0, 0]) == 4
    assert word_from_bits([0, 0, 1]) == 1
    assert bits_from_word(4, 3) == (1, 0, 0)


@given(st.lists(st.integers(0, 1), min_size=1, max_size=40))
def test_word_roundtrip(bits):
    w = word_from_bits(bits)
    assert list(bits_from_word(w, len(bits))) == bits
    assert 0 <= w < (1 << len(bits))


# --- compilation -----------------------------------------------------------


def test_compile_frozen_m6():
    p = window_params(6)
    cy = compile_system(build_y(p))
    assert cy.denominator == 1
    assert len(cy.taps) == 8
    assert [g[0] for g in cy.groups] == [-2, 2]
    assert cy.scaled_threshold == 4

    cz = compile_system(build_z(p, 0))
    assert cz.denominator == 80
    assert len(cz.taps) == 14
    assert sorted(g[0] for g in cz.groups) == [-168, -160, -8, 152, 160]
    assert cz.scaled_threshold == 241


def test_compile_structure():
    p = window_params(11)
    z = build_z(p, 1)
    cs = compile_system(z)
    assert cs.mask == (1 << z.memory) - 1
    covered = 0
    for w, gm in cs.groups:
        assert w != 0
        assert covered & gm == 0  # groups partition the taps
        covered |= gm
    assert covered == sum(1 << (j - 1) for j, _ in cs.taps)
    for j, w in cs.taps:
        assert 1 <= j <= z.memory
        assert Fraction(w, cs.denominator) == Fraction(z.weights[j - 1])
    assert Fraction(cs.scaled_threshold, cs.denominator) == z.threshold


def test_compile_drops_zero_weights():
    s = RecurrenceSystem(memory=4, weights=(0, 3, 0, -1), threshold=1, init=(1, 0, 0, 1))
    cs = compile_system(s)
    assert {j for j, _ in cs.taps} == {2, 4}


# --- stepping --------------------------------------------------------------


def test_bitstate_step_and_run_agree():
    p = window_params(6)
    y = build_y(p)
    cs = compile_system(y)
    state = BitState.from_init(y.init)
    assert state.time == y.memory
    emitted = [step(cs, state) for _ in range(600)]
    assert state.time == y.memory + 600
    assert run(cs, y.init, 600) == list(y.init) + emitted


def test_make_stepper_matches_advance_word():
    p = window_params(6)
    cs = compile_system(build_z(p, 1))
    w0 = word_from_bits(build_z(p, 1).init)
    step1 = make_stepper(cs)
    w = w0
    for n in range(200):
        w = step1(w)
    assert w == advance_word(cs, w0, 200)


def test_affine_sum_sign_drives_output():
    p = window_params(6)
    z = build_z(p, 0)
    cs = compile_system(z)
    word = word_from_bits(z.init)
    step1 = make_stepper(cs)
    for _ in range(300):
        s = affine_sum_scaled(cs, word)
        nxt = step1(word)
        assert (nxt & 1) == (1 if s >= cs.scaled_threshold else 0)
        word = nxt


def test_run_prefix_law():
    p = window_params(6)
    y = build_y(p)
    cs = compile_system(y)
    assert run(cs, y.init, 0) == list(y.init)
    long = run(cs, y.init, 500)
    assert run(cs, y.init, 120) == long[: y.memory + 120]


# --- cross-route equality ---------------------------------------------------


@pytest.mark.parametrize("m", [6])
def test_three_routes_agree_on_families(m):
    p = window_params(m)
    systems = [
        single_system(p, 0),
        build_y(p),
        build_w(p, 0),
        build_z(p, 0),
        build_z(p, 1),
    ]
    for s in systems:
        expect = ref_run(s, 1200)
        assert run(compile_system(s), s.init, 1200) == expect
        assert dense_oracle_run(s, s.init, 1200) == expect


rationals = st.fractions(min_value=-4, max_value=4, max_denominator=5)


@st.composite
def small_systems(draw):
    memory = draw(st.integers(min_value=1, max_value=8))
    weights = tuple(draw(rationals) for _ in range(memory))
    theta = draw(rationals)
    init = tuple(draw(st.integers(0, 1)) for _ in range(memory))
    return RecurrenceSystem(
        memory=memory, weights=weights, threshold=theta, init=init, label="rand"
    )


@settings(max_examples=200, deadline=None)
@given(small_systems())
def test_three_routes_agree_on_random_systems(s):
    expect = ref_run(s, 48)
    assert run(compile_system(s), s.init, 48) == expect
    assert dense_oracle_run(s, s.init, 48) == expect


# --- edges -----------------------------------------------------------------


def test_weightless_system_threshold_sign():
    fire = RecurrenceSystem(memory=2, weights=(0, 0), threshold=0, init=(0, 0))
    assert run(compile_system(fire), fire.init, 3) == [0, 0, 1, 1, 1]
    mute = RecurrenceSystem(memory=2, weights=(0, 0), threshold=Fraction(1, 7), init=(1, 1))
    assert run(compile_system(mute), mute.init, 3) == [1, 1, 0, 0, 0]


def test_shape_mismatch_guards():
    p = window_params(6)
    cs = compile_system(build_y(p))
    with pytest.raises(ShapeMismatch):
        run(cs, (0, 1), 5)
    with pytest.raises(ShapeMismatch):
        step(cs, BitState.from_init((0, 1, 0)))
    with pytest.raises(ShapeMismatch):
        dense_oracle_run(build_y(p), (0,), 5)
