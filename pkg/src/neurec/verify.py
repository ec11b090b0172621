"""Machine checks for every claim the construction is supposed to satisfy.

Claims are data: each entry in ALL_CLAIMS names one checkable statement, the
grid functions decide which (m, d) instances are worth running, and the
runner functions produce ClaimResult records.  The test suite and the CLI
verify command share this registry, so a claim passes in exactly one place.

Static claims re-derive combinatorial facts (index-set cardinalities, weight
band sums, the two routes to the perturbation set, the chain update).
Dynamic claims simulate and compare against closed forms or predicted
(transient, period) pairs; measurement is routed through detect_cycle for
desk-sized orbits and verify_predicted (one certified pass) for the large
ones.  Cutoffs below bound the work per claim instance; instances whose
predicted work exceeds MEASURE_CUTOFF are skipped by the grids rather than
attempted and aborted.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import construction as cons
from .construction import RecurrenceSystem
from .cycles import CycleReport, detect_cycle, verify_predicted
from .engine import (
    advance_word,
    affine_sum_scaled,
    compile_system,
    make_stepper,
    run,
    word_from_bits,
)
from .errors import BudgetExceeded, HypothesisUnmet, PredictionFailed, RhoTooSmall
from .numtheory import WindowParams, cycle_lengths, window_params

__all__ = [
    "ALL_CLAIMS",
    "STATIC_CLAIMS",
    "DYNAMIC_CLAIMS",
    "COMPOSITION_CLAIMS",
    "ClaimResult",
    "predicted_cycle",
    "measure_cycle",
    "check_static",
    "check_dynamics",
    "check_phases",
    "check_chain",
    "check_basin",
    "check_composition",
    "run_claims",
    "claim_instances",
]

# Routing and feasibility bounds, in window slides.
DETECT_CUTOFF = 1_000_000      # above this predicted T+P, verify instead of search
MEASURE_CUTOFF = 20_000_000    # above this predicted T+P, skip the instance
TRACE_CUTOFF = 2_000_000       # longest trace a phase comparison may record

STATIC_CLAIMS = (
    "window_param_bounds",
    "prop1",
    "prop2",
    "pos_disjoint",
    "b0_methods_agree",
    "chain_equals_direct",
)
DYNAMIC_CLAIMS = (
    "x_cycle",
    "v_fixed",
    "sum_bounds",
    "s1_range",
    "y_cycle",
    "y_deshuffle",
    "w_cycle",
    "z_summary",
)
COMPOSITION_CLAIMS = ("example1_period2", "example1_period3", "divisor_rule")

ALL_CLAIMS = (
    "window_param_bounds",
    "prop1",
    "prop2",
    "pos_disjoint",
    "x_cycle",
    "v_fixed",
    "sum_bounds",
    "s1_range",
    "y_cycle",
    "y_deshuffle",
    "w_cycle",
    "b0_methods_agree",
    "chain_equals_direct",
    "phases",
    "z_summary",
    "chain",
    "basin",
    "example1_period2",
    "example1_period3",
    "divisor_rule",
)


@dataclass
class ClaimResult:
    """One verified (or refuted) claim instance."""

    claim: str
    params: dict
    passed: bool
    detail: dict = field(default_factory=dict)


def predicted_cycle(params: WindowParams, family: str, index: int | None = None) -> tuple[int, int]:
    """Formula-level (transient, period) for a family member.

    family picks the system: "x"/"v" take a lane index i, "w"/"z" a
    bifurcation step d, "y" takes none.
    """
    if family == "x":
        params.check_lane(index)
        return (0, params.primes[index])
    if family == "v":
        params.check_lane(index)
        return (params.k - params.primes[index], 1)
    if family == "y":
        return (0, cycle_lengths(params, 0)[2])
    if family == "w":
        params.check_lane(index, "d")
        l0 = cycle_lengths(params, index)[0]
        t = params.rho * (params.k - params.primes[index] - 1) + index + 1
        return (t, l0)
    if family == "z":
        params.check_lane(index, "d")
        l0, l1, _ = cycle_lengths(params, index)
        t = l1 + params.h + index + 1 - params.rho * (1 + params.primes[index])
        return (t, l0)
    raise ValueError(f"unknown family {family!r}")


def _default_budget(t: int, p: int, memory: int) -> int:
    return 6 * (t + p) + 4 * memory + 64


def measure_cycle(
    system: RecurrenceSystem,
    predicted: tuple[int, int],
    budget: int | None = None,
) -> tuple[CycleReport, str]:
    """Measure or certify a system's (T, P) against a prediction.

    Small orbits are searched blind with detect_cycle; orbits past
    DETECT_CUTOFF are instead proved in one pass with verify_predicted.
    An explicit budget forces the search route.
    """
    cs = compile_system(system)
    t_pred, p_pred = predicted
    if budget is None and t_pred + p_pred > DETECT_CUTOFF:
        return verify_predicted(cs, system.init, t_pred, p_pred), "verify_predicted"
    b = budget if budget is not None else _default_budget(t_pred, p_pred, system.memory)
    return detect_cycle(cs, system.init, b, predicted=predicted), "detect"


def _frac(x) -> str:
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}" if f.denominator != 1 else str(f.numerator)


def _report_dict(rep: CycleReport, route: str) -> dict:
    return {
        "T": rep.measured_transient,
        "P": rep.measured_period,
        "T_pred": rep.predicted_transient,
        "P_pred": rep.predicted_period,
        "route": route,
        "steps": rep.steps_executed,
    }


# ---------------------------------------------------------------------------
# static claims


def _run_window_param_bounds(m: int, **_: object) -> ClaimResult:
    params = window_params(m)
    bad: list[str] = []
    rho = params.rho
    for i, p in enumerate(params.primes):
        if not 2 * m < p < 3 * m:
            bad.append(f"p_{i}={p} outside (2m, 3m)")
        if params.alphas[i] != 3 * m - p:
            bad.append(f"alpha_{i} mismatch")
    if list(params.primes) != sorted(params.primes, reverse=True):
        bad.append("primes not descending")
    if params.k != (6 * m - 1) * rho or params.h != rho * params.k:
        bad.append("memory length identities broken")
    l2 = cycle_lengths(params, 0)[2]
    prev_l0 = None
    prev_l1 = None
    for d in range(rho):
        l0, l1, l2_again = cycle_lengths(params, d)
        if l2_again != l2:
            bad.append(f"L2 varies with d={d}")
        if l2 % l0 or l2 % l1:
            bad.append(f"L0/L1 at d={d} do not divide L2")
        if prev_l0 is not None and prev_l0 % l0:
            bad.append(f"L0({d}) does not divide L0({d - 1})")
        if prev_l1 is not None and l1 % prev_l1:
            bad.append(f"L1({d - 1}) does not divide L1({d})")
        prev_l0, prev_l1 = l0, l1
    detail = {
        "rho": rho,
        "primes": list(params.primes),
        "k": params.k,
        "h": params.h,
        "mu": list(params.mu),
        "beta": list(params.beta_m),
        "violations": bad,
    }
    return ClaimResult("window_param_bounds", {"m": m}, not bad, detail)


def _run_prop1(m: int, **_: object) -> ClaimResult:
    params = window_params(m)
    F = cons.index_sets(params).F
    rho = params.rho
    worst = 0
    bad: list[list[int]] = []
    for i, p in enumerate(params.primes):
        for off in range(1, p):
            card = len(cons.q_set(params, i, off) & F)
            worst = max(worst, card)
            if card > rho - 1:
                bad.append([i, off, card])
    detail = {"bound": rho - 1, "worst_observed": worst, "violations": bad}
    return ClaimResult("prop1", {"m": m}, not bad, detail)


def _run_prop2(m: int, **_: object) -> ClaimResult:
    params = window_params(m)
    weights, theta = cons.single_weights(params)
    sums = []
    for i in range(params.rho):
        s = sum(weights[j - 1] for j in cons.pos_set(params, i))
        sums.append(s)
    ok = all(s == theta for s in sums)
    return ClaimResult("prop2", {"m": m}, ok, {"per_lane_sums": sums, "threshold": theta})


def _run_pos_disjoint(m: int, **_: object) -> ClaimResult:
    params = window_params(m)
    sets = cons.index_sets(params)
    weights, _ = cons.single_weights(params)
    bad: list[str] = []
    for i in range(params.rho):
        for j in range(i + 1, params.rho):
            overlap = sets.pos[i] & sets.pos[j]
            if overlap:
                bad.append(f"Pos({i}) and Pos({j}) share {sorted(overlap)[:4]}")
    union = frozenset().union(*sets.pos)
    if union != sets.F:
        bad.append("F is not the union of the Pos sets")
    support = frozenset(j for j, w in enumerate(weights, start=1) if w != 0)
    if support != sets.F:
        bad.append("weight support differs from F")
    if sets.G != frozenset(range(1, params.k + 1)) - sets.F:
        bad.append("G is not the complement of F")
    detail = {"card_F": len(sets.F), "card_G": len(sets.G), "violations": bad}
    return ClaimResult("pos_disjoint", {"m": m}, not bad, detail)


def _run_b0_methods_agree(m: int, **_: object) -> ClaimResult:
    params = window_params(m)
    per_d = {}
    ok = True
    for d in range(params.rho):
        definitional = cons.compute_B0(params, d, "definitional")
        algebraic = cons.compute_B0(params, d, "algebraic")
        singleton = cons.b0_singleton_reading(params, d)
        agree = definitional == algebraic
        ok = ok and agree
        per_d[str(d)] = {
            "tot": len(definitional),
            "agree": agree,
            "singleton_reading_matches": singleton == definitional,
        }
    return ClaimResult("b0_methods_agree", {"m": m}, ok, {"per_d": per_d})


def _run_chain_equals_direct(m: int, **_: object) -> ClaimResult:
    params = window_params(m)
    plans = [cons.perturbation_plan(params, d) for d in range(params.rho)]
    current = cons.build_z(params, 0)
    per_step = {}
    ok = True
    for d in range(params.rho - 1):
        chained = cons.chain_perturbation(current, plans[d], plans[d + 1])
        direct = cons.build_z(params, d + 1)
        same = (
            chained.weights == direct.weights
            and chained.threshold == direct.threshold
            and chained.init == direct.init
        )
        ok = ok and same
        per_step[f"{d}->{d + 1}"] = {
            "weights_equal": chained.weights == direct.weights,
            "threshold_equal": chained.threshold == direct.threshold,
            "theta2": _frac(direct.threshold),
        }
        current = direct
    return ClaimResult("chain_equals_direct", {"m": m}, ok, {"per_step": per_step})


# ---------------------------------------------------------------------------
# dynamic claims


def _run_x_cycle(m: int, budget: int | None = None, **_: object) -> ClaimResult:
    params = window_params(m)
    per_lane = {}
    ok = True
    for i in range(params.rho):
        system = cons.single_system(params, i)
        pred = predicted_cycle(params, "x", i)
        rep, route = measure_cycle(system, pred, budget)
        cs = compile_system(system)
        horizon = params.k + 2 * params.primes[i]
        trace = run(cs, system.init, horizon - params.k)
        mismatch = next(
            (t for t in range(len(trace)) if trace[t] != cons.x_closed_form(params, i, t)),
            None,
        )
        lane_ok = bool(rep.matches) and mismatch is None
        ok = ok and lane_ok
        per_lane[str(i)] = _report_dict(rep, route) | {"closed_form_mismatch_at": mismatch}
    return ClaimResult("x_cycle", {"m": m}, ok, {"per_lane": per_lane})


def _run_v_fixed(m: int, budget: int | None = None, **_: object) -> ClaimResult:
    params = window_params(m)
    k = params.k
    per_lane = {}
    ok = True
    for i in range(params.rho):
        system = cons.destabilized_system(params, i)
        pred = predicted_cycle(params, "v", i)
        rep, route = measure_cycle(system, pred, budget)
        cs = compile_system(system)
        attractor_zero = advance_word(cs, word_from_bits(system.init), rep.measured_transient) == 0
        trace = run(cs, system.init, k + 1)
        dead_from = k - params.primes[i]
        late_one = next((t for t in range(dead_from, len(trace)) if trace[t]), None)
        # After the window clears the initial pattern the affine sum must sit
        # at least two whole units below the threshold.
        step1 = make_stepper(cs)
        word = word_from_bits(system.init)
        margin_ok = True
        for t in range(k, 2 * k + 1):
            s = affine_sum_scaled(cs, word)
            if s > cs.scaled_threshold - 2 * cs.denominator:
                margin_ok = False
                break
            word = step1(word)
        lane_ok = bool(rep.matches) and attractor_zero and late_one is None and margin_ok
        ok = ok and lane_ok
        per_lane[str(i)] = _report_dict(rep, route) | {
            "attractor_all_zero": attractor_zero,
            "first_late_one": late_one,
            "sum_margin_ok": margin_ok,
        }
    return ClaimResult("v_fixed", {"m": m}, ok, {"per_lane": per_lane})


def _window_popcounts(system: RecurrenceSystem, horizon: int) -> tuple[int, int]:
    """(min, max) of the window popcount over times memory..memory+horizon."""
    cs = compile_system(system)
    step1 = make_stepper(cs)
    word = word_from_bits(system.init)
    lo = hi = word.bit_count()
    for _ in range(horizon):
        word = step1(word)
        c = word.bit_count()
        lo = min(lo, c)
        hi = max(hi, c)
    return lo, hi


def _run_sum_bounds(m: int, **_: object) -> ClaimResult:
    params = window_params(m)
    rho, k = params.rho, params.k
    detail: dict = {}
    ok = True

    for i in range(params.rho):
        lo, hi = _window_popcounts(cons.single_system(params, i), 2 * params.primes[i])
        mu = params.mu[i]
        lane_ok = mu <= lo and hi <= mu + 1
        ok = ok and lane_ok
        detail[f"x{i}"] = {"min": lo, "max": hi, "bounds": [mu, mu + 1]}

    mu_sum = sum(params.mu)
    l2 = cycle_lengths(params, 0)[2]
    horizon = min(l2 + 1, 300_000)
    lo, hi = _window_popcounts(cons.build_y(params), horizon)
    y_ok = mu_sum <= lo and hi <= rho + mu_sum
    ok = ok and y_ok
    detail["y"] = {"min": lo, "max": hi, "bounds": [mu_sum, rho + mu_sum], "horizon": horizon}

    for d in range(rho):
        t_w, l0 = predicted_cycle(params, "w", d)
        horizon = min(t_w + 2 * l0 + 1, 300_000)
        lo, hi = _window_popcounts(cons.build_w(params, d), horizon)
        low_bound = sum(params.mu[d + 1 :])
        high_bound = rho - d - 1 + mu_sum
        w_ok = low_bound <= lo and hi <= high_bound
        ok = ok and w_ok
        detail[f"w{d}"] = {
            "min": lo,
            "max": hi,
            "bounds": [low_bound, high_bound],
            "horizon": horizon,
        }
    return ClaimResult("sum_bounds", {"m": m}, ok, detail)


def _run_s1_range(m: int, **_: object) -> ClaimResult:
    params = window_params(m)
    theta = params.theta_single
    per_lane = {}
    ok = True
    worst_gap = None
    for i in range(params.rho):
        system = cons.single_system(params, i)
        cs = compile_system(system)
        step1 = make_stepper(cs)
        word = word_from_bits(system.init)
        low = -2 * (1 + params.mu[i])
        lane_ok = True
        max_sub = None
        for _ in range(params.k, params.k + 2 * params.primes[i] + 1):
            s = affine_sum_scaled(cs, word)
            if s >= theta:
                lane_ok = lane_ok and s == theta
            else:
                lane_ok = lane_ok and low <= s <= theta - 1
                max_sub = s if max_sub is None else max(max_sub, s)
            word = step1(word)
        gap = None if max_sub is None else theta - max_sub
        if gap is not None:
            worst_gap = gap if worst_gap is None else min(worst_gap, gap)
        ok = ok and lane_ok
        per_lane[str(i)] = {"range": [low, theta - 1], "max_subthreshold": max_sub, "ok": lane_ok}
    # The perturbation depth -1 is admissible iff every sub-threshold sum
    # sits at least one whole unit below the threshold.
    lambda_ok = worst_gap is None or worst_gap >= 1
    ok = ok and lambda_ok
    return ClaimResult(
        "s1_range",
        {"m": m},
        ok,
        {"per_lane": per_lane, "min_gap_below_threshold": worst_gap, "lambda_minus_one_ok": lambda_ok},
    )


def _run_y_cycle(m: int, budget: int | None = None, **_: object) -> ClaimResult:
    params = window_params(m)
    system = cons.build_y(params)
    pred = predicted_cycle(params, "y")
    rep, route = measure_cycle(system, pred, budget)
    return ClaimResult("y_cycle", {"m": m}, bool(rep.matches), _report_dict(rep, route))


def _run_y_deshuffle(m: int, **_: object) -> ClaimResult:
    params = window_params(m)
    system = cons.build_y(params)
    cs = compile_system(system)
    l2 = cycle_lengths(params, 0)[2]
    horizon = params.h + min(l2, 100_000)
    trace = run(cs, system.init, horizon - params.h)
    mismatch = next(
        (t for t in range(len(trace)) if trace[t] != cons.y_closed_form(params, t)),
        None,
    )
    return ClaimResult(
        "y_deshuffle",
        {"m": m},
        mismatch is None,
        {"horizon": horizon, "mismatch_at": mismatch},
    )


def _run_w_cycle(m: int, d: int, budget: int | None = None, **_: object) -> ClaimResult:
    params = window_params(m)
    system = cons.build_w(params, d)
    pred = predicted_cycle(params, "w", d)
    rep, route = measure_cycle(system, pred, budget)
    return ClaimResult("w_cycle", {"m": m, "d": d}, bool(rep.matches), _report_dict(rep, route))


def _run_z_summary(m: int, d: int, budget: int | None = None, **_: object) -> ClaimResult:
    params = window_params(m)
    system = cons.build_z(params, d)
    pred = predicted_cycle(params, "z", d)
    rep, route = measure_cycle(system, pred, budget)
    plan = cons.perturbation_plan(params, d)
    detail = _report_dict(rep, route) | {
        "tot": plan.tot,
        "beta_d": _frac(plan.beta_d),
        "xi_d": _frac(plan.xi_d),
        "theta2": _frac(plan.theta2),
    }
    return ClaimResult("z_summary", {"m": m, "d": d}, bool(rep.matches), detail)


# ---------------------------------------------------------------------------
# phase structure, chain, basin


def check_phases(m: int, d: int, budget: int | None = None) -> ClaimResult:
    """Compare z(., d) bit for bit against y then w across its five phases."""
    params = window_params(m)
    params.check_lane(d, "d")
    rho, h, k = params.rho, params.h, params.k
    p_d = params.primes[d]
    l0, l1, _ = cycle_lengths(params, d)
    l3 = l1 + 2 * h + d - rho * (1 + p_d)
    l4 = l3 - h + 1

    phase5_span = min(l0, 10_000) + h
    z_top = max(l3, l4 + phase5_span)
    w_top = max(h + rho * (k - 1 - p_d) + d, phase5_span + h + d + 1 - rho * (1 + p_d))
    y_top = l1 + h - 1

    z_sys = cons.build_z(params, d)
    z_trace = run(compile_system(z_sys), z_sys.init, z_top + 1 - h)
    y_sys = cons.build_y(params)
    y_trace = run(compile_system(y_sys), y_sys.init, y_top + 1 - h)
    w_sys = cons.build_w(params, d)
    w_trace = run(compile_system(w_sys), w_sys.init, w_top + 1 - h)

    bad: list[str] = []

    p1_end = l1 + h - 1 - rho
    if any(z_trace[t] != y_trace[t] for t in range(0, p1_end + 1)):
        t = next(t for t in range(0, p1_end + 1) if z_trace[t] != y_trace[t])
        bad.append(f"phase1 mismatch at t={t}")

    p2_lo, p2_hi = l1 + h - rho, l1 + h - rho + d
    anomalies = 0
    for t in range(p2_lo, p2_hi + 1):
        if not (z_trace[t] == 0 and y_trace[t] == 1):
            bad.append(f"phase2 expected z=0,y=1 at t={t}, got z={z_trace[t]},y={y_trace[t]}")
        else:
            anomalies += 1
    if anomalies != d + 1:
        bad.append(f"phase2 anomaly count {anomalies} != {d + 1}")

    p3_lo, p3_hi = l1 + h - rho + d + 1, l1 + h - 1
    phase3_empty = p3_lo > p3_hi
    if phase3_empty != (d == rho - 1):
        bad.append("phase3 emptiness does not track d == rho-1")
    for t in range(p3_lo, p3_hi + 1):
        if z_trace[t] != y_trace[t]:
            bad.append(f"phase3 mismatch at t={t}")
            break

    for t in range(0, rho * (k - 1 - p_d) + d + 1):
        if z_trace[l1 + h + t] != w_trace[h + t]:
            bad.append(f"phase4 mismatch at offset t={t}")
            break

    w_shift = h + d + 1 - rho * (1 + p_d)
    for t in range(0, phase5_span + 1):
        if z_trace[t + l4] != w_trace[t + w_shift]:
            bad.append(f"phase5 mismatch at offset t={t}")
            break

    detail = {
        "phase1": [0, p1_end],
        "phase2": [p2_lo, p2_hi],
        "phase3": None if phase3_empty else [p3_lo, p3_hi],
        "phase3_empty": phase3_empty,
        "phase4_z": [l1 + h, l3],
        "phase5_start": l4,
        "anomalies": anomalies,
        "violations": bad,
    }
    return ClaimResult("phases", {"m": m, "d": d}, not bad, detail)


def check_chain(m: int, budget: int | None = None) -> ClaimResult:
    """Measure the full period chain y, z(.,0), ..., z(.,rho-1).

    Passes when every period matches its formula, each period divides its
    predecessor, the final period is 1, and the final attractor is the
    all-zero window.
    """
    params = window_params(m)
    rho = params.rho
    y_sys = cons.build_y(params)
    y_rep, y_route = measure_cycle(y_sys, predicted_cycle(params, "y"), budget)
    steps_detail = {"y": _report_dict(y_rep, y_route)}
    ok = bool(y_rep.matches)

    plans = [cons.perturbation_plan(params, d) for d in range(rho)]
    systems = [cons.build_z(params, 0)]
    for d in range(rho - 1):
        systems.append(cons.chain_perturbation(systems[d], plans[d], plans[d + 1]))

    periods = [y_rep.measured_period]
    for d, system in enumerate(systems):
        rep, route = measure_cycle(system, predicted_cycle(params, "z", d), budget)
        steps_detail[f"z{d}"] = _report_dict(rep, route)
        ok = ok and bool(rep.matches)
        periods.append(rep.measured_period)

    divides = all(periods[i] % periods[i + 1] == 0 for i in range(len(periods) - 1))
    ends_at_one = periods[-1] == 1
    last_cs = compile_system(systems[-1])
    last_t = steps_detail[f"z{rho - 1}"]["T"]
    attractor_zero = advance_word(last_cs, word_from_bits(systems[-1].init), last_t) == 0
    ok = ok and divides and ends_at_one and attractor_zero

    detail = {
        "periods": periods,
        "divisor_chain": divides,
        "final_period_one": ends_at_one,
        "final_attractor_all_zero": attractor_zero,
        "systems": steps_detail,
    }
    return ClaimResult("chain", {"m": m}, ok, detail)


def _attractor_set(cs, word0: int, transient: int, period: int) -> frozenset[int]:
    word = advance_word(cs, word0, transient)
    step1 = make_stepper(cs)
    out = set()
    for _ in range(period):
        out.add(word)
        word = step1(word)
    return frozenset(out)


def check_basin(
    m: int,
    d: int,
    max_variants: int = 16,
    seed: int = 0,
    budget: int | None = None,
) -> ClaimResult:
    """Free-prefix insensitivity of z(., d).

    With e the lane minimizing beta_i and d < beta_e, the first
    beta_e - d window bits of z(., d) are free: every assignment must fall
    into the basin of the same attractor.  Enumerates all 2^(beta_e - d)
    assignments when that is small, otherwise samples max_variants of them.
    Raises HypothesisUnmet when d >= beta_e.
    """
    params = window_params(m)
    params.check_lane(d, "d")
    beta_e = min(params.beta_m)
    if d >= beta_e:
        raise HypothesisUnmet(f"d={d} >= min beta = {beta_e} at m={m}")
    n_free = beta_e - d

    system = cons.build_z(params, d)
    cs = compile_system(system)
    t_pred, p_pred = predicted_cycle(params, "z", d)
    search_budget = budget if budget is not None else _default_budget(
        t_pred, p_pred, params.h
    ) + 8 * params.h
    ref_rep = detect_cycle(cs, system.init, search_budget, predicted=(t_pred, p_pred))
    ref_att = _attractor_set(
        cs, word_from_bits(system.init), ref_rep.measured_transient, ref_rep.measured_period
    )

    total = 2**n_free
    if total <= max_variants:
        chosen = list(range(total))
        mode = "exhaustive"
    else:
        rng = random.Random(seed)
        chosen = sorted(rng.sample(range(total), max_variants))
        mode = "sampled"

    tail = system.init[n_free:]
    bad: list[int] = []
    for vid in chosen:
        prefix = tuple((vid >> (n_free - 1 - q)) & 1 for q in range(n_free))
        word0 = word_from_bits(prefix + tail)
        rep = detect_cycle(cs, prefix + tail, search_budget)
        att = _attractor_set(cs, word0, rep.measured_transient, rep.measured_period)
        if att != ref_att:
            bad.append(vid)

    detail = {
        "free_bits": n_free,
        "variants_total": total,
        "variants_checked": len(chosen),
        "mode": mode,
        "attractor_size": len(ref_att),
        "reference": _report_dict(ref_rep, "detect"),
        "mismatched_variants": bad,
    }
    return ClaimResult(
        "basin", {"m": m, "d": d}, bool(ref_rep.matches) and not bad, detail
    )


# ---------------------------------------------------------------------------
# composition claims


def _constant_lane(bit: int) -> RecurrenceSystem:
    """Memory-1 unit fixed at its own output: x(n) = 1[2 x(n-1) - 1]."""
    return RecurrenceSystem(
        memory=1, weights=(2,), threshold=1, init=(bit,), label=f"const{bit}"
    )


def _composed_cycle(bits: Sequence[int], budget: int = 10_000) -> CycleReport:
    composed = cons.shuffle_compose([_constant_lane(b) for b in bits])
    return detect_cycle(compile_system(composed), composed.init, budget)


def check_composition(claim: str, seed: int = 0, rounds: int = 100) -> ClaimResult:
    """Shuffles of fixed-point lanes: alternating patterns and the divisor rule."""
    if claim == "example1_period2":
        rep = _composed_cycle((0, 1, 0, 1, 0, 1))
        ok = rep.measured_transient == 0 and rep.measured_period == 2
        return ClaimResult(claim, {}, ok, {"T": rep.measured_transient, "P": rep.measured_period})
    if claim == "example1_period3":
        rep = _composed_cycle((0, 0, 1, 0, 0, 1))
        ok = rep.measured_transient == 0 and rep.measured_period == 3
        return ClaimResult(claim, {}, ok, {"T": rep.measured_transient, "P": rep.measured_period})
    if claim == "divisor_rule":
        rng = random.Random(seed)
        bad: list[dict] = []
        periods_seen: set[int] = set()
        for _ in range(rounds):
            r = rng.randint(2, 8)
            bits = tuple(rng.randint(0, 1) for _ in range(r))
            rep = _composed_cycle(bits)
            periods_seen.add(rep.measured_period)
            if rep.measured_transient != 0 or r % rep.measured_period != 0:
                bad.append({"bits": list(bits), "T": rep.measured_transient, "P": rep.measured_period})
        detail = {"rounds": rounds, "seed": seed, "periods_seen": sorted(periods_seen), "violations": bad}
        return ClaimResult(claim, {"seed": seed}, not bad, detail)
    raise ValueError(f"unknown composition claim {claim!r}")


# ---------------------------------------------------------------------------
# dispatch and grids


_STATIC_RUNNERS = {
    "window_param_bounds": _run_window_param_bounds,
    "prop1": _run_prop1,
    "prop2": _run_prop2,
    "pos_disjoint": _run_pos_disjoint,
    "b0_methods_agree": _run_b0_methods_agree,
    "chain_equals_direct": _run_chain_equals_direct,
}

_DYNAMIC_RUNNERS = {
    "x_cycle": _run_x_cycle,
    "v_fixed": _run_v_fixed,
    "sum_bounds": _run_sum_bounds,
    "s1_range": _run_s1_range,
    "y_cycle": _run_y_cycle,
    "y_deshuffle": _run_y_deshuffle,
    "w_cycle": _run_w_cycle,
    "z_summary": _run_z_summary,
}


def check_static(claim: str, m: int) -> ClaimResult:
    if claim not in _STATIC_RUNNERS:
        raise ValueError(f"not a static claim: {claim!r}")
    return _STATIC_RUNNERS[claim](m)


def check_dynamics(claim: str, m: int, d: int | None = None, budget: int | None = None) -> ClaimResult:
    if claim not in _DYNAMIC_RUNNERS:
        raise ValueError(f"not a dynamic claim: {claim!r}")
    if claim in ("w_cycle", "z_summary"):
        if d is None:
            raise ValueError(f"{claim} needs a bifurcation step d")
        return _DYNAMIC_RUNNERS[claim](m, d=d, budget=budget)
    return _DYNAMIC_RUNNERS[claim](m, budget=budget)


def _measure_feasible(params: WindowParams, family: str, index: int | None = None) -> bool:
    t, p = predicted_cycle(params, family, index)
    return t + p <= MEASURE_CUTOFF


def claim_instances(claim: str, m: int) -> list[dict]:
    """The (m, d) grid actually run for one claim at one scale.

    Returns a list of keyword dicts (possibly empty when every instance is
    beyond MEASURE_CUTOFF / TRACE_CUTOFF, e.g. the full y cycle at m = 21).
    """
    params = window_params(m)
    rho = params.rho
    if claim in STATIC_CLAIMS or claim in ("x_cycle", "v_fixed", "sum_bounds", "s1_range", "y_deshuffle"):
        return [{}]
    if claim == "y_cycle":
        return [{}] if _measure_feasible(params, "y") else []
    if claim == "w_cycle":
        return [{"d": d} for d in range(rho) if _measure_feasible(params, "w", d)]
    if claim == "z_summary":
        return [{"d": d} for d in range(rho) if _measure_feasible(params, "z", d)]
    if claim == "phases":
        out = []
        for d in range(rho):
            l0, l1, _ = cycle_lengths(params, d)
            l4 = l1 + params.h + d + 1 - rho * (1 + params.primes[d])
            if l4 + min(l0, 10_000) + 2 * params.h <= TRACE_CUTOFF:
                out.append({"d": d})
        return out
    if claim == "chain":
        if not _measure_feasible(params, "y"):
            return []
        if all(_measure_feasible(params, "z", d) for d in range(rho)):
            return [{}]
        return []
    if claim == "basin":
        beta_e = min(params.beta_m)
        out = []
        for d in range(rho):
            if d >= beta_e:
                continue
            t, p = predicted_cycle(params, "z", d)
            if t + p <= DETECT_CUTOFF:
                out.append({"d": d})
        return out
    raise ValueError(f"unknown claim {claim!r}")


def _run_instance(claim: str, m: int, seed: int, budget: int | None, **kw) -> ClaimResult:
    if claim in STATIC_CLAIMS:
        return check_static(claim, m)
    if claim in DYNAMIC_CLAIMS:
        return check_dynamics(claim, m, d=kw.get("d"), budget=budget)
    if claim == "phases":
        return check_phases(m, kw["d"], budget=budget)
    if claim == "chain":
        return check_chain(m, budget=budget)
    if claim == "basin":
        return check_basin(m, kw["d"], max_variants=kw.get("max_variants", 8), seed=seed, budget=budget)
    raise ValueError(f"unknown claim {claim!r}")


def run_claims(
    ms: Sequence[int] = (6, 11),
    claims: Sequence[str] | None = None,
    seed: int = 0,
    budget: int | None = None,
) -> list[ClaimResult]:
    """Run a claim selection over a scale grid; the shared entry point.

    Composition claims are scale-free and run once.  Search failures
    (BudgetExceeded) and refuted predictions (PredictionFailed) become
    failing results rather than exceptions, so one bad instance cannot take
    down a whole report.
    """
    selected = list(claims) if claims is not None else list(ALL_CLAIMS)
    unknown = sorted(set(selected) - set(ALL_CLAIMS))
    if unknown:
        raise ValueError(f"unknown claims: {', '.join(unknown)}")
    results: list[ClaimResult] = []
    for claim in selected:
        if claim in COMPOSITION_CLAIMS:
            results.append(check_composition(claim, seed=seed))
            continue
        for m in ms:
            try:
                instances = claim_instances(claim, m)
            except RhoTooSmall as exc:
                results.append(ClaimResult(claim, {"m": m}, False, {"error": str(exc)}))
                continue
            for kw in instances:
                ident = {"m": m} | {k: v for k, v in kw.items() if k == "d"}
                try:
                    results.append(_run_instance(claim, m, seed, budget, **kw))
                except BudgetExceeded as exc:
                    results.append(
                        ClaimResult(
                            claim,
                            ident,
                            False,
                            {"error": "BudgetExceeded", "steps": exc.steps, "budget": exc.budget},
                        )
                    )
                except PredictionFailed as exc:
                    results.append(
                        ClaimResult(
                            claim,
                            ident,
                            False,
                            {"error": "PredictionFailed", "check": exc.check} | exc.detail,
                        )
                    )
    return results
