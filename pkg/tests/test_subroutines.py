"""Tests for variable-time subroutines and their stopping profiles."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from vtsearch.subroutines import (BlockSchedule, StoppingProfile,
                                  SubroutineSpec, ZeroErrorViolation,
                                  build_block_subroutine, cascade_profile,
                                  profile_moments, random_subroutine,
                                  run_block_algorithm, run_subroutine,
                                  stopping_profile, validate)


def identity_spec(n=2, t=3, w=4):
    """All steps are identities; everything halts at the final step."""
    us = np.broadcast_to(np.eye(2 * w, dtype=complex), (n, t, 2 * w, 2 * w)).copy()
    partition = tuple(() for _ in range(t - 1)) + (tuple(range(w)),)
    return SubroutineSpec(num_inputs=n, num_steps=t, workspace_size=w,
                          partition=partition, unitaries=us,
                          outputs=(0,) * n)


def test_identity_spec_validates():
    report = validate(identity_spec())
    assert report.passed


def test_halted_space_violation_is_named():
    spec = identity_spec(n=1, t=2, w=2)
    us = spec.unitaries.copy()
    # halt label 0 at step 1, then have step 2 rotate it out of the halted space
    rot = np.eye(4, dtype=complex)
    c, s = math.cos(0.3), math.sin(0.3)
    rot[0, 0], rot[0, 1], rot[1, 0], rot[1, 1] = c, -s, s, c
    us[0, 1] = rot
    bad = SubroutineSpec(num_inputs=1, num_steps=2, workspace_size=2,
                         partition=((0,), (1,)), unitaries=us, outputs=(0,))
    report = validate(bad)
    assert not report.passed
    check = {c.name: c for c in report.checks}["halted_space_fixed"]
    assert not check.passed and "step 2" in check.detail and "input 0" in check.detail


def test_stopping_profile_point_mass_at_final_step():
    spec = identity_spec(n=1, t=3, w=2)
    p = stopping_profile(spec, 0)
    assert np.allclose(p.pmf, [0.0, 0.0, 1.0], atol=1e-14)
    assert p.survival(3) == pytest.approx(1.0)
    assert p.survival(0) == 1.0


def test_profile_moments_examples():
    point = StoppingProfile(pmf=np.array([0.0, 1.0]), cdf=np.array([0.0, 1.0]))
    assert profile_moments(point) == pytest.approx((2.0, 4.0, math.log(2.0)))
    half = StoppingProfile(pmf=np.array([0.5, 0.0, 0.5]),
                           cdf=np.array([0.5, 0.5, 1.0]))
    m1, m2, mlog = profile_moments(half)
    assert (m1, m2) == pytest.approx((2.0, 5.0))
    assert mlog == pytest.approx(math.log(3.0) / 2.0)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_variance_nonnegative(seed):
    spec = random_subroutine(seed, num_inputs=2, num_steps=3, workspace_size=4)
    for i in range(2):
        m1, m2, _ = stopping_profile(spec, i).moments()
        assert m2 >= m1 ** 2 - 1e-12


def test_cascade_oracle_agrees_with_statevector():
    spec = random_subroutine(7, num_inputs=4, num_steps=4, workspace_size=4)
    for i in range(4):
        sv = stopping_profile(spec, i)
        dm = cascade_profile(spec, i)
        assert abs(sv.pmf.sum() - 1.0) < 1e-12
        assert np.max(np.abs(sv.pmf - dm.pmf)) < 1e-10
        assert np.all(np.diff(sv.cdf) >= -1e-12)


def test_run_subroutine_answers():
    spec = random_subroutine(3, num_inputs=3, num_steps=2, workspace_size=3,
                             marked=(1,))
    for i in range(3):
        answer, state = run_subroutine(spec, i)
        assert answer == spec.outputs[i]
        assert abs(np.linalg.norm(state) - 1.0) < 1e-12


def test_run_subroutine_detects_zero_error_violation():
    spec = random_subroutine(3, num_inputs=2, num_steps=2, workspace_size=2)
    lied = SubroutineSpec(num_inputs=2, num_steps=2, workspace_size=2,
                          partition=spec.partition, unitaries=spec.unitaries,
                          outputs=(1, 0))
    with pytest.raises(ZeroErrorViolation):
        run_subroutine(lied, 0)


def test_random_subroutine_deterministic_in_seed():
    a = random_subroutine(42, 2, 3, 4, marked=(0,))
    b = random_subroutine(42, 2, 3, 4, marked=(0,))
    assert a.to_json() == b.to_json()


def test_random_subroutine_all_mass_final_cell():
    fracs = [0.0, 0.0, 1.0]
    spec = random_subroutine(5, 2, 3, 4, halting_fractions=fracs)
    for i in range(2):
        p = stopping_profile(spec, i)
        assert np.allclose(p.pmf, [0.0, 0.0, 1.0], atol=1e-12)


def test_generator_soundness_sweep():
    """1000 random specs across the size grid all validate."""
    grid = [(n, t, w) for n in (2, 4) for t in (2, 4, 8) for w in (2, 4)]
    seeds_per_cell = -(-1000 // len(grid))  # ceil
    count = 0
    for n, t, w in grid:
        for s in range(seeds_per_cell):
            if count >= 1000:
                break
            marked = (0,) if (s + n) % 2 else ()
            spec = random_subroutine(1000 * s + count, n, t, w, marked=marked)
            assert validate(spec).passed, (n, t, w, s)
            count += 1
    assert count == 1000


def test_json_round_trip_bit_faithful():
    spec = random_subroutine(9, 2, 2, 3, marked=(1,))
    text = spec.to_json()
    back = SubroutineSpec.from_json(text)
    assert back.to_json() == text
    assert np.array_equal(back.unitaries, spec.unitaries)
    assert back.partition == spec.partition and back.outputs == spec.outputs


# ---------------------------------------------------------------------------
# Block-structured subroutines
# ---------------------------------------------------------------------------

def _random_block_schedule(seed, blocks=(2, 2), zp=2, n=2, projector_rank=1):
    """Zero-error block algorithm: generic on the workspace, trivial answer.

    The steps act as identity on the answer register (so the claimed
    output bit is exact); the variable-time structure comes entirely
    from the workspace dynamics and the success measurement.
    """
    import scipy.stats
    rng = np.random.default_rng(seed)
    t = sum(blocks)
    us = np.empty((n, t, 2 * zp, 2 * zp), dtype=complex)
    for i in range(n):
        for s in range(t):
            us[i, s] = np.kron(np.eye(2),
                               scipy.stats.unitary_group.rvs(zp, random_state=rng))
    if projector_rank >= zp:
        meas = np.eye(zp)
    else:
        q = np.linalg.qr(rng.normal(size=(zp, projector_rank)))[0]
        meas = q @ q.conj().T
    return BlockSchedule(block_lengths=blocks, inner_workspace_size=zp,
                         step_unitaries=us, measurement=meas)


def test_single_block_halts_only_at_end():
    sched = _random_block_schedule(1, blocks=(3,), projector_rank=1)
    spec = build_block_subroutine(sched)
    assert validate(spec).passed
    for t in range(spec.num_steps - 1):
        assert spec.partition[t] == ()
    for i in range(spec.num_inputs):
        p = stopping_profile(spec, i)
        assert p.pmf[-1] == pytest.approx(1.0, abs=1e-10)


def test_always_succeeding_measurement_halts_after_first_block():
    sched = _random_block_schedule(2, blocks=(2, 2), projector_rank=2)
    spec = build_block_subroutine(sched)
    assert validate(spec).passed
    for i in range(spec.num_inputs):
        p = stopping_profile(spec, i)
        assert p.pmf[1] == pytest.approx(1.0, abs=1e-10)  # t = N_1 = 2


def test_generic_block_subroutine_matches_cascade_and_reference():
    sched = _random_block_schedule(3, blocks=(2, 2), projector_rank=1)
    spec = build_block_subroutine(sched)
    assert validate(spec).passed
    for i in range(spec.num_inputs):
        sv = stopping_profile(spec, i)
        dm = cascade_profile(spec, i)
        assert np.max(np.abs(sv.pmf - dm.pmf)) < 1e-10
        # block-level halting mass agrees with the unaugmented reference run
        ref = run_block_algorithm(sched, i)
        ends = np.cumsum(sched.block_lengths)
        got = [sv.pmf[: ends[0]].sum(), sv.pmf[ends[0]:].sum()]
        assert np.max(np.abs(np.asarray(got) - ref)) < 1e-10
