import math

import numpy as np
import pytest

from driventls import (
    ClassificationError,
    DomainError,
    FloquetMode,
    PropagationConfig,
    QuasienergyPair,
    SystemParams,
    analytic_floquet_state,
    analytic_modes,
    bessel_j,
    build_modes,
    classify_parity,
    exact_quasienergies,
    extract_floquet,
    floquet_mode_at,
    fold_quasienergy,
    j0_zero,
    match_modes,
    mode_parity_sign,
    one_period_propagator,
    propagate,
    quasienergy_distance,
    symmetry_classify,
    tau_grid,
)

TWO_PI = 2.0 * math.pi


def _params(delta, zeta):
    return SystemParams.from_zeta(delta=delta, zeta=zeta)


def test_fold_examples():
    assert fold_quasienergy(0.0) == 0.0
    assert fold_quasienergy(0.3) == pytest.approx(0.3, abs=1e-15)
    assert fold_quasienergy(0.75) == pytest.approx(-0.25, abs=1e-15)
    assert fold_quasienergy(1.0) == 0.0
    assert fold_quasienergy(0.5) == 0.5
    assert fold_quasienergy(-0.5) == 0.5
    assert fold_quasienergy(-0.3) == pytest.approx(-0.3, abs=1e-15)


def test_fold_shift_covariance():
    for x in (0.31, -0.47, 0.5):
        for n in (-2, 1, 5):
            assert fold_quasienergy(x + n) == pytest.approx(fold_quasienergy(x), abs=1e-12)


def test_fold_rejects_non_finite():
    with pytest.raises(DomainError):
        fold_quasienergy(math.nan)
    with pytest.raises(DomainError):
        fold_quasienergy(math.inf)


def test_quasienergy_distance():
    assert quasienergy_distance(0.4, -0.4) == pytest.approx(0.2, abs=1e-15)
    assert quasienergy_distance(0.1, 0.1) == 0.0
    assert quasienergy_distance(1.3, 0.3) == pytest.approx(0.0, abs=1e-15)


def test_pair_labels():
    pair = QuasienergyPair(-0.1, 0.1)
    assert pair.for_label(1) == -0.1
    assert pair.for_label(2) == 0.1
    with pytest.raises(DomainError):
        pair.for_label(0)


def test_mode_validation_and_immutability():
    samples = np.tile([1.0 + 0j, 0.0j], (64, 1))
    mode = FloquetMode(1, 0.0, samples, "symmetric", "exact")
    assert mode.n_samples == 64
    with pytest.raises(ValueError):
        mode.samples[0, 0] = 2.0
    with pytest.raises(DomainError):
        FloquetMode(1, 0.0, np.zeros((64, 3), dtype=complex), "symmetric", "exact")
    with pytest.raises(DomainError):
        FloquetMode(1, 0.0, np.zeros(4, dtype=complex), "symmetric", "exact")


def test_extract_identity_monodromy():
    pair, v1, v2 = extract_floquet(np.eye(2, dtype=complex))
    assert pair.eps1 == 0.0 and pair.eps2 == 0.0
    assert np.allclose(v1, [1.0, 0.0], atol=1e-14)
    assert np.allclose(v2, [0.0, 1.0], atol=1e-14)


def test_extract_diagonal_monodromy():
    theta = 0.1
    u = np.diag([np.exp(1j * theta), np.exp(-1j * theta)])
    pair, v1, v2 = extract_floquet(u)
    assert pair.eps1 == pytest.approx(-theta / TWO_PI, abs=1e-14)
    assert pair.eps2 == pytest.approx(theta / TWO_PI, abs=1e-14)
    assert np.allclose(v1, [1.0, 0.0], atol=1e-14)
    assert np.allclose(v2, [0.0, 1.0], atol=1e-14)


def test_extract_rejects_bad_input():
    with pytest.raises(DomainError):
        extract_floquet(np.eye(3, dtype=complex))
    with pytest.raises(DomainError):
        extract_floquet(2.0 * np.eye(2, dtype=complex))


def test_extract_orthonormal_and_phase_fixed():
    u = one_period_propagator(_params(0.1, math.pi))
    _, v1, v2 = extract_floquet(u)
    assert abs(np.linalg.norm(v1) - 1.0) <= 1e-12
    assert abs(np.linalg.norm(v2) - 1.0) <= 1e-12
    assert abs(np.conj(v1) @ v2) <= 1e-12
    for v in (v1, v2):
        big = v[np.argmax(np.abs(v))]
        assert abs(big.imag) <= 1e-12
        assert big.real > 0.0


def test_extract_monodromy_quasienergies():
    pair, _, _ = extract_floquet(one_period_propagator(_params(0.1, math.pi)))
    target = 0.1 * abs(bessel_j(0, math.pi)) / 2.0
    # the ground-dominated vector carries the positive branch here because
    # the zero-order Bessel factor has gone negative
    assert pair.eps1 == pytest.approx(target, abs=1e-4)
    assert pair.eps2 == pytest.approx(-target, abs=1e-4)


def test_mode_parity_sign_splits_free_modes():
    p = SystemParams(delta=0.1, rabi=0.0)
    half = propagate(p, 0.0, math.pi)
    s_ground = mode_parity_sign(np.array([1.0, 0.0j]), -0.05, half)
    s_excited = mode_parity_sign(np.array([0.0j, 1.0]), 0.05, half)
    assert s_ground == pytest.approx(1.0, abs=1e-10)
    assert s_excited == pytest.approx(-1.0, abs=1e-10)


def test_floquet_mode_periodicity():
    p = _params(0.1, 2.0)
    pair, v1, _ = extract_floquet(one_period_propagator(p))
    closed = floquet_mode_at(p, v1, pair.eps1, TWO_PI)
    assert np.max(np.abs(closed - v1)) <= 1e-8


def test_floquet_mode_matches_analytic_interior():
    p = _params(0.1, math.pi / 2)
    grid_modes = build_modes(p, n_grid=64)
    pair = QuasienergyPair(grid_modes[0].quasienergy, grid_modes[1].quasienergy)
    v1 = grid_modes[0].samples[0]
    probe = floquet_mode_at(p, v1, pair.eps1, math.pi / 4)
    ref = analytic_floquet_state(p, 1, math.pi / 4)
    fidelity = abs(np.conj(probe) @ ref) ** 2
    assert fidelity >= 1.0 - 10 * 0.1**2


def test_classify_parity_basics():
    const_ground = np.tile([1.0 + 0j, 0.0j], (64, 1))
    assert classify_parity(const_ground) == "symmetric"
    const_excited = np.tile([0.0j, 1.0 + 0j], (64, 1))
    assert classify_parity(const_excited) == "antisymmetric"


def test_classify_parity_replica_flips():
    p = _params(0.1, math.pi)
    m1, m2 = build_modes(p, n_grid=64)
    taus = tau_grid(64)
    replica = np.exp(1j * taus)[:, None] * m1.samples
    assert classify_parity(replica) == "antisymmetric"
    replica2 = np.exp(-1j * taus)[:, None] * m2.samples
    assert classify_parity(replica2) == "symmetric"


def test_classify_parity_rejects_mixture():
    p = _params(0.1, math.pi)
    m1, m2 = build_modes(p, n_grid=64)
    blend = (m1.samples + m2.samples) / math.sqrt(2.0)
    with pytest.raises(ClassificationError):
        classify_parity(blend)


def test_classify_parity_origin_invariance():
    p = _params(0.1, 2.4)
    m1, m2 = build_modes(p, n_grid=64)
    for shift in (5, 16, 33):
        assert classify_parity(np.roll(m1.samples, shift, axis=0)) == "symmetric"
        assert classify_parity(np.roll(m2.samples, shift, axis=0)) == "antisymmetric"


def test_classify_parity_needs_even_grid():
    with pytest.raises(DomainError):
        classify_parity(np.ones((65, 2), dtype=complex))


def test_build_modes_zero_drive():
    p = SystemParams(delta=0.1, rabi=0.0)
    m1, m2 = build_modes(p, n_grid=64)
    assert m1.parity == "symmetric" and m2.parity == "antisymmetric"
    assert m1.source == "exact"
    assert m1.quasienergy == pytest.approx(-0.05, abs=1e-10)
    assert m2.quasienergy == pytest.approx(0.05, abs=1e-10)
    assert np.max(np.abs(m1.samples - np.array([1.0, 0.0]))) <= 1e-12
    assert np.max(np.abs(m2.samples - np.array([0.0, 1.0]))) <= 1e-12


def test_build_modes_norms_and_orthogonality():
    p = _params(0.1, math.pi)
    m1, m2 = build_modes(p, n_grid=128)
    for m in (m1, m2):
        assert np.max(np.abs(np.linalg.norm(m.samples, axis=1) - 1.0)) <= 1e-9
    cross = np.abs(np.sum(np.conj(m1.samples) * m2.samples, axis=1))
    assert np.max(cross) <= 1e-8
    assert symmetry_classify(m1) == "symmetric"
    assert symmetry_classify(m2) == "antisymmetric"


def test_build_modes_weight_curve():
    # ground-state weight of the symmetric mode follows cos^2 of the
    # accumulated pulse area at leading order
    p = _params(0.1, math.pi)
    m1, _ = build_modes(p, n_grid=64)
    taus = tau_grid(64)
    expected = np.cos(0.5 * math.pi * np.sin(taus)) ** 2
    got = np.abs(m1.samples[:, 0]) ** 2
    assert np.max(np.abs(got - expected)) <= 10 * 0.1**2


def test_build_modes_at_crossing():
    p = _params(0.1, j0_zero(1))
    m1, m2 = build_modes(p, n_grid=64)
    assert m1.parity != m2.parity
    assert abs(m1.quasienergy) <= 5 * 0.1**2
    assert abs(m2.quasienergy) <= 5 * 0.1**2


def test_build_modes_deep_degenerate_split():
    # tiny detuning at the crossing drives the monodromy spectrum into the
    # degenerate branch, which must still split the modes by symmetry
    p = _params(1e-5, j0_zero(1))
    m1, m2 = build_modes(p, n_grid=64)
    assert m1.parity == "symmetric" and m2.parity == "antisymmetric"
    assert abs(m1.quasienergy) <= 1e-9
    assert abs(m2.quasienergy) <= 1e-9


def test_build_modes_grid_validation():
    p = _params(0.1, 1.0)
    with pytest.raises(DomainError):
        build_modes(p, n_grid=32)
    with pytest.raises(DomainError):
        build_modes(p, n_grid=100)
    with pytest.raises(DomainError):
        build_modes(p, PropagationConfig(steps_per_period=256), n_grid=512)


def test_exact_quasienergies_free_limit():
    pair = exact_quasienergies(SystemParams(delta=0.1, rabi=0.0))
    assert pair.eps1 == pytest.approx(-0.05, abs=1e-10)
    assert pair.eps2 == pytest.approx(0.05, abs=1e-10)


def test_exact_quasienergies_sign_flip():
    pair = exact_quasienergies(_params(0.1, math.pi))
    assert pair.eps1 > 0.0 > pair.eps2
    assert pair.eps1 == pytest.approx(0.015212108882204693, abs=1e-3)
    assert fold_quasienergy(pair.eps1 + pair.eps2) == pytest.approx(0.0, abs=1e-9)


def test_exact_quasienergies_match_build_modes():
    p = _params(0.05, 2.0)
    pair = exact_quasienergies(p)
    m1, m2 = build_modes(p, n_grid=64)
    assert pair.eps1 == pytest.approx(m1.quasienergy, abs=1e-10)
    assert pair.eps2 == pytest.approx(m2.quasienergy, abs=1e-10)


def _constant_mode(label, vec, parity, eps=0.0, n=64):
    samples = np.tile(np.asarray(vec, dtype=complex), (n, 1))
    return FloquetMode(label, eps, samples, parity, "exact")


def test_match_modes_identity():
    p = SystemParams(delta=0.1, rabi=0.0)
    exact = build_modes(p, n_grid=64)
    match = match_modes(exact, exact)
    assert match.pairs == ((1, 1), (2, 2))
    assert match.overlaps[0] == pytest.approx(1.0, abs=1e-12)
    assert match.min_pointwise_fidelity == pytest.approx(1.0, abs=1e-12)
    assert not match.degenerate


def test_match_modes_exact_vs_analytic():
    p = _params(0.02, math.pi / 2)
    match = match_modes(build_modes(p, n_grid=128), analytic_modes(p, n_grid=128))
    assert match.pairs == ((1, 1), (2, 2))
    assert min(match.overlaps) >= 1.0 - 10 * 0.02**2
    assert match.min_pointwise_fidelity >= 1.0 - 10 * 0.02**2
    assert max(match.quasienergy_gaps) <= 2e-3


def test_match_modes_at_crossing_is_deterministic():
    p = _params(0.02, j0_zero(1))
    exact = build_modes(p, n_grid=128)
    analytic = analytic_modes(p, n_grid=128)
    match = match_modes(exact, analytic)
    assert match.pairs == ((1, 1), (2, 2))
    assert min(match.overlaps) >= 1.0 - 10 * 0.02**2
    assert not match.degenerate


def test_match_modes_crossed_pairing():
    p = _params(0.1, math.pi)
    m1, m2 = build_modes(p, n_grid=64)
    match = match_modes((m1, m2), (m2, m1))
    assert match.pairs == ((1, 1), (2, 2))
    assert match.resolved_by == "overlap"
    assert min(match.overlaps) >= 0.99


def test_match_modes_parity_fallback():
    inv = 1.0 / math.sqrt(2.0)
    first = (
        _constant_mode(1, [1.0, 0.0], "symmetric"),
        _constant_mode(2, [0.0, 1.0], "antisymmetric"),
    )
    second = (
        _constant_mode(1, [inv, inv], "symmetric"),
        _constant_mode(2, [inv, -inv], "antisymmetric"),
    )
    match = match_modes(first, second)
    assert match.resolved_by == "parity"
    assert match.pairs == ((1, 1), (2, 2))
    assert not match.degenerate
    # tuple order does not matter: parity re-derives the same label pairing
    swapped = (second[1], second[0])
    match2 = match_modes(first, swapped)
    assert match2.resolved_by == "parity"
    assert match2.pairs == ((1, 1), (2, 2))
    # labels assigned against parity do get crossed
    mislabeled = (
        _constant_mode(1, [inv, inv], "antisymmetric"),
        _constant_mode(2, [inv, -inv], "symmetric"),
    )
    match3 = match_modes(first, mislabeled)
    assert match3.resolved_by == "parity"
    assert match3.pairs == ((1, 2), (2, 1))


def test_match_modes_degenerate_flag():
    inv = 1.0 / math.sqrt(2.0)
    first = (
        _constant_mode(1, [1.0, 0.0], "symmetric"),
        _constant_mode(2, [0.0, 1.0], "symmetric"),
    )
    second = (
        _constant_mode(1, [inv, inv], "symmetric"),
        _constant_mode(2, [inv, -inv], "symmetric"),
    )
    match = match_modes(first, second)
    assert match.degenerate
    assert match.resolved_by == "overlap"


def test_match_modes_grid_mismatch():
    a = (
        _constant_mode(1, [1.0, 0.0], "symmetric", n=64),
        _constant_mode(2, [0.0, 1.0], "antisymmetric", n=64),
    )
    b = (
        _constant_mode(1, [1.0, 0.0], "symmetric", n=128),
        _constant_mode(2, [0.0, 1.0], "antisymmetric", n=128),
    )
    with pytest.raises(DomainError):
        match_modes(a, b)
