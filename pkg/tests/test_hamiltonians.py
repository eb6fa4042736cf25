import math

import numpy as np
import pytest

from nemskerr.fock import (
    HilbertSpace,
    basis_state,
    beam_splitter_unitary,
    coherent_amplitudes,
    commutator,
    expectation,
    make_space,
    number_op,
    product_state,
    qubit_operator,
)
from nemskerr.hamiltonians import (
    DispersiveParams,
    ModelParams,
    PhysicalParams,
    RegimeWarning,
    build_dispersive,
    build_full_lab,
    build_kerr_effective,
    build_normal_mode,
    build_rwa,
    build_rwa_static,
    derive_qubit_params,
)

PHYS = PhysicalParams(
    e_c=1.0, e_j=0.5, n_g=0.3, phi_over_phi0=0.1,
    v_g=2.0, c_g1=0.1, c_g2=0.2, c_sigma=1.0, d_1=1.0, d_2=2.0, m=1.0, omega=6.0,
)


def _mp(omega=11.0, omega0=0.0, delta_bar=1.0, lam1=1.0, lam2=1.0, g=5.0, omega_e=1.0):
    return ModelParams(
        omega=omega, omega0=omega0, delta_bar=delta_bar,
        lambda1=lam1, lambda2=lam2, g=g, omega_e=omega_e,
    )


def _quiet_rwa(mp, s):
    # structural tests run outside the physical regime on purpose
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        return build_rwa(mp, s)


def test_charge_degeneracy_point():
    # n_g = 1/2 zeroes the charging term; flux past the half-quantum makes
    # the Josephson term positive, so theta = +pi/2 and sin(theta) = 1
    p = PhysicalParams(
        e_c=1.0, e_j=0.5, n_g=0.5, phi_over_phi0=0.6,
        v_g=2.0, c_g1=0.1, c_g2=0.2, c_sigma=1.0, d_1=1.0, d_2=2.0, m=1.0, omega=6.0,
    )
    mp = derive_qubit_params(p)
    assert mp.omega0 == 0.0
    assert abs(mp.theta - math.pi / 2) < 1e-12
    assert abs(mp.sin_theta - 1.0) < 1e-12


def test_flux_sweet_spot_kills_josephson_term():
    p = PhysicalParams(
        e_c=1.0, e_j=0.5, n_g=0.3, phi_over_phi0=0.5,
        v_g=2.0, c_g1=0.1, c_g2=0.2, c_sigma=1.0, d_1=1.0, d_2=2.0, m=1.0, omega=6.0,
    )
    mp = derive_qubit_params(p)
    assert abs(mp.delta_bar) < 1e-15
    assert abs(mp.sin_theta) < 1e-15


def test_coupling_scales_inversely_with_distance():
    mp = derive_qubit_params(PHYS)
    halved = PhysicalParams(
        e_c=1.0, e_j=0.5, n_g=0.3, phi_over_phi0=0.1,
        v_g=2.0, c_g1=0.1, c_g2=0.2, c_sigma=1.0, d_1=0.5, d_2=2.0, m=1.0, omega=6.0,
    )
    mp2 = derive_qubit_params(halved)
    assert abs(mp2.lambda1 - 2.0 * mp.lambda1) < 1e-14
    assert abs(mp2.lambda2 - mp.lambda2) < 1e-14


def test_degenerate_qubit_rejected():
    with pytest.raises(ValueError, match="degenerate"):
        ModelParams(omega=1.0, omega0=0.0, delta_bar=0.0, lambda1=0.1, lambda2=0.1, g=0.0, omega_e=1.0)


def test_resonant_drive_default():
    mp = derive_qubit_params(PHYS, g=0.2)
    assert abs(mp.omega_bar - mp.omega_e) < 1e-12
    assert abs(mp.cos_theta**2 + mp.sin_theta**2 - 1.0) < 1e-12


def test_full_lab_decoupled_spectrum():
    s = make_space(3, 3, True)
    mp = ModelParams(omega=2.0, omega0=1.0, delta_bar=0.0, lambda1=0.0, lambda2=0.0, g=0.0, omega_e=1.0)
    h = build_full_lab(mp, s)(0.0).matrix
    got = np.sort(np.linalg.eigvalsh(h))
    expected = np.sort(
        [2.0 * (n + m) + sign * 0.5 for n in range(3) for m in range(3) for sign in (+1, -1)]
    )
    assert np.allclose(got, expected, atol=1e-12)


def test_full_lab_hermitian_and_periodic():
    s = make_space(3, 3, True)
    mp = _mp(omega=2.0, omega0=1.0, delta_bar=0.5, lam1=0.2, lam2=0.1, g=0.3, omega_e=1.5)
    hfun = build_full_lab(mp, s)
    for t in (0.0, 0.3 / mp.omega_e, 1.7 / mp.omega_e):
        m = hfun(t).matrix
        assert np.abs(m - m.conj().T).max() < 1e-12
    period = 2 * math.pi / mp.omega_e
    assert np.abs(hfun(0.4).matrix - hfun(0.4 + period).matrix).max() < 1e-10


def test_rwa_qubit_decouples_at_zero_mixing():
    s = make_space(3, 3, True)
    mp = ModelParams(omega=11.0, omega0=1.0, delta_bar=0.0, lambda1=0.4, lambda2=0.4, g=0.02, omega_e=1.0)
    from nemskerr.fock import annihilation

    h = _quiet_rwa(mp, s)(0.7).matrix
    a = annihilation(s, 0).matrix
    drive = mp.g * a * np.exp(-1j * mp.delta * 0.7)
    assert np.abs(h - (drive + drive.conj().T)).max() < 1e-12


def test_rwa_coupling_conserves_total_excitation():
    # with the drive off and delta = 0 the static coupling commutes with
    # n_a + n_b + qubit excitation
    s = make_space(4, 4, True)
    mp = ModelParams(omega=1.0, omega0=0.0, delta_bar=1.0, lambda1=0.3, lambda2=0.2, g=0.0, omega_e=1.0)
    h = _quiet_rwa(mp, s)(0.31)
    from nemskerr.fock import annihilation

    n_tot = (
        number_op(s, 0)
        + number_op(s, 1)
        + qubit_operator(s, "plus") @ qubit_operator(s, "minus")
    )
    assert np.abs(commutator(h, n_tot).matrix).max() < 1e-12


def test_rwa_hermitian_at_sampled_times():
    s = make_space(3, 3, True)
    mp = _mp()
    hfun = _quiet_rwa(mp, s)
    for t in (0.0, 0.17, 2.9):
        m = hfun(t).matrix
        assert np.abs(m - m.conj().T).max() < 1e-12


def test_rwa_rejects_off_resonant_frame():
    s = make_space(3, 3, True)
    mp = ModelParams(omega=11.0, omega0=0.0, delta_bar=1.0, lambda1=0.1, lambda2=0.1, g=1.0, omega_e=1.3)
    with pytest.raises(ValueError, match="omega_bar"):
        build_rwa(mp, s)
    with pytest.raises(ValueError, match="omega_bar"):
        build_rwa_static(mp, s)


def test_rwa_warns_outside_regime():
    s = make_space(3, 3, True)
    mp = ModelParams(omega=2.0, omega0=0.0, delta_bar=1.0, lambda1=0.9, lambda2=0.9, g=1.0, omega_e=1.0)
    with pytest.warns(RegimeWarning):
        build_rwa(mp, s)


def test_dispersive_constants_frozen_example():
    # lambda = 1, delta = 100, sin(theta) = 1, g = 50; the drive is marginal
    # against the detuning here, so the regime warning is expected
    import warnings

    s = make_space(3, 3, True)
    mp = ModelParams(omega=101.0, omega0=0.0, delta_bar=1.0, lambda1=1.0, lambda2=1.0, g=50.0, omega_e=1.0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        _, dp = build_dispersive(mp, s)
    assert abs(dp.Omega - (-0.01)) < 1e-12
    assert abs(dp.chi - (-0.01)) < 1e-12
    assert abs(dp.Delta - 0.5) < 1e-12
    assert abs(dp.r - (-0.01)) < 1e-12
    assert abs(dp.zeta - (-0.02)) < 1e-12
    assert abs(dp.mu - 4e-4) < 1e-12


def test_dispersive_equal_couplings_collapse():
    s = make_space(3, 3, True)
    mp = ModelParams(omega=101.0, omega0=0.0, delta_bar=1.0, lambda1=0.7, lambda2=-0.7, g=10.0, omega_e=1.0)
    _, dp = build_dispersive(mp, s)
    assert abs(dp.Omega - dp.chi) < 1e-15
    assert abs(dp.zeta - 2.0 * dp.Omega) < 1e-15


def test_dispersive_no_drive_no_sigma_x():
    s = make_space(3, 3, True)
    mp = ModelParams(omega=101.0, omega0=0.0, delta_bar=1.0, lambda1=0.7, lambda2=0.7, g=0.0, omega_e=1.0)
    _, dp = build_dispersive(mp, s)
    assert dp.Delta == 0.0
    with pytest.raises(ValueError, match="undefined"):
        dp.mu


def test_dispersive_zero_detuning_rejected():
    s = make_space(3, 3, True)
    mp = ModelParams(omega=1.0, omega0=0.0, delta_bar=1.0, lambda1=0.1, lambda2=0.1, g=1.0, omega_e=1.0)
    with pytest.raises(ValueError, match="detuning"):
        build_dispersive(mp, s)


def test_dispersive_parameter_identities_randomized():
    rng = np.random.default_rng(20130)
    s = make_space(2, 2, True)
    for _ in range(100):
        lam1 = rng.uniform(0.05, 2.0)
        lam2 = lam1 * rng.choice([-1.0, 1.0])
        g = rng.uniform(0.1, 100.0)
        delta = rng.uniform(5.0, 500.0) * rng.choice([-1.0, 1.0])
        omega0 = rng.uniform(-2.0, 2.0)
        delta_bar = rng.uniform(0.1, 3.0)
        omega_e = math.hypot(omega0, delta_bar)
        mp = ModelParams(
            omega=omega_e + delta, omega0=omega0, delta_bar=delta_bar,
            lambda1=lam1, lambda2=lam2, g=g, omega_e=omega_e,
        )
        import warnings

        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RegimeWarning)
            _, dp = build_dispersive(mp, s)
        st = mp.sin_theta
        assert abs(dp.Omega - (-(lam1**2 / delta) * st**2)) <= 1e-12 * max(1, abs(dp.Omega))
        assert abs(dp.chi - (-(lam2**2 / delta) * st**2)) <= 1e-12 * max(1, abs(dp.chi))
        assert abs(dp.Delta - (g * lam1 / delta) * st) <= 1e-12 * max(1, abs(dp.Delta))
        assert abs(dp.r - (-(lam1 * lam2 / delta) * st**2)) <= 1e-12 * max(1, abs(dp.r))
        assert abs(dp.zeta - 2.0 * dp.Omega) <= 1e-12 * max(1, abs(dp.zeta))
        if dp.Delta > 0:
            assert abs(dp.mu - dp.zeta**2 / (2 * dp.Delta)) <= 1e-12 * max(1, abs(dp.mu))


def test_normal_mode_requires_equal_shifts():
    s = make_space(3, 3, True)
    dp = DispersiveParams(Omega=-0.01, chi=-0.02, Delta=0.5, r=-0.014, zeta=-0.02)
    with pytest.raises(ValueError, match="Omega = chi"):
        build_normal_mode(dp, s)


def test_normal_mode_zero_shift_is_pure_drive():
    s = make_space(3, 3, True)
    dp = DispersiveParams(Omega=0.0, chi=0.0, Delta=0.5, r=0.0, zeta=0.0)
    h = build_normal_mode(dp, s).matrix
    assert np.allclose(h, 0.5 * qubit_operator(s, "x").matrix)


def test_normal_mode_expectation_in_displaced_product():
    # <sqrt2 a, 0, +x| H |sqrt2 a, 0, +x> = Delta + zeta * 2|a|^2 * <sz> = Delta
    alpha = 0.8
    n = 16
    s = make_space(n, n, True)
    dp = DispersiveParams(Omega=-0.01, chi=-0.01, Delta=0.5, r=-0.01, zeta=-0.02)
    h = build_normal_mode(dp, s)
    vac = np.zeros(n, complex)
    vac[0] = 1.0
    st = product_state(s, [coherent_amplitudes(math.sqrt(2) * alpha, n), vac, "+x"])
    assert abs(expectation(h, st).real - dp.Delta) < 1e-10


def test_normal_mode_ignores_second_mode():
    s = make_space(3, 4, True)
    dp = DispersiveParams(Omega=-0.01, chi=-0.01, Delta=0.5, r=-0.01, zeta=-0.02)
    h = build_normal_mode(dp, s, which="plus")
    assert np.abs(commutator(h, number_op(s, 1)).matrix).max() < 1e-14


def test_normal_mode_matches_conjugated_dispersive():
    # U H_dispersive U' equals the normal-mode form on every total-occupation
    # block that fits inside the truncation (the mixing conserves n_a + n_b,
    # so only the incomplete top blocks deviate)
    n = 8
    s = make_space(n, n, True)
    u = beam_splitter_unitary(s).matrix
    n_a = np.diag(number_op(s, 0).matrix).real
    n_b = np.diag(number_op(s, 1).matrix).real
    complete = (n_a + n_b) <= n - 1
    for sign, which in ((+1.0, "plus"), (-1.0, "minus")):
        mp = ModelParams(
            omega=101.0, omega0=0.0, delta_bar=1.0,
            lambda1=0.5, lambda2=sign * 0.5, g=10.0, omega_e=1.0,
        )
        h_disp, dp = build_dispersive(mp, s)
        h_norm = build_normal_mode(dp, s, which=which)
        diff = np.abs(u @ h_disp.matrix @ u.conj().T - h_norm.matrix)
        assert diff[np.ix_(complete, complete)].max() < 1e-12


def test_kerr_diagonal_action():
    n = 6
    s = make_space(n, 2, True)
    dp = DispersiveParams(Omega=-0.01, chi=-0.01, Delta=0.5, r=-0.01, zeta=-0.02)
    h = build_kerr_effective(dp, s)
    mu = dp.mu
    for k in (0, 1, 3):
        for label, sign in (("+x", +1.0), ("-x", -1.0)):
            occ = np.zeros(n, complex)
            occ[k] = 1.0
            vac = np.zeros(2, complex)
            vac[0] = 1.0
            st = product_state(s, [occ, vac, label])
            hv = h.matrix @ st.data
            assert np.allclose(hv, sign * mu * k**2 * st.data, atol=1e-14)


def test_kerr_commutes_with_mode_number():
    s = make_space(5, 2, True)
    dp = DispersiveParams(Omega=-0.01, chi=-0.01, Delta=0.5, r=-0.01, zeta=-0.02)
    h = build_kerr_effective(dp, s)
    assert np.abs(commutator(h, number_op(s, 0)).matrix).max() < 1e-14


def test_kerr_rejects_nonpositive_drive_term():
    s = make_space(3, 2, True)
    dp = DispersiveParams(Omega=-0.01, chi=-0.01, Delta=-0.5, r=-0.01, zeta=-0.02)
    with pytest.raises(ValueError, match="Delta > 0"):
        build_kerr_effective(dp, s)


def test_kerr_warns_in_marginal_regime():
    s = make_space(3, 2, True)
    dp = DispersiveParams(Omega=-0.05, chi=-0.05, Delta=0.5, r=-0.05, zeta=-0.1)
    with pytest.warns(RegimeWarning):
        build_kerr_effective(dp, s)


def test_dispersive_vs_kerr_overlap_contract():
    # single occupied normal mode plus qubit; Delta/|zeta| = 50, alpha_1 = sqrt(2):
    # the two evolutions agree to better than 0.98 at the quarter revival
    from nemskerr.evolution import evolve_unitary_static

    ratio = 50.0
    zeta = -1.0
    dp = DispersiveParams(Omega=zeta / 2, chi=zeta / 2, Delta=ratio, r=zeta / 2, zeta=zeta)
    n = 21
    s = HilbertSpace((n,), has_qubit=True)
    h12 = build_normal_mode(dp, s)
    hk = build_kerr_effective(dp, s)
    t_i = math.pi / (2.0 * dp.mu)
    psi0 = product_state(s, [coherent_amplitudes(math.sqrt(2.0), n), "+x"])
    a_disp = evolve_unitary_static(h12, psi0, t_i)
    a_kerr = evolve_unitary_static(hk, psi0, t_i)
    ov = abs(np.vdot(a_disp.data, a_kerr.data))
    assert ov >= 0.98
