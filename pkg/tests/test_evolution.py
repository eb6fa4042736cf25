import math

import numpy as np
import pytest

from nemskerr.analysis import fidelity, trace_distance, yurke_stoler
from nemskerr.evolution import (
    EvolutionError,
    LindbladModel,
    choose_k_max,
    evolve_lindblad,
    evolve_unitary_static,
    evolve_unitary_timedep,
    kerr_analytic_pure,
    kerr_lindblad_analytic,
    log_factorial_ratio_sqrt,
)
from nemskerr.fock import (
    HilbertSpace,
    Operator,
    QuantumState,
    annihilation,
    beam_splitter_map,
    coherent_amplitudes,
    coherent_state,
    make_space,
    number_op,
    product_state,
    qubit_operator,
)
from nemskerr.hamiltonians import DispersiveParams, ModelParams, build_kerr_effective, build_rwa, build_rwa_static

A1 = math.sqrt(2.0)  # mode amplitude used by most of the small fixtures


def _kerr_hamiltonian(space, mu):
    num = number_op(space, 0)
    return mu * (num @ num)


def _coherent_rho(alpha, dim):
    vec = coherent_amplitudes(alpha, dim)
    return np.outer(vec, vec.conj())


# ---------------------------------------------------------------------------
# unitary propagation
# ---------------------------------------------------------------------------

def test_static_zero_time_is_identity():
    sp = HilbertSpace((12,))
    st = coherent_state(sp, 0, 0.7)
    out = evolve_unitary_static(_kerr_hamiltonian(sp, 1.0), st, 0.0)
    assert np.allclose(out.data, st.data, atol=1e-14)


def test_static_full_revival():
    n = 20
    s = make_space(n, 2, True)
    dp = DispersiveParams(Omega=-0.005, chi=-0.005, Delta=0.5, r=-0.005, zeta=-0.01)
    h = build_kerr_effective(dp, s)
    vac = np.zeros(2, complex)
    vac[0] = 1.0
    psi0 = product_state(s, [coherent_amplitudes(A1, n), vac, "+x"])
    t = 2.0 * math.pi / dp.mu
    out = evolve_unitary_static(h, psi0, t)
    assert abs(abs(np.vdot(psi0.data, out.data)) - 1.0) < 1e-10


def test_static_half_period_flips_coherent_sign():
    n = 20
    s = make_space(n, 2, True)
    dp = DispersiveParams(Omega=-0.005, chi=-0.005, Delta=0.5, r=-0.005, zeta=-0.01)
    h = build_kerr_effective(dp, s)
    vac = np.zeros(2, complex)
    vac[0] = 1.0
    psi0 = product_state(s, [coherent_amplitudes(A1, n), vac, "+x"])
    out = evolve_unitary_static(h, psi0, math.pi / dp.mu)
    target = product_state(s, [coherent_amplitudes(-A1, n), vac, "+x"])
    assert abs(abs(np.vdot(target.data, out.data)) - 1.0) < 1e-8


def test_static_rejects_non_hermitian():
    sp = HilbertSpace((4,))
    bad = Operator(sp, np.triu(np.ones((4, 4))))
    with pytest.raises(ValueError, match="Hermitian"):
        evolve_unitary_static(bad, coherent_state(sp, 0, 0.0), 1.0)


def test_timedep_constant_matches_static():
    sp = HilbertSpace((10,))
    a = annihilation(sp, 0)
    h = 0.8 * (a + a.dag()) + 0.3 * (a.dag() @ a)
    st = coherent_state(sp, 0, 0.5)
    res = evolve_unitary_timedep(lambda t: h, st, np.linspace(0.0, 2.0, 5))
    ref = evolve_unitary_static(h, st, 2.0)
    assert np.abs(res.states[-1].data - ref.data).max() < 1e-8
    assert res.metadata["norm_drift"] < 1e-6


def test_timedep_null_generator():
    sp = HilbertSpace((8,))
    st = coherent_state(sp, 0, 0.4)
    zero = Operator(sp, np.zeros((8, 8)))
    res = evolve_unitary_timedep(lambda t: zero, st, [0.0, 0.5, 1.0])
    for state in res.states:
        assert np.allclose(state.data, st.data, atol=1e-14)


def test_timedep_rwa_matches_exact_frame_route():
    # short-horizon cross-check of the integrator against the spectral
    # route; the couplings are intentionally outside the physical regime
    # (this checks integration, not the approximation), so the regime
    # warning is expected
    import warnings

    from nemskerr.hamiltonians import RegimeWarning

    n = 8
    s = make_space(n, n, True)
    mp = ModelParams(omega=13.0, omega0=0.0, delta_bar=1.0, lambda1=1.0, lambda2=1.0, g=4.0, omega_e=1.0)
    psi0 = product_state(s, [coherent_amplitudes(0.5, n), coherent_amplitudes(0.5, n), "+x"])
    t_end = 0.7
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        res = evolve_unitary_timedep(build_rwa(mp, s), psi0, [0.0, t_end])
    h0, n_modes = build_rwa_static(mp, s)
    ref = evolve_unitary_static(h0, psi0, t_end)
    unwind = np.exp(1j * mp.delta * t_end * np.diag(n_modes.matrix).real)
    ref_vec = unwind * ref.data
    ov = abs(np.vdot(res.states[-1].data, ref_vec))
    assert ov > 1.0 - 1e-7


def test_timedep_step_guard():
    sp = HilbertSpace((8,))
    a = annihilation(sp, 0)
    h = 10.0 * (a.dag() @ a)
    st = coherent_state(sp, 0, 0.5)
    with pytest.raises(ValueError, match="guideline"):
        evolve_unitary_timedep(lambda t: h, st, [0.0, 1.0], dt=1.0)
    with pytest.warns(UserWarning, match="guideline"):
        evolve_unitary_timedep(lambda t: h, st, [0.0, 0.01], dt=0.0035)


# ---------------------------------------------------------------------------
# Lindblad integration
# ---------------------------------------------------------------------------

def test_lindblad_closed_system_limit():
    n = 16
    sp = HilbertSpace((n,))
    h = _kerr_hamiltonian(sp, 1.0)
    st = coherent_state(sp, 0, 1.0)
    model = LindbladModel(hamiltonian=h, collapse_ops=((annihilation(sp, 0), 0.0),))
    times = np.linspace(0.0, 0.8, 5)
    res = evolve_lindblad(model, st, times)
    ref = evolve_unitary_static(h, st, 0.8).to_density_matrix()
    assert trace_distance(res.states[-1], ref) < 1e-8


def test_lindblad_pure_damping_keeps_coherence():
    n = 16
    sp = HilbertSpace((n,))
    zero_h = Operator(sp, np.zeros((n, n)))
    kappa = 0.25
    model = LindbladModel(hamiltonian=zero_h, collapse_ops=((annihilation(sp, 0), kappa),))
    st = coherent_state(sp, 0, 1.0)
    times = np.linspace(0.0, 1.2, 4)
    res = evolve_lindblad(model, st, times)
    for t, state in zip(res.times, res.states):
        target = coherent_state(sp, 0, math.exp(-kappa * float(t)))
        assert fidelity(state, target) > 1.0 - 1e-6


def test_lindblad_negative_rate_rejected():
    sp = HilbertSpace((4,))
    with pytest.raises(ValueError, match=">= 0"):
        LindbladModel(
            hamiltonian=Operator(sp, np.zeros((4, 4))),
            collapse_ops=((annihilation(sp, 0), -0.1),),
        )


def test_lindblad_full_vs_reduced_normal_mode_dynamics():
    # both resonators decaying at the same rate, dissipators in the original
    # modes; the occupied-normal-mode reduction must reproduce the mode-1
    # reduced state: kappa_each = kbar/2 per mode against kappa = kbar/2 on
    # the single reduced mode
    alpha, n, mu = 0.5, 11, 1.0
    kbar = 0.1
    s = make_space(n, n, False)
    a = annihilation(s, 0)
    b = annihilation(s, 1)
    a1 = (2.0 ** -0.5) * (a + b)
    n1 = a1.dag() @ a1
    h_full = mu * (n1 @ n1)
    model_full = LindbladModel(
        hamiltonian=h_full,
        collapse_ops=((a, kbar / 2.0), (b, kbar / 2.0)),
    )
    psi0 = product_state(s, [coherent_amplitudes(alpha, n), coherent_amplitudes(alpha, n)])
    times = np.linspace(0.0, 0.15, 4)
    res_full = evolve_lindblad(model_full, psi0, times)

    sp1 = HilbertSpace((n,))
    h_red = _kerr_hamiltonian(sp1, mu)
    model_red = LindbladModel(hamiltonian=h_red, collapse_ops=((annihilation(sp1, 0), kbar / 2.0),))
    red0 = coherent_state(sp1, 0, math.sqrt(2.0) * alpha)
    res_red = evolve_lindblad(model_red, red0, times)

    from nemskerr.analysis import reduce_subsystem

    for full_state, red_state in zip(res_full.states, res_red.states):
        relabeled = beam_splitter_map(s, full_state)
        mode1 = reduce_subsystem(relabeled, keep=[0])
        assert trace_distance(mode1, red_state) < 1e-6


def test_lindblad_records_physicality_series():
    n = 12
    sp = HilbertSpace((n,))
    model = LindbladModel(
        hamiltonian=_kerr_hamiltonian(sp, 1.0),
        collapse_ops=((annihilation(sp, 0), 0.05),),
    )
    st = coherent_state(sp, 0, 0.8)
    res = evolve_lindblad(model, st, np.linspace(0.0, 0.5, 4))
    assert np.abs(res.observables["trace"] - 1.0).max() < 1e-6
    assert res.observables["herm_dev"].max() < 1e-8
    assert res.observables["min_eig"].min() > -1e-6
    assert res.observables["mean_n_0"][0] == pytest.approx(0.64, abs=1e-9)


def test_lindblad_aborts_on_trace_blowup():
    # needs an off-diagonal Hamiltonian term: a forced oversized step then
    # feeds the instability into the populations and breaks the trace
    n = 10
    sp = HilbertSpace((n,))
    a = annihilation(sp, 0)
    h = _kerr_hamiltonian(sp, 1.0) + 3.0 * (a + a.dag())
    model = LindbladModel(hamiltonian=h, collapse_ops=((a, 0.1),))
    st = coherent_state(sp, 0, 0.8)
    with pytest.raises(EvolutionError, match="trace"):
        evolve_lindblad(model, st, np.linspace(0.0, 5.0, 3), dt=0.5)


def test_lindblad_timedep_callable_matches_static():
    n = 8
    sp = HilbertSpace((n,))
    h = _kerr_hamiltonian(sp, 0.7)
    model_static = LindbladModel(hamiltonian=h, collapse_ops=((annihilation(sp, 0), 0.2),))
    model_callable = LindbladModel(hamiltonian=lambda t: h, collapse_ops=((annihilation(sp, 0), 0.2),))
    st = coherent_state(sp, 0, 0.6)
    times = [0.0, 0.3]
    r1 = evolve_lindblad(model_static, st, times)
    r2 = evolve_lindblad(model_callable, st, times)
    assert trace_distance(r1.states[-1], r2.states[-1]) < 1e-10


def test_lindblad_fidelity_series_against_target():
    n = 14
    sp = HilbertSpace((n,))
    model = LindbladModel(
        hamiltonian=_kerr_hamiltonian(sp, 1.0),
        collapse_ops=((annihilation(sp, 0), 0.0),),
    )
    st = coherent_state(sp, 0, 1.0)
    target = yurke_stoler(1.0, n)
    t_i = math.pi / 2.0
    res = evolve_lindblad(model, st, [0.0, t_i], fidelity_target=target)
    assert res.observables["fidelity"][-1] > 1.0 - 1e-8


# ---------------------------------------------------------------------------
# closed-form solutions
# ---------------------------------------------------------------------------

def test_kerr_analytic_pure_initial_state():
    st = kerr_analytic_pure(A1, 1.0, 0.0, 20)
    ref = coherent_amplitudes(A1, 20)
    assert np.abs(st.data - ref).max() < 1e-14


def test_kerr_analytic_pure_quarter_revival_is_cat():
    n = 35
    a1 = 2.0 * math.sqrt(2.0)
    st = kerr_analytic_pure(a1, 1.0, math.pi / 2.0, n)
    ys = yurke_stoler(a1, n)
    assert abs(abs(np.vdot(ys.data, st.data)) - 1.0) < 1e-8


def test_kerr_analytic_pure_photon_statistics_invariant():
    n = 25
    p0 = np.abs(kerr_analytic_pure(A1, 1.0, 0.0, n).data) ** 2
    pt = np.abs(kerr_analytic_pure(A1, 1.0, 0.37, n).data) ** 2
    assert np.abs(p0 - pt).max() < 1e-14


def test_analytic_kappa_zero_reduces_to_pure():
    n = 25
    rho0 = _coherent_rho(A1, n)
    for t in (0.2, math.pi / 2):
        sol = kerr_lindblad_analytic(rho0, 1.0, 0.0, t, (n, 0))
        pure = kerr_analytic_pure(A1, 1.0, t, n).to_density_matrix()
        assert trace_distance(sol, pure) < 1e-10


def test_analytic_pure_damping_closed_form():
    n = 25
    kappa = 0.2
    rho0 = _coherent_rho(A1, n)
    for t in (0.3, 1.0):
        k_max = choose_k_max(n, kappa, t)
        sol = kerr_lindblad_analytic(rho0, 0.0, kappa, t, (n, k_max))
        target = coherent_state(HilbertSpace((n,)), 0, A1 * math.exp(-kappa * t))
        assert fidelity(sol, target) > 1.0 - 1e-8


def test_analytic_hermitian_unit_trace():
    n = 35
    a1 = 2.0 * math.sqrt(2.0)
    k_max = choose_k_max(n, 1e-2, math.pi / 2)
    rho0 = _coherent_rho(a1, n + k_max)
    sol = kerr_lindblad_analytic(rho0, 1.0, 1e-2, math.pi / 2, (n, k_max))
    m = sol.data
    assert np.abs(m - m.conj().T).max() < 1e-8
    assert abs(np.trace(m).real - 1.0) < 1e-8


def test_analytic_purity_below_one_iff_open():
    n = 30
    a1 = 2.0
    from nemskerr.analysis import purity

    rho0 = _coherent_rho(a1, n + 40)
    closed = kerr_lindblad_analytic(rho0, 1.0, 0.0, 0.9, (n, 0))
    assert abs(purity(closed) - 1.0) < 1e-10
    opened = kerr_lindblad_analytic(rho0, 1.0, 5e-3, 0.9, (n, 40))
    assert purity(opened) < 1.0 - 1e-6


def test_damped_cat_bounds_at_figure_amplitude():
    # exact solution at mode-1 amplitude sqrt(2) (mean occupation 2), where
    # the quoted fidelity/purity bounds hold with tight margins
    from nemskerr.analysis import purity

    n = 25
    k_max = choose_k_max(n, 1e-2, math.pi / 2)
    rho0 = _coherent_rho(A1, n + k_max)
    ys = yurke_stoler(A1, n)
    sol3 = kerr_lindblad_analytic(rho0, 1.0, 1e-3, math.pi / 2, (n, k_max))
    assert fidelity(sol3, ys) > 0.99
    assert purity(sol3) > 0.985
    sol2 = kerr_lindblad_analytic(rho0, 1.0, 1e-2, math.pi / 2, (n, k_max))
    assert fidelity(sol2, ys) > 0.95
    assert purity(sol2) > 0.90


def test_factorial_ratio_log_domain_matches_direct():
    for n in range(0, 21, 4):
        for m in range(0, 21, 5):
            for k in range(0, 21, 3):
                direct = math.sqrt(
                    math.factorial(n + k) * math.factorial(m + k)
                    / (math.factorial(n) * math.factorial(m))
                )
                from_log = math.exp(log_factorial_ratio_sqrt(n, m, k))
                assert abs(from_log - direct) <= 1e-10 * direct


def test_jump_series_stable_under_k_doubling():
    n = 30
    a1 = 2.0 * math.sqrt(2.0)
    kappa = 1e-2
    t = math.pi / 2
    k_max = choose_k_max(n, kappa, t)
    rho0 = _coherent_rho(a1, n + 2 * k_max)
    sol1 = kerr_lindblad_analytic(rho0, 1.0, kappa, t, (n, k_max))
    sol2 = kerr_lindblad_analytic(rho0, 1.0, kappa, t, (n, 2 * k_max))
    assert trace_distance(sol1, sol2) < 1e-12


def test_jump_series_matches_coherent_closed_form():
    # for a coherent input the whole jump series sums to exp(|a|^2 C(n,m)),
    # an independently derived closed form
    n = 22
    a1 = A1
    mu, kappa, t = 1.0, 2e-2, 0.9
    k_max = choose_k_max(n, kappa, t)
    rho0 = _coherent_rho(a1, n + k_max)
    sol = kerr_lindblad_analytic(rho0, mu, kappa, t, (n, k_max)).data

    idx = np.arange(n)
    diff = idx[:, None] - idx[None, :]
    denom = 2j * mu * diff + 2.0 * kappa
    c_mat = 2.0 * kappa * (1.0 - np.exp(-2j * mu * t * diff - 2.0 * kappa * t)) / denom
    base = coherent_amplitudes(a1, n + k_max)[:n]
    closed = (
        np.outer(base, base.conj())
        * np.exp(-1j * mu * t * (idx[:, None] ** 2 - idx[None, :] ** 2))
        * np.exp(-kappa * t * (idx[:, None] + idx[None, :]))
        * np.exp(abs(a1) ** 2 * c_mat)
    )
    assert np.abs(sol - closed).max() < 1e-12


def test_truncation_doubling_leaves_observables_fixed():
    # damping sweep operating point: doubling the truncation moves fidelity
    # and purity by less than 1e-6
    from nemskerr.analysis import purity

    a1 = 2.0 * math.sqrt(2.0)
    mu, kappa, t = 1.0, 1e-2, math.pi / 2
    vals = {}
    for n in (35, 70):
        k_max = choose_k_max(n, kappa, t)
        rho0 = _coherent_rho(a1, n + k_max)
        sol = kerr_lindblad_analytic(rho0, mu, kappa, t, (n, k_max))
        ys = yurke_stoler(a1, n)
        vals[n] = (fidelity(sol, ys), purity(sol))
    assert abs(vals[35][0] - vals[70][0]) < 1e-6
    assert abs(vals[35][1] - vals[70][1]) < 1e-6


def test_analytic_rejects_bad_inputs():
    rho0 = _coherent_rho(1.0, 12)
    with pytest.raises(ValueError, match="kappa"):
        kerr_lindblad_analytic(rho0, 1.0, -0.1, 0.5, (12, 10))
    with pytest.raises(ValueError, match="square"):
        kerr_lindblad_analytic(np.zeros((3, 4)), 1.0, 0.1, 0.5, (12, 10))
