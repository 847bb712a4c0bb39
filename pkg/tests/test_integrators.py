import numpy as np
import pytest
from scipy.integrate import solve_ivp

from duffing_ring import IntegratorConfig, IntegrationError, integrate
from duffing_ring.dynamics import RegimeParams, node_rhs
from duffing_ring.drives import TwoTone
from duffing_ring.substrate import build_substrate

GAMMA, OMEGA = 0.5, 2.0 * np.pi
OMEGA_D = np.sqrt(OMEGA**2 - GAMMA**2 / 4.0)


def damped_exact(t):
    """Analytic underdamped solution for u(0)=1, u'(0)=0."""
    return np.exp(-GAMMA * t / 2.0) * (
        np.cos(OMEGA_D * t) + (GAMMA / (2.0 * OMEGA_D)) * np.sin(OMEGA_D * t)
    )


def damped_rhs(t, y):
    return np.array([y[1], -GAMMA * y[1] - OMEGA**2 * y[0]])


def test_config_validation():
    with pytest.raises(ValueError):
        IntegratorConfig(method="euler", t_span=(0, 1), output_dt=0.1)
    with pytest.raises(ValueError):
        IntegratorConfig(method="rk4", t_span=(0, 1), output_dt=0.1)  # no dt_fixed
    with pytest.raises(ValueError):
        IntegratorConfig(method="rk4", t_span=(0, 1), output_dt=0.1, dt_fixed=0.03)
    with pytest.raises(ValueError):
        IntegratorConfig(method="dp54", t_span=(0, 1), output_dt=0.1)  # no tols
    with pytest.raises(ValueError):
        IntegratorConfig(method="dp54", t_span=(0, 1), output_dt=0.3, rtol=1e-8, atol=1e-10)


def test_zero_field_identity():
    cfg = IntegratorConfig(method="rk4", t_span=(0.0, 2.0), output_dt=0.1, dt_fixed=0.05)
    y0 = np.array([1.0, -2.0, 3.0])
    traj = integrate(lambda t, y: np.zeros_like(y), y0, cfg)
    assert np.array_equal(traj.states, np.tile(y0, (21, 1)))
    assert np.max(np.abs(np.diff(traj.times) - 0.1)) < 1e-12


def test_rk4_damped_oscillator_error():
    # oracle-computed bound: max abs error 1.20e-6 at dt=0.01 over 16 s
    # (the per-step phase error |h*omega|^5/120 accumulated over ~1/gamma)
    cfg = IntegratorConfig(method="rk4", t_span=(0.0, 16.0), output_dt=0.01, dt_fixed=0.01)
    traj = integrate(damped_rhs, np.array([1.0, 0.0]), cfg)
    err = np.max(np.abs(traj.states[:, 0] - damped_exact(traj.times)))
    assert err < 2.5e-6


def test_rk4_convergence_order():
    errs = []
    for dt in (0.01, 0.005, 0.0025):
        cfg = IntegratorConfig(method="rk4", t_span=(0.0, 16.0), output_dt=0.02, dt_fixed=dt)
        traj = integrate(damped_rhs, np.array([1.0, 0.0]), cfg)
        errs.append(np.max(np.abs(traj.states[:, 0] - damped_exact(traj.times))))
    slopes = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all((slopes > 3.8) & (slopes < 4.2))


@pytest.mark.parametrize("method,rtol,atol", [("dp54", 1e-9, 1e-11), ("dp853", 1e-9, 1e-11)])
def test_adaptive_matches_analytic(method, rtol, atol):
    cfg = IntegratorConfig(method=method, t_span=(0.0, 16.0), output_dt=0.05,
                           rtol=rtol, atol=atol)
    traj = integrate(damped_rhs, np.array([1.0, 0.0]), cfg)
    err = np.max(np.abs(traj.states[:, 0] - damped_exact(traj.times)))
    assert err < 1e-7


def _forced_step_error(rhs, y0, t_end, h, method, ref):
    sol = solve_ivp(rhs, (0.0, t_end), y0, method=method,
                    rtol=1e12, atol=1e12, max_step=h, first_step=h)
    return np.max(np.abs(sol.y[:, -1] - ref))


def test_dp54_propagating_order():
    # force the controller to fixed steps with huge tolerances; errors then
    # scale with the propagating solution's order
    ref = solve_ivp(damped_rhs, (0.0, 4.0), [1.0, 0.0], method="DOP853",
                    rtol=3e-14, atol=1e-16).y[:, -1]
    hs = (0.02, 0.01, 0.005)
    errs = [_forced_step_error(damped_rhs, [1.0, 0.0], 4.0, h, "RK45", ref)
            for h in hs]
    slope = np.polyfit(np.log(hs), np.log(errs), 1)[0]
    assert 4.8 < slope < 5.2


def test_dp853_propagating_order():
    # single-pair slopes on any one window oscillate (competing error
    # terms); a least-squares fit across a dyadic window is stable at 7.9
    def duff(t, y):
        return np.array([y[1], -0.15 * y[1] - y[0] - 1.5 * y[0] ** 3 + np.cos(1.1 * t)])

    ref = solve_ivp(duff, (0.0, 8.0), [0.5, 0.0], method="DOP853",
                    rtol=3e-14, atol=1e-14).y[:, -1]
    hs = [0.8, 0.4, 0.2, 0.1]
    errs = [_forced_step_error(duff, [0.5, 0.0], 8.0, h, "DOP853", ref) for h in hs]
    slope = np.polyfit(np.log(hs), np.log(errs), 1)[0]
    assert 7.8 < slope < 8.2


def test_determinism():
    cfg = IntegratorConfig(method="dp54", t_span=(0.0, 10.0), output_dt=0.1,
                           rtol=1e-8, atol=1e-10)
    a = integrate(damped_rhs, np.array([1.0, 0.0]), cfg)
    b = integrate(damped_rhs, np.array([1.0, 0.0]), cfg)
    assert np.array_equal(a.states, b.states)
    assert a.meta == b.meta


def test_dense_output_vs_tight_rerun():
    sub = build_substrate(64)
    params = RegimeParams.duffing_working_point()
    drive = TwoTone(0.6, 0.30, 0.18, 1.0)
    f = node_rhs(sub, params, drive.evaluate, 0)
    loose = IntegratorConfig(method="dp54", t_span=(0.0, 60.0), output_dt=0.05,
                             rtol=1e-8, atol=1e-10)
    tight = IntegratorConfig(method="dp54", t_span=(0.0, 60.0), output_dt=0.05,
                             rtol=1e-11, atol=1e-13)
    a = integrate(f, np.zeros(128), loose)
    b = integrate(f, np.zeros(128), tight)
    scale = np.max(np.abs(b.states))
    assert np.max(np.abs(a.states - b.states)) / scale < 10 * loose.rtol


def test_cross_method_agreement_on_duffing_ring():
    # DP54 at F4-grade vs DP853 at F5-grade tolerances over the F5 horizon
    sub = build_substrate(64)
    params = RegimeParams.duffing_working_point()
    drive = TwoTone(0.6, 0.30, 0.18, 1.0)
    f = node_rhs(sub, params, drive.evaluate, 0)
    c54 = IntegratorConfig(method="dp54", t_span=(0.0, 300.0), output_dt=0.05,
                           rtol=1e-8, atol=1e-10)
    c853 = IntegratorConfig(method="dp853", t_span=(0.0, 300.0), output_dt=0.05,
                            rtol=1e-10, atol=1e-12)
    a = integrate(f, np.zeros(128), c54)
    b = integrate(f, np.zeros(128), c853)
    assert np.max(np.abs(a.states - b.states)) < 1e-6


def test_nonfinite_state_aborts():
    def blowup(t, y):
        return y**2

    cfg = IntegratorConfig(method="dp54", t_span=(0.0, 2.0), output_dt=0.1,
                           rtol=1e-8, atol=1e-10)
    with pytest.raises(IntegrationError):
        integrate(blowup, np.array([10.0]), cfg)


def test_meta_reports_steps():
    cfg = IntegratorConfig(method="dp853", t_span=(0.0, 5.0), output_dt=0.1,
                           rtol=1e-10, atol=1e-12)
    traj = integrate(damped_rhs, np.array([1.0, 0.0]), cfg)
    assert traj.meta["n_steps"] > 10
    assert traj.meta["n_rejected"] >= 0
    assert traj.meta["method"] == "dp853"
