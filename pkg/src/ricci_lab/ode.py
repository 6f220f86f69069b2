"""Warped-product ODE system for Einstein-type structures.

State (t, b, b', f, f') for g = dt^2 + b^2 g_fiber with constant h.  The
tangential component of f Ric = Ddf + h g is solved for b'', the radial
one gives f''.  Both components are therefore built into the flow; what
is monitored is f^2 s, which the contracted Bianchi identity makes
constant along exact solutions.

On zero-scalar-curvature solutions two more quantities are conserved:
a0 = b^(n-1) b'' and the quadrature (n-2) b'^2 + 2 a0 b^(2-n) = (n-2) kappa.
"""

import enum
import io
import json
import math
from dataclasses import dataclass, field, replace

import numpy as np
import sympy as sp
from scipy.interpolate import make_interp_spline

from .errors import (BadInitialData, CriticalPoint, NonzeroScalar, SingularWarp,
                     StepFailure, ZeroPotential)
from .fields import T, RadialScalarField
from .frame import WarpedProductMetric
from .jets import Jet
from .structure import ConstantH, EinsteinTypeStructure

DT = 1e-3
MAX_SPAN = 50.0
B_MIN_GUARD = 1e-6
F_GUARD = 1e-10
A0_TOL = 1e-8
FIT_TOL = 1e-6
INIT_TOL = 1e-9
EVENT_TOL = 1e-10
S_TOL = 1e-6
# blow-up guard: rates (1/length) that may not be exceeded, unless the
# run starts above them, in which case RATE_GROWTH times the start value
CURV_RATE_MAX = 2.0
F_RATE_MAX = 20.0
RATE_GROWTH = 4.0
TAYLOR_ORDER = 5

CSV_HEADER = "t,b,bp,f,fp,a0_est,f2s,constraint_res,first_integral_res"


@dataclass(frozen=True)
class OdeState:
    t: float
    b: float
    bp: float
    f: float
    fp: float

    def vector(self):
        return np.array([self.b, self.bp, self.f, self.fp])

    @classmethod
    def from_vector(cls, t, y):
        return cls(float(t), *(float(v) for v in y))


@dataclass(frozen=True)
class OdeParams:
    """System parameters; ``a0`` and ``kappa`` are optional declared integrals."""

    n: int
    h: float
    kappa0: float = 1.0
    a0: float = None
    kappa: float = None
    b_min_guard: float = B_MIN_GUARD
    f_guard: float = F_GUARD

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 3:
            raise ValueError(f"dimension must be an integer >= 3, got {self.n!r}")
        for name in ("h", "kappa0"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    def to_dict(self):
        return {"n": self.n, "h": self.h, "kappa0": self.kappa0, "a0": self.a0,
                "kappa": self.kappa, "b_min_guard": self.b_min_guard,
                "f_guard": self.f_guard}


def _accel(b, bp, f, fp, n, h, kappa0):
    """(b'', f'') from the two Einstein-type components; floats or jets."""
    bpp = ((kappa0 - bp * bp) * (n - 2) - (b * bp * fp + b * b * h) / f) / b
    fpp = -(n - 1) * f * bpp / b - h
    return bpp, fpp


def rhs_system_a(state, n, h, kappa0=1.0, f_guard=F_GUARD, b_guard=0.0):
    """Derivatives (b', b'', f', f'') at ``state``."""
    if not state.b > b_guard:
        raise SingularWarp(f"b = {state.b} at t = {state.t} is not above {b_guard}")
    if not abs(state.f) > f_guard:
        raise ZeroPotential(f"|f| = {abs(state.f)} at t = {state.t} is below {f_guard}")
    bpp, fpp = _accel(state.b, state.bp, state.f, state.fp, n, h, kappa0)
    return state.bp, bpp, state.fp, fpp


def _rhs_vec(y, p):
    b, bp, f, fp = y
    if not b > 0.0:
        raise SingularWarp(f"b = {b} in a stage evaluation")
    if not abs(f) > p.f_guard:
        raise ZeroPotential(f"|f| = {abs(f)} in a stage evaluation")
    bpp, fpp = _accel(b, bp, f, fp, p.n, p.h, p.kappa0)
    return np.array([bp, bpp, fp, fpp])


def rk4_step(y, dt, p):
    k1 = _rhs_vec(y, p)
    k2 = _rhs_vec(y + 0.5 * dt * k1, p)
    k3 = _rhs_vec(y + 0.5 * dt * k2, p)
    k4 = _rhs_vec(y + dt * k3, p)
    return y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def taylor_jets(state, params, order=TAYLOR_ORDER):
    """Jets of (b, f) of the exact solution through ``state`` (Picard)."""
    y0 = (state.b, state.bp, state.f, state.fp)
    b, bp, f, fp = (Jet.constant(v, order) for v in y0)
    for _ in range(order + 1):
        bpp, fpp = _accel(b, bp, f, fp, params.n, params.h, params.kappa0)
        b, bp, f, fp = (
            bp.integrate(y0[0]).truncate(order),
            bpp.integrate(y0[1]).truncate(order),
            fp.integrate(y0[2]).truncate(order),
            fpp.integrate(y0[3]).truncate(order),
        )
    return b, f


# ledger ---------------------------------------------------------------------


def scalar_curvature(b, bp, bpp, n, kappa0):
    sec_rad = -bpp / b
    sec_tan = (kappa0 - bp * bp) / (b * b)
    return 2 * (n - 1) * sec_rad + (n - 1) * (n - 2) * sec_tan


@dataclass(frozen=True)
class LedgerRow:
    a0_est: float
    f2s: float
    constraint_res: float
    first_integral_res: float


def _ledger(states, params):
    n, k0 = params.n, params.kappa0
    rows = []
    f2s0 = a0_ref = None
    kappa_ref = k0 if params.kappa is None else params.kappa
    for st in states:
        _, bpp, _, _ = rhs_system_a(st, n, params.h, k0)
        a0 = st.b ** (n - 1) * bpp
        f2s = st.f ** 2 * scalar_curvature(st.b, st.bp, bpp, n, k0)
        if f2s0 is None:
            f2s0 = f2s
            a0_ref = a0 if params.a0 is None else params.a0
        fi = (n - 2) * st.bp ** 2 + 2 * a0_ref * st.b ** (2 - n) - (n - 2) * kappa_ref
        rows.append(LedgerRow(float(a0), float(f2s), float(f2s - f2s0), float(fi)))
    return tuple(rows)


# events ---------------------------------------------------------------------


class EventKind(str, enum.Enum):
    CRITICAL_POINT = "CRITICAL_POINT"
    WARP_EXTREMUM = "WARP_EXTREMUM"
    DOMAIN_EXIT = "DOMAIN_EXIT"


@dataclass(frozen=True)
class Event:
    t: float
    kind: EventKind
    value: float
    detail: str = ""

    def to_dict(self):
        return {"t": self.t, "kind": self.kind.value, "value": self.value, "detail": self.detail}


def _locate(y, t, dt, p, idx):
    """Bisect inside one RK4 step for the zero of component ``idx``."""
    lo, hi = 0.0, dt
    g_lo = y[idx]
    mid, val = hi, rk4_step(y, hi, p)[idx]
    for _ in range(200):
        if abs(val) <= EVENT_TOL:
            break
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        val = rk4_step(y, mid, p)[idx]
        if (val > 0) == (g_lo > 0):
            lo, g_lo = mid, val
        else:
            hi = mid
    return t + mid, float(val)


def local_rates(y, p):
    """(sqrt|b''/b|, max(|f'/f|, sqrt|f''/f|)), both in 1/length.

    The first is a curvature scale, the second the approach to f = 0.
    b'/b is left out: it blows up at a smooth polar origin (b = t) too.
    """
    b, bp, f, fp = y
    bpp, fpp = _accel(b, bp, f, fp, p.n, p.h, p.kappa0)
    return math.sqrt(abs(bpp / b)), max(abs(fp / f), math.sqrt(abs(fpp / f)))


def _sign_change(a, b):
    return (a > 0 and b <= 0) or (a < 0 and b >= 0)


# trajectory -----------------------------------------------------------------


@dataclass(frozen=True)
class OdeTrajectory:
    params: OdeParams
    dt: float
    states: tuple
    ledger: tuple
    events: tuple
    status: str = "COMPLETE"

    def __post_init__(self):
        if len(self.states) != len(self.ledger):
            raise ValueError("ledger length must equal the number of states")

    def __len__(self):
        return len(self.states)

    def column(self, name):
        if name in ("t", "b", "bp", "f", "fp"):
            return np.array([getattr(s, name) for s in self.states])
        return np.array([getattr(r, name) for r in self.ledger])

    @property
    def t(self):
        return self.column("t")

    def second_derivatives(self):
        p = self.params
        out = np.array([rhs_system_a(s, p.n, p.h, p.kappa0)[1::2] for s in self.states])
        return out[:, 0], out[:, 1]

    def with_states(self, states):
        """Same parameters, new states, ledger recomputed (used for drift tests)."""
        states = tuple(states)
        return replace(self, states=states, ledger=_ledger(states, self.params))

    def rows(self):
        for st, lg in zip(self.states, self.ledger):
            yield (st.t, st.b, st.bp, st.f, st.fp, lg.a0_est, lg.f2s,
                   lg.constraint_res, lg.first_integral_res)

    def to_csv(self, path=None):
        buf = io.StringIO()
        buf.write(CSV_HEADER + "\n")
        for row in self.rows():
            buf.write(",".join(format(v, ".17g") for v in row) + "\n")
        text = buf.getvalue()
        if path is not None:
            with open(path, "w", newline="") as fh:
                fh.write(text)
        return text

    def events_dict(self):
        return {"status": self.status, "events": [e.to_dict() for e in self.events]}

    def events_json(self, path=None):
        text = json.dumps(self.events_dict(), indent=2, sort_keys=True) + "\n"
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text)
        return text

    def event_kinds(self):
        return [e.kind for e in self.events]


def _check_initial(initial, p, init_tol):
    vals = initial.vector()
    if not (np.all(np.isfinite(vals)) and math.isfinite(initial.t)):
        raise BadInitialData("initial state has non-finite entries")
    if not initial.b > p.b_min_guard:
        raise BadInitialData(f"b0 = {initial.b} is not above the guard {p.b_min_guard}")
    if not abs(initial.f) > p.f_guard:
        raise BadInitialData(f"|f0| = {abs(initial.f)} is not above the guard {p.f_guard}")
    n = p.n
    _, bpp, _, _ = rhs_system_a(initial, n, p.h, p.kappa0)
    a0 = initial.b ** (n - 1) * bpp
    if p.a0 is not None and abs(a0 - p.a0) > init_tol * (1 + abs(p.a0)):
        raise BadInitialData(f"initial b^(n-1) b'' = {a0} does not match declared a0 = {p.a0}")
    if p.a0 is not None:
        kappa = p.kappa0 if p.kappa is None else p.kappa
        fi = (n - 2) * initial.bp ** 2 + 2 * p.a0 * initial.b ** (2 - n) - (n - 2) * kappa
        if abs(fi) > init_tol * (1 + abs(kappa)):
            raise BadInitialData(f"initial state violates the first integral by {fi}")


def integrate(initial, params, t_span, dt=DT, init_tol=INIT_TOL, max_span=MAX_SPAN,
              resolution=(CURV_RATE_MAX, F_RATE_MAX)):
    """Fixed-step classical RK4 from ``initial`` over ``t_span``.

    Besides the b and f guards the run halts with DOMAIN_EXIT on the
    approach to a curvature blow-up or to f = 0: when either of
    ``local_rates`` passes its bound in ``resolution`` (raised to
    RATE_GROWTH times the starting rate if that is larger).  Near such a
    point b'' is a difference of large terms and the first integrals stop
    being trustworthy.  Pass ``resolution=None`` to switch this off.
    """
    if not (isinstance(dt, (int, float)) and math.isfinite(dt) and dt > 0):
        raise ValueError(f"dt must be positive, got {dt!r}")
    if not (math.isfinite(t_span) and 0 < t_span <= max_span):
        raise ValueError(f"t_span must lie in (0, {max_span}], got {t_span!r}")
    p = params
    _check_initial(initial, p, init_tol)
    steps = max(1, int(round(t_span / dt)))
    if resolution is not None:
        rate0 = local_rates(initial.vector(), p)
        bounds = [max(lim, RATE_GROWTH * r) for lim, r in zip(resolution, rate0)]
    t0 = initial.t
    y = initial.vector()
    states = [initial]
    events = []
    status = "COMPLETE"
    for k in range(1, steps + 1):
        t_prev = t0 + (k - 1) * dt
        t_new = t0 + k * dt
        try:
            y_new = rk4_step(y, dt, p)
        except (SingularWarp, ZeroPotential) as exc:
            events.append(Event(t_prev, EventKind.DOMAIN_EXIT, float(y[0]), f"stage failed: {exc}"))
            status = "DOMAIN_EXIT"
            break
        if not np.all(np.isfinite(y_new)):
            raise StepFailure(f"non-finite state after the step ending at t = {t_new}")
        if not y_new[0] > p.b_min_guard:
            events.append(Event(t_new, EventKind.DOMAIN_EXIT, float(y_new[0]), "b below guard"))
            status = "DOMAIN_EXIT"
            break
        if not abs(y_new[2]) > p.f_guard or _sign_change(y[2], y_new[2]):
            events.append(Event(t_new, EventKind.DOMAIN_EXIT, float(y_new[2]), "f reached zero"))
            status = "DOMAIN_EXIT"
            break
        if resolution is not None:
            rates = local_rates(y_new, p)
            which = [name for name, r, lim in zip(("curvature", "f -> 0"), rates, bounds)
                     if r > lim]
            if which:
                events.append(Event(t_new, EventKind.DOMAIN_EXIT, float(max(rates)),
                                    f"blow-up guard: rate bound exceeded ({', '.join(which)})"))
                status = "DOMAIN_EXIT"
                break
        found = []
        if _sign_change(y[3], y_new[3]):
            te, v = _locate(y, t_prev, dt, p, 3)
            found.append(Event(te, EventKind.CRITICAL_POINT, v))
        if _sign_change(y[1], y_new[1]):
            te, v = _locate(y, t_prev, dt, p, 1)
            found.append(Event(te, EventKind.WARP_EXTREMUM, v))
        events.extend(sorted(found, key=lambda e: (e.t, e.kind.value)))
        y = y_new
        states.append(OdeState.from_vector(t_new, y))
    states = tuple(states)
    return OdeTrajectory(p, float(dt), states, _ledger(states, p), tuple(events), status)


# closed-form families --------------------------------------------------------


class Family(str, enum.Enum):
    SPHERE = "SPHERE"
    FLAT = "FLAT"
    HYPERBOLIC = "HYPERBOLIC"


@dataclass(frozen=True)
class SolutionFamily:
    family: Family
    n: int
    h: float
    lam: float
    closed_b: RadialScalarField
    closed_f: RadialScalarField

    def params(self):
        return OdeParams(self.n, self.h, 1.0)

    def initial_state(self, t0):
        b = self.closed_b.derivatives(t0, 1)
        f = self.closed_f.derivatives(t0, 1)
        return OdeState(float(t0), float(b[0]), float(b[1]), float(f[0]), float(f[1]))

    def structure(self):
        metric = WarpedProductMetric(self.n, self.closed_b, 1.0)
        return EinsteinTypeStructure(metric, self.closed_f, ConstantH(self.h))


def sphere_family(n, lam, h):
    if not lam > 0:
        raise ValueError("sphere family needs lambda > 0")
    k = sp.sqrt(sp.nsimplify(lam) / (n - 1))
    hi = float(sp.pi / k)
    b = RadialScalarField.from_expr(sp.sin(k * T) / k, 0.0, hi, name="b_sphere")
    f = RadialScalarField.constant(h / lam, 0.0, hi, name="f_sphere")
    return SolutionFamily(Family.SPHERE, n, float(h), float(lam), b, f)


def flat_family(n, f0=1.0, hi=100.0):
    b = RadialScalarField.from_expr(T, 0.0, hi, name="b_flat")
    f = RadialScalarField.constant(f0, 0.0, hi, name="f_flat")
    return SolutionFamily(Family.FLAT, n, 0.0, 0.0, b, f)


def hyperbolic_family(n, mu, h, hi=20.0):
    if not mu > 0:
        raise ValueError("hyperbolic family needs mu > 0")
    k = sp.sqrt(sp.nsimplify(mu) / (n - 1))
    b = RadialScalarField.from_expr(sp.sinh(k * T) / k, 0.0, hi, name="b_hyperbolic")
    f = RadialScalarField.constant(-h / mu, 0.0, hi, name="f_hyperbolic")
    return SolutionFamily(Family.HYPERBOLIC, n, float(h), -float(mu), b, f)


def family_deviation(traj, fam):
    """Max |b - b_closed| and |f - f_closed| over the trajectory."""
    dev = 0.0
    for st in traj.states:
        dev = max(dev, abs(st.b - fam.closed_b.value(st.t)), abs(st.f - fam.closed_f.value(st.t)))
    return dev


def synthesize_initial_state(n, h, a0, kappa=None, b0=1.0, bp_sign=1, kappa0=1.0,
                             t0=0.0, f0=1.0):
    """Initial data on the zero-scalar-curvature branch with first integral a0.

    b'0 comes from (n-2) b'^2 + 2 a0 b^(2-n) = (n-2) kappa with the sign
    ``bp_sign``; f'0 from f b'' - f' b' = h b with f0 fixed.
    """
    kappa = kappa0 if kappa is None else kappa
    # with the quadrature, s b^2 / (n-1) = (n-2)(kappa0 - kappa)
    if abs(kappa - kappa0) > INIT_TOL * (1 + abs(kappa0)):
        raise BadInitialData(f"kappa = {kappa} must equal kappa0 = {kappa0} for s = 0")
    if bp_sign not in (1, -1):
        raise BadInitialData("bp_sign must be +1 or -1")
    if not b0 > 0:
        raise BadInitialData(f"b0 must be positive, got {b0}")
    if f0 == 0:
        raise BadInitialData("f0 must be nonzero")
    disc = kappa - 2.0 * a0 * b0 ** (2 - n) / (n - 2)
    if disc < 0:
        raise BadInitialData(f"no real b'0: kappa - 2 a0 b0^(2-n)/(n-2) = {disc} < 0")
    bp0 = bp_sign * math.sqrt(disc)
    bpp0 = a0 * b0 ** (1 - n)
    num = f0 * bpp0 - h * b0
    if bp0 == 0.0:
        if abs(num) > INIT_TOL:
            raise BadInitialData("b'0 = 0 but f b'' - h b does not vanish")
        fp0 = 0.0
    else:
        fp0 = num / bp0
    params = OdeParams(n, float(h), float(kappa0), a0=float(a0), kappa=float(kappa))
    return OdeState(float(t0), float(b0), float(bp0), float(f0), float(fp0)), params


# first integrals and alpha dynamics -------------------------------------------


def _spline_derivative(t, y, nu):
    return make_interp_spline(t, y, k=5)(t, nu=nu)


@dataclass
class FirstIntegralsReport:
    t: list
    a0: list
    kappa: list
    quadrature_res: list
    alpha_res: list
    f2s: list
    drifts: dict = field(init=False)

    def __post_init__(self):
        self.drifts = {
            "a0": _drift(self.a0),
            "kappa": _drift(self.kappa),
            "f2s": _drift(self.f2s),
            "quadrature": max(map(abs, self.quadrature_res), default=0.0),
            "alpha": max(map(abs, self.alpha_res), default=0.0),
        }

    def fired(self, tol=A0_TOL, alpha_tol=None):
        """Names of monitored quantities whose drift exceeds ``tol``.

        The alpha residual comes from a spline derivative, so it is only
        tested when ``alpha_tol`` is given.
        """
        lim = dict.fromkeys(self.drifts, tol)
        lim["alpha"] = math.inf if alpha_tol is None else alpha_tol
        return sorted(k for k, v in self.drifts.items() if v > lim[k])

    def to_dict(self):
        return {"drifts": self.drifts}


def _drift(vals):
    if not vals:
        return 0.0
    ref = vals[0]
    return float(max(abs(v - ref) for v in vals))


def first_integrals(traj):
    p = traj.params
    n = p.n
    t = traj.t
    b = traj.column("b")
    bp = traj.column("bp")
    f = traj.column("f")
    fp = traj.column("fp")
    bpp, _ = traj.second_derivatives()
    a0 = b ** (n - 1) * bpp
    kappa = bp ** 2 + 2 * a0 * b ** (2 - n) / (n - 2)
    quad = f * bpp - fp * bp - p.h * b
    alpha = -(n - 1) * bpp / b
    if t.size >= 12:
        alpha_p = _spline_derivative(t, alpha, 1)
        # spline end conditions spoil the first and last few derivatives
        alpha_res = (alpha_p * b + n * alpha * bp)[3:-3]
    else:
        alpha_res = np.zeros(0)
    f2s = traj.column("f2s")
    return FirstIntegralsReport(list(map(float, t)), list(map(float, a0)), list(map(float, kappa)),
                                list(map(float, quad)), list(map(float, alpha_res)),
                                list(map(float, f2s)))


@dataclass
class AlphaDynamicsReport:
    t: list
    n_alpha_res: list
    nn_alpha_res: list
    max_abs: float = field(init=False)

    def __post_init__(self):
        self.max_abs = float(max(max(map(abs, self.n_alpha_res), default=0.0),
                                 max(map(abs, self.nn_alpha_res), default=0.0)))

    def passed(self, tol=1e-6):
        return self.max_abs <= tol

    def to_dict(self):
        return {"max_abs": self.max_abs,
                "max_n_alpha": max(map(abs, self.n_alpha_res), default=0.0),
                "max_nn_alpha": max(map(abs, self.nn_alpha_res), default=0.0)}


def alpha_dynamics_residual(traj, s_tol=S_TOL, trim=10):
    """Residuals of the N(alpha) and NN(alpha) formulas along a trajectory.

    N = grad f / |grad f| = sign(f') d/dt.  Spline end effects are avoided
    by dropping ``trim`` nodes at each end.
    """
    p = traj.params
    n, h = p.n, p.h
    t = traj.t
    if t.size < 2 * trim + 6:
        raise ValueError("trajectory too short for spline derivatives")
    b = traj.column("b")
    bp = traj.column("bp")
    f = traj.column("f")
    fp = traj.column("fp")
    bpp, _ = traj.second_derivatives()
    s = scalar_curvature(b, bp, bpp, n, p.kappa0)
    scale = 1.0 + np.max(np.abs(bpp / b)) + np.max(np.abs((p.kappa0 - bp ** 2) / b ** 2))
    if np.max(np.abs(s)) > s_tol * scale:
        raise NonzeroScalar(f"max |s| = {np.max(np.abs(s))} along the trajectory")
    if np.min(np.abs(fp)) <= 1e-8:
        raise CriticalPoint("f' vanishes along the trajectory")
    alpha = -(n - 1) * bpp / b
    a1 = _spline_derivative(t, alpha, 1)
    a2 = _spline_derivative(t, alpha, 2)
    sl = slice(trim, t.size - trim)
    bracket = f * alpha / (n - 1) + h
    n_res = np.sign(fp) * a1 - n * alpha / np.abs(fp) * bracket
    nn_res = a2 - (n / (n - 1) * alpha ** 2 + n * (n + 1) * alpha / fp ** 2 * bracket ** 2)
    return AlphaDynamicsReport(list(map(float, t[sl])), list(map(float, n_res[sl])),
                               list(map(float, nn_res[sl])))


# spline-backed structure -----------------------------------------------------


def trajectory_structure(traj):
    """EinsteinTypeStructure whose fields interpolate the trajectory.

    Node values of b, f and their first five derivatives are those of the
    exact local solution through each accepted state; between nodes the
    fields are quintic splines.
    """
    if len(traj) < 6:
        raise ValueError("need at least 6 accepted states")
    p = traj.params
    bj, fj = zip(*(taylor_jets(s, p) for s in traj.states))
    bd = np.array([j.derivatives() for j in bj]).T
    fd = np.array([j.derivatives() for j in fj]).T
    t = traj.t
    b = RadialScalarField.from_samples(t, *bd, name="b_traj")
    f = RadialScalarField.from_samples(t, *fd, name="f_traj")
    metric = WarpedProductMetric(p.n, b, p.kappa0, b_min_guard=p.b_min_guard)
    return EinsteinTypeStructure(metric, f, ConstantH(p.h))


def sample_nodes(traj, count=10, margin=3):
    """``count`` evenly spaced interior node times, deterministic."""
    t = traj.t
    idx = np.linspace(margin, t.size - 1 - margin, count).round().astype(int)
    return [float(t[i]) for i in idx]


# classification --------------------------------------------------------------


class Label(str, enum.Enum):
    RICCI_FLAT = "RICCI_FLAT"
    SPHERE_LIKE = "SPHERE_LIKE"
    HYPERBOLIC_LIKE = "HYPERBOLIC_LIKE"
    INCOMPLETE_OR_INCONSISTENT = "INCOMPLETE_OR_INCONSISTENT"


@dataclass(frozen=True)
class Classification:
    label: Label
    reason: str
    metrics: dict

    def to_dict(self):
        return {"label": self.label.value, "reason": self.reason, "metrics": self.metrics}


def classify(traj, a0_tol=A0_TOL, fit_tol=FIT_TOL, curv_tol=1e-8):
    """Heuristic label following the a0-sign case analysis.

    Curvature smallness is tested on the scale-free quantities b b'' and
    kappa0 - b'^2 so that a removable polar origin (b -> 0 on a flat
    solution) does not register as curvature.
    """
    p = traj.params
    n = p.n
    b = traj.column("b")
    bp = traj.column("bp")
    f = traj.column("f")
    bpp, _ = traj.second_derivatives()
    a0 = b ** (n - 1) * bpp
    s = scalar_curvature(b, bp, bpp, n, p.kappa0)
    kinds = [e.kind.value for e in traj.events]
    metrics = {
        "a0_first": float(a0[0]),
        "a0_max_abs": float(np.max(np.abs(a0))),
        "s_max_abs": float(np.max(np.abs(s))),
        "status": traj.status,
        "events": kinds,
    }
    flat_curv = max(np.max(np.abs(b * bpp)), np.max(np.abs(p.kappa0 - bp ** 2)))
    metrics["flat_curvature"] = float(flat_curv)
    if metrics["a0_max_abs"] <= a0_tol and flat_curv <= curv_tol:
        return Classification(Label.RICCI_FLAT, "a0 = 0 and curvature vanishes", metrics)

    lam = -(n - 1) * bpp / b
    lam_mean = float(np.mean(lam))
    metrics["lambda_mean"] = lam_mean
    metrics["lambda_std"] = float(np.std(lam))
    if lam_mean != 0.0 and np.std(lam) <= fit_tol * abs(lam_mean):
        f_dev = float(np.max(np.abs(f - p.h / lam_mean)))
        q_dev = float(np.max(np.abs(bp ** 2 + lam_mean / (n - 1) * b ** 2 - p.kappa0)))
        metrics["f_fit_dev"] = f_dev
        metrics["warp_fit_dev"] = q_dev
        if f_dev <= fit_tol * (1 + np.max(np.abs(f))) and q_dev <= fit_tol * (1 + abs(p.kappa0)):
            label = Label.SPHERE_LIKE if lam_mean > 0 else Label.HYPERBOLIC_LIKE
            return Classification(label, f"constant lambda = {lam_mean:.12g}", metrics)

    scale = 1.0 + np.max(np.abs(bpp / b)) + np.max(np.abs((p.kappa0 - bp ** 2) / b ** 2))
    if np.max(np.abs(s)) <= S_TOL * scale and metrics["a0_max_abs"] > a0_tol:
        a0_sign = float(np.sign(np.median(a0)))
        if a0_sign < 0:
            if bp[-1] < 0 and bpp[-1] < 0:
                # b(t) <= b_e + b'_e (t - t_e), so b vanishes within b_e / |b'_e|
                metrics["b_zero_bound"] = float(traj.t[-1] + b[-1] / abs(bp[-1]))
                reason = "a0 < 0: b' < 0 and b'' < 0, b convex-down to zero"
            elif "WARP_EXTREMUM" in kinds:
                reason = "a0 < 0: b has an interior maximum, cannot stay positive on a complete end"
            else:
                reason = "a0 < 0: b'' < 0 throughout, b concave and bounded"
        else:
            if "WARP_EXTREMUM" in kinds:
                reason = ("a0 > 0: b' = 0 where f alpha = -(n-1) h, "
                          "alpha < 0 attains an interior minimum")
            elif traj.status == "DOMAIN_EXIT":
                reason = "a0 > 0: trajectory left the admissible domain"
            else:
                reason = "a0 > 0: alpha < 0 monotone, no complete end compatible"
        return Classification(Label.INCOMPLETE_OR_INCONSISTENT, reason, metrics)

    reason = "no family match"
    if traj.status == "DOMAIN_EXIT":
        reason += f"; {traj.events[-1].detail}"
    return Classification(Label.INCOMPLETE_OR_INCONSISTENT, reason, metrics)
