"""Named, reproducible desk-scale experiments.

Each experiment declares a primary grid (which command-line overrides act
on) and a table of named tolerances, then records assertions, free
measurements, curves and truncation metadata on a :class:`Context`.  The
report is a JSON document whose only run-dependent part is ``wall_clock``.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import __version__
from .commutant import commutant_apply, commutation_defect
from .errors import ConfigInvalid, HmlError, UnknownExperiment
from .frames import frame_bounds_gram, frame_symbol_check, negative_frame_probe, orbit
from .grid import (HALF_LINE, UNIT_INTERVAL, LogGrid, SampledFunction, Side, inner_product, norm,
                   random_smooth, sample, sample_line)
from .hardy_ops import (SEED, HardyKind, apply_hardy, apply_V, apply_V_adjoint, hardy_operator,
                        normality_defect, power_iteration, shift_operator, spectrum_probe)
from .laguerre import (laguerre_orbit_fn, laguerre_shift, model_basis, model_basis_table,
                       sample_laguerre_function)
from .semigroup import apply_Ct, cogenerator_residual, hardy_via_semigroup, shift_line
from .subspaces import (FrequencySet, Verdict, cyclic_diagnostic, nonreducing_projection,
                        reducing_projection, star_cyclic_diagnostic)
from .transforms import (SQRT2PI, Direction, HalfPlaneSymbol, cov_T, fourier_at, mellin, phi_axis)

SCHEMA = "hml-report/1"
ENV_DEFAULT_N = "HML_DEFAULT_N"


# -- configuration and report -------------------------------------------------

@dataclass(frozen=True)
class GridSpec:
    tag: str
    x_min: float
    x_max: float
    n: int

    def build(self) -> LogGrid:
        return LogGrid(self.x_min, self.x_max, self.n, self.tag)


@dataclass
class ExperimentConfig:
    experiment: str
    n: int | None = None
    x_min: float | None = None
    x_max: float | None = None
    seed: int = SEED
    tolerances: dict = field(default_factory=dict)
    out: str | None = None
    csv_dir: str | None = None


@dataclass
class Assertion:
    name: str
    measured: object
    expected: object
    tolerance: object
    comparison: str
    provenance: str
    passed: bool

    def to_dict(self) -> dict:
        return {k: _jsonable(v) for k, v in self.__dict__.items()}


@dataclass
class Curve:
    """Columns of equal length, written to CSV and drawn as one figure."""

    name: str
    x_label: str
    x: np.ndarray
    series: dict
    logy: bool = False
    title: str = ""


@dataclass
class ExperimentReport:
    experiment: str
    inputs: dict
    assertions: list
    measurements: dict
    truncation: dict
    wall_clock: dict
    curves: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(a.passed for a in self.assertions) and self.wall_clock.get("within_budget", True)

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "version": __version__,
            "experiment": self.experiment,
            "inputs": _jsonable(self.inputs),
            "assertions": [a.to_dict() for a in self.assertions],
            "measurements": _jsonable(self.measurements),
            "truncation": _jsonable(self.truncation),
            "passed": self.passed,
            "wall_clock": _jsonable(self.wall_clock),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, allow_nan=True) + "\n"


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, np.ndarray):
        return [_jsonable(x) for x in v.tolist()]
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (complex, np.complexfloating)):
        return [float(np.real(v)), float(np.imag(v))]
    if isinstance(v, (float, np.floating)):
        return float(v)
    if hasattr(v, "value") and isinstance(getattr(v, "value"), str):
        return v.value
    return v


# -- experiment context ---------------------------------------------------------

class Context:
    def __init__(self, cfg: ExperimentConfig, spec: "ExperimentSpec"):
        self.cfg = cfg
        self.spec = spec
        self.rng = np.random.default_rng(cfg.seed)
        self.assertions: list[Assertion] = []
        self.measurements: dict = {}
        self.truncation: dict = {}
        self.curves: list[Curve] = []
        self.timings: dict = {}
        self._grid = None

    @property
    def grid(self) -> LogGrid:
        if self._grid is None:
            self._grid = resolve_grid(self.spec, self.cfg)
            self.truncation["grid"] = _grid_meta(self._grid)
        return self._grid

    def tol(self, name: str):
        return self.cfg.tolerances.get(name, self.spec.tolerances[name])

    def _add(self, name, measured, expected, tol, comparison, provenance, passed):
        self.assertions.append(Assertion(name, measured, expected, tol, comparison,
                                         provenance, bool(passed)))

    def at_most(self, name: str, measured: float, provenance: str, expected=0.0,
                tol_key: str | None = None):
        """measured <= tolerance (errors and defects)."""
        tol = self.tol(tol_key or name)
        m = float(measured)
        self._add(name, m, expected, tol, "<=", provenance, np.isfinite(m) and m <= tol)

    def near(self, name: str, measured: float, expected: float, provenance: str, relative=False):
        tol = self.tol(name)
        m = float(measured)
        dev = abs(m - expected) / abs(expected) if relative else abs(m - expected)
        self._add(name, m, expected, tol, "rel" if relative else "abs", provenance,
                  np.isfinite(m) and dev <= tol)

    def within(self, name: str, measured: float, provenance: str, expected=None):
        lo, hi = self.tol(name)
        m = float(measured)
        self._add(name, m, expected, [lo, hi], "in", provenance, lo <= m <= hi)

    def equals(self, name: str, measured, expected, provenance: str):
        self._add(name, measured, expected, None, "==", provenance, measured == expected)

    def record(self, name: str, value):
        self.measurements[name] = value

    def curve(self, name, x_label, x, series, logy=False, title=""):
        self.curves.append(Curve(name, x_label, np.asarray(x),
                                 {k: np.asarray(v) for k, v in series.items()}, logy, title))

    def timed(self, label: str, fn: Callable, *args, **kw):
        t0 = time.perf_counter()
        out = fn(*args, **kw)
        self.timings[label] = time.perf_counter() - t0
        return out


def _grid_meta(g: LogGrid) -> dict:
    return {"domain": g.tag, "x_min": g.x_min, "x_max": g.x_max, "n": g.n, "delta": g.delta}


@dataclass(frozen=True)
class ExperimentSpec:
    name: str
    criteria: tuple
    summary: str
    run: Callable
    grid: GridSpec | None
    tolerances: dict
    budget_s: float | None = None


REGISTRY: dict[str, ExperimentSpec] = {}


def experiment(name, criteria, summary, grid=None, tolerances=None, budget_s=None):
    def deco(fn):
        REGISTRY[name] = ExperimentSpec(name, tuple(criteria), summary, fn, grid,
                                        dict(tolerances or {}), budget_s)
        return fn
    return deco


def list_experiments() -> list[str]:
    return sorted(REGISTRY)


def _env_default_n():
    raw = os.environ.get(ENV_DEFAULT_N)
    if raw is None or raw.strip() == "":
        return None
    try:
        return int(raw)
    except ValueError:
        raise ConfigInvalid(f"{ENV_DEFAULT_N}={raw!r} is not an integer") from None


def resolve_grid(spec: ExperimentSpec, cfg: ExperimentConfig) -> LogGrid:
    g = spec.grid
    n = cfg.n if cfg.n is not None else (_env_default_n() or g.n)
    x_min = g.x_min if cfg.x_min is None else cfg.x_min
    x_max = g.x_max if cfg.x_max is None else cfg.x_max
    try:
        return LogGrid(x_min, x_max, n, g.tag)
    except HmlError as exc:
        raise ConfigInvalid(f"grid override rejected: {exc}") from exc


def validate_config(cfg: ExperimentConfig) -> ExperimentSpec:
    """Check a config against the registry without running anything."""
    if cfg.experiment not in REGISTRY:
        raise UnknownExperiment(f"unknown experiment {cfg.experiment!r}; "
                                f"known: {', '.join(list_experiments())}")
    spec = REGISTRY[cfg.experiment]
    if not isinstance(cfg.seed, (int, np.integer)) or cfg.seed < 0:
        raise ConfigInvalid("seed must be a non-negative integer")
    for key, val in cfg.tolerances.items():
        if key not in spec.tolerances:
            raise ConfigInvalid(f"{cfg.experiment} has no tolerance named {key!r}")
        default = spec.tolerances[key]
        if isinstance(default, (tuple, list)):
            ok = (isinstance(val, (tuple, list)) and len(val) == 2 and val[0] <= val[1])
        else:
            ok = isinstance(val, (int, float)) and val > 0
        if not ok:
            raise ConfigInvalid(f"tolerance {key!r} has an invalid value {val!r}")
    overrides = (cfg.n, cfg.x_min, cfg.x_max)
    if spec.grid is None:
        if any(v is not None for v in overrides):
            raise ConfigInvalid(f"{cfg.experiment} runs on a fixed grid ladder; "
                                "grid overrides do not apply")
    else:
        resolve_grid(spec, cfg)
    return spec


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    spec = validate_config(cfg)
    ctx = Context(cfg, spec)
    t0 = time.perf_counter()
    with np.errstate(over="ignore", under="ignore"):
        spec.run(ctx)
    total = time.perf_counter() - t0
    clock = {"total_s": total, "sections_s": dict(ctx.timings)}
    if spec.budget_s is not None:
        worst = max(ctx.timings.values()) if ctx.timings else total
        clock.update(budget_s=spec.budget_s, within_budget=worst < spec.budget_s)
    inputs = {"experiment": cfg.experiment, "criteria": list(spec.criteria),
              "seed": int(cfg.seed), "tolerances": dict(spec.tolerances, **cfg.tolerances),
              "grid_override": {"n": cfg.n, "x_min": cfg.x_min, "x_max": cfg.x_max}}
    return ExperimentReport(cfg.experiment, inputs, ctx.assertions, ctx.measurements,
                            ctx.truncation, clock, ctx.curves)


# -- shared helpers -------------------------------------------------------------

def _chi(grid: LogGrid, a: float = 0.0, b: float = 1.0) -> SampledFunction:
    return sample(lambda t: ((t > a) & (t < b)).astype(float), grid)


def _sech(x):
    a = np.exp(-np.abs(x))
    return 2 * a / (1 + a * a)


def _smooth_step(u):
    """C-infinity step: 0 for u <= 0, 1 for u >= 1."""
    u = np.clip(u, 0.0, 1.0)
    with np.errstate(divide="ignore"):
        a = np.where(u > 0, np.exp(-1.0 / np.where(u > 0, u, 1.0)), 0.0)
        b = np.where(u < 1, np.exp(-1.0 / np.where(u < 1, 1.0 - u, 1.0)), 0.0)
    return a / (a + b)


def band_stop(beta, lo: float, hi: float, ramp: float = 0.5):
    """Smooth multiplier equal to 0 on [lo, hi] and to 1 outside (lo - ramp, hi + ramp)."""
    return 1.0 - _smooth_step((beta - lo + ramp) / ramp) * _smooth_step((hi + ramp - beta) / ramp)


def _max_on(err: np.ndarray, beta: np.ndarray, bound: float) -> float:
    return float(np.max(np.abs(err)[np.abs(beta) <= bound]))


def sech_error(grid: LogGrid) -> float:
    G = mellin(sample(lambda t: 1 / (1 + t), grid))
    return _max_on(G.values - np.sqrt(np.pi / 2) * _sech(np.pi * grid.beta), grid.beta, 10.0)


def exp_power_error(grid: LogGrid) -> float:
    G = mellin(sample(lambda t: np.exp(-t), grid))
    return _max_on(np.abs(G.values) ** 2 - 0.5 * _sech(np.pi * grid.beta), grid.beta, 10.0)


def log_symbol_error(grid: LogGrid) -> float:
    # 1/(sqrt(t)(1 + log^2 t)) is 1/(1 + x^2) on the line; sampling there avoids exp(x)
    G = mellin(sample_line(lambda x: 1 / (1 + x * x), grid))
    return _max_on(G.values - np.sqrt(np.pi / 2) * np.exp(-np.abs(grid.beta)), grid.beta, 10.0)


def laguerre_orbit_errors(grid: LogGrid, nmax: int = 10) -> list[float]:
    f = _chi(grid)
    errs = []
    for n in range(nmax + 1):
        errs.append(norm(f - laguerre_orbit_fn(n, "unit", grid)))
        f = apply_V(f)
    return errs


def _norm_error(kind: str, grid: LogGrid) -> float:
    return 2.0 - power_iteration(hardy_operator(kind, grid)).value


CLOSED_NORM = "closed form: the Hardy operators have norm exactly 2"


# -- experiments ----------------------------------------------------------------

@experiment("norm-h1", [1], "power-iteration norm of H_1 on L^2(0,1)",
            GridSpec(UNIT_INTERVAL, -26.0, 0.0, 2048),
            {"norm": (1.95, 2.02), "spectrum_probe": 1e-5}, budget_s=10.0)
def _norm_h1(ctx: Context):
    g = ctx.grid
    op = hardy_operator(HardyKind.H1, g)
    res = ctx.timed("power_iteration", power_iteration, op, seed=ctx.cfg.seed)
    ctx.within("norm", res.value, CLOSED_NORM, expected=2.0)
    ctx.record("iterations", res.iterations)
    ctx.record("normality_defect", normality_defect(op, seed=ctx.cfg.seed))
    worst = 0.0
    for s in (0.0, 1.0, 2.0, 0.5, 1.0j, 1.0 + 1.0j):
        z = spectrum_probe(HardyKind.H1, s)
        worst = max(worst, abs(z - 1 / (s + 1)))
    ctx.at_most("spectrum_probe", worst,
                "closed form: H_1 t^s = t^s/(s+1) for Re s > -1/2 (eigenvalues fill the disk |z-1|<1)")
    ctx.truncation["power_iteration"] = {"max_iters": 500, "relative_tol": 1e-6}
    ctx.curve("power_iteration", "iteration", np.arange(1, res.iterations + 1),
              {"norm_estimate": np.sqrt(res.history)}, title="H_1 norm estimate")


@experiment("norm-hinf", [1], "power-iteration norm of H_inf on L^2(0,inf)",
            GridSpec(HALF_LINE, -26.0, 26.0, 4096),
            {"norm": (1.90, 2.05), "spectrum_circle": 0.02}, budget_s=10.0)
def _norm_hinf(ctx: Context):
    g = ctx.grid
    op = hardy_operator(HardyKind.HINF, g)
    res = ctx.timed("power_iteration", power_iteration, op, seed=ctx.cfg.seed)
    ctx.within("norm", res.value, CLOSED_NORM, expected=2.0)
    ctx.record("iterations", res.iterations)
    ctx.record("normality_defect", normality_defect(op, seed=ctx.cfg.seed))
    taus = np.linspace(-3.0, 3.0, 13)
    zs = np.array([spectrum_probe(HardyKind.HINF, tau, g) for tau in taus])
    dist = np.abs(np.abs(zs - 1) - 1)
    # a packet of width w averages the symbol over |beta - tau| ~ 1/w; near
    # beta = 0 the symbol sweeps the circle fastest, so only |tau| >= 1 is asserted
    ctx.record("circle_distance", dict(zip((f"{t:g}" for t in taus), dist)))
    ctx.at_most("spectrum_circle", float(np.max(dist[np.abs(taus) >= 1])),
                "closed form: the spectrum of H_inf is the circle |z - 1| = 1")
    ctx.truncation["power_iteration"] = {"max_iters": 500, "relative_tol": 1e-6}
    ctx.curve("power_iteration", "iteration", np.arange(1, res.iterations + 1),
              {"norm_estimate": np.sqrt(res.history)}, title="H_inf norm estimate")
    ctx.curve("spectrum_probe", "tau", taus, {"re": zs.real, "im": zs.imag},
              title="H_inf Rayleigh quotients of frequency packets")


def _unitarity_corpus(grid: LogGrid) -> dict:
    from .laguerre import laguerre_poly
    return {
        "chi": _chi(grid),
        "chi_2_3": _chi(grid, 2.0, 3.0),
        "1/(1+t)": sample(lambda t: 1 / (1 + t), grid),
        "1/(1+t)^2": sample(lambda t: (1 + t) ** -2.0, grid),
        "1/(1+t)^3": sample(lambda t: (1 + t) ** -3.0, grid),
        "exp(-t)": sample(lambda t: np.exp(-t), grid),
        "t exp(-t)": sample(lambda t: t * np.exp(-t), grid),
        "g0": sample(lambda t: np.exp(-0.5 * np.log(t) ** 2) / np.sqrt(t), grid),
        "L3(-log t) chi": laguerre_orbit_fn(3, "unit", grid),
        "tail n=2": laguerre_orbit_fn(2, "tail", grid),
        "sqrt(t) exp(-t)": sample(lambda t: np.sqrt(t) * np.exp(-t), grid),
        "packet": sample(lambda t: t ** (2j - 0.5) * np.exp(-np.log(t / 3) ** 2 / 8), grid),
    }


@experiment("mellin-unitarity", [2], "Plancherel and round trip for the Mellin transform",
            GridSpec(HALF_LINE, -26.0, 26.0, 4096),
            {"plancherel": 1e-6, "round_trip": 1e-8})
def _mellin_unitarity(ctx: Context):
    g = ctx.grid
    corpus = _unitarity_corpus(g)
    ratios, trips = {}, {}
    for name, f in corpus.items():
        G = mellin(f)
        ratios[name] = norm(G) / norm(f)
        trips[name] = norm(mellin(G, Direction.INVERSE) - f) / norm(f)
    ctx.record("norm_ratios", ratios)
    ctx.record("round_trip_errors", trips)
    ctx.at_most("plancherel", max(abs(r - 1) for r in ratios.values()),
                "closed form: Q is unitary from L^2(0,inf) onto L^2(iR)")
    ctx.at_most("round_trip", max(trips.values()),
                "closed form: the inverse Mellin formula inverts Q")
    ctx.truncation["corpus_size"] = len(corpus)


@experiment("mellin-sech", [3], "Q(1/(1+t)) against sqrt(pi/2) sech(pi beta)",
            GridSpec(HALF_LINE, -26.0, 26.0, 4096), {"sech": 1e-4})
def _mellin_sech(ctx: Context):
    g = ctx.grid
    G = mellin(sample(lambda t: 1 / (1 + t), g))
    ref = np.sqrt(np.pi / 2) * _sech(np.pi * g.beta)
    ctx.at_most("sech", _max_on(G.values - ref, g.beta, 10.0),
                "closed form: Q(1/(1+t))(i beta) = sqrt(pi/2) sech(pi beta)")
    ctx.truncation["beta_window"] = 10.0
    m = np.abs(g.beta) <= 10
    ctx.curve("symbol", "beta", g.beta[m], {"re_Qf": G.values.real[m], "oracle": ref[m],
                                            "abs_error": np.abs(G.values - ref)[m]},
              title="Mellin symbol of 1/(1+t)")


@experiment("mellin-closed-forms", [3], "closed-form Mellin symbols of three cyclic examples",
            GridSpec(HALF_LINE, -26.0, 26.0, 4096),
            {"sech": 1e-4, "exp_power": 1e-4, "log_symbol": 1e-3})
def _mellin_closed_forms(ctx: Context):
    g = ctx.grid
    ctx.at_most("sech", sech_error(g), "closed form: Q(1/(1+t)) = sqrt(pi/2) sech(pi beta)")
    ctx.at_most("exp_power", exp_power_error(g),
                "closed form: |Q(exp(-t))|^2 = |Gamma(1/2 + i beta)|^2/(2 pi) = sech(pi beta)/2")
    # the log example decays like 1/x^2 on the line, so it needs a long window;
    # the spacing only has to resolve |beta| <= 10
    wide = LogGrid(-1024.0, 1024.0, 8192, HALF_LINE)
    ctx.at_most("log_symbol", log_symbol_error(wide),
                "closed form: Q(1/(sqrt(t)(1 + log^2 t))) = sqrt(pi/2) exp(-|beta|)")
    ctx.truncation["log_symbol_grid"] = _grid_meta(wide)
    ctx.truncation["beta_window"] = 10.0


@experiment("laguerre-orbit", [4], "V^n chi against L_n(-log t) chi and orthonormality",
            GridSpec(HALF_LINE, -128.0, 128.0, 32768),
            {"orbit": 1e-3, "gram": 1e-3})
def _laguerre_orbit(ctx: Context):
    g = ctx.grid
    errs = laguerre_orbit_errors(g, 10)
    ctx.at_most("orbit", max(errs), "closed form: V^n chi = L_n(-log t) chi")
    f = _chi(g)
    vecs = []
    for _ in range(16):
        vecs.append(f)
        f = apply_V(f)
    gram = np.array([[inner_product(a, b) for b in vecs] for a in vecs])
    ctx.at_most("gram", float(np.max(np.abs(gram - np.eye(16)))),
                "closed form: V is an isometry and {V^n chi} is orthonormal")
    ctx.record("orbit_errors", errs)
    ctx.truncation["orbit_length"] = 16
    ctx.curve("orbit_error", "n", np.arange(11), {"error": errs}, logy=True,
              title="||V^n chi - L_n(-log t) chi||")


@experiment("model-bases", [5], "Mellin images of the Laguerre orbits against u_n and v_n",
            GridSpec(HALF_LINE, -64.0, 64.0, 16384),
            {"u_basis": 1e-3, "v_basis": 1e-3})
def _model_bases(ctx: Context):
    g = ctx.grid
    eu, ev = [], []
    f = _chi(g)
    tail = apply_V_adjoint(_chi(g))
    U = model_basis_table(8, "plus", g)
    W = model_basis_table(8, "minus", g)
    for n in range(9):
        eu.append(norm(mellin(f).with_values(mellin(f).values - U[n])))
        # -V^{*(n+1)} chi = L_n(log t)/t on t > 1 has Mellin image v_n
        ev.append(norm(mellin(-tail).with_values(mellin(-tail).values - W[n])))
        f = apply_V(f)
        tail = apply_V_adjoint(tail)
    ctx.at_most("u_basis", max(eu), "closed form: Q(L_n(-log t) chi) = u_n")
    ctx.at_most("v_basis", max(ev),
                "derived: Q(L_n(log t)/t on t > 1) = v_n, and that function is -V^{*(n+1)} chi")
    ctx.record("u_errors", eu)
    ctx.record("v_errors", ev)
    ctx.truncation["model_basis"] = {"aliased": True, "terms": 64}
    ctx.curve("basis_error", "n", np.arange(9), {"u": eu, "v": ev}, logy=True,
              title="Mellin images of the Laguerre orbits")


@experiment("laguerre-shift", [6], "Laguerre shift on Phi_n and the Laplace-side identity",
            GridSpec(HALF_LINE, -100.0, 100.0, 16384),
            {"shift": 1e-3, "bilateral": 1e-3, "laplace": 1e-3})
def _laguerre_shift(ctx: Context):
    g = ctx.grid
    es = [norm(laguerre_shift(sample_laguerre_function(n, g)) - sample_laguerre_function(n + 1, g))
          for n in range(11)]
    eb = [norm(laguerre_shift(sample_laguerre_function(n, g), bilateral=True)
               - sample_laguerre_function(n + 1, g)) for n in range(-4, 4)]
    ctx.at_most("shift", max(es), "closed form: the Laguerre shift maps Phi_n to Phi_{n+1}")
    ctx.at_most("bilateral", max(eb), "closed form: the bilateral shift maps Phi_n to Phi_{n+1}, n in Z")
    omega = np.linspace(-10.0, 10.0, 201)
    el = []
    for n in range(11):
        got = fourier_at(sample_laguerre_function(n, g), omega, sign=-1)
        s = 1j * omega
        ref = (s - 0.5) ** n / (s + 0.5) ** (n + 1) / SQRT2PI
        el.append(float(np.max(np.abs(got - ref))))
    ctx.at_most("laplace", max(el),
                "closed form: transform of exp(-x/2) L_n(x) is (i w - 1/2)^n/(i w + 1/2)^(n+1)/sqrt(2 pi)")
    ctx.record("shift_errors", es)
    ctx.record("laplace_errors", el)
    ctx.truncation["omega_window"] = 10.0
    ctx.curve("shift_error", "n", np.arange(11), {"shift": es, "laplace": el}, logy=True,
              title="Laguerre shift identities")


@experiment("reducing-projection", [7], "frequency-band projections reduce H_inf",
            GridSpec(HALF_LINE, -2048.0, 2048.0, 32768),
            {"idempotent": 1e-6, "self_adjoint": 1e-6, "complement": 1e-6, "commutation": 1e-3})
def _reducing_projection(ctx: Context):
    # sharp band edges give P_E f sinc tails; a long window keeps the
    # boundary of the cumulative H_inf away from them (work on the line side)
    g = ctx.grid
    rng = ctx.rng
    worst = dict(idempotent=0.0, self_adjoint=0.0, complement=0.0, commutation=0.0)
    bands = []
    for _ in range(3):
        lo, hi = sorted(rng.uniform(-5.0, 5.0, 2))
        bands.append((float(lo), float(hi)))
        E = FrequencySet.band(g, lo, hi)
        f = random_smooth(g, rng, side=Side.LINE)
        h = random_smooth(g, rng, side=Side.LINE)
        P = lambda v: reducing_projection(E, v)  # noqa: E731
        Pc = lambda v: reducing_projection(E.complement(), v)  # noqa: E731
        pf = P(f)
        worst["idempotent"] = max(worst["idempotent"], norm(P(pf) - pf))
        worst["self_adjoint"] = max(worst["self_adjoint"],
                                    abs(inner_product(pf, h) - inner_product(f, P(h))))
        worst["complement"] = max(worst["complement"], norm(pf + Pc(f) - f))
        worst["commutation"] = max(worst["commutation"],
                                   norm(P(apply_hardy(HardyKind.HINF, f))
                                        - apply_hardy(HardyKind.HINF, pf)))
    for key, what in [("idempotent", "P_E^2 = P_E"), ("self_adjoint", "P_E^* = P_E"),
                      ("complement", "P_E + P_{E^c} = I"),
                      ("commutation", "P_E H_inf = H_inf P_E")]:
        ctx.at_most(key, worst[key], f"closed form: {what} for Q^{{-1}}(1_E L^2)")
    ctx.record("bands", bands)


@experiment("invariant-membership", [8], "chi lies in a non-reducing H_inf-invariant subspace",
            GridSpec(HALF_LINE, -26.0, 26.0, 4096), {"membership": 1e-3, "non_reducing": 0.1})
def _invariant_membership(ctx: Context):
    g = ctx.grid
    b = g.beta
    q = HalfPlaneSymbol(g, Side.FREQUENCY, (0.5 - 1j * b) / (0.5 + 1j * b), "unimodular")
    chi = _chi(g)
    err = norm(nonreducing_projection(q, chi, "minus") - chi) / norm(chi)
    ctx.at_most("membership", err,
                "closed form: Q chi = q(i beta) h-transform with h(w) = exp(-w/2)/sqrt(2 pi)")
    # the subspace does not reduce: it misses part of H_inf^* chi
    hstar = apply_hardy(HardyKind.HINFSTAR, chi)
    out = norm(nonreducing_projection(q, hstar, "plus")) / norm(hstar)
    ctx.record("complement_component_of_Hstar_chi", out)
    ctx.near("non_reducing", 1.0 if out > 1e-2 else 0.0, 1.0,
             "derived: H_inf^* chi has a component in q H^2_+, so the subspace does not reduce")


CYCLIC_GRID = (-64.0, 64.0, 1 << 14)


def _cyclic_corpus(grid: LogGrid) -> dict:
    return {
        "1/(1+t)": sample(lambda t: 1 / (1 + t), grid),
        "exp(-t)": sample(lambda t: np.exp(-t), grid),
        "1/(1+t)^1": sample(lambda t: (1 + t) ** -1.0, grid),
        "1/(1+t)^2": sample(lambda t: (1 + t) ** -2.0, grid),
        "1/(1+t)^3": sample(lambda t: (1 + t) ** -3.0, grid),
    }


@experiment("cyclicity", [9], "cyclic and star-cyclic diagnostics on standard examples",
            GridSpec(HALF_LINE, *CYCLIC_GRID), {})
def _cyclicity(ctx: Context):
    g = ctx.grid
    verdicts = {}
    for name, f in _cyclic_corpus(g).items():
        verdicts[name] = cyclic_diagnostic(f)
    wide = LogGrid(-1024.0, 1024.0, 1 << 18, HALF_LINE)
    verdicts["1/(sqrt(t)(1+log^2 t))"] = cyclic_diagnostic(sample_line(lambda x: 1 / (1 + x * x), wide))
    star = {
        "chi": _chi(g),
        "chi_2_3": _chi(g, 2.0, 3.0),
        "g0": sample(lambda t: np.exp(-0.5 * np.log(t) ** 2) / np.sqrt(t), g),
    }
    sverdicts = {k: star_cyclic_diagnostic(f) for k, f in star.items()}
    base = mellin(sample(lambda t: 1 / (1 + t), g))
    # zero on 1 <= beta <= 3 with smooth shoulders, so the line function still decays
    banded = base.with_values(band_stop(g.beta, 1.0, 3.0) * base.values)
    sverdicts["banded"] = star_cyclic_diagnostic(banded)
    for name, v in verdicts.items():
        ctx.equals(f"cyclic[{name}]", v.verdict.value, Verdict.CYCLIC.value,
                   "closed form: log|Q f| is not integrable against 1/(1+beta^2)")
    for name in ("chi", "chi_2_3", "g0"):
        ctx.equals(f"star[{name}]", sverdicts[name].verdict.value, Verdict.STAR_CYCLIC.value,
                   "closed form: Q f vanishes only on a null set")
    ctx.equals("star[banded]", sverdicts["banded"].verdict.value, Verdict.NOT_STAR_CYCLIC.value,
               "construction: Q f vanishes on the band 1 <= beta <= 3")
    ctx.record("cyclic", {k: v.to_dict() for k, v in verdicts.items()})
    ctx.record("star", {k: v.to_dict() for k, v in sverdicts.items()})
    ctx.truncation["log_example_grid"] = _grid_meta(wide)
    ctx.truncation["rules"] = {"rel_threshold": 1e-8, "band_fraction": 0.01, "levels": 6,
                               "ratio_min": 0.9, "min_window": 6.0}
    v = verdicts["1/(1+t)"]
    if v.windows:
        ctx.curve("log_integrals", "window", v.windows,
                  {name: list(vv.log_integral_estimates) for name, vv in verdicts.items()
                   if len(vv.log_integral_estimates) == len(v.windows) and name != "1/(sqrt(t)(1+log^2 t))"},
                  title="truncated log-integrals (windows of 1/(1+t))")


@experiment("semigroup-identity", [10], "Laplace transform of the dilation semigroup gives H_inf",
            GridSpec(HALF_LINE, -26.0, 26.0, 4096),
            {"hardy": 1e-3, "law": 1e-6, "conjugation": 1e-6, "cogenerator": 1e-3})
def _semigroup(ctx: Context):
    g = ctx.grid
    tests = {"chi": _chi(g), "exp(-t)": sample(lambda t: np.exp(-t), g),
             "1/(1+t)": sample(lambda t: 1 / (1 + t), g)}
    errs = {}
    for name, f in tests.items():
        via = ctx.timed(f"semigroup[{name}]", hardy_via_semigroup, f, 40.0)
        errs[name] = norm(via - apply_hardy(HardyKind.HINF, f)) / norm(f)
    ctx.at_most("hardy", max(errs.values()),
                "closed form: int_0^inf exp(-t/2) C_t f dt = H_inf f")
    ctx.record("hardy_errors", errs)
    f = tests["1/(1+t)"]
    law = 0.0
    for i, j in [(3, 5), (40, 17), (100, 256)]:
        s, t = i * g.delta, j * g.delta
        law = max(law, norm(apply_Ct(apply_Ct(f, s), t) - apply_Ct(f, s + t)))
    ctx.at_most("law", law, "closed form: C_s C_t = C_{s+t}")
    line = cov_T(f)
    conj = 0.0
    for k in (7, 64, 300):
        t = k * g.delta
        conj = max(conj, norm(cov_T(apply_Ct(f, t)) - shift_line(line, t)))
    ctx.at_most("conjugation", conj,
                "derived: T C_t T^{-1} g(x) = g(x - t), a unitary translation")
    cog = max(cogenerator_residual(lambda t: np.exp(-t), g),
              cogenerator_residual(lambda t: t * np.exp(-t * t), g))
    ctx.at_most("cogenerator", cog, "closed form: (A - I/2)^{-1} = -H_inf")
    ctx.truncation["t_max"] = 40.0
    ctx.truncation["dt"] = g.delta


def _phi_bar(beta):
    return np.conj(phi_axis(beta))


def _phi_sq(beta):
    return phi_axis(beta) ** 2


@experiment("commutant-phi", [11], "operators Q^{-1} M_g Q commute with H_inf and H_1^*",
            GridSpec(HALF_LINE, -40.0, 40.0, 8192),
            {"commutation": 1e-3, "phi_bar_vs_I_minus_Hinf": 1e-4, "phi_vs_I_minus_H1star": 1e-4})
def _commutant(ctx: Context):
    g = ctx.grid
    defects = {
        "Hinf tanh": commutation_defect("Hinf", np.tanh, grid=g, seed=ctx.cfg.seed),
        "Hinf phi_bar": commutation_defect("Hinf", _phi_bar, grid=g, seed=ctx.cfg.seed),
        "Hinf phi^2": commutation_defect("Hinf", _phi_sq, grid=g, seed=ctx.cfg.seed),
        "H1star phi^2": commutation_defect("H1star", _phi_sq, seed=ctx.cfg.seed),
    }
    ctx.at_most("commutation", max(defects.values()),
                "closed form: multipliers on the Mellin side commute with M_{1/(1/2 - i beta)}")
    ctx.record("defects", defects)
    rng = ctx.rng
    e1 = e2 = 0.0
    unit = LogGrid(-26.0, 0.0, 8192, UNIT_INTERVAL)
    for _ in range(4):
        f = random_smooth(g, rng)
        e1 = max(e1, norm(commutant_apply("Hinf", _phi_bar, f) - (f - apply_hardy(HardyKind.HINF, f))))
        h = random_smooth(unit, rng)
        e2 = max(e2, norm(commutant_apply("H1star", phi_axis, h)
                          - (h - apply_hardy(HardyKind.H1STAR, h))))
    ctx.at_most("phi_bar_vs_I_minus_Hinf", e1, "closed form: Q (I - H_inf) Q^{-1} = M_{conj(phi)}")
    ctx.at_most("phi_vs_I_minus_H1star", e2, "closed form: Q (I - H_1^*) = M_phi Q on L^2(0,1)")
    ctx.truncation["trials"] = 8
    ctx.truncation["unit_grid"] = _grid_meta(unit)


@experiment("frame-monomial", [12], "frame bounds of t^alpha for the orbit of I - H_1^*",
            GridSpec(UNIT_INTERVAL, -26.0, 0.0, 2048),
            {"chi_c1": 0.02, "chi_c2": 0.02, "t_c1": 0.15, "t_c2": 0.05, "gram_vs_symbol": 0.2,
             "riesz_chi": 0.05})
def _frame_monomial(ctx: Context):
    g = ctx.grid
    chi = sample(lambda t: np.ones_like(t), g)
    mono = sample(lambda t: t, g)
    rc = frame_symbol_check(chi)
    rt = frame_symbol_check(mono)
    ctx.near("chi_c1", rc.c1, 1.0, "closed form: J^{-1} Q chi = 1")
    ctx.near("chi_c2", rc.c2, 1.0, "closed form: J^{-1} Q chi = 1")
    ctx.near("t_c1", rt.c1, 1 / 9, "closed form: J^{-1} Q t = 1/(2 - z), min |u|^2 = 1/9 at z = -1",
             relative=True)
    ctx.near("t_c2", rt.c2, 1.0, "closed form: max |u|^2 = 1 at z = 1", relative=True)
    ctx.equals("t_verdict", rt.verdict, "frame vector", "closed form: 1/(2 - z) and 2 - z are bounded")
    # Gram oracle on a longer window where the orbit stays resolved
    wide = LogGrid(-64.0, 0.0, 8192, UNIT_INTERVAL)
    op = shift_operator(wide)
    mono_w = sample(lambda t: t, wide)
    trunc = {}
    for M in (16, 32, 64):
        r = frame_bounds_gram(orbit(op, mono_w, M), probe_dim=8)
        trunc[M] = (r.c1, r.c2)
    c1g, c2g = trunc[64]
    agree = max(abs(c1g - rt.c1) / rt.c1, abs(c2g - rt.c2) / rt.c2)
    ctx.at_most("gram_vs_symbol", agree,
                "derived: the compressed frame operator tends to the symbol bounds as M grows")
    chi_w = sample(lambda t: np.ones_like(t), wide)
    rr = frame_bounds_gram(orbit(op, chi_w, 32), probe_dim=8)
    ctx.at_most("riesz_chi", max(abs(rr.c1 - 1), abs(rr.c2 - 1)),
                "closed form: {(I - H_1^*)^n chi} is orthonormal, so c1 = c2 = 1")
    ctx.record("symbol_chi", rc.to_dict())
    ctx.record("symbol_t", rt.to_dict())
    ctx.record("gram_t", {str(M): list(v) for M, v in trunc.items()})
    ctx.truncation["gram_grid"] = _grid_meta(wide)
    ctx.truncation["circle_n"] = 4096
    ctx.truncation["probe_dim"] = 8
    Ms = np.array(sorted(trunc))
    ctx.curve("gram_vs_truncation", "M", Ms,
              {"c1": [trunc[m][0] for m in Ms], "c2": [trunc[m][1] for m in Ms],
               "symbol_c1": np.full(Ms.size, rt.c1), "symbol_c2": np.full(Ms.size, rt.c2)},
              title="frame bounds of t: Gram method against the symbol")


@experiment("frame-negative", [12], "no frame vectors for the backward and bilateral shifts",
            GridSpec(HALF_LINE, -512.0, 512.0, 1 << 16), {"decay": 1e-2})
def _frame_negative(ctx: Context):
    g = ctx.grid
    seqs = {}
    v_plus = model_basis(0, "plus", g)
    seqs["backward_shift"] = negative_frame_probe("backward_shift", v_plus, M=64, K=16)
    b = g.beta
    w = np.exp(-b * b / 2) * (1 + 0.5j * b)
    v_any = HalfPlaneSymbol(g, Side.FREQUENCY, w / np.sqrt(np.sum(np.abs(w) ** 2) * g.dbeta))
    seqs["bilateral_shift"] = negative_frame_probe("bilateral_shift", v_any, M=64, K=16)
    for k, s in seqs.items():
        ctx.at_most(f"decay[{k}]", float(s[16] / s[0]),
                    "derived: sum_n |<p_k, A^n v>|^2 tends to zero as k grows", tol_key="decay")
    ctx.record("sequences", {k: list(s) for k, s in seqs.items()})
    ctx.truncation["M"] = 64
    ctx.truncation["K"] = 16
    ctx.curve("probe_sequences", "k", np.arange(17), seqs, logy=True,
              title="frame-probe sums for the backward and bilateral shifts")


REFINE_LADDER = {
    "norm_h1": [(UNIT_INTERVAL, -26.0, 0.0, 2048), (UNIT_INTERVAL, -52.0, 0.0, 4096)],
    "norm_hinf": [(HALF_LINE, -26.0, 26.0, 4096), (HALF_LINE, -52.0, 52.0, 8192)],
    "sech": [(HALF_LINE, -13.0, 13.0, 2048), (HALF_LINE, -26.0, 26.0, 4096)],
    "exp_power": [(HALF_LINE, -13.0, 13.0, 2048), (HALF_LINE, -26.0, 26.0, 4096)],
    "log_symbol": [(HALF_LINE, -1024.0, 1024.0, 8192), (HALF_LINE, -2048.0, 2048.0, 16384)],
    "laguerre_orbit": [(HALF_LINE, -128.0, 128.0, 32768), (HALF_LINE, -128.0, 128.0, 65536)],
}


def refinement_errors() -> dict:
    meas = {
        "norm_h1": lambda g: _norm_error("H1", g),
        "norm_hinf": lambda g: _norm_error("Hinf", g),
        "sech": sech_error,
        "exp_power": exp_power_error,
        "log_symbol": log_symbol_error,
        "laguerre_orbit": lambda g: max(laguerre_orbit_errors(g, 10)),
    }
    out = {}
    for key, ladder in REFINE_LADDER.items():
        errs = [meas[key](LogGrid(a, b, n, tag)) for tag, a, b, n in ladder]
        out[key] = errs
    return out


@experiment("grid-refinement", [13], "doubling n at least halves the errors of the norm, "
            "closed-form symbol and Laguerre orbit checks", None, {"ratio": 0.5})
def _grid_refinement(ctx: Context):
    errs = ctx.timed("ladder", refinement_errors)
    for key, (e1, e2) in errs.items():
        ctx.at_most(f"ratio[{key}]", e2 / e1,
                    f"derived: doubling n at least halves the {key} error", tol_key="ratio")
    ctx.record("errors", errs)
    ctx.truncation["ladder"] = {k: [dict(zip(("domain", "x_min", "x_max", "n"), s)) for s in v]
                                for k, v in REFINE_LADDER.items()}
    keys = list(errs)
    ctx.curve("refinement", "step", np.array([0, 1]),
              {k: errs[k] for k in keys}, logy=True, title="errors before and after doubling n")
