"""Seeded randomized soundness scans.

Each instance is a random finite space plus a random self-map.  Every
applicable verifier runs over the zeta pool and the a-sweep; a *soundness
violation* is a report whose conditions all hold while the oracle refutes
the conclusion.  The scan also checks, per instance, that the naive
recomputation agrees with :mod:`fixfig.geometry` and (for small n) that the
subset enumeration reproduces the fixed-figure catalogue.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from fixfig.geometry import SelfMap, Shape, big_m, enumerate_figures, members, radius_number
from fixfig.oracle.naive import fixed_member_sets_by_subsets, recompute_numbers
from fixfig.oracle.rng import SplitMix64, instance_seeds
from fixfig.simfunc import DEFAULT_ZETA_POOL, SimFunc
from fixfig.spaces import (
    FiniteDistanceSpace,
    Kind,
    ParameterError,
    b_from_s,
    builtin_space,
    s_from_metric,
)
from fixfig.verifiers import (
    DEFAULT_A_SWEEP,
    VerifierReport,
    verify_closed_ellipse,
    verify_fixed_circle,
    verify_fixed_disc,
    verify_fixed_ellipse,
    verify_identity_characterization,
    verify_phi_circle,
    verify_uniqueness,
)

__all__ = [
    "MAP_POLICIES",
    "ScanConfig",
    "Instance",
    "TheoremStats",
    "Violation",
    "InstanceResult",
    "ScanReport",
    "generate_instance",
    "run_instance",
    "soundness_scan",
]

MAP_POLICIES = ("mixed", "identity", "uniform", "sparse")
THEOREMS = ("ellipse", "circle", "disc", "closed-ellipse", "phi-circle", "uniqueness", "identity")


@dataclass(frozen=True)
class ScanConfig:
    seed: int = 42
    instances: int = 200
    min_n: int = 2
    max_n: int = 8
    kinds: tuple[Kind, ...] = (Kind.METRIC, Kind.S_METRIC, Kind.B_METRIC)
    map_policy: str = "mixed"
    zeta_pool: tuple[SimFunc, ...] = DEFAULT_ZETA_POOL
    a_values: tuple[Fraction, ...] = DEFAULT_A_SWEEP
    max_weight: int = 6
    catalog_check_max_n: int = 6
    workers: int = 1

    def __post_init__(self):
        if self.instances < 1:
            raise ParameterError(f"instance count must be >= 1, got {self.instances}")
        if not 1 <= self.min_n <= self.max_n:
            raise ParameterError(f"need 1 <= min_n <= max_n, got {self.min_n}..{self.max_n}")
        if self.map_policy not in MAP_POLICIES:
            raise ParameterError(f"unknown map policy {self.map_policy!r}; expected one of {MAP_POLICIES}")
        if not self.kinds:
            raise ParameterError("kind mix is empty")
        if not self.zeta_pool:
            raise ParameterError("zeta pool is empty")
        if self.max_weight < 1:
            raise ParameterError(f"max_weight must be >= 1, got {self.max_weight}")
        object.__setattr__(self, "kinds", tuple(Kind(k) for k in self.kinds))
        object.__setattr__(self, "zeta_pool", tuple(self.zeta_pool))
        object.__setattr__(self, "a_values", tuple(Fraction(a) for a in self.a_values))


@dataclass(frozen=True)
class Instance:
    index: int
    space: FiniteDistanceSpace
    f: SelfMap
    generator: str


def _random_metric(rng: SplitMix64, n: int, max_weight: int) -> FiniteDistanceSpace:
    """Shortest-path closure of random positive integer edge weights."""
    d = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            d[i][j] = d[j][i] = rng.randint(1, max_weight)
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if d[i][k] + d[k][j] < d[i][j]:
                    d[i][j] = d[i][k] + d[k][j]
    return FiniteDistanceSpace.metric([f"p{i}" for i in range(n)], d)


def _random_integer_labels(rng: SplitMix64, n: int) -> list[int]:
    pool = list(range(-12, 25))
    out = []
    for _ in range(n):
        out.append(pool.pop(rng.randbelow(len(pool))))
    return sorted(out)


def _random_s_metric(rng: SplitMix64, n: int, max_weight: int) -> tuple[FiniteDistanceSpace, str]:
    if rng.randbelow(2) == 0:
        return s_from_metric(_random_metric(rng, n, max_weight)), "s-from-metric"
    return builtin_space("second-s-metric", _random_integer_labels(rng, n)), "second-s-metric"


def _random_map(rng: SplitMix64, n: int, policy: str) -> tuple[SelfMap, str]:
    if policy == "mixed":
        roll = rng.randbelow(10)
        policy = "identity" if roll == 0 else ("uniform" if roll < 3 else "sparse")
    if policy == "identity":
        return SelfMap.identity(n), policy
    if policy == "uniform":
        return SelfMap(tuple(rng.randbelow(n) for _ in range(n))), policy
    images = []
    for x in range(n):
        images.append(rng.randbelow(n) if rng.randbelow(3) == 0 else x)
    return SelfMap(tuple(images)), policy


def _generate(config: ScanConfig, index: int, seed: int) -> Instance:
    rng = SplitMix64(seed)
    n = rng.randint(config.min_n, config.max_n)
    kind = config.kinds[rng.randbelow(len(config.kinds))]
    if kind is Kind.METRIC:
        space, gen = _random_metric(rng, n, config.max_weight), "metric"
    else:
        space, gen = _random_s_metric(rng, n, config.max_weight)
        if kind is Kind.B_METRIC:
            space, gen = b_from_s(space), f"b-from-{gen}"
    f, policy = _random_map(rng, n, config.map_policy)
    return Instance(index, space, f, f"{gen}/{policy}")


def generate_instance(config: ScanConfig, index: int) -> Instance:
    """Regenerate instance ``index`` of the stream defined by ``config.seed``."""
    return _generate(config, index, instance_seeds(config.seed, index + 1)[index])


@dataclass
class TheoremStats:
    runs: int = 0
    applicable: int = 0
    passed: int = 0
    vacuous: int = 0
    violations: int = 0
    non_necessity: int = 0


@dataclass(frozen=True)
class Violation:
    instance: int
    theorem: str
    params: tuple
    kind: str
    n: int
    generator: str
    moved: tuple[str, ...] = ()


@dataclass
class InstanceResult:
    index: int
    kind: str
    n: int
    generator: str
    stats: dict[str, TheoremStats]
    violations: list[Violation]
    equivalence_mismatches: list[str]
    catalog_checked: bool
    catalog_mismatches: list[str]


def _runs(inst: Instance, config: ScanConfig):
    space, f = inst.space, inst.f
    pts = list(space.points())
    positive = [r for r in space.attained() if r > 0]
    fixed_figs = [fig for shape in Shape for fig in enumerate_figures(space, shape)
                  if members(fig, space) <= f.fixed]
    for zeta in config.zeta_pool:
        for a in config.a_values:
            if space.kind is not Kind.B_METRIC:
                for i in pts:
                    for j in pts[i:]:
                        yield verify_fixed_ellipse(space, f, zeta, a, i, j)
            for x0 in pts:
                yield verify_fixed_circle(space, f, zeta, a, x0)
                yield verify_fixed_disc(space, f, zeta, a, x0)
            for fig in fixed_figs:
                yield verify_uniqueness(space, f, fig, zeta, a)
        if space.kind is Kind.METRIC:
            for i in pts:
                for j in pts[i:]:
                    yield verify_closed_ellipse(space, f, zeta, i, j)
        radii = ([Fraction(0)] if space.kind is Kind.METRIC else []) + positive
        for x0 in pts:
            for r in radii:
                yield verify_phi_circle(space, f, zeta, r, x0)
        for r in (Fraction(0), Fraction(1)):
            yield verify_identity_characterization(space, f, zeta, r)


def _param_text(v) -> str:
    if isinstance(v, (tuple, list)):
        return "(" + ",".join(map(str, v)) + ")"
    return str(v)


def _params_key(rep: VerifierReport) -> tuple:
    return tuple((k, _param_text(v)) for k, v in sorted(rep.params.items()))


def _moved_points(rep: VerifierReport, space, f) -> tuple[str, ...]:
    """Claimed-fixed points (members, centre, foci) that f actually moves."""
    p = rep.params
    named = list(rep.conclusion.members) + list(p.get("foci", ())) + ([p["center"]] if "center" in p else [])
    moved = {x for x in named if f(space.index(x)) != space.index(x)}
    return tuple(sorted(moved, key=space.index))


def _check_equivalence(inst: Instance, a_values) -> list[str]:
    space, f = inst.space, inst.f
    out = []
    main_radius = radius_number(space, f)
    for a in a_values:
        for x in space.points():
            for y in space.points():
                rec = recompute_numbers(space, f, a, x, y)
                if rec.radius != main_radius:
                    out.append(f"radius {rec.radius} != {main_radius}")
                    return out
                m = big_m(space, f, a, x, y)
                if rec.m_value != m:
                    out.append(f"M({space.label(x)},{space.label(y)}) a={a}: {rec.m_value} != {m}")
    return out


def _check_catalog(inst: Instance) -> list[str]:
    space, f = inst.space, inst.f
    out = []
    for shape in Shape:
        main = {m for m in (members(fig, space) for fig in enumerate_figures(space, shape)) if m <= f.fixed}
        third = fixed_member_sets_by_subsets(space, f, shape)
        if main != third:
            out.append(f"{shape}: catalogue has {len(main)} member sets, subset enumeration {len(third)}")
    return out


def run_instance(config: ScanConfig, index: int, seed: int) -> InstanceResult:
    inst = _generate(config, index, seed)
    stats = {t: TheoremStats() for t in THEOREMS}
    violations = []
    for rep in _runs(inst, config):
        st = stats[rep.theorem]
        st.runs += 1
        if not rep.applicable:
            continue
        st.applicable += 1
        confirmed = rep.conclusion.oracle_confirmed
        if rep.all_passed:
            st.passed += 1
            st.vacuous += rep.figure_empty
            if not confirmed:
                st.violations += 1
                violations.append(Violation(index, rep.theorem, _params_key(rep), str(inst.space.kind),
                                            inst.space.n, inst.generator, _moved_points(rep, inst.space, inst.f)))
        elif confirmed and not rep.figure_empty:
            st.non_necessity += 1
    check_catalog = inst.space.n <= config.catalog_check_max_n
    return InstanceResult(
        index, str(inst.space.kind), inst.space.n, inst.generator, stats, violations,
        _check_equivalence(inst, config.a_values), check_catalog,
        _check_catalog(inst) if check_catalog else [],
    )


def _run_star(args):
    return run_instance(*args)


@dataclass
class ScanReport:
    config: ScanConfig
    results: list[InstanceResult]
    stats: dict[str, TheoremStats] = field(default_factory=dict)

    def __post_init__(self):
        if not self.stats:
            self.stats = {t: TheoremStats() for t in THEOREMS}
            for res in self.results:
                for t, st in res.stats.items():
                    total = self.stats[t]
                    for name in vars(st):
                        setattr(total, name, getattr(total, name) + getattr(st, name))

    @property
    def instances(self) -> int:
        return len(self.results)

    @property
    def violations(self) -> list[Violation]:
        return [v for r in self.results for v in r.violations]

    @property
    def soundness_violations(self) -> int:
        return len(self.violations)

    @property
    def equivalence_mismatches(self) -> list[tuple[int, str]]:
        return [(r.index, m) for r in self.results for m in r.equivalence_mismatches]

    @property
    def catalog_checked(self) -> int:
        return sum(r.catalog_checked for r in self.results)

    @property
    def catalog_mismatches(self) -> list[tuple[int, str]]:
        return [(r.index, m) for r in self.results for m in r.catalog_mismatches]

    def violations_by_theorem(self) -> dict[str, int]:
        return {t: st.violations for t, st in self.stats.items()}


def soundness_scan(config: ScanConfig) -> ScanReport:
    """Run the scan; results are in instance-index order whatever ``workers`` is."""
    seeds = instance_seeds(config.seed, config.instances)
    jobs = [(config, i, s) for i, s in enumerate(seeds)]
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(_run_star, jobs, chunksize=4))
    else:
        results = [_run_star(j) for j in jobs]
    return ScanReport(config, results)
