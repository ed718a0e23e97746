"""
Experiments Module for t-Improper Colouring

Contains the experiment configuration, the theory predictions for chi^t and
alpha^t of G(n,p), the Monte Carlo campaign runner and the step experiment
for t ~ np/x.

Every trial samples its own graph from derive_seed(master_seed, trial_index)
and writes into a pre-indexed slot, so results do not depend on the worker
count or completion order.
"""

import json
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

from modules.colouring import (
    ALPHA_EXACT_CAP,
    CHI_EXACT_CAP,
    alpha_t_search,
    chi_t_exact,
    greedy_dependent_set,
    greedy_peel_colouring,
    lovasz_decomposition,
)
from modules.errors import ConfigError, ResultsIOError, ValidationError
from modules.graph_core import sample_gnp
from modules.ld_theory import TheoryParams, first_moment_threshold_k, kappa_p, kappa_sparse
from modules.results_io import TrialRecord, emit_results
from modules.rng import MASK64, mix_seed
from modules.summary import summarise

logger = logging.getLogger(__name__)

SOLVERS = ("exact", "greedy", "both")
RESULT_FORMATS = ("csv", "json", "both")
MODES = ("campaign", "step")
T_KEYS = ("t", "tau", "x")
CONFIG_KEYS = {
    "n",
    "p",
    "t_spec",
    "trials",
    "master_seed",
    "solver",
    "eps",
    "output",
    "format",
    "workers",
    "timings",
    "mode",
}
DEFAULT_EPS = 0.05
EXECUTION_KEYS = ("output", "format", "workers")


def _is_int(value):
    return isinstance(value, int) and not isinstance(value, bool)


def _is_number(value):
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def validate_config(mapping):
    """
    Check an experiment configuration mapping

    Parameters:
    mapping: dict parsed from JSON

    Returns:
    list: (json_path, message) problems; empty when valid
    """
    problems = []
    if not isinstance(mapping, dict):
        return [("$", "configuration must be a JSON object")]
    for key in sorted(set(mapping) - CONFIG_KEYS):
        problems.append((f"$.{key}", "unknown field"))
    for key in ("n", "p", "t_spec", "trials"):
        if key not in mapping:
            problems.append((f"$.{key}", "required field is missing"))

    sizes = mapping.get("n")
    if "n" in mapping:
        listed = sizes if isinstance(sizes, list) else [sizes]
        if not listed:
            problems.append(("$.n", "size list must not be empty"))
        for i, value in enumerate(listed):
            where = f"$.n[{i}]" if isinstance(sizes, list) else "$.n"
            if not _is_int(value) or value < 1:
                problems.append((where, "must be a positive integer"))

    p = mapping.get("p")
    if "p" in mapping and (not _is_number(p) or not 0.0 <= p <= 1.0):
        problems.append(("$.p", "must be a number in [0, 1]"))

    spec = mapping.get("t_spec")
    if "t_spec" in mapping:
        if not isinstance(spec, dict) or len(spec) != 1 or next(iter(spec)) not in T_KEYS:
            problems.append(("$.t_spec", "must be an object with exactly one of 't', 'tau', 'x'"))
        else:
            (key, value), = spec.items()
            if key == "t" and (not _is_int(value) or value < 0):
                problems.append(("$.t_spec.t", "must be a non-negative integer"))
            elif key == "tau" and (not _is_number(value) or value < 0):
                problems.append(("$.t_spec.tau", "must be a non-negative number"))
            elif key == "x" and (not _is_number(value) or value <= 0):
                problems.append(("$.t_spec.x", "must be a positive number"))

    if "trials" in mapping and (not _is_int(mapping["trials"]) or mapping["trials"] < 1):
        problems.append(("$.trials", "must be a positive integer"))
    seed = mapping.get("master_seed", 0)
    if not _is_int(seed) or not 0 <= seed <= MASK64:
        problems.append(("$.master_seed", "must be an integer in [0, 2^64)"))
    solver = mapping.get("solver", "greedy")
    if solver not in SOLVERS:
        problems.append(("$.solver", f"must be one of {list(SOLVERS)}"))
    eps = mapping.get("eps", DEFAULT_EPS)
    if not _is_number(eps) or not 0.0 < eps <= 1.0:
        problems.append(("$.eps", "must be a number in (0, 1]"))
    output = mapping.get("output")
    if output is not None and not isinstance(output, str):
        problems.append(("$.output", "must be a path string"))
    if mapping.get("format", "both") not in RESULT_FORMATS:
        problems.append(("$.format", f"must be one of {list(RESULT_FORMATS)}"))
    workers = mapping.get("workers", 1)
    if not _is_int(workers) or workers < 1:
        problems.append(("$.workers", "must be a positive integer"))
    if not isinstance(mapping.get("timings", False), bool):
        problems.append(("$.timings", "must be true or false"))
    mode = mapping.get("mode", "campaign")
    if mode not in MODES:
        problems.append(("$.mode", f"must be one of {list(MODES)}"))

    if solver in ("exact", "both") and isinstance(sizes, (int, list)):
        listed = sizes if isinstance(sizes, list) else [sizes]
        if any(_is_int(v) and v > ALPHA_EXACT_CAP for v in listed):
            problems.append(("$.solver", f"exact solving needs every n <= {ALPHA_EXACT_CAP}"))

    if mode == "step":
        if not isinstance(spec, dict) or "x" not in spec:
            problems.append(("$.t_spec", "step mode needs the 'x' form"))
        elif _is_number(spec["x"]) and float(spec["x"]).is_integer():
            problems.append(("$.t_spec.x", "must not be integral in step mode"))
        if _is_number(p) and not 0.0 < p < 1.0:
            problems.append(("$.p", "step mode needs 0 < p < 1"))
    return problems


@dataclass(frozen=True)
class ExperimentConfig:
    """
    One Monte Carlo campaign

    t_spec is a one-entry dict: {"t": int}, {"tau": float} (t = round(tau ln n))
    or {"x": float} (t = round(np/x)).
    """

    n: tuple
    p: float
    t_spec: dict
    trials: int
    master_seed: int = 0
    solver: str = "greedy"
    eps: float = DEFAULT_EPS
    output: str | None = None
    format: str = "both"
    workers: int = 1
    timings: bool = False
    mode: str = "campaign"

    @classmethod
    def from_mapping(cls, mapping):
        problems = validate_config(mapping)
        if problems:
            raise ConfigError(problems)
        data = dict(mapping)
        sizes = data["n"]
        data["n"] = tuple(sizes) if isinstance(sizes, list) else (sizes,)
        data["p"] = float(data["p"])
        data["t_spec"] = dict(data["t_spec"])
        return cls(**data)

    def to_mapping(self):
        data = asdict(self)
        data["n"] = list(self.n)
        return data

    def result_mapping(self):
        """Fields that determine the results; output location and worker count are left out."""
        data = self.to_mapping()
        for key in EXECUTION_KEYS:
            data.pop(key)
        return data

    def with_overrides(self, **overrides):
        """Copy with non-None overrides applied and re-validated."""
        changes = {k: v for k, v in overrides.items() if v is not None}
        if not changes:
            return self
        mapping = self.to_mapping()
        mapping.update(changes)
        return ExperimentConfig.from_mapping(mapping)


def load_config(path):
    """
    Read and validate a JSON experiment configuration

    Parameters:
    path: config file path

    Returns:
    ExperimentConfig
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ResultsIOError(f"unable to read config {path}: {e}") from e
    try:
        mapping = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError([("$", f"not valid JSON: {e}")]) from None
    return ExperimentConfig.from_mapping(mapping)


def round_half_up(value):
    return math.floor(value + 0.5)


def realize_t(n, p, t_spec):
    """
    Integer degree budget for a vertex count

    Parameters:
    n: vertex count
    p: edge probability
    t_spec: {"t": int} | {"tau": float} | {"x": float}

    Returns:
    int: t, rounding half up
    """
    (key, value), = t_spec.items()
    if key == "t":
        return int(value)
    if key == "tau":
        return round_half_up(value * math.log(n)) if n > 1 else 0
    if key == "x":
        if value <= 0:
            raise ValidationError("x must be positive")
        return round_half_up(n * p / value)
    raise ValidationError(f"unknown t_spec key {key!r}")


def derive_seed(master_seed, trial_index):
    return mix_seed(master_seed, trial_index)


@dataclass(frozen=True)
class TheoryPrediction:
    """Theory-side numbers for one (n, p, t)."""

    n: int
    p: float
    t: int
    tau: float
    kappa: float
    alpha_predicted: float
    chi_predicted: float
    k_star: int | None
    step_value: int | None = None
    d: float = 0.0
    chi_sparse_lower: float | None = None

    def to_dict(self):
        return asdict(self)


def theory_curve(n, p, t, eps=DEFAULT_EPS, x=None):
    """
    Predicted alpha^t ~ kappa_p(t/ln n) ln n and chi^t ~ n / (kappa_p(t/ln n) ln n)

    Parameters:
    n: vertex count >= 3
    p: probability in (0, 1)
    t: degree budget >= 0
    eps: failure budget for the first-moment threshold
    x: optional step parameter; step_value = ceil(x)

    Returns:
    TheoryPrediction
    """
    params = TheoryParams.from_p(p)
    if n < 3:
        raise ValidationError(f"theory predictions need n >= 3, got {n}")
    if t < 0:
        raise ValidationError(f"t must be non-negative, got {t}")
    ln_n = math.log(n)
    tau = t / ln_n
    kappa = kappa_p(tau, params)
    alpha_predicted = kappa * ln_n
    d = n * params.p
    chi_sparse_lower = None
    if d > math.e:
        ln_d = math.log(d)
        chi_sparse_lower = d / (kappa_sparse(t / ln_d) * ln_d)
    return TheoryPrediction(
        n=n,
        p=params.p,
        t=t,
        tau=tau,
        kappa=kappa,
        alpha_predicted=alpha_predicted,
        chi_predicted=n / alpha_predicted,
        k_star=first_moment_threshold_k(n, params, t, eps),
        step_value=math.ceil(x) if x is not None else None,
        d=d,
        chi_sparse_lower=chi_sparse_lower,
    )


def run_trial(config, n, t, k_star, trial_index):
    """
    Sample one graph and measure it

    Parameters:
    config: ExperimentConfig
    n: vertex count
    t: realised degree budget
    k_star: first-moment threshold (None when not certified)
    trial_index: slot index

    Returns:
    TrialRecord
    """
    started = time.perf_counter()
    seed = derive_seed(config.master_seed, trial_index)
    G = sample_gnp(n, config.p, seed)
    solve_exactly = config.solver in ("exact", "both")
    exact = False
    if solve_exactly:
        search = alpha_t_search(G, t)
        alpha_hat, exact = search.size, search.exact
    else:
        alpha_hat = len(greedy_dependent_set(G, None, t)) if n else 0
    chi_exact = chi_t_exact(G, t)[0] if solve_exactly and n <= CHI_EXACT_CAP else None
    if k_star is not None:
        chi_lower_ratio = -(-n // (k_star - 1))
    elif exact and alpha_hat:
        chi_lower_ratio = -(-n // alpha_hat)
    else:
        chi_lower_ratio = 1
    record = TrialRecord(
        trial_index=trial_index,
        derived_seed=seed,
        n=n,
        p=config.p,
        t=t,
        alpha_hat=alpha_hat,
        alpha_exact_flag=exact,
        chi_upper_greedy=greedy_peel_colouring(G, t).class_count,
        chi_upper_lovasz=lovasz_decomposition(G, t).class_count,
        chi_lower_ratio=chi_lower_ratio,
        wall_time_ms=(time.perf_counter() - started) * 1000.0 if config.timings else 0.0,
        chi_exact=chi_exact,
    )
    logger.debug("trial %d (n=%d, t=%d): %s", trial_index, n, t, record)
    return record


def _run_trial_task(task):
    return run_trial(*task)


def _map_trials(tasks, workers):
    if workers <= 1 or len(tasks) <= 1:
        return [_run_trial_task(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        # map keeps input order, which is the slot order
        return list(pool.map(_run_trial_task, tasks))


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    records: list
    summary: dict
    theory: dict = field(default_factory=dict)
    paths: list = field(default_factory=list)

    def theory_json(self):
        return {str(n): (pred.to_dict() if pred else None) for n, pred in self.theory.items()}


def _theory_or_none(config, n, t):
    x = config.t_spec.get("x")
    try:
        return theory_curve(n, config.p, t, eps=config.eps, x=x)
    except ValidationError as e:
        logger.info("no theory prediction for n=%d, p=%g: %s", n, config.p, e)
        return None


def run_experiment(config):
    """
    Run a Monte Carlo campaign

    Parameters:
    config: ExperimentConfig (or a mapping, validated first)

    Returns:
    ExperimentResult: records in (n, trial_index) order, per-n summary and
    theory predictions; results are written when config.output is set
    """
    if isinstance(config, dict):
        config = ExperimentConfig.from_mapping(config)
    tasks = []
    theory = {}
    for n in config.n:
        t = realize_t(n, config.p, config.t_spec)
        prediction = _theory_or_none(config, n, t)
        theory[n] = prediction
        k_star = prediction.k_star if prediction else None
        logger.info("n=%d p=%g t=%d: %d trials, k*=%s", n, config.p, t, config.trials, k_star)
        tasks.extend((config, n, t, k_star, i) for i in range(config.trials))
    records = _map_trials(tasks, config.workers)
    result = ExperimentResult(config=config, records=records, summary=summarise(records), theory=theory)
    if config.output:
        result.paths = emit_results(
            records,
            result.summary,
            config.output,
            fmt=config.format,
            theory=result.theory_json(),
            config=config.result_mapping(),
        )
    return result


@dataclass(frozen=True)
class StepTrial:
    trial_index: int
    derived_seed: int
    lovasz_classes: int
    upper_ok: bool
    lower_certified: bool

    @property
    def both(self):
        return self.upper_ok and self.lower_certified


@dataclass(frozen=True)
class StepReport:
    """Outcome of the t ~ np/x experiment."""

    n: int
    p: float
    x: float
    t: int
    step_value: int
    eps: float
    k_star: int | None
    lower_certified: bool
    trials: list
    success_fraction: float
    upper_fraction: float

    def to_dict(self):
        data = asdict(self)
        data["trials"] = [dict(asdict(trial), both=trial.both) for trial in self.trials]
        return data


def _step_trial(task):
    n, p, t, seed, index, step_value, lower_certified = task
    G = sample_gnp(n, p, seed)
    classes = lovasz_decomposition(G, t).class_count
    return StepTrial(index, seed, classes, classes <= step_value, lower_certified)


def step_experiment(n, p, x, trials, seed, eps, workers=1):
    """
    Check chi^t = ceil(x) for t = round(np/x)

    Upper side: the Lovasz decomposition uses at most ceil(x) classes. Lower
    side: the first-moment threshold k* certifies alpha^t <= k* - 1 with
    probability >= 1 - eps, which forces chi^t >= ceil(x) when
    (k* - 1)(ceil(x) - 1) < n.

    Parameters:
    n: vertex count
    p: probability in (0, 1)
    x: positive non-integral real
    trials: number of sampled graphs
    seed: master seed
    eps: certificate failure budget
    workers: process count

    Returns:
    StepReport
    """
    params = TheoryParams.from_p(p)
    if not x > 0 or float(x).is_integer():
        raise ValidationError(f"x must be positive and not integral, got {x}")
    if trials < 1:
        raise ValidationError("trials must be positive")
    t = round_half_up(n * params.p / x)
    step_value = math.ceil(x)
    k_star = first_moment_threshold_k(n, params, t, eps)
    lower_certified = k_star is not None and (k_star - 1) * (step_value - 1) < n
    tasks = [(n, params.p, t, derive_seed(seed, i), i, step_value, lower_certified) for i in range(trials)]
    if workers <= 1:
        results = [_step_trial(task) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_step_trial, tasks))
    report = StepReport(
        n=n,
        p=params.p,
        x=float(x),
        t=t,
        step_value=step_value,
        eps=eps,
        k_star=k_star,
        lower_certified=lower_certified,
        trials=results,
        success_fraction=sum(r.both for r in results) / trials,
        upper_fraction=sum(r.upper_ok for r in results) / trials,
    )
    logger.info(
        "step experiment n=%d x=%g t=%d: k*=%s, success %.3f", n, x, t, k_star, report.success_fraction
    )
    return report


def run_step_from_config(config):
    """Step experiment driven by an ExperimentConfig in step mode."""
    if config.mode != "step":
        config = replace(config, mode="step")
    problems = validate_config(config.to_mapping())
    if problems:
        raise ConfigError(problems)
    return [
        step_experiment(n, config.p, config.t_spec["x"], config.trials, config.master_seed, config.eps, config.workers)
        for n in config.n
    ]
