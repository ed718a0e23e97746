"""
Results File Module for t-Improper Colouring

Contains the persisted trial-record schema and the CSV / JSON writers and
readers for experiment results.

CSV: the eleven record columns, then two summary rows per vertex count whose
trial_index is "mean" / "std". JSON: records, summary, theory and config.
Floats are written with 12 significant digits so reruns are byte-identical.
"""

import io
import json
import logging
from dataclasses import asdict, dataclass
from pathlib import Path

import pandas as pd

from modules.errors import ResultsIOError, ValidationError
from modules.graph_io import write_text_atomic
from modules.summary import records_to_dataframe

logger = logging.getLogger(__name__)

CSV_COLUMNS = [
    "trial_index",
    "derived_seed",
    "n",
    "p",
    "t",
    "alpha_hat",
    "alpha_exact_flag",
    "chi_upper_greedy",
    "chi_upper_lovasz",
    "chi_lower_ratio",
    "wall_time_ms",
]
FLOAT_FORMAT = "%.12g"


@dataclass(frozen=True)
class TrialRecord:
    """One Monte Carlo observation."""

    trial_index: int
    derived_seed: int
    n: int
    p: float
    t: int
    alpha_hat: int
    alpha_exact_flag: bool
    chi_upper_greedy: int
    chi_upper_lovasz: int
    chi_lower_ratio: int
    wall_time_ms: float = 0.0
    chi_exact: int | None = None

    def to_row(self):
        """CSV row: the documented columns only."""
        data = asdict(self)
        return {c: data[c] for c in CSV_COLUMNS}

    def to_dict(self):
        return round_floats(asdict(self))

    @classmethod
    def from_dict(cls, data):
        try:
            return cls(**data)
        except TypeError as e:
            raise ValidationError(f"malformed trial record: {e}") from None


def round_floats(value):
    """Recursively round floats to 12 significant digits."""
    if isinstance(value, float):
        return float(FLOAT_FORMAT % value)
    if isinstance(value, dict):
        return {k: round_floats(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [round_floats(v) for v in value]
    return value


def render_csv(records, summary):
    """
    CSV text for records plus flagged summary rows

    Parameters:
    records: list of TrialRecord
    summary: dict from modules.summary.summarise

    Returns:
    str
    """
    df = records_to_dataframe(records, CSV_COLUMNS)
    out = io.StringIO()
    df.to_csv(out, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    if not records or not summary:
        return out.getvalue()
    rows = []
    for n, stats in summary.items():
        group = [r for r in records if r.n == n]
        for kind in ("mean", "std"):
            row = {"trial_index": kind, "derived_seed": "", "n": n, "p": group[0].p, "t": group[0].t}
            row.update({k: v for k, v in stats[kind].items() if k in CSV_COLUMNS})
            rows.append(row)
    summary_df = pd.DataFrame(rows, columns=CSV_COLUMNS)
    summary_df.to_csv(out, index=False, header=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return out.getvalue()


def render_json(records, summary, theory=None, config=None):
    payload = {
        "records": [r.to_dict() for r in records],
        "summary": {str(n): stats for n, stats in summary.items()},
        "theory": theory,
        "config": config,
    }
    return json.dumps(round_floats(payload), indent=2, ensure_ascii=False) + "\n"


def emit_results(records, summary, path, fmt="csv", theory=None, config=None):
    """
    Write experiment results

    Parameters:
    records: list of TrialRecord
    summary: dict from modules.summary.summarise
    path: destination file; with fmt 'both' the suffix is replaced by .csv / .json
    fmt: 'csv', 'json' or 'both'
    theory: JSON-ready theory object (dict keyed by n) or None
    config: JSON-ready config mapping or None

    Returns:
    list: paths written
    """
    path = Path(path)
    if fmt == "csv":
        targets = [(path, render_csv(records, summary))]
    elif fmt == "json":
        targets = [(path, render_json(records, summary, theory, config))]
    elif fmt == "both":
        targets = [
            (path.with_suffix(".csv"), render_csv(records, summary)),
            (path.with_suffix(".json"), render_json(records, summary, theory, config)),
        ]
    else:
        raise ValidationError(f"unknown results format {fmt!r}")
    # everything is rendered before the first byte is written
    for target, text in targets:
        write_text_atomic(target, text)
        logger.info("wrote %s", target)
    return [target for target, _ in targets]


def load_results(path):
    """
    Load a JSON results file

    Parameters:
    path: JSON file written by emit_results

    Returns:
    tuple: (records, summary, theory)
    """
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise ResultsIOError(f"unable to read results file {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ValidationError(f"results file {path} is not valid JSON: {e}") from e
    records = [TrialRecord.from_dict(r) for r in data.get("records", [])]
    summary = {int(n): stats for n, stats in (data.get("summary") or {}).items()}
    return records, summary, data.get("theory")
