"""
Summary Statistics Module for t-Improper Colouring

Contains functions for turning trial records into pandas DataFrames and
computing per-size mean and standard deviation rows.
"""

import pandas as pd

NUMERIC_FIELDS = [
    "alpha_hat",
    "chi_upper_greedy",
    "chi_upper_lovasz",
    "chi_lower_ratio",
    "wall_time_ms",
]


def records_to_dataframe(records, columns):
    """
    Convert trial records to a DataFrame

    Parameters:
    records: list of TrialRecord
    columns: column order

    Returns:
    pandas DataFrame with exactly the given columns
    """
    return pd.DataFrame([r.to_row() for r in records], columns=columns)


def summarise(records):
    """
    Mean and standard deviation of each numeric field, per vertex count

    The standard deviation is the population one (ddof=0), so a single trial
    gives 0 rather than NaN.

    Parameters:
    records: list of TrialRecord

    Returns:
    dict: {n: {"trials": int, "mean": {field: float}, "std": {field: float}}}
    """
    if not records:
        return {}
    df = pd.DataFrame([r.to_row() for r in records])
    df["alpha_exact_flag"] = df["alpha_exact_flag"].astype(float)
    fields = NUMERIC_FIELDS + ["alpha_exact_flag"]
    summary = {}
    for n, group in df.groupby("n", sort=True):
        summary[int(n)] = {
            "trials": int(len(group)),
            "mean": {f: float(group[f].mean()) for f in fields},
            "std": {f: float(group[f].std(ddof=0)) for f in fields},
        }
    return summary
