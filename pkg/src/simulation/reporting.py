"""
Metrics tables and the analyses run on them

MetricsTable wraps a pandas DataFrame with the metrics.csv columns. The
helper functions derive the optimal-beamwidth frontier, the ASE/coverage
trade-off and the coverage profile shape from a table.
"""
import math
from dataclasses import astuple, dataclass, fields
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np
import pandas as pd

from .geometry import hex_cell_area

METRICS_COLUMNS = ['delta_m', 'omega_a_deg', 'omega_u_deg', 'scenario', 'coverage',
                   'coverage_ci', 'ase_bps_hz_m2', 'trials', 'seed']
OPTIMAL_COLUMNS = ['delta_m', 'scenario', 'best_omega_a_deg', 'best_omega_u_deg',
                   'peak_coverage', 'ase_at_peak']
TRADEOFF_COLUMNS = ['scenario', 'delta_m', 'best_omega_a_deg', 'best_omega_u_deg',
                    'peak_coverage', 'ase_at_peak', 'feasible']

# Two-sided 95 % normal quantile
CI_Z = 1.96


def write_csv(frame: pd.DataFrame, path) -> None:
    """Locale-independent CSV, shortest round-trip float repr, '\\n' line ends"""
    frame.to_csv(path, index=False, lineterminator='\n')


# ---------- ROWS AND TABLES ----------
@dataclass(frozen=True)
class MetricsRow:
    delta_m: float
    omega_a_deg: float
    omega_u_deg: float
    scenario: str
    coverage: float
    coverage_ci: float
    ase_bps_hz_m2: float
    trials: int
    seed: int

    def __post_init__(self):
        if not 0.0 <= self.coverage <= 1.0:
            raise ValueError(f"Coverage must be in [0, 1], got {self.coverage}")
        if self.ase_bps_hz_m2 < 0:
            raise ValueError(f"ASE must be non-negative, got {self.ase_bps_hz_m2}")


class MetricsTable:
    """Ordered metrics rows, one per configuration point"""

    def __init__(self, rows: Iterable[MetricsRow] = ()):
        records = [astuple(row) for row in rows]
        self.frame = pd.DataFrame.from_records(records, columns=METRICS_COLUMNS)

    @classmethod
    def from_frame(cls, frame: pd.DataFrame) -> 'MetricsTable':
        missing = [column for column in METRICS_COLUMNS if column not in frame.columns]
        if missing:
            raise ValueError(f"Metrics table is missing columns: {missing}")
        table = cls()
        table.frame = frame[METRICS_COLUMNS].reset_index(drop=True)
        return table

    @classmethod
    def from_csv(cls, path) -> 'MetricsTable':
        return cls.from_frame(pd.read_csv(path, dtype={'scenario': str}))

    def __len__(self) -> int:
        return len(self.frame)

    def rows(self) -> List[MetricsRow]:
        converters = [field.type for field in fields(MetricsRow)]
        return [MetricsRow(*(_convert(kind, value) for kind, value in zip(converters, record)))
                for record in self.frame.itertuples(index=False, name=None)]

    def to_csv(self, path) -> None:
        write_csv(self.frame, path)

    def optimal(self) -> pd.DataFrame:
        return optimal_configurations(self)


def _convert(kind, value):
    if kind in (int, 'int'):
        return int(value)
    if kind in (float, 'float'):
        return float(value)
    return str(value)


# ---------- AGGREGATION ----------
def aggregate_metrics(sinr_values: Sequence[float], threshold_linear: float,
                      delta: float) -> Tuple[float, float, float]:
    """
    Coverage, its 95 % half-width and ASE from per-trial SINRs

    Args:
        sinr_values: Linear SINR of every trial, in trial order
        threshold_linear: Coverage threshold; strictly exceeded to count
        delta: Inter-site distance for the cell-area normalisation

    Returns:
        (coverage, coverage_ci, ase)
    """
    sinr_values = np.asarray(sinr_values, dtype=float)
    trials = sinr_values.size
    if trials < 1:
        raise ValueError("At least one trial is needed to aggregate metrics")
    coverage = float(np.count_nonzero(sinr_values > threshold_linear)) / trials
    coverage_ci = CI_Z * math.sqrt(coverage * (1.0 - coverage) / trials)
    ase = float(np.mean(np.log2(1.0 + sinr_values))) / hex_cell_area(delta)
    return coverage, coverage_ci, ase


# ---------- OPTIMAL FRONTIER ----------
def optimal_configurations(table: MetricsTable) -> pd.DataFrame:
    """
    Coverage-maximising beamwidth pair per (delta, scenario)

    Ties keep the first row in table order. Groups appear in the order of
    their first row.
    """
    frame = table.frame
    records = []
    for (delta, scenario), group in frame.groupby(['delta_m', 'scenario'], sort=False):
        best = group.loc[group['coverage'].idxmax()]
        records.append((float(delta), str(scenario), float(best['omega_a_deg']),
                        float(best['omega_u_deg']), float(best['coverage']),
                        float(best['ase_bps_hz_m2'])))
    return pd.DataFrame.from_records(records, columns=OPTIMAL_COLUMNS)


def tradeoff_summary(optimal: pd.DataFrame) -> pd.DataFrame:
    """Per scenario: the delta with the highest ASE and the delta with the highest coverage"""
    records = []
    for scenario, group in optimal.groupby('scenario', sort=False):
        at_max_ase = group.loc[group['ase_at_peak'].idxmax()]
        at_max_coverage = group.loc[group['peak_coverage'].idxmax()]
        records.append({
            'scenario': scenario,
            'delta_at_max_ase': float(at_max_ase['delta_m']),
            'max_ase': float(at_max_ase['ase_at_peak']),
            'delta_at_max_coverage': float(at_max_coverage['delta_m']),
            'max_coverage': float(at_max_coverage['peak_coverage']),
        })
    return pd.DataFrame.from_records(
        records,
        columns=['scenario', 'delta_at_max_ase', 'max_ase', 'delta_at_max_coverage', 'max_coverage']
    )


def feasible_deployments(optimal: pd.DataFrame, min_coverage: float, min_ase: float) -> pd.DataFrame:
    """
    Flag frontier points that beat both requirements (strictly)

    Returns:
        Frontier rows in TRADEOFF_COLUMNS order, sorted by scenario then delta
    """
    if not 0.0 <= min_coverage <= 1.0:
        raise ValueError(f"Minimum coverage must be in [0, 1], got {min_coverage}")
    if min_ase < 0:
        raise ValueError(f"Minimum ASE must be non-negative, got {min_ase}")
    frame = optimal.copy()
    frame['feasible'] = (frame['peak_coverage'] > min_coverage) & (frame['ase_at_peak'] > min_ase)
    frame = frame.sort_values(['scenario', 'delta_m'], kind='mergesort')
    return frame[TRADEOFF_COLUMNS].reset_index(drop=True)


# ---------- PROFILE SHAPE ----------
def coverage_profile(table: MetricsTable, omega_a_deg: float, omega_u_deg: float,
                     scenario: str) -> pd.DataFrame:
    """Coverage and ASE along delta for one beamwidth pair and scenario"""
    frame = table.frame
    mask = (np.isclose(frame['omega_a_deg'], omega_a_deg)
            & np.isclose(frame['omega_u_deg'], omega_u_deg)
            & (frame['scenario'] == scenario))
    profile = frame.loc[mask, ['delta_m', 'coverage', 'coverage_ci', 'ase_bps_hz_m2']]
    return profile.sort_values('delta_m', kind='mergesort').reset_index(drop=True)


def profile_extrema(table: MetricsTable, omega_a_deg: float, omega_u_deg: float,
                    scenario: str) -> Dict[str, List[float]]:
    """Interior local maxima and minima of coverage along delta"""
    profile = coverage_profile(table, omega_a_deg, omega_u_deg, scenario)
    deltas = profile['delta_m'].to_numpy()
    coverage = profile['coverage'].to_numpy()
    maxima, minima = [], []
    for i in range(1, len(coverage) - 1):
        if coverage[i] > coverage[i - 1] and coverage[i] >= coverage[i + 1]:
            maxima.append(float(deltas[i]))
        elif coverage[i] < coverage[i - 1] and coverage[i] <= coverage[i + 1]:
            minima.append(float(deltas[i]))
    return {'maxima': maxima, 'minima': minima}


def spearman_trend(x: Sequence[float], y: Sequence[float]) -> float:
    """Spearman rank correlation of y against x"""
    if len(x) != len(y):
        raise ValueError(f"Length mismatch: {len(x)} vs {len(y)}")
    if len(x) < 2:
        raise ValueError("Rank correlation needs at least two points")
    return float(pd.Series(x, dtype=float).corr(pd.Series(y, dtype=float), method='spearman'))
