"""Trial dataset container and CSV round-trip.

Standard observed-data schema: ``id,z,s_time,s_event,t_time,t_event`` with
z in {0,1} and the semi-competing conventions: when the intermediate event is
unobserved (s_event=0) the two times coincide; when observed, s_time <= t_time
and the 2->3 gap time is t_time - s_time. A complete-data export may append
``latent_*`` (pre-censoring event times) and ``omega_*`` (frailty) columns.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np


class DataError(ValueError):
    """Dataset fails schema or invariant validation."""


OBSERVED_COLUMNS = ("id", "z", "s_time", "s_event", "t_time", "t_event")


@dataclass(frozen=True)
class SubjectRecord:
    """One observed trial row."""

    id: int
    z: int
    s_time: float
    s_event: int
    t_time: float
    t_event: int

    @property
    def gap_time(self):
        """2->3 gap time; only defined when the intermediate event occurred."""
        return self.t_time - self.s_time if self.s_event else None


@dataclass
class TrialData:
    ids: np.ndarray
    z: np.ndarray
    s_time: np.ndarray
    s_event: np.ndarray
    t_time: np.ndarray
    t_event: np.ndarray
    extra: dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        self.ids = np.asarray(self.ids, dtype=np.int64)
        self.z = np.asarray(self.z, dtype=np.int64)
        self.s_time = np.asarray(self.s_time, dtype=float)
        self.s_event = np.asarray(self.s_event, dtype=np.int64)
        self.t_time = np.asarray(self.t_time, dtype=float)
        self.t_event = np.asarray(self.t_event, dtype=np.int64)
        self.validate()

    def __len__(self):
        return len(self.ids)

    def validate(self):
        n = len(self.ids)
        for name in ("z", "s_time", "s_event", "t_time", "t_event"):
            if len(getattr(self, name)) != n:
                raise DataError(f"column {name} has wrong length")
        if not np.isin(self.z, (0, 1)).all():
            raise DataError("z must be 0 or 1")
        if not np.isin(self.s_event, (0, 1)).all() or not np.isin(self.t_event, (0, 1)).all():
            raise DataError("event indicators must be 0 or 1")
        if np.any(self.s_time < 0) or np.any(self.t_time < 0):
            raise DataError("times must be >= 0")
        no_s = self.s_event == 0
        if not np.allclose(self.s_time[no_s], self.t_time[no_s], rtol=0, atol=1e-12):
            raise DataError("rows with s_event=0 must have s_time == t_time")
        if np.any(self.s_time[~no_s] > self.t_time[~no_s]):
            raise DataError("rows with s_event=1 must have s_time <= t_time")

    def arm(self, z):
        """Subset view (copy) of one treatment arm."""
        m = self.z == z
        return TrialData(self.ids[m], self.z[m], self.s_time[m], self.s_event[m],
                         self.t_time[m], self.t_event[m],
                         {k: v[m] for k, v in self.extra.items()})

    def record(self, i):
        return SubjectRecord(int(self.ids[i]), int(self.z[i]), float(self.s_time[i]),
                             int(self.s_event[i]), float(self.t_time[i]), int(self.t_event[i]))

    @property
    def gap_time(self):
        """2->3 gap (t_time - s_time) where the intermediate event occurred, else nan."""
        return np.where(self.s_event == 1, self.t_time - self.s_time, np.nan)

    def write_csv(self, path, include_extra=False):
        cols = list(OBSERVED_COLUMNS)
        extra_cols = sorted(self.extra) if include_extra else []
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(cols + extra_cols)
            for i in range(len(self)):
                row = [int(self.ids[i]), int(self.z[i]),
                       repr(float(self.s_time[i])), int(self.s_event[i]),
                       repr(float(self.t_time[i])), int(self.t_event[i])]
                row += [repr(float(self.extra[c][i])) for c in extra_cols]
                w.writerow(row)

    @staticmethod
    def read_csv(path):
        with open(path, newline="") as fh:
            r = csv.reader(fh)
            header = next(r)
            if header[:6] != list(OBSERVED_COLUMNS):
                raise DataError(f"expected columns {OBSERVED_COLUMNS}, got {header[:6]}")
            rows = list(r)
        if not rows:
            raise DataError("empty dataset")
        arr = np.array(rows, dtype=object)
        extra = {name: arr[:, 6 + j].astype(float) for j, name in enumerate(header[6:])}
        try:
            return TrialData(arr[:, 0].astype(np.int64), arr[:, 1].astype(np.int64),
                             arr[:, 2].astype(float), arr[:, 3].astype(float).astype(np.int64),
                             arr[:, 4].astype(float), arr[:, 5].astype(float).astype(np.int64),
                             extra)
        except ValueError as e:
            raise DataError(f"malformed dataset: {e}") from e
