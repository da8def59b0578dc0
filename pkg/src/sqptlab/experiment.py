"""Finite-shot simulation of the tomography experiment and error sweeps.

Two sampling models are supported:

``joint``
    every shot picks an input ``nu`` with probability ``Tr[P_nu]/d`` and
    records the outcome ``mu``, so the pair ``x = (mu, nu)`` is drawn from
    ``p(x) = omega_{mu,nu} / d``.  The mean squared Hilbert-Schmidt error of the
    reconstructed Choi state is then ``(Delta_p - Tr[rho^2]) / N``.
``per-input``
    each input is prepared ``N`` times and measured.
"""

import csv
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import channels, sqpt
from .channels import ChannelSpec, matrix_to_pairs
from .errors import ArgumentError, NumericError, ParseError
from .frames import Povm
from .sic import SicPovm, get_sic

MODES = ("joint", "per-input")

REPORT_FIELDS = ("spec", "d", "mode", "seed", "sweep", "chi_hat", "min_eig")
SWEEP_FIELDS = ("shots", "trials", "mean_err", "predicted", "z")


@dataclass(frozen=True)
class ShotPlan:
    """What to simulate.  ``prep``/``meas`` are ``"sic"`` or explicit POVMs."""

    channel: ChannelSpec
    shots: int
    seed: int = 0
    mode: str = "joint"
    prep: object = "sic"
    meas: object = "sic"

    def __post_init__(self):
        if isinstance(self.channel, dict):
            object.__setattr__(self, "channel", ChannelSpec.from_dict(self.channel))
        if int(self.shots) <= 0:
            raise ArgumentError(f"shots must be positive, got {self.shots}")
        if self.mode not in MODES:
            raise ArgumentError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.seed < 0:
            raise ArgumentError("seed must be non-negative")


def resolve_povm(desc, d):
    if isinstance(desc, (Povm, SicPovm)):
        if desc.d != d:
            raise ArgumentError(f"POVM dimension {desc.d} does not match channel dimension {d}")
        return desc
    if desc == "sic":
        return get_sic(d)
    raise ArgumentError(f"unknown POVM descriptor {desc!r}")


@dataclass
class _Setup:
    d: int
    kraus: channels.KrausSet
    prep: object
    meas: object
    omega: np.ndarray
    weights: np.ndarray

    @classmethod
    def from_plan(cls, plan):
        k = channels.make_channel(plan.channel)
        d = k.d
        prep = resolve_povm(plan.prep, d)
        meas = resolve_povm(plan.meas, d)
        omega = sqpt.omega_exact(k, prep, meas).omega.real
        weights = np.einsum("mii->m", prep.elements).real
        return cls(d, k, prep, meas, omega, weights)


def _checked(p, what):
    if p.min() < -1e-12:
        raise NumericError(f"negative {what} {p.min():.3g}")
    p = np.clip(p, 0, None)
    return p / p.sum()


def _sample(setup, shots, mode, rng):
    d, omega = setup.d, setup.omega
    if mode == "joint":
        p = _checked(omega.reshape(-1) / d, "outcome probability")
        counts = rng.multinomial(shots, p)
        return d * counts.reshape(omega.shape) / shots
    out = np.empty_like(omega)
    for nu, w in enumerate(setup.weights):
        q = _checked(omega[:, nu] / w, "conditional probability")
        out[:, nu] = w * rng.multinomial(shots, q) / shots
    return out


def trial_rng(seed, shots, trial):
    """Independent stream for one trial; a pure function of its identifiers."""
    return np.random.default_rng([seed, shots, trial])


def simulate(plan, trial=0):
    """Draw one estimated data matrix for ``plan``."""
    setup = _Setup.from_plan(plan)
    omega = _sample(setup, plan.shots, plan.mode, trial_rng(plan.seed, plan.shots, trial))
    prov = {"kind": "sampled", "mode": plan.mode, "shots": plan.shots, "seed": plan.seed, "trial": trial}
    return sqpt.DataMatrix(omega, prov)


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    shots: int
    omega_hat: np.ndarray
    sq_error: float
    min_eig: float


@dataclass
class SweepResult:
    spec: ChannelSpec
    d: int
    mode: str
    seed: int
    records: list
    summary: list
    slope: float
    chi_hat: np.ndarray
    omega_hat: np.ndarray = field(repr=False, default=None)

    def to_report(self):
        largest = max(row["shots"] for row in self.summary)
        return {
            "spec": self.spec.to_dict(),
            "d": self.d,
            "mode": self.mode,
            "seed": self.seed,
            "sweep": self.summary,
            "chi_hat": matrix_to_pairs(self.chi_hat),
            "min_eig": sqpt.chi_diagnostics(self.chi_hat)["min_eig"],
            "slope": self.slope,
            "omega_hat": self.omega_hat.tolist(),
            "omega_shots": largest,
        }


def per_input_prediction(setup, pf, shots):
    """Expected squared HS error of the Choi-state estimate under per-input sampling."""
    d = setup.d
    n = d * d
    qs = pf.qs.reshape(n, n, n, n)  # (mu, nu, i, j)
    total = 0.0
    for nu, w in enumerate(setup.weights):
        q = setup.omega[:, nu] / w
        qn = qs[:, nu]
        second = np.einsum("m,mij,mij->", q, qn.conj(), qn).real
        mean = np.einsum("m,mij->ij", q, qn)
        total += w**2 * (second - np.vdot(mean, mean).real)
    return total / (d * d * shots)


def _run_trial(setup, pf, rho, shots, mode, seed, trial):
    omega_hat = _sample(setup, shots, mode, trial_rng(seed, shots, trial))
    chi_hat = sqpt.reconstruct_chi_c(omega_hat, setup.prep, setup.meas)
    diff = rho - chi_hat / setup.d
    err = float(np.vdot(diff, diff).real)
    min_eig = float(np.linalg.eigvalsh((chi_hat + chi_hat.conj().T) / 2).min())
    return TrialRecord(trial, shots, omega_hat, err, min_eig)


def mse_sweep(spec, shots_list, trials, seed=0, mode="joint", prep="sic", meas="sic", workers=1):
    """Mean squared HS error of the reconstructed Choi state versus shot count.

    For each ``N`` in ``shots_list`` runs ``trials`` independent experiments and
    compares the sample mean of ``||rho_eps - rho_hat||^2`` with the prediction
    (``(Delta_p - Tr[rho^2])/N`` in joint mode).  ``z`` is the difference in
    units of the standard error of the mean.
    """
    if isinstance(spec, dict):
        spec = ChannelSpec.from_dict(spec)
    if trials < 2:
        raise ArgumentError("at least two trials are needed to estimate a standard error")
    shots_list = [int(n) for n in shots_list]
    if not shots_list or min(shots_list) <= 0:
        raise ArgumentError("shot counts must be positive")
    setup = _Setup.from_plan(ShotPlan(spec, shots_list[0], seed, mode, prep, meas))
    pf = sqpt.product_frame(setup.prep, setup.meas)
    rho = channels.choi(setup.kraus)

    records, summary = [], []
    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for n in shots_list:
            jobs = [(setup, pf, rho, n, mode, seed, t) for t in range(trials)]
            if pool is None:
                recs = [_run_trial(*job) for job in jobs]
            else:
                recs = list(pool.map(lambda job: _run_trial(*job), jobs))
            errs = [r.sq_error for r in recs]
            mean = math.fsum(errs) / trials
            var = math.fsum((e - mean) ** 2 for e in errs) / (trials - 1)
            sem = math.sqrt(var / trials)
            if mode == "joint":
                pred = sqpt.mse_prediction(pf, rho, n)
            else:
                pred = per_input_prediction(setup, pf, n)
            pred = float(pred)
            z = float((mean - pred) / sem) if sem > 0 else 0.0
            summary.append({"shots": n, "trials": trials, "mean_err": mean, "predicted": pred, "z": z, "sem": sem})
            records.extend(recs)
    finally:
        if pool is not None:
            pool.shutdown()

    if len(shots_list) > 1:
        xs = np.log([row["shots"] for row in summary])
        ys = np.log([row["mean_err"] for row in summary])
        slope = float(np.polyfit(xs, ys, 1)[0])
    else:
        slope = float("nan")
    largest = max(shots_list)
    first = next(r for r in records if r.shots == largest and r.trial == 0)
    chi_hat = sqpt.reconstruct_chi_c(first.omega_hat, setup.prep, setup.meas)
    return SweepResult(spec, setup.d, mode, seed, records, summary, slope, chi_hat, first.omega_hat)


def write_report(result, out_dir, name="report"):
    """Write ``<name>.json`` and ``<name>.csv`` into ``out_dir``; return both paths."""
    os.makedirs(out_dir, exist_ok=True)
    report = result.to_report() if isinstance(result, SweepResult) else result
    json_path = os.path.join(out_dir, f"{name}.json")
    with open(json_path, "w") as fh:
        json.dump(report, fh, indent=2, allow_nan=True)
        fh.write("\n")
    csv_path = os.path.join(out_dir, f"{name}.csv")
    if isinstance(result, SweepResult):
        with open(csv_path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["shots", "trial", "sq_hs_error"])
            for r in result.records:
                writer.writerow([r.shots, r.trial, repr(r.sq_error)])
    else:
        csv_path = None
    return json_path, csv_path


def read_report(path):
    """Load and validate a report written by :func:`write_report`.

    Raises:
        ParseError: invalid JSON (with line and column) or a missing field.
    """
    with open(path) as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ParseError(f"{path}: top-level value must be an object")
    for key in REPORT_FIELDS:
        if key not in data:
            raise ParseError(f"{path}: missing field {key!r}")
    for i, row in enumerate(data["sweep"]):
        for key in SWEEP_FIELDS:
            if key not in row:
                raise ParseError(f"{path}: sweep[{i}] is missing field {key!r}")
    return data
