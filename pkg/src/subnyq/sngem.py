"""Dual-channel sub-Nyquist tone estimation.

Uniform undersampling folds every tone onto an alias in [0, fs/2].  The
aliased line spectrum is recovered with a matrix pencil on the signal
channel, then both channels are fitted on the shared aliased support.  The
derivative channel's amplitude is 2*pi*f times the signal channel's, so the
per-tone amplitude ratio yields the unfolded frequency directly; the alias
only has to select the correct fold candidate, which it does exactly.

The reported frequency is the ratio estimate.  The fold candidate
fold_index*fs +/- alias is an alternative fine estimate whose error is set by
the pencil rather than by the amplitude ratio; it is kept in the output
(fold_index, mirror, alias_frequency) and used as the starting point for the
optional Gauss-Newton refinement, which is off by default because it changes
the estimator's error law from the amplitude-ratio one to the phase-slope
one.

Random undersampling does not fold coherently, so that path estimates
frequencies directly: greedy deflation with a nonuniform periodogram peak,
joint two-channel Gauss-Newton refinement, and a final cyclic polish.  There
the amplitude ratio serves as a consistency diagnostic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.optimize

from .signal_core import (
    TWO_PI,
    DualChannelObservation,
    uniform_sample_rate,
    wrap_phase,
)

# floor for treating the derivative-channel amplitude as usable in a ratio
_RATIO_FLOOR = 1e3 * np.finfo(float).eps
# minimum singular-value gap accepted as a model-order boundary
_ORDER_GAP = 3.0
# cyclic refinement passes in the nonuniform deflation loop
# cyclic polish contracts inter-tone leakage linearly per pass
_MAX_POLISH_PASSES = 12
_POLISH_RTOL = 1e-13
# cap on automatically extracted tones in the nonuniform path
_MAX_AUTO_TONES = 64


class EstimationError(RuntimeError):
    """Base class for estimator failures."""


class OrderSelectionError(EstimationError):
    """No usable singular-value gap for automatic model-order selection."""


class CollisionError(EstimationError):
    """Aliased components are rank deficient (e.g. two tones share an alias)."""


class DegenerateRatioError(EstimationError):
    """Fitted amplitudes are too small or inconsistent for a ratio."""


class AmbiguousFoldError(EstimationError):
    """Two fold candidates are both compatible with the coarse estimate."""


@dataclass(frozen=True)
class EstimatorConfig:
    """Knobs for the sub-Nyquist estimator.

    model_order: number of real tones K, or None for automatic selection
    from the singular-value gap.
    pencil_ratio: Hankel row count as a fraction of N (uniform path).
    sv_threshold: relative singular-value cutoff, 1e-8 suits noiseless data;
    with noise the automatic order relies on the dominant gap instead.
    refine_iters: optional joint Gauss-Newton passes over (A, f, phi) per
    tone after the initial estimate.  Left at 0, the reported frequency
    follows the amplitude-ratio error law; turning it on re-anchors the
    estimate on the fold candidate and drives the error far below that law.
    """

    model_order: int | None = None
    pencil_ratio: float = 1.0 / 3.0
    sv_threshold: float = 1e-8
    refine_iters: int = 0

    def __post_init__(self):
        if self.model_order is not None and self.model_order < 1:
            raise ValueError("model_order must be a positive integer or None")
        if not 0.0 < self.pencil_ratio < 1.0:
            raise ValueError("pencil_ratio must lie in (0, 1)")
        if not 0.0 < self.sv_threshold < 1.0:
            raise ValueError("sv_threshold must lie in (0, 1)")
        if self.refine_iters < 0:
            raise ValueError("refine_iters must be nonnegative")


@dataclass(frozen=True)
class AliasedComponent:
    """One aliased line fitted on both channels (phases in the local time base)."""

    alias_frequency: float
    amp_x: float
    amp_xdot: float
    phase_x: float
    phase_xdot: float


@dataclass(frozen=True)
class EstimatedTone:
    frequency: float
    amplitude: float
    phase: float
    ratio: float
    f_ratio: float
    fold_index: int
    mirror: bool
    alias_frequency: float | None = None


@dataclass(frozen=True)
class ToneFailure:
    alias_frequency: float
    reason: str


@dataclass
class EstimationResult:
    """Successful tones plus individually reported per-tone failures."""

    tones: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    def __iter__(self):
        return iter(self.tones)

    def __len__(self):
        return len(self.tones)


def alias_frequency(frequency: float, sample_rate: float) -> float:
    """Alias of a frequency under uniform sampling, mapped into [0, fs/2]."""
    return abs(frequency - sample_rate * round(frequency / sample_rate))


def _amp_phase(a: float, b: float):
    # a*cos(w t) + b*sin(w t) = amp*cos(w t + phase)
    return math.hypot(a, b), math.atan2(-b, a)


def _sinusoid_design(freqs, tau):
    cols = []
    for f in freqs:
        arg = TWO_PI * f * tau
        cols.append(np.cos(arg))
        cols.append(np.sin(arg))
    return np.column_stack(cols)


def _auto_order(s, sv_threshold):
    significant = int(np.sum(s >= sv_threshold * s[0]))
    limit = min(significant, len(s) - 1)
    if limit < 2:
        raise OrderSelectionError("no significant singular values above threshold")
    best_rank, best_gap = 0, 0.0
    for r in range(2, limit + 1, 2):
        gap = s[r - 1] / s[r]
        if gap > best_gap:
            best_rank, best_gap = r, gap
    if best_gap < _ORDER_GAP:
        raise OrderSelectionError(
            f"largest singular-value gap {best_gap:.3g} below {_ORDER_GAP}"
        )
    return best_rank // 2


def estimate_aliased_spectrum(obs: DualChannelObservation, cfg: EstimatorConfig):
    """Recover the aliased line spectrum from a uniformly sampled observation.

    Builds the Hankel matrix of the signal channel with
    L = round(pencil_ratio * N) rows, truncates its SVD at rank 2K, solves
    the shift-invariance pencil as a generalized eigenvalue problem for the
    unit-circle roots, merges conjugate pairs into K alias frequencies, and
    least-squares fits both channels on the shared {cos, sin} support.

    Returns a list of AliasedComponent sorted by alias frequency.

    Raises
    ------
    ValueError
        Non-uniform sampling or an infeasible pencil size.
    CollisionError
        Rank deficiency, e.g. two tones folding onto the same alias.
    OrderSelectionError
        Automatic order requested but no usable singular-value gap.
    """
    fs = uniform_sample_rate(obs.times)
    tau = obs.times - obs.times[0]
    x = obs.x
    n = len(x)
    rows = int(round(cfg.pencil_ratio * n))
    rows = min(max(rows, 2), n - 1)
    cols = n - rows + 1

    if cfg.model_order is not None:
        k = cfg.model_order
        if n < 4 * k + 2:
            raise ValueError(f"need at least {4 * k + 2} samples for {k} tones")
        if 2 * k + 1 > rows or 2 * k > cols - 1:
            raise ValueError(
                f"pencil_ratio {cfg.pencil_ratio} too small for model order {k}"
            )

    hank = scipy.linalg.hankel(x[:rows], x[rows - 1 :])
    u, s, _ = scipy.linalg.svd(hank, full_matrices=False)

    if cfg.model_order is not None:
        k = cfg.model_order
        if s[2 * k - 1] < cfg.sv_threshold * s[0]:
            raise CollisionError(
                f"rank below 2K = {2 * k}: coincident aliases or missing tones"
            )
    else:
        k = _auto_order(s, cfg.sv_threshold)

    sub = u[:, : 2 * k]
    lam = scipy.linalg.eigvals(sub[:-1].T @ sub[1:], sub[:-1].T @ sub[:-1])
    aliases = np.abs(np.angle(lam)) * fs / TWO_PI
    aliases = np.sort(aliases)
    # conjugate pairs carry bit-identical |angle|; merge them (and anything
    # closer than numerical resolution, which real distinct tones never are)
    merged = [aliases[0]]
    for f_a in aliases[1:]:
        if f_a - merged[-1] > 1e-9 * fs:
            merged.append(f_a)
    if len(merged) < k:
        raise CollisionError(
            f"{len(merged)} distinct aliases for model order {k}: fold collision"
        )
    merged = np.array(merged[:k]) if len(merged) > k else np.array(merged)

    design = _sinusoid_design(merged, tau)
    coef_x, *_ = np.linalg.lstsq(design, x, rcond=None)
    coef_d, *_ = np.linalg.lstsq(design, obs.xdot, rcond=None)

    comps = []
    for i, f_a in enumerate(merged):
        amp_x, psi_x = _amp_phase(coef_x[2 * i], coef_x[2 * i + 1])
        amp_d, psi_d = _amp_phase(coef_d[2 * i], coef_d[2 * i + 1])
        comps.append(
            AliasedComponent(
                alias_frequency=float(f_a),
                amp_x=amp_x,
                amp_xdot=amp_d,
                phase_x=psi_x,
                phase_xdot=psi_d,
            )
        )
    return comps


def ratio_frequency(comp: AliasedComponent):
    """Frequency from the per-tone amplitude ratio.

    ratio = amp_x / amp_xdot estimates R = 1/(2 pi f), so
    f_ratio = amp_xdot / (2 pi amp_x).

    Returns (ratio, f_ratio).  Raises DegenerateRatioError when the
    derivative-channel amplitude is below the numerical floor.
    """
    if comp.amp_x <= 0.0 or comp.amp_xdot < _RATIO_FLOOR * comp.amp_x:
        raise DegenerateRatioError(
            f"amplitudes ({comp.amp_x:.3g}, {comp.amp_xdot:.3g}) unusable for a ratio"
        )
    ratio = comp.amp_x / comp.amp_xdot
    return ratio, 1.0 / (TWO_PI * ratio)


def fold_candidates(alias: float, sample_rate: float, band_limit: float):
    """All frequencies in (0, band_limit] consistent with an alias.

    Returns a list of (frequency, fold_index, mirror) sorted by frequency,
    where frequency = fold_index*fs + alias (mirror False) or
    fold_index*fs - alias (mirror True).
    """
    if not 0.0 <= alias <= sample_rate / 2.0 * (1.0 + 1e-12):
        raise ValueError(f"alias {alias:.6g} outside [0, fs/2]")
    cands = []
    m = 0
    while m * sample_rate - alias <= band_limit:
        for f, mirror in ((m * sample_rate + alias, False), (m * sample_rate - alias, True)):
            if 0.0 < f <= band_limit and (not cands or f != cands[-1][0]):
                cands.append((f, m, mirror))
        m += 1
    cands.sort(key=lambda c: c[0])
    out = [cands[0]] if cands else []
    for c in cands[1:]:
        if c[0] != out[-1][0]:
            out.append(c)
    return out


def unfold(
    f_ratio: float,
    alias: float,
    sample_rate: float,
    band_limit: float,
    sigma_coarse: float | None = None,
):
    """Select the fold candidate nearest the coarse ratio estimate.

    Ties break toward the smaller frequency.  When sigma_coarse is given and
    the two nearest candidates both lie within its 3-sigma band, the fold is
    declared ambiguous instead of guessed.

    Returns (frequency, fold_index, mirror) with frequency exactly equal to
    fold_index*fs +/- alias.
    """
    cands = fold_candidates(alias, sample_rate, band_limit)
    if not cands:
        raise ValueError("no fold candidate inside the band")
    ranked = sorted(cands, key=lambda c: (abs(c[0] - f_ratio), c[0]))
    if sigma_coarse is not None and len(ranked) >= 2:
        if abs(ranked[1][0] - f_ratio) < 3.0 * sigma_coarse:
            raise AmbiguousFoldError(
                f"candidates {ranked[0][0]:.6g} and {ranked[1][0]:.6g} both "
                f"within 3 sigma ({3 * sigma_coarse:.3g}) of {f_ratio:.6g}"
            )
    return ranked[0]


def _channel_weight(sigma: float) -> float:
    if math.isinf(sigma):
        return 0.0
    if sigma == 0.0:
        return 1.0
    return 1.0 / sigma


def _refine_joint(times, x, xdot, w_x, w_d, params, iters):
    """Cyclic Gauss-Newton over (A, f, phi) per tone, both channels jointly.

    params is an (K, 3) array updated in place and returned.
    """
    t = np.asarray(times, dtype=float)

    def tone_model(a, f, phi):
        arg = TWO_PI * f * t + phi
        return a * np.cos(arg), -TWO_PI * f * a * np.sin(arg)

    def full_model():
        mx = np.zeros_like(t)
        md = np.zeros_like(t)
        for a, f, phi in params:
            tx, td = tone_model(a, f, phi)
            mx += tx
            md += td
        return mx, md

    for _ in range(iters):
        for k in range(len(params)):
            mx, md = full_model()
            a, f, phi = params[k]
            tx, td = tone_model(a, f, phi)
            rx = x - (mx - tx)
            rd = xdot - (md - td)
            arg = TWO_PI * f * t + phi
            c, sn = np.cos(arg), np.sin(arg)
            jac_x = np.column_stack([c, -TWO_PI * t * a * sn, -a * sn])
            jac_d = np.column_stack(
                [
                    -TWO_PI * f * sn,
                    -TWO_PI * a * sn - TWO_PI**2 * f * a * t * c,
                    -TWO_PI * f * a * c,
                ]
            )
            jac = np.vstack([w_x * jac_x, w_d * jac_d])
            resid = np.concatenate([w_x * (rx - tx), w_d * (rd - td)])
            try:
                step, *_ = np.linalg.lstsq(jac, resid, rcond=None)
            except np.linalg.LinAlgError:
                continue
            a_new, f_new, phi_new = a + step[0], f + step[1], phi + step[2]
            if a_new <= 0.0 or f_new <= 0.0:
                continue
            params[k] = (a_new, f_new, float(wrap_phase(phi_new)))
    return params


def estimate(
    obs: DualChannelObservation, cfg: EstimatorConfig, band_limit: float
) -> EstimationResult:
    """Full sub-Nyquist estimate of all tones in the observation.

    Uniformly sampled observations go through the aliased pipeline: pencil,
    shared-support fits, per-tone amplitude ratio, fold selection.  Anything
    else is handled by :func:`estimate_nonuniform`.

    Per-tone failures (degenerate ratios, ambiguous folds) are collected in
    the result instead of aborting the remaining tones.
    """
    try:
        fs = uniform_sample_rate(obs.times)
    except ValueError:
        return estimate_nonuniform(obs, cfg, band_limit)

    t0 = float(obs.times[0])
    n = len(obs)
    comps = estimate_aliased_spectrum(obs, cfg)
    result = EstimationResult()
    for comp in comps:
        try:
            ratio, f_ratio = ratio_frequency(comp)
        except DegenerateRatioError as exc:
            result.failures.append(ToneFailure(comp.alias_frequency, str(exc)))
            continue
        sigma_coarse = None
        if (
            obs.sigma_x > 0.0
            and obs.sigma_xdot > 0.0
            and math.isfinite(obs.sigma_x)
            and math.isfinite(obs.sigma_xdot)
        ):
            inv_nsnr = (
                2.0 * obs.sigma_x**2 / comp.amp_x**2
                + 2.0 * obs.sigma_xdot**2 / comp.amp_xdot**2
            ) / n
            sigma_coarse = f_ratio * math.sqrt(inv_nsnr)
        try:
            fold_f, fold_index, mirror = unfold(
                f_ratio, comp.alias_frequency, fs, band_limit, sigma_coarse
            )
        except (AmbiguousFoldError, ValueError) as exc:
            result.failures.append(ToneFailure(comp.alias_frequency, str(exc)))
            continue
        # local alias phase is +/- the tone phase at the window start,
        # with the sign set by the fold mirror
        psi = comp.phase_x if not mirror else -comp.phase_x
        phase = float(wrap_phase(psi - TWO_PI * fold_f * t0))
        result.tones.append(
            EstimatedTone(
                frequency=f_ratio,
                amplitude=comp.amp_x,
                phase=phase,
                ratio=ratio,
                f_ratio=f_ratio,
                fold_index=fold_index,
                mirror=mirror,
                alias_frequency=comp.alias_frequency,
            )
        )

    if cfg.refine_iters > 0 and result.tones:
        w_x = _channel_weight(obs.sigma_x)
        w_d = _channel_weight(obs.sigma_xdot)
        params = [
            (
                tone.amplitude,
                tone.fold_index * fs + (-1.0 if tone.mirror else 1.0) * tone.alias_frequency,
                tone.phase,
            )
            for tone in result.tones
        ]
        params = _refine_joint(
            obs.times, obs.x, obs.xdot, w_x, w_d, params, cfg.refine_iters
        )
        result.tones = [
            EstimatedTone(
                frequency=f,
                amplitude=a,
                phase=phi,
                ratio=tone.ratio,
                f_ratio=tone.f_ratio,
                fold_index=tone.fold_index,
                mirror=tone.mirror,
                alias_frequency=tone.alias_frequency,
            )
            for (a, f, phi), tone in zip(params, result.tones)
        ]

    result.tones.sort(key=lambda tone: tone.frequency)
    return result


def _nonuniform_correlation(resid, tau, freqs, block: int = 2048):
    out = np.empty(len(freqs))
    for start in range(0, len(freqs), block):
        f_blk = freqs[start : start + block]
        phases = np.exp(-1j * TWO_PI * np.outer(f_blk, tau))
        out[start : start + block] = np.abs(phases @ resid) ** 2
    return out


def _profiled_cost(f, tau, targets, weights):
    arg = TWO_PI * f * tau
    design = np.column_stack([np.cos(arg), np.sin(arg)])
    cost = 0.0
    for y, w in zip(targets, weights):
        if w == 0.0:
            continue
        coef, *_ = np.linalg.lstsq(design, y, rcond=None)
        r = y - design @ coef
        cost += w * w * float(r @ r)
    return cost


def _gn_polish_single(f, tau, targets, weights, iters: int = 3):
    arg = TWO_PI * f * tau
    design = np.column_stack([np.cos(arg), np.sin(arg)])
    coefs = []
    for y, w in zip(targets, weights):
        coef, *_ = np.linalg.lstsq(design, y, rcond=None)
        coefs.append(coef)
    for _ in range(iters):
        arg = TWO_PI * f * tau
        c, sn = np.cos(arg), np.sin(arg)
        rows_j, rows_r = [], []
        for (y, w), coef in zip(zip(targets, weights), coefs):
            if w == 0.0:
                continue
            a, b = coef
            model = a * c + b * sn
            dmodel_df = TWO_PI * tau * (-a * sn + b * c)
            jac = np.column_stack([c, sn, dmodel_df])
            rows_j.append(w * jac)
            rows_r.append(w * (y - model))
        jac_all = np.vstack(rows_j)
        # amplitudes are per channel, frequency is shared: solve blockwise
        n_ch = len(rows_j)
        big = np.zeros((sum(r.shape[0] for r in rows_j), 2 * n_ch + 1))
        row0 = 0
        for i, jac in enumerate(rows_j):
            big[row0 : row0 + jac.shape[0], 2 * i : 2 * i + 2] = jac[:, :2]
            big[row0 : row0 + jac.shape[0], -1] = jac[:, 2]
            row0 += jac.shape[0]
        resid = np.concatenate(rows_r)
        step, *_ = np.linalg.lstsq(big, resid, rcond=None)
        live = 0
        for i, (y, w) in enumerate(zip(targets, weights)):
            if w == 0.0:
                continue
            coefs[i] = coefs[i] + step[2 * live : 2 * live + 2]
            live += 1
        f_new = f + step[-1]
        if f_new > 0.0:
            f = f_new
    return f


def estimate_nonuniform(
    obs: DualChannelObservation, cfg: EstimatorConfig, band_limit: float
) -> EstimationResult:
    """Direct multi-tone estimation from randomly undersampled data.

    Greedy deflation: (1) nonuniform periodogram of the signal channel on a
    grid no coarser than 1/(4*duration), (2) Gauss-Newton refinement of the
    peak on the joint dual-channel model, (3) shared-support least squares on
    both channels and subtraction, repeated for K tones (or until the peak
    falls below the residual noise floor, which is flagged).  A cyclic polish
    pass then revisits every tone against the others' residual.

    No folding is involved, so frequencies are direct; the amplitude ratio is
    reported per tone as a consistency diagnostic.
    """
    t = obs.times
    tau = t - t[0]
    duration = float(tau[-1])
    if duration <= 0.0:
        raise ValueError("observation window has zero duration")
    grid_step = 1.0 / (4.0 * duration)
    freqs = np.arange(grid_step, band_limit + grid_step / 2, grid_step)
    if len(freqs) == 0:
        raise ValueError("empty frequency grid: band limit below grid spacing")

    w_x = _channel_weight(obs.sigma_x)
    w_d = _channel_weight(obs.sigma_xdot)
    targets_full = (obs.x, obs.xdot)
    weights = (w_x, w_d)
    n = len(obs)

    k_target = cfg.model_order if cfg.model_order is not None else _MAX_AUTO_TONES
    result = EstimationResult()
    found: list[float] = []
    resid_x = obs.x.copy()
    resid_d = obs.xdot.copy()

    def refit_all():
        nonlocal resid_x, resid_d
        design = _sinusoid_design(found, tau)
        coef_x, *_ = np.linalg.lstsq(design, obs.x, rcond=None)
        coef_d, *_ = np.linalg.lstsq(design, obs.xdot, rcond=None)
        resid_x = obs.x - design @ coef_x
        resid_d = obs.xdot - design @ coef_d
        return coef_x, coef_d

    coef_x = coef_d = np.zeros(0)
    for k in range(k_target):
        power = _nonuniform_correlation(resid_x, tau, freqs)
        peak = int(np.argmax(power))
        median = float(np.median(power))
        threshold = (median / math.log(2.0)) * (math.log(len(freqs)) + 4.0)
        if power[peak] <= threshold or power[peak] == 0.0:
            if cfg.model_order is not None:
                result.warnings.append(
                    f"stopped after {k} of {cfg.model_order} tones: "
                    "periodogram peak below the residual noise floor"
                )
            break
        f0 = float(freqs[peak])
        lo = max(grid_step / 2, f0 - grid_step)
        hi = min(band_limit, f0 + grid_step)
        targets = (resid_x, resid_d)
        opt = scipy.optimize.minimize_scalar(
            _profiled_cost,
            bounds=(lo, hi),
            args=(tau, targets, weights),
            method="bounded",
            options={"xatol": grid_step * 1e-12},
        )
        f_hat = _gn_polish_single(float(opt.x), tau, targets, weights)
        found.append(f_hat)
        coef_x, coef_d = refit_all()

    for _ in range(_MAX_POLISH_PASSES if len(found) > 1 else 0):
        previous = list(found)
        for i in range(len(found)):
            # deflate with the joint-fit coefficients: refitting the others
            # alone would absorb this tone's leakage and bias its update
            coef_x, coef_d = refit_all()
            design = _sinusoid_design(found, tau)
            keep = np.ones(2 * len(found), dtype=bool)
            keep[2 * i : 2 * i + 2] = False
            targets = (
                obs.x - design[:, keep] @ coef_x[keep],
                obs.xdot - design[:, keep] @ coef_d[keep],
            )
            f_i = found[i]
            lo = max(grid_step / 2, f_i - grid_step)
            hi = min(band_limit, f_i + grid_step)
            opt = scipy.optimize.minimize_scalar(
                _profiled_cost,
                bounds=(lo, hi),
                args=(tau, targets, weights),
                method="bounded",
                options={"xatol": grid_step * 1e-12},
            )
            found[i] = _gn_polish_single(float(opt.x), tau, targets, weights)
        coef_x, coef_d = refit_all()
        if max(
            abs(f - p) / p for f, p in zip(found, previous)
        ) < _POLISH_RTOL:
            break

    for i, f_hat in enumerate(found):
        amp_x, psi_x = _amp_phase(coef_x[2 * i], coef_x[2 * i + 1])
        amp_d, _ = _amp_phase(coef_d[2 * i], coef_d[2 * i + 1])
        phase = float(wrap_phase(psi_x - TWO_PI * f_hat * t[0]))
        if amp_x > 0.0 and amp_d >= _RATIO_FLOOR * amp_x:
            ratio = amp_x / amp_d
            f_ratio = 1.0 / (TWO_PI * ratio)
        else:
            ratio = math.nan
            f_ratio = math.nan
        if obs.sigma_x > 0.0 and obs.sigma_xdot > 0.0 and math.isfinite(f_ratio):
            inv_nsnr = (
                2.0 * obs.sigma_x**2 / amp_x**2 + 2.0 * obs.sigma_xdot**2 / amp_d**2
            ) / n
            band = 3.0 * f_ratio * math.sqrt(inv_nsnr)
            if abs(f_ratio - f_hat) > band:
                result.warnings.append(
                    f"tone at {f_hat:.6g} Hz: ratio check {f_ratio:.6g} Hz is "
                    f"outside the 3 sigma band {band:.3g}"
                )
        result.tones.append(
            EstimatedTone(
                frequency=f_hat,
                amplitude=amp_x,
                phase=phase,
                ratio=ratio,
                f_ratio=f_ratio,
                fold_index=0,
                mirror=False,
                alias_frequency=None,
            )
        )

    if cfg.refine_iters > 0 and result.tones:
        params = [(tn.amplitude, tn.frequency, tn.phase) for tn in result.tones]
        params = _refine_joint(t, obs.x, obs.xdot, w_x, w_d, params, cfg.refine_iters)
        result.tones = [
            EstimatedTone(
                frequency=f,
                amplitude=a,
                phase=phi,
                ratio=tone.ratio,
                f_ratio=tone.f_ratio,
                fold_index=0,
                mirror=False,
                alias_frequency=None,
            )
            for (a, f, phi), tone in zip(params, result.tones)
        ]

    result.tones.sort(key=lambda tone: tone.frequency)
    return result
