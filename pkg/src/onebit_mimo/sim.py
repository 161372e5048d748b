"""Monte-Carlo BER sweeps, the exhaustive oracle, and CSV emission.

One trial runs the full downlink pipeline: draw a Rayleigh channel, draw
payload bits, modulate, precode with the selected precoder, add noise,
rescale each UE's samples by its estimated precoding factor, detect, and
count bit errors over the payload slots.

Seeding scheme (counter mode): the per-trial seed is
``SeedSequence((master_seed, point_index, trial_index))`` where
``point_index`` indexes the SNR list. The trial seed is spawned into three
child streams, consumed in fixed order: channel, bits, noise. The derivation
involves neither the precoder nor the estimator, so all precoders at one
(point, trial) see identical channel, bits and noise (paired-seed fairness),
trials are embarrassingly parallel, and reruns of the same sweep
configuration are byte-identical.

CSV schema (fixed): snr_db,precoder,constellation,estimator,trials,
bits_total,bit_errors,ber,clamp_flags
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .constellations import detect, get_constellation
from .gain_estimation import blind_estimate, genie_estimate, pilot_mle
from .linear import linear_quantized_precode
from .model import (
    ChannelMatrix,
    PrecodeResult,
    SymbolFrame,
    SystemConfig,
    _as_array,
    apply_channel,
    gen_awgn,
    gen_rayleigh_channel,
    optimal_beta_for,
    qp_objective,
    real_embed,
    stack_real,
)
from .sdr import SdrOptions, sdr_precode
from .squid import SquidOptions, squid_precode

PRECODER_IDS = ("zfq", "mrtq", "squid", "sdr", "bruteforce")
ESTIMATOR_IDS = ("genie", "pilot", "blind")

CSV_HEADER = ("snr_db,precoder,constellation,estimator,trials,"
              "bits_total,bit_errors,ber,clamp_flags")

#: largest enumerable search space for the exhaustive oracle, 4^(BK) <= 2^24
BRUTE_FORCE_GUARD_BITS = 24
_BRUTE_FORCE_CHUNK = 1 << 14


# ---------------------------------------------------------------------------
# Configuration and records
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TrialConfig:
    """One concrete simulation point: system, constellation, precoder, estimator."""

    system: SystemConfig
    constellation: str = "qpsk"
    precoder: str = "squid"
    estimator: str = "blind"
    squid: SquidOptions | None = None
    sdr: SdrOptions | None = None

    def __post_init__(self):
        if self.precoder not in PRECODER_IDS:
            raise ValueError(f"unknown precoder {self.precoder!r}; choose from {PRECODER_IDS}")
        if self.estimator not in ESTIMATOR_IDS:
            raise ValueError(f"unknown estimator {self.estimator!r}; choose from {ESTIMATOR_IDS}")
        if self.estimator == "pilot" and self.system.num_slots < 2:
            raise ValueError("pilot estimation consumes slot 1; need num_slots >= 2")


@dataclass(frozen=True)
class TrialResult:
    """Per-UE bit error counts plus trial metadata."""

    bit_errors: np.ndarray
    bits_total: int
    clamp_flags: int
    precoder_flags: int
    objective: float
    beta: float


@dataclass(frozen=True)
class SweepConfig:
    num_bs_antennas: int
    num_ues: int
    num_slots: int
    snr_db: tuple
    constellation: str
    precoders: tuple
    estimator: str
    trials: int
    seed: int
    out: str | Path | None = None
    stop_after_errors: int | None = None
    transmit_power: float = 1.0
    squid: SquidOptions | None = None
    sdr: SdrOptions | None = None

    def __post_init__(self):
        object.__setattr__(self, "snr_db", tuple(float(v) for v in self.snr_db))
        object.__setattr__(self, "precoders", tuple(self.precoders))
        if not self.snr_db:
            raise ValueError("snr_db list must be nonempty")
        if not self.precoders:
            raise ValueError("precoder list must be nonempty")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")
        if self.stop_after_errors is not None and self.stop_after_errors < 1:
            raise ValueError("stop_after_errors must be >= 1 (or None)")


@dataclass(frozen=True)
class BerRecord:
    """Aggregated error counts for one (SNR, precoder) point.

    ``wall_time``, ``failures`` and ``precoder_flags`` are metadata kept out
    of the CSV so reruns stay byte-identical.
    """

    snr_db: float
    precoder: str
    constellation: str
    estimator: str
    bit_errors: int
    bits_total: int
    trials: int
    clamp_flags: int
    wall_time: float
    failures: int = 0
    precoder_flags: int = 0

    @property
    def ber(self) -> float:
        return self.bit_errors / self.bits_total if self.bits_total else 0.0

    def csv_row(self) -> str:
        return (f"{self.snr_db:g},{self.precoder},{self.constellation},"
                f"{self.estimator},{self.trials},{self.bits_total},"
                f"{self.bit_errors},{self.ber:.12g},{self.clamp_flags}")


def records_to_csv(records) -> str:
    lines = [CSV_HEADER]
    lines.extend(r.csv_row() for r in records)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Trial pipeline
# ---------------------------------------------------------------------------

def trial_seed_for(master_seed: int, point_index: int, trial_index: int) -> np.random.SeedSequence:
    """Documented counter-mode derivation of the per-trial seed."""
    return np.random.SeedSequence((master_seed, point_index, trial_index))


def draw_trial_data(system: SystemConfig, constellation: str,
                    payload_slots: int, trial_seed):
    """Draw (channel, payload frame, noise) for one trial.

    Pure function of the seed and the listed arguments; the precoder and
    estimator choices never enter, which is what makes paired-seed
    comparisons fair.
    """
    ss = trial_seed if isinstance(trial_seed, np.random.SeedSequence) \
        else np.random.SeedSequence(trial_seed)
    # like ss.spawn(3), but stateless: reusing one seed object must not shift
    # the child streams between calls
    chan_seed, bits_seed, noise_seed = (
        np.random.SeedSequence(entropy=ss.entropy, spawn_key=ss.spawn_key + (i,))
        for i in range(3)
    )
    const = get_constellation(constellation)
    h = gen_rayleigh_channel(system.num_ues, system.num_bs_antennas, chan_seed)
    frame = SymbolFrame.random(const, system.num_ues, payload_slots, bits_seed)
    noise = gen_awgn(system.num_ues, system.num_slots, system.noise_var, noise_seed)
    return h, frame, noise


def _precode(cfg: TrialConfig, s_tx: np.ndarray, h: ChannelMatrix) -> PrecodeResult:
    if cfg.precoder == "zfq":
        return linear_quantized_precode(s_tx, h, cfg.system, kind="zf")
    if cfg.precoder == "mrtq":
        return linear_quantized_precode(s_tx, h, cfg.system, kind="mrt")
    if cfg.precoder == "squid":
        return squid_precode(s_tx, h, cfg.system, cfg.squid)
    if cfg.precoder == "sdr":
        return sdr_precode(s_tx, h, cfg.system, cfg.sdr)
    x, beta, _ = brute_force_qp(s_tx, h, cfg.system)
    return PrecodeResult(x=x, beta=beta)


def run_trial(cfg: TrialConfig, trial_seed) -> TrialResult:
    """Run one end-to-end trial; fully determined by ``trial_seed``."""
    system = cfg.system
    const = get_constellation(cfg.constellation)
    pilot_mode = cfg.estimator == "pilot"
    payload_slots = system.num_slots - 1 if pilot_mode else system.num_slots

    h, frame, noise = draw_trial_data(system, cfg.constellation,
                                      payload_slots, trial_seed)
    if pilot_mode:
        # pilot slot k=1 carries sqrt(Es)=1 at every UE; payload fills the rest
        pilot_col = np.ones((system.num_ues, 1), dtype=complex)
        s_tx = np.concatenate([pilot_col, frame.s], axis=1)
    else:
        s_tx = frame.s

    pre = _precode(cfg, s_tx, h)
    y = apply_channel(h, pre.x, noise)

    estimates = []
    for u in range(system.num_ues):
        if cfg.estimator == "genie":
            estimates.append(genie_estimate(pre, ue=u))
        elif cfg.estimator == "pilot":
            estimates.append(pilot_mle(y[u, 0], es=1.0, ue=u))
        else:
            estimates.append(blind_estimate(y[u], es=1.0,
                                            noise_var=system.noise_var, ue=u))
    betas = np.array([e.value for e in estimates])
    clamp_flags = sum(e.clamped for e in estimates)

    payload_y = y[:, 1:] if pilot_mode else y
    s_hat = betas[:, None] * payload_y
    _, bits_hat = detect(s_hat, const)
    bits_hat = bits_hat.reshape(system.num_ues, -1)
    bit_errors = np.sum(bits_hat != frame.bits, axis=1)

    return TrialResult(
        bit_errors=bit_errors,
        bits_total=int(frame.bits.size),
        clamp_flags=int(clamp_flags),
        precoder_flags=len(pre.flags),
        objective=qp_objective(s_tx, h, pre.x, pre.beta, system.noise_var),
        beta=pre.beta,
    )


# ---------------------------------------------------------------------------
# Exhaustive oracle
# ---------------------------------------------------------------------------

def brute_force_qp(s: np.ndarray, h, cfg: SystemConfig):
    """Exact minimizer of the frame MSE over the full 1-bit transmit set.

    Enumerates all 4^(BK) sign patterns of the real-embedded frame (pattern
    index bit j, LSB first, selects the sign of entry j of vec(X_R); bit
    0 -> +l). Each candidate gets its conditionally optimal factor; the
    first strict minimum wins, so ties break by enumeration order. Guarded
    to 4^(BK) <= 2^24.

    Returns (x, beta, objective).
    """
    s = np.asarray(_as_array(s, "s"), dtype=complex)
    h_arr = np.asarray(_as_array(h, "h"), dtype=complex)
    num_antennas = h_arr.shape[1]
    num_ues, num_slots = s.shape
    n_bits = 2 * num_antennas * num_slots
    if n_bits > BRUTE_FORCE_GUARD_BITS:
        raise ValueError(
            f"search space 4^(B*K) = 2^{n_bits} exceeds the 2^"
            f"{BRUTE_FORCE_GUARD_BITS} guard"
        )
    h_r = h.h_real if isinstance(h, ChannelMatrix) else real_embed(h_arr)
    s_r = stack_real(s)
    level = math.sqrt(cfg.transmit_power / (2.0 * num_antennas))
    s_energy = float(np.sum(s_r * s_r))
    noise_term = num_ues * num_slots * cfg.noise_var

    best_obj = math.inf
    best_pattern = 0
    bit_weights = np.arange(n_bits, dtype=np.uint32)
    total = 1 << n_bits
    for start in range(0, total, _BRUTE_FORCE_CHUNK):
        idx = np.arange(start, min(start + _BRUTE_FORCE_CHUNK, total),
                        dtype=np.uint32)
        bits = (idx[:, None] >> bit_weights[None, :]) & 1
        signs = 1.0 - 2.0 * bits
        # vec is column-major: entry j sits at (j % 2B, j // 2B)
        xr = (level * signs).reshape(-1, num_slots, 2 * num_antennas)
        xr = xr.transpose(0, 2, 1)
        hx = np.einsum("ub,pbk->puk", h_r, xr)
        num = np.einsum("puk,uk->p", hx, s_r)
        den = np.einsum("puk,puk->p", hx, hx) + noise_term
        beta = np.maximum(0.0, num / den)
        obj = s_energy - 2.0 * beta * num + beta ** 2 * den
        local = int(np.argmin(obj))
        if obj[local] < best_obj:
            best_obj = float(obj[local])
            best_pattern = start + local

    bits = (best_pattern >> bit_weights) & 1
    signs = 1.0 - 2.0 * bits.astype(float)
    xr = (level * signs).reshape(num_slots, 2 * num_antennas).T
    x = xr[:num_antennas] + 1j * xr[num_antennas:]
    # recompute through the shared routines so comparisons with heuristic
    # precoders follow identical floating-point paths
    beta_star = optimal_beta_for(x, s, h_arr, cfg.noise_var)
    return x, beta_star, qp_objective(s, h_arr, x, beta_star, cfg.noise_var)


# ---------------------------------------------------------------------------
# Sweep driver
# ---------------------------------------------------------------------------

def sweep(cfg: SweepConfig) -> list:
    """Run the Monte-Carlo sweep and (optionally) write the CSV.

    Iterates SNR points x precoders, aggregating ``trials`` seeded trials
    per point; per-trial seeds come from :func:`trial_seed_for`, so a rerun
    with the same configuration produces byte-identical CSV output. A trial
    whose precoder raises is counted in ``failures`` rather than dropped
    silently. With ``stop_after_errors`` set, a point stops accumulating
    trials once that many bit errors have been seen (opt-in, off by
    default).
    """
    get_constellation(cfg.constellation)  # validate early
    records = []
    for point_index, snr_db in enumerate(cfg.snr_db):
        system = SystemConfig.from_snr_db(
            cfg.num_bs_antennas, cfg.num_ues, cfg.num_slots,
            snr_db=snr_db, transmit_power=cfg.transmit_power,
        )
        for precoder in cfg.precoders:
            tcfg = TrialConfig(system=system, constellation=cfg.constellation,
                               precoder=precoder, estimator=cfg.estimator,
                               squid=cfg.squid, sdr=cfg.sdr)
            t0 = time.perf_counter()
            errors = bits = clamps = flags = failures = done = 0
            for trial_index in range(cfg.trials):
                seed = trial_seed_for(cfg.seed, point_index, trial_index)
                try:
                    res = run_trial(tcfg, seed)
                except (np.linalg.LinAlgError, ValueError):
                    failures += 1
                    done += 1
                    continue
                errors += int(res.bit_errors.sum())
                bits += res.bits_total
                clamps += res.clamp_flags
                flags += res.precoder_flags
                done += 1
                if cfg.stop_after_errors is not None and errors >= cfg.stop_after_errors:
                    break
            records.append(BerRecord(
                snr_db=snr_db, precoder=precoder,
                constellation=cfg.constellation, estimator=cfg.estimator,
                bit_errors=errors, bits_total=bits, trials=done,
                clamp_flags=clamps, wall_time=time.perf_counter() - t0,
                failures=failures, precoder_flags=flags,
            ))
    if cfg.out is not None:
        Path(cfg.out).write_text(records_to_csv(records), encoding="ascii")
    return records
