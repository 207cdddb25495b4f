"""Monte-Carlo BER harness for the turbo-coded 3x3 MIMO-OFDM link.

Transmit chain: info bits -> turbo encoder (or bypass) -> QPSK -> 3-stream
spatial multiplexing -> OFDM with CP.  The quasi-static channel is applied
per subcarrier, Class-A noise is added to the time-domain samples of every
receive phase, and the receiver runs FFT -> preamble channel estimate ->
MMSE -> soft demapping -> turbo decoder (or hard decision).

SNR is the average received signal power per receive phase over the total
noise power ``sigma2``.
"""
from __future__ import annotations

import csv
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from . import mimo_rx
from .cable_channel import CableParams, ChannelRealization, MultipathProfile, synthesize_channel
from .noise import NoiseParams, sample_noise
from .ofdm_modem import OfdmConfig, ofdm_demodulate, ofdm_modulate, qpsk_map, spatial_demux, spatial_mux
from .turbo import TurboConfig, decode, encode

log = logging.getLogger(__name__)

CSV_HEADER = ("band", "snr_db", "coded", "bits", "errors", "ber", "ebn0_db")

# bands compared for the frequency-band experiment, MHz
REFERENCE_BANDS_MHZ = ((0.5, 2.5), (1.0, 3.0), (2.0, 4.0), (3.0, 5.0), (4.0, 6.0), (4.5, 6.5))


def band_label(band) -> str:
    return f"{band[0] / 1e6:.1f}-{band[1] / 1e6:.1f}"


@dataclass
class SimConfig:
    cable: CableParams = field(default_factory=CableParams)
    profile: MultipathProfile | None = None
    noise: NoiseParams = field(default_factory=NoiseParams)
    ofdm: OfdmConfig = field(default_factory=OfdmConfig)
    turbo: TurboConfig = field(default_factory=TurboConfig)
    bands: tuple = ((3.0e6, 5.0e6),)
    coded: tuple = (True, False)
    snr_points: tuple = (0.0, 2.0, 4.0, 6.0, 8.0, 10.0, 12.0)
    min_bits: int = 100_000
    max_bits: int = 1_000_000
    target_errors: int = 100
    seed: int = 0
    blocks_per_frame: int = 16
    csi: str = "estimated"          # or "perfect"
    channel: str = "cable"          # or "identity"
    estimate_noise: bool = False
    preamble_symbols: int = 3
    llr_clip: float = mimo_rx.L_MAX
    noiseless: bool = False
    workers: int = 1

    def __post_init__(self):
        if self.profile is None:
            self.profile = MultipathProfile.default(self.cable)
        self.bands = tuple((float(a), float(b)) for a, b in self.bands)
        self.coded = tuple(bool(c) for c in self.coded)
        self.snr_points = tuple(float(s) for s in self.snr_points)
        if not self.bands:
            raise ValueError("at least one band is required")
        if not self.coded:
            raise ValueError("at least one coding mode is required")
        if self.min_bits < 1 or self.max_bits < self.min_bits:
            raise ValueError("need 1 <= min_bits <= max_bits")
        if self.csi not in ("estimated", "perfect"):
            raise ValueError(f"csi must be 'estimated' or 'perfect', got {self.csi!r}")
        if self.channel not in ("cable", "identity"):
            raise ValueError(f"channel must be 'cable' or 'identity', got {self.channel!r}")
        if self.ofdm.n_streams != 3:
            raise ValueError("the cable channel is 3x3; n_streams must be 3")
        if self.blocks_per_frame < 1:
            raise ValueError("blocks_per_frame must be >= 1")


@dataclass(frozen=True)
class BerRecord:
    band: str
    snr_db: float
    coded: bool
    bits: int
    errors: int
    ebn0_db: float

    @property
    def ber(self) -> float:
        return self.errors / self.bits if self.bits else float("nan")

    def row(self) -> list[str]:
        return [self.band, f"{self.snr_db:g}", "1" if self.coded else "0", str(self.bits),
                str(self.errors), f"{self.ber:.6e}", f"{self.ebn0_db:.4f}"]


def realize_channel(config: SimConfig, band) -> ChannelRealization:
    """Quasi-static channel on the subcarrier grid starting at ``band[0]``."""
    occupied = config.ofdm.occupied_band(band[0])
    n = config.ofdm.n_subcarriers
    if config.channel == "identity":
        return ChannelRealization.identity(occupied, n)
    return synthesize_channel(config.cable, config.profile, occupied, n)


def rx_signal_power(rx_matrix: np.ndarray) -> float:
    """Mean received power per phase for unit-power independent streams."""
    p = float(np.mean(np.sum(np.abs(rx_matrix) ** 2, axis=(-2, -1))) / rx_matrix.shape[-2])
    if not (math.isfinite(p) and p > 0):
        raise ValueError(f"non-finite or zero received signal power {p!r}")
    return p


def ebn0_db(config: SimConfig, snr_db: float, coded: bool) -> float:
    """Eb/N0 for a given per-phase SNR, ignoring CP and preamble overhead."""
    rate = float(config.turbo.rate) if coded else 1.0
    n_rx = n_tx = config.ofdm.n_streams
    return snr_db + 10 * math.log10(n_rx / (n_tx * 2 * rate))


def net_bit_rate(config: SimConfig, coded: bool) -> float:
    """Information bit rate in bit/s including CP overhead (preamble excluded)."""
    o = config.ofdm
    rate = float(config.turbo.rate) if coded else 1.0
    t_sym = (o.n_subcarriers + o.cp_len) / o.sample_rate
    return o.bits_per_ofdm_symbol * rate / t_sym


def frame_layout(config: SimConfig, coded: bool) -> tuple[int, int]:
    """(information bits, data OFDM symbols) per simulated frame."""
    per_sym = config.ofdm.bits_per_ofdm_symbol
    coded_bits = config.blocks_per_frame * config.turbo.n_coded_bits
    n_sym = -(-coded_bits // per_sym)
    if coded:
        return config.blocks_per_frame * config.turbo.n_info_bits, n_sym
    return n_sym * per_sym, n_sym


def _point_rng(config: SimConfig, band, coded: bool, snr_db: float, frame: int):
    key = [int(config.seed), int(round(band[0])), int(round(band[1])), int(coded),
           int(round(snr_db * 1000)) + 10**9, frame]
    return np.random.default_rng(np.random.SeedSequence(key))


def simulate_frame(config: SimConfig, rx_matrix: np.ndarray, sigma2: float, coded: bool,
                   rng: np.random.Generator) -> tuple[int, int]:
    """Push one frame through the link; returns (info bits, bit errors)."""
    ofdm = config.ofdm
    turbo = config.turbo
    n_info, n_sym = frame_layout(config, coded)
    info = rng.integers(0, 2, size=n_info, dtype=np.int8)
    if coded:
        blocks = info.reshape(config.blocks_per_frame, turbo.n_info_bits)
        payload = np.concatenate([encode(b, turbo).bits for b in blocks])
    else:
        payload = info
    n_fill = n_sym * ofdm.bits_per_ofdm_symbol - len(payload)
    tx_bits = np.concatenate([payload, rng.integers(0, 2, size=n_fill, dtype=np.int8)])

    data = spatial_mux(qpsk_map(tx_bits), ofdm)
    pre = mimo_rx.preamble_grid(ofdm, config.preamble_symbols)
    tx = np.concatenate([pre, data], axis=1)                  # (n_tx, T, N)
    rx_clean = np.einsum("kij,jtk->itk", rx_matrix, tx)        # per-subcarrier y = H x
    samples = ofdm_modulate(rx_clean, ofdm)                    # (n_rx, T, N + cp)
    if not config.noiseless:
        noise = sample_noise(config.noise.with_power(sigma2), samples.size, rng)
        samples = samples + noise.samples.reshape(samples.shape)
    rx = ofdm_demodulate(samples, ofdm)

    n_pre = config.preamble_symbols
    if config.csi == "perfect":
        H, noise_var = rx_matrix, np.full(ofdm.n_streams, sigma2)
    else:
        est = mimo_rx.estimate_channel(rx[:, :n_pre], pre, noise_var=sigma2,
                                       estimate_noise=config.estimate_noise)
        H, noise_var = est.H, est.noise_var
    y = np.moveaxis(rx[:, n_pre:], 0, -1)                     # (T_data, N, n_rx)
    det = mimo_rx.mmse_detect(y, H, noise_var)
    s_hat = spatial_demux(np.moveaxis(det.s_hat, -1, 0), ofdm)
    res_var = spatial_demux(np.moveaxis(det.res_var, -1, 0), ofdm)
    llr = mimo_rx.soft_demod(mimo_rx.DetectionOutput(s_hat, res_var), config.llr_clip).ravel()
    llr = llr[:len(payload)]

    if coded:
        llr_blocks = llr.reshape(config.blocks_per_frame, turbo.n_coded_bits)
        decoded = np.concatenate([decode(l, turbo) for l in llr_blocks])
    else:
        decoded = (llr > 0).astype(np.int8)
    return n_info, int(np.count_nonzero(decoded != info))


def run_point(config: SimConfig, snr_db: float, band=None, coded: bool | None = None,
              channel: ChannelRealization | None = None) -> BerRecord:
    """BER at one SNR for one band and coding mode.

    Frames are simulated until ``min_bits`` are sent and then until
    ``target_errors`` errors or ``max_bits`` bits, whichever comes first.
    """
    band = config.bands[0] if band is None else tuple(band)
    coded = config.coded[0] if coded is None else bool(coded)
    channel = channel or realize_channel(config, band)
    rx_matrix = channel.rx_matrix
    sigma2 = rx_signal_power(rx_matrix) / 10 ** (snr_db / 10)
    bits = errors = frame = 0
    while bits < config.min_bits or (errors < config.target_errors and bits < config.max_bits):
        rng = _point_rng(config, band, coded, snr_db, frame)
        n, e = simulate_frame(config, rx_matrix, sigma2, coded, rng)
        bits += n
        errors += e
        frame += 1
    return BerRecord(band_label(band), float(snr_db), coded, bits, errors,
                     ebn0_db(config, snr_db, coded))


def _run_series(args):
    config, band, coded = args
    channel = realize_channel(config, band)
    return [run_point(config, s, band, coded, channel) for s in config.snr_points]


def sweep(config: SimConfig, out=None) -> list[BerRecord]:
    """One record per (band, coding mode, SNR), optionally written as CSV."""
    if not config.snr_points:
        raise ValueError("at least one SNR point is required")
    jobs = [(config, band, coded) for band in config.bands for coded in config.coded]
    if config.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            series = list(pool.map(_run_series, jobs))
    else:
        series = [_run_series(job) for job in jobs]
    records = [r for s in series for r in s]
    for rec in monotonicity_violations(records):
        log.warning("BER rises with SNR: %s at %g dB (coded=%s)", rec.band, rec.snr_db, rec.coded)
    if out is not None:
        write_csv(records, out)
    return records


def write_csv(records, path) -> None:
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(CSV_HEADER)
            for rec in records:
                writer.writerow(rec.row())
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def read_csv(path) -> list[BerRecord]:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return [BerRecord(r["band"], float(r["snr_db"]), r["coded"] == "1", int(r["bits"]),
                      int(r["errors"]), float(r["ebn0_db"])) for r in rows]


def monotonicity_violations(records, n_sigma: float = 3.0, min_errors: int = 100):
    """Points whose BER exceeds the previous SNR point's by more than
    ``n_sigma`` binomial standard errors; only well-measured points count."""
    bad = []
    series: dict = {}
    for r in records:
        series.setdefault((r.band, r.coded), []).append(r)
    for recs in series.values():
        recs = sorted(recs, key=lambda r: r.snr_db)
        for prev, cur in zip(recs, recs[1:]):
            if prev.errors < min_errors or cur.errors < min_errors:
                continue
            se = math.sqrt(prev.ber * (1 - prev.ber) / prev.bits + cur.ber * (1 - cur.ber) / cur.bits)
            if cur.ber > prev.ber + n_sigma * se:
                bad.append(cur)
    return bad


def snr_at_ber(records, target: float) -> float | None:
    """SNR where a single series crosses ``target``, by linear interpolation of
    log10(BER) between the bracketing points."""
    recs = sorted(records, key=lambda r: r.snr_db)
    for a, b in zip(recs, recs[1:]):
        if a.ber >= target > b.ber:
            if b.errors == 0:
                return None
            la, lb, lt = math.log10(a.ber), math.log10(b.ber), math.log10(target)
            return a.snr_db + (la - lt) / (la - lb) * (b.snr_db - a.snr_db)
    return None


def with_overrides(config: SimConfig, **kw) -> SimConfig:
    return replace(config, **{k: v for k, v in kw.items() if v is not None})


def reference_config(**kw) -> SimConfig:
    """Simulation parameters of the reference experiment (PB 264, rate 1/2,
    A = 0.1, Gamma = 0.01, 1024 subcarriers at 2 kHz)."""
    base = SimConfig(noise=NoiseParams(A=0.1, gamma=0.01),
                     turbo=TurboConfig(pb_size=264, rate=Fraction(1, 2)))
    return replace(base, **kw)
