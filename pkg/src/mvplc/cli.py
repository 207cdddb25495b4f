"""Command-line entry point: ``mvplc sweep|channel-dump|codec|noise-sample``.

Exit status is 0 on success, 2 for configuration or usage errors and 3 for
I/O errors.
"""
from __future__ import annotations

import argparse
import csv
import logging
import sys
import time

import numpy as np

from . import __version__
from .config import ConfigError, load_config, override
from .link_sim import SimConfig, band_label, net_bit_rate, realize_channel, sweep, with_overrides
from .noise import NoiseParams, sample_noise
from .turbo import PB_SIZES, TurboConfig, decode, encode

EXIT_OK, EXIT_CONFIG, EXIT_IO = 0, 2, 3


def _bits_from_hex(text: str, n_bits: int) -> np.ndarray:
    raw = bytes.fromhex("".join(text.split()))
    bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8))
    if len(bits) != n_bits:
        raise ValueError(f"expected {n_bits} bits ({n_bits // 8} bytes), got {len(bits)}")
    return bits.astype(np.int8)


def _bits_to_hex(bits) -> str:
    return np.packbits(np.asarray(bits, dtype=np.uint8)).tobytes().hex()


def _read_text(path) -> str:
    if path in (None, "-"):
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _write_text(path, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    with open(path, "w") as fh:
        fh.write(text)


def cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    cfg = override(cfg, seed=args.seed, bands=args.band, snr=args.snr)
    if args.workers is not None:
        cfg = with_overrides(cfg, workers=args.workers)
    for coded in cfg.coded:
        label = f"turbo rate {cfg.turbo.rate}" if coded else "uncoded"
        print(f"net bit rate ({label}): {net_bit_rate(cfg, coded) / 1e6:.3f} Mbit/s", file=sys.stderr)
    t0 = time.perf_counter()
    records = sweep(cfg, out=args.out)
    print(f"wrote {len(records)} points to {args.out} in {time.perf_counter() - t0:.1f} s",
          file=sys.stderr)
    return EXIT_OK


def cmd_channel_dump(args) -> int:
    cfg = load_config(args.config) if args.config else SimConfig()
    cfg = override(cfg, bands=args.band)
    for band in cfg.bands:
        ch = realize_channel(cfg, band)
        out = args.out
        if len(cfg.bands) > 1:
            out = out.replace(".csv", "") + f"_{band_label(band)}.csv"
        ch.to_csv(out)
        print(f"{band_label(band)} MHz: {ch.n_freqs} frequencies -> {out}", file=sys.stderr)
    return EXIT_OK


def cmd_codec(args) -> int:
    try:
        cfg = TurboConfig(pb_size=args.pb_size, rate=args.rate, iterations=args.iterations)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    text = _read_text(args.input)
    try:
        if args.action == "encode":
            bits = _bits_from_hex(text, cfg.n_info_bits)
            out = encode(bits, cfg).bits
        else:
            bits = _bits_from_hex(text, cfg.n_coded_bits)
            out = decode(args.reliability * (2.0 * bits - 1.0), cfg)
    except ValueError as exc:
        raise ConfigError(f"input: {exc}") from None
    _write_text(args.output, _bits_to_hex(out) + "\n")
    return EXIT_OK


def cmd_noise_sample(args) -> int:
    try:
        params = NoiseParams(A=args.A, gamma=args.gamma, sigma2=args.sigma2)
        if args.count < 1:
            raise ValueError("--count must be >= 1")
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    frame = sample_noise(params, args.count, args.seed)
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["re", "im", "k_re", "k_im"])
        for z, k in zip(frame.samples, frame.impulse_counts):
            w.writerow([repr(float(z.real)), repr(float(z.imag)), int(k[0]), int(k[1])])
    power = float(np.mean(np.abs(frame.samples) ** 2))
    print(f"{args.count} samples, empirical power {power:.4f}", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mvplc", description=(
        "Turbo-coded 3x3 MIMO-OFDM link simulator for medium-voltage underground "
        "power-line channels."))
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sweep", help="run a BER sweep and write CSV",
                       description="Run the configured BER sweep and write one CSV row "
                                   "per (band, SNR, coding mode).")
    s.add_argument("--config", required=True, help="INI config file")
    s.add_argument("--out", required=True, help="output CSV path")
    s.add_argument("--seed", type=int, help="override [sim] seed")
    s.add_argument("--band", help="override [sim] bands, MHz, e.g. '3.0-5.0,1.0-3.0'")
    s.add_argument("--snr", help="override [sim] snr, 'start:step:stop' or a comma list (dB)")
    s.add_argument("--workers", type=int, help="parallel worker processes")
    s.set_defaults(func=cmd_sweep)

    c = sub.add_parser("channel-dump", help="write the channel transfer matrices as CSV",
                       description="Evaluate the 3x3 cable channel on the subcarrier grid "
                                   "and write rows f_hz,i,j,re,im.")
    c.add_argument("--config", help="INI config file (defaults if omitted)")
    c.add_argument("--band", help="band(s) in MHz, e.g. '3.0-5.0'")
    c.add_argument("--out", required=True, help="output CSV path; suffixed per band "
                                                "when several bands are given")
    c.set_defaults(func=cmd_channel_dump)

    k = sub.add_parser("codec", help="turbo encode or decode one PHY block",
                       description="Bits are hex strings, most significant bit first "
                                   "(numpy packbits order).")
    k.add_argument("action", choices=("encode", "decode"))
    k.add_argument("--pb-size", type=int, default=264, choices=PB_SIZES, help="PHY block size in bytes")
    k.add_argument("--rate", default="1/2", help="code rate, 1/2 or 16/18")
    k.add_argument("--iterations", type=int, default=8, help="decoder iterations")
    k.add_argument("--reliability", type=float, default=4.0,
                   help="LLR magnitude assigned to hard input bits when decoding")
    k.add_argument("--in", dest="input", help="input hex file ('-' or omitted for stdin)")
    k.add_argument("--out", dest="output", help="output hex file ('-' or omitted for stdout)")
    k.set_defaults(func=cmd_codec)

    n = sub.add_parser("noise-sample", help="draw Class-A noise samples",
                       description="Write complex Class-A samples as CSV rows "
                                   "re,im,k_re,k_im (impulse counts of each part).")
    n.add_argument("--count", type=int, default=10000, help="number of samples")
    n.add_argument("--A", type=float, default=0.1, help="impulsive index")
    n.add_argument("--gamma", type=float, default=0.01, help="background to impulsive power ratio")
    n.add_argument("--sigma2", type=float, default=1.0, help="total noise power")
    n.add_argument("--seed", type=int, default=0, help="random seed")
    n.add_argument("--out", required=True, help="output CSV path")
    n.set_defaults(func=cmd_noise_sample)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"mvplc: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"mvplc: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
