"""Sweep configuration files.

INI syntax with one section per component::

    [sim]
    bands = 3.0-5.0, 1.0-3.0        ; MHz
    modes = coded, uncoded
    snr = 0:2:12                    ; start:step:stop (inclusive) or a list
    min_bits = 100000
    seed = 1

    [cable]      k, r_0 and the material constants of CableParams
    [profile]    gains, lengths (m), optional delays (s)
    [noise]      A, gamma
    [ofdm]       n_subcarriers, spacing, cp_len
    [turbo]      pb_size, rate, iterations, max_log, early_stop

Unknown sections or keys are errors, so typos do not silently fall back to
defaults.
"""
from __future__ import annotations

import configparser
import math
from dataclasses import fields, replace
from pathlib import Path

import numpy as np

from .cable_channel import CableParams, MultipathProfile
from .noise import NoiseParams
from .ofdm_modem import OfdmConfig
from .turbo import TurboConfig
from .link_sim import SimConfig


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending field."""


def parse_range(text: str) -> tuple[float, ...]:
    """``"0:2:12"`` -> (0, 2, ..., 12); ``"1, 3.5"`` -> (1.0, 3.5)."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"range {text!r} must be start:step:stop")
        start, step, stop = (float(p) for p in parts)
        if step <= 0 or stop < start:
            raise ValueError(f"range {text!r} needs step > 0 and stop >= start")
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        return tuple(float(np.round(start + i * step, 10)) for i in range(n))
    values = tuple(float(p) for p in text.replace(",", " ").split())
    if not values:
        raise ValueError("empty value list")
    return values


def parse_bands(text: str) -> tuple[tuple[float, float], ...]:
    """``"3.0-5.0, 1-3"`` in MHz -> ((3e6, 5e6), (1e6, 3e6))."""
    bands = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        lo, sep, hi = item.partition("-")
        if not sep:
            raise ValueError(f"band {item!r} must be low-high in MHz")
        f_lo, f_hi = float(lo) * 1e6, float(hi) * 1e6
        if not 0 <= f_lo < f_hi:
            raise ValueError(f"band {item!r} must have 0 <= low < high")
        bands.append((f_lo, f_hi))
    if not bands:
        raise ValueError("no bands given")
    return tuple(bands)


def parse_modes(text: str) -> tuple[bool, ...]:
    out = []
    for item in text.replace(",", " ").split():
        if item not in ("coded", "uncoded"):
            raise ValueError(f"mode {item!r} must be 'coded' or 'uncoded'")
        out.append(item == "coded")
    if not out:
        raise ValueError("no modes given")
    return tuple(out)


def _bool(text: str) -> bool:
    v = text.strip().lower()
    if v in ("1", "yes", "true", "on"):
        return True
    if v in ("0", "no", "false", "off"):
        return False
    raise ValueError(f"{text!r} is not a boolean")


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(p) for p in text.replace(",", " ").split())


SIM_KEYS = {
    "bands": ("bands", parse_bands),
    "modes": ("coded", parse_modes),
    "snr": ("snr_points", parse_range),
    "min_bits": ("min_bits", lambda s: int(float(s))),
    "max_bits": ("max_bits", lambda s: int(float(s))),
    "target_errors": ("target_errors", int),
    "seed": ("seed", int),
    "blocks_per_frame": ("blocks_per_frame", int),
    "csi": ("csi", str.strip),
    "channel": ("channel", str.strip),
    "estimate_noise": ("estimate_noise", _bool),
    "preamble_symbols": ("preamble_symbols", int),
    "llr_clip": ("llr_clip", float),
    "workers": ("workers", int),
}
CABLE_KEYS = {f.name: float for f in fields(CableParams)}
PROFILE_KEYS = {"gains": _floats, "lengths": _floats, "delays": _floats}
NOISE_KEYS = {"A": float, "gamma": float}
OFDM_KEYS = {"n_subcarriers": int, "spacing": float, "cp_len": int}
TURBO_KEYS = {"pb_size": int, "rate": str.strip, "iterations": int,
              "max_log": _bool, "early_stop": _bool}
SECTIONS = {"sim": SIM_KEYS, "cable": CABLE_KEYS, "profile": PROFILE_KEYS,
            "noise": NOISE_KEYS, "ofdm": OFDM_KEYS, "turbo": TURBO_KEYS}


def _section(cp: configparser.ConfigParser, name: str) -> dict:
    """Parsed values of one section, keyed by the config key."""
    if not cp.has_section(name):
        return {}
    spec = SECTIONS[name]
    out = {}
    for key, raw in cp.items(name):
        if key not in spec:
            raise ConfigError(f"[{name}] {key}: unknown key")
        parse = spec[key][1] if name == "sim" else spec[key]
        try:
            out[key] = parse(raw)
        except ValueError as exc:
            raise ConfigError(f"[{name}] {key}: {exc}") from None
    return out


def _build(name: str, factory, kw: dict):
    try:
        return factory(**kw)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"[{name}] {exc}") from None


def parse_config(text: str, source: str = "<string>") -> SimConfig:
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    cp.optionxform = str  # keys are case-sensitive (A vs a)
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from None
    for name in cp.sections():
        if name not in SECTIONS:
            raise ConfigError(f"[{name}]: unknown section")

    cable = _build("cable", CableParams, _section(cp, "cable"))
    prof = _section(cp, "profile")
    if prof:
        if "gains" not in prof or "lengths" not in prof:
            raise ConfigError("[profile] gains and lengths are both required")
        if "delays" in prof:
            profile = _build("profile", MultipathProfile,
                             dict(gains=prof["gains"], lengths=prof["lengths"], delays=prof["delays"]))
        else:
            profile = _build("profile", MultipathProfile.from_lengths,
                             dict(gains=prof["gains"], lengths=prof["lengths"], velocity=cable.velocity))
    else:
        profile = MultipathProfile.default(cable)
    noise = _build("noise", NoiseParams, _section(cp, "noise"))
    ofdm = _build("ofdm", OfdmConfig, _section(cp, "ofdm"))
    turbo = _build("turbo", TurboConfig, _section(cp, "turbo"))

    sim = {SIM_KEYS[k][0]: v for k, v in _section(cp, "sim").items()}
    return _build("sim", SimConfig, dict(cable=cable, profile=profile, noise=noise,
                                         ofdm=ofdm, turbo=turbo, **sim))


def load_config(path) -> SimConfig:
    """Read and validate a config file.  Raises ``ConfigError`` (also for a
    missing file, with the path in the message)."""
    path = Path(path)
    try:
        text = path.read_text()
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc.strerror or exc}") from None
    return parse_config(text, source=str(path))


def override(config: SimConfig, seed=None, bands=None, snr=None) -> SimConfig:
    """Apply command-line overrides given in config-file syntax."""
    kw = {}
    if seed is not None:
        kw["seed"] = int(seed)
    if bands is not None:
        try:
            kw["bands"] = parse_bands(bands)
        except ValueError as exc:
            raise ConfigError(f"--band: {exc}") from None
    if snr is not None:
        try:
            kw["snr_points"] = parse_range(snr)
        except ValueError as exc:
            raise ConfigError(f"--snr: {exc}") from None
    return replace(config, **kw)
