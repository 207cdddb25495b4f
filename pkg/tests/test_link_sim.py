import math

import numpy as np
import pytest

from oracles import q_function
from mvplc.link_sim import (CSV_HEADER, BerRecord, SimConfig, ebn0_db, frame_layout,
                            monotonicity_violations, net_bit_rate, reference_config, read_csv,
                            realize_channel, run_point, rx_signal_power, snr_at_ber, sweep,
                            with_overrides)
from mvplc.noise import NoiseParams
from mvplc.turbo import TurboConfig

FAST = dict(turbo=TurboConfig(pb_size=72), blocks_per_frame=4, min_bits=2000, max_bits=2000)


def test_reference_config():
    cfg = reference_config()
    assert cfg.turbo.pb_size == 264 and cfg.turbo.rate == 0.5
    assert (cfg.noise.A, cfg.noise.gamma) == (0.1, 0.01)
    assert cfg.ofdm.n_subcarriers == 1024 and cfg.ofdm.spacing == 2000


@pytest.mark.parametrize("kw", [dict(bands=()), dict(coded=()), dict(min_bits=0),
                                dict(min_bits=10, max_bits=5), dict(csi="genie"),
                                dict(channel="awgn"), dict(blocks_per_frame=0)])
def test_config_validation(kw):
    with pytest.raises(ValueError):
        SimConfig(**kw)


def test_frame_layout():
    cfg = SimConfig(**FAST)
    info, n_sym = frame_layout(cfg, True)
    assert info == 4 * 576
    assert n_sym * cfg.ofdm.bits_per_ofdm_symbol >= 4 * 1152
    info_u, n_sym_u = frame_layout(cfg, False)
    assert n_sym_u == n_sym and info_u == n_sym * 6144


def test_rates():
    cfg = reference_config()
    assert ebn0_db(cfg, 10.0, True) == pytest.approx(10.0)
    assert ebn0_db(cfg, 10.0, False) == pytest.approx(10.0 - 10 * math.log10(2))
    assert net_bit_rate(cfg, False) == pytest.approx(6144 / ((1024 + 128) / 2.048e6))
    assert net_bit_rate(cfg, True) == pytest.approx(net_bit_rate(cfg, False) / 2)


def test_signal_power():
    ch = realize_channel(SimConfig(channel="identity"), (3e6, 5e6))
    assert rx_signal_power(ch.rx_matrix) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        rx_signal_power(np.zeros((4, 3, 3)))
    with pytest.raises(ValueError):
        rx_signal_power(np.full((4, 3, 3), np.nan))


def test_noiseless_identity_round_trip():
    cfg = SimConfig(channel="identity", noiseless=True, coded=(False,), **FAST)
    rec = run_point(cfg, 0.0)
    assert rec.errors == 0 and rec.bits >= 2000


def test_high_snr_coded_is_error_free():
    cfg = SimConfig(coded=(True,), **FAST)
    assert run_point(cfg, 60.0).errors == 0


def test_deterministic():
    cfg = SimConfig(**FAST)
    assert run_point(cfg, 4.0, coded=True) == run_point(cfg, 4.0, coded=True)
    other = with_overrides(cfg, seed=1)
    assert run_point(other, 4.0, coded=False) != run_point(cfg, 4.0, coded=False)


def test_stopping_rule():
    cfg = SimConfig(coded=(False,), **dict(FAST, min_bits=1000, max_bits=10**6), target_errors=50)
    rec = run_point(cfg, 0.0)
    assert rec.errors >= 50
    # a single frame already exceeds min_bits and yields far more than 50 errors
    assert rec.bits == frame_layout(cfg, False)[0]


def test_awgn_identity_matches_q_function():
    cfg = SimConfig(channel="identity", csi="perfect", coded=(False,),
                    noise=NoiseParams(A=0.1, gamma=1e9),
                    **dict(FAST, min_bits=50_000, max_bits=50_000))
    rec = run_point(cfg, 4.0)
    p = q_function(math.sqrt(10 ** 0.4))
    se = math.sqrt(p * (1 - p) / rec.bits)
    assert abs(rec.ber - p) < 4 * se


def test_sweep_csv(tmp_path):
    cfg = SimConfig(snr_points=(0.0, 6.0), **FAST)
    out = tmp_path / "ber.csv"
    recs = sweep(cfg, out)
    lines = out.read_text().splitlines()
    assert lines[0] == ",".join(CSV_HEADER) == "band,snr_db,coded,bits,errors,ber,ebn0_db"
    assert len(lines) == 1 + 4
    assert lines[1].startswith("3.0-5.0,0,1,")
    back = read_csv(out)
    assert [(r.band, r.snr_db, r.coded, r.bits, r.errors) for r in back] == \
           [(r.band, r.snr_db, r.coded, r.bits, r.errors) for r in recs]
    for r in recs:
        assert 0 <= r.ber <= 1


def test_sweep_reports_path_on_io_error(tmp_path):
    cfg = SimConfig(snr_points=(0.0,), coded=(False,), **FAST)
    bad = tmp_path / "missing" / "x.csv"
    with pytest.raises(OSError, match="missing"):
        sweep(cfg, bad)


def test_sweep_needs_snr_points():
    with pytest.raises(ValueError):
        sweep(SimConfig(snr_points=(), **FAST))


def test_sweep_workers_match_serial():
    cfg = SimConfig(snr_points=(2.0,), **FAST)
    par = sweep(with_overrides(cfg, workers=2))
    assert par == sweep(cfg)


def test_ber_record():
    r = BerRecord("3.0-5.0", 2.0, True, 1000, 5, 2.0)
    assert r.ber == 0.005
    assert r.row() == ["3.0-5.0", "2", "1", "1000", "5", "5.000000e-03", "2.0000"]


def _rec(snr, errors, bits=10**5, coded=True):
    return BerRecord("b", snr, coded, bits, errors, snr)


def test_monotonicity_check():
    ok = [_rec(0, 5000), _rec(2, 1000), _rec(4, 150)]
    assert monotonicity_violations(ok) == []
    bad = [_rec(0, 1000), _rec(2, 5000)]
    assert monotonicity_violations(bad) == [bad[1]]


def test_snr_at_ber():
    recs = [_rec(0, 10_000), _rec(2, 1_000), _rec(4, 10)]
    assert snr_at_ber(recs, 1e-2) == pytest.approx(2.0)
    assert snr_at_ber(recs, 10 ** -2.5) == pytest.approx(2.5)
    assert snr_at_ber(recs, 1e-3) == pytest.approx(3.0)
    assert snr_at_ber(recs, 1e-9) is None


def test_cable_channel_band_dependence():
    cfg = reference_config()
    a = realize_channel(cfg, (1e6, 3e6))
    b = realize_channel(cfg, (3e6, 5e6))
    assert a.freqs[0] == 1e6 and b.freqs[0] == 3e6
    assert not np.allclose(np.abs(a.H), np.abs(b.H))


def test_error_accounting():
    from mvplc.link_sim import _point_rng, simulate_frame
    cfg = SimConfig(coded=(True,), **dict(FAST, min_bits=5000, max_bits=5000))
    band = cfg.bands[0]
    ch = realize_channel(cfg, band)
    sigma2 = rx_signal_power(ch.rx_matrix) / 10 ** 0.2
    rec = run_point(cfg, 2.0, channel=ch)
    n_frames = -(-5000 // frame_layout(cfg, True)[0])
    per_frame = [simulate_frame(cfg, ch.rx_matrix, sigma2, True, _point_rng(cfg, band, True, 2.0, f))
                 for f in range(n_frames)]
    assert rec.errors == sum(e for _, e in per_frame)
    assert rec.bits == sum(n for n, _ in per_frame)
