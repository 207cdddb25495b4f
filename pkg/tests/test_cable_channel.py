import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mvplc.cable_channel import (
    CableParams, ChannelRealization, MultipathProfile, RlgcMatrices, attenuation_matrix,
    build_rlgc, delay_spread_samples, subcarrier_grid, synthesize_channel, transfer_matrix,
)


def oracle_rlgc(p: CableParams, f: float):
    """Entry-by-entry scalar evaluation of the per-unit-length matrices."""
    ln = math.log(p.D / p.r)
    r = 0.5 * math.sqrt(math.pi * f * p.mu_c / p.sigma_c)
    l_self = p.mu_0 / (2 * math.pi) * ln
    c_m = 4 * math.pi * p.eps_0
    c_g = 2 * math.pi * p.eps_0 / ln
    g_m = 2 * math.pi * f * c_m * p.tan_delta
    g_g = 2 * math.pi * f * c_g * p.tan_delta
    R = [[p.r_0 + (r if i == j else 0.0) for j in range(3)] for i in range(3)]
    L = [[l_self if i == j else p.k * math.sqrt(l_self * l_self) for j in range(3)] for i in range(3)]
    C = [[c_g + c_m + c_m if i == j else -c_m for j in range(3)] for i in range(3)]
    G = [[g_g + g_m + g_m if i == j else -g_m for j in range(3)] for i in range(3)]
    w = 2 * math.pi * f
    alpha = [[cmath.sqrt(complex(R[i][j], w * L[i][j]) * complex(G[i][j], w * C[i][j])).real
              for j in range(3)] for i in range(3)]
    return R, L, C, G, alpha


# frozen outputs of oracle_rlgc at f = 1 MHz with the default cable
GOLDEN_1MHZ = dict(
    r1=1.2953506954453076e-04,
    l11=3.3044365060859094e-07,
    c_m=2.4444444444444444e-10,
    c_ng=7.397462290294932e-11,
    c11=5.628635117918382e-10,
    alpha11=2.4095567644230413e-05,
    alpha12=3.0929955893543762e-02,
)


def test_golden_values_1mhz():
    m = build_rlgc(CableParams(), 1e6)
    assert m.R[0, 0] == pytest.approx(GOLDEN_1MHZ["r1"], rel=1e-12)
    assert m.L[0, 0] == pytest.approx(GOLDEN_1MHZ["l11"], rel=1e-12)
    assert -m.C[0, 1] == pytest.approx(GOLDEN_1MHZ["c_m"], rel=1e-12)
    assert m.C[0, 0] + m.C[0, 1] + m.C[0, 2] == pytest.approx(GOLDEN_1MHZ["c_ng"], rel=1e-12)
    assert m.C[0, 0] == pytest.approx(GOLDEN_1MHZ["c11"], rel=1e-12)
    a = attenuation_matrix(m)
    assert a[0, 0] == pytest.approx(GOLDEN_1MHZ["alpha11"], rel=1e-12)
    assert a[0, 1] == pytest.approx(GOLDEN_1MHZ["alpha12"], rel=1e-12)


def test_golden_values_match_rounded_constants():
    m = build_rlgc(CableParams(), 1e6)
    assert m.R[0, 0] == pytest.approx(1.2953e-4, rel=1e-4)
    assert m.L[0, 0] == pytest.approx(3.3044e-7, rel=1e-4)
    assert -m.C[0, 1] == pytest.approx(2.4445e-10, rel=1e-4)
    assert m.C[0, 0] == pytest.approx(5.6288e-10, rel=1e-4)


def test_inductance_independent_of_frequency():
    a, b = build_rlgc(CableParams(), 1e5), build_rlgc(CableParams(), 6e6)
    np.testing.assert_array_equal(a.L, b.L)
    np.testing.assert_array_equal(a.C, b.C)


def test_zero_coupling_gives_diagonal_inductance():
    L = build_rlgc(CableParams(k=0.0), 2e6).L
    assert np.count_nonzero(L - np.diag(np.diag(L))) == 0


def test_matrix_structure():
    m = build_rlgc(CableParams(r_0=1e-3), 3e6)
    for M in (m.R, m.L, m.C, m.G):
        np.testing.assert_array_equal(M, M.T)
    assert np.all(np.diag(m.R) == m.R[0, 0])
    off = ~np.eye(3, dtype=bool)
    assert np.all(np.diag(m.C) > 0) and np.all(m.C[off] <= 0)
    assert np.all(np.diag(m.G) > 0) and np.all(m.G[off] <= 0)
    # diagonal capacitance = ground capacitance + mutual terms of the row
    c_ng = m.C.sum(axis=1)
    np.testing.assert_allclose(np.diag(m.C), c_ng - m.C[off].reshape(3, 2).sum(axis=1), rtol=1e-14)


@st.composite
def cable_params(draw):
    r = draw(st.floats(1e-4, 0.02))
    return CableParams(
        mu_c=draw(st.floats(1e-7, 1e-5)),
        sigma_c=draw(st.floats(1e6, 1e8)),
        D=draw(st.floats(2.05 * r, 0.2)),
        mu_0=draw(st.floats(1e-7, 1e-5)),
        eps_0=draw(st.floats(1e-12, 1e-10)),
        r=r,
        tan_delta=draw(st.floats(1e-5, 1e-2)),
        k=draw(st.floats(0.0, 1.0)),
        r_0=draw(st.floats(0.0, 1e-2)),
    )


@settings(max_examples=100, deadline=None)
@given(p=cable_params(), f=st.floats(1e4, 3e7))
def test_oracle_equivalence(p, f):
    m = build_rlgc(p, f)
    R, L, C, G, alpha = oracle_rlgc(p, f)
    for got, want in ((m.R, R), (m.L, L), (m.C, C), (m.G, G)):
        np.testing.assert_allclose(got, np.array(want), rtol=1e-12, atol=0)
    np.testing.assert_allclose(attenuation_matrix(m), np.array(alpha), rtol=1e-12, atol=0)


def test_lossless_line_has_no_self_attenuation():
    m = build_rlgc(CableParams(), 1e6)
    lossless = RlgcMatrices(R=np.zeros((3, 3)), L=m.L, C=m.C, G=np.zeros((3, 3)), f=m.f)
    a = attenuation_matrix(lossless)
    np.testing.assert_array_equal(np.diag(a), np.zeros(3))
    # mutual entries: L_ij > 0 and C_ij < 0 make -w^2 L_ij C_ij positive, so the
    # element-wise root is real there
    w = 2 * math.pi * m.f
    np.testing.assert_allclose(a[0, 1], w * math.sqrt(-m.L[0, 1] * m.C[0, 1]), rtol=1e-12)


def test_lossless_uncoupled_line_has_no_attenuation():
    m = build_rlgc(CableParams(k=0.0), 1e6)
    lossless = RlgcMatrices(R=np.zeros((3, 3)), L=m.L, C=m.C, G=np.zeros((3, 3)), f=m.f)
    np.testing.assert_array_equal(attenuation_matrix(lossless), np.zeros((3, 3)))


def test_crosstalk_negligible_for_default_cable():
    p = CableParams()
    ch = synthesize_channel(p, MultipathProfile.default(p), (0.5e6, 6.5e6), 64)
    off = ~np.eye(3, dtype=bool)
    assert np.abs(ch.H[:, off]).max() < 1e-6 * np.abs(ch.H[:, ~off]).min()


@settings(max_examples=30, deadline=None)
@given(p=cable_params(), f=st.floats(1e4, 3e7))
def test_attenuation_symmetric_and_nonnegative(p, f):
    a = attenuation_matrix(build_rlgc(p, f))
    np.testing.assert_array_equal(a, a.T)
    assert np.all(a >= 0)


def test_attenuation_frequency_mismatch_rejected():
    with pytest.raises(ValueError):
        attenuation_matrix(build_rlgc(CableParams(), 1e6), f=2e6)


@pytest.mark.parametrize("kw", [dict(k=1.5), dict(r=-1.0), dict(D=0.005), dict(r_0=-1.0),
                                dict(sigma_c=float("nan"))])
def test_invalid_params(kw):
    with pytest.raises(ValueError):
        CableParams(**kw)


def test_invalid_frequency():
    with pytest.raises(ValueError):
        build_rlgc(CableParams(), 0.0)


def test_identity_single_path():
    prof = MultipathProfile(gains=(1.0,), lengths=(1.0,), delays=(0.0,))
    for f in (1e5, 2.5e6, 6e6):
        np.testing.assert_allclose(transfer_matrix(np.zeros((3, 3)), f, prof), np.ones((3, 3)), atol=1e-15)


def test_two_ray_null():
    f = 3.7e6
    prof = MultipathProfile(gains=(0.5, 0.5), lengths=(1.0, 1.0), delays=(0.0, 1 / (2 * f)))
    assert np.abs(transfer_matrix(np.zeros((3, 3)), f, prof)).max() < 1e-15


def test_default_profile():
    p = CableParams()
    prof = MultipathProfile.default(p)
    assert prof.n_paths == 4
    assert all(b / a == pytest.approx(0.5) for a, b in zip(prof.gains, prof.gains[1:]))
    np.testing.assert_allclose(prof.delays, np.array(prof.lengths) / p.velocity, rtol=1e-15)
    assert p.velocity == pytest.approx(2.0226e8, rel=1e-4)


def test_profile_validation():
    with pytest.raises(ValueError):
        MultipathProfile(gains=(), lengths=(), delays=())
    with pytest.raises(ValueError):
        MultipathProfile(gains=(1, 1), lengths=(1, 2), delays=(2e-6, 1e-6))
    with pytest.raises(ValueError):
        MultipathProfile(gains=(1,), lengths=(0.0,), delays=(0.0,))


def _scaled(profile, lam):
    return MultipathProfile(profile.gains, tuple(lam * d for d in profile.lengths), profile.delays)


def test_channel_invariants():
    p = CableParams()
    prof = MultipathProfile.default(p)
    ch = synthesize_channel(p, prof, (3e6, 5e6), 256)
    assert np.all(np.diff(ch.freqs) > 0)
    assert ch.freqs[0] >= 3e6 and ch.freqs[-1] < 5e6
    assert np.all(np.isfinite(ch.H))
    np.testing.assert_array_equal(ch.H, np.swapaxes(ch.H, 1, 2))
    assert np.abs(ch.H).max() <= sum(abs(g) for g in prof.gains)
    np.testing.assert_array_equal(ch.rx_matrix, np.swapaxes(ch.H, 1, 2))


def test_longer_paths_attenuate_more():
    p = CableParams()
    prof = MultipathProfile.default(p)
    band = (3e6, 5e6)
    base = synthesize_channel(p, prof, band, 64)
    # mean attenuation exponent contribution sum_p g_p exp(-alpha d_p) per entry
    def contribution(pr):
        out = []
        for f in base.freqs:
            a = attenuation_matrix(build_rlgc(p, f))
            out.append(np.einsum("p,ijp->ij", np.array(pr.gains), np.exp(-a[..., None] * np.array(pr.lengths))))
        return np.mean(out)
    assert contribution(_scaled(prof, 2.0)) < contribution(prof)


@settings(max_examples=25, deadline=None)
@given(lam=st.floats(1.01, 5.0), f=st.floats(1e5, 1e7))
def test_monotone_attenuation_in_path_length(lam, f):
    # with a single echo the phase does not depend on d_p, so the magnitude is monotone
    p = CableParams()
    a = attenuation_matrix(build_rlgc(p, f))
    prof = MultipathProfile(gains=(0.8,), lengths=(900.0,), delays=(0.0,))
    H1 = np.abs(transfer_matrix(a, f, prof))
    H2 = np.abs(transfer_matrix(a, f, _scaled(prof, lam)))
    assert np.all(H2 <= H1)


def test_subcarrier_grid():
    f = subcarrier_grid((3e6, 5.048e6), 1024)
    assert f[0] == 3e6
    np.testing.assert_allclose(np.diff(f), 2000.0, rtol=1e-9)
    with pytest.raises(ValueError):
        subcarrier_grid((5e6, 3e6), 16)


def test_nyquist_guard():
    p = CableParams()
    with pytest.raises(ValueError):
        synthesize_channel(p, MultipathProfile.default(p), (3e6, 5e6), 16, sample_rate=8e6)


def test_delay_spread_fits_cyclic_prefix():
    prof = MultipathProfile.default()
    assert delay_spread_samples(prof, 2.048e6) < 128


def test_identity_and_csv(tmp_path):
    ch = ChannelRealization.identity((1e6, 3e6), 4)
    np.testing.assert_array_equal(ch.H, np.broadcast_to(np.eye(3), (4, 3, 3)))
    out = tmp_path / "h.csv"
    ch.to_csv(out)
    lines = out.read_text().splitlines()
    assert lines[0] == "f_hz,i,j,re,im"
    assert len(lines) == 1 + 4 * 9
    assert lines[1] == "1000000.0,1,1,1.0,0.0"
