"""Acceptance gate: one criterion per test, one printed PASS/FAIL line each.

Tolerances are pinned here and must not be loosened:
  1. reduction identities        rel <= 1e-8, 20 points each, < 10 s
  2. density normalization       |integral - 1| <= 1e-4, < 5 min
  3. exact vs Monte-Carlo        |exact - mc| <= 3 * std_error, < 30 min
  4. Laplace-transform waypoints |analytic - empirical| <= 3 * std_error
  5. high-SNR asymptote          slope within 5% of -g_out; ratio 1 +/- 0.1
  6. diversity arithmetic        exact equality
  7. qualitative MC orderings    paired sampling / 3 sigma separation
  8. verify subcommand           byte-identical CSV across runs
"""
import math
import subprocess
import sys
import time

import numpy as np
from scipy.special import kv

from rislink.channel import budget
from rislink.config import default_geometry, preset_fading, preset_system
from rislink.dgg import (
    CascadeParams,
    cascade_sample,
    dgg_pdf,
    dgg_sample,
    product_mgf,
    product_pdf,
)
from rislink.exact_stats import (
    RisEnsemble,
    combined_snr_stat,
    gamma_pdf,
    hris_pdf,
    mgf_gamma_d,
    mgf_gamma_ris,
)
from rislink.foxh import FoxHSpec, GammaTerm, eval_foxh
from rislink.metrics import ModulationParams, ber_exact, diversity, outage_asymptotic, outage_exact
from rislink.montecarlo import SimPlan, estimate_ber, estimate_outage

GEOM = default_geometry()
MOD = ModulationParams(a=1.0, b=1.0)


def check(num: int, description: str, ok: bool, detail: str = "") -> None:
    verdict = "PASS" if ok else "FAIL"
    line = f"CRITERION {num}: {verdict} - {description}"
    if detail:
        line += f" [{detail}]"
    print(line)
    assert ok, line


def integrate_log(f, u_lo: float, u_hi: float, n: int = 240) -> float:
    """Gauss-Legendre integral of f(x) dx with x = e^u over [u_lo, u_hi]."""
    nodes, weights = np.polynomial.legendre.leggauss(n)
    u = 0.5 * (u_hi - u_lo) * nodes + 0.5 * (u_hi + u_lo)
    vals = np.array([f(math.exp(ui)) * math.exp(ui) for ui in u])
    return float(0.5 * (u_hi - u_lo) * np.dot(weights, vals))


# ---------------------------------------------------------------------------
# criterion 1: reduction identities


def test_criterion_1_reduction_corpus():
    start = time.monotonic()
    points = np.geomspace(0.05, 20.0, 20)
    worst = 0.0

    def exp_spec(z):
        return FoxHSpec(args=(z,), terms=(GammaTerm(0.0, (1.0,)),), contour_re=(1.0,))

    def binom_spec(z, a=1.7):
        terms = (
            GammaTerm(0.0, (1.0,)),
            GammaTerm(a, (1.0,), orientation=-1),
            GammaTerm(a, (0.0,), sign=-1),
        )
        return FoxHSpec(args=(z,), terms=terms, contour_re=(a / 2.0,))

    def bessel_spec(z, nu=0.8):
        terms = (GammaTerm(nu / 2.0, (1.0,)), GammaTerm(-nu / 2.0, (1.0,)))
        return FoxHSpec(args=(z,), terms=terms, contour_re=(nu / 2.0 + 1.0,))

    for z in points:
        z = float(z)
        for spec, ref in (
            (exp_spec(z), math.exp(-z)),
            (binom_spec(z), (1.0 + z) ** -1.7),
            (bessel_spec(z), 2.0 * kv(0.8, 2.0 * math.sqrt(z))),
        ):
            value, _ = eval_foxh(spec)
            worst = max(worst, abs(value - ref) / abs(ref))
    elapsed = time.monotonic() - start
    check(
        1,
        "exponential/binomial/Bessel reductions, 20 points each, rel <= 1e-8, < 10 s",
        worst <= 1e-8 and elapsed < 10.0,
        f"worst rel err {worst:.2e}, {elapsed:.1f} s",
    )


# ---------------------------------------------------------------------------
# criterion 2: normalization


def test_criterion_2_density_normalization():
    start = time.monotonic()
    worst = 0.0
    detail = []
    for name in ("FP1", "FP2", "FP3"):
        cascade, direct = preset_fading(name)
        # upper bound e^12: the four-factor product with unit shape
        # exponents has a stretched-exponential exp(-4 z^(1/4)) tail
        norms = {
            "dgg": integrate_log(lambda x: dgg_pdf(direct, x), -20.0, 12.0),
            "product": integrate_log(lambda z: product_pdf(cascade, z), -20.0, 12.0),
            "hris2": integrate_log(
                lambda z: hris_pdf(RisEnsemble.identical(2, cascade, direct), z), -16.0, 12.0, n=160
            ),
        }
        stat = combined_snr_stat(RisEnsemble.identical(1, cascade, direct), budget(GEOM, 20.0))
        norms["gamma1"] = integrate_log(lambda g: gamma_pdf(stat, g), -18.0, 12.0, n=160)
        for key, val in norms.items():
            worst = max(worst, abs(val - 1.0))
            detail.append(f"{name}/{key}={val:.6f}")
    elapsed = time.monotonic() - start
    check(
        2,
        "dgg/product/sum (N=2)/combined (N=1) densities integrate to 1 +/- 1e-4, < 5 min",
        worst <= 1e-4 and elapsed < 300.0,
        f"worst |norm-1| {worst:.2e}, {elapsed:.0f} s",
    )


# ---------------------------------------------------------------------------
# criterion 3: exact vs Monte-Carlo


def test_criterion_3_oracle_equivalence():
    start = time.monotonic()
    cascade, direct = preset_fading("FP1")
    gamma_th = 1.0  # 0 dB
    failures = []
    for n in (1, 2):
        ens = RisEnsemble.identical(n, cascade, direct)
        for pt in (10.0, 15.0, 20.0, 25.0):
            stat = combined_snr_stat(ens, budget(GEOM, pt))
            plan = SimPlan(
                config=preset_system("FP1", n), pt_dbm=pt, n_trials=1_000_000, master_seed=0
            )
            mc_out = estimate_outage(plan, gamma_th)
            ex_out = outage_exact(stat, gamma_th)
            if abs(ex_out - mc_out.mean) > 3.0 * mc_out.std_error:
                failures.append(f"outage N={n} pt={pt:g}")
            mc_ber = estimate_ber(plan, MOD)
            ex_ber = ber_exact(stat, MOD)
            if abs(ex_ber - mc_ber.mean) > 3.0 * mc_ber.std_error:
                failures.append(f"ber N={n} pt={pt:g}")
    elapsed = time.monotonic() - start
    check(
        3,
        "exact outage and BER within 3 sigma of 1e6-trial MC, N in {1,2}, FP1, 4 powers, < 30 min",
        not failures and elapsed < 1800.0,
        f"failures={failures or 'none'}, {elapsed:.0f} s",
    )


# ---------------------------------------------------------------------------
# criterion 4: Laplace-transform waypoints


def test_criterion_4_mgf_waypoints():
    rng = np.random.default_rng(100)
    cascade, direct = preset_fading("FP1")
    s_values = (0.1, 0.5, 1.0, 2.0)
    n_tr = 400_000
    failures = []

    z = cascade_sample(cascade, rng, n_tr)
    for s in s_values:
        emp = np.exp(-s * z)
        se = float(np.std(emp)) / math.sqrt(n_tr)
        if abs(product_mgf(cascade, s) - float(np.mean(emp))) > 3.0 * se:
            failures.append(f"product s={s}")

    # direct branch at 0 dBm (order-one SNR scale keeps all s informative)
    bud_d = budget(GEOM, 0.0)
    snr_d = bud_d.gamma0_d * dgg_sample(direct, rng, n_tr) ** 2
    for s in s_values:
        emp = np.exp(-s * snr_d)
        se = float(np.std(emp)) / math.sqrt(n_tr)
        if abs(mgf_gamma_d(direct, bud_d, s) - float(np.mean(emp))) > 3.0 * se:
            failures.append(f"direct s={s}")

    # reflected branch at 76 dBm (same reason; the branch is ~80 dB weaker)
    bud_r = budget(GEOM, 76.0)
    ens = RisEnsemble.identical(2, cascade, direct)
    h = cascade_sample(cascade, rng, n_tr) + cascade_sample(cascade, rng, n_tr)
    snr_r = bud_r.gamma0_ris * h**2
    for s in s_values:
        emp = np.exp(-s * snr_r)
        se = float(np.std(emp)) / math.sqrt(n_tr)
        if abs(mgf_gamma_ris(ens, bud_r, s) - float(np.mean(emp))) > 3.0 * se:
            failures.append(f"reflected s={s}")
    check(
        4,
        "branch/product Laplace transforms within 3 sigma at s in {0.1,0.5,1,2}",
        not failures,
        f"failures={failures or 'none'}",
    )


# ---------------------------------------------------------------------------
# criterion 5: high-SNR asymptote


def test_criterion_5_asymptotic_consistency():
    cascade, direct = preset_fading("FP1")
    ens = RisEnsemble.identical(1, cascade, direct)
    g_out = diversity(ens).g_out  # 1.75 for FP1, N=1
    gamma_th = 1.0

    # top 10 dB of the sweep: 140-150 dBm (slow log-corrected convergence
    # from the tied pole pair makes lower powers sit outside the 5% band)
    powers = (140.0, 145.0, 150.0)
    exact = [outage_exact(combined_snr_stat(ens, budget(GEOM, pt)), gamma_th) for pt in powers]
    slope_fit = np.polyfit([pt / 10.0 for pt in powers], [math.log10(v) for v in exact], 1)[0]
    slope_ok = abs(-slope_fit - g_out) <= 0.05 * g_out

    stat_top = combined_snr_stat(ens, budget(GEOM, powers[-1]))
    ratio = outage_asymptotic(stat_top, gamma_th) / exact[-1]
    ratio_ok = abs(ratio - 1.0) <= 0.1
    check(
        5,
        "exact log-log slope within 5% of -g_out over top 10 dB; asymptote/exact = 1 +/- 0.1",
        slope_ok and ratio_ok,
        f"slope {slope_fit:.4f} vs -{g_out}, ratio {ratio:.4f}",
    )


# ---------------------------------------------------------------------------
# criterion 6: diversity arithmetic


def test_criterion_6_diversity_arithmetic():
    # hand-computed from the preset shape tables: per-element and direct
    # minima of alpha*beta products, halved (amplitude -> SNR exponent)
    expected = {
        "FP1": (min(2 * 1.0, 2 * 2.0) / 2, min(1.5 * 1.5, 1 * 1.5) / 2,
                min(2 * 1.0 - 1, 2 * 2.0 - 1) / 2, min(1.5 * 1.5 - 1, 1 * 1.5 - 1) / 2),
        "FP2": (min(1 * 1.0, 1 * 2.0) / 2, min(2 * 1.5, 2 * 1.5) / 2,
                min(1 * 1.0 - 1, 1 * 2.0 - 1) / 2, min(2 * 1.5 - 1, 2 * 1.5 - 1) / 2),
        "FP3": (min(1 * 1.5, 1 * 2.5) / 2, min(2 * 2.1, 2 * 2.1) / 2,
                min(1 * 1.5 - 1, 1 * 2.5 - 1) / 2, min(2 * 2.1 - 1, 2 * 2.1 - 1) / 2),
    }
    ok = True
    for name, (elem_out, dir_out, elem_ber, dir_ber) in expected.items():
        cascade, direct = preset_fading(name)
        for n in (1, 2, 5):
            rep = diversity(RisEnsemble.identical(n, cascade, direct))
            ok = ok and rep.g_out == n * elem_out + dir_out
            ok = ok and rep.g_ber == n * elem_ber + dir_ber
            ok = ok and rep.per_element_minima == (elem_out,) * n
            ok = ok and rep.direct_min == dir_out
    check(6, "diversity orders equal hand-computed minima exactly (3 presets x N in {1,2,5})", ok)


# ---------------------------------------------------------------------------
# criterion 7: qualitative Monte-Carlo orderings


def _paired_amplitudes(cascade: CascadeParams, n_max: int, n_tr: int, seed: int) -> np.ndarray:
    """Per-element amplitude columns; prefix sums give every N at once."""
    rng = np.random.default_rng(seed)
    cols = np.empty((n_max, n_tr))
    for i in range(n_max):
        cols[i] = cascade_sample(cascade, rng, n_tr)
    return cols


def test_criterion_7_figure_orderings():
    n_tr = 200_000
    gamma_th = 1.0
    _, direct_fp1 = preset_fading("FP1")
    failures = []

    # (a) + (b): paired draws make combining sure to help and more
    # elements sure to help, so the estimated orderings carry no MC risk
    for pt in (0.0, 5.0):
        bud = budget(GEOM, pt)
        rng = np.random.default_rng(70)
        hd2 = dgg_sample(direct_fp1, rng, n_tr) ** 2
        for name in ("FP1", "FP2", "FP3"):
            cascade, _ = preset_fading(name)
            cols = _paired_amplitudes(cascade, 50, n_tr, seed=71)
            out_by_n = {}
            for n in (10, 50):
                h = cols[:n].sum(axis=0)
                snr_ris = bud.gamma0_ris * h**2
                snr = snr_ris + bud.gamma0_d * hd2
                out_by_n[n] = float(np.mean(snr <= gamma_th))
                dt_only = float(np.mean(bud.gamma0_d * hd2 <= gamma_th))
                ris_only = float(np.mean(snr_ris <= gamma_th))
                if out_by_n[n] > min(dt_only, ris_only):
                    failures.append(f"combined>min {name} N={n} pt={pt:g}")
            if out_by_n[50] > out_by_n[10]:
                failures.append(f"N-monotonicity {name} pt={pt:g}")

    # (c) severity ordering: with the frozen geometry the reflected branch
    # is ~80 dB below the direct one, so the FP3-vs-FP2 gap is resolvable
    # only where that branch drives outage; compare it there directly.
    for n, powers in ((10, (55.0, 60.0)), (50, (40.0, 45.0))):
        cols2 = _paired_amplitudes(preset_fading("FP2")[0], n, n_tr, seed=72)
        cols3 = _paired_amplitudes(preset_fading("FP3")[0], n, n_tr, seed=72)
        h2, h3 = cols2.sum(axis=0), cols3.sum(axis=0)
        for pt in powers:
            bud = budget(GEOM, pt)
            o2 = float(np.mean(bud.gamma0_ris * h2**2 <= gamma_th))
            o3 = float(np.mean(bud.gamma0_ris * h3**2 <= gamma_th))
            se = math.sqrt(max(o2 * (1 - o2), o3 * (1 - o3)) / n_tr)
            if not o3 < o2 - 3.0 * se:
                failures.append(f"FP3<FP2 N={n} pt={pt:g} ({o3:.4f} vs {o2:.4f})")
    check(
        7,
        "combined <= min(DT, reflected); outage improves with N; FP3 beats FP2 beyond 3 sigma",
        not failures,
        f"failures={failures or 'none'}",
    )


# ---------------------------------------------------------------------------
# criterion 8: determinism


def test_criterion_8_verify_determinism(tmp_path):
    outputs = []
    for name in ("a.csv", "b.csv"):
        path = tmp_path / name
        proc = subprocess.run(
            [sys.executable, "-m", "rislink.cli", "verify", "--trials", "50000",
             "--quiet", "--output", str(path)],
            capture_output=True,
        )
        assert proc.returncode == 0, proc.stderr.decode()
        outputs.append(path.read_bytes())
    check(8, "verify subcommand is byte-identical across runs with the same seed",
          outputs[0] == outputs[1])
