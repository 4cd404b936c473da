"""Outage probability, average BER, and diversity order of the combined link.

Exact quantities evaluate the multivariate contour integrals of
``exact_stats``; the high-SNR asymptote is the sum of residues at the
integrand poles nearest the contour, which reduces to a finite product of
Gamma functions and power laws in gamma_th / gamma_0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations_with_replacement

from .channel import LinkBudget
from .dgg import CascadeParams, DggParams, cascade_coeffs, cascade_shapes, dgg_psi_phi
from .exact_stats import (
    CombinedSnrStat,
    RisEnsemble,
    _check_cap,
    _combined_args,
    _combined_terms,
    _direct_terms,
    _log_direct_coeff,
    gamma_cdf,
)
from .foxh import GammaTerm, QuadratureConfig, eval_foxh

__all__ = [
    "ModulationParams",
    "DiversityReport",
    "outage_exact",
    "outage_asymptotic",
    "ber_exact",
    "diversity",
    "baseline_dt",
    "baseline_ris",
]


@dataclass(frozen=True)
class ModulationParams:
    """Conditional error probability a*Q(sqrt(2*b*snr))."""

    a: float
    b: float

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise ValueError("modulation parameters a, b must be positive")


@dataclass(frozen=True)
class DiversityReport:
    g_out: float
    g_ber: float
    per_element_minima: tuple[float, ...]
    direct_min: float


def outage_exact(
    stat: CombinedSnrStat, gamma_th: float, quad: QuadratureConfig = QuadratureConfig()
) -> float:
    """P(combined SNR <= gamma_th), exact."""
    return gamma_cdf(stat, gamma_th, quad)


def ber_exact(
    stat: CombinedSnrStat, mod: ModulationParams, quad: QuadratureConfig = QuadratureConfig()
) -> float:
    """Average bit error rate under conditional error a*Q(sqrt(2*b*snr)).

    Integrating the conditional error against the SNR density by parts
    leaves a Gamma-weighted Mellin transform of the CDF, which folds into
    the CDF's own contour integral as one extra Gamma factor and a
    rescaling of the SNR arguments by b.
    """
    _check_cap(stat.ensemble)
    terms, _ = _combined_terms(stat, "ber")
    from .exact_stats import _build

    value, _ = eval_foxh(_build(_combined_args(stat, 1.0 / mod.b), terms), quad)
    ber = mod.a / math.sqrt(4.0 * math.pi) * stat.coefficient * value
    if not 0.0 < ber < 1.0:
        raise RuntimeError(f"average BER {ber} outside (0, 1); evaluation unreliable")
    return ber


# ---------------------------------------------------------------------------
# high-SNR asymptote by residues

_TIE_REL = 1e-9
_SPLIT_EPS = 1e-5


def _perturb(betas: list[float]) -> list[float]:
    """Split exactly coincident poles so each residue is simple.

    The per-index offsets are deterministic; tied contributions are summed
    afterwards, which converges to the multiple-pole (logarithmic) limit
    as the offsets shrink.
    """
    return [b * (1.0 + _SPLIT_EPS * (j + 1)) for j, b in enumerate(betas)]


def _element_residues(c: CascadeParams, log_z: float) -> list[tuple[float, float]]:
    """Near-minimal simple poles of one element's contour variable.

    Returns (sigma, residue) pairs: the integrand behaves like
    residue * z^{sigma} from the pole at t = -sigma. Ties of the minimal
    exponent alpha*beta are epsilon-split and all retained.
    """
    shapes = cascade_shapes(c)
    a2 = c.hop1.alpha2
    alphas = [s[0] for s in shapes]
    betas = _perturb([s[1] for s in shapes])
    products = [al * be for al, be in zip(alphas, betas)]
    p_min = min(s[0] * s[1] for s in shapes)
    out = []
    for j in range(4):
        if shapes[j][0] * shapes[j][1] > p_min * (1.0 + _TIE_REL):
            continue
        sigma = products[j] / a2
        r = alphas[j] / a2 * math.exp(sigma * log_z) * math.gamma(a2 * sigma)
        for l in range(4):
            if l != j:
                r *= math.gamma(betas[l] - products[j] / alphas[l])
        out.append((sigma, r))
    return out


def _direct_residues(d: DggParams, log_z: float) -> list[tuple[float, float]]:
    """Same as _element_residues for the direct-link contour variable."""
    a_d2 = d.alpha2
    alphas = [d.alpha1, d.alpha2]
    betas = _perturb([d.beta1, d.beta2])
    coeffs = [a_d2 / d.alpha1, 1.0]  # Gamma(beta + coeff * t) factors
    products = [al * be for al, be in zip(alphas, betas)]
    p_min = min(d.alpha1 * d.beta1, d.alpha2 * d.beta2)
    out = []
    for j in range(2):
        if alphas[j] * [d.beta1, d.beta2][j] > p_min * (1.0 + _TIE_REL):
            continue
        sigma = products[j] / a_d2
        l = 1 - j
        r = (
            math.exp(sigma * log_z)
            / coeffs[j]
            * math.gamma(betas[l] - coeffs[l] * sigma)
            * math.gamma(a_d2 * sigma / 2.0)  # from Gamma(-(alpha_d2/2) t)
        )
        out.append((sigma, r))
    return out


def outage_asymptotic(stat: CombinedSnrStat, gamma_th: float) -> float:
    """High-SNR outage: dominant residues of the exact CDF contour integral.

    Each contour variable contributes its nearest pole(s); the coupling
    Gamma factors are evaluated at the chosen pole tuple, so tied poles
    (which merge into higher-order poles with log corrections) are handled
    by epsilon-splitting and summing every near-minimal tuple. Identical
    elements are grouped so the tuple sum is polynomial in N.
    """
    if gamma_th <= 0:
        raise ValueError("requires gamma_th > 0")
    ens, bud = stat.ensemble, stat.budget

    groups: list[tuple[CascadeParams, int]] = []
    for c in ens.elements:
        if groups and groups[-1][0] == c:
            groups[-1] = (c, groups[-1][1] + 1)
        else:
            groups.append((c, 1))

    group_residues = []
    for c, count in groups:
        _, B = cascade_coeffs(c)
        log_z = (c.hop1.alpha2 / 2.0) * math.log(gamma_th / bud.gamma0_ris) - math.log(B)
        group_residues.append((c, count, _element_residues(c, log_z)))

    _, phi_d = dgg_psi_phi(ens.direct)
    log_zd = math.log(phi_d) + (ens.direct.alpha2 / 2.0) * math.log(gamma_th / bud.gamma0_d)
    direct_res = _direct_residues(ens.direct, log_zd)

    # Sum over one multiset of pole choices per element group x direct choice.
    # Epsilon-split residues alternate in sign and largely cancel; the
    # leading power law plus its logarithmic correction survive.
    def group_terms(c, count, residues):
        a2 = c.hop1.alpha2
        for combo in combinations_with_replacement(range(len(residues)), count):
            sigma_half = 0.0
            weight = float(_multiset_permutations(combo, count))
            for j in combo:
                sigma, r = residues[j]
                sigma_half += a2 * sigma / 2.0
                weight *= r
            yield sigma_half, weight

    partials = [(0.0, 1.0)]
    for c, count, residues in group_residues:
        partials = [
            (s0 + s1, w0 * w1)
            for s0, w0 in partials
            for s1, w1 in group_terms(c, count, residues)
        ]

    total = 0.0
    for sigma_half_ris, weight in partials:
        for sigma_d, r_d in direct_res:
            half_d = ens.direct.alpha2 * sigma_d / 2.0
            cross = math.gamma(sigma_half_ris) / (
                math.gamma(2.0 * sigma_half_ris) * math.gamma(1.0 + sigma_half_ris + half_d)
            )
            total += weight * r_d * cross
    return stat.coefficient * total


def _multiset_permutations(combo, count: int) -> int:
    reps = {}
    for j in combo:
        reps[j] = reps.get(j, 0) + 1
    out = math.factorial(count)
    for r in reps.values():
        out //= math.factorial(r)
    return out


def diversity(ensemble: RisEnsemble) -> DiversityReport:
    """Outage and BER diversity orders (pure arithmetic on shape products)."""
    minima = tuple(
        min(alpha * beta for alpha, beta in cascade_shapes(c)) / 2.0 for c in ensemble.elements
    )
    d = ensemble.direct
    direct_min = min(d.alpha1 * d.beta1, d.alpha2 * d.beta2) / 2.0
    ber_minima = [
        min((alpha * beta - 1.0) for alpha, beta in cascade_shapes(c)) / 2.0
        for c in ensemble.elements
    ]
    ber_direct = min(d.alpha1 * d.beta1 - 1.0, d.alpha2 * d.beta2 - 1.0) / 2.0
    return DiversityReport(
        g_out=sum(minima) + direct_min,
        g_ber=sum(ber_minima) + ber_direct,
        per_element_minima=minima,
        direct_min=direct_min,
    )


# ---------------------------------------------------------------------------
# single-branch baselines (degenerate members of the same contour family)


def baseline_dt(
    direct: DggParams,
    budget: LinkBudget,
    gamma_th: float,
    mod: ModulationParams,
    quad: QuadratureConfig = QuadratureConfig(),
) -> tuple[float, float]:
    """(outage, average BER) of direct transmission alone."""
    from .exact_stats import _build

    if gamma_th <= 0:
        raise ValueError("requires gamma_th > 0")
    _, phi_d = dgg_psi_phi(direct)
    coeff = math.exp(math.log(0.5) + _log_direct_coeff(direct))
    half = direct.alpha2 / 2.0

    cdf_terms = _direct_terms(direct, 1, 0) + [GammaTerm(1.0, (half,), sign=-1, orientation=-1)]
    arg = phi_d * (gamma_th / budget.gamma0_d) ** half
    value, _ = eval_foxh(_build([arg], cdf_terms), quad)
    outage = coeff * value

    ber_terms = cdf_terms + [GammaTerm(0.5, (half,), orientation=-1)]
    arg = phi_d * (1.0 / (mod.b * budget.gamma0_d)) ** half
    value, _ = eval_foxh(_build([arg], ber_terms), quad)
    ber = mod.a / math.sqrt(4.0 * math.pi) * coeff * value
    return outage, ber


def baseline_ris(
    ensemble: RisEnsemble,
    budget: LinkBudget,
    gamma_th: float,
    mod: ModulationParams,
    quad: QuadratureConfig = QuadratureConfig(),
) -> tuple[float, float]:
    """(outage, average BER) of the reflected branch alone (no direct link)."""
    from .exact_stats import (
        _build,
        _element_terms,
        _full_ris_coeffs,
        _half_coeffs,
        _log_element_coeff,
        _ris_args,
    )

    if gamma_th <= 0:
        raise ValueError("requires gamma_th > 0")
    _check_cap(ensemble)
    n = ensemble.n_elements
    coeff = math.exp(math.log(0.5) + _log_element_coeff(ensemble))
    half = _half_coeffs(ensemble, n, with_direct=False)
    full = _full_ris_coeffs(ensemble, n)

    base = _element_terms(ensemble, n)
    base.append(GammaTerm(0.0, half, orientation=-1))
    base.append(GammaTerm(0.0, full, sign=-1, orientation=-1))

    cdf_terms = base + [GammaTerm(1.0, half, sign=-1, orientation=-1)]
    args = _ris_args(ensemble, gamma_th / budget.gamma0_ris, +1.0)
    value, _ = eval_foxh(_build(args, cdf_terms), quad)
    outage = coeff * value

    ber_terms = base + [
        GammaTerm(0.5, half, orientation=-1),
        GammaTerm(1.0, half, sign=-1, orientation=-1),
    ]
    args = _ris_args(ensemble, 1.0 / (mod.b * budget.gamma0_ris), +1.0)
    value, _ = eval_foxh(_build(args, ber_terms), quad)
    ber = mod.a / math.sqrt(4.0 * math.pi) * coeff * value
    return outage, ber
