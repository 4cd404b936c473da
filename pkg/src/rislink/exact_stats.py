"""Exact distribution of the combined SNR via multivariate contour integrals.

The reflected branch contributes one contour variable per array element
and the direct branch one more. All specs below share the same
per-variable Gamma structure; they differ only in arguments, prefactors,
and the cross-variable coupling factors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .channel import LinkBudget
from .dgg import CascadeParams, DggParams, cascade_coeffs, cascade_shapes, dgg_psi_phi
from .foxh import FoxHSpec, GammaTerm, QuadratureConfig, eval_foxh, suggest_anchors

__all__ = [
    "N_EXACT_MAX",
    "ExactCapExceeded",
    "RisEnsemble",
    "CombinedSnrStat",
    "combined_snr_stat",
    "hris_pdf_spec",
    "hris_pdf",
    "hris_cdf",
    "gamma_pdf",
    "gamma_cdf",
    "mgf_gamma_ris",
    "mgf_gamma_d",
]

# Beyond this many reflecting elements the contour dimension makes exact
# evaluation unreliable at desk scale; callers should fall back to the
# Monte-Carlo route.
N_EXACT_MAX = 4


class ExactCapExceeded(RuntimeError):
    def __init__(self, n: int):
        super().__init__(f"exact evaluation capped at N={N_EXACT_MAX} elements, got N={n}")
        self.n = n


@dataclass(frozen=True)
class RisEnsemble:
    """Per-element cascade fading plus the direct-link fading."""

    elements: tuple[CascadeParams, ...]
    direct: DggParams

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        if not self.elements:
            raise ValueError("ensemble needs at least one reflecting element")

    @property
    def n_elements(self) -> int:
        return len(self.elements)

    @classmethod
    def identical(cls, n: int, cascade: CascadeParams, direct: DggParams) -> "RisEnsemble":
        return cls(elements=(cascade,) * n, direct=direct)


@dataclass(frozen=True)
class CombinedSnrStat:
    ensemble: RisEnsemble
    budget: LinkBudget
    log_coefficient: float  # log of the overall positive prefactor

    @property
    def coefficient(self) -> float:
        return math.exp(self.log_coefficient)


def _log_element_coeff(ensemble: RisEnsemble) -> float:
    total = 0.0
    for c in ensemble.elements:
        A, B = cascade_coeffs(c)
        total += math.log(A) + c.hop1.beta2 * math.log(B)
    return total


def _log_direct_coeff(direct: DggParams) -> float:
    psi_d, phi_d = dgg_psi_phi(direct)
    return math.log(psi_d) - direct.beta2 * math.log(phi_d)


def combined_snr_stat(ensemble: RisEnsemble, budget: LinkBudget) -> CombinedSnrStat:
    log_coeff = math.log(0.25) + _log_direct_coeff(ensemble.direct) + _log_element_coeff(ensemble)
    if not math.isfinite(log_coeff):
        raise ValueError("non-finite SNR-statistic prefactor")
    return CombinedSnrStat(ensemble=ensemble, budget=budget, log_coefficient=log_coeff)


def _unit(n: int, i: int, scale: float = 1.0) -> tuple[float, ...]:
    v = [0.0] * n
    v[i] = scale
    return tuple(v)


def _element_terms(ensemble: RisEnsemble, nvars: int) -> list[GammaTerm]:
    """Five Gamma factors per reflecting element, element i on variable i."""
    terms = []
    for i, c in enumerate(ensemble.elements):
        a2 = c.hop1.alpha2
        for alpha, beta in cascade_shapes(c):
            terms.append(GammaTerm(beta, _unit(nvars, i, a2 / alpha)))
        terms.append(GammaTerm(0.0, _unit(nvars, i, a2), orientation=-1))
    return terms


def _direct_terms(direct: DggParams, nvars: int, idx: int) -> list[GammaTerm]:
    ad2 = direct.alpha2
    return [
        GammaTerm(direct.beta2, _unit(nvars, idx, 1.0)),
        GammaTerm(direct.beta1, _unit(nvars, idx, ad2 / direct.alpha1)),
        GammaTerm(0.0, _unit(nvars, idx, ad2 / 2.0), orientation=-1),
    ]


def _half_coeffs(ensemble: RisEnsemble, nvars: int, with_direct: bool) -> tuple[float, ...]:
    v = [c.hop1.alpha2 / 2.0 for c in ensemble.elements]
    if nvars > ensemble.n_elements:
        v.append(ensemble.direct.alpha2 / 2.0 if with_direct else 0.0)
    return tuple(v)


def _full_ris_coeffs(ensemble: RisEnsemble, nvars: int) -> tuple[float, ...]:
    v = [c.hop1.alpha2 for c in ensemble.elements]
    if nvars > ensemble.n_elements:
        v.append(0.0)
    return tuple(v)


def _ris_args(ensemble: RisEnsemble, base: float, exponent_sign: float) -> list[float]:
    """Element arguments (base)^(sign*alpha2/2) / B_i; base > 0."""
    args = []
    for c in ensemble.elements:
        _, B = cascade_coeffs(c)
        args.append(base ** (exponent_sign * c.hop1.alpha2 / 2.0) / B)
    return args


def _build(args, terms) -> FoxHSpec:
    terms = tuple(terms)
    return FoxHSpec(args=tuple(args), terms=terms, contour_re=suggest_anchors(terms, len(args)))


# ---------------------------------------------------------------------------
# sum of cascaded amplitudes


def hris_pdf_spec(ensemble: RisEnsemble, z: float) -> tuple[float, FoxHSpec]:
    """(log prefactor, spec) so that exp(logc) * H equals the density at z."""
    if z <= 0:
        raise ValueError("requires z > 0")
    n = ensemble.n_elements
    terms = _element_terms(ensemble, n)
    terms.append(GammaTerm(0.0, _full_ris_coeffs(ensemble, n), sign=-1, orientation=-1))
    args = [z ** c.hop1.alpha2 / cascade_coeffs(c)[1] for c in ensemble.elements]
    logc = _log_element_coeff(ensemble) - math.log(z)
    return logc, _build(args, terms)


def hris_pdf(ensemble: RisEnsemble, z: float, quad: QuadratureConfig = QuadratureConfig()) -> float:
    logc, spec = hris_pdf_spec(ensemble, z)
    value, _ = eval_foxh(spec, quad)
    return math.exp(logc) * value


def hris_cdf(ensemble: RisEnsemble, z: float, quad: QuadratureConfig = QuadratureConfig()) -> float:
    if z <= 0:
        raise ValueError("requires z > 0")
    n = ensemble.n_elements
    terms = _element_terms(ensemble, n)
    terms.append(GammaTerm(1.0, _full_ris_coeffs(ensemble, n), sign=-1, orientation=-1))
    args = [z ** c.hop1.alpha2 / cascade_coeffs(c)[1] for c in ensemble.elements]
    value, _ = eval_foxh(_build(args, terms), quad)
    return math.exp(_log_element_coeff(ensemble)) * value


# ---------------------------------------------------------------------------
# combined SNR


def _combined_terms(stat: CombinedSnrStat, distribution: str) -> tuple[list, int]:
    """Shared Gamma structure of the combined-SNR PDF/CDF/BER specs."""
    ens = stat.ensemble
    nvars = ens.n_elements + 1
    terms = _element_terms(ens, nvars)
    terms += _direct_terms(ens.direct, nvars, nvars - 1)
    half_ris = _half_coeffs(ens, nvars, with_direct=False)
    half_all = _half_coeffs(ens, nvars, with_direct=True)
    full_ris = _full_ris_coeffs(ens, nvars)
    terms.append(GammaTerm(0.0, half_ris, orientation=-1))
    terms.append(GammaTerm(0.0, full_ris, sign=-1, orientation=-1))
    if distribution == "pdf":
        terms.append(GammaTerm(0.0, half_all, sign=-1, orientation=-1))
    elif distribution == "cdf":
        terms.append(GammaTerm(1.0, half_all, sign=-1, orientation=-1))
    elif distribution == "ber":
        terms.append(GammaTerm(0.5, half_all, orientation=-1))
        terms.append(GammaTerm(1.0, half_all, sign=-1, orientation=-1))
    else:
        raise ValueError(distribution)
    return terms, nvars


def _combined_args(stat: CombinedSnrStat, g: float) -> list[float]:
    ens, bud = stat.ensemble, stat.budget
    _, phi_d = dgg_psi_phi(ens.direct)
    args = _ris_args(ens, g / bud.gamma0_ris, +1.0)
    args.append(phi_d * (g / bud.gamma0_d) ** (ens.direct.alpha2 / 2.0))
    return args


def _check_cap(ensemble: RisEnsemble) -> None:
    if ensemble.n_elements > N_EXACT_MAX:
        raise ExactCapExceeded(ensemble.n_elements)


def gamma_pdf(stat: CombinedSnrStat, g: float, quad: QuadratureConfig = QuadratureConfig()) -> float:
    """Density of the combined SNR at g > 0."""
    if g <= 0:
        raise ValueError("requires g > 0")
    _check_cap(stat.ensemble)
    terms, _ = _combined_terms(stat, "pdf")
    value, _ = eval_foxh(_build(_combined_args(stat, g), terms), quad)
    return stat.coefficient / g * value


def gamma_cdf(stat: CombinedSnrStat, g: float, quad: QuadratureConfig = QuadratureConfig()) -> float:
    """Distribution function of the combined SNR at g > 0."""
    if g <= 0:
        raise ValueError("requires g > 0")
    _check_cap(stat.ensemble)
    terms, _ = _combined_terms(stat, "cdf")
    value, _ = eval_foxh(_build(_combined_args(stat, g), terms), quad)
    return stat.coefficient * value


# ---------------------------------------------------------------------------
# branch MGFs (testable waypoints of the same Gamma structure)


def mgf_gamma_ris(
    ensemble: RisEnsemble,
    budget: LinkBudget,
    s: float,
    quad: QuadratureConfig = QuadratureConfig(),
) -> float:
    """E[exp(-s * SNR_reflected)] for s > 0."""
    if s <= 0:
        raise ValueError("requires s > 0")
    _check_cap(ensemble)
    n = ensemble.n_elements
    terms = _element_terms(ensemble, n)
    terms.append(GammaTerm(0.0, _half_coeffs(ensemble, n, with_direct=False), orientation=-1))
    terms.append(GammaTerm(0.0, _full_ris_coeffs(ensemble, n), sign=-1, orientation=-1))
    args = _ris_args(ensemble, budget.gamma0_ris * s, -1.0)
    value, _ = eval_foxh(_build(args, terms), quad)
    return math.exp(math.log(0.5) + _log_element_coeff(ensemble)) * value


def mgf_gamma_d(
    direct: DggParams,
    budget: LinkBudget,
    s: float,
    quad: QuadratureConfig = QuadratureConfig(),
) -> float:
    """E[exp(-s * SNR_direct)] for s > 0."""
    if s <= 0:
        raise ValueError("requires s > 0")
    _, phi_d = dgg_psi_phi(direct)
    terms = _direct_terms(direct, 1, 0)
    arg = phi_d * (budget.gamma0_d * s) ** (-direct.alpha2 / 2.0)
    value, _ = eval_foxh(_build([arg], terms), quad)
    return math.exp(math.log(0.5) + _log_direct_coeff(direct)) * value
