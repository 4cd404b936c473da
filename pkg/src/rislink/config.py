"""System configuration: fading presets, scenario files, and validation.

The scenario file format is flat ``key = value`` text with ``#`` comments.
Fading can be given as a preset name or as explicit parameter blocks; an
identical-element shorthand applies one cascade block to all N elements,
and ``element<i>_hop<j>`` keys override individual hops.
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, replace

from .channel import LinkGeometry
from .dgg import CascadeParams, DggParams
from .exact_stats import RisEnsemble

__all__ = [
    "OMEGA1",
    "OMEGA2",
    "PRESETS",
    "SystemConfig",
    "ScenarioConfig",
    "ParseError",
    "ValidationError",
    "default_geometry",
    "preset_fading",
    "preset_system",
    "load_config",
    "parse_config_text",
    "config_hash",
]

# Common scale parameters of every fading preset.
OMEGA1 = 1.5793
OMEGA2 = 0.9671

# Preset name -> ((RIS-hop shapes), (direct-link shapes)) as
# ((alpha1, beta1), (alpha2, beta2)) pairs; both RIS hops are identical.
PRESETS = {
    "FP1": (((2.0, 1.0), (2.0, 2.0)), ((1.5, 1.5), (1.0, 1.5))),
    "FP2": (((1.0, 1.0), (1.0, 2.0)), ((2.0, 1.5), (2.0, 1.5))),
    "FP3": (((1.0, 1.5), (1.0, 2.5)), ((2.0, 2.1), (2.0, 2.1))),
}


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, key: str | None = None):
        ctx = []
        if line is not None:
            ctx.append(f"line {line}")
        if key is not None:
            ctx.append(f"key '{key}'")
        super().__init__(f"{message}" + (f" ({', '.join(ctx)})" if ctx else ""))
        self.line = line
        self.key = key


class ValidationError(ValueError):
    """Carries every violated invariant, not just the first."""

    def __init__(self, problems: list[str]):
        super().__init__("invalid configuration:\n  - " + "\n  - ".join(problems))
        self.problems = list(problems)


def default_geometry() -> LinkGeometry:
    """Reference geometry: 6 GHz, 10/0 dBi gains, 50 m + 100 m segments."""
    return LinkGeometry(freq_hz=6e9, gain_tx_dbi=10.0, gain_rx_dbi=0.0, d1_m=50.0, d2_m=100.0)


def _dgg_from_shapes(shapes) -> DggParams:
    (a1, b1), (a2, b2) = shapes
    return DggParams(alpha1=a1, beta1=b1, alpha2=a2, beta2=b2, omega1=OMEGA1, omega2=OMEGA2)


def preset_fading(name: str) -> tuple[CascadeParams, DggParams]:
    """(per-element cascade, direct-link fading) for a named preset."""
    if name not in PRESETS:
        raise KeyError(f"unknown fading preset '{name}', expected one of {sorted(PRESETS)}")
    ris_shapes, dt_shapes = PRESETS[name]
    hop = _dgg_from_shapes(ris_shapes)
    return CascadeParams(hop1=hop, hop2=hop), _dgg_from_shapes(dt_shapes)


@dataclass(frozen=True)
class SystemConfig:
    """Physical scenario: geometry, noise floor, and all fading blocks."""

    geometry: LinkGeometry
    noise_dbm: float
    elements: tuple[CascadeParams, ...]
    direct: DggParams

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        if not self.elements:
            raise ValueError("SystemConfig needs at least one reflecting element")

    @property
    def n_elements(self) -> int:
        return len(self.elements)

    def ensemble(self) -> RisEnsemble:
        return RisEnsemble(elements=self.elements, direct=self.direct)


def preset_system(
    name: str,
    n_elements: int,
    geometry: LinkGeometry | None = None,
    noise_dbm: float = -74.0,
) -> SystemConfig:
    cascade, direct = preset_fading(name)
    return SystemConfig(
        geometry=geometry or default_geometry(),
        noise_dbm=noise_dbm,
        elements=(cascade,) * n_elements,
        direct=direct,
    )


@dataclass(frozen=True)
class ScenarioConfig:
    """One sweep: system + sweep axis + requested methods + MC settings."""

    system: SystemConfig
    pt_dbm: tuple[float, ...]
    gamma_th_db: float = 0.0
    modulation_a: float = 1.0
    modulation_b: float = 1.0
    methods: tuple[str, ...] = ("exact", "mc")
    mc_trials: int = 1_000_000
    mc_seed: int = 0
    output: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "pt_dbm", tuple(float(p) for p in self.pt_dbm))
        object.__setattr__(self, "methods", tuple(self.methods))

    @property
    def gamma_th(self) -> float:
        return 10.0 ** (self.gamma_th_db / 10.0)


_VALID_METHODS = ("exact", "asymptotic", "mc")

_GEOMETRY_KEYS = {
    "freq_hz": 6e9,
    "gain_tx_dbi": 10.0,
    "gain_rx_dbi": 0.0,
    "d1_m": 50.0,
    "d2_m": 100.0,
}

_KNOWN_KEYS = set(_GEOMETRY_KEYS) | {
    "noise_dbm",
    "n_elements",
    "fading_preset",
    "ris_fading",
    "direct_fading",
    "modulation_a",
    "modulation_b",
    "pt_dbm",
    "pt_start_dbm",
    "pt_stop_dbm",
    "pt_step_db",
    "gamma_th_db",
    "methods",
    "mc_trials",
    "mc_seed",
    "output",
}


def _parse_fading_block(value: str, key: str, line: int) -> DggParams:
    parts = value.split()
    if len(parts) not in (4, 6):
        raise ParseError(
            "fading block needs 'alpha1 beta1 alpha2 beta2 [omega1 omega2]'", line, key
        )
    try:
        nums = [float(p) for p in parts]
    except ValueError:
        raise ParseError("fading block values must be numbers", line, key) from None
    omegas = nums[4:6] if len(nums) == 6 else [OMEGA1, OMEGA2]
    try:
        return DggParams(nums[0], nums[1], nums[2], nums[3], omegas[0], omegas[1])
    except ValueError as e:
        raise ParseError(str(e), line, key) from None


def parse_config_text(text: str) -> ScenarioConfig:
    entries: dict[str, tuple[str, int]] = {}
    element_keys: dict[str, tuple[str, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ParseError("expected 'key = value'", lineno)
        key, _, value = stripped.partition("=")
        key, value = key.strip(), value.strip()
        if not key or not value:
            raise ParseError("empty key or value", lineno, key or None)
        target = element_keys if key.startswith("element") else entries
        if key in target:
            raise ParseError("duplicate key", lineno, key)
        target[key] = (value, lineno)
    for key, (_, lineno) in entries.items():
        if key not in _KNOWN_KEYS:
            raise ParseError("unknown key", lineno, key)

    def take(key: str, default=None):
        return entries.pop(key, (default, None))

    def take_float(key: str, default=None):
        value, lineno = take(key, default)
        if value is None:
            return None
        try:
            return float(value)
        except (TypeError, ValueError):
            raise ParseError("expected a number", lineno, key) from None

    def take_int(key: str, default=None):
        value, lineno = take(key, default)
        if value is None:
            return None
        try:
            return int(str(value))
        except ValueError:
            raise ParseError("expected an integer", lineno, key) from None

    problems: list[str] = []

    geom_kwargs = {}
    for key, default in _GEOMETRY_KEYS.items():
        geom_kwargs[key] = take_float(key, default)
    noise_dbm = take_float("noise_dbm", -74.0)

    n_elements = take_int("n_elements")
    if n_elements is None:
        problems.append("n_elements is required")
    elif n_elements < 1:
        problems.append(f"n_elements must be >= 1, got {n_elements}")

    preset_value, preset_line = take("fading_preset")
    ris_value, ris_line = take("ris_fading")
    direct_value, direct_line = take("direct_fading")

    cascade = direct = None
    if preset_value and preset_value != "custom":
        if preset_value not in PRESETS:
            raise ParseError("unknown preset", preset_line, "fading_preset")
        cascade, direct = preset_fading(preset_value)
    if ris_value:
        hop = _parse_fading_block(ris_value, "ris_fading", ris_line)
        cascade = CascadeParams(hop1=hop, hop2=hop)
    if direct_value:
        direct = _parse_fading_block(direct_value, "direct_fading", direct_line)
    if cascade is None:
        problems.append("no RIS fading given (need fading_preset or ris_fading)")
    if direct is None:
        problems.append("no direct-link fading given (need fading_preset or direct_fading)")

    elements = list((cascade,) * n_elements) if (cascade and n_elements and n_elements > 0) else []
    for key, (value, lineno) in sorted(element_keys.items()):
        # element<i>_hop<j> = fading block, 1-based indices
        parts = key.split("_")
        if len(parts) != 2 or not parts[0][7:].isdigit() or parts[1] not in ("hop1", "hop2"):
            raise ParseError("expected element<i>_hop1 or element<i>_hop2", lineno, key)
        idx = int(parts[0][7:]) - 1
        if not elements:
            continue
        if not 0 <= idx < len(elements):
            problems.append(f"{key}: element index out of range 1..{len(elements)}")
            continue
        hop = _parse_fading_block(value, key, lineno)
        elements[idx] = replace(elements[idx], **{parts[1]: hop})

    pt_value, pt_line = take("pt_dbm")
    pt_start = take_float("pt_start_dbm")
    pt_stop = take_float("pt_stop_dbm")
    pt_step = take_float("pt_step_db")
    sweep: list[float] = []
    if pt_value:
        try:
            sweep = [float(p) for p in pt_value.replace(",", " ").split()]
        except ValueError:
            raise ParseError("expected numbers", pt_line, "pt_dbm") from None
    elif pt_start is not None and pt_stop is not None:
        step = pt_step if pt_step else 5.0
        if step <= 0:
            problems.append("pt_step_db must be positive")
        else:
            count = int(math.floor((pt_stop - pt_start) / step + 1e-9)) + 1
            sweep = [pt_start + k * step for k in range(max(count, 0))]
    if not sweep:
        problems.append("empty transmit-power sweep (need pt_dbm or pt_start/stop)")

    methods_value, methods_line = take("methods", "exact,mc")
    methods = tuple(m for m in methods_value.replace(",", " ").split())
    for m in methods:
        if m not in _VALID_METHODS:
            raise ParseError(f"unknown method '{m}', expected {_VALID_METHODS}", methods_line, "methods")
    if not methods:
        problems.append("at least one method is required")

    modulation_a = take_float("modulation_a", 1.0)
    modulation_b = take_float("modulation_b", 1.0)
    if modulation_a <= 0 or modulation_b <= 0:
        problems.append("modulation_a and modulation_b must be positive")
    gamma_th_db = take_float("gamma_th_db", 0.0)
    mc_trials = take_int("mc_trials", 1_000_000)
    mc_seed = take_int("mc_seed", 0)
    if mc_trials < 10_000:
        problems.append(f"mc_trials must be >= 10000, got {mc_trials}")
    output, _ = take("output")

    try:
        geometry = LinkGeometry(**geom_kwargs)
    except ValueError as e:
        problems.append(str(e))
        geometry = None

    if problems:
        raise ValidationError(problems)
    system = SystemConfig(
        geometry=geometry, noise_dbm=noise_dbm, elements=tuple(elements), direct=direct
    )
    return ScenarioConfig(
        system=system,
        pt_dbm=tuple(sweep),
        gamma_th_db=gamma_th_db,
        modulation_a=modulation_a,
        modulation_b=modulation_b,
        methods=methods,
        mc_trials=mc_trials,
        mc_seed=mc_seed,
        output=output,
    )


def load_config(path: str) -> ScenarioConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config_text(fh.read())


def _semantic_repr(cfg: ScenarioConfig) -> str:
    sys_ = cfg.system
    parts = [
        repr(sys_.geometry),
        f"noise={sys_.noise_dbm!r}",
        ";".join(repr(c) for c in sys_.elements),
        repr(sys_.direct),
        f"pt={cfg.pt_dbm!r}",
        f"gth={cfg.gamma_th_db!r}",
        f"mod=({cfg.modulation_a!r},{cfg.modulation_b!r})",
        f"methods={cfg.methods!r}",
        f"mc=({cfg.mc_trials},{cfg.mc_seed})",
    ]
    return "|".join(parts)


def config_hash(cfg: ScenarioConfig) -> str:
    """Short digest of every semantic field (output path excluded)."""
    return hashlib.sha256(_semantic_repr(cfg).encode()).hexdigest()[:16]
