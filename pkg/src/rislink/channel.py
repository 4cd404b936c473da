"""Link geometry, free-space path loss, and average-SNR budgets."""
from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = ["SPEED_OF_LIGHT", "LinkGeometry", "LinkBudget", "pathloss_cascaded", "pathloss_direct", "budget"]

SPEED_OF_LIGHT = 299_792_458.0


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def dbm_to_watt(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


@dataclass(frozen=True)
class LinkGeometry:
    freq_hz: float
    gain_tx_dbi: float
    gain_rx_dbi: float
    d1_m: float  # source -> reflector array
    d2_m: float  # reflector array -> destination

    def __post_init__(self):
        if self.freq_hz <= 0 or self.d1_m <= 0 or self.d2_m <= 0:
            raise ValueError("frequency and distances must be positive")


@dataclass(frozen=True)
class LinkBudget:
    h_l_ris: float  # amplitude gain of the reflected path
    h_l: float  # amplitude gain of the direct path
    gamma0_ris: float  # linear average SNR scale, reflected branch
    gamma0_d: float  # linear average SNR scale, direct branch
    pt_dbm: float
    noise_dbm: float

    def __post_init__(self):
        if min(self.h_l_ris, self.h_l, self.gamma0_ris, self.gamma0_d) <= 0:
            raise ValueError("gains and SNR scales must be positive")


def pathloss_cascaded(geom: LinkGeometry) -> float:
    """Amplitude path gain of the reflected (two-segment) path."""
    g = math.sqrt(db_to_linear(geom.gain_tx_dbi) * db_to_linear(geom.gain_rx_dbi))
    return g * SPEED_OF_LIGHT**2 / (16.0 * math.pi * geom.freq_hz**2 * geom.d1_m * geom.d2_m)


def pathloss_direct(geom: LinkGeometry) -> float:
    """Amplitude path gain of the direct path (endpoint heights ignored)."""
    g = math.sqrt(db_to_linear(geom.gain_tx_dbi) * db_to_linear(geom.gain_rx_dbi))
    dist = math.hypot(geom.d1_m, geom.d2_m)
    return g * SPEED_OF_LIGHT / (4.0 * math.pi * geom.freq_hz * dist)


def budget(geom: LinkGeometry, pt_dbm: float, noise_dbm: float = -74.0) -> LinkBudget:
    """Average SNR scales gamma0 = gain^2 * Pt / noise for both branches."""
    h_ris = pathloss_cascaded(geom)
    h_d = pathloss_direct(geom)
    snr = dbm_to_watt(pt_dbm) / dbm_to_watt(noise_dbm)
    return LinkBudget(
        h_l_ris=h_ris,
        h_l=h_d,
        gamma0_ris=h_ris**2 * snr,
        gamma0_d=h_d**2 * snr,
        pt_dbm=pt_dbm,
        noise_dbm=noise_dbm,
    )
