"""Scheme/mode identifiers shared by the estimators, the analysis layer,
and the experiment runner.  Enum values double as the CSV scheme tokens."""

from __future__ import annotations

import enum


class OutageScheme(enum.Enum):
    NOMA_N_IPSIC = "noma_n_ipsic"
    NOMA_N_PSIC = "noma_n_psic"
    NOMA_M = "noma_m"
    OMA_N = "oma_n"
    OMA_M = "oma_m"
    SYSTEM_NOMA_IPSIC = "system_noma_ipsic"
    SYSTEM_NOMA_PSIC = "system_noma_psic"
    SYSTEM_OMA = "system_oma"


class RateScheme(enum.Enum):
    NOMA_N_IPSIC = "rate_noma_n_ipsic"
    NOMA_N_PSIC = "rate_noma_n_psic"
    NOMA_M = "rate_noma_m"
    OMA_N = "rate_oma_n"
    OMA_M = "rate_oma_m"


class ThroughputMode(enum.Enum):
    DELAY_LIMITED_IPSIC = "thr_dl_ipsic"
    DELAY_LIMITED_PSIC = "thr_dl_psic"
    DELAY_TOLERANT_PSIC = "thr_dt_psic"


class AsymptoteKind(enum.Enum):
    IPSIC_FLOOR = "ipsic_floor"
    PSIC_USER_N = "psic_user_n"
    USER_M = "user_m"


class OmaUser(enum.Enum):
    N = "n"
    M = "m"
