"""Ordered-statistics decoding with adaptive Gaussian-elimination reduction."""

from .channel import NoiseModel, SoftWord, frame_rng, modulate, transmit
from .codes import CodeSpec, default_order, ebch_code, get_code, load_generator
from .decoder import (
    DecodeOutcome,
    OrderedContext,
    Tep,
    adaptive_decode,
    enumerate_teps,
    ml_oracle,
    non_ge_osd,
    original_osd,
    preprocess,
    reencode,
    standard_osd,
    whd,
)
from .gf2 import BitMatrix, BitVec, Permutation, systematic_ge
from .reliability import BitErrorProfile, ConditionParams, condition1, plist_offline, plist_online
from .simbench import CampaignConfig, SnrPointResult, emit_results, run_campaign, run_point

__all__ = [
    "BitErrorProfile",
    "BitMatrix",
    "BitVec",
    "CampaignConfig",
    "CodeSpec",
    "ConditionParams",
    "DecodeOutcome",
    "NoiseModel",
    "OrderedContext",
    "Permutation",
    "SnrPointResult",
    "SoftWord",
    "Tep",
    "adaptive_decode",
    "condition1",
    "default_order",
    "ebch_code",
    "emit_results",
    "enumerate_teps",
    "frame_rng",
    "get_code",
    "load_generator",
    "ml_oracle",
    "modulate",
    "non_ge_osd",
    "original_osd",
    "plist_offline",
    "plist_online",
    "preprocess",
    "reencode",
    "run_campaign",
    "run_point",
    "standard_osd",
    "systematic_ge",
    "transmit",
    "whd",
]
