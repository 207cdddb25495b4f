"""Duo-binary 8-state tail-biting turbo code."""
from .codec import (INTERLEAVE_LEN, PB_SIZES, REMAP_MATRICES, CodedBlock,
                    ComponentTrace, TurboConfig, decode, encode, encode_component,
                    pair_deinterleave, pair_interleave, tailbite_init)
from .puncture import depuncture, puncture
from .trellis import DEFAULT_TRELLIS, Trellis

__all__ = [
    "INTERLEAVE_LEN", "PB_SIZES", "REMAP_MATRICES", "CodedBlock", "ComponentTrace",
    "TurboConfig", "decode", "encode", "encode_component", "pair_deinterleave",
    "pair_interleave", "tailbite_init", "depuncture", "puncture",
    "DEFAULT_TRELLIS", "Trellis",
]
