"""Reliability-output decoding of tail-biting convolutional codes."""

from tbrova._core import (
    ChannelParams,
    CodeMetadata,
    CodeSpec,
    Codeword,
    DecodeResult,
    OpCounters,
    ReceivedSequence,
    Trellis,
    bsc_crossover_from_ebn0,
    build_code,
    decode,
    ebn0_from_snr,
    oracle_word_posterior,
    sigma2_from_ebn0,
    snr_from_ebn0,
    transmit,
)

__all__ = [
    "ChannelParams",
    "CodeMetadata",
    "CodeSpec",
    "Codeword",
    "DecodeResult",
    "OpCounters",
    "ReceivedSequence",
    "Trellis",
    "bsc_crossover_from_ebn0",
    "build_code",
    "decode",
    "ebn0_from_snr",
    "oracle_word_posterior",
    "sigma2_from_ebn0",
    "snr_from_ebn0",
    "transmit",
]
