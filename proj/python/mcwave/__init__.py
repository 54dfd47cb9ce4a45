"""Multicarrier waveform library: OFDM, CMT, SMT and OQAM filter banks."""

from ._mcwave import (
    NumericError,
    apply_channel,
    cmt_demodulate,
    cmt_modulate,
    cmt_qam_modulate,
    dft,
    estimate_psd,
    evm_db,
    idft,
    ofdm_demodulate,
    ofdm_modulate,
    oqam_demodulate,
    oqam_modulate,
    phydyas_prototype,
    rect_prototype,
    rrc_prototype,
    run_cli,
    simulate,
    smt_demodulate,
    smt_modulate,
    stopband_attenuation,
    verify_nyquist,
)

__version__ = "0.1.0"

__all__ = [
    "NumericError",
    "apply_channel",
    "cmt_demodulate",
    "cmt_modulate",
    "cmt_qam_modulate",
    "dft",
    "estimate_psd",
    "evm_db",
    "idft",
    "ofdm_demodulate",
    "ofdm_modulate",
    "oqam_demodulate",
    "oqam_modulate",
    "phydyas_prototype",
    "rect_prototype",
    "rrc_prototype",
    "run_cli",
    "simulate",
    "smt_demodulate",
    "smt_modulate",
    "stopband_attenuation",
    "verify_nyquist",
]
