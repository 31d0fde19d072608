"""Benchmark engine comparing discrete-wavelet and mel-cepstral feature
extraction for epileptic-seizure classification on Bonn-layout EEG data."""

__version__ = "0.1.0"
