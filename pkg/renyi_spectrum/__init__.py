"""Large-N entanglement spectra of random pure states at fixed Renyi entropy"""

__version__ = "0.3.0"
