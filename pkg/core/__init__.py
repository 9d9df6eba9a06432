"""System model, constellation encoders, channel, decoders and closed-form MSE."""
from core.errors import OacError
from core.model import CauchyNoise, GaussianNoise, SystemConfig, derive_grid

__all__ = ['OacError', 'SystemConfig', 'GaussianNoise', 'CauchyNoise', 'derive_grid']
