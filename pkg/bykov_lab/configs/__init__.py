from bykov_lab.configs.integrator import IntegratorConfig
from bykov_lab.configs.lyapunov import SpectrumSettings
from bykov_lab.configs.model import ModelParams, ModelParamsDirectory

__all__ = ["IntegratorConfig", "ModelParams", "ModelParamsDirectory", "SpectrumSettings"]
