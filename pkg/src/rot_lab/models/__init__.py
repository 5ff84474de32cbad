from .base import Predictor
from .oracle import OracleModel, OracleParseError
from .transformer import ModelConfig, TinyTransformer, sequence_loss
from .training import TrainConfig, train_loop

__all__ = [
    "Predictor", "OracleModel", "OracleParseError",
    "ModelConfig", "TinyTransformer", "sequence_loss",
    "TrainConfig", "train_loop",
]
