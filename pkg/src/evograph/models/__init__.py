"""Growth engines, one per model, plus a name registry."""

from __future__ import annotations

import json

from .base import (Model, ModelConfig, ModelError, SequenceBoundError, SequenceSpec,
                   StepTrace, Strategy, const, uniform_int)
from .cliques import Apollonian, ApollonianConfig, KTree, KTreeConfig, Pegging, PeggingConfig
from .cooper_frieze import CooperFrieze, CooperFriezeConfig
from .directed import (DirectedScaleFree, DirectedScaleFreeConfig, GenericDirected,
                       GenericDirectedConfig)
from .preferential import (GLP, AclC, AclCConfig, AclD, AclDConfig, GenericPref,
                           GenericPrefConfig, GLPConfig, Parid, ParidConfig)
from .uniform import (Copying, CopyingConfig, ForestFire, ForestFireConfig,
                      HybridSelection, HybridSelectionConfig)

MODELS: dict[str, type[Model]] = {
    cls.name: cls for cls in (
        ForestFire, Copying, HybridSelection, GenericPref, AclD, GLP, Parid, AclC,
        GenericDirected, DirectedScaleFree, CooperFrieze, Pegging, KTree, Apollonian)
}


def model_class(name: str) -> type[Model]:
    try:
        return MODELS[name]
    except KeyError:
        raise ModelError(f"unknown model {name!r}; choose from {', '.join(MODELS)}") from None


def config_from_dict(d: dict) -> ModelConfig:
    """Build a config from its JSON form; ``model`` selects the class."""
    d = dict(d)
    cls = model_class(d.pop("model")).config_cls
    if "p" in d and isinstance(d["p"], list):
        d["p"] = tuple(d["p"])
    try:
        return cls(**d)
    except TypeError as exc:
        raise ModelError(str(exc)) from exc


def config_from_json(text: str) -> ModelConfig:
    return config_from_dict(json.loads(text))


def default_config(name: str, **overrides) -> ModelConfig:
    return model_class(name).config_cls(**overrides)


def init(config: ModelConfig | dict | str) -> Model:
    """Model state for a config object, dict, JSON text or bare model name."""
    if isinstance(config, str):
        config = config_from_json(config) if config.lstrip().startswith("{") \
            else default_config(config)
    elif isinstance(config, dict):
        config = config_from_dict(config)
    return model_class(config.model)(config)


__all__ = [
    "MODELS", "Model", "ModelConfig", "ModelError", "SequenceBoundError", "SequenceSpec",
    "StepTrace", "Strategy", "const", "uniform_int", "model_class", "config_from_dict",
    "config_from_json", "default_config", "init",
    "ForestFire", "Copying", "HybridSelection", "GenericPref", "AclD", "GLP", "Parid",
    "AclC", "GenericDirected", "DirectedScaleFree", "CooperFrieze", "Pegging", "KTree",
    "Apollonian", "ForestFireConfig", "CopyingConfig", "HybridSelectionConfig",
    "GenericPrefConfig", "AclDConfig", "GLPConfig", "ParidConfig", "AclCConfig",
    "GenericDirectedConfig", "DirectedScaleFreeConfig", "CooperFriezeConfig",
    "PeggingConfig", "KTreeConfig", "ApollonianConfig",
]
