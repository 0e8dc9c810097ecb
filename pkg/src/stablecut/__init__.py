"""Stable matchings as cuts and antichains: optimization with certificates."""
from .core import (
    CoreSystem,
    Edge,
    PreferenceSystem,
    extend_to_stable,
    gale_shapley,
    is_stable,
    join,
    meet,
    reduce_to_core,
)
from .errors import (
    ContractError,
    InfeasibleError,
    InputError,
    ResourceError,
    StableCutError,
    UnboundedFlowError,
)

__version__ = "0.1.0"
