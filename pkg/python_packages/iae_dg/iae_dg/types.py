""" shared enums and type aliases for problems, solvers and studies
"""

import enum
from typing import Any, Callable, Dict, Text

import numpy as np

#: a kernel K(t, s), broadcasting over array arguments
Kernel = Callable[[np.ndarray, np.ndarray], np.ndarray]

#: a data or exact-solution function of t, broadcasting over arrays
Function = Callable[[np.ndarray], np.ndarray]

ExperimentConfig = Dict[Text, Any]
ReportDict = Dict[Text, Any]


class Parity(enum.Enum):
    """Parity of the basis order m, which selects superconvergence points
    and spectral identities"""

    ODD = "odd"
    EVEN = "even"

    @classmethod
    def of(cls, m: int) -> "Parity":
        return cls.ODD if m % 2 else cls.EVEN


class ErrorKind(enum.Enum):
    """Where errors are measured"""

    GLOBAL = "global"
    SUPERCONV = "superconv"
    PERTURBED = "perturbed"


class Mode(enum.Enum):
    """Experiments the runner knows about"""

    GLOBAL = "global"
    SUPERCONV = "superconv"
    PERTURBED = "perturbed"
    IDENTITIES = "identities"


class PerturbationProfile(enum.Enum):
    """How a perturbation of size O(h^m1) is laid over the mesh"""

    SMOOTH = "smooth"
    RESONANT = "resonant"
