from abc import ABC, abstractmethod
from typing import ClassVar

import numpy as np
from numpy.typing import NDArray

from bykov_lab.core.state import State


class VectorField(ABC):
    """An autonomous vector field with an analytic Jacobian.

    Instances are callable with the `(t, x)` signature expected by the ODE steppers.
    """

    dim: ClassVar[int]

    @property
    def sphere_invariant(self) -> bool:
        """Whether the unit sphere is invariant, so states may be renormalized onto it."""
        return False

    @abstractmethod
    def evaluate(self, x: State) -> State:
        """Return ẋ at x."""
        raise NotImplementedError

    @abstractmethod
    def jacobian(self, x: State) -> NDArray[np.float64]:
        """Return the dim×dim matrix of partial derivatives at x."""
        raise NotImplementedError

    def __call__(self, t: float, x: State) -> State:
        return self.evaluate(x)
