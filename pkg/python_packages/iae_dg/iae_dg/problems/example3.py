import numpy as np

from .utils import ExampleSpec


class Example3(ExampleSpec):
    key = "ex3"
    description = "x1 = cos t, x2 = exp(-t)"
    x1_odd_derivatives_vanish = True

    def x1(self, t):
        return np.cos(t)

    def x2(self, t):
        return np.exp(-t)

    def f1(self, t):
        return 1.0 + np.sinh(t)

    def f2(self, t):
        return 0.5 * np.exp(t) * (np.exp(t) - np.cos(t) + np.sin(t))
