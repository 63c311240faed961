import numpy as np

from .utils import ExampleSpec


class Example1(ExampleSpec):
    key = "ex1"
    description = "x1 = t exp(-t), x2 = cos t"

    def x1(self, t):
        return t * np.exp(-t)

    def x2(self, t):
        return np.cos(t)

    def f1(self, t):
        # x1 + int (t - s) s exp(-s) ds + int exp(t - s) cos(s) ds
        return t - 2.0 + 2.0 * (t + 1.0) * np.exp(-t) + self.memory(t)

    def f2(self, t):
        return 0.25 * (np.exp(2.0 * t) - 2.0 * t - 1.0)
