import numpy as np

from .utils import ExampleSpec


class Example2(ExampleSpec):
    key = "ex2"
    description = "x1 = t sin t, x2 = cos t"
    x1_odd_derivatives_vanish = True

    def x1(self, t):
        return t * np.sin(t)

    def x2(self, t):
        return np.cos(t)

    def f1(self, t):
        # the x1 term cancels against part of int (t - s) s sin(s) ds
        return 2.0 - 2.0 * np.cos(t) + self.memory(t)

    def f2(self, t):
        return 0.5 * np.exp(t) * (np.exp(t) - np.cos(t) - t * (np.sin(t) + np.cos(t)))
