import numpy as np
import pytest
import sympy as sp

from saffine.curvekit import CurveProvider

ACCEPTANCE_RESULTS = []


class SympyCurve(CurveProvider):
    """Curve given by sympy expressions; derivatives by symbolic differentiation.

    Serves as an oracle independent of the package's own derivative code.
    """

    analytic = True

    def __init__(self, exprs, t, domain, max_order=12):
        self.exprs = [sp.sympify(e) for e in exprs]
        self.n = len(self.exprs)
        self.domain = tuple(map(float, domain))
        self.max_order = max_order
        self._fns = []
        for k in range(max_order + 1):
            ds = [sp.diff(e, t, k) for e in self.exprs]
            self._fns.append(sp.lambdify(t, ds, "numpy"))

    def _derivatives(self, t, order):
        out = np.empty((t.size, order + 1, self.n))
        for k in range(order + 1):
            vals = self._fns[k](t)
            for i, v in enumerate(vals):
                out[:, k, i] = np.broadcast_to(np.asarray(v, dtype=float), t.shape)
        return out


@pytest.fixture(scope="session")
def sympy_curve():
    return SympyCurve


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(line)
