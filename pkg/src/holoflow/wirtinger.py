"""Central finite-difference Wirtinger derivatives.

d/dzbar = (d/dx + i d/dy) / 2; a vanishing dbar residual is the sampled
Cauchy-Riemann condition.  The default step 1e-5 balances the O(h^2)
truncation of the central stencil against double rounding (eps/h ~ 1e-11).
"""

from __future__ import annotations

from typing import Callable, Sequence


def dbar_fd(f: Callable[[complex], complex], zeta: complex, step: float = 1e-5) -> complex:
    """Finite-difference d f / d zbar at zeta for a function of one variable."""
    h = step
    dx = (complex(f(zeta + h)) - complex(f(zeta - h))) / (2.0 * h)
    dy = (complex(f(zeta + 1j * h)) - complex(f(zeta - 1j * h))) / (2.0 * h)
    return 0.5 * (dx + 1j * dy)


def d_fd(f: Callable[[complex], complex], zeta: complex, step: float = 1e-5) -> complex:
    """Finite-difference d f / d z at zeta for a function of one variable."""
    h = step
    dx = (complex(f(zeta + h)) - complex(f(zeta - h))) / (2.0 * h)
    dy = (complex(f(zeta + 1j * h)) - complex(f(zeta - 1j * h))) / (2.0 * h)
    return 0.5 * (dx - 1j * dy)


def dbar_fd_component(
    f: Callable[[Sequence[complex]], complex],
    z: Sequence[complex],
    j: int,
    step: float = 1e-5,
) -> complex:
    """Finite-difference d f / d zbar_j for a function on C^N."""

    def along(w: complex) -> complex:
        point = list(z)
        point[j] = w
        return complex(f(tuple(point)))

    return dbar_fd(along, complex(z[j]), step)


def cr_residual(f: Callable[[complex], complex], zeta: complex, step: float = 1e-5) -> float:
    """|dbar f| at zeta: the sampled Cauchy-Riemann defect."""
    return abs(dbar_fd(f, zeta, step))
