"""Default numerical tolerances shared by the library.

Every function that compares floating point values takes its tolerance as a
keyword argument; the defaults below are only used when the caller passes
nothing.  Build a custom :class:`Tolerances` and hand its fields to the
functions you call when different thresholds are needed.
"""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    algebraic: float = 1e-12
    ode: float = 1e-9
    pdi: float = 1e-8
    quad: float = 1e-6
    bisect: float = 1e-10
    fd_step: float = 1e-3
    membership_margin: float = 1e-9

    def with_(self, **changes) -> "Tolerances":
        return replace(self, **changes)


DEFAULT = Tolerances()
