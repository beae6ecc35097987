"""Edge-penalty loss families for seeded cut objectives.

Three families, all normalized so the derivative at 1 equals 1:

* ``qnorm``  -- pure power penalty |t|^q / q, any q > 1.
* ``qhuber`` -- quadratic core of half-width ``delta`` spliced into the
  power penalty; removes the unbounded curvature of q < 2 powers at 0.
* ``berq``   -- power core spliced into a quadratic tail (reversed-Huber
  style), same ``delta`` core half-width.

``qhuber`` and ``berq`` are defined for 1 < q < 2 only.  Every family is
convex on [-1, 1] with an increasing, anti-symmetric derivative; the
``regime``/``c``/``k`` constants describe how derivative increments behave
and feed the solver's work accounting:

* regime "3a": ell'(t + dt) <= ell'(t) + k * ell'(dt) and curvature
  bounded below by c.
* regime "3b" (qnorm with q >= 2): ell' is c-Lipschitz and superadditive
  with constant k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

_KINDS = ("qnorm", "qhuber", "berq")

#: integer codes shared with the solver kernels
KIND_CODES = {"qnorm": 0, "qhuber": 1, "berq": 2}


def _pw(base: float, exponent: float) -> float:
    # exact-zero fast path keeps 0^e well defined for every exponent we use
    if base == 0.0:
        return 0.0
    return math.pow(base, exponent)


@dataclass(frozen=True)
class LossSpec:
    """One concrete loss instance; immutable, all operations are pure."""

    kind: str
    q: float
    delta: float = 0.0

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown loss kind {self.kind!r}")
        if not self.q > 1.0:
            raise ValueError(f"loss exponent must satisfy q > 1, got {self.q}")
        if self.kind in ("qhuber", "berq"):
            if not self.q < 2.0:
                raise ValueError(f"{self.kind} requires 1 < q < 2, got q={self.q}")
            if not 0.0 < self.delta < 1.0:
                raise ValueError(f"{self.kind} requires delta in (0, 1), got {self.delta}")

    @property
    def kind_code(self) -> int:
        return KIND_CODES[self.kind]

    @property
    def regime(self) -> str:
        if self.kind == "qnorm" and self.q >= 2.0:
            return "3b"
        return "3a"

    @property
    def c(self) -> float:
        """Curvature-style constant of the derivative-increment condition."""
        if self.kind == "berq":
            return 1.0
        return self.q - 1.0

    @property
    def k(self) -> float:
        """Subadditivity (3a) or superadditivity (3b) constant."""
        if self.kind == "qnorm" and self.q >= 2.0:
            return 1.0
        return 2.0 ** (2.0 - self.q)

    def value(self, t: float) -> float:
        """Penalty value at t, domain [-1, 1]."""
        a = abs(t)
        if a > 1.0:
            raise ValueError(f"loss argument outside [-1, 1]: {t}")
        q, d = self.q, self.delta
        if self.kind == "qnorm":
            return _pw(a, q) / q
        if self.kind == "qhuber":
            if a <= d:
                return 0.5 * _pw(d, q - 2.0) * t * t
            return _pw(a, q) / q + ((q - 2.0) / (2.0 * q)) * _pw(d, q)
        if a <= d:
            return _pw(d, 2.0 - q) * _pw(a, q) / q
        return 0.5 * t * t + ((2.0 - q) / (2.0 * q)) * d * d

    def deriv(self, t: float) -> float:
        """Derivative of the penalty; anti-symmetric, nondecreasing on [-1, 1]."""
        a = abs(t)
        if a > 1.0:
            raise ValueError(f"loss argument outside [-1, 1]: {t}")
        s = 1.0 if t > 0.0 else (-1.0 if t < 0.0 else 0.0)
        q, d = self.q, self.delta
        if self.kind == "qnorm":
            return s * _pw(a, q - 1.0)
        if self.kind == "qhuber":
            if a <= d:
                return _pw(d, q - 2.0) * t
            return s * _pw(a, q - 1.0)
        if a <= d:
            return s * _pw(d, 2.0 - q) * _pw(a, q - 1.0)
        return t

    def deriv_inverse(self, y: float) -> float:
        """Nonnegative t with deriv(t) == y, for y in [0, deriv(1)] = [0, 1]."""
        if not 0.0 <= y <= 1.0:
            raise ValueError(f"deriv_inverse argument outside [0, 1]: {y}")
        q, d = self.q, self.delta
        if self.kind == "qnorm":
            return _pw(y, 1.0 / (q - 1.0))
        if self.kind == "qhuber":
            if y <= _pw(d, q - 1.0):
                return y * _pw(d, 2.0 - q)
            return _pw(y, 1.0 / (q - 1.0))
        if y <= d:
            return _pw(y * _pw(d, q - 2.0), 1.0 / (q - 1.0))
        return y


def qnorm(q: float) -> LossSpec:
    """Power penalty |t|^q / q."""
    return LossSpec("qnorm", float(q), 0.0)


def qhuber(q: float, delta: float = 1e-5) -> LossSpec:
    """Power penalty with a quadratic core of half-width delta."""
    return LossSpec("qhuber", float(q), float(delta))


def berq(q: float, delta: float = 1e-5) -> LossSpec:
    """Quadratic penalty with a power core of half-width delta."""
    return LossSpec("berq", float(q), float(delta))
