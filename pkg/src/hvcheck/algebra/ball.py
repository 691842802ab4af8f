"""Complex balls: high-precision midpoint plus an outward-rounded radius.

Midpoints are mpmath numbers at the caller's working precision; radii are
floats carrying every propagated error term plus a per-operation rounding
guard of a few ulps.  Comparisons only ever go through certified
separation; the doubled-precision containment audit in the test-suite is
the empirical backstop for the guard constants.
"""

from __future__ import annotations

import math

import mpmath as mp


def _guard():
    # a few ulps at the current binary precision
    return math.ldexp(1.0, -mp.mp.prec + 3)


def _absval(z):
    return float(abs(z))


class ComplexBall:
    __slots__ = ("mid", "rad")

    def __init__(self, mid, rad=0.0):
        self.mid = mp.mpc(mid)
        self.rad = float(rad)
        assert self.rad >= 0.0

    @classmethod
    def exact_int(cls, n):
        return cls(mp.mpc(n), 0.0)

    def __repr__(self):
        return f"Ball({mp.nstr(self.mid, 12)} ± {self.rad:.3e})"

    def _lift(self, other):
        if isinstance(other, ComplexBall):
            return other
        if isinstance(other, int):
            return ComplexBall(mp.mpc(other), 0.0)
        return ComplexBall(mp.mpc(other), _guard() * _absval(other))

    def __add__(self, other):
        other = self._lift(other)
        mid = self.mid + other.mid
        rad = self.rad + other.rad + _guard() * _absval(mid)
        return ComplexBall(mid, rad)

    __radd__ = __add__

    def __neg__(self):
        return ComplexBall(-self.mid, self.rad)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        mid = self.mid * other.mid
        rad = (_absval(self.mid) * other.rad + _absval(other.mid) * self.rad
               + self.rad * other.rad + _guard() * _absval(mid))
        return ComplexBall(mid, rad)

    __rmul__ = __mul__

    def inverse(self):
        a = _absval(self.mid)
        if self.rad >= a:
            raise ZeroDivisionError("ball contains zero")
        mid = 1 / self.mid
        rad = self.rad / (a * (a - self.rad)) + _guard() * _absval(mid)
        return ComplexBall(mid, rad)

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def conj(self):
        return ComplexBall(mp.conj(self.mid), self.rad)

    def abs2(self):
        return self * self.conj()

    def abs_ball(self):
        mid = abs(self.mid)
        return ComplexBall(mp.mpc(mid), self.rad + _guard() * float(mid))

    def sqrt(self):
        """A square root; valid when the ball is well away from zero."""
        a = _absval(self.mid)
        if self.rad >= a:
            raise ZeroDivisionError("sqrt of a ball containing zero")
        mid = mp.sqrt(self.mid)
        # |sqrt(z) - sqrt(w)| <= |z - w| / (sqrt|z| + sqrt|w|) <= rad / sqrt(|mid| - rad)
        rad = self.rad / math.sqrt(a - self.rad) + _guard() * _absval(mid)
        return ComplexBall(mid, rad)

    def contains_value(self, z):
        return _absval(self.mid - mp.mpc(z)) <= self.rad * (1 + 1e-12) + 1e-300

    def contains_ball(self, other):
        return _absval(self.mid - other.mid) + other.rad <= self.rad * (1 + 1e-12)

    def overlaps(self, other):
        other = self._lift(other)
        return _absval(self.mid - other.mid) <= self.rad + other.rad

    def separated_from(self, other):
        """Certified |self - other| > 0."""
        other = self._lift(other)
        return _absval(self.mid - other.mid) > self.rad + other.rad

    def real_part(self):
        return ComplexBall(mp.mpc(self.mid.real), self.rad)

    def imag_part(self):
        return ComplexBall(mp.mpc(self.mid.imag), self.rad)

    def round_int(self, margin=0.1):
        """Nearest integer if certified within `margin`; else None.

        Certified means: the ball lies inside the open disc of radius
        (1/2 - margin) around the nearest integer (real part; imaginary
        part must be below the same threshold).
        """
        re = float(self.mid.real)
        im = float(self.mid.imag)
        n = round(re)
        slack = abs(re - n) + abs(im) + self.rad
        if slack <= 0.5 - margin:
            return int(n)
        return None


def ball_sum(balls):
    acc = ComplexBall(mp.mpc(0), 0.0)
    for b in balls:
        acc = acc + b
    return acc
