"""Closed-form synthesis of polar curves whose radius of curvature obeys
rho^n = a*L + b along the model arc length L.

Two families share one API.  For n = 1 the arc length grows exponentially
with the accumulated tangent turn u = (theta - theta0) + (f(theta) - f(theta0)):

    L = (b/a) * (exp(a*u) - 1)

and for n != 1 the turn enters through the power base

    A(theta) = (a*(n - 1)*u + n * b^(1 - 1/n)) / n,
    L = (A^(n/(n-1)) - b) / a,

valid while A stays positive.  The radius follows as
R = rho(L) * (1 + f'(theta)) * sin f(theta) in both families.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .phiexpr import EvalDomainError, PhiFunction

# |n - 1| at or below this dispatches to the exponential family
CLASS_ONE_TOL = 1e-9

_BISECT_TOL = 1e-12
_GRID = 1024


class DomainExceeded(ValueError):
    """A(theta) <= 0: the curve is not defined this far.

    ``theta_max`` is the largest angle (to 1e-12) where A is still positive.
    """

    def __init__(self, theta: float, theta_max: float):
        super().__init__(
            f"curve domain exceeded at theta={theta!r}; largest valid theta is {theta_max!r}"
        )
        self.theta = theta
        self.theta_max = theta_max


class NonpositiveRho(ValueError):
    def __init__(self, value: float):
        super().__init__(f"a*L + b = {value!r} is not positive")
        self.value = value


@dataclass(frozen=True)
class CurveParams:
    """Full specification of one curve; immutable after construction."""

    n: float
    a: float
    b: float
    theta0: float
    theta1: float
    phi: PhiFunction
    phi0: float = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        for name in ("n", "a", "b", "theta0", "theta1"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ValueError(f"{name} must be a finite number, got {v!r}")
        if self.n == 0:
            raise ValueError("n must be nonzero")
        if self.a == 0:
            raise ValueError("a must be nonzero")
        if self.b <= 0:
            raise ValueError("b must be positive")
        if not self.theta1 > self.theta0:
            raise ValueError("theta1 must exceed theta0")
        try:
            phi0 = self.phi.value(self.theta0)
        except EvalDomainError as exc:
            raise ValueError(f"phi is not evaluable at theta0: {exc}") from exc
        if not math.isfinite(phi0):
            raise ValueError("phi(theta0) is not finite")
        object.__setattr__(self, "phi0", phi0)

    @property
    def is_class_one(self) -> bool:
        return abs(self.n - 1.0) <= CLASS_ONE_TOL


@dataclass(frozen=True)
class SampleValidity:
    rho_positive: bool
    radius_positive: bool
    monotone_factor_positive: bool
    in_domain: bool


@dataclass(frozen=True)
class CurveSample:
    theta: float
    L: float
    R: float
    rho: float
    phi: float
    dphi: float
    beta: float
    x: float
    y: float
    valid: SampleValidity


@dataclass(frozen=True)
class ConditionReport:
    holds: bool
    first_violation: float | None


@dataclass(frozen=True)
class ValidationReport:
    in_domain: ConditionReport
    rho_positive: ConditionReport
    radius_positive: ConditionReport
    monotone_factor_positive: ConditionReport
    sin_phi_positive: ConditionReport

    def all_hold(self) -> bool:
        return all(
            getattr(self, f).holds
            for f in (
                "in_domain",
                "rho_positive",
                "radius_positive",
                "monotone_factor_positive",
                "sin_phi_positive",
            )
        )


def turn_angle(p: CurveParams, theta: float) -> float:
    """Accumulated tangent turn u = (theta - theta0) + (f(theta) - f(theta0))."""
    return (theta - p.theta0) + (p.phi.value(theta) - p.phi0)


def _power_base(p: CurveParams, u: float) -> float:
    return (p.a * (p.n - 1.0) * u + p.n * p.b ** (1.0 - 1.0 / p.n)) / p.n


def _domain_boundary(p: CurveParams, theta_bad: float) -> float:
    # A is positive at theta0 (it equals b^(1-1/n) there) and nonpositive at
    # theta_bad; bisect the bracket down to 1e-12 in theta
    good, bad = p.theta0, theta_bad
    while abs(bad - good) > _BISECT_TOL:
        mid = 0.5 * (good + bad)
        if mid == good or mid == bad:
            break
        try:
            positive = _power_base(p, turn_angle(p, mid)) > 0.0
        except EvalDomainError:
            positive = False
        if positive:
            good = mid
        else:
            bad = mid
    return good


def arc_length(p: CurveParams, theta: float) -> float:
    """Model arc length L(theta); exactly zero at theta0.

    Raises DomainExceeded when the power base A(theta) is nonpositive
    (n != 1 only; the exponential family is defined for every turn).
    """
    u = turn_angle(p, theta)
    if u == 0.0:
        return 0.0
    if p.is_class_one:
        return (p.b / p.a) * math.expm1(p.a * u)
    base = _power_base(p, u)
    if base <= 0.0:
        raise DomainExceeded(theta, _domain_boundary(p, theta))
    return (base ** (p.n / (p.n - 1.0)) - p.b) / p.a


def radius_of_curvature(p: CurveParams, L: float) -> float:
    g = p.a * L + p.b
    if g <= 0.0:
        raise NonpositiveRho(g)
    if p.is_class_one:
        return g
    return g ** (1.0 / p.n)


def radius_at(p: CurveParams, theta: float) -> float:
    """R = rho(L(theta)) * (1 + f'(theta)) * sin f(theta); may be negative."""
    L = arc_length(p, theta)
    pv = p.phi.eval_with_derivative(theta)
    rho = radius_of_curvature(p, L)
    return rho * (1.0 + pv.dphi_dtheta) * math.sin(pv.phi)


def _grid(p: CurveParams, count: int) -> list[float]:
    span = p.theta1 - p.theta0
    last = count - 1
    thetas = [p.theta0 + i * span / last for i in range(count)]
    thetas[-1] = p.theta1  # guard against round-off at the far end
    return thetas


_NAN = float("nan")


def _invalid_sample(theta: float) -> CurveSample:
    flags = SampleValidity(False, False, False, False)
    return CurveSample(theta, _NAN, _NAN, _NAN, _NAN, _NAN, _NAN, _NAN, _NAN, flags)


def _sample_at(p: CurveParams, theta: float) -> CurveSample:
    try:
        L = arc_length(p, theta)
        pv = p.phi.eval_with_derivative(theta)
        rho = radius_of_curvature(p, L)
    except (DomainExceeded, NonpositiveRho, EvalDomainError):
        return _invalid_sample(theta)
    monotone = 1.0 + pv.dphi_dtheta
    R = rho * monotone * math.sin(pv.phi)
    beta = theta + pv.phi
    flags = SampleValidity(
        rho_positive=rho > 0.0,
        radius_positive=R > 0.0,
        monotone_factor_positive=monotone > 0.0,
        in_domain=True,
    )
    return CurveSample(theta, L, R, rho, pv.phi, pv.dphi_dtheta, beta, R * math.cos(theta), R * math.sin(theta), flags)


def sample(p: CurveParams, count: int) -> list[CurveSample]:
    """Evaluate the curve on a uniform theta grid.

    Rows past the domain boundary come back flagged in_domain=False instead
    of aborting the batch.
    """
    if count < 2:
        raise ValueError("count must be at least 2")
    return [_sample_at(p, t) for t in _grid(p, count)]


def validate(p: CurveParams) -> ValidationReport:
    """Check the positivity conditions on a 1024-point grid.

    Conditions other than in_domain are judged only where the sample is
    evaluable; the first violating theta is recorded per condition.
    """
    rows = sample(p, _GRID)
    first: dict[str, float | None] = {
        "in_domain": None,
        "rho_positive": None,
        "radius_positive": None,
        "monotone_factor_positive": None,
        "sin_phi_positive": None,
    }
    for row in rows:
        if not row.valid.in_domain:
            if first["in_domain"] is None:
                first["in_domain"] = row.theta
            continue
        if not row.valid.rho_positive and first["rho_positive"] is None:
            first["rho_positive"] = row.theta
        if not row.valid.radius_positive and first["radius_positive"] is None:
            first["radius_positive"] = row.theta
        if not row.valid.monotone_factor_positive and first["monotone_factor_positive"] is None:
            first["monotone_factor_positive"] = row.theta
        if not math.sin(row.phi) > 0.0 and first["sin_phi_positive"] is None:
            first["sin_phi_positive"] = row.theta

    def report(key: str) -> ConditionReport:
        return ConditionReport(first[key] is None, first[key])

    return ValidationReport(
        in_domain=report("in_domain"),
        rho_positive=report("rho_positive"),
        radius_positive=report("radius_positive"),
        monotone_factor_positive=report("monotone_factor_positive"),
        sin_phi_positive=report("sin_phi_positive"),
    )
