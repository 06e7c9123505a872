"""Recurrences a_{n+2} >= d1*a_{n+1} - d2*a_n + 1 and their unbounded growth.

With D = d1^2 - 4*d2, lambda = (d1 - sqrt(D))/2 and mu = (d1 + sqrt(D))/2 the auxiliary
sequence b_n = a_{n+1} - lambda*a_n satisfies b_{n+1} - mu*b_n >= 1, and n <= b_n follows.
All of this is checked exactly in Q(sqrt(D)).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from pydantic import Field

from app.exceptions import ParameterRangeError, PreconditionError
from app.reports import ExactRational, Report

logger = logging.getLogger(__name__)


def _rational_sqrt(value: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None if it is irrational."""
    if value < 0:
        return None
    numerator, denominator = isqrt(value.numerator), isqrt(value.denominator)
    if numerator * numerator == value.numerator and denominator * denominator == value.denominator:
        return Fraction(numerator, denominator)
    return None


def _sign(value: Fraction) -> int:
    return (value > 0) - (value < 0)


@dataclass(frozen=True)
class QuadraticNumber:
    """p + q*sqrt(D) with rational p, q and a nonnegative rational D.

    A perfect-square D is folded into the rational part, so ``q == 0`` whenever the value
    is rational.
    """

    p: Fraction
    q: Fraction
    d: Fraction

    @classmethod
    def of(cls, p: int | Fraction, q: int | Fraction, d: int | Fraction) -> QuadraticNumber:
        p, q, d = Fraction(p), Fraction(q), Fraction(d)
        if d < 0:
            raise ParameterRangeError(f"Negative discriminant {d}")
        root = _rational_sqrt(d)
        if root is not None or q == 0:
            return cls(p + q * (root or 0), Fraction(0), d)
        return cls(p, q, d)

    @classmethod
    def rational(cls, value: int | Fraction) -> QuadraticNumber:
        return cls(Fraction(value), Fraction(0), Fraction(0))

    def is_rational(self) -> bool:
        return self.q == 0

    def _discriminant_with(self, other: QuadraticNumber) -> Fraction:
        if self.q == 0:
            return other.d
        if other.q != 0 and other.d != self.d:
            raise ParameterRangeError(f"Incompatible discriminants {self.d} and {other.d}")
        return self.d

    def __add__(self, other: QuadraticNumber | int | Fraction) -> QuadraticNumber:
        other = _lift(other)
        return QuadraticNumber.of(self.p + other.p, self.q + other.q, self._discriminant_with(other))

    def __sub__(self, other: QuadraticNumber | int | Fraction) -> QuadraticNumber:
        return self + (-_lift(other))

    def __neg__(self) -> QuadraticNumber:
        return QuadraticNumber(-self.p, -self.q, self.d)

    def __mul__(self, other: QuadraticNumber | int | Fraction) -> QuadraticNumber:
        other = _lift(other)
        d = self._discriminant_with(other)
        return QuadraticNumber.of(self.p * other.p + self.q * other.q * d, self.p * other.q + self.q * other.p, d)

    __radd__ = __add__
    __rmul__ = __mul__

    def sign(self) -> int:
        """Sign of p + q*sqrt(D) without leaving the rationals."""
        sign_p, sign_q = _sign(self.p), _sign(self.q)
        if sign_q == 0 or self.d == 0:
            return sign_p
        if sign_p == 0 or sign_p == sign_q:
            return sign_q
        # opposite signs: compare p^2 with q^2 * D
        return sign_p * _sign(self.p * self.p - self.q * self.q * self.d)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QuadraticNumber | int | Fraction):
            return NotImplemented
        return (self - _lift(other)).sign() == 0

    def __hash__(self) -> int:
        return hash((self.p, self.q, self.d if self.q else 0))

    def __ge__(self, other: QuadraticNumber | int | Fraction) -> bool:
        return (self - _lift(other)).sign() >= 0

    def __le__(self, other: QuadraticNumber | int | Fraction) -> bool:
        return (self - _lift(other)).sign() <= 0

    def __gt__(self, other: QuadraticNumber | int | Fraction) -> bool:
        return (self - _lift(other)).sign() > 0

    def __lt__(self, other: QuadraticNumber | int | Fraction) -> bool:
        return (self - _lift(other)).sign() < 0

    def __str__(self) -> str:
        if self.q == 0:
            return str(self.p)
        root = f"sqrt({self.d})"
        rational = "" if self.p == 0 else f"{self.p} "
        sign = "-" if self.q < 0 else ("+" if rational else "")
        magnitude = abs(self.q)
        coefficient = "" if magnitude == 1 else f"{magnitude}*"
        return f"{rational}{sign}{' ' if rational else ''}{coefficient}{root}"


def _lift(value: QuadraticNumber | int | Fraction) -> QuadraticNumber:
    return value if isinstance(value, QuadraticNumber) else QuadraticNumber.rational(value)


class PreconditionReport(Report):
    d1_condition: bool = Field(description="d1 >= min(2, d2 + 1)")
    discriminant_condition: bool = Field(description="d1^2 >= 4*d2")
    holds: bool = Field(description="Both conditions")
    diagnostics: list[str] = Field(description="Human readable reasons for a failure", default_factory=list)


def check_preconditions(d1: Fraction, d2: Fraction) -> PreconditionReport:
    """Evaluate both hypotheses exactly; no square root is taken."""
    d1_condition = d1 >= min(Fraction(2), d2 + 1)
    discriminant_condition = d1 * d1 >= 4 * d2
    diagnostics = []
    if not d1_condition:
        diagnostics.append(f"d1 = {d1} < min(2, d2 + 1) = {min(Fraction(2), d2 + 1)}")
    if not discriminant_condition:
        diagnostics.append(f"d1^2 = {d1 * d1} < 4*d2 = {4 * d2}")
    return PreconditionReport(d1_condition=d1_condition, discriminant_condition=discriminant_condition, holds=d1_condition and discriminant_condition, diagnostics=diagnostics)


@dataclass(frozen=True)
class SerreInstance:
    """Coefficients, starting value a_1 and horizon of one recurrence."""

    d1: Fraction
    d2: Fraction
    a1: Fraction
    steps: int

    def __post_init__(self) -> None:
        if self.a1 < 0:
            raise ParameterRangeError(f"a1 must be nonnegative, got {self.a1}")
        if self.steps < 1:
            raise ParameterRangeError(f"steps must be positive, got {self.steps}")
        report = check_preconditions(self.d1, self.d2)
        if not report.holds:
            raise PreconditionError("; ".join(report.diagnostics))

    @property
    def discriminant(self) -> Fraction:
        return self.d1 * self.d1 - 4 * self.d2

    @property
    def lam(self) -> QuadraticNumber:
        return QuadraticNumber.of(self.d1 / 2, Fraction(-1, 2), self.discriminant)

    @property
    def mu(self) -> QuadraticNumber:
        return QuadraticNumber.of(self.d1 / 2, Fraction(1, 2), self.discriminant)


def sequence_with_slack(instance: SerreInstance, extras: list[Fraction]) -> list[Fraction]:
    """a_0 = 0, a_1 given, a_{n+2} = d1*a_{n+1} - d2*a_n + 1 + extras[n] (missing extras are 0)."""
    if any(e < 0 for e in extras):
        raise ParameterRangeError("Slack terms must be nonnegative")
    sequence = [Fraction(0), instance.a1]
    for n in range(instance.steps - 1):
        extra = extras[n] if n < len(extras) else Fraction(0)
        sequence.append(instance.d1 * sequence[n + 1] - instance.d2 * sequence[n] + 1 + extra)
    return sequence


def minimal_sequence(instance: SerreInstance) -> list[Fraction]:
    """The equality case: a_0..a_steps."""
    return sequence_with_slack(instance, [])


def is_admissible(instance: SerreInstance, sequence: list[Fraction]) -> bool:
    """Whether a_0 = 0, a_1 >= 0 and every recurrence inequality holds."""
    if len(sequence) < 2 or sequence[0] != 0 or sequence[1] < 0:
        return False
    return all(sequence[n + 2] >= instance.d1 * sequence[n + 1] - instance.d2 * sequence[n] + 1 for n in range(len(sequence) - 2))


class GrowthRow(Report):
    n: int = Field(description="Index n")
    a: ExactRational = Field(description="a_n")
    b: str = Field(description="b_n = a_{n+1} - lambda*a_n")
    lower_bound_holds: bool = Field(description="n <= b_n")
    step_holds: bool | None = Field(description="b_{n+1} - mu*b_n >= 1, when b_{n+1} is available", default=None)


class GrowthReport(Report):
    d1: ExactRational = Field(description="d1")
    d2: ExactRational = Field(description="d2")
    lam: str = Field(description="lambda = (d1 - sqrt(d1^2 - 4 d2)) / 2")
    mu: str = Field(description="mu = (d1 + sqrt(d1^2 - 4 d2)) / 2")
    sequence: list[ExactRational] = Field(description="a_0..a_steps")
    rows: list[GrowthRow] = Field(description="Per-index checks")
    checks: dict[str, bool] = Field(description="Global identities and bounds")

    @property
    def holds(self) -> bool:
        return all(self.checks.values()) and all(row.lower_bound_holds and row.step_holds is not False for row in self.rows)

    def failures(self) -> list[str]:
        failed = [f"{name} fails" for name, ok in self.checks.items() if not ok]
        failed.extend(f"n={row.n}: n <= b_n fails with b_n = {row.b}" for row in self.rows if not row.lower_bound_holds)
        failed.extend(f"n={row.n}: b_(n+1) - mu*b_n >= 1 fails" for row in self.rows if row.step_holds is False)
        return failed


def growth_witness(instance: SerreInstance, sequence: list[Fraction] | None = None) -> GrowthReport:
    """Tabulate b_n = a_{n+1} - lambda*a_n and check the growth bound n <= b_n.

    Args:
        instance: Recurrence coefficients and horizon.
        sequence: An admissible sequence; the minimal one by default.

    Raises:
        PreconditionError: If ``sequence`` does not satisfy the recurrence hypotheses.
    """
    sequence = minimal_sequence(instance) if sequence is None else sequence
    if not is_admissible(instance, sequence):
        raise PreconditionError("Sequence violates a_0 = 0, a_1 >= 0 or the recurrence inequality")
    lam, mu = instance.lam, instance.mu
    root = QuadraticNumber.of(0, 1, instance.discriminant)
    b = [QuadraticNumber.rational(sequence[n + 1]) - lam * sequence[n] for n in range(len(sequence) - 1)]
    rows = [
        GrowthRow(
            n=n,
            a=sequence[n],
            b=str(b[n]),
            lower_bound_holds=b[n] >= n,
            step_holds=(b[n + 1] - mu * b[n] >= 1) if n + 1 < len(b) else None,
        )
        for n in range(len(b))
    ]
    checks = {
        "b0_nonnegative": b[0] >= 0,
        "mu_at_least_one": mu >= 1,
        "sqrt_discriminant_at_least_two_minus_d1": root >= 2 - instance.d1,
        "lambda_times_mu_is_d2": lam * mu == instance.d2,
        "lambda_plus_mu_is_d1": lam + mu == instance.d1,
    }
    report = GrowthReport(d1=instance.d1, d2=instance.d2, lam=str(lam), mu=str(mu), sequence=sequence, rows=rows, checks=checks)
    logger.debug("Growth witness for d1=%s d2=%s: %s", instance.d1, instance.d2, "holds" if report.holds else "fails")
    return report


def serre_instance_for_presentation(generator_count: int, relation_count: int, steps: int) -> SerreInstance:
    """The recurrence with d1 = |X| and d2 = |R|, starting from a_1 = 1.

    Raises:
        PreconditionError: If |X| and |R| violate the hypotheses.
    """
    return SerreInstance(Fraction(generator_count), Fraction(relation_count), Fraction(1), steps)
