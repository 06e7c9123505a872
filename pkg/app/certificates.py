"""Hilbert-series certificates for infinite dimensionality.

A truncation can never prove that a series has infinitely many nonzero coefficients, so a
positive outcome is always reported as ``CertifiedToOrder`` together with the order N.
"""

from __future__ import annotations

import logging
from enum import StrEnum
from fractions import Fraction

from pydantic import Field

from app.constants import DEFAULT_SERIES_ORDER
from app.exceptions import NonzeroConstantTermError, ParameterRangeError
from app.graded_dims import generator_series, hilbert_truncated, relation_series
from app.presentation import Presentation
from app.reports import ExactRational, Report
from app.truncated_series import TruncatedSeries, series_inverse, succeq

logger = logging.getLogger(__name__)


class CertificateKind(StrEnum):
    GS_INEQUALITY = "GSInequality"
    KEY_LEMMA = "KeyLemma"
    GOLOD_COROLLARY = "GolodCorollary"


class Verdict(StrEnum):
    CERTIFIED_TO_ORDER = "CertifiedToOrder"
    INCONCLUSIVE = "Inconclusive"
    VIOLATED = "Violated"


class Certificate(Report):
    """Outcome of a series certificate with the evidence it rests on."""

    kind: CertificateKind = Field(description="Which statement was checked")
    parameters: dict[str, str] = Field(description="Inputs of the check, rendered as text")
    order: int = Field(description="Truncation order N the verdict refers to")
    verdict: Verdict = Field(description="CertifiedToOrder, Inconclusive or Violated")
    coefficients: list[ExactRational] = Field(description="Coefficients of the certifying series up to t^N")
    checks: dict[str, bool] = Field(description="Individual conditions and whether they hold")
    notes: list[str] = Field(description="Caveats attached to the verdict", default_factory=list)

    @property
    def holds(self) -> bool:
        return self.verdict == Verdict.CERTIFIED_TO_ORDER


def _validate_order(order: int) -> None:
    if order < 0:
        raise ParameterRangeError(f"Truncation order must be nonnegative, got {order}")


def gs_series_check(presentation: Presentation, order: int = DEFAULT_SERIES_ORDER) -> Certificate:
    """Check (1 - h(X) + h(R)) * H(B) >= 1 coefficientwise up to ``order``."""
    _validate_order(order)
    h_x = generator_series(presentation, order)
    h_r = relation_series(presentation, order)
    product = (TruncatedSeries.one(order) - h_x + h_r) * hilbert_truncated(presentation, order)
    holds = succeq(product, TruncatedSeries.one(order))
    if not holds:
        logger.error("Series inequality violated: %s", product.render())
    return Certificate(
        kind=CertificateKind.GS_INEQUALITY,
        parameters={"hX": h_x.render(), "hR": h_r.render()},
        order=order,
        verdict=Verdict.CERTIFIED_TO_ORDER if holds else Verdict.VIOLATED,
        coefficients=list(product.coefficients),
        checks={"product_succeq_one": holds},
    )


def _validate_golod_parameters(k: int, epsilon: Fraction) -> None:
    if k < 1:
        raise ParameterRangeError(f"Number of generators must be at least 1, got {k}")
    if not 0 <= epsilon <= Fraction(k, 2):
        raise ParameterRangeError(f"epsilon must lie in [0, {Fraction(k, 2)}], got {epsilon}")


def golod_bound(k: int, epsilon: Fraction, n: int) -> Fraction:
    """epsilon^2 * (k - 2*epsilon)^(n-2), the admissible number of relations in degree n.

    Raises:
        ParameterRangeError: Unless k >= 1, 0 <= epsilon <= k/2 and n >= 2.
    """
    _validate_golod_parameters(k, epsilon)
    if n < 2:
        raise ParameterRangeError(f"Degree must be at least 2, got {n}")
    return epsilon**2 * (k - 2 * epsilon) ** (n - 2)


def golod_gamma(k: int, epsilon: Fraction, order: int) -> TruncatedSeries:
    """gamma = epsilon^2 t^2 / (1 - (k - 2*epsilon) t)."""
    _validate_golod_parameters(k, epsilon)
    _validate_order(order)
    return TruncatedSeries.of((Fraction(0) if n < 2 else golod_bound(k, epsilon, n) for n in range(order + 1)), order)


def golod_certificate(k: int, epsilon: Fraction, order: int = DEFAULT_SERIES_ORDER) -> Certificate:
    """Verify the closed forms behind Golod's corollary to order ``order``.

    With alpha = 1 - (k - epsilon) t and beta = epsilon t the checks are
    1 - kt + gamma = alpha^2 / (alpha + beta), (1 - kt + gamma)^-1 = 1/alpha + beta/alpha^2,
    nonnegativity of that inverse and a nonzero coefficient at t^N.
    """
    _validate_golod_parameters(k, epsilon)
    _validate_order(order)
    one = TruncatedSeries.one(order)
    t = TruncatedSeries.polynomial({1: 1}, order)
    gamma = golod_gamma(k, epsilon, order)
    alpha = one - t.scale(k - epsilon)
    beta = t.scale(epsilon)
    base = one - t.scale(k) + gamma
    alpha_inverse = series_inverse(alpha)
    certificate_series = alpha_inverse + beta * alpha_inverse * alpha_inverse

    checks = {
        "gamma_closed_form": gamma == beta * beta * series_inverse(alpha + beta),
        "base_equals_alpha_squared_over_alpha_plus_beta": base == alpha * alpha * series_inverse(alpha + beta),
        "inverse_identity": base * certificate_series == one,
        "inverse_nonnegative": certificate_series.is_nonnegative(),
        "tail_nonzero": certificate_series[order] != 0,
    }
    notes = []
    if epsilon == 0:
        notes.append("epsilon = 0 admits no relations; the inverse is the geometric series of the free algebra")
    verdict = Verdict.CERTIFIED_TO_ORDER if all(checks.values()) else Verdict.INCONCLUSIVE
    logger.info("Golod certificate k=%d epsilon=%s order=%d: %s", k, epsilon, order, verdict)
    return Certificate(
        kind=CertificateKind.GOLOD_COROLLARY,
        parameters={"k": str(k), "epsilon": str(epsilon), "gamma": gamma.render()},
        order=order,
        verdict=verdict,
        coefficients=list(certificate_series.coefficients),
        checks=checks,
        notes=notes,
    )


def key_lemma_check(presentation: Presentation, gamma: TruncatedSeries, order: int = DEFAULT_SERIES_ORDER) -> Certificate:
    """Check the hypotheses under which H(B) >= (1 - h(X) + gamma)^-1 >= 0 has infinite support.

    Conditions: gamma >= h(R); the inverse is nonnegative; and either gamma != h(X) (exact
    for finite X whenever the truncations differ) or a nonzero coefficient in the top
    quarter of the computed orders (a heuristic for a non-polynomial inverse).

    Raises:
        NonzeroConstantTermError: If gamma has a nonzero constant term.
    """
    _validate_order(order)
    if gamma[0] != 0:
        raise NonzeroConstantTermError("gamma must lie in t*Q[[t]]")
    order = min(order, gamma.order)
    gamma = gamma.truncate(order)
    h_x = generator_series(presentation, order)
    h_r = relation_series(presentation, order)
    inverse = series_inverse(TruncatedSeries.one(order) - h_x + gamma)

    checks = {
        "gamma_succeq_relations": succeq(gamma, h_r),
        "inverse_nonnegative": inverse.is_nonnegative(),
        "gamma_differs_from_generators": gamma != h_x,
        "tail_nonzero_heuristic": any(inverse[n] != 0 for n in range(order - order // 4, order + 1)),
    }
    infinite_support = checks["gamma_differs_from_generators"] or checks["tail_nonzero_heuristic"]
    certified = checks["gamma_succeq_relations"] and checks["inverse_nonnegative"] and infinite_support
    notes = ["H(B) >= (1 - h(X) + gamma)^-1 coefficientwise to the stated order"] if certified else []
    if not checks["gamma_differs_from_generators"]:
        notes.append("gamma agrees with h(X) to this order; the infinite support rests on the tail heuristic")
    return Certificate(
        kind=CertificateKind.KEY_LEMMA,
        parameters={"gamma": gamma.render(), "hX": h_x.render(), "hR": h_r.render()},
        order=order,
        verdict=Verdict.CERTIFIED_TO_ORDER if certified else Verdict.INCONCLUSIVE,
        coefficients=list(inverse.coefficients),
        checks=checks,
        notes=notes,
    )


class NegativeValueVerdict(StrEnum):
    OBSTRUCTION = "Obstruction"
    INCONCLUSIVE = "Inconclusive"


class NegativeValueReport(Report):
    """Search for epsilon in (0, 1) with 1 - hX(epsilon) + hR(epsilon) < 0."""

    witness: ExactRational | None = Field(description="First grid point with a negative value", default=None)
    value: ExactRational | None = Field(description="1 - hX + hR at the witness", default=None)
    verdict: NegativeValueVerdict = Field(description="Obstruction to a polynomial H(B) when a witness exists, else Inconclusive")
    grid: list[ExactRational] = Field(description="Grid points that were evaluated")

    @property
    def holds(self) -> bool:
        return self.witness is not None


def negative_value_test(h_x: TruncatedSeries, h_r: TruncatedSeries, grid: list[Fraction]) -> NegativeValueReport:
    """Find a point where 1 - h(X) + h(R) is negative, which rules out a polynomial H(B).

    Raises:
        ParameterRangeError: If a grid point lies outside (0, 1) or a coefficient is negative.
    """
    if not (h_x.is_nonnegative() and h_r.is_nonnegative()):
        raise ParameterRangeError("h(X) and h(R) must have nonnegative coefficients")
    for point in grid:
        if not 0 < point < 1:
            raise ParameterRangeError(f"Grid point {point} is outside (0, 1)")
    for point in grid:
        value = 1 - h_x.evaluate(point) + h_r.evaluate(point)
        if value < 0:
            return NegativeValueReport(witness=point, value=value, verdict=NegativeValueVerdict.OBSTRUCTION, grid=list(grid))
    return NegativeValueReport(verdict=NegativeValueVerdict.INCONCLUSIVE, grid=list(grid))


def presentation_negative_value_test(presentation: Presentation, grid: list[Fraction]) -> NegativeValueReport:
    order = max([*presentation.generator_counts(), *presentation.relation_counts(), 0])
    return negative_value_test(generator_series(presentation, order), relation_series(presentation, order), grid)
