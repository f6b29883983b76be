"""The two-pronged forecast: reference class uplift plus the published models."""

import json
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from ..exceptions import RefcastError, ValidationError
from ..rcf.benchmarks import LargeDamSummary
from ..rcf.uplift import debias, required_uplift
from ..rcf.viability import ViabilityVerdict, viability
from ..refdata.records import ReferenceClass
from ..stats.distribution import EmpiricalDistribution
from .descriptor import ProjectDescriptor
from .published import PublishedModelEnum, PublishedPrediction, published_model_id, predict_published

logger = logging.getLogger(__name__)

CONVENTION_CAVEAT = "all logarithms natural; long-term inflation in percent per year"
FIXED_EFFECTS_CAVEAT = "published models applied with fixed effects only; no country random intercept was published"
NO_BCR_CAVEAT = "no BCR supplied"
VIABILITY_CAVEAT = "viability uses the mean cost overrun of the reference class as the expected overrun factor"


@dataclass(frozen=True)
class RcfBranch:
    """Reference class uplifts at one acceptable risk and the de-biased estimates."""

    acceptable_risk: float
    reference: str
    cost_uplift: float
    schedule_uplift: float
    expected_cost_overrun: float
    debiased_budget: Optional[float] = None
    debiased_schedule_months: Optional[float] = None

    def to_dict(self) -> Dict[str, object]:
        return {
            "acceptable_risk": self.acceptable_risk,
            "reference": self.reference,
            "cost_uplift": self.cost_uplift,
            "schedule_uplift": self.schedule_uplift,
            "expected_cost_overrun": self.expected_cost_overrun,
            "debiased_budget": self.debiased_budget,
            "debiased_schedule_months": self.debiased_schedule_months,
        }


@dataclass(frozen=True)
class ForecastReport:
    """The forecast of one project at one acceptable risk."""

    project: str
    currency: str
    rcf_branch: Optional[RcfBranch]
    model_branch: Tuple[PublishedPrediction, ...]
    viability: Optional[ViabilityVerdict]
    caveats: Tuple[str, ...] = field(default_factory=tuple)

    def to_dict(self) -> Dict[str, object]:
        return {
            "project": self.project,
            "currency": self.currency,
            "rcf_branch": None if self.rcf_branch is None else self.rcf_branch.to_dict(),
            "model_branch": [p.to_dict() for p in self.model_branch],
            "viability": None if self.viability is None else self.viability.to_dict(),
            "caveats": list(self.caveats),
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=indent)

    def to_csv_rows(self) -> List[Tuple[str, str, object]]:
        """Flat (section, quantity, value) rows."""
        rows: List[Tuple[str, str, object]] = []
        if self.rcf_branch is not None:
            for key, value in self.rcf_branch.to_dict().items():
                rows.append(("rcf", key, value))
        for p in self.model_branch:
            rows.append((p.model_id.value, "linear_predictor", p.linear_predictor))
            rows.append((p.model_id.value, "value", p.value))
        if self.viability is not None:
            rows.append(("viability", "debiased_bcr", self.viability.debiased_bcr))
            rows.append(("viability", "stranded", self.viability.stranded))
        for caveat in self.caveats:
            rows.append(("caveat", "note", caveat))
        return rows

    def to_text(self) -> str:
        lines = [f"Forecast for {self.project}"]
        r = self.rcf_branch
        if r is not None:
            lines.append(f"Reference class: {r.reference}")
            lines.append(f"  acceptable risk:       {r.acceptable_risk:.0%}")
            lines.append(f"  cost uplift:           {r.cost_uplift:.1%}")
            lines.append(f"  schedule uplift:       {r.schedule_uplift:.1%}")
            if r.debiased_budget is not None:
                lines.append(f"  de-biased budget:      {r.debiased_budget:,.1f} {self.currency}".rstrip())
            if r.debiased_schedule_months is not None:
                lines.append(f"  de-biased schedule:    {r.debiased_schedule_months:.1f} months")
        if self.model_branch:
            lines.append("Published models (fixed effects):")
            for p in self.model_branch:
                shown = f"{p.overrun_pct:.1f} % over" if p.is_ratio else f"{p.value:.1f} months"
                lines.append(f"  {p.model_id.value:<20} {p.response} = {p.linear_predictor:.4f} -> {shown}")
        if self.viability is not None:
            verdict = "stranded" if self.viability.stranded else "viable"
            lines.append(f"Viability: de-biased BCR {self.viability.debiased_bcr:.3f} ({verdict})")
        if self.caveats:
            lines.append("Caveats:")
            lines.extend(f"  - {c}" for c in self.caveats)
        return "\n".join(lines)


def _distributions(
    reference: Optional[ReferenceClass | LargeDamSummary],
) -> Tuple[EmpiricalDistribution, EmpiricalDistribution]:
    if reference is None:
        reference = LargeDamSummary.load()
    if isinstance(reference, LargeDamSummary):
        return reference.cost, reference.schedule
    return reference.cost_distribution(), reference.schedule_distribution()


def _rcf_branch(
    descriptor: ProjectDescriptor, reference: Optional[ReferenceClass | LargeDamSummary], acceptable_risk: float
) -> RcfBranch:
    cost, schedule = _distributions(reference)
    cost_uplift = required_uplift(cost, acceptable_risk)
    schedule_uplift = required_uplift(schedule, acceptable_risk)
    budget = months = None
    if descriptor.estimated_cost is not None:
        budget = debias(descriptor.estimated_cost, cost_uplift)
    if descriptor.estimated_schedule_months is not None:
        months = debias(descriptor.estimated_schedule_months, schedule_uplift)
    return RcfBranch(
        acceptable_risk=acceptable_risk,
        reference=cost.label,
        cost_uplift=cost_uplift,
        schedule_uplift=schedule_uplift,
        expected_cost_overrun=cost.mean,
        debiased_budget=budget,
        debiased_schedule_months=months,
    )


def _published_gap_caveats(descriptor: ProjectDescriptor, predictions: Sequence[PublishedPrediction]) -> List[str]:
    """Caveats where a published headline number differs from the fixed-effects value."""
    quoted = LargeDamSummary.load().quoted
    by_id = {p.model_id: p for p in predictions}
    caveats = []
    m1 = by_id.get(PublishedModelEnum.M1_COST_OVERRUN)
    if m1 is not None and descriptor.country == "PAK":
        caveats.append(
            f"published Pakistan cost overrun {quoted['m1_pakistan_overrun']:.0%} is not reproduced by "
            f"fixed effects ({m1.overrun_pct:.1f} %); the gap is attributed to the unpublished country intercept"
        )
    m3 = by_id.get(PublishedModelEnum.M3_SCHEDULE_SLIP)
    if m3 is not None and descriptor.country == "USA":
        caveats.append(
            f"published United States schedule slippage {100 * quoted['m3_us_slippage']:.2f} % is inconsistent "
            f"with the printed coefficients ({m3.overrun_pct:.1f} %); not reconciled"
        )
    return caveats


def forecast_report(
    descriptor: ProjectDescriptor,
    reference: Optional[ReferenceClass | LargeDamSummary] = None,
    acceptable_risk: float = 0.2,
    models: Optional[Sequence[str | PublishedModelEnum]] = None,
    benefit_shortfall: float = 0.0,
) -> ForecastReport:
    """Forecast a project with the outside view and the published models.

    Parameters
    ----------
    descriptor : ProjectDescriptor
        The project.
    reference : ReferenceClass | LargeDamSummary, optional
        Reference class for the uplift branch; the bundled summary when None.
    acceptable_risk : float, optional
        Chance of exceeding the de-biased estimates, by default 0.2.
    models : Sequence[str | PublishedModelEnum], optional
        Published models to evaluate. When None every model is tried and
        those the descriptor cannot feed are skipped with a caveat; models
        named explicitly raise instead.
    benefit_shortfall : float, optional
        Fractional benefit shortfall passed to the viability check.

    Returns
    -------
    ForecastReport

    Raises
    ------
    ValidationError
        If neither branch can be computed, or an explicitly requested model fails.
    """
    if not 0.0 < acceptable_risk < 1.0:
        raise ValueError(f"acceptable_risk must be in (0, 1), got {acceptable_risk}")
    caveats = [CONVENTION_CAVEAT]

    rcf = None
    if descriptor.estimated_cost is not None or descriptor.estimated_schedule_months is not None:
        rcf = _rcf_branch(descriptor, reference, acceptable_risk)
        logger.debug("RCF branch for %s: %s", descriptor.name, rcf)
    else:
        caveats.append("reference class branch skipped: no estimated cost or schedule supplied")

    explicit = models is not None
    ids = [published_model_id(m) for m in models] if explicit else list(PublishedModelEnum)
    predictions: List[PublishedPrediction] = []
    for model_id in ids:
        try:
            prediction = predict_published(model_id, descriptor)
        except RefcastError as e:
            if explicit:
                raise
            caveats.append(f"{model_id.value} skipped: {e}")
            continue
        logger.debug("Model branch %s: %s", model_id.value, prediction)
        predictions.append(prediction)
        caveats.extend(c for c in prediction.caveats if c not in caveats)
    if predictions:
        caveats.append(FIXED_EFFECTS_CAVEAT)
        caveats.extend(_published_gap_caveats(descriptor, predictions))

    if rcf is None and not predictions:
        raise ValidationError(f"neither branch computable for {descriptor.name}")

    verdict = None
    if descriptor.estimated_bcr is None:
        caveats.append(NO_BCR_CAVEAT)
    elif rcf is not None:
        verdict = viability(descriptor.estimated_bcr, rcf.expected_cost_overrun, benefit_shortfall)
        caveats.append(VIABILITY_CAVEAT)

    return ForecastReport(
        project=descriptor.name,
        currency=descriptor.currency,
        rcf_branch=rcf,
        model_branch=tuple(predictions),
        viability=verdict,
        caveats=tuple(caveats),
    )
