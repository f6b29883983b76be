"""The published large-dam models and the combined forecast workflow."""

from .descriptor import ProjectDescriptor, load_descriptor
from .published import (
    PublishedModelEnum,
    PublishedModel,
    PublishedPrediction,
    PublishedTerm,
    Sensitivity,
    load_published_models,
    prediction_surface,
    predict_published,
    published_model,
    published_model_id,
    sensitivity,
)
from .report import ForecastReport, RcfBranch, forecast_report
