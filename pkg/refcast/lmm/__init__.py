"""Random-intercept linear mixed models: specification, design, fitting, prediction
and stepwise selection."""

from .builder import ModelSpecBuilder
from .design import Design, DroppedRow, build_design, design_row, record_values
from .fit import FittedModel, MethodEnum, fit, fit_spec, profile_loglik
from .predict import NO_RANDOM_EFFECT, PredictionResult, back_transform, fitted_values, predict
from .spec import INTERCEPT, InteractionTerm, ModelSpec, Term
from .stepwise import EliminationStep, backward_eliminate, stepwise
from .variables import Variable, VariableEnum, variable_name
